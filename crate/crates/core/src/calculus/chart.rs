use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::{GaussianRational, Ring, ScalarField};

/// A single global coordinate chart.
///
/// Cylinder charts `M x R` carry the time coordinate `t` last and, in their
/// scalar ring, the formal generator standing for `e^t`.
#[derive(Clone)]
pub struct Chart {
    inner: Arc<ChartInner>,
}

struct ChartInner {
    name: String,
    ring: Arc<Ring>,
}

pub const TIME: &str = "t";

impl Chart {
    pub fn new(name: &str, coords: &[&str]) -> Result<Chart> {
        Self::build(name, coords.iter().map(|s| s.to_string()).collect(), false)
    }

    /// `M x R` over the given base coordinates; `t` is appended.
    pub fn cylinder(name: &str, base: &[&str]) -> Result<Chart> {
        Self::build(name, base.iter().map(|s| s.to_string()).collect(), true)
    }

    fn build(name: &str, coords: Vec<String>, cylinder: bool) -> Result<Chart> {
        if coords.is_empty() && !cylinder {
            return Err(Error::Shape("chart needs at least one coordinate".into()));
        }
        for (i, c) in coords.iter().enumerate() {
            if coords[..i].contains(c) {
                return Err(Error::Shape(format!("duplicate coordinate `{c}`")));
            }
            if cylinder && c == TIME {
                return Err(Error::Shape(format!(
                    "coordinate `{TIME}` is reserved on cylinders"
                )));
            }
        }
        let ring = if cylinder {
            Ring::cylinder(coords, TIME)
        } else {
            Ring::new(coords)
        };
        Ok(Chart {
            inner: Arc::new(ChartInner {
                name: name.to_string(),
                ring,
            }),
        })
    }

    /// The cylinder `self x R`.
    pub fn cylinder_over(&self) -> Result<Chart> {
        if self.is_cylinder() {
            return Err(Error::Shape("chart is already a cylinder".into()));
        }
        let base: Vec<&str> = self.coords().iter().map(String::as_str).collect();
        Self::cylinder(&format!("{}xR", self.name()), &base)
    }

    pub fn name(&self) -> &str {
        &self.inner.name
    }

    pub fn dim(&self) -> usize {
        self.inner.ring.ncoords()
    }

    pub fn coords(&self) -> &[String] {
        self.inner.ring.coord_names()
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.inner.ring
    }

    pub fn is_cylinder(&self) -> bool {
        self.inner.ring.is_cylinder()
    }

    /// Index of `t` on cylinder charts.
    pub fn time_index(&self) -> Option<usize> {
        self.inner.ring.time_index()
    }

    pub fn coord_index(&self, name: &str) -> Option<usize> {
        self.inner.ring.coord_index(name)
    }

    pub fn zero(&self) -> ScalarField {
        ScalarField::zero(self.ring())
    }

    pub fn one(&self) -> ScalarField {
        ScalarField::one(self.ring())
    }

    pub fn int(&self, n: i64) -> ScalarField {
        ScalarField::from_int(self.ring(), n)
    }

    pub fn constant(&self, c: GaussianRational) -> ScalarField {
        ScalarField::constant(self.ring(), c)
    }

    pub fn rational(&self, num: i64, den: i64) -> ScalarField {
        self.constant(GaussianRational::from_ratio(num, den))
    }

    /// The coordinate function `x^i`.
    pub fn coord(&self, i: usize) -> ScalarField {
        assert!(i < self.dim(), "coordinate index out of range");
        ScalarField::var(self.ring(), i)
    }

    /// `e^{k t}`; cylinder charts only.
    pub fn exp_t(&self, k: i32) -> Result<ScalarField> {
        if !self.is_cylinder() {
            return Err(Error::NotCylinder);
        }
        ScalarField::exp_t(self.ring(), k)
    }

    pub fn ensure_same(&self, other: &Chart) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ChartMismatch)
        }
    }
}

impl PartialEq for Chart {
    fn eq(&self, other: &Chart) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.name == other.inner.name && self.inner.ring == other.inner.ring)
    }
}

impl Eq for Chart {}

impl fmt::Debug for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Chart({}; {})", self.name(), self.coords().join(" "))
    }
}
