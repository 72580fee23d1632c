use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::gaussian::GaussianRational;
use super::poly::{gcd, Poly};
use crate::error::{Error, Result};

/// Name used for the formal exponential generator `u = e^t`.
pub const EXP_NAME: &str = "exp(t)";

/// Variable context shared by all scalars of one chart.
///
/// Variables are the chart coordinates in order; on cylinder charts the time
/// coordinate `t` is the last coordinate and the formal generator `u`
/// standing for `e^t` follows as an extra, non-coordinate variable.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Ring {
    names: Vec<String>,
    coords: usize,
    time: Option<usize>,
}

impl Ring {
    pub fn new(coords: Vec<String>) -> Arc<Ring> {
        let n = coords.len();
        Arc::new(Ring {
            names: coords,
            coords: n,
            time: None,
        })
    }

    /// Context for `M x R`: `base` coordinates, then `t`, then `exp(t)`.
    pub fn cylinder(base: Vec<String>, time_name: &str) -> Arc<Ring> {
        let mut names = base;
        names.push(time_name.to_string());
        let coords = names.len();
        names.push(EXP_NAME.to_string());
        Arc::new(Ring {
            names,
            coords,
            time: Some(coords - 1),
        })
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    /// Number of differentiable coordinates (excludes the generator).
    pub fn ncoords(&self) -> usize {
        self.coords
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn coord_names(&self) -> &[String] {
        &self.names[..self.coords]
    }

    pub fn is_cylinder(&self) -> bool {
        self.time.is_some()
    }

    pub fn time_index(&self) -> Option<usize> {
        self.time
    }

    pub fn exp_index(&self) -> Option<usize> {
        self.time.map(|_| self.coords)
    }

    pub fn coord_index(&self, name: &str) -> Option<usize> {
        self.coord_names().iter().position(|n| n == name)
    }
}

/// An exact rational function over Q(i) in the chart variables.
///
/// Invariants: the denominator is nonzero, numerator and denominator are
/// coprime, and the denominator's leading coefficient (lex order) is 1.
/// Zero is `0/1`. Equal functions therefore compare equal structurally.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ScalarField {
    ring: Arc<Ring>,
    num: Poly,
    den: Poly,
}

/// The four field operations accepted by [`ScalarField::ring_op`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl ScalarField {
    pub fn zero(ring: &Arc<Ring>) -> Self {
        ScalarField {
            ring: ring.clone(),
            num: Poly::zero(ring.nvars()),
            den: Poly::one(ring.nvars()),
        }
    }

    pub fn one(ring: &Arc<Ring>) -> Self {
        ScalarField::constant(ring, GaussianRational::one())
    }

    pub fn from_int(ring: &Arc<Ring>, n: i64) -> Self {
        ScalarField::constant(ring, GaussianRational::from_int(n))
    }

    pub fn constant(ring: &Arc<Ring>, c: GaussianRational) -> Self {
        ScalarField {
            ring: ring.clone(),
            num: Poly::constant(ring.nvars(), c),
            den: Poly::one(ring.nvars()),
        }
    }

    /// The `i`-th ring variable (a coordinate, or the generator on cylinders).
    pub fn var(ring: &Arc<Ring>, i: usize) -> Self {
        ScalarField {
            ring: ring.clone(),
            num: Poly::var(ring.nvars(), i),
            den: Poly::one(ring.nvars()),
        }
    }

    /// `e^{k t}` on a cylinder ring.
    pub fn exp_t(ring: &Arc<Ring>, k: i32) -> Result<Self> {
        let u = ring
            .exp_index()
            .ok_or_else(|| Error::UnknownCoordinate(EXP_NAME.to_string()))?;
        let n = ring.nvars();
        let mut m = vec![0; n];
        m[u] = k.unsigned_abs();
        let p = Poly::monomial(n, m, GaussianRational::one());
        Ok(if k >= 0 {
            ScalarField::from_poly(ring, p)
        } else {
            ScalarField {
                ring: ring.clone(),
                num: Poly::one(n),
                den: p,
            }
        })
    }

    pub fn from_poly(ring: &Arc<Ring>, p: Poly) -> Self {
        debug_assert_eq!(p.nvars(), ring.nvars());
        ScalarField {
            ring: ring.clone(),
            num: p,
            den: Poly::one(ring.nvars()),
        }
    }

    pub fn from_fraction(ring: &Arc<Ring>, num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(ScalarField::normalized(ring.clone(), num, den))
    }

    fn normalized(ring: Arc<Ring>, num: Poly, den: Poly) -> Self {
        let n = ring.nvars();
        if num.is_zero() {
            return ScalarField {
                ring,
                num: Poly::zero(n),
                den: Poly::one(n),
            };
        }
        if den.is_constant() {
            let inv = den.constant_term().inv().expect("nonzero denominator");
            return ScalarField {
                ring,
                num: num.scale(&inv),
                den: Poly::one(n),
            };
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.exact_div(&g).expect("gcd divides numerator"),
                den.exact_div(&g).expect("gcd divides denominator"),
            )
        };
        let lc = den.leading_coeff();
        if lc.is_one() {
            ScalarField { ring, num, den }
        } else {
            let inv = lc.inv().unwrap();
            ScalarField {
                ring,
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    /// Reinterprets this scalar in `target`, whose variable list must start
    /// with this ring's variables (e.g. a base chart inside its cylinder).
    pub fn embed(&self, target: &Arc<Ring>) -> Result<ScalarField> {
        if Arc::ptr_eq(&self.ring, target) {
            return Ok(self.clone());
        }
        let names = self.ring.names();
        if target.names().len() < names.len() || &target.names()[..names.len()] != names {
            return Err(Error::ContextMismatch);
        }
        if self.ring.is_cylinder() && target.names() != names {
            return Err(Error::ContextMismatch);
        }
        let n = target.nvars();
        Ok(ScalarField {
            ring: target.clone(),
            num: self.num.extend_vars(n),
            den: self.den.extend_vars(n),
        })
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The constant value, if this scalar is constant.
    pub fn as_constant(&self) -> Option<GaussianRational> {
        self.is_constant().then(|| self.num.constant_term())
    }

    /// Degree used for pivot ranking: numerator plus denominator degree.
    pub fn total_degree(&self) -> u32 {
        self.num.total_degree() + self.den.total_degree()
    }

    /// Range of `u`-exponents `[lo, hi]` when this is a finite Laurent
    /// combination in the exponential generator; `None` off cylinders.
    pub fn exp_degree_range(&self) -> Option<(i64, i64)> {
        let u = self.ring.exp_index()?;
        let shift = self.den.min_degree_in(u) as i64;
        if self.den.degree_in(u) as i64 != shift {
            return None;
        }
        if self.num.is_zero() {
            return Some((0, 0));
        }
        Some((
            self.num.min_degree_in(u) as i64 - shift,
            self.num.degree_in(u) as i64 - shift,
        ))
    }

    fn check_ring(&self, other: &ScalarField) -> Result<()> {
        if Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    /// Checked field operation.
    pub fn ring_op(&self, other: &ScalarField, op: RingOp) -> Result<ScalarField> {
        self.check_ring(other)?;
        Ok(match op {
            RingOp::Add => self.add_impl(other),
            RingOp::Sub => self.add_impl(&other.neg_impl()),
            RingOp::Mul => self.mul_impl(other),
            RingOp::Div => {
                let inv = other.inv()?;
                self.mul_impl(&inv)
            }
        })
    }

    pub fn inv(&self) -> Result<ScalarField> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(ScalarField::normalized(
            self.ring.clone(),
            self.den.clone(),
            self.num.clone(),
        ))
    }

    fn add_impl(&self, other: &ScalarField) -> ScalarField {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && other.den.is_one() {
            return ScalarField {
                ring: self.ring.clone(),
                num: self.num.add(&other.num),
                den: self.den.clone(),
            };
        }
        if self.den == other.den {
            return ScalarField::normalized(
                self.ring.clone(),
                self.num.add(&other.num),
                self.den.clone(),
            );
        }
        if other.den.is_one() {
            return ScalarField {
                ring: self.ring.clone(),
                num: self.num.add(&other.num.mul(&self.den)),
                den: self.den.clone(),
            };
        }
        if self.den.is_one() {
            return other.add_impl(self);
        }
        // Both inputs are reduced, so only the shared part of the
        // denominators can cancel against the new numerator.
        let g = gcd(&self.den, &other.den);
        let d1 = self.den.exact_div(&g).unwrap();
        let d2 = other.den.exact_div(&g).unwrap();
        let num = self.num.mul(&d2).add(&other.num.mul(&d1));
        if num.is_zero() {
            return ScalarField::zero(&self.ring);
        }
        let h = if g.is_constant() {
            g.clone()
        } else {
            gcd(&num, &g)
        };
        let (num, g) = if h.is_constant() {
            (num, g)
        } else {
            (num.exact_div(&h).unwrap(), g.exact_div(&h).unwrap())
        };
        let den = d1.mul(&d2).mul(&g);
        let lc = den.leading_coeff();
        let inv = lc.inv().unwrap();
        ScalarField {
            ring: self.ring.clone(),
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    fn neg_impl(&self) -> ScalarField {
        ScalarField {
            ring: self.ring.clone(),
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    fn mul_impl(&self, other: &ScalarField) -> ScalarField {
        if self.is_zero() || other.is_zero() {
            return ScalarField::zero(&self.ring);
        }
        if self.den.is_one() && other.den.is_one() {
            return ScalarField {
                ring: self.ring.clone(),
                num: self.num.mul(&other.num),
                den: self.den.clone(),
            };
        }
        // Cross-cancel; inputs are already reduced.
        let g1 = gcd(&self.num, &other.den);
        let g2 = gcd(&other.num, &self.den);
        let n1 = self.num.exact_div(&g1).unwrap();
        let d2 = other.den.exact_div(&g1).unwrap();
        let n2 = other.num.exact_div(&g2).unwrap();
        let d1 = self.den.exact_div(&g2).unwrap();
        let num = n1.mul(&n2);
        let den = d1.mul(&d2);
        let lc = den.leading_coeff();
        if lc.is_one() {
            ScalarField {
                ring: self.ring.clone(),
                num,
                den,
            }
        } else {
            let inv = lc.inv().unwrap();
            ScalarField {
                ring: self.ring.clone(),
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> ScalarField {
        if c.is_zero() {
            return ScalarField::zero(&self.ring);
        }
        ScalarField {
            ring: self.ring.clone(),
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn pow(&self, e: i32) -> Result<ScalarField> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        let e = e as u32;
        Ok(ScalarField {
            ring: self.ring.clone(),
            num: self.num.pow(e),
            den: self.den.pow(e),
        })
    }

    pub fn conj(&self) -> ScalarField {
        ScalarField::normalized(self.ring.clone(), self.num.conj(), self.den.conj())
    }

    fn poly_derivative(&self, p: &Poly, coord: usize) -> Poly {
        let d = p.derivative(coord);
        match self.ring.time_index() {
            Some(t) if t == coord => d.add(&p.euler(self.ring.exp_index().unwrap())),
            _ => d,
        }
    }

    /// Partial derivative along coordinate index `coord`. On cylinders the
    /// time derivative also acts on the generator by `du/dt = u`.
    pub fn partial(&self, coord: usize) -> ScalarField {
        assert!(coord < self.ring.ncoords(), "coordinate index out of range");
        if self.num.is_zero() {
            return self.clone();
        }
        let dn = self.poly_derivative(&self.num, coord);
        if self.den.is_one() {
            return ScalarField {
                ring: self.ring.clone(),
                num: dn,
                den: self.den.clone(),
            };
        }
        // With g = gcd(D, D'), n/D has derivative (n' k - n e) / (D k) for
        // k = D/g, e = D'/g. An irreducible p | D with p not dividing p'
        // occurs to power a - 1 in g, leaving p | k, p not dividing e, so p
        // cannot divide the new numerator. Only factors with p | p' may
        // cancel: those free of the coordinate and, on the time direction,
        // the generator itself.
        let dd = self.poly_derivative(&self.den, coord);
        let g = gcd(&self.den, &dd);
        let k = self.den.exact_div(&g).expect("gcd divides denominator");
        let e = dd.exact_div(&g).expect("gcd divides derivative");
        let num = dn.mul(&k).sub(&self.num.mul(&e));
        let den = self.den.mul(&k);
        if num.is_zero() {
            return ScalarField::zero(&self.ring);
        }
        let mut stable = den.content_in(coord);
        if self.ring.time_index() == Some(coord) {
            let u = self.ring.exp_index().unwrap();
            let mut shift = vec![0; den.nvars()];
            shift[u] = den.min_degree_in(u);
            stable = stable.content_in(u).mul_monomial(&shift);
        }
        let h = gcd(&num, &stable);
        let (num, den) = if h.is_constant() {
            (num, den)
        } else {
            (num.exact_div(&h).unwrap(), den.exact_div(&h).unwrap())
        };
        let inv = den.leading_coeff().inv().unwrap();
        ScalarField {
            ring: self.ring.clone(),
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    /// Partial derivative by coordinate name.
    pub fn partial_derivative(&self, coord: &str) -> Result<ScalarField> {
        let idx = self
            .ring
            .coord_index(coord)
            .ok_or_else(|| Error::UnknownCoordinate(coord.to_string()))?;
        Ok(self.partial(idx))
    }

    /// Exact value at a point given in ring variable order.
    pub fn evaluate_at(&self, point: &[GaussianRational]) -> Result<GaussianRational> {
        if point.len() != self.ring.nvars() {
            return Err(Error::ContextMismatch);
        }
        let d = self.den.evaluate(point);
        if d.is_zero() {
            return Err(Error::PoleAtPoint);
        }
        Ok(&self.num.evaluate(point) / &d)
    }

    /// Exact value at a named point. On cylinder charts the generator value
    /// is looked up under [`EXP_NAME`] and must be a positive rational.
    pub fn evaluate(&self, point: &BTreeMap<String, GaussianRational>) -> Result<GaussianRational> {
        let mut values = Vec::with_capacity(self.ring.nvars());
        for name in self.ring.names() {
            let v = point
                .get(name)
                .ok_or_else(|| Error::UnknownCoordinate(name.clone()))?;
            if name == EXP_NAME && !v.is_positive_real() {
                return Err(Error::InvalidPoint(format!(
                    "{EXP_NAME} must be a positive rational"
                )));
            }
            values.push(v.clone());
        }
        self.evaluate_at(&values)
    }
}

impl fmt::Display for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.ring.names();
        let n = self.num.fmt_with(names);
        if self.den.is_one() {
            write!(f, "{n}")
        } else {
            write!(f, "({n})/({})", self.den.fmt_with(names))
        }
    }
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

// Operator sugar. Mixing rings is an invariant violation and panics; use
// `ring_op` for the checked variant.
impl<'a> Add<&'a ScalarField> for &'a ScalarField {
    type Output = ScalarField;
    fn add(self, rhs: &ScalarField) -> ScalarField {
        self.check_ring(rhs).expect("scalar ring mismatch");
        self.add_impl(rhs)
    }
}

impl<'a> Sub<&'a ScalarField> for &'a ScalarField {
    type Output = ScalarField;
    fn sub(self, rhs: &ScalarField) -> ScalarField {
        self.check_ring(rhs).expect("scalar ring mismatch");
        self.add_impl(&rhs.neg_impl())
    }
}

impl<'a> Mul<&'a ScalarField> for &'a ScalarField {
    type Output = ScalarField;
    fn mul(self, rhs: &ScalarField) -> ScalarField {
        self.check_ring(rhs).expect("scalar ring mismatch");
        self.mul_impl(rhs)
    }
}

impl<'a> Div<&'a ScalarField> for &'a ScalarField {
    type Output = ScalarField;
    fn div(self, rhs: &ScalarField) -> ScalarField {
        self.ring_op(rhs, RingOp::Div).expect("scalar division")
    }
}

impl Neg for &ScalarField {
    type Output = ScalarField;
    fn neg(self) -> ScalarField {
        self.neg_impl()
    }
}

impl Neg for ScalarField {
    type Output = ScalarField;
    fn neg(self) -> ScalarField {
        self.neg_impl()
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for ScalarField {
            type Output = ScalarField;
            fn $m(self, rhs: ScalarField) -> ScalarField {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a ScalarField> for ScalarField {
            type Output = ScalarField;
            fn $m(self, rhs: &ScalarField) -> ScalarField {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<ScalarField> for &'a ScalarField {
            type Output = ScalarField;
            fn $m(self, rhs: ScalarField) -> ScalarField {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);
