use std::fmt;

use super::alt::{KForm, Multivector};
use super::chart::Chart;
use crate::error::{Error, Result};
use crate::scalar::{Matrix, ScalarField};

/// `X = sum X^i d/dx^i`.
#[derive(Clone, PartialEq, Eq)]
pub struct VectorField {
    chart: Chart,
    comps: Vec<ScalarField>,
}

impl VectorField {
    pub fn new(chart: &Chart, comps: Vec<ScalarField>) -> Result<Self> {
        if comps.len() != chart.dim() {
            return Err(Error::Shape(format!(
                "vector field with {} components on a {}-dimensional chart",
                comps.len(),
                chart.dim()
            )));
        }
        Ok(VectorField {
            chart: chart.clone(),
            comps,
        })
    }

    pub fn zero(chart: &Chart) -> Self {
        VectorField {
            chart: chart.clone(),
            comps: vec![chart.zero(); chart.dim()],
        }
    }

    /// The coordinate field `d/dx^i`.
    pub fn basis(chart: &Chart, i: usize) -> Self {
        let mut v = Self::zero(chart);
        v.comps[i] = chart.one();
        v
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn components(&self) -> &[ScalarField] {
        &self.comps
    }

    pub fn component(&self, i: usize) -> &ScalarField {
        &self.comps[i]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(ScalarField::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert!(self.chart == other.chart, "chart mismatch");
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert!(self.chart == other.chart, "chart mismatch");
        self.zip(other, |a, b| a - b)
    }

    pub fn neg(&self) -> Self {
        self.map(|a| -a)
    }

    pub fn scale(&self, f: &ScalarField) -> Self {
        self.map(|a| a * f)
    }

    fn map(&self, f: impl Fn(&ScalarField) -> ScalarField) -> Self {
        VectorField {
            chart: self.chart.clone(),
            comps: self.comps.iter().map(f).collect(),
        }
    }

    fn zip(&self, other: &Self, f: impl Fn(&ScalarField, &ScalarField) -> ScalarField) -> Self {
        VectorField {
            chart: self.chart.clone(),
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    /// Directional derivative `X(f)`.
    pub fn apply(&self, f: &ScalarField) -> ScalarField {
        let mut acc = self.chart.zero();
        for (i, c) in self.comps.iter().enumerate() {
            if !c.is_zero() {
                acc = acc + c * &f.partial(i);
            }
        }
        acc
    }

    pub fn to_multivector(&self) -> Multivector {
        Multivector::from_components(&self.chart, 1, self.comps.clone()).expect("arity")
    }

    pub fn from_multivector(p: &Multivector) -> Result<Self> {
        if p.degree() != 1 {
            return Err(Error::Shape(format!(
                "expected a vector, got degree {}",
                p.degree()
            )));
        }
        VectorField::new(p.chart(), p.components().to_vec())
    }

    pub fn embed_into(&self, target: &Chart) -> Result<Self> {
        if self.comps.len() > target.dim() {
            return Err(Error::ChartMismatch);
        }
        let mut comps = Vec::with_capacity(target.dim());
        for c in &self.comps {
            comps.push(c.embed(target.ring())?);
        }
        comps.resize(target.dim(), target.zero());
        VectorField::new(target, comps)
    }

    pub fn labeled(&self) -> Vec<(String, ScalarField)> {
        self.chart
            .coords()
            .iter()
            .zip(&self.comps)
            .map(|(n, c)| (format!("@{n}"), c.clone()))
            .collect()
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_multivector(), f)
    }
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A (1,1)-tensor; `matrix[i][j] = A^i_j`, so column `j` is `A(d/dx^j)`.
#[derive(Clone, PartialEq, Eq)]
pub struct Endomorphism {
    chart: Chart,
    m: Matrix,
}

impl Endomorphism {
    pub fn new(chart: &Chart, m: Matrix) -> Result<Self> {
        let n = chart.dim();
        if m.rows() != n || m.cols() != n {
            return Err(Error::Shape(format!(
                "{}x{} matrix for an endomorphism in dimension {n}",
                m.rows(),
                m.cols()
            )));
        }
        Ok(Endomorphism {
            chart: chart.clone(),
            m,
        })
    }

    pub fn from_fn(chart: &Chart, f: impl FnMut(usize, usize) -> ScalarField) -> Self {
        let n = chart.dim();
        Endomorphism {
            chart: chart.clone(),
            m: Matrix::from_fn(chart.ring(), n, n, f),
        }
    }

    pub fn zero(chart: &Chart) -> Self {
        Endomorphism {
            chart: chart.clone(),
            m: Matrix::zeros(chart.ring(), chart.dim(), chart.dim()),
        }
    }

    pub fn identity(chart: &Chart) -> Self {
        Endomorphism {
            chart: chart.clone(),
            m: Matrix::identity(chart.ring(), chart.dim()),
        }
    }

    /// The endomorphism `X -> alpha(X) v`.
    pub fn outer(v: &VectorField, alpha: &KForm) -> Self {
        assert_eq!(alpha.degree(), 1, "outer product needs a 1-form");
        let a = alpha.components();
        Endomorphism::from_fn(v.chart(), |i, j| v.component(i) * &a[j])
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    pub fn entry(&self, i: usize, j: usize) -> &ScalarField {
        self.m.get(i, j)
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn apply(&self, x: &VectorField) -> VectorField {
        assert!(self.chart == *x.chart(), "chart mismatch");
        VectorField::new(&self.chart, self.m.mul_vec(x.components())).expect("arity")
    }

    /// `alpha o A`, i.e. `X -> alpha(AX)`.
    pub fn transpose_apply(&self, alpha: &KForm) -> KForm {
        assert_eq!(alpha.degree(), 1);
        let comps = self.m.transpose().mul_vec(alpha.components());
        KForm::from_components(&self.chart, 1, comps).expect("arity")
    }

    /// `self o other`.
    pub fn compose(&self, other: &Endomorphism) -> Endomorphism {
        assert!(self.chart == other.chart, "chart mismatch");
        Endomorphism {
            chart: self.chart.clone(),
            m: self.m.mul(&other.m),
        }
    }

    pub fn square(&self) -> Endomorphism {
        self.compose(self)
    }

    pub fn add(&self, other: &Endomorphism) -> Endomorphism {
        Endomorphism {
            chart: self.chart.clone(),
            m: self.m.add(&other.m),
        }
    }

    pub fn sub(&self, other: &Endomorphism) -> Endomorphism {
        Endomorphism {
            chart: self.chart.clone(),
            m: self.m.sub(&other.m),
        }
    }

    pub fn neg(&self) -> Endomorphism {
        Endomorphism {
            chart: self.chart.clone(),
            m: self.m.neg(),
        }
    }

    pub fn scale(&self, f: &ScalarField) -> Endomorphism {
        Endomorphism {
            chart: self.chart.clone(),
            m: self.m.scale(f),
        }
    }

    pub fn column(&self, j: usize) -> VectorField {
        VectorField::new(&self.chart, self.m.column(j)).expect("arity")
    }

    pub fn embed_into(&self, target: &Chart) -> Result<Endomorphism> {
        let n = self.chart.dim();
        if n > target.dim() {
            return Err(Error::ChartMismatch);
        }
        let mut m = Matrix::zeros(target.ring(), target.dim(), target.dim());
        for ((i, j), v) in self.m.entries() {
            m.set(i, j, v.embed(target.ring())?);
        }
        Endomorphism::new(target, m)
    }

    pub fn labeled(&self) -> Vec<(String, ScalarField)> {
        let names = self.chart.coords();
        self.m
            .entries()
            .map(|((i, j), v)| (format!("@{}*d{}", names[i], names[j]), v.clone()))
            .collect()
    }
}

impl fmt::Display for Endomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.chart.coords();
        let terms: Vec<String> = self
            .m
            .entries()
            .filter(|(_, v)| !v.is_zero())
            .map(|((i, j), v)| {
                if v.is_one() {
                    format!("@{}*d{}", names[i], names[j])
                } else {
                    format!("({v})*@{}*d{}", names[i], names[j])
                }
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl fmt::Debug for Endomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A symmetric covariant 2-tensor; `matrix[i][j] = g(d/dx^i, d/dx^j)`.
#[derive(Clone, PartialEq, Eq)]
pub struct SymmetricTensor {
    chart: Chart,
    m: Matrix,
}

impl SymmetricTensor {
    pub fn new(chart: &Chart, m: Matrix) -> Result<Self> {
        let n = chart.dim();
        if m.rows() != n || m.cols() != n {
            return Err(Error::Shape("metric matrix has the wrong size".into()));
        }
        if m != m.transpose() {
            return Err(Error::Shape("metric matrix is not symmetric".into()));
        }
        Ok(SymmetricTensor {
            chart: chart.clone(),
            m,
        })
    }

    pub fn from_fn(chart: &Chart, f: impl FnMut(usize, usize) -> ScalarField) -> Result<Self> {
        let n = chart.dim();
        Self::new(chart, Matrix::from_fn(chart.ring(), n, n, f))
    }

    pub fn euclidean(chart: &Chart) -> Self {
        SymmetricTensor {
            chart: chart.clone(),
            m: Matrix::identity(chart.ring(), chart.dim()),
        }
    }

    /// `alpha (x) alpha` for a 1-form.
    pub fn square_of(alpha: &KForm) -> Self {
        let a = alpha.components();
        SymmetricTensor::from_fn(alpha.chart(), |i, j| &a[i] * &a[j]).expect("symmetric")
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    pub fn entry(&self, i: usize, j: usize) -> &ScalarField {
        self.m.get(i, j)
    }

    pub fn eval(&self, x: &VectorField, y: &VectorField) -> ScalarField {
        let my = self.m.mul_vec(y.components());
        let mut acc = self.chart.zero();
        for (a, b) in x.components().iter().zip(&my) {
            acc = acc + a * b;
        }
        acc
    }

    /// `X -> g(X, .)`.
    pub fn flat(&self, x: &VectorField) -> KForm {
        KForm::from_components(&self.chart, 1, self.m.transpose().mul_vec(x.components()))
            .expect("arity")
    }

    pub fn add(&self, other: &SymmetricTensor) -> SymmetricTensor {
        SymmetricTensor {
            chart: self.chart.clone(),
            m: self.m.add(&other.m),
        }
    }

    pub fn sub(&self, other: &SymmetricTensor) -> SymmetricTensor {
        SymmetricTensor {
            chart: self.chart.clone(),
            m: self.m.sub(&other.m),
        }
    }

    pub fn scale(&self, f: &ScalarField) -> SymmetricTensor {
        SymmetricTensor {
            chart: self.chart.clone(),
            m: self.m.scale(f),
        }
    }

    pub fn determinant(&self) -> ScalarField {
        self.m.determinant().expect("square")
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn embed_into(&self, target: &Chart) -> Result<SymmetricTensor> {
        let mut m = Matrix::zeros(target.ring(), target.dim(), target.dim());
        if self.chart.dim() > target.dim() {
            return Err(Error::ChartMismatch);
        }
        for ((i, j), v) in self.m.entries() {
            m.set(i, j, v.embed(target.ring())?);
        }
        SymmetricTensor::new(target, m)
    }

    pub fn labeled(&self) -> Vec<(String, ScalarField)> {
        let names = self.chart.coords();
        self.m
            .entries()
            .filter(|((i, j), _)| i <= j)
            .map(|((i, j), v)| (format!("d{}*d{}", names[i], names[j]), v.clone()))
            .collect()
    }
}

impl fmt::Display for SymmetricTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.chart.coords();
        let terms: Vec<String> = self
            .m
            .entries()
            .filter(|(_, v)| !v.is_zero())
            .map(|((i, j), v)| {
                if v.is_one() {
                    format!("d{}*d{}", names[i], names[j])
                } else {
                    format!("({v})*d{}*d{}", names[i], names[j])
                }
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl fmt::Debug for SymmetricTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
