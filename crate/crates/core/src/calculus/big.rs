//! Sections and operators of the big tangent bundle `TM + T*M`.

use std::fmt;

use super::alt::Bivector;
use super::alt::KForm;
use super::chart::Chart;
use super::ops::{
    d_raw, exterior_derivative, flat_matrix, interior_product, lie_bracket, lie_derivative,
    sharp_matrix,
};
use super::tensors::{Endomorphism, VectorField};
use crate::error::{Error, Result};
use crate::scalar::{Matrix, ScalarField};
use crate::verdict::Verdict;

/// A pair `(X, alpha)` of a vector field and a 1-form.
#[derive(Clone, PartialEq, Eq)]
pub struct GeneralizedSection {
    pub vec: VectorField,
    pub form: KForm,
}

impl GeneralizedSection {
    pub fn new(vec: VectorField, form: KForm) -> Result<Self> {
        vec.chart().ensure_same(form.chart())?;
        if form.degree() != 1 {
            return Err(Error::Shape("section form part must be a 1-form".into()));
        }
        Ok(GeneralizedSection { vec, form })
    }

    pub fn zero(chart: &Chart) -> Self {
        GeneralizedSection {
            vec: VectorField::zero(chart),
            form: KForm::zero(chart, 1),
        }
    }

    pub fn from_vector(x: VectorField) -> Self {
        let form = KForm::zero(x.chart(), 1);
        GeneralizedSection { vec: x, form }
    }

    pub fn from_form(alpha: KForm) -> Self {
        assert_eq!(alpha.degree(), 1);
        GeneralizedSection {
            vec: VectorField::zero(alpha.chart()),
            form: alpha,
        }
    }

    /// `(d_1,0), ..., (d_m,0), (0,dx^1), ..., (0,dx^m)`.
    pub fn basis(chart: &Chart) -> Vec<GeneralizedSection> {
        let n = chart.dim();
        let mut out = Vec::with_capacity(2 * n);
        for i in 0..n {
            out.push(Self::from_vector(VectorField::basis(chart, i)));
        }
        for i in 0..n {
            out.push(Self::from_form(KForm::basis(chart, &[i])));
        }
        out
    }

    pub fn chart(&self) -> &Chart {
        self.vec.chart()
    }

    /// Components `(X^1..X^m, alpha_1..alpha_m)`.
    pub fn column(&self) -> Vec<ScalarField> {
        self.vec
            .components()
            .iter()
            .chain(self.form.components())
            .cloned()
            .collect()
    }

    pub fn from_column(chart: &Chart, c: &[ScalarField]) -> Result<Self> {
        let n = chart.dim();
        if c.len() != 2 * n {
            return Err(Error::Shape("section column has the wrong length".into()));
        }
        Ok(GeneralizedSection {
            vec: VectorField::new(chart, c[..n].to_vec())?,
            form: KForm::from_components(chart, 1, c[n..].to_vec())?,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.vec.is_zero() && self.form.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        GeneralizedSection {
            vec: self.vec.add(&o.vec),
            form: self.form.add(&o.form),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        GeneralizedSection {
            vec: self.vec.sub(&o.vec),
            form: self.form.sub(&o.form),
        }
    }

    pub fn neg(&self) -> Self {
        GeneralizedSection {
            vec: self.vec.neg(),
            form: self.form.neg(),
        }
    }

    pub fn scale(&self, f: &ScalarField) -> Self {
        GeneralizedSection {
            vec: self.vec.scale(f),
            form: self.form.scale(f),
        }
    }

    pub fn labeled(&self) -> Vec<(String, ScalarField)> {
        self.vec
            .labeled()
            .into_iter()
            .chain(self.form.labeled())
            .collect()
    }
}

impl fmt::Debug for GeneralizedSection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.vec, self.form)
    }
}

/// Label of the `i`-th basis section of [`GeneralizedSection::basis`].
pub fn basis_label(chart: &Chart, i: usize) -> String {
    let n = chart.dim();
    if i < n {
        format!("(@{},0)", chart.coords()[i])
    } else {
        format!("(0,d{})", chart.coords()[i - n])
    }
}

fn pair(alpha: &KForm, y: &VectorField) -> ScalarField {
    alpha
        .components()
        .iter()
        .zip(y.components())
        .fold(y.chart().zero(), |acc, (a, b)| acc + a * b)
}

/// `g((X,alpha),(Y,beta)) = (alpha(Y) + beta(X)) / 2`.
pub fn neutral_pairing(s1: &GeneralizedSection, s2: &GeneralizedSection) -> Result<ScalarField> {
    s1.chart().ensure_same(s2.chart())?;
    let sum = pair(&s1.form, &s2.vec) + pair(&s2.form, &s1.vec);
    Ok(&sum * &s1.chart().rational(1, 2))
}

/// `([X,Y], L_X beta - L_Y alpha + d(alpha(Y) - beta(X)) / 2)`.
pub fn courant_bracket(
    s1: &GeneralizedSection,
    s2: &GeneralizedSection,
) -> Result<GeneralizedSection> {
    let chart = s1.chart();
    chart.ensure_same(s2.chart())?;
    let v = lie_bracket(&s1.vec, &s2.vec)?;
    let diff = pair(&s1.form, &s2.vec) - pair(&s2.form, &s1.vec);
    let exact = d_raw(&KForm::scalar(chart, &diff * &chart.rational(1, 2)));
    let form = lie_derivative(&s1.vec, &s2.form)?
        .sub(&lie_derivative(&s2.vec, &s1.form)?)
        .add(&exact);
    GeneralizedSection::new(v, form)
}

/// `(X, alpha + i(X) B)`.
pub fn b_transform(s: &GeneralizedSection, b: &KForm) -> Result<GeneralizedSection> {
    s.chart().ensure_same(b.chart())?;
    if b.degree() != 2 {
        return Err(Error::Shape("B-field must be a 2-form".into()));
    }
    Ok(GeneralizedSection {
        vec: s.vec.clone(),
        form: s.form.add(&interior_product(&s.vec, b)?),
    })
}

/// An endomorphism of `TM + T*M` as a `2m x 2m` block matrix acting on
/// section columns.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BigOperator {
    chart: Chart,
    m: Matrix,
}

impl BigOperator {
    pub fn new(chart: &Chart, m: Matrix) -> Result<Self> {
        let n = 2 * chart.dim();
        if m.rows() != n || m.cols() != n {
            return Err(Error::Shape("operator matrix has the wrong size".into()));
        }
        Ok(BigOperator {
            chart: chart.clone(),
            m,
        })
    }

    pub fn from_blocks(chart: &Chart, tl: &Matrix, tr: &Matrix, bl: &Matrix, br: &Matrix) -> Self {
        BigOperator {
            chart: chart.clone(),
            m: Matrix::from_blocks(tl, tr, bl, br),
        }
    }

    /// `[[A, sharp_pi], [flat_sigma, -A^t]]`.
    pub fn generalized(a: &Endomorphism, pi: &Bivector, sigma: &KForm) -> Self {
        let at = a.matrix().transpose().neg();
        Self::from_blocks(
            a.chart(),
            a.matrix(),
            &sharp_matrix(pi),
            &flat_matrix(sigma),
            &at,
        )
    }

    pub fn identity(chart: &Chart) -> Self {
        BigOperator {
            chart: chart.clone(),
            m: Matrix::identity(chart.ring(), 2 * chart.dim()),
        }
    }

    /// `e^B : (X, alpha) -> (X, alpha + i(X) B)`.
    pub fn b_field(b: &KForm) -> Self {
        let chart = b.chart();
        let n = chart.dim();
        let id = Matrix::identity(chart.ring(), n);
        let z = Matrix::zeros(chart.ring(), n, n);
        Self::from_blocks(chart, &id, &z, &flat_matrix(b), &id)
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    /// Block `(r, c)` with `r, c` in `{0, 1}`.
    pub fn block(&self, r: usize, c: usize) -> Matrix {
        let n = self.chart.dim();
        self.m.submatrix(r * n, c * n, n, n)
    }

    pub fn apply(&self, s: &GeneralizedSection) -> GeneralizedSection {
        GeneralizedSection::from_column(&self.chart, &self.m.mul_vec(&s.column())).expect("arity")
    }

    pub fn compose(&self, other: &BigOperator) -> BigOperator {
        BigOperator {
            chart: self.chart.clone(),
            m: self.m.mul(&other.m),
        }
    }

    pub fn add(&self, other: &BigOperator) -> BigOperator {
        BigOperator {
            chart: self.chart.clone(),
            m: self.m.add(&other.m),
        }
    }

    pub fn sub(&self, other: &BigOperator) -> BigOperator {
        BigOperator {
            chart: self.chart.clone(),
            m: self.m.sub(&other.m),
        }
    }

    pub fn neg(&self) -> BigOperator {
        BigOperator {
            chart: self.chart.clone(),
            m: self.m.neg(),
        }
    }

    pub fn scale(&self, f: &ScalarField) -> BigOperator {
        BigOperator {
            chart: self.chart.clone(),
            m: self.m.scale(f),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    /// The four-term Courant-Nijenhuis expression
    /// `[JX,JY] - J[X,JY] - J[JX,Y] + J^2[X,Y]`.
    pub fn courant_nijenhuis(
        &self,
        x: &GeneralizedSection,
        y: &GeneralizedSection,
    ) -> Result<GeneralizedSection> {
        let jx = self.apply(x);
        let jy = self.apply(y);
        let t1 = courant_bracket(&jx, &jy)?;
        let t2 = self.apply(&courant_bracket(x, &jy)?);
        let t3 = self.apply(&courant_bracket(&jx, y)?);
        let t4 = self.apply(&self.apply(&courant_bracket(x, y)?));
        Ok(t1.sub(&t2).sub(&t3).add(&t4))
    }

    /// Labels of nonzero matrix entries, for witnesses.
    pub fn labeled(&self) -> Vec<(String, ScalarField)> {
        let n = self.chart.dim();
        let name = |i: usize| {
            if i < n {
                format!("@{}", self.chart.coords()[i])
            } else {
                format!("d{}", self.chart.coords()[i - n])
            }
        };
        self.m
            .entries()
            .map(|((i, j), v)| (format!("{}<-{}", name(i), name(j)), v.clone()))
            .collect()
    }
}

/// Row-reduced membership test for the span of a frame.
pub struct SpanTest {
    rank: usize,
    rows: usize,
    /// Left multiplier `L` with `L * F` in reduced echelon form.
    left: Matrix,
    pub pivots: Vec<ScalarField>,
}

impl SpanTest {
    /// Fails with `RankDeficientFrame` unless the columns are generically
    /// independent.
    pub fn new(frame: &[GeneralizedSection]) -> Result<SpanTest> {
        let chart = frame
            .first()
            .map(|s| s.chart().clone())
            .ok_or_else(|| Error::Shape("empty frame".into()))?;
        let rows = 2 * chart.dim();
        let cols: Vec<Vec<ScalarField>> = frame.iter().map(GeneralizedSection::column).collect();
        let f = Matrix::from_fn(chart.ring(), rows, frame.len(), |i, j| cols[j][i].clone());
        Self::from_matrix(&f)
    }

    pub fn from_matrix(f: &Matrix) -> Result<SpanTest> {
        let rows = f.rows();
        let k = f.cols();
        let aug = f.hstack(&Matrix::identity(f.ring(), rows));
        let e = aug.echelon_upto(k);
        if e.rank < k {
            return Err(Error::RankDeficientFrame {
                rank: e.rank,
                len: k,
            });
        }
        Ok(SpanTest {
            rank: k,
            rows,
            left: e.reduced.submatrix(0, k, rows, rows),
            pivots: e.pivots,
        })
    }

    /// First nonzero residual `(row, value)` of `v` against the span, or
    /// `None` when `v` lies in it.
    pub fn residual(&self, v: &[ScalarField]) -> Option<(usize, ScalarField)> {
        let lv = self.left.mul_vec(v);
        (self.rank..self.rows).find_map(|r| (!lv[r].is_zero()).then(|| (r, lv[r].clone())))
    }

    /// Coefficients of `v` in the frame, assuming membership.
    pub fn coordinates(&self, v: &[ScalarField]) -> Vec<ScalarField> {
        let lv = self.left.mul_vec(v);
        lv[..self.rank].to_vec()
    }

    /// Non-constant pivots, whose zero loci are excluded from the verdict.
    pub fn pivot_warning(&self) -> Option<String> {
        let bad: Vec<String> = self
            .pivots
            .iter()
            .filter(|p| !p.is_constant())
            .map(|p| p.to_string())
            .collect();
        (!bad.is_empty()).then(|| {
            format!(
                "generic rank; excluded where these pivots vanish: {}",
                bad.join(", ")
            )
        })
    }
}

/// Courant closure of the span of `frame`, decided pair by pair.
pub fn frame_involutivity(frame: &[GeneralizedSection], allow_complex: bool) -> Result<Verdict> {
    if frame.is_empty() {
        return Ok(Verdict::new());
    }
    let chart = frame[0].chart().clone();
    for s in frame {
        chart.ensure_same(s.chart())?;
        if !allow_complex && s.column().iter().any(|c| *c != c.conj()) {
            return Err(Error::Incompatible(
                "complex frame section with allowComplex = false".into(),
            ));
        }
    }
    let test = SpanTest::new(frame)?;
    let mut v = Verdict::new();
    for i in 0..frame.len() {
        for j in i + 1..frame.len() {
            let b = courant_bracket(&frame[i], &frame[j])?;
            let id = format!("bracket({i},{j})");
            match test.residual(&b.column()) {
                None => v.holds(id),
                Some((r, val)) => v.fails(id, format!("residual row {r}"), Some(val)),
            }
        }
    }
    if let Some(w) = test.pivot_warning() {
        v.warnings.push(w);
    }
    Ok(v)
}

/// `dB = 0`; top-degree forms are closed.
pub fn is_closed(b: &KForm) -> bool {
    b.degree() >= b.chart().dim() || exterior_derivative(b).map(|d| d.is_zero()).unwrap_or(true)
}
