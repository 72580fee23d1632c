//! Antisymmetric tensors stored on strictly increasing index tuples, shared
//! by differential forms and multivector fields.

use std::fmt;
use std::marker::PhantomData;

use super::chart::Chart;
use crate::error::{Error, Result};
use crate::scalar::ScalarField;

pub trait Variance: Clone + fmt::Debug + PartialEq + Eq + Send + Sync + 'static {
    /// Basis symbol prefix in the structure language: `d` or `@`.
    const PREFIX: &'static str;
}

/// Covariant slots: differential forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Co;

/// Contravariant slots: multivector fields.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Contra;

impl Variance for Co {
    const PREFIX: &'static str = "d";
}

impl Variance for Contra {
    const PREFIX: &'static str = "@";
}

#[derive(Clone, PartialEq, Eq)]
pub struct Alternating<V: Variance> {
    chart: Chart,
    degree: usize,
    comps: Vec<ScalarField>,
    _v: PhantomData<V>,
}

pub type KForm = Alternating<Co>;
pub type Multivector = Alternating<Contra>;
pub type Bivector = Multivector;
pub type Trivector = Multivector;

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r = 1usize;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// All strictly increasing `k`-tuples from `0..n`, in lexicographic order.
pub fn tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(binomial(n, k));
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Position of an increasing tuple in the order of [`tuples`].
pub fn tuple_index(n: usize, t: &[usize]) -> usize {
    let k = t.len();
    let mut idx = 0;
    let mut prev = 0;
    for (p, &a) in t.iter().enumerate() {
        for v in prev..a {
            idx += binomial(n - v - 1, k - p - 1);
        }
        prev = a + 1;
    }
    idx
}

/// Sorts `idx` in place and returns the permutation sign, or `None` when an
/// index repeats.
pub fn sort_with_sign(idx: &mut [usize]) -> Option<i64> {
    let mut sign = 1;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

impl<V: Variance> Alternating<V> {
    pub fn zero(chart: &Chart, degree: usize) -> Self {
        Alternating {
            chart: chart.clone(),
            degree,
            comps: vec![chart.zero(); binomial(chart.dim(), degree)],
            _v: PhantomData,
        }
    }

    /// Degree-0 element.
    pub fn scalar(chart: &Chart, f: ScalarField) -> Self {
        Alternating {
            chart: chart.clone(),
            degree: 0,
            comps: vec![f],
            _v: PhantomData,
        }
    }

    /// Components listed in the order of [`tuples`].
    pub fn from_components(chart: &Chart, degree: usize, comps: Vec<ScalarField>) -> Result<Self> {
        if comps.len() != binomial(chart.dim(), degree) {
            return Err(Error::Shape(format!(
                "{} components for degree {degree} in dimension {}",
                comps.len(),
                chart.dim()
            )));
        }
        Ok(Alternating {
            chart: chart.clone(),
            degree,
            comps,
            _v: PhantomData,
        })
    }

    /// The basis element `d x^{i1} ^ ... ^ d x^{ik}` (or its contravariant
    /// analogue); indices in any order.
    pub fn basis(chart: &Chart, idx: &[usize]) -> Self {
        let mut out = Self::zero(chart, idx.len());
        out.add_at(idx, &chart.one());
        out
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn components(&self) -> &[ScalarField] {
        &self.comps
    }

    pub fn tuples(&self) -> Vec<Vec<usize>> {
        tuples(self.chart.dim(), self.degree)
    }

    /// Signed component at an arbitrary index list.
    pub fn get(&self, idx: &[usize]) -> ScalarField {
        assert_eq!(idx.len(), self.degree, "index arity");
        let mut s = idx.to_vec();
        match sort_with_sign(&mut s) {
            None => self.chart.zero(),
            Some(sign) => {
                let v = &self.comps[tuple_index(self.chart.dim(), &s)];
                if sign < 0 {
                    -v
                } else {
                    v.clone()
                }
            }
        }
    }

    /// Adds `v` at an arbitrary index list, respecting antisymmetry.
    pub fn add_at(&mut self, idx: &[usize], v: &ScalarField) {
        if v.is_zero() {
            return;
        }
        let mut s = idx.to_vec();
        if let Some(sign) = sort_with_sign(&mut s) {
            let pos = tuple_index(self.chart.dim(), &s);
            self.comps[pos] = if sign < 0 {
                &self.comps[pos] - v
            } else {
                &self.comps[pos] + v
            };
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(ScalarField::is_zero)
    }

    fn check(&self, other: &Self) {
        assert!(self.chart == other.chart, "chart mismatch");
        assert_eq!(self.degree, other.degree, "degree mismatch");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check(other);
        self.zip(other, |a, b| a - b)
    }

    pub fn neg(&self) -> Self {
        self.map(|a| -a)
    }

    pub fn scale(&self, f: &ScalarField) -> Self {
        self.map(|a| a * f)
    }

    pub fn map(&self, f: impl Fn(&ScalarField) -> ScalarField) -> Self {
        Alternating {
            chart: self.chart.clone(),
            degree: self.degree,
            comps: self.comps.iter().map(f).collect(),
            _v: PhantomData,
        }
    }

    fn zip(&self, other: &Self, f: impl Fn(&ScalarField, &ScalarField) -> ScalarField) -> Self {
        Alternating {
            chart: self.chart.clone(),
            degree: self.degree,
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| f(a, b))
                .collect(),
            _v: PhantomData,
        }
    }

    /// Exterior product; the result is zero when degrees exceed the dimension.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.chart.ensure_same(&other.chart)?;
        let n = self.chart.dim();
        let mut out = Self::zero(&self.chart, self.degree + other.degree);
        if self.degree + other.degree > n {
            return Ok(out);
        }
        let ta = self.tuples();
        let tb = other.tuples();
        for (a, ca) in ta.iter().zip(&self.comps) {
            if ca.is_zero() {
                continue;
            }
            for (b, cb) in tb.iter().zip(&other.comps) {
                if cb.is_zero() || b.iter().any(|x| a.contains(x)) {
                    continue;
                }
                let idx: Vec<usize> = a.iter().chain(b).copied().collect();
                out.add_at(&idx, &(ca * cb));
            }
        }
        Ok(out)
    }

    /// Componentwise map into another chart's ring (e.g. base to cylinder).
    pub fn embed_into(&self, target: &Chart) -> Result<Self> {
        let n = self.chart.dim();
        let mut out = Self::zero(target, self.degree);
        for (t, c) in self.tuples().iter().zip(&self.comps) {
            if t.iter().any(|&i| i >= n) {
                return Err(Error::ChartMismatch);
            }
            out.add_at(t, &c.embed(target.ring())?);
        }
        Ok(out)
    }

    pub fn basis_label(&self, t: &[usize]) -> String {
        if t.is_empty() {
            return "1".to_string();
        }
        t.iter()
            .map(|&i| format!("{}{}", V::PREFIX, self.chart.coords()[i]))
            .collect::<Vec<_>>()
            .join("^^")
    }

    /// `(label, component)` pairs over all stored tuples.
    pub fn labeled(&self) -> Vec<(String, ScalarField)> {
        self.tuples()
            .iter()
            .zip(&self.comps)
            .map(|(t, c)| (self.basis_label(t), c.clone()))
            .collect()
    }
}

impl<V: Variance> fmt::Display for Alternating<V> {
    /// Structure-language syntax, e.g. `(x)*dy ^^ dz + dx ^^ dy`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (t, c) in self.tuples().iter().zip(&self.comps) {
            if c.is_zero() {
                continue;
            }
            let basis = t
                .iter()
                .map(|&i| format!("{}{}", V::PREFIX, self.chart.coords()[i]))
                .collect::<Vec<_>>()
                .join(" ^^ ");
            terms.push(match (t.is_empty(), c.is_one()) {
                (true, _) => format!("({c})"),
                (false, true) => basis,
                (false, false) => format!("({c})*{basis}"),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl<V: Variance> fmt::Debug for Alternating<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[deg {}] {}", self.degree, self)
    }
}
