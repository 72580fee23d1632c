//! Sparse multivariate polynomials over Q(i).
//!
//! Terms live in a `BTreeMap` keyed by exponent vectors, so the term order is
//! lexicographic with variable 0 most significant and the leading term is the
//! last entry. Zero coefficients are never stored.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{One, Zero};

use super::gaussian::GaussianRational;

pub type Monomial = Vec<u32>;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, GaussianRational::one())
    }

    pub fn constant(nvars: usize, c: GaussianRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; nvars], c);
        }
        Poly { nvars, terms }
    }

    pub fn var(nvars: usize, v: usize) -> Self {
        Poly::monomial(nvars, unit_exponent(nvars, v, 1), GaussianRational::one())
    }

    pub fn monomial(nvars: usize, exps: Monomial, c: GaussianRational) -> Self {
        debug_assert_eq!(exps.len(), nvars);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Poly { nvars, terms }
    }

    pub fn from_terms(
        nvars: usize,
        terms: impl IntoIterator<Item = (Monomial, GaussianRational)>,
    ) -> Self {
        let mut p = Poly::zero(nvars);
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    /// The same polynomial in a ring with `nvars` variables, of which the
    /// current ones are a prefix.
    pub fn extend_vars(&self, nvars: usize) -> Poly {
        assert!(nvars >= self.nvars, "cannot drop variables");
        Poly {
            nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut m = m.clone();
                    m.resize(nvars, 0);
                    (m, c.clone())
                })
                .collect(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        match self.terms.len() {
            0 => true,
            1 => self.terms.keys().next().unwrap().iter().all(|&e| e == 0),
            _ => false,
        }
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && self.constant_term().is_one()
    }

    pub fn constant_term(&self) -> GaussianRational {
        self.terms
            .get(&vec![0; self.nvars])
            .cloned()
            .unwrap_or_else(GaussianRational::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &GaussianRational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> GaussianRational {
        self.leading_term()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(GaussianRational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| m.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|m| m[v]).max().unwrap_or(0)
    }

    /// Smallest degree of `v` over all terms.
    pub fn min_degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|m| m[v]).min().unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: &GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        debug_assert_eq!(self.nvars, other.nvars);
        let (big, small) = if self.terms.len() >= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), &-c);
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        debug_assert_eq!(self.nvars, other.nvars);
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.nvars);
        }
        if self.is_constant() {
            return other.scale(&self.constant_term());
        }
        if other.is_constant() {
            return self.scale(&other.constant_term());
        }
        let mut out = Poly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m: Monomial = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                out.add_term(m, &(ca * cb));
            }
        }
        out
    }

    pub fn mul_monomial(&self, exps: &[u32]) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.iter().zip(exps).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    /// Divides every term by `x^exps`; the caller guarantees divisibility.
    fn div_monomial(&self, exps: &[u32]) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.iter().zip(exps).map(|(a, b)| a - b).collect(), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(self.nvars);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn derivative(&self, v: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            if m[v] == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2[v] -= 1;
            out.add_term(m2, &(c * &GaussianRational::from_int(m[v] as i64)));
        }
        out
    }

    /// The Euler-type operator `x_v * d/dx_v`, which multiplies each term by
    /// its degree in `x_v`.
    pub fn euler(&self, v: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            if m[v] == 0 {
                continue;
            }
            out.add_term(m.clone(), &(c * &GaussianRational::from_int(m[v] as i64)));
        }
        out
    }

    pub fn evaluate(&self, point: &[GaussianRational]) -> GaussianRational {
        debug_assert_eq!(point.len(), self.nvars);
        let mut acc = GaussianRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m) {
                if e > 0 {
                    t = &t * &x.pow(e);
                }
            }
            acc += &t;
        }
        acc
    }

    pub fn conj(&self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.conj()))
                .collect(),
        }
    }

    /// Scales so that the leading coefficient is 1. Zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.leading_term() {
            None => self.clone(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.inv().unwrap()),
        }
    }

    /// Exponent-wise minimum over all terms.
    fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let mut out = match it.next() {
            Some(m) => m.clone(),
            None => return vec![0; self.nvars],
        };
        for m in it {
            for (o, &e) in out.iter_mut().zip(m) {
                *o = (*o).min(e);
            }
        }
        out
    }

    /// Polynomial quotient when `divisor` divides `self` exactly.
    pub fn exact_div(&self, divisor: &Poly) -> Option<Poly> {
        if divisor.is_zero() {
            return None;
        }
        if divisor.is_constant() {
            return Some(self.scale(&divisor.constant_term().inv().unwrap()));
        }
        let (lm, lc) = divisor
            .leading_term()
            .map(|(m, c)| (m.clone(), c.clone()))?;
        let lc_inv = lc.inv().unwrap();
        let mut q = Poly::zero(self.nvars);
        let mut r = self.clone();
        while let Some((rm, rc)) = r.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
            if rm.iter().zip(&lm).any(|(a, b)| a < b) {
                return None;
            }
            let tm: Monomial = rm.iter().zip(&lm).map(|(a, b)| a - b).collect();
            let tc = &rc * &lc_inv;
            let t = Poly::monomial(self.nvars, tm, tc);
            r = r.sub(&divisor.mul(&t));
            q = q.add(&t);
        }
        Some(q)
    }

    /// Coefficients of `self` viewed as a univariate polynomial in `v`.
    fn coeffs_in(&self, v: usize) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut m2 = m.clone();
            let k = m2[v];
            m2[v] = 0;
            out.entry(k)
                .or_insert_with(|| Poly::zero(self.nvars))
                .add_term(m2, c);
        }
        out
    }

    fn leading_coeff_in(&self, v: usize) -> Poly {
        let d = self.degree_in(v);
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            if m[v] == d {
                let mut m2 = m.clone();
                m2[v] = 0;
                out.add_term(m2, c);
            }
        }
        out
    }

    /// Gcd of the coefficients in `v`: every factor of `self` free of `v`.
    pub fn content_in(&self, v: usize) -> Poly {
        let mut g = Poly::zero(self.nvars);
        for c in self.coeffs_in(v).into_values() {
            g = gcd(&g, &c);
            if g.is_constant() {
                return Poly::one(self.nvars);
            }
        }
        g
    }

    /// Primitive part in `v`, scaled monic so pseudo-remainder sequences
    /// keep bounded rational coefficients.
    fn primitive_part_in(&self, v: usize) -> Poly {
        let c = self.content_in(v);
        self.exact_div(&c)
            .expect("content divides polynomial")
            .monic()
    }

    fn pseudo_remainder(&self, b: &Poly, v: usize) -> Poly {
        let db = b.degree_in(v);
        let lcb = b.leading_coeff_in(v);
        let mut r = self.clone();
        while !r.is_zero() && r.degree_in(v) >= db {
            let dr = r.degree_in(v);
            let lcr = r.leading_coeff_in(v);
            let shift = unit_exponent(self.nvars, v, dr - db);
            r = r.mul(&lcb).sub(&b.mul(&lcr).mul_monomial(&shift));
        }
        r
    }

    /// Dense coefficients in `v` mod `fp.p` (lowest first, trailing zeros
    /// trimmed) after substituting `point` for every other variable. `None`
    /// when a coefficient denominator vanishes mod `p`.
    fn specialize_mod(&self, v: usize, point: &[u64], fp: &Fp) -> Option<Vec<u64>> {
        let mut out = vec![0; self.degree_in(v) as usize + 1];
        for (m, c) in &self.terms {
            let mut t = fp.reduce(c)?;
            for (k, (&x, &e)) in point.iter().zip(m).enumerate() {
                if k != v && e > 0 {
                    t = fp.mul(t, fp.pow(x, e as u64));
                }
            }
            let slot = &mut out[m[v] as usize];
            *slot = fp.add(*slot, t);
        }
        while out.last() == Some(&0) {
            out.pop();
        }
        Some(out)
    }

    fn variables(&self) -> Vec<bool> {
        let mut present = vec![false; self.nvars];
        for m in self.terms.keys() {
            for (p, &e) in present.iter_mut().zip(m) {
                if e > 0 {
                    *p = true;
                }
            }
        }
        present
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let mono = fmt_monomial(m, names);
            let (neg, mag) = split_sign(c);
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            match (mono.is_empty(), mag.is_one()) {
                (true, _) => {
                    let _ = write!(out, "{}", mag);
                }
                (false, true) => out.push_str(&mono),
                (false, false) => {
                    let _ = write!(out, "{}*{}", mag, mono);
                }
            }
        }
        out
    }
}

fn unit_exponent(nvars: usize, v: usize, e: u32) -> Monomial {
    let mut m = vec![0; nvars];
    m[v] = e;
    m
}

fn split_sign(c: &GaussianRational) -> (bool, GaussianRational) {
    use num_traits::Signed;
    if c.im().is_zero() && c.re().is_negative() {
        (true, -c)
    } else if c.re().is_zero() && c.im().is_negative() {
        (true, -c)
    } else {
        (false, c.clone())
    }
}

fn fmt_monomial(m: &[u32], names: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(names[i].clone()),
            _ => parts.push(format!("{}^{}", names[i], e)),
        }
    }
    parts.join("*")
}

/// Greatest common divisor, normalized to leading coefficient 1.
///
/// Recursive primitive-remainder-sequence algorithm over Q(i): the
/// highest-index variable present is the main variable and contents are
/// taken recursively in the remaining ones.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one(a.nvars);
    }
    if a == b {
        return a.monic();
    }
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let mg: Monomial = ma.iter().zip(&mb).map(|(x, y)| (*x).min(*y)).collect();
    let a1 = a.div_monomial(&ma);
    let b1 = b.div_monomial(&mb);
    let core = gcd_core(&a1, &b1);
    core.mul_monomial(&mg).monic()
}

fn gcd_core(a: &Poly, b: &Poly) -> Poly {
    let n = a.nvars;
    if a.is_constant() || b.is_constant() {
        return Poly::one(n);
    }
    if a.num_terms() == 1 || b.num_terms() == 1 {
        // Monomial contents were stripped, so a lone term is a unit here.
        return Poly::one(n);
    }
    if coprime_by_specialization(a, b) {
        return Poly::one(n);
    }
    let va = a.variables();
    let vb = b.variables();
    let Some(v) = (0..n).rev().find(|&i| va[i] || vb[i]) else {
        return Poly::one(n);
    };
    if !va[v] {
        return gcd(a, &b.content_in(v));
    }
    if !vb[v] {
        return gcd(&a.content_in(v), b);
    }
    let ca = a.content_in(v);
    let cb = b.content_in(v);
    let c = gcd(&ca, &cb);
    let pa = a.exact_div(&ca).expect("content divides").monic();
    let pb = b.exact_div(&cb).expect("content divides").monic();
    let (mut r0, mut r1) = if pa.degree_in(v) >= pb.degree_in(v) {
        (pa, pb)
    } else {
        (pb, pa)
    };
    let g = loop {
        let r = r0.pseudo_remainder(&r1, v);
        if r.is_zero() {
            break r1.primitive_part_in(v);
        }
        if r.degree_in(v) == 0 {
            break Poly::one(n);
        }
        r0 = r1;
        r1 = r.primitive_part_in(v);
    };
    c.mul(&g).monic()
}

/// Sufficient test for `gcd(a, b) = 1`.
///
/// A nonconstant common factor `g` has positive degree in some variable `v`
/// shared by `a` and `b`. Reducing mod a prime of Z[i] and fixing the other
/// variables at a point where the leading coefficients in `v` survive keeps
/// `deg_v g` (Gauss's lemma over the localization), so coprime univariate
/// images in every shared variable rule `g` out. `false` means undecided.
fn coprime_by_specialization(a: &Poly, b: &Poly) -> bool {
    const SAMPLES: [u64; 9] = [2, 3, 5, 7, 11, 13, 17, 19, 23];
    let (va, vb) = (a.variables(), b.variables());
    for v in (0..a.nvars).filter(|&v| va[v] && vb[v]) {
        let mut decided = false;
        for (attempt, fp) in Fp::all().iter().enumerate() {
            let point: Vec<u64> = (0..a.nvars)
                .map(|k| SAMPLES[(k + 2 * attempt) % SAMPLES.len()] + 4 * attempt as u64)
                .collect();
            let (Some(ua), Some(ub)) = (
                a.specialize_mod(v, &point, fp),
                b.specialize_mod(v, &point, fp),
            ) else {
                continue;
            };
            if ua.len() != a.degree_in(v) as usize + 1 || ub.len() != b.degree_in(v) as usize + 1 {
                continue;
            }
            if fp.gcd_degree(ua, ub) > 0 {
                return false;
            }
            decided = true;
            break;
        }
        if !decided {
            return false;
        }
    }
    true
}

/// The field Z[i]/(pi) = F_p for a prime p = 1 mod 4, with `i` sent to the
/// square root `s` of -1.
struct Fp {
    p: u64,
    s: u64,
}

impl Fp {
    fn all() -> &'static [Fp] {
        static FIELDS: std::sync::OnceLock<Vec<Fp>> = std::sync::OnceLock::new();
        FIELDS.get_or_init(|| {
            [998_244_353, 1_000_000_009, 1_004_535_809]
                .into_iter()
                .map(Fp::new)
                .collect()
        })
    }

    fn new(p: u64) -> Fp {
        let f = Fp { p, s: 0 };
        let g = (2..).find(|&g| f.pow(g, (p - 1) / 2) == p - 1).unwrap();
        Fp {
            p,
            s: f.pow(g, (p - 1) / 4),
        }
    }

    fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b) % self.p
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        (a as u128 * b as u128 % self.p as u128) as u64
    }

    fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    fn inv(&self, a: u64) -> u64 {
        self.pow(a, self.p - 2)
    }

    fn reduce_rational(&self, q: &num_rational::BigRational) -> Option<u64> {
        use num_traits::ToPrimitive;
        let p = num_bigint::BigInt::from(self.p);
        let m = |x: &num_bigint::BigInt| (((x % &p) + &p) % &p).to_u64().unwrap();
        let d = m(q.denom());
        (d != 0).then(|| self.mul(m(q.numer()), self.inv(d)))
    }

    fn reduce(&self, c: &GaussianRational) -> Option<u64> {
        let re = self.reduce_rational(c.re())?;
        let im = self.reduce_rational(c.im())?;
        Some(self.add(re, self.mul(self.s, im)))
    }

    /// Euclid on dense coefficient vectors, lowest degree first.
    fn gcd_degree(&self, mut a: Vec<u64>, mut b: Vec<u64>) -> usize {
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_empty() {
            let lb = self.inv(*b.last().unwrap());
            while a.len() >= b.len() {
                let f = self.mul(*a.last().unwrap(), lb);
                let shift = a.len() - b.len();
                for (k, &c) in b.iter().enumerate() {
                    a[shift + k] = self.sub(a[shift + k], self.mul(f, c));
                }
                a.pop();
                while a.last() == Some(&0) {
                    a.pop();
                }
            }
            std::mem::swap(&mut a, &mut b);
        }
        a.len().saturating_sub(1)
    }
}
