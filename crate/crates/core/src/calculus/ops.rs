//! Coordinate formulas for the exterior and Lie calculus.

use super::alt::{tuples, Alternating, Bivector, KForm, Multivector, Trivector, Variance};
use super::chart::Chart;
use super::tensors::{Endomorphism, SymmetricTensor, VectorField};
use crate::error::{Error, Result};
use crate::scalar::{Matrix, ScalarField};

pub fn lie_bracket(x: &VectorField, y: &VectorField) -> Result<VectorField> {
    x.chart().ensure_same(y.chart())?;
    let comps = (0..x.chart().dim())
        .map(|i| x.apply(y.component(i)) - y.apply(x.component(i)))
        .collect();
    VectorField::new(x.chart(), comps)
}

/// `d` without the top-degree guard; returns the (empty) zero form there.
pub(crate) fn d_raw(eta: &KForm) -> KForm {
    let chart = eta.chart();
    let n = chart.dim();
    let mut out = KForm::zero(chart, eta.degree() + 1);
    if eta.degree() >= n {
        return out;
    }
    for (t, c) in eta.tuples().iter().zip(eta.components()) {
        if c.is_zero() {
            continue;
        }
        for i in 0..n {
            if t.contains(&i) {
                continue;
            }
            let dc = c.partial(i);
            if dc.is_zero() {
                continue;
            }
            let mut idx = Vec::with_capacity(t.len() + 1);
            idx.push(i);
            idx.extend_from_slice(t);
            out.add_at(&idx, &dc);
        }
    }
    out
}

pub fn exterior_derivative(eta: &KForm) -> Result<KForm> {
    if eta.degree() >= eta.chart().dim() {
        return Err(Error::TopDegree);
    }
    Ok(d_raw(eta))
}

/// Contraction of `coeffs` into the first slot of `t`, shared by both
/// variances.
fn contract_first<V: Variance>(coeffs: &[ScalarField], t: &Alternating<V>) -> Alternating<V> {
    let chart = t.chart();
    let mut out = Alternating::<V>::zero(chart, t.degree() - 1);
    for (idx, c) in t.tuples().iter().zip(t.components()) {
        if c.is_zero() {
            continue;
        }
        for p in 0..idx.len() {
            let x = &coeffs[idx[p]];
            if x.is_zero() {
                continue;
            }
            let rest: Vec<usize> = idx
                .iter()
                .enumerate()
                .filter(|&(q, _)| q != p)
                .map(|(_, &v)| v)
                .collect();
            let v = x * c;
            out.add_at(&rest, &if p % 2 == 1 { -v } else { v });
        }
    }
    out
}

/// `i(X) eta`, contracting the first slot.
pub fn interior_product(x: &VectorField, eta: &KForm) -> Result<KForm> {
    x.chart().ensure_same(eta.chart())?;
    if eta.degree() == 0 {
        return Err(Error::DegreeZero);
    }
    Ok(contract_first(x.components(), eta))
}

/// `i(alpha) P` for a 1-form and a multivector, first slot.
pub fn interior_form(alpha: &KForm, p: &Multivector) -> Result<Multivector> {
    alpha.chart().ensure_same(p.chart())?;
    if p.degree() == 0 || alpha.degree() != 1 {
        return Err(Error::DegreeZero);
    }
    Ok(contract_first(alpha.components(), p))
}

/// `eta(X_1, ..., X_k)`.
pub fn evaluate_form(eta: &KForm, args: &[VectorField]) -> Result<ScalarField> {
    if args.len() != eta.degree() {
        return Err(Error::Shape(format!(
            "{} arguments for a {}-form",
            args.len(),
            eta.degree()
        )));
    }
    let mut cur = eta.clone();
    for x in args {
        cur = interior_product(x, &cur)?;
    }
    Ok(cur.components()[0].clone())
}

/// `P(alpha_1, ..., alpha_k)`.
pub fn evaluate_multivector(p: &Multivector, args: &[KForm]) -> Result<ScalarField> {
    if args.len() != p.degree() {
        return Err(Error::Shape("wrong number of arguments".into()));
    }
    let mut cur = p.clone();
    for a in args {
        cur = interior_form(a, &cur)?;
    }
    Ok(cur.components()[0].clone())
}

/// `lambda^c(X_1, ..., X_k) = lambda(F X_1, ..., F X_k)`.
pub fn twist(lambda: &KForm, f: &Endomorphism) -> Result<KForm> {
    lambda.chart().ensure_same(f.chart())?;
    let chart = lambda.chart();
    let cols: Vec<VectorField> = (0..chart.dim()).map(|j| f.column(j)).collect();
    let mut comps = Vec::new();
    for t in lambda.tuples() {
        let args: Vec<VectorField> = t.iter().map(|&j| cols[j].clone()).collect();
        comps.push(evaluate_form(lambda, &args)?);
    }
    KForm::from_components(chart, lambda.degree(), comps)
}

/// `L_X` through Cartan's formula `i(X) d + d i(X)`.
pub fn lie_derivative_form_cartan(x: &VectorField, eta: &KForm) -> Result<KForm> {
    x.chart().ensure_same(eta.chart())?;
    let a = contract_first(x.components(), &d_raw(eta));
    if eta.degree() == 0 {
        return Ok(a);
    }
    Ok(a.add(&d_raw(&contract_first(x.components(), eta))))
}

/// `L_X` through the Leibniz rule over contractions with coordinate fields.
pub fn lie_derivative_form_leibniz(x: &VectorField, eta: &KForm) -> Result<KForm> {
    x.chart().ensure_same(eta.chart())?;
    let chart = eta.chart();
    let n = chart.dim();
    let dx: Vec<Vec<ScalarField>> = (0..n)
        .map(|j| (0..n).map(|i| x.component(i).partial(j)).collect())
        .collect();
    let mut comps = Vec::new();
    for (t, c) in eta.tuples().iter().zip(eta.components()) {
        let mut acc = x.apply(c);
        for b in 0..t.len() {
            for i in 0..n {
                let g = &dx[t[b]][i];
                if g.is_zero() {
                    continue;
                }
                let mut s = t.clone();
                s[b] = i;
                acc = acc + g * &eta.get(&s);
            }
        }
        comps.push(acc);
    }
    KForm::from_components(chart, eta.degree(), comps)
}

fn lie_derivative_multivector(x: &VectorField, p: &Multivector) -> Result<Multivector> {
    x.chart().ensure_same(p.chart())?;
    let chart = p.chart();
    let n = chart.dim();
    // dx[i][a] = d_i X^a
    let dx: Vec<Vec<ScalarField>> = (0..n)
        .map(|i| (0..n).map(|a| x.component(a).partial(i)).collect())
        .collect();
    let mut comps = Vec::new();
    for (t, c) in p.tuples().iter().zip(p.components()) {
        let mut acc = x.apply(c);
        for b in 0..t.len() {
            for i in 0..n {
                let g = &dx[i][t[b]];
                if g.is_zero() {
                    continue;
                }
                let mut s = t.clone();
                s[b] = i;
                acc = acc - g * &p.get(&s);
            }
        }
        comps.push(acc);
    }
    Multivector::from_components(chart, p.degree(), comps)
}

fn lie_derivative_endomorphism(x: &VectorField, a: &Endomorphism) -> Result<Endomorphism> {
    x.chart().ensure_same(a.chart())?;
    let chart = a.chart();
    let cols: Result<Vec<VectorField>> = (0..chart.dim())
        .map(|j| {
            let e = VectorField::basis(chart, j);
            Ok(lie_bracket(x, &a.column(j))?.sub(&a.apply(&lie_bracket(x, &e)?)))
        })
        .collect();
    let cols = cols?;
    Ok(Endomorphism::from_fn(chart, |i, j| {
        cols[j].component(i).clone()
    }))
}

fn lie_derivative_symmetric(x: &VectorField, g: &SymmetricTensor) -> Result<SymmetricTensor> {
    x.chart().ensure_same(g.chart())?;
    let chart = g.chart();
    let n = chart.dim();
    SymmetricTensor::from_fn(chart, |i, j| {
        let mut acc = x.apply(g.entry(i, j));
        for k in 0..n {
            acc = acc
                + &x.component(k).partial(i) * g.entry(k, j)
                + &x.component(k).partial(j) * g.entry(i, k);
        }
        acc
    })
}

/// Tensors that admit a Lie derivative along vector fields.
pub trait LieDerivative: Sized {
    fn lie_derivative_along(&self, x: &VectorField) -> Result<Self>;
}

impl LieDerivative for KForm {
    fn lie_derivative_along(&self, x: &VectorField) -> Result<Self> {
        lie_derivative_form_cartan(x, self)
    }
}

impl LieDerivative for Multivector {
    fn lie_derivative_along(&self, x: &VectorField) -> Result<Self> {
        lie_derivative_multivector(x, self)
    }
}

impl LieDerivative for VectorField {
    fn lie_derivative_along(&self, x: &VectorField) -> Result<Self> {
        lie_bracket(x, self)
    }
}

impl LieDerivative for Endomorphism {
    fn lie_derivative_along(&self, x: &VectorField) -> Result<Self> {
        lie_derivative_endomorphism(x, self)
    }
}

impl LieDerivative for SymmetricTensor {
    fn lie_derivative_along(&self, x: &VectorField) -> Result<Self> {
        lie_derivative_symmetric(x, self)
    }
}

pub fn lie_derivative<T: LieDerivative>(x: &VectorField, t: &T) -> Result<T> {
    t.lie_derivative_along(x)
}

/// `sharp_pi(alpha) = i(alpha) pi`.
pub fn sharp_bivector(pi: &Bivector, alpha: &KForm) -> Result<VectorField> {
    VectorField::from_multivector(&interior_form(alpha, pi)?)
}

/// `flat_sigma(X) = i(X) sigma`.
pub fn flat_form(sigma: &KForm, x: &VectorField) -> Result<KForm> {
    interior_product(x, sigma)
}

/// The inverse-metric action `alpha -> gamma^{-1} alpha`.
pub fn sharp_metric(gamma: &SymmetricTensor, alpha: &KForm) -> Result<VectorField> {
    gamma.chart().ensure_same(alpha.chart())?;
    let inv = gamma.matrix().inverse("metric")?;
    VectorField::new(gamma.chart(), inv.mul_vec(alpha.components()))
}

/// Matrix of `sharp_pi` acting on 1-form components.
pub fn sharp_matrix(pi: &Bivector) -> Matrix {
    assert_eq!(pi.degree(), 2);
    let n = pi.chart().dim();
    Matrix::from_fn(pi.chart().ring(), n, n, |j, i| pi.get(&[i, j]))
}

/// Matrix of `flat_sigma` acting on vector components.
pub fn flat_matrix(sigma: &KForm) -> Matrix {
    assert_eq!(sigma.degree(), 2);
    let n = sigma.chart().dim();
    Matrix::from_fn(sigma.chart().ring(), n, n, |j, i| sigma.get(&[i, j]))
}

/// Inverse of [`sharp_matrix`]; the matrix must be antisymmetric.
pub fn bivector_from_sharp(chart: &Chart, m: &Matrix) -> Result<Bivector> {
    if *m != m.transpose().neg() {
        return Err(Error::Shape("matrix is not antisymmetric".into()));
    }
    let comps = tuples(chart.dim(), 2)
        .iter()
        .map(|t| m.get(t[1], t[0]).clone())
        .collect();
    Bivector::from_components(chart, 2, comps)
}

/// Inverse of [`flat_matrix`]; the matrix must be antisymmetric.
pub fn form_from_flat(chart: &Chart, m: &Matrix) -> Result<KForm> {
    if *m != m.transpose().neg() {
        return Err(Error::Shape("matrix is not antisymmetric".into()));
    }
    let comps = tuples(chart.dim(), 2)
        .iter()
        .map(|t| m.get(t[1], t[0]).clone())
        .collect();
    KForm::from_components(chart, 2, comps)
}

/// `N_A(X,Y) = [AX,AY] - A[X,AY] - A[AX,Y] + A^2[X,Y]`.
pub fn nijenhuis_on(a: &Endomorphism, x: &VectorField, y: &VectorField) -> Result<VectorField> {
    let ax = a.apply(x);
    let ay = a.apply(y);
    let t1 = lie_bracket(&ax, &ay)?;
    let t2 = a.apply(&lie_bracket(x, &ay)?);
    let t3 = a.apply(&lie_bracket(&ax, y)?);
    let t4 = a.apply(&a.apply(&lie_bracket(x, y)?));
    Ok(t1.sub(&t2).sub(&t3).add(&t4))
}

/// `N_A` on all coordinate-field pairs: `table[i][j] = N_A(d_i, d_j)`.
pub fn nijenhuis(a: &Endomorphism) -> Vec<Vec<VectorField>> {
    let chart = a.chart();
    let n = chart.dim();
    let e: Vec<VectorField> = (0..n).map(|i| VectorField::basis(chart, i)).collect();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| nijenhuis_on(a, &e[i], &e[j]).expect("same chart"))
                .collect()
        })
        .collect()
}

/// `[P,P]^{ijk} = 2 sum_l (P^{li} d_l P^{jk} + P^{lj} d_l P^{ki} + P^{lk} d_l P^{ij})`.
pub fn schouten_square(p: &Bivector) -> Trivector {
    assert_eq!(p.degree(), 2);
    let chart = p.chart();
    let n = chart.dim();
    let two = chart.int(2);
    let comps = tuples(n, 3)
        .iter()
        .map(|t| {
            let (i, j, k) = (t[0], t[1], t[2]);
            let mut acc = chart.zero();
            for l in 0..n {
                for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                    let pl = p.get(&[l, a]);
                    if pl.is_zero() {
                        continue;
                    }
                    acc = acc + pl * p.get(&[b, c]).partial(l);
                }
            }
            &acc * &two
        })
        .collect();
    Trivector::from_components(chart, 3, comps).expect("arity")
}

/// `[P,P] - 2 Z ^ P`; vanishes for Jacobi pairs.
pub fn jacobi_defect(p: &Bivector, z: &VectorField) -> Result<Trivector> {
    p.chart().ensure_same(z.chart())?;
    let zp = z.to_multivector().wedge(p)?;
    Ok(schouten_square(p).sub(&zp.scale(&p.chart().int(2))))
}

/// `R(pi,A)(alpha,X) = sharp_pi[L_X(alpha o A) - L_{AX} alpha] - (L_{sharp_pi alpha} A)(X)`.
pub fn concomitant_on(
    pi: &Bivector,
    a: &Endomorphism,
    alpha: &KForm,
    x: &VectorField,
) -> Result<VectorField> {
    let ax = a.apply(x);
    let inner = lie_derivative(x, &a.transpose_apply(alpha))?.sub(&lie_derivative(&ax, alpha)?);
    let first = sharp_bivector(pi, &inner)?;
    let la = lie_derivative(&sharp_bivector(pi, alpha)?, a)?;
    Ok(first.sub(&la.apply(x)))
}

/// `table[a][b] = R(pi,A)(dx^a, d_b)`.
pub fn schouten_concomitant(pi: &Bivector, a: &Endomorphism) -> Result<Vec<Vec<VectorField>>> {
    pi.chart().ensure_same(a.chart())?;
    let chart = a.chart();
    let n = chart.dim();
    (0..n)
        .map(|i| {
            let alpha = KForm::basis(chart, &[i]);
            (0..n)
                .map(|j| concomitant_on(pi, a, &alpha, &VectorField::basis(chart, j)))
                .collect()
        })
        .collect()
}

/// 1-form from its components.
pub fn one_form(chart: &Chart, comps: Vec<ScalarField>) -> Result<KForm> {
    KForm::from_components(chart, 1, comps)
}
