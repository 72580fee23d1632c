//! Generalized Riemannian metrics `(gamma, psi)`, compatible generalized
//! almost complex structures and the generalized Kähler conditions.

use std::collections::BTreeMap;

use crate::calculus::bivector_from_sharp;
use crate::calculus::{
    d_raw, evaluate_form, flat_matrix, form_from_flat, frame_involutivity, interior_product,
    lie_derivative, neutral_pairing, nijenhuis, BigOperator, Chart, Endomorphism,
    GeneralizedSection, KForm, SymmetricTensor, VectorField,
};
use crate::error::{Error, Result};
use crate::gcx::{integrability_via_torsion, matrix_labels as labels, validate_gcx, Gcx};
use crate::scalar::{GaussianRational, Matrix, ScalarField};
use crate::verdict::{Condition, Verdict};

/// A generalized Riemannian metric, `sharp_G = [[phi, sharp_gamma], [flat_beta, phi^t]]`.
#[derive(Clone, Debug)]
pub struct Grm {
    gamma: SymmetricTensor,
    psi: KForm,
    gamma_inv: Matrix,
    phi: Endomorphism,
    beta: SymmetricTensor,
}

pub fn grm_from_pair(gamma: SymmetricTensor, psi: KForm) -> Result<Grm> {
    gamma.chart().ensure_same(psi.chart())?;
    if psi.degree() != 2 {
        return Err(Error::Shape("psi must be a 2-form".into()));
    }
    let chart = gamma.chart().clone();
    let gamma_inv = gamma.matrix().inverse("metric")?;
    let phi = Endomorphism::new(&chart, gamma_inv.mul(&flat_matrix(&psi)).neg())?;
    let id = Matrix::identity(chart.ring(), chart.dim());
    let beta_m = gamma.matrix().mul(&id.sub(&phi.matrix().mul(phi.matrix())));
    let beta = SymmetricTensor::new(&chart, beta_m)?;
    Ok(Grm {
        gamma,
        psi,
        gamma_inv,
        phi,
        beta,
    })
}

impl Grm {
    pub fn chart(&self) -> &Chart {
        self.gamma.chart()
    }

    pub fn gamma(&self) -> &SymmetricTensor {
        &self.gamma
    }

    pub fn psi(&self) -> &KForm {
        &self.psi
    }

    pub fn phi(&self) -> &Endomorphism {
        &self.phi
    }

    pub fn beta(&self) -> &SymmetricTensor {
        &self.beta
    }

    pub fn gamma_inverse(&self) -> &Matrix {
        &self.gamma_inv
    }

    pub fn sharp_g(&self) -> BigOperator {
        BigOperator::from_blocks(
            self.chart(),
            self.phi.matrix(),
            &self.gamma_inv,
            self.beta.matrix(),
            &self.phi.matrix().transpose(),
        )
    }

    /// `flat_{psi + sign gamma}` as a matrix.
    pub fn flat_shift(&self, sign: i64) -> Matrix {
        flat_matrix(&self.psi).add(&self.gamma.matrix().scale(&self.chart().int(sign)))
    }

    /// `tau_pm^{-1}(X) = (X, flat_{psi pm gamma} X)`.
    pub fn tau_inv(&self, sign: i64, x: &VectorField) -> GeneralizedSection {
        let form = KForm::from_components(
            self.chart(),
            1,
            self.flat_shift(sign).mul_vec(x.components()),
        )
        .expect("arity");
        GeneralizedSection::new(x.clone(), form).expect("same chart")
    }

    /// `G(s1, s2) = 2 g(sharp_G s1, s2)`.
    pub fn big_metric(&self, s1: &GeneralizedSection, s2: &GeneralizedSection) -> ScalarField {
        let g = neutral_pairing(&self.sharp_g().apply(s1), s2).expect("same chart");
        &g * &self.chart().int(2)
    }

    /// Positive definiteness of `gamma` at the given points (leading minors).
    pub fn positive_at(&self, points: &[BTreeMap<String, GaussianRational>]) -> Result<bool> {
        let n = self.chart().dim();
        for p in points {
            for k in 1..=n {
                let minor = self.gamma.matrix().submatrix(0, 0, k, k).determinant()?;
                let v = minor.evaluate(p)?;
                if !v.is_positive_real() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// The eigenframes `{tau_+^{-1} d_i}` and `{tau_-^{-1} d_i}`.
pub fn eigenframe(metric: &Grm) -> (Vec<GeneralizedSection>, Vec<GeneralizedSection>) {
    let chart = metric.chart();
    let e: Vec<VectorField> = (0..chart.dim())
        .map(|i| VectorField::basis(chart, i))
        .collect();
    (
        e.iter().map(|x| metric.tau_inv(1, x)).collect(),
        e.iter().map(|x| metric.tau_inv(-1, x)).collect(),
    )
}

/// Defining identities of a generalized metric: involution and isometry of
/// `sharp_G`, the skew-symmetry relations, the eigenbundle property and the
/// transferred metrics `G_pm = 2 gamma`.
pub fn grm_identities(metric: &Grm) -> Verdict {
    let chart = metric.chart();
    let n = chart.dim();
    let sg = metric.sharp_g();
    let mut v = Verdict::new();
    let id2 = BigOperator::identity(chart);
    v.zero_check("sharp-G-involution", sg.compose(&sg).sub(&id2).labeled());
    let half = chart.rational(1, 2);
    let z = Matrix::zeros(chart.ring(), n, n);
    let idn = Matrix::identity(chart.ring(), n).scale(&half);
    let neutral = Matrix::from_blocks(&z, &idn, &idn, &z);
    let iso = sg
        .matrix()
        .transpose()
        .mul(&neutral)
        .mul(sg.matrix())
        .sub(&neutral);
    v.zero_check(
        "sharp-G-isometry",
        BigOperator::new(chart, iso).expect("2m x 2m").labeled(),
    );
    let g = metric.gamma.matrix();
    let b = metric.beta.matrix();
    let phi = metric.phi.matrix();
    v.zero_check(
        "phi-gamma-skew",
        labels(chart, &g.mul(phi).add(&phi.transpose().mul(g))),
    );
    v.zero_check(
        "phi-beta-skew",
        labels(chart, &b.mul(phi).add(&phi.transpose().mul(b))),
    );
    let (vp, vm) = eigenframe(metric);
    for (name, frame, sign) in [("V+-eigen", &vp, 1), ("V--eigen", &vm, -1)] {
        let mut comps = Vec::new();
        for (i, s) in frame.iter().enumerate() {
            let d = sg.apply(s).sub(&s.scale(&chart.int(sign)));
            for (l, c) in d.labeled() {
                comps.push((format!("tau^-1(@{}) {l}", chart.coords()[i]), c));
            }
        }
        v.zero_check(name, comps);
    }
    for (name, frame) in [("G+-is-2gamma", &vp), ("G--is-2gamma", &vm)] {
        let mut comps = Vec::new();
        for i in 0..n {
            for j in i..n {
                let gij = metric.big_metric(&frame[i], &frame[j]);
                let d = gij - metric.gamma.entry(i, j) * &chart.int(2);
                comps.push((format!("[{},{}]", chart.coords()[i], chart.coords()[j]), d));
            }
        }
        v.zero_check(name, comps);
    }
    v
}

/// `sharp_G J = J sharp_G`.
pub fn compat_check(metric: &Grm, j: &Gcx) -> Verdict {
    let mut v = Verdict::new();
    if metric.chart() != j.chart() {
        v.flag("commutes-with-sharp-G", false, "different charts");
        return v;
    }
    let sg = metric.sharp_g();
    let op = j.operator();
    v.zero_check(
        "commutes-with-sharp-G",
        sg.compose(&op).sub(&op.compose(&sg)).labeled(),
    );
    v
}

/// A generalized almost Hermitian structure with its quadruple data.
#[derive(Clone, Debug)]
pub struct Gah {
    metric: Grm,
    j: Gcx,
    jplus: Endomorphism,
    jminus: Endomorphism,
    omega_plus: KForm,
    omega_minus: KForm,
}

/// `J_pm = A + sharp_pi flat_{psi pm gamma}`.
fn transfer_one(metric: &Grm, j: &Gcx, sign: i64) -> Endomorphism {
    let sp = crate::calculus::sharp_matrix(j.pi());
    let m = j.a().matrix().add(&sp.mul(&metric.flat_shift(sign)));
    Endomorphism::new(metric.chart(), m).expect("shape")
}

/// Clauses making `(gamma, J)` almost Hermitian.
pub fn almost_hermitian(gamma: &SymmetricTensor, jm: &Endomorphism, tag: &str) -> Verdict {
    let chart = gamma.chart();
    let id = Matrix::identity(chart.ring(), chart.dim());
    let m = jm.matrix();
    let mut v = Verdict::new();
    v.zero_check(
        format!("{tag}-square-is-minus-identity"),
        labels(chart, &m.mul(m).add(&id)),
    );
    v.zero_check(
        format!("{tag}-preserves-gamma"),
        labels(
            chart,
            &m.transpose().mul(gamma.matrix()).mul(m).sub(gamma.matrix()),
        ),
    );
    v
}

/// `omega(X, Y) = gamma(JX, Y)`.
pub fn kahler_form(gamma: &SymmetricTensor, jm: &Endomorphism) -> Result<KForm> {
    form_from_flat(gamma.chart(), &gamma.matrix().mul(jm.matrix()))
        .map_err(|_| Error::Incompatible("gamma(JX,Y) is not skew".into()))
}

impl Gah {
    pub fn new(metric: Grm, j: Gcx) -> Result<Gah> {
        let c = compat_check(&metric, &j);
        if !c.pass() {
            return Err(Error::Invalid(Box::new(c)));
        }
        let jplus = transfer_one(&metric, &j, 1);
        let jminus = transfer_one(&metric, &j, -1);
        for (jm, tag) in [(&jplus, "J+"), (&jminus, "J-")] {
            let h = almost_hermitian(metric.gamma(), jm, tag);
            if !h.pass() {
                return Err(Error::Invalid(Box::new(h)));
            }
        }
        let omega_plus = kahler_form(metric.gamma(), &jplus)?;
        let omega_minus = kahler_form(metric.gamma(), &jminus)?;
        Ok(Gah {
            metric,
            j,
            jplus,
            jminus,
            omega_plus,
            omega_minus,
        })
    }

    pub fn chart(&self) -> &Chart {
        self.metric.chart()
    }

    pub fn metric(&self) -> &Grm {
        &self.metric
    }

    pub fn gcx(&self) -> &Gcx {
        &self.j
    }

    pub fn jplus(&self) -> &Endomorphism {
        &self.jplus
    }

    pub fn jminus(&self) -> &Endomorphism {
        &self.jminus
    }

    pub fn omega_plus(&self) -> &KForm {
        &self.omega_plus
    }

    pub fn omega_minus(&self) -> &KForm {
        &self.omega_minus
    }

    fn j_sign(&self, sign: i64) -> &Endomorphism {
        if sign > 0 {
            &self.jplus
        } else {
            &self.jminus
        }
    }

    fn omega_sign(&self, sign: i64) -> &KForm {
        if sign > 0 {
            &self.omega_plus
        } else {
            &self.omega_minus
        }
    }
}

/// `(J_+, J_-, omega_+, omega_-)`.
pub fn transfer(s: &Gah) -> (Endomorphism, Endomorphism, KForm, KForm) {
    (
        s.jplus.clone(),
        s.jminus.clone(),
        s.omega_plus.clone(),
        s.omega_minus.clone(),
    )
}

/// Rebuilds `J` from `(gamma, psi, J_+, J_-)`. `sharp_pi` and `A` come from
/// the closed formulas; `flat_sigma` is the unique solution of the
/// upper-left block of `sharp_G J = J sharp_G`, after which the full
/// identity is verified.
pub fn reconstruct(
    gamma: &SymmetricTensor,
    psi: &KForm,
    jplus: &Endomorphism,
    jminus: &Endomorphism,
) -> Result<Gcx> {
    for (jm, tag) in [(jplus, "J+"), (jminus, "J-")] {
        let h = almost_hermitian(gamma, jm, tag);
        if !h.pass() {
            return Err(Error::Invalid(Box::new(h)));
        }
    }
    let metric = grm_from_pair(gamma.clone(), psi.clone())?;
    let chart = metric.chart().clone();
    let half = chart.rational(1, 2);
    let id = Matrix::identity(chart.ring(), chart.dim());
    let gi = metric.gamma_inverse();
    let q = gi.mul(&flat_matrix(psi));
    let sharp_pi = jplus.matrix().sub(jminus.matrix()).mul(gi).scale(&half);
    let a = jplus
        .matrix()
        .mul(&id.sub(&q))
        .add(&jminus.matrix().mul(&id.add(&q)))
        .scale(&half);
    let phi = metric.phi().matrix();
    // phi A + sharp_gamma flat_sigma = A phi + sharp_pi flat_beta
    let rhs = a
        .mul(phi)
        .sub(&phi.mul(&a))
        .add(&sharp_pi.mul(metric.beta().matrix()));
    let flat_sigma = gamma.matrix().mul(&rhs);
    let pi = bivector_from_sharp(&chart, &sharp_pi)
        .map_err(|_| Error::Unsolvable("(J+ - J-) sharp_gamma is not skew".into()))?;
    let sigma = form_from_flat(&chart, &flat_sigma).map_err(|_| {
        Error::Unsolvable("no 2-form sigma satisfies the compatibility identity".into())
    })?;
    let j = validate_gcx(Endomorphism::new(&chart, a)?, pi, sigma)
        .map_err(|e| Error::Unsolvable(format!("reconstructed data is not a Gcx: {e}")))?;
    if !compat_check(&metric, &j).pass() {
        return Err(Error::Unsolvable(
            "compatibility identity has no solution".into(),
        ));
    }
    Ok(j)
}

/// `J^c = sharp_G J`.
pub fn complementary(s: &Gah) -> Result<Gcx> {
    Gcx::from_operator(&s.metric.sharp_g().compose(&s.j.operator()))
}

/// Christoffel symbols `table[k][i][j] = Gamma^k_{ij}` of the Levi-Civita
/// connection.
pub fn levi_civita(gamma: &SymmetricTensor) -> Result<Vec<Vec<Vec<ScalarField>>>> {
    let chart = gamma.chart();
    let n = chart.dim();
    let inv = gamma.matrix().inverse("metric")?;
    let dg: Vec<Vec<Vec<ScalarField>>> = (0..n)
        .map(|l| {
            (0..n)
                .map(|i| (0..n).map(|j| gamma.entry(i, j).partial(l)).collect())
                .collect()
        })
        .collect();
    let half = chart.rational(1, 2);
    // first kind: [ij, l] = (d_i g_jl + d_j g_il - d_l g_ij) / 2
    let mut table = vec![vec![vec![chart.zero(); n]; n]; n];
    for i in 0..n {
        for j in i..n {
            let first: Vec<ScalarField> = (0..n)
                .map(|l| &(&(&dg[i][j][l] + &dg[j][i][l]) - &dg[l][i][j]) * &half)
                .collect();
            for k in 0..n {
                let mut acc = chart.zero();
                for (l, f) in first.iter().enumerate() {
                    if !f.is_zero() {
                        acc = acc + inv.get(k, l) * f;
                    }
                }
                table[k][j][i] = acc.clone();
                table[k][i][j] = acc;
            }
        }
    }
    Ok(table)
}

/// `(nabla_a J)^i_b` from a Christoffel table.
pub fn covariant_derivative_endo(
    christoffel: &[Vec<Vec<ScalarField>>],
    jm: &Endomorphism,
    a: usize,
) -> Endomorphism {
    let chart = jm.chart();
    let n = chart.dim();
    Endomorphism::from_fn(chart, |i, b| {
        let mut acc = jm.entry(i, b).partial(a);
        for k in 0..n {
            acc = acc + &christoffel[i][a][k] * jm.entry(k, b)
                - jm.entry(i, k) * &christoffel[k][a][b];
        }
        acc
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KahlerMethod {
    /// Covariant derivative of `J_pm` against `d psi`.
    G4,
    /// `d omega_pm (J X, J Y, J Z) = pm d psi(X, Y, Z)`.
    G6,
    /// Courant closure of the eigenbundles `L_pm`.
    Closure,
    /// Integrability of both `J` and `J^c`.
    Torsion,
}

impl KahlerMethod {
    pub fn name(self) -> &'static str {
        match self {
            KahlerMethod::G4 => "G4",
            KahlerMethod::G6 => "G6",
            KahlerMethod::Closure => "closure",
            KahlerMethod::Torsion => "torsion",
        }
    }
}

fn sign_tag(sign: i64) -> &'static str {
    if sign > 0 {
        "+"
    } else {
        "-"
    }
}

fn hermitian_conditions(s: &Gah, v: &mut Verdict) {
    for sign in [1, -1] {
        let nj = nijenhuis(s.j_sign(sign));
        let names = s.chart().coords();
        let mut comps = Vec::new();
        for (p, row) in nj.iter().enumerate() {
            for (q, x) in row.iter().enumerate().skip(p + 1) {
                for (l, c) in x.labeled() {
                    comps.push((format!("N(@{},@{}) {l}", names[p], names[q]), c));
                }
            }
        }
        v.zero_check(format!("J{}-integrable", sign_tag(sign)), comps);
    }
}

/// `(nabla_X J)(Y) = pm 1/2 sharp_gamma[i(X) i(JY) d psi + (i(Y) i(X) d psi) o J]`.
fn g4(s: &Gah, v: &mut Verdict) -> Result<()> {
    let chart = s.chart();
    let n = chart.dim();
    let names = chart.coords();
    let gamma = s.metric.gamma();
    let chr = levi_civita(gamma)?;
    let dpsi = d_raw(s.metric.psi());
    let gi = s.metric.gamma_inverse();
    let e: Vec<VectorField> = (0..n).map(|i| VectorField::basis(chart, i)).collect();
    for sign in [1, -1] {
        let jm = s.j_sign(sign);
        let factor = chart.rational(sign, 2);
        let mut comps = Vec::new();
        for a in 0..n {
            let nj = covariant_derivative_endo(&chr, jm, a);
            for b in 0..n {
                let jy = jm.apply(&e[b]);
                // i(X) i(JY) dpsi = dpsi(JY, X, .); (i(Y) i(X) dpsi) o J = dpsi(X, Y, J .)
                let t1 = interior_product(&e[a], &interior_product(&jy, &dpsi)?)?;
                let t2 =
                    jm.transpose_apply(&interior_product(&e[b], &interior_product(&e[a], &dpsi)?)?);
                let form = t1.add(&t2);
                let rhs = gi.mul_vec(form.components());
                for i in 0..n {
                    let d = nj.entry(i, b) - &(&rhs[i] * &factor);
                    comps.push((
                        format!("(nabla_{} J)(@{}) @{}", names[a], names[b], names[i]),
                        d,
                    ));
                }
            }
        }
        v.zero_check(format!("levi-civita-identity{}", sign_tag(sign)), comps);
    }
    Ok(())
}

fn g6(s: &Gah, v: &mut Verdict) -> Result<()> {
    let chart = s.chart();
    let n = chart.dim();
    let names = chart.coords();
    let dpsi = d_raw(s.metric.psi());
    let e: Vec<VectorField> = (0..n).map(|i| VectorField::basis(chart, i)).collect();
    for sign in [1, -1] {
        let jm = s.j_sign(sign);
        let domega = d_raw(s.omega_sign(sign));
        let je: Vec<VectorField> = e.iter().map(|x| jm.apply(x)).collect();
        let mut comps = Vec::new();
        if n >= 3 {
            for (t, rhs) in dpsi.tuples().iter().zip(dpsi.components()) {
                let lhs = evaluate_form(
                    &domega,
                    &[je[t[0]].clone(), je[t[1]].clone(), je[t[2]].clone()],
                )?;
                let d = lhs - rhs * &chart.int(sign);
                comps.push((
                    format!("d{}^^d{}^^d{}", names[t[0]], names[t[1]], names[t[2]]),
                    d,
                ));
            }
        }
        v.zero_check(
            format!("fundamental-form-identity{}", sign_tag(sign)),
            comps,
        );
    }
    Ok(())
}

/// Basis of the `i`-eigenbundle of `J`: independent columns of `Id - iJ`.
pub fn holomorphic_frame(jm: &Endomorphism) -> Result<Vec<VectorField>> {
    let chart = jm.chart();
    let n = chart.dim();
    let i = chart.constant(GaussianRational::i());
    let m = Matrix::identity(chart.ring(), n).sub(&jm.matrix().scale(&i));
    let e = m.echelon();
    if e.rank * 2 != n {
        return Err(Error::NoEigenframe(format!(
            "Id - iJ has generic rank {} instead of {}",
            e.rank,
            n / 2
        )));
    }
    Ok(e.pivot_cols
        .iter()
        .map(|&c| VectorField::new(chart, m.column(c)).expect("arity"))
        .collect())
}

fn closure(s: &Gah, v: &mut Verdict) -> Result<()> {
    let chart = s.chart();
    let dpsi = d_raw(s.metric.psi());
    let gamma = s.metric.gamma();
    for sign in [1, -1] {
        let sframe = holomorphic_frame(s.j_sign(sign))?;
        let lframe: Vec<GeneralizedSection> =
            sframe.iter().map(|x| s.metric.tau_inv(sign, x)).collect();
        let fv = frame_involutivity(&lframe, true)?;
        v.summarize(format!("L{}-closed", sign_tag(sign)), &fv);
        // Form part of the bracket beyond flat_{psi pm gamma}[X,Y]:
        // i(Y) i(X) d psi pm (L_X i(Y) gamma - i(X) L_Y gamma).
        let mut comps = Vec::new();
        for (p, x) in sframe.iter().enumerate() {
            for (q, y) in sframe.iter().enumerate().skip(p + 1) {
                let t1 = interior_product(y, &interior_product(x, &dpsi)?)?;
                let iyg = gamma.flat(y);
                let lyg = lie_derivative(y, gamma)?;
                let ixlyg = lyg.flat(x);
                let t2 = lie_derivative(x, &iyg)?.sub(&ixlyg).scale(&chart.int(sign));
                for (l, c) in t1.add(&t2).labeled() {
                    comps.push((format!("S({p},{q}) {l}"), c));
                }
            }
        }
        v.diagnostic(Condition::vanishing(
            format!("eigenbundle-form-term{}", sign_tag(sign)),
            comps,
        ));
    }
    Ok(())
}

pub fn kahler_check(s: &Gah, method: KahlerMethod) -> Result<Verdict> {
    let mut v = Verdict::new();
    if method != KahlerMethod::Torsion {
        hermitian_conditions(s, &mut v);
    }
    match method {
        KahlerMethod::G4 => g4(s, &mut v)?,
        KahlerMethod::G6 => g6(s, &mut v)?,
        KahlerMethod::Closure => closure(s, &mut v)?,
        KahlerMethod::Torsion => {
            v.summarize("J-integrable", &integrability_via_torsion(s.gcx()));
            v.summarize(
                "Jc-integrable",
                &integrability_via_torsion(&complementary(s)?),
            );
        }
    }
    v.assumptions
        .push("gamma positive definite (certified only at sample points, if any)".into());
    Ok(v)
}
