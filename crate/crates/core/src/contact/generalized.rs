//! Generalized almost contact structures `(F, P, theta, Z, xi)`, their
//! normality and generalized contact conditions.

use std::collections::BTreeMap;

use super::classical::{pair, time_covector, time_vector, Cac};
use crate::calculus::{
    bivector_from_sharp, courant_bracket, d_raw, evaluate_form, flat_matrix, form_from_flat,
    frame_involutivity, interior_product, jacobi_defect, lie_derivative, neutral_pairing,
    nijenhuis, schouten_concomitant, schouten_square, sharp_bivector, sharp_matrix, BigOperator,
    Bivector, Chart, Endomorphism, GeneralizedSection, KForm, Multivector, VectorField,
};
use crate::error::{Error, Result};
use crate::gcx::{integrability_via_torsion, matrix_labels, validate_gcx, Gcx};
use crate::scalar::{GaussianRational, Matrix, ScalarField};
use crate::verdict::{Condition, Verdict};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gac {
    f: Endomorphism,
    p: Bivector,
    theta: KForm,
    z: VectorField,
    xi: KForm,
}

fn check_kinds(
    f: &Endomorphism,
    p: &Bivector,
    theta: &KForm,
    z: &VectorField,
    xi: &KForm,
) -> Result<()> {
    let chart = f.chart();
    chart.ensure_same(p.chart())?;
    chart.ensure_same(theta.chart())?;
    chart.ensure_same(z.chart())?;
    chart.ensure_same(xi.chart())?;
    if p.degree() != 2 || theta.degree() != 2 || xi.degree() != 1 {
        return Err(Error::Shape(
            "expected a bivector P, 2-form theta and 1-form xi".into(),
        ));
    }
    if chart.dim() % 2 == 0 {
        return Err(Error::EvenDimension(chart.dim()));
    }
    Ok(())
}

/// The eight tensor clauses.
pub fn gac_tensor_clauses(
    f: &Endomorphism,
    p: &Bivector,
    theta: &KForm,
    z: &VectorField,
    xi: &KForm,
) -> Result<Verdict> {
    check_kinds(f, p, theta, z, xi)?;
    let chart = f.chart();
    let fm = f.matrix();
    let sp = sharp_matrix(p);
    let ft = flat_matrix(theta);
    let id = Matrix::identity(chart.ring(), chart.dim());
    let zxi = Endomorphism::outer(z, xi);
    let mut v = Verdict::new();
    v.zero_check(
        "F-sharpP",
        matrix_labels(chart, &fm.mul(&sp).sub(&sp.mul(&fm.transpose()))),
    );
    v.zero_check(
        "flat-theta-F",
        matrix_labels(chart, &ft.mul(fm).sub(&fm.transpose().mul(&ft))),
    );
    v.zero_check("iZ-theta", interior_product(z, theta)?.labeled());
    v.zero_check("ixi-P", sharp_bivector(p, xi)?.labeled());
    v.zero_check(
        "F-square",
        matrix_labels(
            chart,
            &fm.mul(fm).add(&id).add(&sp.mul(&ft)).sub(zxi.matrix()),
        ),
    );
    v.zero_check("F-Z", f.apply(z).labeled());
    v.zero_check("xi-F", f.transpose_apply(xi).labeled());
    v.zero_check("xi-Z", [("xi(Z)-1".to_string(), pair(xi, z) - chart.one())]);
    Ok(v)
}

/// `calF = [[F, sharp_P], [flat_theta, -F^t]]`.
fn calf(f: &Endomorphism, p: &Bivector, theta: &KForm) -> BigOperator {
    BigOperator::generalized(f, p, theta)
}

/// `calZ = [[Z (x) xi, 0], [0, (Z (x) xi)^t]]`.
fn calz(z: &VectorField, xi: &KForm) -> BigOperator {
    let chart = z.chart();
    let zxi = Endomorphism::outer(z, xi).matrix().clone();
    let zero = Matrix::zeros(chart.ring(), chart.dim(), chart.dim());
    BigOperator::from_blocks(chart, &zxi, &zero, &zero, &zxi.transpose())
}

/// The same clauses read off the operator identities `F^2 = -Id + Z`,
/// `F Z = 0`, `|(Z, xi)| = 1` and skewness for the neutral metric.
pub fn gac_operator_clauses(
    f: &Endomorphism,
    p: &Bivector,
    theta: &KForm,
    z: &VectorField,
    xi: &KForm,
) -> Result<Verdict> {
    check_kinds(f, p, theta, z, xi)?;
    let chart = f.chart();
    let n = chart.dim();
    let fo = calf(f, p, theta);
    let zo = calz(z, xi);
    let sq = fo.compose(&fo).add(&BigOperator::identity(chart)).sub(&zo);
    let fz = fo.compose(&zo);
    let zeros = Matrix::zeros(chart.ring(), n, n);
    let id = Matrix::identity(chart.ring(), n);
    let neutral = Matrix::from_blocks(&zeros, &id, &id, &zeros);
    let skew = fo
        .matrix()
        .transpose()
        .mul(&neutral)
        .add(&neutral.mul(fo.matrix()));
    let mut v = Verdict::new();
    v.zero_check("F-square", matrix_labels(chart, &sq.block(0, 0)));
    v.zero_check("F-square-dual", matrix_labels(chart, &sq.block(1, 1)));
    v.zero_check("F-sharpP", matrix_labels(chart, &sq.block(0, 1)));
    v.zero_check("flat-theta-F", matrix_labels(chart, &sq.block(1, 0)));
    v.zero_check("F-Z", matrix_labels(chart, &fz.block(0, 0)));
    v.zero_check("ixi-P", matrix_labels(chart, &fz.block(0, 1)));
    v.zero_check("iZ-theta", matrix_labels(chart, &fz.block(1, 0)));
    v.zero_check("xi-F", matrix_labels(chart, &fz.block(1, 1)));
    let zx = GeneralizedSection::new(z.clone(), xi.clone())?;
    v.zero_check(
        "xi-Z",
        [(
            "|(Z,xi)|-1".to_string(),
            neutral_pairing(&zx, &zx)? - chart.one(),
        )],
    );
    v.zero_check(
        "neutral-skew",
        skew.entries()
            .map(|((i, j), c)| (format!("[{i},{j}]"), c.clone())),
    );
    Ok(v)
}

/// Tensor clauses, operator clauses under `operator/`, and a condition
/// asserting that both forms agree clause by clause.
pub fn gac_axioms(
    f: &Endomorphism,
    p: &Bivector,
    theta: &KForm,
    z: &VectorField,
    xi: &KForm,
) -> Result<Verdict> {
    let tensor = gac_tensor_clauses(f, p, theta, z, xi)?;
    let op = gac_operator_clauses(f, p, theta, z, xi)?;
    let disagree: Vec<String> = tensor
        .conditions
        .iter()
        .filter(|c| op.passed(&c.id) != c.pass())
        .map(|c| c.id.clone())
        .collect();
    let mut v = tensor;
    v.absorb("operator", op);
    v.flag(
        "tensor-operator-agreement",
        disagree.is_empty(),
        disagree.join(","),
    );
    Ok(v)
}

pub fn validate_gac(
    f: Endomorphism,
    p: Bivector,
    theta: KForm,
    z: VectorField,
    xi: KForm,
) -> Result<Gac> {
    let v = gac_axioms(&f, &p, &theta, &z, &xi)?;
    if !v.pass() {
        return Err(Error::Invalid(Box::new(v)));
    }
    Ok(Gac { f, p, theta, z, xi })
}

/// Inputs of the standard constructions.
#[derive(Clone, Debug)]
pub enum GacSource<'a> {
    /// `(F, 0, 0, Z, xi)`.
    Cac(&'a Cac),
    /// `theta = d xi`, `Z` the Reeb field, `F = 0`.
    ContactForm {
        xi: KForm,
        sample: &'a BTreeMap<String, GaussianRational>,
    },
    /// `Z` with `xi(Z) = 1`, `i(Z) theta = 0`, `F = 0`.
    Cosymplectic {
        xi: KForm,
        theta: KForm,
        sample: &'a BTreeMap<String, GaussianRational>,
    },
}

/// `xi ^ theta^n`, the top form certifying non-degeneracy.
pub fn volume_certificate(xi: &KForm, theta: &KForm) -> Result<KForm> {
    let n = xi.chart().dim() / 2;
    let mut top = xi.clone();
    for _ in 0..n {
        top = top.wedge(theta)?;
    }
    Ok(top)
}

fn nonvanishing_at(top: &ScalarField, sample: &BTreeMap<String, GaussianRational>) -> Result<bool> {
    if top.is_zero() {
        return Ok(false);
    }
    Ok(top.evaluate(sample)? != GaussianRational::from_int(0))
}

/// Builds `(0, P, theta, Z, xi)` from `xi ^ theta^n != 0`.
fn from_form_pair(
    xi: KForm,
    theta: KForm,
    sample: &BTreeMap<String, GaussianRational>,
) -> Result<Gac> {
    xi.chart().ensure_same(theta.chart())?;
    let chart = xi.chart().clone();
    let n = chart.dim();
    if n % 2 == 0 {
        return Err(Error::EvenDimension(n));
    }
    if xi.degree() != 1 || theta.degree() != 2 {
        return Err(Error::Shape("expected a 1-form and a 2-form".into()));
    }
    let top = volume_certificate(&xi, &theta)?;
    if !nonvanishing_at(&top.components()[0], sample)? {
        return Err(Error::Degenerate(
            "xi ^ theta^n vanishes at the sample point",
        ));
    }
    let ft = flat_matrix(&theta);
    let xcol = Matrix::from_fn(chart.ring(), n, 1, |i, _| xi.components()[i].clone());
    // xi(Z) = 1 and i(Z) theta = 0 as one (n+1) x n system.
    let lhs = Matrix::from_fn(chart.ring(), n + 1, n, |r, c| {
        if r == 0 {
            xi.components()[c].clone()
        } else {
            ft.get(r - 1, c).clone()
        }
    });
    let rhs = Matrix::from_fn(chart.ring(), n + 1, 1, |r, _| {
        if r == 0 {
            chart.one()
        } else {
            chart.zero()
        }
    });
    let zcol = lhs
        .solve(&rhs)
        .map_err(|e| Error::Unsolvable(format!("no Reeb field: {e}")))?;
    let z = VectorField::new(&chart, zcol.column(0))?;
    // phi(X) = flat_theta X - xi(X) xi, and sharp_P = phi^{-t} flat_theta phi^{-1}.
    let phi = ft.sub(&xcol.mul(&xcol.transpose()));
    let inv = phi.inverse("phi = flat_theta - xi (x) xi")?;
    let sp = inv.transpose().mul(&ft).mul(&inv);
    let p = bivector_from_sharp(&chart, &sp)?;
    validate_gac(Endomorphism::zero(&chart), p, theta, z, xi)
}

pub fn gac_construct(source: GacSource<'_>) -> Result<Gac> {
    match source {
        GacSource::Cac(c) => {
            let chart = c.chart();
            validate_gac(
                c.f().clone(),
                Bivector::zero(chart, 2),
                KForm::zero(chart, 2),
                c.z().clone(),
                c.xi().clone(),
            )
        }
        GacSource::ContactForm { xi, sample } => {
            let theta = d_raw(&xi);
            from_form_pair(xi, theta, sample)
        }
        GacSource::Cosymplectic { xi, theta, sample } => from_form_pair(xi, theta, sample),
    }
}

impl Gac {
    pub fn chart(&self) -> &Chart {
        self.f.chart()
    }

    pub fn f(&self) -> &Endomorphism {
        &self.f
    }

    pub fn p(&self) -> &Bivector {
        &self.p
    }

    pub fn theta(&self) -> &KForm {
        &self.theta
    }

    pub fn z(&self) -> &VectorField {
        &self.z
    }

    pub fn xi(&self) -> &KForm {
        &self.xi
    }

    pub fn operator(&self) -> BigOperator {
        calf(&self.f, &self.p, &self.theta)
    }

    pub fn z_operator(&self) -> BigOperator {
        calz(&self.z, &self.xi)
    }

    /// `theta_F(X, Y) = theta(FX, Y)`.
    pub fn theta_f(&self) -> KForm {
        form_from_flat(self.chart(), &flat_matrix(&self.theta).mul(self.f.matrix()))
            .expect("F-compatible theta")
    }
}

/// Classical data of the generalized almost complex structure on the
/// cylinder, with `pi` and `sigma` scaled by `e^{k t}` and `e^{-k t}`.
fn cylinder_structure(s: &Gac, k: i32) -> Result<Gcx> {
    let cyl = s.chart().cylinder_over()?;
    let a = s.f().embed_into(&cyl)?;
    let dt = time_covector(&cyl);
    let dtv = time_vector(&cyl).to_multivector();
    let pi = s
        .p()
        .embed_into(&cyl)?
        .add(&s.z().embed_into(&cyl)?.to_multivector().wedge(&dtv)?);
    let sigma = s
        .theta()
        .embed_into(&cyl)?
        .add(&s.xi().embed_into(&cyl)?.wedge(&dt)?);
    if k == 0 {
        return validate_gcx(a, pi, sigma);
    }
    validate_gcx(a, pi.scale(&cyl.exp_t(k)?), sigma.scale(&cyl.exp_t(-k)?))
}

/// `A = F`, `pi = P + Z ^ d/dt`, `sigma = theta + xi ^ dt` on `M x R`.
pub fn adapt_to_cylinder(s: &Gac) -> Result<Gcx> {
    cylinder_structure(s, 0)
}

/// The conformal change `pi = e^t (P + Z ^ d/dt)`, `sigma = e^{-t} (theta + xi ^ dt)`.
pub fn conformal_cylinder(s: &Gac) -> Result<Gcx> {
    cylinder_structure(s, 1)
}

/// Translation invariance and the two block conditions `J(TR + 0) in T*M` and
/// `J(0 + T*R) in TM`.
pub fn adaptedness(j: &Gcx) -> Result<Verdict> {
    let chart = j.chart();
    let t = chart.time_index().ok_or(Error::NotCylinder)?;
    let n = chart.dim();
    let op = j.operator();
    let m = op.matrix();
    let mut v = Verdict::new();
    v.zero_check(
        "translation-invariant",
        m.entries()
            .map(|((r, c), x)| (format!("[{r},{c}]"), x.partial(t))),
    );
    let col_t = m.column(t);
    let mut comps: Vec<(String, ScalarField)> = (0..n)
        .map(|r| (format!("vector[{r}]"), col_t[r].clone()))
        .collect();
    comps.push(("form[dt]".into(), col_t[n + t].clone()));
    v.zero_check("J(d/dt)-in-T*M", comps);
    let col_dt = m.column(n + t);
    let mut comps: Vec<(String, ScalarField)> = (0..n)
        .map(|r| (format!("form[{r}]"), col_dt[n + r].clone()))
        .collect();
    comps.push(("vector[d/dt]".into(), col_dt[t].clone()));
    v.zero_check("J(dt)-in-TM", comps);
    Ok(v)
}

/// Normality checker selection.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormalityMethod {
    Direct,
    Big,
    Cylinder,
}

impl NormalityMethod {
    pub fn name(self) -> &'static str {
        match self {
            NormalityMethod::Direct => "direct",
            NormalityMethod::Big => "big",
            NormalityMethod::Cylinder => "cylinder",
        }
    }
}

/// Generalized contact checker selection.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContactMethod {
    Direct,
    Cylinder,
}

impl ContactMethod {
    pub fn name(self) -> &'static str {
        match self {
            ContactMethod::Direct => "direct",
            ContactMethod::Cylinder => "cylinder",
        }
    }
}

const HEAD: [&str; 7] = [
    "P-poisson",
    "schouten-concomitant",
    "LZ-P",
    "LZ-theta",
    "LsharpP-xi",
    "nijenhuis-F",
    "d-theta-F",
];
const TAIL: [&str; 3] = ["LZ-xi", "LZ-F", "LFX-xi"];

/// The tensor conditions; `contact` selects the conformally changed
/// (generalized contact) variant.
fn adapted_conditions(s: &Gac, contact: bool) -> Result<Verdict> {
    let chart = s.chart();
    let n = chart.dim();
    let names = chart.coords();
    let e: Vec<VectorField> = (0..n).map(|i| VectorField::basis(chart, i)).collect();
    let (f, p, theta, z, xi) = (s.f(), s.p(), s.theta(), s.z(), s.xi());
    let mut v = Verdict::new();

    if contact {
        v.zero_check("P-Z-jacobi", jacobi_defect(p, z)?.labeled());
    } else {
        v.zero_check("P-poisson", schouten_square(p).labeled());
    }

    let r = schouten_concomitant(p, f)?;
    let mut comps = Vec::new();
    for (i, row) in r.iter().enumerate() {
        for (k, x) in row.iter().enumerate() {
            for (l, c) in x.labeled() {
                comps.push((format!("R(d{},@{}) {l}", names[i], names[k]), c));
            }
        }
    }
    v.zero_check("schouten-concomitant", comps);
    v.zero_check("LZ-P", lie_derivative(z, p)?.labeled());
    v.zero_check("LZ-theta", lie_derivative(z, theta)?.labeled());

    let mut comps = Vec::new();
    for i in 0..n {
        let x = sharp_bivector(p, &KForm::basis(chart, &[i]))?;
        let mut t = lie_derivative(&x, xi)?;
        if contact {
            t = t.sub(&interior_product(&x, theta)?);
        }
        for (l, c) in t.labeled() {
            comps.push((format!("alpha=d{} {l}", names[i]), c));
        }
    }
    v.zero_check("LsharpP-xi", comps);

    let nij = nijenhuis(f);
    let dtheta = d_raw(theta);
    let dxi = d_raw(xi);
    let mut comps = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let form = interior_product(&e[b], &interior_product(&e[a], &dtheta)?)?;
            let mut coeff = dxi.get(&[a, b]);
            if contact {
                coeff = coeff - theta.get(&[a, b]);
            }
            let t = nij[a][b]
                .sub(&sharp_bivector(p, &form)?)
                .add(&z.scale(&coeff));
            for (l, c) in t.labeled() {
                comps.push((format!("N_F(@{},@{}) {l}", names[a], names[b]), c));
            }
        }
    }
    v.zero_check("nijenhuis-F", comps);

    let theta_f = s.theta_f();
    let dtf = d_raw(&theta_f);
    let fe: Vec<VectorField> = e.iter().map(|x| f.apply(x)).collect();
    let mut comps = Vec::new();
    for (t, lhs) in dtf.tuples().iter().zip(dtf.components()) {
        let (x, y, w) = (t[0], t[1], t[2]);
        let mut rhs = chart.zero();
        for (a, b, c) in [(x, y, w), (y, w, x), (w, x, y)] {
            rhs = rhs + evaluate_form(&dtheta, &[fe[a].clone(), e[b].clone(), e[c].clone()])?;
        }
        comps.push((
            format!("d{}^^d{}^^d{}", names[x], names[y], names[w]),
            lhs - &rhs,
        ));
    }
    v.zero_check("d-theta-F", comps);

    v.zero_check("LZ-xi", lie_derivative(z, xi)?.labeled());
    v.zero_check("LZ-F", lie_derivative(z, f)?.labeled());

    let lfx: Vec<KForm> = fe
        .iter()
        .map(|x| lie_derivative(x, xi))
        .collect::<Result<_>>()?;
    let mut comps = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let mut t = pair(&lfx[a], &e[b]) - pair(&lfx[b], &e[a]);
            if contact {
                t = t - theta_f.get(&[a, b]);
            }
            comps.push((format!("@{},@{}", names[a], names[b]), t));
        }
    }
    v.zero_check("LFX-xi", comps);
    Ok(v)
}

/// Whether `sharp_P o flat_theta` generically lacks the eigenvalue `-1`.
fn no_minus_one_eigenvalue(s: &Gac) -> Result<bool> {
    let chart = s.chart();
    let m = Matrix::identity(chart.ring(), chart.dim())
        .add(&sharp_matrix(s.p()).mul(&flat_matrix(s.theta())));
    Ok(!m.determinant()?.is_zero())
}

fn normality_direct(s: &Gac) -> Result<Verdict> {
    let mut v = adapted_conditions(s, false)?;
    if no_minus_one_eigenvalue(s)? {
        let head = HEAD.iter().all(|id| v.passed(id));
        let tail = TAIL.iter().all(|id| v.passed(id));
        v.diagnostic(Condition::flag(
            "tail-follows-from-head",
            !head || tail,
            "head clauses hold but a translation clause fails",
        ));
    }
    Ok(v)
}

/// Frame of `im calF`: sections `(X, alpha)` with `xi(X) = 0`, `alpha(Z) = 0`.
pub fn image_frame(s: &Gac) -> Vec<GeneralizedSection> {
    let chart = s.chart();
    let n = chart.dim();
    let (z, xi) = (s.z(), s.xi());
    let mut out = Vec::with_capacity(2 * n);
    for i in 0..n {
        let x = VectorField::basis(chart, i).sub(&z.scale(&xi.components()[i]));
        out.push(GeneralizedSection::from_vector(x));
    }
    for i in 0..n {
        let a = KForm::basis(chart, &[i]).sub(&xi.scale(z.component(i)));
        out.push(GeneralizedSection::from_form(a));
    }
    out
}

fn normality_big(s: &Gac) -> Result<Verdict> {
    let fo = s.operator();
    let zo = s.z_operator();
    let im = image_frame(s);
    let zs = GeneralizedSection::from_vector(s.z().clone());
    let xs = GeneralizedSection::from_form(s.xi().clone());
    let mut full: Vec<(String, GeneralizedSection)> = im
        .iter()
        .enumerate()
        .map(|(i, x)| (format!("im{i}"), x.clone()))
        .collect();
    full.push(("(Z,0)".into(), zs.clone()));
    full.push(("(0,xi)".into(), xs.clone()));

    let mut v = Verdict::new();
    let mut comps = Vec::new();
    for (i, (li, si)) in full.iter().enumerate() {
        for (lj, sj) in full.iter().skip(i + 1) {
            let t = fo
                .courant_nijenhuis(si, sj)?
                .sub(&zo.apply(&courant_bracket(si, sj)?));
            for (l, c) in t.labeled() {
                comps.push((format!("N({li},{lj}) {l}"), c));
            }
        }
    }
    v.zero_check("nijenhuis-calF", comps);

    let mut zc = Vec::new();
    let mut xc = Vec::new();
    for (i, sec) in im.iter().enumerate() {
        let fs = fo.apply(sec);
        let lz = GeneralizedSection::new(
            lie_derivative(s.z(), &sec.vec)?,
            lie_derivative(s.z(), &sec.form)?,
        )?;
        let t = courant_bracket(&zs, &fs)?.sub(&fo.apply(&lz));
        for (l, c) in t.labeled() {
            zc.push((format!("im{i} {l}"), c));
        }
        let lx = GeneralizedSection::from_form(lie_derivative(&sec.vec, s.xi())?);
        let t = courant_bracket(&fs, &xs)?.sub(&fo.apply(&lx));
        for (l, c) in t.labeled() {
            xc.push((format!("im{i} {l}"), c));
        }
    }
    v.zero_check("Z-bracket", zc);
    v.zero_check("xi-bracket", xc);
    Ok(v)
}

pub fn normality_check(s: &Gac, method: NormalityMethod) -> Result<Verdict> {
    match method {
        NormalityMethod::Direct => normality_direct(s),
        NormalityMethod::Big => normality_big(s),
        NormalityMethod::Cylinder => Ok(integrability_via_torsion(&adapt_to_cylinder(s)?)),
    }
}

pub fn contactgen_check(s: &Gac, method: ContactMethod) -> Result<Verdict> {
    match method {
        ContactMethod::Direct => adapted_conditions(s, true),
        ContactMethod::Cylinder => Ok(integrability_via_torsion(&conformal_cylinder(s)?)),
    }
}

/// Outcome of the non-degenerate (Hitchin pair) analysis.
#[derive(Clone, Debug)]
pub struct NondegenerateReport {
    pub nondegenerate: bool,
    /// `Z ^ P^n`.
    pub top: Multivector,
    /// `omega + xi ^ dt` on the cylinder.
    pub varpi: Option<KForm>,
    pub omega: Option<KForm>,
    pub omega_f: Option<KForm>,
    pub cosymplectic: bool,
    pub normal: bool,
    pub verdict: Verdict,
}

pub fn nondegenerate_analysis(
    s: &Gac,
    sample: Option<&BTreeMap<String, GaussianRational>>,
) -> Result<NondegenerateReport> {
    let chart = s.chart();
    let m = chart.dim();
    let mut top = s.z().to_multivector();
    for _ in 0..m / 2 {
        top = top.wedge(s.p())?;
    }
    let mut v = Verdict::new();
    let c = top.components()[0].clone();
    let ok = match sample {
        Some(pt) => nonvanishing_at(&c, pt)?,
        None => !c.is_zero(),
    };
    let mut report = NondegenerateReport {
        nondegenerate: ok,
        top,
        varpi: None,
        omega: None,
        omega_f: None,
        cosymplectic: false,
        normal: false,
        verdict: Verdict::new(),
    };
    if !ok {
        v.fails("nondegenerate", "Z^P^n", (!c.is_zero()).then_some(c));
        report.verdict = v;
        return Ok(report);
    }
    v.holds("nondegenerate");

    // omega sharp_P = -Id + xi (x) Z and omega Z = 0, solved for the
    // transpose: [sharp_P | Z]^t omega^t = [-Id + xi (x) Z | 0]^t.
    let sp = sharp_matrix(s.p());
    let zcol = Matrix::from_fn(chart.ring(), m, 1, |i, _| s.z().component(i).clone());
    let xcol = Matrix::from_fn(chart.ring(), m, 1, |i, _| s.xi().components()[i].clone());
    let lhs = sp.hstack(&zcol);
    let id = Matrix::identity(chart.ring(), m);
    let rhs = id
        .neg()
        .add(&xcol.mul(&zcol.transpose()))
        .hstack(&Matrix::zeros(chart.ring(), m, 1));
    let w = lhs
        .transpose()
        .solve(&rhs.transpose())
        .map_err(|e| Error::Unsolvable(format!("omega: {e}")))?
        .transpose();
    let omega =
        form_from_flat(chart, &w).map_err(|_| Error::Unsolvable("omega is not skew".into()))?;

    let fm = s.f().matrix();
    v.zero_check(
        "omega-F-compatible",
        matrix_labels(chart, &w.mul(fm).sub(&fm.transpose().mul(&w))),
    );
    v.zero_check("xi-F", s.f().transpose_apply(s.xi()).labeled());

    let cyl = chart.cylinder_over()?;
    let dt = time_covector(&cyl);
    let varpi = omega
        .embed_into(&cyl)?
        .add(&s.xi().embed_into(&cyl)?.wedge(&dt)?);
    let pi = adapt_to_cylinder(s)?.pi().clone();
    let check = flat_matrix(&varpi)
        .mul(&sharp_matrix(&pi))
        .add(&Matrix::identity(cyl.ring(), cyl.dim()));
    v.zero_check("varpi-inverts-pi", matrix_labels(&cyl, &check));

    v.zero_check("xi-closed", d_raw(s.xi()).labeled());
    v.zero_check("omega-closed", d_raw(&omega).labeled());
    let omega_f = form_from_flat(chart, &w.mul(fm)).ok();
    match &omega_f {
        Some(of) => v.zero_check("omegaF-closed", d_raw(of).labeled()),
        None => v.fails("omegaF-closed", "omega_F is not a 2-form", None),
    }
    report.cosymplectic = v.passed("xi-closed") && v.passed("omega-closed");
    report.normal = report.cosymplectic && v.passed("omegaF-closed");
    report.varpi = Some(varpi);
    report.omega = Some(omega);
    report.omega_f = omega_f;
    report.verdict = v;
    Ok(report)
}

/// Eigenbundle classification of `calF` for `L = E+ + span(Z,0)` and
/// `L* = E- + span(0,xi)`.
#[derive(Clone, Debug)]
pub struct PwReport {
    pub e_plus: Vec<GeneralizedSection>,
    pub e_minus: Vec<GeneralizedSection>,
    pub s: Vec<GeneralizedSection>,
    pub l: Vec<GeneralizedSection>,
    pub l_star: Vec<GeneralizedSection>,
    pub l_closed: Verdict,
    pub l_star_closed: Verdict,
    pub strong: bool,
    pub lz_xi_zero: bool,
    pub normal: bool,
    /// `normal == (strong && L_Z xi = 0)`.
    pub normal_equivalence: bool,
    /// The `+-i` eigenbundles of the cylinder structure match
    /// `E+- + span{(Z,0) -+ i(0,dt), (0,xi) -+ i(d/dt,0)}`.
    pub t_eigen: Verdict,
}

/// Frame of the `sign * i` eigenbundle: independent columns of `F^2 + sign i F`.
fn eigenbundle_frame(s: &Gac, sign: i64) -> Result<Vec<GeneralizedSection>> {
    let chart = s.chart();
    let fo = s.operator();
    let i = chart.constant(GaussianRational::i() * GaussianRational::from_int(sign));
    let m = fo.compose(&fo).add(&fo.scale(&i));
    let e = m.matrix().echelon();
    if e.rank != chart.dim() - 1 {
        return Err(Error::NoEigenframe(format!(
            "eigenbundle has generic rank {} instead of {}",
            e.rank,
            chart.dim() - 1
        )));
    }
    e.pivot_cols
        .iter()
        .map(|&c| GeneralizedSection::from_column(chart, &m.matrix().column(c)))
        .collect()
}

fn embed_section(s: &GeneralizedSection, cyl: &Chart) -> Result<GeneralizedSection> {
    GeneralizedSection::new(s.vec.embed_into(cyl)?, s.form.embed_into(cyl)?)
}

pub fn pw_classify(s: &Gac) -> Result<PwReport> {
    let e_plus = eigenbundle_frame(s, 1)?;
    let e_minus = eigenbundle_frame(s, -1)?;
    let zs = GeneralizedSection::from_vector(s.z().clone());
    let xs = GeneralizedSection::from_form(s.xi().clone());
    let mut l = e_plus.clone();
    l.push(zs.clone());
    let mut l_star = e_minus.clone();
    l_star.push(xs.clone());
    let l_closed = frame_involutivity(&l, true)?;
    let l_star_closed = frame_involutivity(&l_star, true)?;
    let strong = l_closed.pass() && l_star_closed.pass();
    let lz_xi_zero = lie_derivative(s.z(), s.xi())?.is_zero();
    let normal = normality_check(s, NormalityMethod::Direct)?.pass();

    let j = adapt_to_cylinder(s)?;
    let cyl = j.chart().clone();
    let op = j.operator();
    let i = cyl.constant(GaussianRational::i());
    let dt = GeneralizedSection::from_form(time_covector(&cyl));
    let dtv = GeneralizedSection::from_vector(time_vector(&cyl));
    let mut t_eigen = Verdict::new();
    for (sign, frame) in [(1i64, &e_plus), (-1, &e_minus)] {
        let si = i.scale(&GaussianRational::from_int(sign));
        let mut t: Vec<GeneralizedSection> = frame
            .iter()
            .map(|x| embed_section(x, &cyl))
            .collect::<Result<_>>()?;
        t.push(embed_section(&zs, &cyl)?.sub(&dt.scale(&si)));
        t.push(embed_section(&xs, &cyl)?.sub(&dtv.scale(&si)));
        let mut comps = Vec::new();
        for (k, x) in t.iter().enumerate() {
            for (lab, c) in op.apply(x).sub(&x.scale(&si)).labeled() {
                comps.push((format!("T{k} {lab}"), c));
            }
        }
        let tag = if sign > 0 { "+" } else { "-" };
        t_eigen.zero_check(format!("T{tag}-eigen"), comps);
    }

    Ok(PwReport {
        s: vec![zs, xs],
        e_plus,
        e_minus,
        l,
        l_star,
        strong,
        lz_xi_zero,
        normal,
        normal_equivalence: normal == (strong && lz_xi_zero),
        l_closed,
        l_star_closed,
        t_eigen,
    })
}
