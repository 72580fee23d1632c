//! Classical almost contact (metric) structures and their cylinder lifts.

use crate::calculus::{
    d_raw, flat_matrix, form_from_flat, interior_product, nijenhuis, Chart, Endomorphism, KForm,
    SymmetricTensor, VectorField,
};
use crate::error::{Error, Result};
use crate::gcx::matrix_labels;
use crate::ghk::{almost_hermitian, kahler_form};
use crate::scalar::{Matrix, ScalarField};
use crate::verdict::Verdict;

/// Which classical predicate to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassicalCheck {
    Structure,
    Normality,
    Metric,
    Sasakian,
}

impl ClassicalCheck {
    pub fn name(self) -> &'static str {
        match self {
            ClassicalCheck::Structure => "structure",
            ClassicalCheck::Normality => "normality",
            ClassicalCheck::Metric => "metric",
            ClassicalCheck::Sasakian => "sasakian",
        }
    }
}

/// Almost contact structure `(F, Z, xi)`: `F^2 = -Id + xi (x) Z`, `xi o F = 0`,
/// `FZ = 0`, `xi(Z) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cac {
    f: Endomorphism,
    z: VectorField,
    xi: KForm,
}

fn check_triple(f: &Endomorphism, z: &VectorField, xi: &KForm) -> Result<()> {
    f.chart().ensure_same(z.chart())?;
    f.chart().ensure_same(xi.chart())?;
    if xi.degree() != 1 {
        return Err(Error::Shape("xi must be a 1-form".into()));
    }
    let n = f.chart().dim();
    if n % 2 == 0 {
        return Err(Error::EvenDimension(n));
    }
    Ok(())
}

pub(crate) fn pair(alpha: &KForm, x: &VectorField) -> ScalarField {
    interior_product(x, alpha).expect("1-form").components()[0].clone()
}

pub fn almost_contact_axioms(f: &Endomorphism, z: &VectorField, xi: &KForm) -> Result<Verdict> {
    check_triple(f, z, xi)?;
    let chart = f.chart();
    let id = Matrix::identity(chart.ring(), chart.dim());
    let fm = f.matrix();
    let zxi = Endomorphism::outer(z, xi);
    let mut v = Verdict::new();
    v.zero_check(
        "F-square",
        matrix_labels(chart, &fm.mul(fm).add(&id).sub(zxi.matrix())),
    );
    v.zero_check("xi-F", f.transpose_apply(xi).labeled());
    v.zero_check("F-Z", f.apply(z).labeled());
    v.zero_check("xi-Z", [("xi(Z)-1".to_string(), pair(xi, z) - chart.one())]);
    Ok(v)
}

/// `N_F + Z (x) d xi = 0` on coordinate pairs.
pub fn classical_normality(f: &Endomorphism, z: &VectorField, xi: &KForm) -> Result<Verdict> {
    check_triple(f, z, xi)?;
    let chart = f.chart();
    let names = chart.coords();
    let nij = nijenhuis(f);
    let dxi = d_raw(xi);
    let mut comps = Vec::new();
    for p in 0..chart.dim() {
        for q in p + 1..chart.dim() {
            let t = nij[p][q].add(&z.scale(&dxi.get(&[p, q])));
            for (l, c) in t.labeled() {
                comps.push((format!("@{},@{} {l}", names[p], names[q]), c));
            }
        }
    }
    let mut v = Verdict::new();
    v.zero_check("N_F+Z*dxi", comps);
    Ok(v)
}

/// Clauses of `gamma(FX, FY) = gamma(X, Y) - xi(X) xi(Y)` and its stated
/// consequences.
pub fn metric_axioms(
    f: &Endomorphism,
    z: &VectorField,
    xi: &KForm,
    gamma: &SymmetricTensor,
) -> Result<Verdict> {
    check_triple(f, z, xi)?;
    f.chart().ensure_same(gamma.chart())?;
    let chart = f.chart();
    let fm = f.matrix();
    let g = gamma.matrix();
    let xx = SymmetricTensor::square_of(xi);
    let mut v = Verdict::new();
    v.zero_check(
        "gamma-F-compatible",
        matrix_labels(
            chart,
            &fm.transpose().mul(g).mul(fm).sub(g).add(xx.matrix()),
        ),
    );
    v.zero_check("xi-is-flat-Z", gamma.flat(z).sub(xi).labeled());
    v.zero_check(
        "Z-orthogonal-to-image",
        f.transpose_apply(&gamma.flat(z)).labeled(),
    );
    v.zero_check(
        "Z-unit",
        [("gamma(Z,Z)-1".to_string(), gamma.eval(z, z) - chart.one())],
    );
    Ok(v)
}

/// `Xi - d xi` as flat matrices: `gamma F - flat(d xi)`.
fn contact_metric_clause(f: &Endomorphism, xi: &KForm, gamma: &SymmetricTensor) -> Verdict {
    let chart = f.chart();
    let m = gamma.matrix().mul(f.matrix()).sub(&flat_matrix(&d_raw(xi)));
    let mut v = Verdict::new();
    v.zero_check("Xi=d-xi", matrix_labels(chart, &m));
    v
}

/// Evaluates a classical predicate on raw data; `Metric` and `Sasakian`
/// need the metric.
pub fn classical_checks(
    f: &Endomorphism,
    z: &VectorField,
    xi: &KForm,
    gamma: Option<&SymmetricTensor>,
    which: ClassicalCheck,
) -> Result<Verdict> {
    let need_metric =
        || gamma.ok_or_else(|| Error::Shape(format!("{} check needs a metric", which.name())));
    match which {
        ClassicalCheck::Structure => almost_contact_axioms(f, z, xi),
        ClassicalCheck::Normality => classical_normality(f, z, xi),
        ClassicalCheck::Metric => {
            let g = need_metric()?;
            let mut v = Verdict::new();
            v.absorb("structure", almost_contact_axioms(f, z, xi)?);
            v.absorb("metric", metric_axioms(f, z, xi, g)?);
            Ok(v)
        }
        ClassicalCheck::Sasakian => {
            let g = need_metric()?;
            let mut v = Verdict::new();
            v.absorb("structure", almost_contact_axioms(f, z, xi)?);
            v.absorb("metric", metric_axioms(f, z, xi, g)?);
            v.absorb("normality", classical_normality(f, z, xi)?);
            v.absorb("contact", contact_metric_clause(f, xi, g));
            Ok(v)
        }
    }
}

impl Cac {
    pub fn new(f: Endomorphism, z: VectorField, xi: KForm) -> Result<Cac> {
        let v = almost_contact_axioms(&f, &z, &xi)?;
        if !v.pass() {
            return Err(Error::Invalid(Box::new(v)));
        }
        Ok(Cac { f, z, xi })
    }

    pub fn chart(&self) -> &Chart {
        self.f.chart()
    }

    pub fn f(&self) -> &Endomorphism {
        &self.f
    }

    pub fn z(&self) -> &VectorField {
        &self.z
    }

    pub fn xi(&self) -> &KForm {
        &self.xi
    }

    pub fn check(&self, which: ClassicalCheck) -> Result<Verdict> {
        classical_checks(&self.f, &self.z, &self.xi, None, which)
    }

    pub fn is_normal(&self) -> bool {
        classical_normality(&self.f, &self.z, &self.xi)
            .expect("validated")
            .pass()
    }
}

/// Almost contact metric structure with its fundamental form
/// `Xi(X, Y) = gamma(FX, Y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cacm {
    base: Cac,
    gamma: SymmetricTensor,
    fundamental: KForm,
}

impl Cacm {
    pub fn new(base: Cac, gamma: SymmetricTensor) -> Result<Cacm> {
        let v = metric_axioms(base.f(), base.z(), base.xi(), &gamma)?;
        if !v.pass() {
            return Err(Error::Invalid(Box::new(v)));
        }
        let fundamental = form_from_flat(base.chart(), &gamma.matrix().mul(base.f().matrix()))?;
        Ok(Cacm {
            base,
            gamma,
            fundamental,
        })
    }

    pub fn chart(&self) -> &Chart {
        self.base.chart()
    }

    pub fn base(&self) -> &Cac {
        &self.base
    }

    pub fn f(&self) -> &Endomorphism {
        self.base.f()
    }

    pub fn z(&self) -> &VectorField {
        self.base.z()
    }

    pub fn xi(&self) -> &KForm {
        self.base.xi()
    }

    pub fn gamma(&self) -> &SymmetricTensor {
        &self.gamma
    }

    /// The fundamental 2-form `Xi`.
    pub fn fundamental_form(&self) -> &KForm {
        &self.fundamental
    }

    pub fn check(&self, which: ClassicalCheck) -> Result<Verdict> {
        classical_checks(self.f(), self.z(), self.xi(), Some(&self.gamma), which)
    }

    /// `-F, -Z, -xi` with the same metric.
    pub fn conjugate(&self) -> Cacm {
        let base = Cac {
            f: self.f().neg(),
            z: self.z().neg(),
            xi: self.xi().neg(),
        };
        Cacm {
            base,
            gamma: self.gamma.clone(),
            fundamental: self.fundamental.neg(),
        }
    }
}

/// The adapted almost complex structure `J = F + dt (x) Z - xi (x) d/dt`, the
/// metric `e^t (gamma + dt^2)` and the Kähler form `e^t (Xi - xi ^ dt)`.
#[derive(Clone, Debug)]
pub struct CylinderLift {
    pub chart: Chart,
    pub j: Endomorphism,
    pub gamma: SymmetricTensor,
    pub omega: KForm,
}

pub(crate) fn time_covector(chart: &Chart) -> KForm {
    KForm::basis(chart, &[chart.time_index().expect("cylinder")])
}

pub(crate) fn time_vector(chart: &Chart) -> VectorField {
    VectorField::basis(chart, chart.time_index().expect("cylinder"))
}

/// `J` on the cylinder chart over `f`'s chart.
pub(crate) fn adapted_endomorphism(
    cyl: &Chart,
    f: &Endomorphism,
    z: &VectorField,
    xi: &KForm,
) -> Result<Endomorphism> {
    let fe = f.embed_into(cyl)?;
    let ze = z.embed_into(cyl)?;
    let xie = xi.embed_into(cyl)?;
    let dt = time_covector(cyl);
    let dtv = time_vector(cyl);
    Ok(fe
        .add(&Endomorphism::outer(&ze, &dt))
        .sub(&Endomorphism::outer(&dtv, &xie)))
}

pub fn cylinder_lift_classical(c: &Cacm) -> Result<CylinderLift> {
    let cyl = c.chart().cylinder_over()?;
    let j = adapted_endomorphism(&cyl, c.f(), c.z(), c.xi())?;
    let et = cyl.exp_t(1)?;
    let dt = time_covector(&cyl);
    let gamma = c
        .gamma()
        .embed_into(&cyl)?
        .add(&SymmetricTensor::square_of(&dt))
        .scale(&et);
    let xie = c.xi().embed_into(&cyl)?;
    let omega = c
        .fundamental_form()
        .embed_into(&cyl)?
        .sub(&xie.wedge(&dt)?)
        .scale(&et);
    Ok(CylinderLift {
        chart: cyl,
        j,
        gamma,
        omega,
    })
}

/// Identities the lift must satisfy: `(Gamma, J)` almost Hermitian, `omega`
/// its Kähler form, and `d omega = e^t [d Xi + (Xi - d xi) ^ dt]`.
pub fn lift_identities(c: &Cacm, lift: &CylinderLift) -> Result<Verdict> {
    let cyl = &lift.chart;
    let mut v = almost_hermitian(&lift.gamma, &lift.j, "J");
    v.zero_check(
        "kahler-form",
        kahler_form(&lift.gamma, &lift.j)?
            .sub(&lift.omega)
            .labeled(),
    );
    let xi_cap = c.fundamental_form().embed_into(cyl)?;
    let dxi = d_raw(c.xi()).embed_into(cyl)?;
    let dt = time_covector(cyl);
    let rhs = d_raw(&xi_cap)
        .add(&xi_cap.sub(&dxi).wedge(&dt)?)
        .scale(&cyl.exp_t(1)?);
    v.zero_check("d-omega", d_raw(&lift.omega).sub(&rhs).labeled());
    Ok(v)
}
