//! Remotely Sasakian structures and generalized Sasakian pairs.

use super::classical::{cylinder_lift_classical, time_covector, Cacm, CylinderLift};
use crate::calculus::{d_raw, evaluate_form, lie_derivative, nijenhuis, twist, KForm, VectorField};
use crate::error::{Error, Result};
use crate::ghk::almost_hermitian;
use crate::verdict::Verdict;

/// The derived fundamental form `L_Z Xi`.
pub fn derived_fundamental_form(c: &Cacm) -> KForm {
    lie_derivative(c.z(), c.fundamental_form()).expect("same chart")
}

fn require_normal(c: &Cacm) -> Result<()> {
    if !c.base().is_normal() {
        let v = c.check(super::ClassicalCheck::Normality)?;
        return Err(Error::NotNormal(Box::new(v)));
    }
    Ok(())
}

fn remote_clauses(c: &Cacm, tag: &str, v: &mut Verdict) -> Result<()> {
    let xi_cap = c.fundamental_form();
    let lz = derived_fundamental_form(c);
    let lzlz = lie_derivative(c.z(), &lz)?;
    let first = xi_cap.sub(&d_raw(c.xi())).add(&lzlz);
    v.zero_check(format!("remote-closure{tag}"), first.labeled());
    let second = d_raw(xi_cap)
        .sub(&c.xi().wedge(&lz)?)
        .add(&twist(&d_raw(&lz), c.f())?);
    v.zero_check(format!("remote-differential{tag}"), second.labeled());
    Ok(())
}

/// `Xi - d xi + L_Z L_Z Xi = 0` and `d Xi - xi ^ L_Z Xi + (d L_Z Xi)^c = 0`;
/// returns the verdict and the derived form.
pub fn remotely_sasakian_check(c: &Cacm) -> Result<(Verdict, KForm)> {
    require_normal(c)?;
    let mut v = Verdict::new();
    remote_clauses(c, "", &mut v)?;
    Ok((v, derived_fundamental_form(c)))
}

/// Two normal almost contact metric structures sharing `gamma`, with the
/// 1-form `kappa` and `psi = L_{Z+} Xi+ - d kappa`.
#[derive(Clone, Debug)]
pub struct SasakianPair {
    plus: Cacm,
    minus: Cacm,
    kappa: KForm,
    psi: KForm,
}

impl SasakianPair {
    pub fn new(plus: Cacm, minus: Cacm, kappa: KForm) -> Result<SasakianPair> {
        plus.chart().ensure_same(minus.chart())?;
        plus.chart().ensure_same(kappa.chart())?;
        if kappa.degree() != 1 {
            return Err(Error::Shape("kappa must be a 1-form".into()));
        }
        if plus.gamma() != minus.gamma() {
            return Err(Error::MetricMismatch);
        }
        let psi = derived_fundamental_form(&plus).sub(&d_raw(&kappa));
        Ok(SasakianPair {
            plus,
            minus,
            kappa,
            psi,
        })
    }

    pub fn plus(&self) -> &Cacm {
        &self.plus
    }

    pub fn minus(&self) -> &Cacm {
        &self.minus
    }

    pub fn kappa(&self) -> &KForm {
        &self.kappa
    }

    pub fn psi(&self) -> &KForm {
        &self.psi
    }

    fn sides(&self) -> [(&Cacm, &'static str, i64); 2] {
        [(&self.plus, "+", 1), (&self.minus, "-", -1)]
    }
}

/// Opposite derived forms and the two remote clauses for each member.
pub fn gen_sasakian_check(p: &SasakianPair) -> Result<Verdict> {
    require_normal(&p.plus)?;
    require_normal(&p.minus)?;
    let mut v = Verdict::new();
    let sum = derived_fundamental_form(&p.plus).add(&derived_fundamental_form(&p.minus));
    v.zero_check("derived-forms-opposite", sum.labeled());
    for (c, tag, _) in p.sides() {
        remote_clauses(c, tag, &mut v)?;
    }
    Ok(v)
}

/// Generalized Kähler identities on `M x R` for `Gamma = e^t (gamma + dt^2)`,
/// `Psi = e^t (psi + kappa ^ dt)` and the two adapted structures.
pub fn gen_sasakian_cylinder_crosscheck(p: &SasakianPair) -> Result<Verdict> {
    require_normal(&p.plus)?;
    require_normal(&p.minus)?;
    let lifts: Vec<CylinderLift> = [&p.plus, &p.minus]
        .into_iter()
        .map(cylinder_lift_classical)
        .collect::<Result<_>>()?;
    let cyl = lifts[0].chart.clone();
    let dt = time_covector(&cyl);
    let psi_big = p
        .psi
        .embed_into(&cyl)?
        .add(&p.kappa.embed_into(&cyl)?.wedge(&dt)?)
        .scale(&cyl.exp_t(1)?);
    let dpsi = d_raw(&psi_big);
    let names = cyl.coords();
    let e: Vec<VectorField> = (0..cyl.dim())
        .map(|i| VectorField::basis(&cyl, i))
        .collect();
    let mut v = Verdict::new();
    for (lift, (_, tag, sign)) in lifts.iter().zip(p.sides()) {
        v.summarize(
            format!("J{tag}-hermitian"),
            &almost_hermitian(&lift.gamma, &lift.j, "J"),
        );
        let nij = nijenhuis(&lift.j);
        let mut comps = Vec::new();
        for (a, row) in nij.iter().enumerate() {
            for (b, x) in row.iter().enumerate().skip(a + 1) {
                for (l, c) in x.labeled() {
                    comps.push((format!("N(@{},@{}) {l}", names[a], names[b]), c));
                }
            }
        }
        v.zero_check(format!("J{tag}-integrable"), comps);
        let domega = d_raw(&lift.omega);
        let je: Vec<VectorField> = e.iter().map(|x| lift.j.apply(x)).collect();
        let mut comps = Vec::new();
        for (t, rhs) in dpsi.tuples().iter().zip(dpsi.components()) {
            let lhs = evaluate_form(
                &domega,
                &[je[t[0]].clone(), je[t[1]].clone(), je[t[2]].clone()],
            )?;
            comps.push((
                format!("d{}^^d{}^^d{}", names[t[0]], names[t[1]], names[t[2]]),
                lhs - rhs * &cyl.int(sign),
            ));
        }
        v.zero_check(format!("kahler-identity{tag}"), comps);
    }
    Ok(v)
}
