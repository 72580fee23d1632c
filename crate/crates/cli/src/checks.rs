//! Check table, structure builder and dispatch to the core checkers.

use std::collections::BTreeMap;

use gcverify_core::calculus::{Endomorphism, KForm, Multivector, SymmetricTensor, VectorField};
use gcverify_core::contact::{
    adapt_to_cylinder, adaptedness, classical_checks, contactgen_check, cylinder_lift_classical,
    gac_axioms, gac_construct, gen_sasakian_check, gen_sasakian_cylinder_crosscheck,
    lift_identities, nondegenerate_analysis, normality_check, pw_classify, remotely_sasakian_check,
    validate_gac, Cac, Cacm, ClassicalCheck, ContactMethod, Gac, GacSource, NormalityMethod,
    SasakianPair,
};
use gcverify_core::gcx::{
    b_transform_gcx, construct_gcx, gcx_axioms, integrability_via_conditions,
    integrability_via_torsion, validate_gcx, Gcx, GcxSource,
};
use gcverify_core::ghk::{
    almost_hermitian, compat_check, complementary, grm_from_pair, grm_identities, kahler_check,
    kahler_form, levi_civita, reconstruct, transfer, Gah, Grm, KahlerMethod,
};
use gcverify_core::scalar::GaussianRational;
use gcverify_core::verdict::Condition;
use gcverify_core::{Error, Verdict};

use crate::syntax::{CheckDecl, ErrorKind, FieldValue, ParseError, StructureDecl, StructureFile};

pub struct CheckSpec {
    pub id: &'static str,
    /// Structure kinds the check accepts.
    pub kinds: &'static [&'static str],
    /// Empty when the check takes no method.
    pub methods: &'static [&'static str],
    /// Core operation the check dispatches to.
    pub op: &'static str,
    pub summary: &'static str,
}

const GCX_LIKE: &[&str] = &["gcx", "gah"];
const GRM_LIKE: &[&str] = &["grm", "gah"];
const CAC_LIKE: &[&str] = &["cac", "cacm"];

pub const CHECKS: &[CheckSpec] = &[
    CheckSpec {
        id: "gcx-validate",
        kinds: GCX_LIKE,
        methods: &[],
        op: "validate_gcx",
        summary: "algebraic axioms of a generalized almost complex structure",
    },
    CheckSpec {
        id: "gcx-construct",
        kinds: &["gcx"],
        methods: &[],
        op: "construct_gcx",
        summary: "the declared construction (with its B-field) yields a valid structure",
    },
    CheckSpec {
        id: "gcx-torsion",
        kinds: GCX_LIKE,
        methods: &[],
        op: "integrability_via_torsion",
        summary: "integrability: Courant-Nijenhuis torsion on basis sections",
    },
    CheckSpec {
        id: "gcx-conditions",
        kinds: GCX_LIKE,
        methods: &[],
        op: "integrability_via_conditions",
        summary: "integrability: Poisson, concomitant, Nijenhuis and associated-form conditions",
    },
    CheckSpec {
        id: "grm-identities",
        kinds: GRM_LIKE,
        methods: &[],
        op: "grm_from_pair",
        summary: "generalized metric identities and positivity at sample points",
    },
    CheckSpec {
        id: "grm-eigenframe",
        kinds: GRM_LIKE,
        methods: &[],
        op: "eigenframe",
        summary: "eigenbundle frames of sharp_G and the transferred metrics",
    },
    CheckSpec {
        id: "grm-levi-civita",
        kinds: GRM_LIKE,
        methods: &[],
        op: "levi_civita",
        summary: "Christoffel symbols: symmetry and metric compatibility",
    },
    CheckSpec {
        id: "gah-compat",
        kinds: &["gah"],
        methods: &[],
        op: "compat_check",
        summary: "sharp_G commutes with the generalized complex structure",
    },
    CheckSpec {
        id: "gah-transfer",
        kinds: &["gah"],
        methods: &[],
        op: "transfer",
        summary: "transferred J+ and J- are almost Hermitian with their Kähler forms",
    },
    CheckSpec {
        id: "gah-reconstruct",
        kinds: &["gah"],
        methods: &[],
        op: "reconstruct",
        summary: "(gamma, psi, J+, J-) recovers (A, pi, sigma)",
    },
    CheckSpec {
        id: "gah-complementary",
        kinds: &["gah"],
        methods: &[],
        op: "complementary",
        summary: "the complementary structure and its quadruple (gamma, psi, J+, -J-)",
    },
    CheckSpec {
        id: "gah-kahler",
        kinds: &["gah"],
        methods: &["G4", "G6", "closure", "torsion"],
        op: "kahler_check",
        summary: "generalized Kähler condition",
    },
    CheckSpec {
        id: "cac-classical",
        kinds: CAC_LIKE,
        methods: &["structure", "normality", "metric", "sasakian"],
        op: "classical_checks",
        summary: "classical almost contact predicates",
    },
    CheckSpec {
        id: "cacm-lift",
        kinds: &["cacm"],
        methods: &[],
        op: "cylinder_lift_classical",
        summary:
            "cylinder lift is almost Hermitian with the expected Kähler form and its differential",
    },
    CheckSpec {
        id: "cacm-remote",
        kinds: &["cacm"],
        methods: &[],
        op: "remotely_sasakian_check",
        summary: "remotely Sasakian condition",
    },
    CheckSpec {
        id: "gac-validate",
        kinds: &["gac"],
        methods: &[],
        op: "validate_gac",
        summary: "generalized almost contact axioms in tensor and operator form",
    },
    CheckSpec {
        id: "gac-construct",
        kinds: &["gac"],
        methods: &[],
        op: "gac_construct",
        summary: "the declared construction yields a valid structure",
    },
    CheckSpec {
        id: "gac-adapted",
        kinds: &["gac"],
        methods: &[],
        op: "adapt_to_cylinder",
        summary: "the cylinder structure is adapted",
    },
    CheckSpec {
        id: "gac-normality",
        kinds: &["gac"],
        methods: &["direct", "big", "cylinder"],
        op: "normality_check",
        summary: "normality of a generalized almost contact structure",
    },
    CheckSpec {
        id: "gac-contact",
        kinds: &["gac"],
        methods: &["direct", "cylinder"],
        op: "contactgen_check",
        summary: "generalized contact condition",
    },
    CheckSpec {
        id: "gac-nondegenerate",
        kinds: &["gac"],
        methods: &[],
        op: "nondegenerate_analysis",
        summary: "non-degeneracy, the forms omega and omega_F, and the cosymplectic conclusion",
    },
    CheckSpec {
        id: "gac-pw",
        kinds: &["gac"],
        methods: &[],
        op: "pw_classify",
        summary: "eigenbundle classification: L, L*, strong, and the normality equivalence",
    },
    CheckSpec {
        id: "pair-sasakian",
        kinds: &["sasakian-pair"],
        methods: &[],
        op: "gen_sasakian_check",
        summary: "generalized Sasakian condition on the base",
    },
    CheckSpec {
        id: "pair-cylinder",
        kinds: &["sasakian-pair"],
        methods: &[],
        op: "gen_sasakian_cylinder_crosscheck",
        summary: "generalized Sasakian condition through the cylinder Kähler criterion",
    },
];

pub fn check_spec(id: &str) -> Option<&'static CheckSpec> {
    CHECKS.iter().find(|c| c.id == id)
}

/// A built structure.
#[derive(Clone, Debug)]
pub enum Built {
    Gcx(Gcx),
    Grm(Grm),
    Gah(Gah),
    Cac(Cac),
    Cacm(Cacm),
    Gac(Gac),
    Pair(SasakianPair),
}

/// Built structures of one file.
pub struct Workspace<'f> {
    pub file: &'f StructureFile,
    pub built: BTreeMap<String, Result<Built, String>>,
}

fn form(d: &StructureDecl, name: &str) -> Option<KForm> {
    match d.field(name) {
        Some(FieldValue::Form(f)) => Some(f.clone()),
        _ => None,
    }
}

fn req_form(d: &StructureDecl, name: &str) -> KForm {
    form(d, name).unwrap_or_else(|| panic!("schema guarantees `{name}`"))
}

fn multi(d: &StructureDecl, name: &str) -> Multivector {
    match d.field(name) {
        Some(FieldValue::Multi(p)) => p.clone(),
        _ => panic!("schema guarantees `{name}`"),
    }
}

fn vector(d: &StructureDecl, name: &str) -> VectorField {
    VectorField::from_multivector(&multi(d, name)).expect("schema guarantees a vector field")
}

fn endo(d: &StructureDecl, name: &str) -> Endomorphism {
    match d.field(name) {
        Some(FieldValue::Endo(a)) => a.clone(),
        _ => panic!("schema guarantees `{name}`"),
    }
}

fn metric(d: &StructureDecl, name: &str) -> SymmetricTensor {
    match d.field(name) {
        Some(FieldValue::Metric(g)) => g.clone(),
        _ => panic!("schema guarantees `{name}`"),
    }
}

fn reference<'a>(d: &'a StructureDecl, name: &str) -> &'a str {
    match d.field(name) {
        Some(FieldValue::Ref(r)) | Some(FieldValue::Point(r)) => r,
        _ => panic!("schema guarantees `{name}`"),
    }
}

fn describe_error(e: &Error) -> String {
    match e {
        Error::Invalid(v) | Error::NotNormal(v) => {
            let failing: Vec<String> = v
                .failing()
                .map(|c| match &c.witness {
                    Some(w) => format!("{} at {}", c.id, w.location),
                    None => c.id.clone(),
                })
                .collect();
            format!("{e}: {}", failing.join("; "))
        }
        _ => e.to_string(),
    }
}

impl<'f> Workspace<'f> {
    /// Builds every structure in declaration order. Failures are kept and
    /// reported by the checks that need the structure.
    pub fn build(file: &'f StructureFile) -> Workspace<'f> {
        let mut ws = Workspace {
            file,
            built: BTreeMap::new(),
        };
        for d in &file.structures {
            let r = ws.build_one(d);
            ws.built.insert(d.name.clone(), r);
        }
        ws
    }

    fn get(&self, name: &str) -> Result<&Built, String> {
        match self.built.get(name) {
            Some(Ok(b)) => Ok(b),
            Some(Err(e)) => Err(format!("referenced structure `{name}` is invalid: {e}")),
            None => Err(format!("undeclared structure `{name}`")),
        }
    }

    fn point(&self, name: &str) -> &BTreeMap<String, GaussianRational> {
        &self.file.point(name).expect("bound at parse time").values
    }

    pub fn chart_points(&self, chart: &str) -> Vec<(&str, &BTreeMap<String, GaussianRational>)> {
        self.file
            .points
            .iter()
            .filter(|p| p.chart == chart)
            .map(|p| (p.name.as_str(), &p.values))
            .collect()
    }

    fn build_one(&self, d: &StructureDecl) -> Result<Built, String> {
        let err = |e: Error| describe_error(&e);
        let with_b = |j: Gcx| -> Result<Gcx, String> {
            match form(d, "B") {
                Some(b) => b_transform_gcx(&j, &b).map_err(err),
                None => Ok(j),
            }
        };
        Ok(match (d.kind.as_str(), d.source.as_deref()) {
            ("gcx", None) => Built::Gcx(with_b(
                validate_gcx(endo(d, "A"), multi(d, "pi"), req_form(d, "sigma")).map_err(err)?,
            )?),
            ("gcx", Some("complex")) => Built::Gcx(with_b(
                construct_gcx(GcxSource::Complex(endo(d, "J"))).map_err(err)?,
            )?),
            ("gcx", Some("symplectic")) => Built::Gcx(with_b(
                construct_gcx(GcxSource::Symplectic(req_form(d, "omega"))).map_err(err)?,
            )?),
            ("gcx", Some("hitchin")) => Built::Gcx(with_b(
                construct_gcx(GcxSource::Hitchin {
                    varpi: req_form(d, "varpi"),
                    a: endo(d, "A"),
                })
                .map_err(err)?,
            )?),
            ("grm", None) => Built::Grm(self.grm(d)?),
            ("gah", None) => {
                let m = self.grm(d)?;
                let j = validate_gcx(endo(d, "A"), multi(d, "pi"), req_form(d, "sigma"))
                    .map_err(err)?;
                Built::Gah(Gah::new(m, j).map_err(err)?)
            }
            ("gah", Some("bihermitian")) => {
                let m = self.grm(d)?;
                let j = reconstruct(m.gamma(), m.psi(), &endo(d, "jplus"), &endo(d, "jminus"))
                    .map_err(err)?;
                Built::Gah(Gah::new(m, j).map_err(err)?)
            }
            ("gah", Some("parts")) => {
                let Built::Grm(m) = self.get(reference(d, "metric"))? else {
                    unreachable!("kind checked at parse time")
                };
                let Built::Gcx(j) = self.get(reference(d, "structure"))? else {
                    unreachable!("kind checked at parse time")
                };
                Built::Gah(Gah::new(m.clone(), j.clone()).map_err(err)?)
            }
            ("cac", None) => Built::Cac(self.cac(d)?),
            ("cacm", None) => {
                Built::Cacm(Cacm::new(self.cac(d)?, metric(d, "gamma")).map_err(err)?)
            }
            ("cacm", Some("conjugate")) => {
                let Built::Cacm(c) = self.get(reference(d, "base"))? else {
                    unreachable!("kind checked at parse time")
                };
                Built::Cacm(c.conjugate())
            }
            ("gac", None) => Built::Gac(
                validate_gac(
                    endo(d, "F"),
                    multi(d, "P"),
                    req_form(d, "theta"),
                    vector(d, "Z"),
                    req_form(d, "xi"),
                )
                .map_err(err)?,
            ),
            ("gac", Some("cac")) => {
                let base = match self.get(reference(d, "base"))? {
                    Built::Cac(c) => c,
                    Built::Cacm(c) => c.base(),
                    _ => unreachable!("kind checked at parse time"),
                };
                Built::Gac(gac_construct(GacSource::Cac(base)).map_err(err)?)
            }
            ("gac", Some("contact")) => Built::Gac(
                gac_construct(GacSource::ContactForm {
                    xi: req_form(d, "xi"),
                    sample: self.point(reference(d, "sample")),
                })
                .map_err(err)?,
            ),
            ("gac", Some("cosymplectic")) => Built::Gac(
                gac_construct(GacSource::Cosymplectic {
                    xi: req_form(d, "xi"),
                    theta: req_form(d, "theta"),
                    sample: self.point(reference(d, "sample")),
                })
                .map_err(err)?,
            ),
            ("sasakian-pair", None) => {
                let Built::Cacm(p) = self.get(reference(d, "plus"))? else {
                    unreachable!("kind checked at parse time")
                };
                let Built::Cacm(m) = self.get(reference(d, "minus"))? else {
                    unreachable!("kind checked at parse time")
                };
                let kappa = form(d, "kappa").unwrap_or_else(|| KForm::zero(p.chart(), 1));
                Built::Pair(SasakianPair::new(p.clone(), m.clone(), kappa).map_err(err)?)
            }
            (k, s) => unreachable!("no schema for {k} {s:?}"),
        })
    }

    fn grm(&self, d: &StructureDecl) -> Result<Grm, String> {
        let g = metric(d, "gamma");
        let psi = form(d, "psi").unwrap_or_else(|| KForm::zero(g.chart(), 2));
        grm_from_pair(g, psi).map_err(|e| describe_error(&e))
    }

    fn cac(&self, d: &StructureDecl) -> Result<Cac, String> {
        Cac::new(endo(d, "F"), vector(d, "Z"), req_form(d, "xi")).map_err(|e| describe_error(&e))
    }
}

/// One unit of work: a check on a structure with at most one method.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Job {
    pub check: &'static CheckSpec,
    pub structure: String,
    pub method: Option<&'static str>,
}

impl PartialEq for CheckSpec {
    fn eq(&self, other: &CheckSpec) -> bool {
        self.id == other.id
    }
}

impl Eq for CheckSpec {}

impl std::fmt::Debug for CheckSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.id)
    }
}

/// Methods that make sense for a structure: metric predicates need a metric.
fn applicable_methods(spec: &'static CheckSpec, kind: &str) -> Vec<&'static str> {
    spec.methods
        .iter()
        .copied()
        .filter(|m| {
            !(spec.id == "cac-classical" && kind == "cac" && matches!(*m, "metric" | "sasakian"))
        })
        .collect()
}

fn applicable(spec: &CheckSpec, d: &StructureDecl) -> bool {
    spec.kinds.contains(&d.kind.as_str())
        && match spec.id {
            "gac-construct" => d.source.is_some(),
            "gcx-construct" => d.source.is_some(),
            _ => true,
        }
}

fn jobs_for(spec: &'static CheckSpec, d: &StructureDecl, method: Option<&'static str>) -> Vec<Job> {
    let mk = |m| Job {
        check: spec,
        structure: d.name.clone(),
        method: m,
    };
    match method {
        Some(m) => vec![mk(Some(m))],
        None if spec.methods.is_empty() => vec![mk(None)],
        None => applicable_methods(spec, &d.kind)
            .into_iter()
            .map(|m| mk(Some(m)))
            .collect(),
    }
}

fn plan_error(c: &CheckDecl, message: String, expected: Vec<String>) -> ParseError {
    ParseError {
        line: c.at.line,
        col: c.at.col,
        kind: ErrorKind::Binding,
        message,
        expected,
    }
}

/// Expands the file's check statements, or every applicable check when the
/// file has none, then keeps the ids in `filter` if it is non-empty.
pub fn plan(file: &StructureFile, filter: &[String]) -> Result<Vec<Job>, String> {
    for id in filter {
        if check_spec(id).is_none() {
            return Err(format!(
                "unknown check id `{id}`; known ids: {}",
                CHECKS.iter().map(|c| c.id).collect::<Vec<_>>().join(", ")
            ));
        }
    }
    let mut jobs = Vec::new();
    if file.checks.is_empty() {
        for d in &file.structures {
            for spec in CHECKS.iter().filter(|s| applicable(s, d)) {
                jobs.extend(jobs_for(spec, d, None));
            }
        }
    } else {
        for c in &file.checks {
            let d = file.structure(&c.structure).expect("bound at parse time");
            let Some(spec) = check_spec(&c.check) else {
                let exp = CHECKS
                    .iter()
                    .filter(|s| applicable(s, d))
                    .map(|s| s.id.to_string())
                    .collect();
                return Err(
                    plan_error(c, format!("unknown check id `{}`", c.check), exp).to_string(),
                );
            };
            if !applicable(spec, d) {
                return Err(plan_error(
                    c,
                    format!(
                        "check `{}` does not apply to {} `{}`",
                        spec.id, d.kind, d.name
                    ),
                    CHECKS
                        .iter()
                        .filter(|s| applicable(s, d))
                        .map(|s| s.id.to_string())
                        .collect(),
                )
                .to_string());
            }
            let method = match &c.method {
                None => None,
                Some(m) => {
                    let allowed = applicable_methods(spec, &d.kind);
                    match allowed.iter().find(|a| **a == m.as_str()) {
                        Some(a) => Some(*a),
                        None => {
                            return Err(plan_error(
                                c,
                                format!("check `{}` on `{}` has no method `{m}`", spec.id, d.name),
                                allowed.iter().map(|s| s.to_string()).collect(),
                            )
                            .to_string())
                        }
                    }
                }
            };
            jobs.extend(jobs_for(spec, d, method));
        }
    }
    if !filter.is_empty() {
        jobs.retain(|j| filter.iter().any(|f| f == j.check.id));
    }
    Ok(jobs)
}

/// Runs one job. `Err` carries a checker precondition failure.
pub fn run_job(ws: &Workspace<'_>, job: &Job) -> Result<Verdict, String> {
    let d = ws
        .file
        .structure(&job.structure)
        .expect("planned from the file");
    let fail = |e: Error| format!("`{}`: {}", d.name, describe_error(&e));
    // Validation reads the raw fields so an invalid candidate still gets a
    // clause-level verdict.
    match (job.check.id, d.kind.as_str(), d.source.as_deref()) {
        ("gcx-validate", "gcx" | "gah", None) => {
            return gcx_axioms(&endo(d, "A"), &multi(d, "pi"), &req_form(d, "sigma")).map_err(fail);
        }
        ("gac-validate", "gac", None) => {
            return gac_axioms(
                &endo(d, "F"),
                &multi(d, "P"),
                &req_form(d, "theta"),
                &vector(d, "Z"),
                &req_form(d, "xi"),
            )
            .map_err(fail);
        }
        ("gcx-construct" | "gac-construct", _, _) => {
            let mut v = Verdict::new();
            match &ws.built[&d.name] {
                Ok(_) => v.holds("construction"),
                Err(e) => v.fails("construction", e.clone(), None),
            }
            return Ok(v);
        }
        _ => {}
    }
    let built = ws.get(&d.name).map_err(|e| format!("`{}`: {e}", d.name))?;
    match (job.check.id, built) {
        ("gcx-validate", b) => {
            let j = gcx_of(b);
            gcx_axioms(j.a(), j.pi(), j.sigma()).map_err(fail)
        }
        ("gcx-torsion", b) => Ok(integrability_via_torsion(gcx_of(b))),
        ("gcx-conditions", b) => Ok(integrability_via_conditions(gcx_of(b))),
        ("grm-identities", b) => Ok(grm_check(ws, d, grm_of(b)).map_err(fail)?),
        ("grm-eigenframe", b) => {
            let all = grm_identities(grm_of(b));
            let mut v = Verdict::new();
            for c in all.conditions {
                if c.id.contains("eigen") || c.id.contains("2gamma") {
                    v.push(c);
                }
            }
            Ok(v)
        }
        ("grm-levi-civita", b) => levi_civita_check(grm_of(b).gamma()).map_err(fail),
        ("gah-compat", Built::Gah(s)) => Ok(compat_check(s.metric(), s.gcx())),
        ("gah-transfer", Built::Gah(s)) => transfer_check(s).map_err(fail),
        ("gah-reconstruct", Built::Gah(s)) => {
            let m = s.metric();
            let r = reconstruct(m.gamma(), m.psi(), s.jplus(), s.jminus()).map_err(fail)?;
            let j = s.gcx();
            let mut v = Verdict::new();
            v.zero_check("A-recovered", r.a().sub(j.a()).labeled());
            v.zero_check("pi-recovered", r.pi().sub(j.pi()).labeled());
            v.zero_check("sigma-recovered", r.sigma().sub(j.sigma()).labeled());
            Ok(v)
        }
        ("gah-complementary", Built::Gah(s)) => complementary_check(s).map_err(fail),
        ("gah-kahler", Built::Gah(s)) => {
            let method = match job.method.expect("planned with a method") {
                "G4" => KahlerMethod::G4,
                "G6" => KahlerMethod::G6,
                "closure" => KahlerMethod::Closure,
                _ => KahlerMethod::Torsion,
            };
            kahler_check(s, method).map_err(fail)
        }
        ("cac-classical", b) => {
            let which = match job.method.expect("planned with a method") {
                "structure" => ClassicalCheck::Structure,
                "normality" => ClassicalCheck::Normality,
                "metric" => ClassicalCheck::Metric,
                _ => ClassicalCheck::Sasakian,
            };
            match b {
                Built::Cac(c) => classical_checks(c.f(), c.z(), c.xi(), None, which),
                Built::Cacm(c) => classical_checks(c.f(), c.z(), c.xi(), Some(c.gamma()), which),
                _ => unreachable!("kind checked at plan time"),
            }
            .map_err(fail)
        }
        ("cacm-lift", Built::Cacm(c)) => {
            let lift = cylinder_lift_classical(c).map_err(fail)?;
            lift_identities(c, &lift).map_err(fail)
        }
        ("cacm-remote", Built::Cacm(c)) => {
            let (mut v, derived) = remotely_sasakian_check(c).map_err(fail)?;
            v.diagnostic(Condition::vanishing(
                "derived-form-vanishes",
                derived.labeled(),
            ));
            Ok(v)
        }
        ("gac-validate", Built::Gac(s)) => {
            gac_axioms(s.f(), s.p(), s.theta(), s.z(), s.xi()).map_err(fail)
        }
        ("gac-adapted", Built::Gac(s)) => {
            let j = adapt_to_cylinder(s).map_err(fail)?;
            adaptedness(&j).map_err(fail)
        }
        ("gac-normality", Built::Gac(s)) => {
            let method = match job.method.expect("planned with a method") {
                "direct" => NormalityMethod::Direct,
                "big" => NormalityMethod::Big,
                _ => NormalityMethod::Cylinder,
            };
            normality_check(s, method).map_err(fail)
        }
        ("gac-contact", Built::Gac(s)) => {
            let method = match job.method.expect("planned with a method") {
                "direct" => ContactMethod::Direct,
                _ => ContactMethod::Cylinder,
            };
            contactgen_check(s, method).map_err(fail)
        }
        ("gac-nondegenerate", Built::Gac(s)) => {
            let sample = match d.field("sample") {
                Some(FieldValue::Point(p)) => Some(ws.point(p)),
                _ => ws.chart_points(&d.chart).first().map(|(_, p)| *p),
            };
            let r = nondegenerate_analysis(s, sample).map_err(fail)?;
            let mut v = r.verdict;
            if r.nondegenerate {
                v.diagnostic(Condition::flag(
                    "cosymplectic",
                    r.cosymplectic,
                    "omega, omega_F or d xi",
                ));
                v.diagnostic(Condition::flag("normal", r.normal, "normality"));
            }
            Ok(v)
        }
        ("gac-pw", Built::Gac(s)) => {
            let r = pw_classify(s).map_err(fail)?;
            let mut v = Verdict::new();
            v.flag(
                "normal-equivalence",
                r.normal_equivalence,
                format!(
                    "normal = {}, strong = {}, L_Z xi = 0: {}",
                    r.normal, r.strong, r.lz_xi_zero
                ),
            );
            v.summarize("t-eigen", &r.t_eigen);
            let mut closed = Verdict::new();
            closed.summarize("L-closed", &r.l_closed);
            closed.summarize("Lstar-closed", &r.l_star_closed);
            for c in closed.conditions {
                v.diagnostic(c);
            }
            v.diagnostic(Condition::flag("strong", r.strong, "L or L* not closed"));
            v.diagnostic(Condition::flag("LZ-xi-zero", r.lz_xi_zero, "L_Z xi"));
            v.diagnostic(Condition::flag("normal", r.normal, "direct normality"));
            for w in closed.warnings {
                if !v.warnings.contains(&w) {
                    v.warnings.push(w);
                }
            }
            Ok(v)
        }
        ("pair-sasakian", Built::Pair(p)) => gen_sasakian_check(p).map_err(fail),
        ("pair-cylinder", Built::Pair(p)) => gen_sasakian_cylinder_crosscheck(p).map_err(fail),
        (id, _) => unreachable!("check `{id}` planned for a {} structure", d.kind),
    }
}

fn gcx_of(b: &Built) -> &Gcx {
    match b {
        Built::Gcx(j) => j,
        Built::Gah(s) => s.gcx(),
        _ => unreachable!("kind checked at plan time"),
    }
}

fn grm_of(b: &Built) -> &Grm {
    match b {
        Built::Grm(m) => m,
        Built::Gah(s) => s.metric(),
        _ => unreachable!("kind checked at plan time"),
    }
}

/// Identities plus positivity of `gamma`, certified only at the chart's
/// sample points.
fn grm_check(ws: &Workspace<'_>, d: &StructureDecl, m: &Grm) -> gcverify_core::Result<Verdict> {
    let mut v = grm_identities(m);
    let points = ws.chart_points(&d.chart);
    if points.is_empty() {
        v.warnings.push(format!(
            "positivity of gamma not certified: chart `{}` has no sample points",
            d.chart
        ));
        return Ok(v);
    }
    let names: Vec<&str> = points.iter().map(|(n, _)| *n).collect();
    let mut bad = None;
    for (name, p) in &points {
        if !m.positive_at(&[(*p).clone()])? {
            bad = Some(*name);
            break;
        }
    }
    match bad {
        None => {
            v.holds("gamma-positive-at-samples");
            v.assumptions.push(format!(
                "gamma positive definite everywhere; certified at {}",
                names.join(", ")
            ));
        }
        Some(name) => v.fails("gamma-positive-at-samples", format!("point `{name}`"), None),
    }
    Ok(v)
}

fn levi_civita_check(gamma: &SymmetricTensor) -> gcverify_core::Result<Verdict> {
    let chart = gamma.chart();
    let n = chart.dim();
    let names = chart.coords();
    let table = levi_civita(gamma)?;
    let mut sym = Vec::new();
    let mut compat = Vec::new();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if i < j {
                    sym.push((
                        format!("Gamma^{}_{}{}", names[k], names[i], names[j]),
                        &table[k][i][j] - &table[k][j][i],
                    ));
                }
                // nabla_k gamma_ij
                let mut acc = gamma.entry(i, j).partial(k);
                for l in 0..n {
                    acc = &acc - &(&table[l][k][i] * gamma.entry(l, j));
                    acc = &acc - &(&table[l][k][j] * gamma.entry(i, l));
                }
                compat.push((
                    format!("nabla_{} gamma[{},{}]", names[k], names[i], names[j]),
                    acc,
                ));
            }
        }
    }
    let mut v = Verdict::new();
    v.zero_check("torsion-free", sym);
    v.zero_check("metric-compatible", compat);
    Ok(v)
}

fn transfer_check(s: &Gah) -> gcverify_core::Result<Verdict> {
    let (jp, jm, wp, wm) = transfer(s);
    let gamma = s.metric().gamma();
    let mut v = Verdict::new();
    v.absorb("", almost_hermitian(gamma, &jp, "J+"));
    v.absorb("", almost_hermitian(gamma, &jm, "J-"));
    v.zero_check(
        "omega+-kahler-form",
        kahler_form(gamma, &jp)?.sub(&wp).labeled(),
    );
    v.zero_check(
        "omega--kahler-form",
        kahler_form(gamma, &jm)?.sub(&wm).labeled(),
    );
    Ok(v)
}

fn complementary_check(s: &Gah) -> gcverify_core::Result<Verdict> {
    let c = complementary(s)?;
    let (j, op) = (s.gcx().operator(), c.operator());
    let mut v = Verdict::new();
    v.absorb("axioms", gcx_axioms(c.a(), c.pi(), c.sigma())?);
    v.zero_check("commutes", op.compose(&j).sub(&j.compose(&op)).labeled());
    v.zero_check(
        "recovers-sharp-G",
        s.metric().sharp_g().add(&j.compose(&op)).labeled(),
    );
    let sc = Gah::new(s.metric().clone(), c)?;
    v.zero_check("J+-preserved", sc.jplus().sub(s.jplus()).labeled());
    v.zero_check("J--negated", sc.jminus().add(s.jminus()).labeled());
    let back = complementary(&sc)?;
    v.zero_check("involution", back.operator().sub(&j).labeled());
    Ok(v)
}
