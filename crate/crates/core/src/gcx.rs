//! Generalized almost complex structures given by classical data `(A, pi, sigma)`.

use crate::calculus::{
    basis_label, bivector_from_sharp, d_raw, evaluate_form, flat_matrix, form_from_flat,
    interior_product, is_closed, nijenhuis, schouten_concomitant, schouten_square, sharp_bivector,
    sharp_matrix, BigOperator, Bivector, Chart, Endomorphism, GeneralizedSection, KForm,
    VectorField,
};
use crate::error::{Error, Result};
use crate::scalar::Matrix;
use crate::verdict::Verdict;

/// A validated generalized almost complex structure
/// `J = [[A, sharp_pi], [flat_sigma, -A^t]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gcx {
    a: Endomorphism,
    pi: Bivector,
    sigma: KForm,
}

/// Which classical data a Gcx is built from.
#[derive(Clone, Debug)]
pub enum GcxSource {
    Complex(Endomorphism),
    Symplectic(KForm),
    Hitchin { varpi: KForm, a: Endomorphism },
}

pub(crate) fn matrix_labels(
    chart: &Chart,
    m: &Matrix,
) -> Vec<(String, crate::scalar::ScalarField)> {
    let names = chart.coords();
    m.entries()
        .map(|((i, j), v)| (format!("[{},{}]", names[i], names[j]), v.clone()))
        .collect()
}

fn check_kinds(a: &Endomorphism, pi: &Bivector, sigma: &KForm) -> Result<()> {
    a.chart().ensure_same(pi.chart())?;
    a.chart().ensure_same(sigma.chart())?;
    if pi.degree() != 2 || sigma.degree() != 2 {
        return Err(Error::Shape(
            "pi must be a bivector and sigma a 2-form".into(),
        ));
    }
    Ok(())
}

/// The three algebraic clauses of `J^2 = -Id`.
pub fn gcx_axioms(a: &Endomorphism, pi: &Bivector, sigma: &KForm) -> Result<Verdict> {
    check_kinds(a, pi, sigma)?;
    let chart = a.chart();
    let n = chart.dim();
    if n % 2 == 1 {
        return Err(Error::OddDimension(n));
    }
    let am = a.matrix();
    let sp = sharp_matrix(pi);
    let fs = flat_matrix(sigma);
    let id = Matrix::identity(chart.ring(), n);
    let mut v = Verdict::new();
    v.zero_check(
        "square-is-minus-identity",
        matrix_labels(chart, &am.mul(am).add(&id).add(&sp.mul(&fs))),
    );
    // pi(alpha o A, beta) = pi(alpha, beta o A)  <=>  A sharp_pi = sharp_pi A^t
    v.zero_check(
        "pi-compatible",
        matrix_labels(chart, &am.mul(&sp).sub(&sp.mul(&am.transpose()))),
    );
    // sigma(AX, Y) = sigma(X, AY)  <=>  flat_sigma A = A^t flat_sigma
    v.zero_check(
        "sigma-compatible",
        matrix_labels(chart, &fs.mul(am).sub(&am.transpose().mul(&fs))),
    );
    Ok(v)
}

/// Validates candidate data; a violated clause yields `Error::Invalid`.
pub fn validate_gcx(a: Endomorphism, pi: Bivector, sigma: KForm) -> Result<Gcx> {
    let v = gcx_axioms(&a, &pi, &sigma)?;
    if !v.pass() {
        return Err(Error::Invalid(Box::new(v)));
    }
    Ok(Gcx { a, pi, sigma })
}

impl Gcx {
    pub fn chart(&self) -> &Chart {
        self.a.chart()
    }

    pub fn a(&self) -> &Endomorphism {
        &self.a
    }

    pub fn pi(&self) -> &Bivector {
        &self.pi
    }

    pub fn sigma(&self) -> &KForm {
        &self.sigma
    }

    pub fn operator(&self) -> BigOperator {
        BigOperator::generalized(&self.a, &self.pi, &self.sigma)
    }

    /// Reads `(A, pi, sigma)` off a block operator and validates them.
    pub fn from_operator(op: &BigOperator) -> Result<Gcx> {
        let chart = op.chart();
        let a = Endomorphism::new(chart, op.block(0, 0))?;
        let br = op.block(1, 1);
        if br != a.matrix().transpose().neg() {
            return Err(Error::Incompatible(
                "operator is not skew for the neutral metric".into(),
            ));
        }
        let pi = bivector_from_sharp(chart, &op.block(0, 1))
            .map_err(|_| Error::Incompatible("upper-right block is not a bivector".into()))?;
        let sigma = form_from_flat(chart, &op.block(1, 0))
            .map_err(|_| Error::Incompatible("lower-left block is not a 2-form".into()))?;
        validate_gcx(a, pi, sigma)
    }
}

/// `N_J` on all pairs of basis sections: `table[p][q] = N(e_p, e_q)`.
pub fn courant_nijenhuis_torsion(j: &Gcx) -> Vec<Vec<GeneralizedSection>> {
    let op = j.operator();
    let basis = GeneralizedSection::basis(j.chart());
    let n = basis.len();
    let mut table = vec![vec![GeneralizedSection::zero(j.chart()); n]; n];
    for p in 0..n {
        for q in p + 1..n {
            let t = op
                .courant_nijenhuis(&basis[p], &basis[q])
                .expect("same chart");
            table[q][p] = t.neg();
            table[p][q] = t;
        }
    }
    table
}

pub fn integrability_via_torsion(j: &Gcx) -> Verdict {
    let chart = j.chart();
    let table = courant_nijenhuis_torsion(j);
    let mut v = Verdict::new();
    let mut comps = Vec::new();
    for (p, row) in table.iter().enumerate() {
        for (q, t) in row.iter().enumerate().skip(p + 1) {
            for (l, c) in t.labeled() {
                comps.push((
                    format!("N({},{}) {l}", basis_label(chart, p), basis_label(chart, q)),
                    c,
                ));
            }
        }
    }
    v.zero_check("courant-nijenhuis-torsion", comps);
    v.diagnostic(torsion_tensoriality(j));
    v
}

/// Spot check `N(f X, Y) = f N(X, Y)` on the first vector/form basis pair.
pub fn torsion_tensoriality(j: &Gcx) -> crate::verdict::Condition {
    let chart = j.chart();
    let op = j.operator();
    let basis = GeneralizedSection::basis(chart);
    let n = chart.dim();
    let f = chart.coord(0) + chart.int(1);
    let x = &basis[0];
    let y = &basis[n + n - 1];
    let lhs = op.courant_nijenhuis(&x.scale(&f), y).expect("same chart");
    let rhs = op.courant_nijenhuis(x, y).expect("same chart").scale(&f);
    crate::verdict::Condition::vanishing("torsion-tensoriality", lhs.sub(&rhs).labeled())
}

/// The classical-tensor integrability conditions: Poisson bivector,
/// vanishing Schouten concomitant, the Nijenhuis relation and the
/// associated-form relation.
pub fn integrability_via_conditions(j: &Gcx) -> Verdict {
    let chart = j.chart();
    let n = chart.dim();
    let names = chart.coords();
    let a = j.a();
    let mut v = Verdict::new();

    v.zero_check("poisson", schouten_square(j.pi()).labeled());

    let r = schouten_concomitant(j.pi(), a).expect("same chart");
    let mut comps = Vec::new();
    for (i, row) in r.iter().enumerate() {
        for (k, x) in row.iter().enumerate() {
            for (l, c) in x.labeled() {
                comps.push((format!("R(d{},@{}) {l}", names[i], names[k]), c));
            }
        }
    }
    v.zero_check("schouten-concomitant", comps);

    let ds = d_raw(j.sigma());
    let nij = nijenhuis(a);
    let e: Vec<VectorField> = (0..n).map(|i| VectorField::basis(chart, i)).collect();
    let mut comps = Vec::new();
    for p in 0..n {
        for q in p + 1..n {
            let form =
                interior_product(&e[q], &interior_product(&e[p], &ds).expect("deg")).expect("deg");
            let rhs = sharp_bivector(j.pi(), &form).expect("same chart");
            for (l, c) in nij[p][q].sub(&rhs).labeled() {
                comps.push((format!("N_A(@{},@{}) {l}", names[p], names[q]), c));
            }
        }
    }
    v.zero_check("nijenhuis-relation", comps);

    let sigma_a = associated_form(j);
    let dsa = d_raw(&sigma_a);
    let ae: Vec<VectorField> = e.iter().map(|x| a.apply(x)).collect();
    let mut comps = Vec::new();
    if n >= 3 {
        for (t, lhs) in dsa.tuples().iter().zip(dsa.components()) {
            let (x, y, z) = (t[0], t[1], t[2]);
            let mut rhs = chart.zero();
            for (p, q, s) in [(x, y, z), (y, z, x), (z, x, y)] {
                rhs = rhs
                    + evaluate_form(&ds, &[ae[p].clone(), e[q].clone(), e[s].clone()])
                        .expect("deg");
            }
            comps.push((
                format!("d{}^^d{}^^d{}", names[x], names[y], names[z]),
                lhs - &rhs,
            ));
        }
    }
    v.zero_check("associated-form", comps);
    v
}

/// `sigma_A(X, Y) = sigma(AX, Y)`, a 2-form by A-compatibility.
pub fn associated_form(j: &Gcx) -> KForm {
    let m = flat_matrix(j.sigma()).mul(j.a().matrix());
    form_from_flat(j.chart(), &m).expect("A-compatible sigma")
}

pub fn construct_gcx(source: GcxSource) -> Result<Gcx> {
    match source {
        GcxSource::Complex(jm) => {
            let chart = jm.chart().clone();
            validate_gcx(jm, Bivector::zero(&chart, 2), KForm::zero(&chart, 2))
        }
        GcxSource::Symplectic(omega) => {
            let chart = omega.chart().clone();
            construct_gcx(GcxSource::Hitchin {
                varpi: omega,
                a: Endomorphism::zero(&chart),
            })
        }
        GcxSource::Hitchin { varpi, a } => {
            varpi.chart().ensure_same(a.chart())?;
            let chart = varpi.chart().clone();
            let fw = flat_matrix(&varpi);
            let am = a.matrix();
            if fw.mul(am) != am.transpose().mul(&fw) {
                return Err(Error::Incompatible("varpi(AX,Y) != varpi(X,AY)".into()));
            }
            let inv = fw.inverse("symplectic form")?;
            let pi = bivector_from_sharp(&chart, &inv.neg())?;
            let id = Matrix::identity(chart.ring(), chart.dim());
            let sigma = form_from_flat(&chart, &fw.mul(&id.add(&am.mul(am))))?;
            validate_gcx(a, pi, sigma)
        }
    }
}

/// `e^{-B} J e^{B}` for a closed 2-form `B`.
pub fn b_transform_gcx(j: &Gcx, b: &KForm) -> Result<Gcx> {
    j.chart().ensure_same(b.chart())?;
    if b.degree() != 2 {
        return Err(Error::Shape("B-field must be a 2-form".into()));
    }
    if !is_closed(b) {
        return Err(Error::NonClosedB);
    }
    let plus = BigOperator::b_field(b);
    let minus = BigOperator::b_field(&b.neg());
    Gcx::from_operator(&minus.compose(&j.operator()).compose(&plus))
}
