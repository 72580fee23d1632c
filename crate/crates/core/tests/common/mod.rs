#![allow(dead_code)]

use std::collections::BTreeMap;

use gcverify_core::calculus::{
    one_form, Bivector, Chart, Endomorphism, KForm, SymmetricTensor, VectorField,
};
use gcverify_core::contact::{gac_construct, Cac, Cacm, Gac, GacSource};
use gcverify_core::gcx::{construct_gcx, Gcx, GcxSource};
use gcverify_core::ghk::{grm_from_pair, reconstruct, Gah};
use gcverify_core::scalar::{GaussianRational, Matrix, ScalarField};

pub fn r3() -> Chart {
    Chart::new("R3", &["x", "y", "z"]).unwrap()
}

pub fn point(pairs: &[(&str, i64)]) -> BTreeMap<String, GaussianRational> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), GaussianRational::from_int(*v)))
        .collect()
}

pub fn endo(chart: &Chart, rows: Vec<Vec<ScalarField>>) -> Endomorphism {
    let n = chart.dim();
    Endomorphism::new(
        chart,
        Matrix::from_fn(chart.ring(), n, n, |i, j| rows[i][j].clone()),
    )
    .unwrap()
}

pub fn metric(chart: &Chart, rows: Vec<Vec<ScalarField>>) -> SymmetricTensor {
    let n = chart.dim();
    SymmetricTensor::new(
        chart,
        Matrix::from_fn(chart.ring(), n, n, |i, j| rows[i][j].clone()),
    )
    .unwrap()
}

pub fn vector(chart: &Chart, comps: Vec<ScalarField>) -> VectorField {
    VectorField::new(chart, comps).unwrap()
}

/// `xi = dz - y dx`, `Z = d/dz`, `F dx = dy`, `F dy = -dx - y dz`.
pub fn heisenberg_parts(chart: &Chart) -> (Endomorphism, VectorField, KForm, SymmetricTensor) {
    let (o, l, y) = (chart.zero(), chart.one(), chart.coord(1));
    // matrix[i][j] = (F d_j)^i
    let f = endo(
        chart,
        vec![
            vec![o.clone(), -l.clone(), o.clone()],
            vec![l.clone(), o.clone(), o.clone()],
            vec![o.clone(), -y.clone(), o.clone()],
        ],
    );
    let z = vector(chart, vec![o.clone(), o.clone(), l.clone()]);
    let xi = one_form(chart, vec![-y.clone(), o.clone(), l.clone()]).unwrap();
    let g = metric(
        chart,
        vec![
            vec![&l + &(&y * &y), o.clone(), -y.clone()],
            vec![o.clone(), l.clone(), o.clone()],
            vec![-y.clone(), o.clone(), l.clone()],
        ],
    );
    (f, z, xi, g)
}

pub fn heisenberg(chart: &Chart) -> Cacm {
    let (f, z, xi, g) = heisenberg_parts(chart);
    Cacm::new(Cac::new(f, z, xi).unwrap(), g).unwrap()
}

/// Same almost contact data, horizontal metric scaled by `lambda`.
pub fn heisenberg_scaled(chart: &Chart, lambda: i64) -> Cacm {
    let (f, z, xi, _) = heisenberg_parts(chart);
    let lam = chart.int(lambda);
    let horiz = SymmetricTensor::square_of(&KForm::basis(chart, &[0]))
        .add(&SymmetricTensor::square_of(&KForm::basis(chart, &[1])))
        .scale(&lam);
    let g = horiz.add(&SymmetricTensor::square_of(&xi));
    Cacm::new(Cac::new(f, z, xi).unwrap(), g).unwrap()
}

pub fn darboux_xi(chart: &Chart) -> KForm {
    one_form(chart, vec![-chart.coord(1), chart.zero(), chart.one()]).unwrap()
}

pub fn darboux_contact(chart: &Chart) -> Gac {
    let pt = point(&[("x", 0), ("y", 0), ("z", 0)]);
    gac_construct(GacSource::ContactForm {
        xi: darboux_xi(chart),
        sample: &pt,
    })
    .unwrap()
}

pub fn cosymplectic(chart: &Chart) -> Gac {
    let pt = point(&[("x", 0), ("y", 0), ("z", 0)]);
    gac_construct(GacSource::Cosymplectic {
        xi: KForm::basis(chart, &[2]),
        theta: KForm::basis(chart, &[0, 1]),
        sample: &pt,
    })
    .unwrap()
}

pub fn heisenberg_lift(chart: &Chart) -> Gac {
    let c = heisenberg(chart);
    gac_construct(GacSource::Cac(c.base())).unwrap()
}

pub fn zero_bivector(chart: &Chart) -> Bivector {
    Bivector::zero(chart, 2)
}

/// Exponent vectors over `nvars` variables of total degree at most `degree`.
fn exponents(nvars: usize, degree: u32) -> Vec<Vec<u32>> {
    if nvars == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for e in 0..=degree {
        for mut rest in exponents(nvars - 1, degree - e) {
            rest.insert(0, e);
            out.push(rest);
        }
    }
    out
}

/// Number of monomials of total degree at most `degree` in `nvars` variables.
pub fn monomial_count(nvars: usize, degree: u32) -> usize {
    exponents(nvars, degree).len()
}

/// Polynomial in the given coordinates with one coefficient per monomial, in
/// the order of `exponents`; missing coefficients count as zero.
pub fn poly_from_coeffs(chart: &Chart, vars: &[usize], degree: u32, coeffs: &[i64]) -> ScalarField {
    let mut acc = chart.zero();
    for (exps, &c) in exponents(vars.len(), degree).iter().zip(coeffs) {
        if c == 0 {
            continue;
        }
        let mut term = chart.int(c);
        for (&v, &e) in vars.iter().zip(exps) {
            for _ in 0..e {
                term = &term * &chart.coord(v);
            }
        }
        acc = &acc + &term;
    }
    acc
}

/// Random polynomial with coefficients in `-2..=2` in the given coordinates.
pub fn random_poly<R: rand::Rng>(
    chart: &Chart,
    vars: &[usize],
    degree: u32,
    rng: &mut R,
) -> ScalarField {
    let coeffs: Vec<i64> = (0..monomial_count(vars.len(), degree))
        .map(|_| rng.gen_range(-2..=2))
        .collect();
    poly_from_coeffs(chart, vars, degree, &coeffs)
}

/// `xi = dz - p dx`, `Z = d/dz`, `F dx = dy`, `F dy = -dx - p dz`, `gamma = dx^2 + dy^2 + xi^2`.
pub fn classical_family(chart: &Chart, p: &ScalarField) -> Cacm {
    let (o, l) = (chart.zero(), chart.one());
    let f = endo(
        chart,
        vec![
            vec![o.clone(), -l.clone(), o.clone()],
            vec![l.clone(), o.clone(), o.clone()],
            vec![o.clone(), -p.clone(), o.clone()],
        ],
    );
    let z = vector(chart, vec![o.clone(), o.clone(), l.clone()]);
    let xi = one_form(chart, vec![-p.clone(), o.clone(), l.clone()]).unwrap();
    let g = SymmetricTensor::square_of(&KForm::basis(chart, &[0]))
        .add(&SymmetricTensor::square_of(&KForm::basis(chart, &[1])))
        .add(&SymmetricTensor::square_of(&xi));
    Cacm::new(Cac::new(f, z, xi).unwrap(), g).unwrap()
}

/// Contact form `dz - p dx` with `p_y` nonzero at the origin.
pub fn contact_family(chart: &Chart, p: &ScalarField) -> Gac {
    let pt = point(&[("x", 0), ("y", 0), ("z", 0)]);
    let xi = one_form(chart, vec![-p.clone(), chart.zero(), chart.one()]).unwrap();
    gac_construct(GacSource::ContactForm { xi, sample: &pt }).unwrap()
}

/// `xi = d(z + h)`, `theta = g dx ^ dy` with `g(0) != 0`.
pub fn cosymplectic_family(chart: &Chart, h: &ScalarField, g: &ScalarField) -> Gac {
    let pt = point(&[("x", 0), ("y", 0), ("z", 0)]);
    let xi = one_form(chart, vec![h.partial(0), h.partial(1), chart.one()]).unwrap();
    let theta = KForm::basis(chart, &[0, 1]).scale(g);
    gac_construct(GacSource::Cosymplectic {
        xi,
        theta,
        sample: &pt,
    })
    .unwrap()
}

pub fn horizontal_vars() -> [usize; 2] {
    [0, 1]
}

pub fn seeded(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}

pub fn r2() -> Chart {
    Chart::new("R2", &["x", "y"]).unwrap()
}

pub fn r4() -> Chart {
    Chart::new("R4", &["x1", "x2", "x3", "x4"]).unwrap()
}

/// Integer matrix as an endomorphism, `rows[i][j] = (A d_j)^i`.
pub fn int_endo(chart: &Chart, rows: &[&[i64]]) -> Endomorphism {
    endo(
        chart,
        rows.iter()
            .map(|r| r.iter().map(|&v| chart.int(v)).collect())
            .collect(),
    )
}

/// `J d_1 = d_2`, `J d_3 = d_4` (and `d_x -> d_y` on R2).
pub fn rotation(chart: &Chart) -> Endomorphism {
    Endomorphism::from_fn(chart, |i, j| {
        if i / 2 != j / 2 || i == j {
            chart.zero()
        } else if i > j {
            chart.one()
        } else {
            -chart.one()
        }
    })
}

/// `J d_1 = d_2`, `J d_3 = -d_4`.
pub fn rotation_flipped(chart: &Chart) -> Endomorphism {
    int_endo(
        chart,
        &[&[0, -1, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, -1, 0]],
    )
}

/// Almost complex structure on R4 with `J d_3 = d_4 + x1 d_2`,
/// `J d_4 = -d_3 + x1 d_1`; not integrable.
pub fn twisted(chart: &Chart) -> Endomorphism {
    let (o, l, x1) = (chart.zero(), chart.one(), chart.coord(0));
    endo(
        chart,
        vec![
            vec![o.clone(), -l.clone(), o.clone(), x1.clone()],
            vec![l.clone(), o.clone(), x1.clone(), o.clone()],
            vec![o.clone(), o.clone(), o.clone(), -l.clone()],
            vec![o.clone(), o.clone(), l.clone(), o.clone()],
        ],
    )
}

pub fn standard_symplectic(chart: &Chart) -> KForm {
    let mut w = KForm::zero(chart, 2);
    for k in 0..chart.dim() / 2 {
        w = w.add(&KForm::basis(chart, &[2 * k, 2 * k + 1]));
    }
    w
}

/// Every built-in Gcx with the expected integrability verdict.
pub fn catalog_gcx() -> Vec<(&'static str, Gcx, bool)> {
    let (m2, m4) = (r2(), r4());
    let x1 = m4.coord(0);
    let mut out = vec![
        (
            "flat-complex-R2",
            construct_gcx(GcxSource::Complex(rotation(&m2))).unwrap(),
            true,
        ),
        (
            "flat-symplectic-R2",
            construct_gcx(GcxSource::Symplectic(standard_symplectic(&m2))).unwrap(),
            true,
        ),
        (
            "curved-symplectic-R2",
            construct_gcx(GcxSource::Symplectic(
                KForm::basis(&m2, &[0, 1]).scale(&(m2.one() + m2.coord(1) * m2.coord(1))),
            ))
            .unwrap(),
            true,
        ),
        (
            "flat-complex-R4",
            construct_gcx(GcxSource::Complex(rotation(&m4))).unwrap(),
            true,
        ),
        (
            "twisted-complex-R4",
            construct_gcx(GcxSource::Complex(twisted(&m4))).unwrap(),
            false,
        ),
        (
            "hitchin-nonintegrable-R4",
            construct_gcx(GcxSource::Hitchin {
                varpi: standard_symplectic(&m4),
                a: Endomorphism::identity(&m4).scale(&x1),
            })
            .unwrap(),
            false,
        ),
        (
            "hitchin-constant-R4",
            construct_gcx(GcxSource::Hitchin {
                varpi: standard_symplectic(&m4),
                a: Endomorphism::identity(&m4).scale(&m4.int(2)),
            })
            .unwrap(),
            true,
        ),
    ];
    out.push((
        "psi-shifted-hermitian-R4",
        psi_shifted(&m4).gcx().clone(),
        true,
    ));
    out
}

/// `gamma = delta`, classical Kähler data for `rotation`.
pub fn flat_kahler(chart: &Chart) -> Gah {
    let metric = grm_from_pair(SymmetricTensor::euclidean(chart), KForm::zero(chart, 2)).unwrap();
    Gah::new(
        metric,
        construct_gcx(GcxSource::Complex(rotation(chart))).unwrap(),
    )
    .unwrap()
}

fn from_quadruple(chart: &Chart, psi: KForm, jp: &Endomorphism, jm: &Endomorphism) -> Gah {
    let gamma = SymmetricTensor::euclidean(chart);
    let j = reconstruct(&gamma, &psi, jp, jm).unwrap();
    Gah::new(grm_from_pair(gamma, psi).unwrap(), j).unwrap()
}

/// Flat bi-Hermitian data with `psi = dx1 ^ dx2`, `J_+ = rotation`,
/// `J_- = rotation_flipped`.
pub fn psi_shifted(chart: &Chart) -> Gah {
    from_quadruple(
        chart,
        KForm::basis(chart, &[0, 1]),
        &rotation(chart),
        &rotation_flipped(chart),
    )
}

/// Constant `J_pm = rotation` with non-closed `psi = x1 dx3 ^ dx4`.
pub fn nonclosed_psi(chart: &Chart) -> Gah {
    let psi = KForm::basis(chart, &[2, 3]).scale(&chart.coord(0));
    from_quadruple(chart, psi, &rotation(chart), &rotation(chart))
}
