mod common;

use common::*;
use gcverify_core::calculus::{
    exterior_derivative, Endomorphism, GeneralizedSection, KForm, SymmetricTensor, VectorField,
};
use gcverify_core::gcx::{b_transform_gcx, construct_gcx, GcxSource};
use gcverify_core::ghk::*;
use gcverify_core::Error;

const METHODS: [KahlerMethod; 4] = [
    KahlerMethod::G4,
    KahlerMethod::G6,
    KahlerMethod::Closure,
    KahlerMethod::Torsion,
];

fn metric_fixtures() -> Vec<Grm> {
    let (m2, m4) = (r2(), r4());
    let curved = metric(
        &m2,
        vec![
            vec![m2.one() + m2.coord(0) * m2.coord(0), m2.zero()],
            vec![m2.zero(), m2.one()],
        ],
    );
    vec![
        grm_from_pair(SymmetricTensor::euclidean(&m2), KForm::zero(&m2, 2)).unwrap(),
        grm_from_pair(SymmetricTensor::euclidean(&m2), KForm::basis(&m2, &[0, 1])).unwrap(),
        grm_from_pair(curved.clone(), KForm::zero(&m2, 2)).unwrap(),
        grm_from_pair(curved, KForm::basis(&m2, &[0, 1]).scale(&m2.coord(1))).unwrap(),
        psi_shifted(&m4).metric().clone(),
        nonclosed_psi(&m4).metric().clone(),
    ]
}

fn gah_fixtures() -> Vec<(&'static str, Gah)> {
    let m4 = r4();
    let mut out = vec![
        ("flat-kahler-R2", flat_kahler(&r2())),
        ("flat-kahler-R4", flat_kahler(&m4)),
        ("psi-shifted-hermitian-R4", psi_shifted(&m4)),
        ("nonclosed-psi-R4", nonclosed_psi(&m4)),
    ];
    let sym = construct_gcx(GcxSource::Symplectic(standard_symplectic(&m4))).unwrap();
    let g = grm_from_pair(SymmetricTensor::euclidean(&m4), KForm::zero(&m4, 2)).unwrap();
    out.push(("almost-kahler-R4", Gah::new(g, sym).unwrap()));
    out
}

#[test]
fn zero_psi_gives_zero_phi() {
    let m = r2();
    for gamma in [
        SymmetricTensor::euclidean(&m),
        metric(
            &m,
            vec![
                vec![m.one() + m.coord(0) * m.coord(0), m.zero()],
                vec![m.zero(), m.one()],
            ],
        ),
    ] {
        let g = grm_from_pair(gamma.clone(), KForm::zero(&m, 2)).unwrap();
        assert!(g.phi().is_zero());
        assert_eq!(g.beta(), &gamma);
    }
}

#[test]
fn unit_psi_on_plane() {
    let m = r2();
    let g = grm_from_pair(SymmetricTensor::euclidean(&m), KForm::basis(&m, &[0, 1])).unwrap();
    // phi d_x = -d_y, phi d_y = d_x
    assert_eq!(g.phi(), &int_endo(&m, &[&[0, 1], &[-1, 0]]));
    assert_eq!(g.beta(), &SymmetricTensor::euclidean(&m).scale(&m.int(2)));
}

#[test]
fn degenerate_gamma_is_rejected() {
    let m = r2();
    let gamma = SymmetricTensor::square_of(&KForm::basis(&m, &[0]));
    assert!(matches!(
        grm_from_pair(gamma, KForm::zero(&m, 2)),
        Err(Error::Degenerate(_))
    ));
}

#[test]
fn sharp_g_on_classical_metric() {
    let m = r2();
    let g = grm_from_pair(SymmetricTensor::euclidean(&m), KForm::zero(&m, 2)).unwrap();
    let sg = g.sharp_g();
    let dx = VectorField::basis(&m, 0);
    let s = GeneralizedSection::from_vector(dx.clone());
    assert_eq!(
        sg.apply(&s),
        GeneralizedSection::from_form(KForm::basis(&m, &[0]))
    );
    let fixed = GeneralizedSection::new(dx, KForm::basis(&m, &[0])).unwrap();
    assert_eq!(sg.apply(&fixed), fixed);
}

#[test]
fn eigenframe_examples() {
    let m = r2();
    let g = grm_from_pair(SymmetricTensor::euclidean(&m), KForm::zero(&m, 2)).unwrap();
    let (vp, _) = eigenframe(&g);
    assert_eq!(
        vp[0],
        GeneralizedSection::new(VectorField::basis(&m, 0), KForm::basis(&m, &[0])).unwrap()
    );
    assert_eq!(
        vp[1],
        GeneralizedSection::new(VectorField::basis(&m, 1), KForm::basis(&m, &[1])).unwrap()
    );

    let g = grm_from_pair(SymmetricTensor::euclidean(&m), KForm::basis(&m, &[0, 1])).unwrap();
    let s = g.tau_inv(1, &VectorField::basis(&m, 0));
    let expect = KForm::basis(&m, &[0]).add(&KForm::basis(&m, &[1]));
    assert_eq!(
        s,
        GeneralizedSection::new(VectorField::basis(&m, 0), expect).unwrap()
    );
}

#[test]
fn metric_identities_on_fixtures() {
    for g in metric_fixtures() {
        let v = grm_identities(&g);
        assert!(v.pass(), "{v}");
    }
}

#[test]
fn sharp_g_is_an_isometric_involution_on_random_sections() {
    let mut rng = seeded(3);
    for g in metric_fixtures() {
        let chart = g.chart().clone();
        let vars: Vec<usize> = (0..chart.dim()).collect();
        let mut section = || {
            let col: Vec<_> = (0..2 * chart.dim())
                .map(|_| random_poly(&chart, &vars, 2, &mut rng))
                .collect();
            GeneralizedSection::from_column(&chart, &col).unwrap()
        };
        let sg = g.sharp_g();
        for _ in 0..4 {
            let (s1, s2) = (section(), section());
            assert_eq!(sg.apply(&sg.apply(&s1)), s1);
            let lhs =
                gcverify_core::calculus::neutral_pairing(&sg.apply(&s1), &sg.apply(&s2)).unwrap();
            let rhs = gcverify_core::calculus::neutral_pairing(&s1, &s2).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn classical_kahler_transfer() {
    let m = r4();
    let s = flat_kahler(&m);
    assert_eq!(s.jplus(), &rotation(&m));
    assert_eq!(s.jminus(), &rotation(&m));
    let (jp, jm, wp, _) = transfer(&s);
    assert_eq!(jp, jm);
    assert_eq!(wp, kahler_form(s.metric().gamma(), &jp).unwrap());
}

#[test]
fn complementary_of_classical_kahler() {
    let m = r4();
    let s = flat_kahler(&m);
    let c = complementary(&s).unwrap();
    assert!(c.a().is_zero());
    assert_eq!(c.sigma(), s.omega_plus());
    // sharp_pi = -sharp_gamma J^t
    assert_eq!(
        gcverify_core::calculus::sharp_matrix(c.pi()),
        s.metric()
            .gamma_inverse()
            .mul(&rotation(&m).matrix().transpose())
            .neg()
    );
    let q = Gah::new(s.metric().clone(), c.clone()).unwrap();
    assert_eq!(q.jplus(), s.jplus());
    assert_eq!(q.jminus(), &s.jminus().neg());
    // the complement of the complement is the original
    assert_eq!(&complementary(&q).unwrap(), s.gcx());
    // -J J^c recovers sharp_G
    let prod = s.gcx().operator().compose(&c.operator()).neg();
    assert_eq!(prod, s.metric().sharp_g());
}

#[test]
fn complementary_transfer_flips_minus_side() {
    for (name, s) in gah_fixtures() {
        let c = complementary(&s).unwrap();
        let op = c.operator();
        assert!(
            op.compose(&s.gcx().operator())
                .sub(&s.gcx().operator().compose(&op))
                .is_zero(),
            "{name}"
        );
        let q = Gah::new(s.metric().clone(), c).unwrap();
        assert_eq!(q.jplus(), s.jplus(), "{name}");
        assert_eq!(q.jminus(), &s.jminus().neg(), "{name}");
    }
}

#[test]
fn reconstruct_classical_cases() {
    let m = r4();
    let gamma = SymmetricTensor::euclidean(&m);
    let psi = KForm::zero(&m, 2);
    let j = rotation(&m);
    assert_eq!(
        reconstruct(&gamma, &psi, &j, &j).unwrap(),
        construct_gcx(GcxSource::Complex(j.clone())).unwrap()
    );
    let c = reconstruct(&gamma, &psi, &j, &j.neg()).unwrap();
    assert!(c.a().is_zero());
    // sharp_pi = J sharp_gamma, sigma = omega
    assert_eq!(
        gcverify_core::calculus::sharp_matrix(c.pi()),
        j.matrix().clone()
    );
    assert_eq!(c.sigma(), &kahler_form(&gamma, &j).unwrap());
}

#[test]
fn reconstruct_inverts_transfer() {
    for (name, s) in gah_fixtures() {
        let (jp, jm, _, _) = transfer(&s);
        let j = reconstruct(s.metric().gamma(), s.metric().psi(), &jp, &jm).unwrap();
        assert_eq!(&j, s.gcx(), "{name}");
    }
}

#[test]
fn reconstruct_rejects_non_hermitian_input() {
    let m = r2();
    let gamma = metric(&m, vec![vec![m.int(2), m.zero()], vec![m.zero(), m.one()]]);
    let j = rotation(&m);
    assert!(matches!(
        reconstruct(&gamma, &KForm::zero(&m, 2), &j, &j),
        Err(Error::Invalid(_))
    ));
}

#[test]
fn psi_shifted_quadruple() {
    let m = r4();
    let s = psi_shifted(&m);
    for jm in [s.jplus(), s.jminus()] {
        assert!(almost_hermitian(s.metric().gamma(), jm, "J").pass());
    }
    assert_eq!(s.jplus(), &rotation(&m));
    assert_eq!(s.jminus(), &rotation_flipped(&m));
    assert!(!s.gcx().pi().is_zero());
}

#[test]
fn compatibility_examples() {
    let m = r2();
    let delta = grm_from_pair(SymmetricTensor::euclidean(&m), KForm::zero(&m, 2)).unwrap();
    let sym = construct_gcx(GcxSource::Symplectic(KForm::basis(&m, &[0, 1]))).unwrap();
    assert!(compat_check(&delta, &sym).pass());
    let cx = construct_gcx(GcxSource::Complex(rotation(&m))).unwrap();
    assert!(compat_check(&delta, &cx).pass());
    let skew = metric(&m, vec![vec![m.int(2), m.zero()], vec![m.zero(), m.one()]]);
    let g = grm_from_pair(skew, KForm::zero(&m, 2)).unwrap();
    assert!(!compat_check(&g, &cx).pass());
    assert!(matches!(Gah::new(g, cx), Err(Error::Invalid(_))));
}

#[test]
fn levi_civita_examples() {
    let m = r2();
    let flat = levi_civita(&SymmetricTensor::euclidean(&m)).unwrap();
    assert!(flat.iter().flatten().flatten().all(|c| c.is_zero()));

    let x = m.coord(0);
    let g = metric(
        &m,
        vec![vec![m.one() + &x * &x, m.zero()], vec![m.zero(), m.one()]],
    );
    let chr = levi_civita(&g).unwrap();
    assert_eq!(chr[0][0][0], &x / &(m.one() + &x * &x));
    for (k, i, j) in [(0, 0, 1), (0, 1, 1), (1, 0, 0), (1, 0, 1), (1, 1, 1)] {
        assert!(chr[k][i][j].is_zero(), "Gamma^{k}_{i}{j}");
    }
}

#[test]
fn levi_civita_is_torsion_free_and_metric() {
    let m = r3();
    let mut rng = seeded(9);
    for _ in 0..3 {
        // unipotent perturbation keeps det = 1
        let u = random_poly(&m, &[0, 1, 2], 2, &mut rng);
        let w = random_poly(&m, &[0, 1, 2], 1, &mut rng);
        let l = endo(
            &m,
            vec![
                vec![m.one(), u, w],
                vec![m.zero(), m.one(), m.coord(0)],
                vec![m.zero(), m.zero(), m.one()],
            ],
        );
        let lm = l.matrix();
        let g = SymmetricTensor::new(&m, lm.transpose().mul(lm)).unwrap();
        let chr = levi_civita(&g).unwrap();
        let n = 3;
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    assert_eq!(chr[k][i][j], chr[k][j][i]);
                    let mut d = g.entry(i, j).partial(k);
                    for l in 0..n {
                        d = d - &chr[l][k][i] * g.entry(l, j) - &chr[l][k][j] * g.entry(i, l);
                    }
                    assert!(d.is_zero());
                }
            }
        }
    }
}

#[test]
fn kahler_methods_on_catalog() {
    let expected = [
        ("flat-kahler-R2", true),
        ("flat-kahler-R4", true),
        ("psi-shifted-hermitian-R4", true),
        ("nonclosed-psi-R4", false),
        ("almost-kahler-R4", true),
    ];
    for ((name, s), (ename, pass)) in gah_fixtures().into_iter().zip(expected) {
        assert_eq!(name, ename);
        for method in METHODS {
            let v = kahler_check(&s, method).unwrap();
            assert_eq!(v.pass(), pass, "{name} {}: {v}", method.name());
        }
    }
}

#[test]
fn nonclosed_psi_fails_with_dpsi_witness() {
    let s = nonclosed_psi(&r4());
    assert!(!exterior_derivative(s.metric().psi()).unwrap().is_zero());
    let v = kahler_check(&s, KahlerMethod::G6).unwrap();
    assert!(v.passed("J+-integrable") && v.passed("J--integrable"));
    let c = v.condition("fundamental-form-identity+").unwrap();
    assert!(c.witness.as_ref().unwrap().value.is_some());
}

#[test]
fn closed_psi_bihermitian_means_parallel() {
    let s = psi_shifted(&r4());
    assert!(exterior_derivative(s.metric().psi()).unwrap().is_zero());
    let chr = levi_civita(s.metric().gamma()).unwrap();
    for jm in [s.jplus(), s.jminus()] {
        for a in 0..4 {
            assert!(covariant_derivative_endo(&chr, jm, a).is_zero());
        }
    }
}

#[test]
fn kahler_methods_agree_on_b_shifts() {
    // B-field conjugation of J with the matching shift of the metric.
    let m = r4();
    let b = KForm::basis(&m, &[0, 2]).add(&KForm::basis(&m, &[1, 3]).scale(&m.int(-2)));
    for (name, s) in gah_fixtures()
        .into_iter()
        .filter(|e| e.1.chart().dim() == 4)
    {
        let j = b_transform_gcx(s.gcx(), &b).unwrap();
        let psi = s.metric().psi().sub(&b);
        let g = grm_from_pair(s.metric().gamma().clone(), psi).unwrap();
        let shifted = Gah::new(g, j).unwrap();
        let verdicts: Vec<bool> = METHODS
            .iter()
            .map(|&me| kahler_check(&shifted, me).unwrap().pass())
            .collect();
        let base = kahler_check(&s, KahlerMethod::G6).unwrap().pass();
        assert!(verdicts.iter().all(|&v| v == base), "{name}: {verdicts:?}");
        assert_eq!(shifted.jplus(), s.jplus(), "{name}");
    }
}

#[test]
fn holomorphic_frame_needs_a_complex_structure() {
    let m = r2();
    assert!(holomorphic_frame(&rotation(&m)).unwrap().len() == 1);
    assert!(matches!(
        holomorphic_frame(&Endomorphism::identity(&m)),
        Err(Error::NoEigenframe(_))
    ));
}

#[test]
fn positivity_is_certified_at_points() {
    let m = r2();
    let g = grm_from_pair(SymmetricTensor::euclidean(&m), KForm::zero(&m, 2)).unwrap();
    assert!(g.positive_at(&[point(&[("x", 0), ("y", 0)])]).unwrap());
    let ind = metric(&m, vec![vec![m.one(), m.zero()], vec![m.zero(), -m.one()]]);
    let g = grm_from_pair(ind, KForm::zero(&m, 2)).unwrap();
    assert!(!g.positive_at(&[point(&[("x", 0), ("y", 0)])]).unwrap());
}

#[test]
fn sharp_g_block_form() {
    for g in metric_fixtures() {
        let sg = g.sharp_g();
        assert_eq!(sg.block(0, 0), g.phi().matrix().clone());
        assert_eq!(&sg.block(0, 1), g.gamma_inverse());
        assert_eq!(&sg.block(1, 0), g.beta().matrix());
        assert_eq!(sg.block(1, 1), g.phi().matrix().transpose());
    }
}
