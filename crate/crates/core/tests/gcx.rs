mod common;

use common::*;
use gcverify_core::calculus::{
    exterior_derivative, one_form, BigOperator, Bivector, Chart, Endomorphism, KForm,
};
use gcverify_core::gcx::*;
use gcverify_core::Error;
use rand::Rng;

#[test]
fn complex_and_symplectic_structures_validate() {
    let m = r2();
    let j = validate_gcx(rotation(&m), Bivector::zero(&m, 2), KForm::zero(&m, 2)).unwrap();
    assert_eq!(j, construct_gcx(GcxSource::Complex(rotation(&m))).unwrap());

    // pi = -omega^{-1}: sharp_pi = -(flat_omega)^{-1}
    let omega = KForm::basis(&m, &[0, 1]);
    let pi = Bivector::basis(&m, &[0, 1]);
    let s = validate_gcx(Endomorphism::zero(&m), pi.clone(), omega.clone()).unwrap();
    assert_eq!(s, construct_gcx(GcxSource::Symplectic(omega)).unwrap());
    assert_eq!(s.pi(), &pi);
}

#[test]
fn odd_dimension_is_rejected() {
    let m = r3();
    let a = int_endo(&m, &[&[0, -1, 0], &[1, 0, 0], &[0, 0, 0]]);
    let r = validate_gcx(a.clone(), Bivector::zero(&m, 2), KForm::zero(&m, 2));
    assert!(matches!(r, Err(Error::OddDimension(3))));
    let r = validate_gcx(
        Endomorphism::zero(&m),
        Bivector::basis(&m, &[0, 1]),
        KForm::basis(&m, &[0, 1]),
    );
    assert!(matches!(r, Err(Error::OddDimension(3))));
}

#[test]
fn violated_clauses_are_named() {
    let m = r2();
    let err = validate_gcx(
        Endomorphism::identity(&m),
        Bivector::zero(&m, 2),
        KForm::zero(&m, 2),
    )
    .unwrap_err();
    let Error::Invalid(v) = err else { panic!() };
    assert!(!v.passed("square-is-minus-identity"));

    let m = r4();
    let sigma = KForm::basis(&m, &[0, 2]);
    let a = rotation(&m);
    let v = gcx_axioms(&a, &Bivector::zero(&m, 2), &sigma).unwrap();
    assert!(!v.passed("sigma-compatible"));
    let v = gcx_axioms(&a, &Bivector::basis(&m, &[0, 2]), &KForm::zero(&m, 2)).unwrap();
    assert!(!v.passed("pi-compatible"));
}

#[test]
fn hitchin_with_zero_endomorphism_is_symplectic() {
    let m = r4();
    let w = standard_symplectic(&m);
    let h = construct_gcx(GcxSource::Hitchin {
        varpi: w.clone(),
        a: Endomorphism::zero(&m),
    })
    .unwrap();
    assert_eq!(h, construct_gcx(GcxSource::Symplectic(w.clone())).unwrap());
    assert_eq!(h.sigma(), &w);
}

#[test]
fn hitchin_rejects_bad_input() {
    let m = r4();
    let degenerate = KForm::basis(&m, &[0, 1]);
    let r = construct_gcx(GcxSource::Hitchin {
        varpi: degenerate,
        a: Endomorphism::zero(&m),
    });
    assert!(matches!(r, Err(Error::Degenerate(_))));
    let r = construct_gcx(GcxSource::Hitchin {
        varpi: standard_symplectic(&m),
        a: int_endo(
            &m,
            &[&[0, 1, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 0]],
        ),
    });
    assert!(matches!(r, Err(Error::Incompatible(_))));
}

#[test]
fn catalog_verdicts() {
    for (name, j, integrable) in catalog_gcx() {
        let t = integrability_via_torsion(&j);
        let c = integrability_via_conditions(&j);
        assert_eq!(t.pass(), integrable, "{name} torsion: {t}");
        assert_eq!(c.pass(), integrable, "{name} conditions: {c}");
        assert!(t.diagnostics.iter().all(|d| d.pass()), "{name}: {t}");
    }
}

#[test]
fn hitchin_nonintegrable_fails_associated_form_clause() {
    let (_, j, _) = catalog_gcx()
        .into_iter()
        .find(|e| e.0 == "hitchin-nonintegrable-R4")
        .unwrap();
    let c = integrability_via_conditions(&j);
    assert!(!c.passed("associated-form"), "{c}");
    assert!(c.passed("poisson"));
}

#[test]
fn twisted_structure_has_nonzero_nijenhuis_on_first_and_third() {
    let m = r4();
    let n = gcverify_core::calculus::nijenhuis(&twisted(&m));
    assert!(!n[0][2].is_zero());
    let j = construct_gcx(GcxSource::Complex(twisted(&m))).unwrap();
    let t = courant_nijenhuis_torsion(&j);
    assert!(t.iter().flatten().any(|s| !s.is_zero()));
}

#[test]
fn torsion_table_is_antisymmetric() {
    for (name, j, _) in catalog_gcx() {
        let t = courant_nijenhuis_torsion(&j);
        for p in 0..t.len() {
            assert!(t[p][p].is_zero(), "{name}");
            for q in 0..t.len() {
                assert_eq!(t[p][q], t[q][p].neg(), "{name} ({p},{q})");
            }
        }
    }
}

#[test]
fn constant_b_field_on_symplectic() {
    let m = r2();
    let s = construct_gcx(GcxSource::Symplectic(KForm::basis(&m, &[0, 1]))).unwrap();
    let b = KForm::basis(&m, &[0, 1]);
    let t = b_transform_gcx(&s, &b).unwrap();
    assert!(integrability_via_torsion(&t).pass());
    assert_eq!(b_transform_gcx(&s, &KForm::zero(&m, 2)).unwrap(), s);
}

#[test]
fn b_field_block_formulas() {
    // e^{-B} J e^{B}: A' = A + sharp_pi flat_B, pi' = pi,
    // flat_sigma' = flat_sigma - flat_B A - A^t flat_B - flat_B sharp_pi flat_B.
    let m = r4();
    for (name, j, _) in catalog_gcx().into_iter().filter(|e| e.1.chart().dim() == 4) {
        let b = KForm::basis(&m, &[0, 2]).add(&KForm::basis(&m, &[1, 3]).scale(&m.int(3)));
        let t = b_transform_gcx(&j, &b).unwrap();
        let (am, sp, fs, fb) = (
            j.a().matrix(),
            gcverify_core::calculus::sharp_matrix(j.pi()),
            gcverify_core::calculus::flat_matrix(j.sigma()),
            gcverify_core::calculus::flat_matrix(&b),
        );
        assert_eq!(t.a().matrix(), &am.add(&sp.mul(&fb)), "{name}");
        assert_eq!(t.pi(), j.pi(), "{name}");
        let expect = fs
            .sub(&fb.mul(am))
            .sub(&am.transpose().mul(&fb))
            .sub(&fb.mul(&sp).mul(&fb));
        assert_eq!(
            gcverify_core::calculus::flat_matrix(t.sigma()),
            expect,
            "{name}"
        );
    }
}

#[test]
fn b_field_round_trip() {
    let m = r4();
    let alpha = one_form(
        &m,
        vec![m.coord(2), m.coord(0) * m.coord(3), m.zero(), m.zero()],
    )
    .unwrap();
    let b = exterior_derivative(&alpha).unwrap();
    let id = BigOperator::b_field(&b).compose(&BigOperator::b_field(&b.neg()));
    assert_eq!(id, BigOperator::identity(&m));
    for (name, j, _) in catalog_gcx().into_iter().filter(|e| e.1.chart().dim() == 4) {
        let back = b_transform_gcx(&b_transform_gcx(&j, &b).unwrap(), &b.neg()).unwrap();
        assert_eq!(back, j, "{name}");
    }
}

#[test]
fn non_closed_b_is_rejected() {
    let m = r4();
    let j = construct_gcx(GcxSource::Complex(rotation(&m))).unwrap();
    let b = KForm::basis(&m, &[1, 2]).scale(&m.coord(0));
    assert!(matches!(b_transform_gcx(&j, &b), Err(Error::NonClosedB)));
}

fn random_closed_b<R: Rng>(m: &Chart, rng: &mut R, exact: bool) -> KForm {
    let n = m.dim();
    if exact {
        let vars: Vec<usize> = (0..n).collect();
        let alpha = one_form(m, (0..n).map(|_| random_poly(m, &vars, 2, rng)).collect()).unwrap();
        return exterior_derivative(&alpha).unwrap();
    }
    let mut b = KForm::zero(m, 2);
    for t in gcverify_core::calculus::tuples(n, 2) {
        b = b.add(&KForm::basis(m, &t).scale(&m.int(rng.gen_range(-3..=3))));
    }
    b
}

#[test]
fn methods_agree_on_b_shifted_variants() {
    let mut rng = seeded(5);
    let catalog = catalog_gcx();
    for round in 0..20 {
        let (name, j, integrable) = &catalog[round % catalog.len()];
        let b = random_closed_b(j.chart(), &mut rng, round % 4 == 3);
        let shifted = b_transform_gcx(j, &b).unwrap();
        assert!(gcx_axioms(shifted.a(), shifted.pi(), shifted.sigma())
            .unwrap()
            .pass());
        let t = integrability_via_torsion(&shifted).pass();
        let c = integrability_via_conditions(&shifted).pass();
        assert_eq!(t, c, "{name} shifted by {b}");
        assert_eq!(t, *integrable, "{name} shifted by {b}");
    }
}

#[test]
fn operator_round_trip() {
    for (name, j, _) in catalog_gcx() {
        assert_eq!(Gcx::from_operator(&j.operator()).unwrap(), j, "{name}");
        let sq = j
            .operator()
            .compose(&j.operator())
            .add(&BigOperator::identity(j.chart()));
        assert!(sq.is_zero(), "{name}");
    }
}
