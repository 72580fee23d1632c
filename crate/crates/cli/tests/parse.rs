use gcverify::syntax::FieldValue;
use gcverify::{parse, run_text, ErrorKind, RunError};
use gcverify_core::calculus::{Bivector, Chart, KForm};
use gcverify_core::scalar::{GaussianRational, EXP_NAME};

const R3: &str = "chart M dim 3 coords x y z\npoint origin on M: x = 0, y = 0, z = 0\n";

fn cac_with_xi(xi: &str) -> String {
    format!("{R3}cac c on M {{\n    F = 0\n    Z = @z\n    xi = {xi}\n}}\n")
}

fn gac_with(p: &str, theta: &str) -> String {
    format!("{R3}gac g on M {{\n    F = 0\n    P = {p}\n    theta = {theta}\n    Z = @z\n    xi = dz\n}}\n")
}

fn field(text: &str, structure: &str, name: &str) -> FieldValue {
    parse(text)
        .unwrap()
        .structure(structure)
        .unwrap()
        .field(name)
        .unwrap()
        .clone()
}

fn chart() -> Chart {
    Chart::new("M", &["x", "y", "z"]).unwrap()
}

#[test]
fn contact_form_components() {
    let FieldValue::Form(xi) = field(&cac_with_xi("dz - y*dx"), "c", "xi") else {
        panic!()
    };
    let m = chart();
    assert_eq!(xi.components(), &[-m.coord(1), m.zero(), m.one()]);
}

#[test]
fn wedge_of_coframe_symbols() {
    let FieldValue::Form(theta) = field(&gac_with("0", "dx ^^ dy"), "g", "theta") else {
        panic!()
    };
    assert_eq!(theta, KForm::basis(&chart(), &[0, 1]));
}

#[test]
fn rational_bivector_from_frame_symbols() {
    let FieldValue::Multi(p) = field(&gac_with("(1/2)*@x ^^ @y", "0"), "g", "P") else {
        panic!()
    };
    let m = chart();
    assert_eq!(p, Bivector::basis(&m, &[0, 1]).scale(&m.rational(1, 2)));
}

#[test]
fn wedge_binds_tighter_than_product() {
    let a = field(&gac_with("0", "x*dx ^^ dy"), "g", "theta");
    let b = field(&gac_with("0", "x*(dx ^^ dy)"), "g", "theta");
    assert_eq!(a, b);
    let antisym = field(&gac_with("0", "dy ^^ dx"), "g", "theta");
    let FieldValue::Form(f) = antisym else {
        panic!()
    };
    assert_eq!(f, KForm::basis(&chart(), &[0, 1]).neg());
}

#[test]
fn gaussian_literals_and_powers() {
    let FieldValue::Form(xi) = field(
        &cac_with_xi("(1 + 2*i)*x^2*dx + y^-1*dy + (x^(2))/3*dz"),
        "c",
        "xi",
    ) else {
        panic!()
    };
    let m = chart();
    let c = m.constant(
        &GaussianRational::from_int(1) + &(&GaussianRational::from_int(2) * &GaussianRational::i()),
    );
    assert_eq!(xi.components()[0], &c * &(&m.coord(0) * &m.coord(0)));
    assert_eq!(xi.components()[1], &m.one() / &m.coord(1));
    assert_eq!(xi.components()[2], &(&m.coord(0) * &m.coord(0)) / &m.int(3));
}

#[test]
fn endomorphisms_and_metrics_from_tensor_products() {
    let text = format!(
        "{R3}cacm c on M {{\n    F = @y*dx - @x*dy\n    Z = @z\n    xi = dz\n    gamma = dx*dx + dy*dy + (1 + x^2)*dz*dz\n}}\n"
    );
    let FieldValue::Endo(f) = field(&text, "c", "F") else {
        panic!()
    };
    let m = chart();
    // matrix[i][j] = (F d_j)^i
    assert_eq!(f.entry(1, 0), &m.one());
    assert_eq!(f.entry(0, 1), &m.int(-1));
    let FieldValue::Metric(g) = field(&text, "c", "gamma") else {
        panic!()
    };
    assert_eq!(g.entry(2, 2), &(&m.one() + &(&m.coord(0) * &m.coord(0))));
}

#[test]
fn scalar_endomorphism_is_a_multiple_of_identity() {
    let text =
        "chart N dim 2 coords u v\ngcx h on N from hitchin {\n    varpi = du ^^ dv\n    A = 3\n}\n";
    let FieldValue::Endo(a) = field(text, "h", "A") else {
        panic!()
    };
    let n = Chart::new("N", &["u", "v"]).unwrap();
    assert_eq!(a.entry(0, 0), &n.int(3));
    assert!(a.entry(0, 1).is_zero());
}

#[test]
fn cylinder_charts_know_exp_and_fill_the_sample_point() {
    let text = "chart C dim 2 coords x cylinder\npoint p on C: x = 1, t = 0\ncac c on C {\n    F = 0\n    Z = @t\n    xi = exp(t)*dx\n}\n";
    let f = parse(text).unwrap();
    assert_eq!(
        f.points[0].values.get(EXP_NAME),
        Some(&GaussianRational::from_int(1))
    );
    let c = &f.charts[0].chart;
    let Some(FieldValue::Form(xi)) = f.structures[0].field("xi") else {
        panic!()
    };
    assert_eq!(xi.components()[0], c.exp_t(1).unwrap());

    let e = parse("chart C dim 2 coords x cylinder\npoint p on C: x = 1, t = 1\n").unwrap_err();
    assert_eq!(e.kind, ErrorKind::Binding);
    assert!(e.expected.contains(&EXP_NAME.to_string()));
}

#[test]
fn lexical_error_has_position() {
    let e = parse("chart M dim 1 coords x\npoint p on M: x = 1 $ 2\n").unwrap_err();
    assert_eq!((e.kind, e.line, e.col), (ErrorKind::Lexical, 2, 21));
}

#[test]
fn syntax_error_lists_expected_tokens() {
    let e = parse("chart M dim 3 coords x y z\ncac c on M {\n    F 0\n}\n").unwrap_err();
    assert_eq!((e.kind, e.line, e.col), (ErrorKind::Syntax, 3, 7));
    assert_eq!(e.expected, vec!["`=`".to_string()]);

    let e = parse("charts M\n").unwrap_err();
    assert_eq!((e.line, e.col), (1, 1));
    assert!(e.expected.contains(&"`chart`".to_string()));
    assert!(e.expected.contains(&"`gac`".to_string()));
}

#[test]
fn implicit_multiplication_is_rejected() {
    let e = parse(&cac_with_xi("dz - y dx")).unwrap_err();
    assert_eq!((e.kind, e.line, e.col), (ErrorKind::Syntax, 6, 17));
    let e = parse(&cac_with_xi("2x*dz")).unwrap_err();
    assert_eq!(e.kind, ErrorKind::Lexical);
}

#[test]
fn undeclared_symbol_is_a_binding_error() {
    let e = parse(&cac_with_xi("dz - w*dx")).unwrap_err();
    assert_eq!((e.kind, e.line, e.col), (ErrorKind::Binding, 6, 15));
    assert!(e.expected.contains(&"dx".to_string()) && e.expected.contains(&"@z".to_string()));
    let e = parse("cac c on M {\n}\n").unwrap_err();
    assert_eq!(e.kind, ErrorKind::Binding);
}

#[test]
fn degree_mismatch_is_an_arity_error() {
    let e = parse(&cac_with_xi("dx ^^ dy")).unwrap_err();
    assert_eq!((e.kind, e.line, e.col), (ErrorKind::Arity, 6, 10));
    let e = parse(&cac_with_xi("dz + @x")).unwrap_err();
    assert_eq!(e.kind, ErrorKind::Arity);
    let e = parse(&cac_with_xi("dz ^^ @x")).unwrap_err();
    assert_eq!(e.kind, ErrorKind::Arity);
}

#[test]
fn division_by_zero_is_a_domain_error() {
    let e = parse(&cac_with_xi("dz/(x - x)")).unwrap_err();
    assert_eq!(e.kind, ErrorKind::Domain);
}

#[test]
fn nonsymmetric_metric_is_rejected() {
    let text = format!("{R3}grm g on M {{\n    gamma = dx*dy\n}}\n");
    assert_eq!(parse(&text).unwrap_err().kind, ErrorKind::Arity);
}

#[test]
fn reserved_and_clashing_coordinates() {
    for decl in [
        "chart M dim 2 coords x i",
        "chart M dim 2 coords x t cylinder",
        "chart M dim 2 coords x dx",
        "chart M dim 2 coords x x",
    ] {
        assert_eq!(parse(decl).unwrap_err().kind, ErrorKind::Binding, "{decl}");
    }
    assert_eq!(
        parse("chart M dim 3 coords x y").unwrap_err().kind,
        ErrorKind::Arity
    );
}

#[test]
fn fields_are_checked_against_the_construction() {
    let e = parse(&format!(
        "{R3}cac c on M {{\n    F = 0\n    Z = @z\n    xi = dz\n    B = 0\n}}\n"
    ))
    .unwrap_err();
    assert_eq!(e.kind, ErrorKind::Binding);
    assert!(e.expected.contains(&"`xi`".to_string()));
    let e = parse(&format!("{R3}cac c on M {{\n    F = 0\n    Z = @z\n}}\n")).unwrap_err();
    assert_eq!(e.expected, vec!["`xi`".to_string()]);
    let e = parse(&format!("{R3}gac g on M from nowhere {{\n}}\n")).unwrap_err();
    assert!(e.expected.contains(&"`contact`".to_string()));
}

#[test]
fn references_must_exist_and_have_the_right_kind() {
    let body =
        format!("{R3}gac g on M from contact {{\n    xi = dz - y*dx\n    sample = origin\n}}\n");
    let e = parse(&format!(
        "{body}cacm c on M from conjugate {{\n    base = g\n}}\n"
    ))
    .unwrap_err();
    assert_eq!(e.kind, ErrorKind::Arity);
    let e = parse(&format!(
        "{body}cacm c on M from conjugate {{\n    base = nothing\n}}\n"
    ))
    .unwrap_err();
    assert_eq!(e.kind, ErrorKind::Binding);
    let e = parse(&format!(
        "{R3}gac g on M from contact {{\n    xi = dz\n    sample = elsewhere\n}}\n"
    ))
    .unwrap_err();
    assert_eq!(e.kind, ErrorKind::Binding);
}

#[test]
fn undeclared_structure_in_check_gives_no_report() {
    let text = format!("{}check gac-normality heis direct\n", cac_with_xi("dz"));
    let e = parse(&text).unwrap_err();
    assert_eq!((e.kind, e.line, e.col), (ErrorKind::Binding, 8, 21));
    assert!(matches!(run_text(&text, &[]), Err(RunError::Parse(_))));
}

#[test]
fn comments_and_semicolons() {
    let text = "# header\nchart M dim 1 coords x # trailing\npoint a on M: x = 0; point b on M: x = -1/2\n";
    let f = parse(text).unwrap();
    assert_eq!(f.points.len(), 2);
    assert_eq!(
        f.points[1].values["x"],
        &GaussianRational::from_int(-1) / &GaussianRational::from_int(2)
    );
}

#[test]
fn error_display_carries_position_and_expectations() {
    let e = parse("chart M dim 1 coords x\ncac c on M {\n    F 0\n}\n").unwrap_err();
    assert_eq!(
        e.to_string(),
        "3:7: syntax error: unexpected `0`; expected one of: `=`"
    );
}
