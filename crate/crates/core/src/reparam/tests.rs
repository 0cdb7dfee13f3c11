use super::*;
use crate::arith::text::parse_in;
use crate::arith::Rational;
use crate::cli::parse_model;

const LV: &str = include_str!("../../models/lotka_volterra.model");
const EX43: &str = include_str!("../../models/cube_root.model");
const EX44: &str = include_str!("../../models/plane.model");
const EX45: &str = include_str!("../../models/three_state.model");
const SEIR: &str = include_str!("../../models/seir.model");
const BILINEAR: &str = include_str!("../../models/bilinear.model");
const POLE: &str = include_str!("../../models/first_order_pole.model");
const POLY: &str = include_str!("../../models/first_order_poly.model");

fn cfg() -> PipelineConfig {
    let mut c = PipelineConfig::default();
    c.gb.verify = true;
    c
}

fn canonical(text: &str) -> String {
    parse_model(text).unwrap().to_text()
}

/// x = s(z) with new states named by `zs`, expressions parsed over them.
fn substitution(m: &OdeModel, zs: &[&str], s: &[&str]) -> Substitution {
    let mut u = m.universe.clone();
    let vars: Vec<usize> = zs.iter().map(|n| u.add(n, Role::State).unwrap()).collect();
    let s = s.iter().map(|e| parse_in(e, &u).unwrap()).collect();
    Substitution { universe: u, vars, s, provenance: Provenance::UserSupplied }
}

#[test]
fn inversion_of_second_state() {
    // the corrected model whose image under s = (z1 z2, 1/z2) is polynomial
    let m = parse_model("states: x1, x2\ninputs: u\noutputs: y\nx1' = u/x2 + 2*x1\nx2' = -2*x2\ny = u*x1\n").unwrap();
    let sub = substitution(&m, &["z1", "z2"], &["z1*z2", "1/z2"]);
    let out = compact(&apply_substitution(&m, &sub, None).unwrap(), false).unwrap();
    assert_eq!(out.to_text(), canonical("states: z1, z2\ninputs: u\noutputs: y\nz1' = u\nz2' = 2*z2\ny = u*z1*z2\n"));
    assert!(is_polynomial(&out));
}

#[test]
fn inversion_of_printed_model() {
    // with x2' = 2 the same substitution keeps a denominator
    let m = parse_model("states: x1, x2\ninputs: u\noutputs: y\nx1' = -u/x2^2 - 2*x1*x2\nx2' = 2\ny = u*x1\n").unwrap();
    let sub = substitution(&m, &["z1", "z2"], &["z1*z2", "1/z2"]);
    let out = compact(&apply_substitution(&m, &sub, None).unwrap(), false).unwrap();
    let want = "states: z1, z2\ninputs: u\noutputs: y\nz1' = (2*z1*z2^2 - u*z2^2 - 2*z1)/z2\nz2' = -2*z2^2\ny = u*z1*z2\n";
    assert_eq!(out.to_text(), canonical(want));
    assert!(!is_polynomial(&out));
}

#[test]
fn identity_substitution_is_neutral() {
    let m = parse_model(LV).unwrap();
    let sub = substitution(&m, &["z1", "z2"], &["z1", "z2"]);
    let out = apply_substitution(&m, &sub, None).unwrap();
    let again = compact(&out, true).unwrap();
    assert!(compact(&m, true).unwrap().same_equations(&again));
}

#[test]
fn singular_substitution_rejected() {
    let m = parse_model(LV).unwrap();
    let sub = substitution(&m, &["z1", "z2"], &["z1 + z2", "2*z1 + 2*z2"]);
    assert_eq!(apply_substitution(&m, &sub, None), Err(Error::SingularSubstitution));
}

#[test]
fn shapes() {
    let m = parse_model("states: x\ninputs: u\noutputs: y\nx' = (u - 1)/x^2\ny = u/x\n").unwrap();
    let x = m.states[0];
    let s = denominator_shape(&[m.f[0].clone(), m.g[0].clone()], x).unwrap();
    assert_eq!((s.a, s.b, s.m), (RatFunc::one(), RatFunc::zero(), 2));
    // denominators are stored monic, so a = 1
    let shifted = parse_in("1/(2*x^2 - 4*x + 2)", &m.universe).unwrap();
    let s = denominator_shape(&[shifted], x).unwrap();
    assert_eq!((s.a, s.b, s.m), (RatFunc::one(), RatFunc::one(), 2));
    let two_poles = parse_in("1/(x^2 - 1)", &m.universe).unwrap();
    assert_eq!(denominator_shape(&[two_poles], x), None);
    let poly = parse_in("x + 1", &m.universe).unwrap();
    assert_eq!(denominator_shape(&[poly], x).unwrap().m, 0);
}

#[test]
fn first_order_polynomial_realization() {
    let opts = cfg().gb;
    let out = polynomial_realization_first_order(&parse_model(POLE).unwrap(), &opts).unwrap();
    assert_eq!(out.to_text(), canonical("states: z\ninputs: u\noutputs: y\nz' = (1 - u)*z^4\ny = u*z\n"));
    let m = parse_model(POLY).unwrap();
    assert_eq!(polynomial_realization_first_order(&m, &opts).unwrap(), m);
}

#[test]
fn first_order_polynomial_failures() {
    let opts = cfg().gb;
    let two = parse_model("states: x\noutputs: y\nx' = -(x^2 - 1)/(3*x^2)\ny = x^3\n").unwrap();
    let r = polynomial_realization_first_order(&two, &opts);
    assert_eq!(r, Err(Error::NoPolynomialRealization("shape".into())));
    let input = parse_model("states: x\ninputs: u\noutputs: y\nx' = x/u\ny = x\n").unwrap();
    let r = polynomial_realization_first_order(&input, &opts);
    assert_eq!(r, Err(Error::NoPolynomialRealization("u-in-denominator".into())));
}

#[test]
fn cube_root_pipeline() {
    let out = optimal_realization_general(&parse_model(EX43).unwrap(), &cfg()).unwrap();
    assert_eq!(out.to_text(), canonical("states: z\nparams: h\noutputs: y\nz' = (h*z + 1)/3\ny = -h*z^3\n"));
    // the first-order entry points agree
    let fo = optimal_realization_first_order(&parse_model(EX43).unwrap(), &cfg()).unwrap();
    assert_eq!(fo, out);
}

#[test]
fn plane_pipeline() {
    let out = optimal_realization_general(&parse_model(EX44).unwrap(), &cfg()).unwrap();
    let want = "states: z1, z2\nparams: h\noutputs: y\nz1' = z2^3/(2*z1*h)\nz2' = (h*z1 + z2)/(3*z2^2)\ny = h*z1^2\n";
    assert_eq!(out.to_text(), canonical(want));
}

#[test]
fn three_state_pipeline() {
    let out = optimal_realization_general(&parse_model(EX45).unwrap(), &cfg()).unwrap();
    let want = "states: z1, z2, z3\nparams: h\noutputs: y\nz1' = z2\nz2' = z3\nz3' = h*z1\ny = h*(z1^2 + 1)\n";
    assert_eq!(out.to_text(), canonical(want));
}

#[test]
fn seir_pipeline() {
    let st = run_stages(&parse_model(SEIR).unwrap(), &cfg());
    let out = st.result.clone().unwrap();
    let want = "states: z1, z2, z3\nparams: b, N, h, h1\noutputs: y1, y2\n\
z1' = -b*z1*z3/N\nz2' = -z3*(N - b*z1)/N\nz3' = h1*z2 - h*z3\ny1 = z3\ny2 = N\n";
    assert_eq!(out.to_text(), canonical(want));
    let (_, _, tower) = st.evaluated.as_ref().unwrap();
    let u = st.witness.as_ref().unwrap().universe.clone();
    let defs: Vec<String> = tower.tower.transcendentals.iter().map(|(_, d)| crate::arith::text::ratfunc_to_string(d, &crate::arith::text::namer(&u))).collect();
    assert_eq!(defs, vec!["b", "N", "a + nu", "a*nu"]);
    assert!(st.verification.unwrap().ok());
}

#[test]
fn bilinear_pipeline() {
    let m = parse_model(BILINEAR).unwrap();
    let mut c = cfg();
    c.fixed = vec![("p2".into(), Rational::from_integer(1.into()))];
    let out = optimal_realization_general(&m, &c).unwrap();
    let want = "states: z1, z2, z3\nparams: h, h1, h2\ninputs: u\noutputs: y\n\
z1' = h1*z2 + u\nz2' = -h*z2 - z1\nz3' = (h2*u*z2 - z3)*h + 2*h2*u*z1\ny = z3\n";
    assert_eq!(out.to_text(), canonical(want));
    // p2 = 0 collapses the parametrization
    c.fixed = vec![("p2".into(), Rational::from_integer(0.into()))];
    let st = run_stages(&m, &c);
    assert_eq!(st.error.as_ref().map(|(s, _)| s.as_str()), Some("evaluation"));
}

#[test]
fn identifiable_model_is_echoed() {
    let m = parse_model("states: x\nparams: a, b\noutputs: y\nx' = a*x + b\ny = x\n").unwrap();
    let st = run_stages(&m, &cfg());
    assert!(st.warnings.iter().any(|w| w == "already globally identifiable"));
    assert_eq!(st.result.unwrap().to_text(), m.to_text());
}

#[test]
fn lotka_volterra_residual_is_fixed() {
    // b is transcendental over Q(a, c, d); evaluation removes it
    let m = parse_model(LV).unwrap();
    let st = run_stages(&m, &cfg());
    assert!(st.error.is_none(), "{:?}", st.error);
    let out = st.result.unwrap();
    assert_eq!(out.params.len(), 3);
    assert!(st.verification.unwrap().ok());
}

#[test]
fn verification() {
    let opts = cfg().gb;
    let m = parse_model(LV).unwrap();
    let io = io_equations(&m, &opts).unwrap();
    assert!(verify_realization(&m, &io, &opts).ok());
    let wrong = parse_model(&LV.replace("-c*x2", "-(c + 1)*x2")).unwrap();
    let v = verify_realization(&wrong, &io, &opts);
    assert!(!v.vanishes && !v.ok());
}

#[test]
fn rerun_is_stable() {
    // a realization over the identifiable field is already optimal
    let first = optimal_realization_general(&parse_model(EX44).unwrap(), &cfg()).unwrap();
    let again = optimal_realization_general(&first, &cfg()).unwrap();
    assert!(first.same_equations(&again));
}

#[test]
fn user_component_parametrization() {
    let m = parse_model(SEIR).unwrap();
    let lines: Vec<(String, String)> = include_str!("../../models/seir_component.param")
        .lines()
        .filter(|l| !l.starts_with('#') && l.contains('='))
        .map(|l| {
            let (a, b) = l.split_once('=').unwrap();
            (a.trim().to_string(), b.trim().to_string())
        })
        .collect();
    let mut c = cfg();
    c.component_param = Some(lines);
    let st = run_stages(&m, &c);
    assert!(st.error.is_none(), "{:?}", st.error);
    assert_eq!(st.substitution.unwrap().provenance, Provenance::UserSupplied);
    let auto = run_stages(&m, &cfg()).result.unwrap();
    assert!(st.result.unwrap().same_equations(&auto));
}
