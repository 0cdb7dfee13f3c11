use super::*;
use crate::arith::text::{parse_in, parse_poly_in};
use crate::cli::parse_model;

const LV: &str = "states: x1, x2\nparams: a, b, c, d\noutputs: y\nx1' = a*x1 - b*x1*x2\nx2' = -c*x2 + d*x1*x2\ny = x1\n";

const SEIR: &str = "states: S, E, I\nparams: a, b, nu, N\noutputs: y1, y2\n\
S' = -b*S*I/N\nE' = b*S*I/N - nu*E\nI' = nu*E - a*I\ny1 = I\ny2 = N\n";

fn opts() -> GbOptions {
    GbOptions { verify: true, ..Default::default() }
}

fn sorted(mut v: Vec<RatFunc>, u: &VarUniverse) -> Vec<String> {
    v.sort_by(cmp_simple);
    v.iter().map(|f| crate::arith::text::ratfunc_to_string(f, &namer(u))).collect()
}

#[test]
fn lotka_volterra() {
    let m = parse_model(LV).unwrap();
    let s = io_equations(&m, &opts()).unwrap();
    assert_eq!(s.equations.len(), 1);
    let e = &s.equations[0];
    assert!(e.principal);
    assert_eq!(e.order, 2);
    let want = parse_poly_in("y*y'' - y'^2 - d*y^2*y' + c*y*y' + a*d*y^3 - a*c*y^2", &s.universe).unwrap();
    assert_eq!(e.poly, want);
    let gens = identifiable_generators(&s.coefficients(), &m.params, &opts()).unwrap();
    assert_eq!(sorted(gens, &s.universe), vec!["a", "c", "d"]);
}

#[test]
fn seir() {
    let m = parse_model(SEIR).unwrap();
    let s = io_equations(&m, &opts()).unwrap();
    let want = parse_poly_in(
        "N*y1*y1''' + (-N*y1' + y1*(b*y1 + N*(a + nu)))*y1'' - N*(a + nu)*y1'^2 + b*y1^2*(a + nu)*y1' + a*b*nu*y1^3",
        &s.universe,
    )
    .unwrap();
    assert_eq!(s.equations[0].poly, want);
    assert_eq!(s.equations[1].poly, parse_poly_in("y2 - N", &s.universe).unwrap());
    let gens = identifiable_generators(&s.coefficients(), &m.params, &opts()).unwrap();
    assert_eq!(sorted(gens, &s.universe), vec!["b", "N", "a + nu", "a*nu"]);
}

#[test]
fn affine_first_order() {
    let m = parse_model("states: x\nparams: a, b\noutputs: y\nx' = a*x + b\ny = x\n").unwrap();
    let s = io_equations(&m, &opts()).unwrap();
    assert_eq!(s.equations[0].poly, parse_poly_in("y' - a*y - b", &s.universe).unwrap());
    let k = s.coefficients();
    assert_eq!(k, vec![parse_in("-a", &s.universe).unwrap(), parse_in("-b", &s.universe).unwrap()]);
}

#[test]
fn rational_right_hand_side_uses_saturation() {
    let m = parse_model("states: x\nparams: a\noutputs: y\nx' = a/x\ny = x\n").unwrap();
    let s = io_equations(&m, &opts()).unwrap();
    assert_eq!(s.equations[0].poly, parse_poly_in("y*y' - a", &s.universe).unwrap());
}

#[test]
fn cube_generator() {
    let m = parse_model("states: x\nparams: c\noutputs: y\nx' = c^3*x\ny = x\n").unwrap();
    let s = io_equations(&m, &opts()).unwrap();
    let gens = identifiable_generators(&s.coefficients(), &m.params, &opts()).unwrap();
    assert_eq!(sorted(gens, &s.universe), vec!["c^3"]);
}
