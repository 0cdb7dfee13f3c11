use super::*;
use crate::arith::text::parse_poly_in;
use crate::arith::Rational;
use crate::cli::parse_model;
use crate::reparam::{run_stages, PipelineConfig, Stages};

const EX43: &str = include_str!("../../models/cube_root.model");
const EX44: &str = include_str!("../../models/plane.model");
const EX45: &str = include_str!("../../models/three_state.model");
const SEIR: &str = include_str!("../../models/seir.model");
const BILINEAR: &str = include_str!("../../models/bilinear.model");

fn stages(text: &str, fixed: Option<&str>) -> Stages {
    let m = parse_model(text).unwrap();
    let mut cfg = PipelineConfig::default();
    cfg.gb.verify = true;
    if let Some(p) = fixed {
        cfg.fixed = vec![(p.to_string(), Rational::from_integer(1.into()))];
    }
    run_stages(&m, &cfg)
}

fn prim(p: &MPoly) -> MPoly {
    int_primitive(p).1
}

fn polys(w: &WitnessData, src: &[&str]) -> Vec<MPoly> {
    src.iter().map(|s| prim(&parse_poly_in(s, &w.universe).unwrap())).collect()
}

/// Same ideal generators up to rational scalars and order.
fn same_set(a: &[MPoly], b: &[MPoly]) -> bool {
    let a: Vec<MPoly> = a.iter().map(prim).collect();
    a.len() == b.len() && b.iter().all(|p| a.contains(p))
}

#[test]
fn cube_root_example() {
    let st = stages(EX43, None);
    let w = st.witness.as_ref().unwrap();
    let want = polys(
        w,
        &[
            "-3*h*z0*z2^2 - 3*h*z1^2*z2 - 3*z0^2*z1",
            "-3*h*z1*z2^2 - 3*z0^2*z2 - 3*z0*z1^2",
            "-3*h^2*z0*z2^2 - 3*h^2*z1^2*z2 - 3*h*z0^2*z1 - 2*h*z1*z2 - z0^2",
            "-3*h^2*z1*z2^2 - 3*h*z0^2*z2 - 3*h*z0*z1^2 - h*z2^2 - 2*z0*z1",
        ],
    );
    assert!(same_set(&w.h_polys, &want));
    let c = &st.components;
    assert_eq!(c.len(), 2);
    assert!(same_set(&c[0].ideal.gens, &polys(w, &["z0", "z2"])));
    assert!(line_check(&c[0]));
    assert!(same_set(&c[1].ideal.gens, &polys(w, &["z0", "z1", "z2"])));
    assert_eq!(c[1].dim, 0);
    assert!(!line_check(&c[1]));
    // the line parametrizes as (0, s1, 0)
    let mut u = w.universe.clone();
    let lp = parametrize_linear_component(&c[0], &w.z_flat(), &st.tower.as_ref().unwrap().identifiable_vars(), &mut u).unwrap();
    assert_eq!(lp.images, vec![RatFunc::zero(), RatFunc::var(lp.free[0]), RatFunc::zero()]);
}

#[test]
fn plane_example() {
    let st = stages(EX44, None);
    let w = st.witness.as_ref().unwrap();
    assert!(same_set(&w.h_polys, &polys(w, &["2*z10*z11", "h*z21^3 + 3*z20^2*z21", "z10 + z21"])));
    let c = &st.components;
    assert_eq!((c[0].dim, c[1].dim), (2, 1));
    assert!(same_set(&c[0].ideal.gens, &polys(w, &["z10", "z21"])));
    assert!(same_set(&c[1].ideal.gens, &polys(w, &["z11", "z10 + z21", "h*z21^2 + 3*z20^2"])));
    assert!(!c[1].linear && !line_check(&c[1]));
    assert!(c.iter().skip(2).all(|k| k.embedded));
}

#[test]
fn three_state_example() {
    let st = stages(EX45, None);
    let w = st.witness.as_ref().unwrap();
    let h = polys(
        w,
        &[
            "2*z10*z11",
            "2*h*z11*z21 + 2*z10*z20",
            "2*h*z11*z31 + 4*h*z20*z21 + 2*h*z11 + 2*z10*z30",
            "4*h*z10*z11 + 6*h*z20*z31 + 6*h*z21*z30 + 6*h*z20",
        ],
    );
    assert!(same_set(&w.h_polys, &h));
    let top: Vec<&WitnessComponent> = st.components.iter().filter(|c| !c.embedded).collect();
    assert_eq!(top.iter().map(|c| c.dim).collect::<Vec<_>>(), vec![3, 3, 2]);
    assert!(same_set(&top[0].ideal.gens, &polys(w, &["z10", "z21", "z31 + 1"])));
    assert!(same_set(&top[1].ideal.gens, &polys(w, &["z11", "z20", "z30"])));
    assert!(same_set(&top[2].ideal.gens, &polys(w, &["z10", "z11", "z20", "z21"])));
    let mut u = w.universe.clone();
    let lp = parametrize_linear_component(top[0], &w.z_flat(), &[u.get("h").unwrap()], &mut u).unwrap();
    let s: Vec<RatFunc> = lp.free.iter().map(|&v| RatFunc::var(v)).collect();
    let z = RatFunc::zero;
    assert_eq!(lp.images, vec![z(), s[0].clone(), s[1].clone(), z(), s[2].clone(), RatFunc::from_int(-1)]);
}

#[test]
fn seir_components() {
    let st = stages(SEIR, None);
    let w = st.witness.as_ref().unwrap();
    let top: Vec<&WitnessComponent> = st.components.iter().filter(|c| !c.embedded).collect();
    assert_eq!(top.len(), 2);
    assert_eq!((top[0].dim, top[1].dim), (3, 2));
    assert!(same_set(&top[0].ideal.gens, &polys(w, &["z10", "z31", "z30 + z20"])));
    let mut u = w.universe.clone();
    let field = st.tower.as_ref().unwrap().identifiable_vars();
    let lp = parametrize_linear_component(top[0], &w.z_flat(), &field, &mut u).unwrap();
    let s: Vec<RatFunc> = lp.free.iter().map(|&v| RatFunc::var(v)).collect();
    // (0, z11, -z30, z21, z30, 0)
    assert_eq!(lp.images, vec![RatFunc::zero(), s[0].clone(), s[2].neg(), s[1].clone(), s[2].clone(), RatFunc::zero()]);
}

#[test]
fn bilinear_component() {
    let st = stages(BILINEAR, Some("p2"));
    let w = st.witness.as_ref().unwrap();
    let (_, _, tower) = st.evaluated.as_ref().unwrap();
    let (h, h1, h2) = (u_get(w, "h"), u_get(w, "h1"), u_get(w, "h2"));
    // h = p1 + p3, h1 = p1 p3, h2 = p2 p4
    let defs: Vec<String> = [h, h1, h2].iter().map(|&v| crate::arith::text::ratfunc_to_string(&tower.tower.transcendentals.iter().find(|(x, _)| *x == v).unwrap().1, &crate::arith::text::namer(&w.universe))).collect();
    assert_eq!(defs, vec!["p1 + p3", "p1*p3", "p2*p4"]);
    let top: Vec<&WitnessComponent> = st.components.iter().filter(|c| !c.embedded).collect();
    assert!(same_set(&top[0].ideal.gens, &polys(w, &["z31", "h2*z11 + z21", "h2*z10 - h*z21 - z20"])));
    let mut u = w.universe.clone();
    let lp = parametrize_linear_component(top[0], &w.z_flat(), &tower.identifiable_vars(), &mut u).unwrap();
    let s: Vec<RatFunc> = lp.free.iter().map(|&v| RatFunc::var(v)).collect();
    let hv = |v: usize| RatFunc::var(v);
    let third = hv(h).mul(&hv(h2)).mul(&s[1]).add(&hv(h2).mul(&s[0]));
    let want = vec![s[0].clone(), s[1].clone(), third, hv(h2).mul(&s[1]).neg(), s[2].clone(), RatFunc::zero()];
    assert_eq!(lp.images, want);
}

fn u_get(w: &WitnessData, n: &str) -> usize {
    w.universe.get(n).unwrap()
}

#[test]
fn degree_one_is_vacuous() {
    let m = parse_model("states: x\nparams: a\noutputs: y\nx' = a*x\ny = x\n").unwrap();
    let st = stages(&m.to_text(), None);
    assert!(st.witness.is_none());
    let t = st.tower.unwrap();
    let p = m.build_parametrization(None);
    assert!(matches!(witness_ideal(&p, &t, &GbOptions::default()), Err(Error::DegreeOneExtension)));
}
