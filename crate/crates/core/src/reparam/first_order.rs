//! Polynomial realizations of first-order models through s = (1 + b z)/z.

use super::{apply_substitution, compact, is_polynomial, Provenance, Substitution};
use crate::arith::gcd::lcm;
use crate::arith::{MPoly, RatFunc, Rational, Role};
use crate::error::{Error, Result};
use crate::groebner::GbOptions;
use crate::model::OdeModel;

/// Common denominator a (x - b)^m; m = 0 when it is free of x.
#[derive(Clone, Debug, PartialEq)]
pub struct Shape {
    pub a: RatFunc,
    pub b: RatFunc,
    pub m: u32,
}

pub fn denominator_shape(fns: &[RatFunc], x: usize) -> Option<Shape> {
    let q = fns.iter().fold(MPoly::one(), |acc, f| lcm(&acc, f.den()));
    let m = q.degree_in(x);
    if m == 0 {
        return Some(Shape { a: RatFunc::from_poly(q), b: RatFunc::zero(), m: 0 });
    }
    let cs = q.coeffs_in(x);
    let a = RatFunc::from_poly(cs[m as usize].clone());
    // (x - b)^m has x^(m-1) coefficient -m b
    let b = RatFunc::from_poly(cs[m as usize - 1].clone()).div(&a.scale(&Rational::from_integer((-(m as i64)).into()))).ok()?;
    let xb = RatFunc::var(x).sub(&b);
    (a.mul(&xb.pow(m as i32).ok()?) == RatFunc::from_poly(q)).then_some(Shape { a, b, m })
}

/// Polynomial realization of an observable one-state model: reads the
/// denominator shape a*(x - b)^m, then substitutes x = b + 1/z.
pub fn polynomial_realization_first_order(model: &OdeModel, opts: &GbOptions) -> Result<OdeModel> {
    if model.dim() != 1 || model.outputs.len() != 1 {
        return Err(Error::Precondition("one state and one output required".into()));
    }
    let x = model.states[0];
    let exprs: Vec<RatFunc> = model.f.iter().chain(&model.g).cloned().collect();
    let is_input = |v: usize| matches!(model.universe.role(v), Role::Input(_));
    if exprs.iter().any(|e| e.den().vars().into_iter().any(is_input)) {
        return Err(Error::NoPolynomialRealization("u-in-denominator".into()));
    }
    let shape = denominator_shape(&exprs, x).ok_or_else(|| Error::NoPolynomialRealization("shape".into()))?;
    if shape.m == 0 {
        return Ok(model.clone());
    }
    let max_num = exprs.iter().map(|e| e.num().degree_in(x)).max().unwrap_or(0);
    if shape.m < max_num {
        return Err(Error::NoPolynomialRealization("shape".into()));
    }
    let mut u = model.universe.clone();
    let z = u.fresh("z", Role::State);
    let zr = RatFunc::var(z);
    let s = RatFunc::one().add(&shape.b.mul(&zr)).div(&zr)?;
    let show = |r: &RatFunc| model.show(r);
    let provenance = Provenance::FirstOrderMoebius { a: show(&shape.a), b: show(&shape.b), m: shape.m };
    let sub = Substitution { universe: u, vars: vec![z], s: vec![s], provenance };
    let out = apply_substitution(model, &sub, None)?;
    if !is_polynomial(&out) {
        return Err(Error::NoPolynomialRealization("final-polynomiality".into()));
    }
    let proper = out.build_parametrization(None).properness_check(opts);
    if !matches!(proper, Ok(p) if p.proper) {
        return Err(Error::NoPolynomialRealization("observability".into()));
    }
    compact(&out, true)
}
