//! Random evaluation of the transcendental residue keeping the ranks of
//! J(P) and J(h), properness, and the IO-equations.

use super::TowerReport;
use crate::arith::matrix::rank;
use crate::arith::{RatFunc, Rational};
use crate::error::{Error, Result};
use crate::groebner::GbOptions;
use crate::model::{OdeModel, Parametrization};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

pub struct EvaluationRequest<'a> {
    pub model: &'a OdeModel,
    pub param: &'a Parametrization,
    pub tower: &'a TowerReport,
    /// Normalized IO-equation coefficients.
    pub coeffs: &'a [RatFunc],
    /// User-forced values; each key must be a residual parameter.
    pub fixed: &'a HashMap<usize, Rational>,
    pub seed: u64,
    pub attempts: usize,
    pub check_properness: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Evaluation {
    pub assignment: Vec<(usize, Rational)>,
    /// Induced rewrite of surviving parameters, e.g. p4 -> p2*p4.
    pub rewrite: Vec<(usize, RatFunc)>,
    /// The model after assignment and rewrite.
    pub model: OdeModel,
}

fn jac_rank(fs: &[RatFunc], vars: &[usize]) -> usize {
    rank(&fs.iter().map(|f| vars.iter().map(|&v| f.diff(v)).collect()).collect())
}

/// Solves h(sigma(c)) = h(c) for one parameter that h|sigma is linear in.
fn solve_rewrite(h: &RatFunc, e: &RatFunc, free: &[usize]) -> Option<(usize, RatFunc)> {
    for &c in free {
        if e.num().degree_in(c) != 1 || e.den().has_var(c) {
            continue;
        }
        let cs = e.num().coeffs_in(c);
        let (n0, n1) = (RatFunc::from_poly(cs[0].clone()), RatFunc::from_poly(cs[1].clone()));
        let d = RatFunc::from_poly(e.den().clone());
        let val = h.mul(&d).sub(&n0).div(&n1).ok()?;
        return Some((c, val));
    }
    None
}

fn try_assignment(req: &EvaluationRequest, a: &HashMap<usize, Rational>, opts: &GbOptions) -> Result<Option<Evaluation>> {
    let eval = |f: &RatFunc| f.evaluate(a);
    // rank of J(P)
    let comps: Result<Vec<RatFunc>> = req.param.flat().into_iter().map(eval).collect();
    let Ok(comps) = comps else { return Ok(None) };
    let jp = rank(&comps.iter().map(|f| req.param.states.iter().map(|&x| f.diff(x)).collect()).collect());
    if jp != req.param.rank {
        return Ok(None);
    }
    // rank of J(h) with respect to the parameters
    let hs: Vec<RatFunc> = req.tower.generators.iter().map(|(_, f)| f.clone()).collect();
    let Ok(hs_a) = hs.iter().map(eval).collect::<Result<Vec<_>>>() else { return Ok(None) };
    if jac_rank(&hs_a, &req.model.params) != jac_rank(&hs, &req.model.params) {
        return Ok(None);
    }
    // induced rewrite
    let mut sigma: HashMap<usize, RatFunc> = a.iter().map(|(&v, q)| (v, RatFunc::from_rational(q.clone()))).collect();
    let mut rewrite = Vec::new();
    for h in &hs {
        let e = h.subst_map(&sigma)?;
        if e == *h {
            continue;
        }
        let free: Vec<usize> =
            req.model.params.iter().copied().filter(|c| !sigma.contains_key(c) && !req.tower.residual.contains(c)).collect();
        let Some((c, val)) = solve_rewrite(h, &e, &free) else { return Ok(None) };
        sigma.insert(c, val.clone());
        rewrite.push((c, val));
    }
    for h in &hs {
        if h.subst_map(&sigma).ok().as_ref() != Some(h) {
            return Ok(None);
        }
    }
    for k in req.coeffs {
        if k.subst_map(&sigma).ok().as_ref() != Some(k) {
            return Ok(None);
        }
    }
    let Ok(model) = req.model.substitute(&sigma) else { return Ok(None) };
    if req.check_properness {
        let p = model.build_parametrization(Some(&req.param.orders));
        match p.properness_check(opts) {
            Ok(pr) if pr.proper => {}
            Ok(_) | Err(Error::InfiniteFiber) => return Ok(None),
            Err(e) => return Err(e),
        }
    }
    let mut assignment: Vec<(usize, Rational)> = a.iter().map(|(&v, q)| (v, q.clone())).collect();
    assignment.sort_by_key(|x| x.0);
    Ok(Some(Evaluation { assignment, rewrite, model }))
}

/// Assigns small integers to the residual parameters. Forced values are
/// tried once; otherwise draws come from [-10, 10] with a seeded stream.
pub fn suitable_evaluation(req: &EvaluationRequest, opts: &GbOptions) -> Result<Evaluation> {
    let residual = &req.tower.residual;
    for k in req.fixed.keys() {
        if !residual.contains(k) {
            return Err(Error::Precondition(format!("{} is not a transcendental residual parameter", req.model.name(*k))));
        }
    }
    if residual.is_empty() {
        return Ok(Evaluation { assignment: vec![], rewrite: vec![], model: req.model.clone() });
    }
    let free: Vec<usize> = residual.iter().copied().filter(|r| !req.fixed.contains_key(r)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(req.seed);
    let attempts = if free.is_empty() { 1 } else { req.attempts };
    for _ in 0..attempts {
        let mut a = req.fixed.clone();
        for &r in &free {
            a.insert(r, Rational::from_integer(rng.gen_range(-10i64..=10).into()));
        }
        if let Some(e) = try_assignment(req, &a, opts)? {
            return Ok(e);
        }
    }
    let what = if free.is_empty() { "forced assignment fails the rank conditions".to_string() } else { format!("{attempts} draws rejected") };
    Err(Error::EvaluationSearchExhausted(what))
}
