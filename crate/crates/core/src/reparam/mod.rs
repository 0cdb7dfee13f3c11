//! State-space substitutions z' = J(s)^-1 f(s), y = g(s), the first-order
//! polynomial realization, and the identifiable-parameter pipeline.

mod first_order;
mod pipeline;

pub use first_order::{denominator_shape, polynomial_realization_first_order, Shape};
pub use pipeline::{
    optimal_polynomial_realization_first_order, optimal_realization_first_order, optimal_realization_general, run_stages,
    Mode, PipelineConfig, Stages, StopAfter,
};

use crate::arith::matrix::{det, solve, Matrix};
use crate::arith::{MPoly, RatFunc, Role, VarUniverse};
use crate::error::{Error, Result};
use crate::field::TowerReport;
use crate::groebner::GbOptions;
use crate::io_elim::{io_equations, IoSystem};
use crate::model::OdeModel;
use serde::Serialize;
use std::collections::{BTreeSet, HashMap};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Provenance {
    /// Index into the sorted witness components.
    WitnessComponent(usize),
    UserSupplied,
    /// s = (1 + b z)/z for a denominator a (x - b)^m.
    FirstOrderMoebius { a: String, b: String, m: u32 },
}

/// x = s(z). The universe holds the model variables and the new states.
#[derive(Clone, Debug, PartialEq)]
pub struct Substitution {
    pub universe: VarUniverse,
    pub vars: Vec<usize>,
    /// One entry per model state; may mention the tower generator alpha.
    pub s: Vec<RatFunc>,
    pub provenance: Provenance,
}

impl Substitution {
    pub fn jacobian(&self) -> Matrix {
        self.s.iter().map(|si| self.vars.iter().map(|&z| si.diff(z)).collect()).collect()
    }
}

/// Variables of f and g other than states and inputs, by index.
fn used_params(states: &[usize], inputs: &[usize], f: &[RatFunc], g: &[RatFunc]) -> Vec<usize> {
    let mut set = BTreeSet::new();
    for e in f.iter().chain(g) {
        for v in e.vars() {
            if !states.contains(&v) && !inputs.contains(&v) {
                set.insert(v);
            }
        }
    }
    set.into_iter().collect()
}

/// Rewrites the model through x = s(z). With a tower every result is mapped
/// into Q(h)(alpha) and must have alpha-degree 0.
pub fn apply_substitution(model: &OdeModel, sub: &Substitution, tower: Option<&TowerReport>) -> Result<OdeModel> {
    if sub.s.len() != model.dim() || sub.vars.len() != model.dim() {
        return Err(Error::Precondition("substitution needs one expression and one new state per state".into()));
    }
    let jac = sub.jacobian();
    if det(&jac).is_zero() {
        return Err(Error::SingularSubstitution);
    }
    let at: HashMap<usize, RatFunc> = model.states.iter().copied().zip(sub.s.iter().cloned()).collect();
    let fs = model.f.iter().map(|e| e.subst_map(&at)).collect::<Result<Vec<_>>>()?;
    let gs = model.g.iter().map(|e| e.subst_map(&at)).collect::<Result<Vec<_>>>()?;
    let zdot = solve(&jac, &fs)?;
    let alpha = tower.and_then(|t| t.alpha_var());
    let base = |r: RatFunc| -> Result<RatFunc> {
        let Some(t) = tower else { return Ok(r) };
        let e = t.tower.element(&r, &|v| (Some(v) == alpha).then(|| vec![RatFunc::zero(), RatFunc::one()]))?;
        match e.len() {
            0 => Ok(RatFunc::zero()),
            1 => Ok(e[0].clone()),
            k => Err(Error::CoefficientsOutsideField(format!("right-hand side of alpha-degree {}", k - 1))),
        }
    };
    let f = zdot.into_iter().map(base).collect::<Result<Vec<_>>>()?;
    let g = gs.into_iter().map(base).collect::<Result<Vec<_>>>()?;
    let params = used_params(&sub.vars, &model.inputs, &f, &g);
    OdeModel::new(sub.universe.clone(), sub.vars.clone(), params, model.inputs.clone(), model.outputs.clone(), f, g)
}

/// Copies the model into a fresh universe holding only its own variables.
/// With `rename` the states become z (one state) or z1..zd.
pub fn compact(model: &OdeModel, rename: bool) -> Result<OdeModel> {
    let old = &model.universe;
    let others: Vec<String> =
        model.params.iter().chain(&model.inputs).chain(&model.outputs).map(|&v| old.name(v).to_string()).collect();
    let mut u = VarUniverse::new();
    let mut map: HashMap<usize, usize> = HashMap::new();
    let d = model.dim();
    for (k, &x) in model.states.iter().enumerate() {
        let want = match (rename, d) {
            (false, _) => old.name(x).to_string(),
            (true, 1) => "z".to_string(),
            (true, _) => format!("z{}", k + 1),
        };
        let mut name = want.clone();
        let mut n = 1;
        while others.contains(&name) || u.get(&name).is_some() {
            name = format!("{want}_{n}");
            n += 1;
        }
        map.insert(x, u.add(&name, Role::State)?);
    }
    for &v in &model.params {
        map.insert(v, u.add(old.name(v), Role::Parameter)?);
    }
    for &v in &model.inputs {
        map.insert(v, u.add(old.name(v), Role::Input(0))?);
    }
    for &v in &model.outputs {
        map.insert(v, u.add(old.name(v), Role::Output(0))?);
    }
    let re = |e: &RatFunc| -> Result<RatFunc> {
        if let Some(v) = e.vars().into_iter().find(|v| !map.contains_key(v)) {
            return Err(Error::Precondition(format!("{} is not declared in the model", old.display(v))));
        }
        Ok(e.remap(&|v| map[&v]))
    };
    let f = model.f.iter().map(re).collect::<Result<Vec<_>>>()?;
    let g = model.g.iter().map(re).collect::<Result<Vec<_>>>()?;
    let ids = |vs: &[usize]| vs.iter().map(|v| map[v]).collect::<Vec<_>>();
    OdeModel::new(u.clone(), ids(&model.states), ids(&model.params), ids(&model.inputs), ids(&model.outputs), f, g)
}

/// Moves `p` from one universe to another by names, creating signal
/// derivatives in the target as needed.
pub fn transfer(p: &MPoly, from: &VarUniverse, to: &mut VarUniverse) -> Result<RatFunc> {
    let mut map = HashMap::new();
    for v in p.vars() {
        let w = match from.signal_of(v) {
            Some((b, k)) => {
                let base = to.get(from.name(b)).ok_or_else(|| Error::UndeclaredSymbol(from.display(b)))?;
                if k == 0 {
                    base
                } else {
                    to.derivative(base, k)
                }
            }
            None => to.get(from.name(v)).ok_or_else(|| Error::UndeclaredSymbol(from.display(v)))?,
        };
        map.insert(v, w);
    }
    Ok(RatFunc::from_poly(p.clone()).remap(&|v| map[&v]))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verification {
    /// Each IO-equation vanishes on the candidate's Lie derivatives.
    pub vanishes: bool,
    /// The candidate's own IO-equations are proportional to the given ones.
    pub proportional: bool,
    pub detail: Option<String>,
}

impl Verification {
    pub fn ok(&self) -> bool {
        self.vanishes && self.proportional
    }
}

/// Checks that `eqs` are IO-equations of `candidate`.
pub fn verify_realization(candidate: &OdeModel, eqs: &IoSystem, opts: &GbOptions) -> Verification {
    let fail = |vanishes: bool, msg: String| Verification { vanishes, proportional: false, detail: Some(msg) };
    let mut cand = candidate.clone();
    let mut moved = Vec::new();
    for e in &eqs.equations {
        match transfer(&e.poly, &eqs.universe, &mut cand.universe) {
            Ok(p) => moved.push(p),
            Err(err) => return fail(false, err.to_string()),
        }
    }
    let mut orders = vec![0; cand.outputs.len()];
    for e in &eqs.equations {
        if e.output_index >= orders.len() {
            return fail(false, format!("no output {}", e.output_index));
        }
        orders[e.output_index] = orders[e.output_index].max(e.order);
    }
    let par = cand.build_parametrization(Some(&orders));
    let mut at: HashMap<usize, RatFunc> = HashMap::new();
    let mut pu = par.universe.clone();
    for (i, row) in par.components.iter().enumerate() {
        for (j, pj) in row.iter().enumerate() {
            let y = cand.outputs[i];
            let v = if j == 0 { y } else { pu.derivative(y, j as u32) };
            at.insert(v, pj.clone());
        }
    }
    for (k, p) in moved.iter().enumerate() {
        match p.subst_map(&at) {
            Ok(r) if r.is_zero() => {}
            Ok(r) => return fail(false, format!("equation {k} leaves residual {}", candidate.show(&r))),
            Err(e) => return fail(false, e.to_string()),
        }
    }
    let own = match io_equations(&cand, opts) {
        Ok(s) => s,
        Err(e) => return fail(true, format!("recomputing IO-equations: {e}")),
    };
    for e in &eqs.equations {
        let Some(o) = own.equations.iter().find(|o| o.output_index == e.output_index) else {
            return fail(true, format!("no IO-equation for output {}", e.output_index));
        };
        let mut ou = own.universe.clone();
        let Ok(p) = transfer(&e.poly, &eqs.universe, &mut ou) else {
            return fail(true, "symbol mismatch".into());
        };
        let ratio = match p.div(&RatFunc::from_poly(o.poly.clone())) {
            Ok(r) => r,
            Err(err) => return fail(true, err.to_string()),
        };
        if ratio.is_zero() || ratio.vars().iter().any(|&v| matches!(ou.role(v), Role::Input(_) | Role::Output(_))) {
            return fail(true, format!("IO-equation for output {} is not proportional", e.output_index));
        }
    }
    Verification { vanishes: true, proportional: true, detail: None }
}

/// True when no denominator mentions a state or an input.
pub fn is_polynomial(model: &OdeModel) -> bool {
    model.f.iter().chain(&model.g).all(|e| {
        e.den().vars().iter().all(|&v| !model.states.contains(&v) && !matches!(model.universe.role(v), Role::Input(_)))
    })
}

#[cfg(test)]
mod tests;
