//! io-eq -> identifiability -> tower -> evaluation -> witness -> substitution
//! -> verification. Every stage result is kept so a failure still reports
//! what was computed before it.

use super::{apply_substitution, compact, is_polynomial, verify_realization, Provenance, Substitution, Verification};
use crate::arith::text::parse_expr;
use crate::arith::{RatFunc, Rational, Role, VarUniverse};
use crate::error::{Error, Result};
use crate::field::{build_field_tower, express_in_base, suitable_evaluation, Evaluation, EvaluationRequest, TowerOptions, TowerReport};
use crate::groebner::GbOptions;
use crate::io_elim::{identifiable_generators, io_equations, IoSystem};
use crate::model::OdeModel;
use crate::witness::{line_check, parametrize_linear_component, witness_components, witness_ideal, WitnessComponent, WitnessData};
use std::collections::HashMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Any number of states and outputs.
    General,
    /// One state, one output.
    FirstOrder,
    /// One state, one output, polynomial in and out, line components only.
    FirstOrderPolynomial,
}

/// Last stage to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum StopAfter {
    IoEquations,
    Identifiability,
    Witness,
    Reparametrization,
}

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub seed: u64,
    pub gb: GbOptions,
    /// Forced values for transcendental residual parameters, by name.
    pub fixed: Vec<(String, Rational)>,
    /// User parametrization of a witness component: (z name, expression);
    /// identifiers not yet declared become the new states.
    pub component_param: Option<Vec<(String, String)>>,
    pub mode: Mode,
    pub evaluation_attempts: usize,
    pub check_properness: bool,
    pub stop_after: StopAfter,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            seed: 0,
            gb: GbOptions::default(),
            fixed: Vec::new(),
            component_param: None,
            mode: Mode::General,
            evaluation_attempts: 50,
            check_properness: false,
            stop_after: StopAfter::Reparametrization,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Stages {
    pub io: Option<IoSystem>,
    pub generators: Option<Vec<RatFunc>>,
    /// Universe in which generators and tower live.
    pub tower_universe: Option<VarUniverse>,
    pub tower: Option<TowerReport>,
    pub evaluation: Option<Evaluation>,
    /// Model, IO-equations and tower after evaluation (equal to the input ones
    /// when nothing was evaluated).
    pub evaluated: Option<(OdeModel, IoSystem, TowerReport)>,
    pub witness: Option<WitnessData>,
    pub components: Vec<WitnessComponent>,
    pub split_incomplete: bool,
    pub chosen: Option<usize>,
    /// Other qualifying components, not tried once one succeeded.
    pub alternatives: Vec<usize>,
    pub substitution: Option<Substitution>,
    pub verification: Option<Verification>,
    pub result: Option<OdeModel>,
    pub warnings: Vec<String>,
    /// Failing stage and its error.
    pub error: Option<(String, Error)>,
}

impl Stages {
    fn fail<T>(&mut self, stage: &str, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.error = Some((stage.to_string(), e));
                None
            }
        }
    }
}

fn check_mode(model: &OdeModel, mode: Mode) -> Result<()> {
    if mode != Mode::General && (model.dim() != 1 || model.outputs.len() != 1) {
        return Err(Error::Precondition("first-order algorithms need one state and one output".into()));
    }
    if mode == Mode::FirstOrderPolynomial && !super::is_polynomial(model) {
        return Err(Error::Precondition("the input realization must be polynomial".into()));
    }
    Ok(())
}

/// Generators and tower of `model` with IO-equations `io`; the tower
/// variables are added to the returned model's universe.
fn analyse_io(model: &OdeModel, io: &IoSystem, cfg: &PipelineConfig) -> Result<(OdeModel, Vec<RatFunc>, TowerReport)> {
    let gens = identifiable_generators(&io.coefficients(), &model.params, &cfg.gb)?;
    let mut m = model.clone();
    let params = m.params.clone();
    let topts = TowerOptions { seed: cfg.seed, ..Default::default() };
    let tower = build_field_tower(&mut m.universe, &params, &gens, &topts, &cfg.gb)?;
    Ok((m, gens, tower))
}

fn analyse(model: &OdeModel, cfg: &PipelineConfig) -> Result<(OdeModel, IoSystem, Vec<RatFunc>, TowerReport)> {
    let io = io_equations(model, &cfg.gb)?;
    let (m, gens, tower) = analyse_io(model, &io, cfg)?;
    Ok((m, io, gens, tower))
}

/// Parses a user parametrization, creating new states for unknown names.
fn user_substitution(w: &WitnessData, lines: &[(String, String)], d: usize) -> Result<(VarUniverse, Vec<RatFunc>, Vec<usize>)> {
    let mut u = w.universe.clone();
    let mut fresh = Vec::new();
    for (_, expr) in lines {
        for tok in expr.split(|c: char| !(c.is_alphanumeric() || c == '_')) {
            if tok.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_') && u.lookup_display(tok).is_none() {
                fresh.push(u.add(tok, Role::State)?);
            }
        }
    }
    let mut images = Vec::new();
    for &zv in &w.z_flat() {
        let name = u.name(zv).to_string();
        let (_, expr) = lines
            .iter()
            .find(|(n, _)| *n == name)
            .ok_or_else(|| Error::Precondition(format!("component parametrization lacks {name}")))?;
        let uu = u.clone();
        images.push(parse_expr(expr, &move |s| uu.lookup_display(s))?);
    }
    if fresh.len() != d {
        return Err(Error::Precondition(format!("component parametrization has {} free variables, need {d}", fresh.len())));
    }
    Ok((u, images, fresh))
}

/// Runs every stage it can and records the first failure.
pub fn run_stages(model: &OdeModel, cfg: &PipelineConfig) -> Stages {
    let mut st = Stages::default();
    if st.fail("input", check_mode(model, cfg.mode)).is_none() {
        return st;
    }
    let Some(io) = st.fail("io-eq", io_equations(model, &cfg.gb)) else { return st };
    st.io = Some(io.clone());
    if cfg.stop_after == StopAfter::IoEquations {
        return st;
    }
    let Some((m0, gens, tower)) = st.fail("identifiability", analyse_io(model, &io, cfg)) else { return st };
    st.generators = Some(gens);
    st.tower_universe = Some(m0.universe.clone());
    st.tower = Some(tower.clone());
    if cfg.stop_after == StopAfter::Identifiability {
        return st;
    }
    let d = model.dim();

    // evaluation of the transcendental residue
    let (ma, io_a, tower_a) = if !tower.residual.is_empty() || !cfg.fixed.is_empty() {
        let mut fixed = HashMap::new();
        for (name, q) in &cfg.fixed {
            let Some(v) = model.universe.get(name).filter(|v| model.params.contains(v)) else {
                st.error = Some(("evaluation".into(), Error::UndeclaredSymbol(name.clone())));
                return st;
            };
            fixed.insert(v, q.clone());
        }
        let param = m0.build_parametrization(None);
        let req = EvaluationRequest {
            model: &m0,
            param: &param,
            tower: &tower,
            coeffs: &io.coefficients(),
            fixed: &fixed,
            seed: cfg.seed,
            attempts: cfg.evaluation_attempts,
            check_properness: cfg.check_properness,
        };
        let Some(ev) = st.fail("evaluation", suitable_evaluation(&req, &cfg.gb)) else { return st };
        let mut evaluated = ev.model.clone();
        evaluated.universe = model.universe.clone();
        evaluated.params.retain(|p| ev.assignment.iter().all(|(v, _)| v != p));
        st.evaluation = Some(ev);
        let Some((ma, io_a, _, tower_a)) = st.fail("evaluation", analyse(&evaluated, cfg)) else { return st };
        if !tower_a.residual.is_empty() {
            st.error = Some(("evaluation".into(), Error::EvaluationSearchExhausted("residual parameters remain".into())));
            return st;
        }
        (ma, io_a, tower_a)
    } else {
        (m0.clone(), io.clone(), tower.clone())
    };
    st.evaluated = Some((ma.clone(), io_a.clone(), tower_a.clone()));

    // degree one: rewrite the parameters in the generators
    if tower_a.degree == 1 {
        if cfg.stop_after == StopAfter::Witness {
            st.warnings.push("tower has degree one; no witness variety".into());
            return st;
        }
        let mut images = HashMap::new();
        for &c in &ma.params {
            let Some(e) = st.fail("reparam", express_in_base(&RatFunc::var(c), &tower_a)) else { return st };
            if e != RatFunc::var(c) {
                images.insert(c, e);
            }
        }
        if images.is_empty() {
            st.warnings.push("already globally identifiable".into());
        }
        let Some(mut raw) = st.fail("reparam", ma.substitute(&images)) else { return st };
        raw.params = super::used_params(&raw.states, &raw.inputs, &raw.f, &raw.g);
        finish(&mut st, raw, &io_a, &tower_a, false, cfg);
        return st;
    }

    let param = ma.build_parametrization(None);
    if let Some(w) = param.warning() {
        st.warnings.push(w);
    }
    let Some(w) = st.fail("witness", witness_ideal(&param, &tower_a, &cfg.gb)) else { return st };
    let Some((comps, incomplete)) = st.fail("witness", witness_components(&w, &cfg.gb)) else { return st };
    st.witness = Some(w.clone());
    st.components = comps.clone();
    st.split_incomplete = incomplete;
    if incomplete {
        st.warnings.push("component splitting could not certify every branch prime".into());
    }
    if cfg.stop_after == StopAfter::Witness {
        return st;
    }
    let field = tower_a.identifiable_vars();
    let alpha = RatFunc::var(tower_a.alpha_var().expect("degree above one"));
    let n = tower_a.degree;
    let combine = |images: &[RatFunc]| -> Vec<RatFunc> {
        (0..d)
            .map(|i| {
                (0..n).rev().fold(RatFunc::zero(), |acc, j| acc.mul(&alpha).add(&images[i * n + j]))
            })
            .collect()
    };
    let try_sub = |st: &mut Stages, sub: Substitution| -> Option<(OdeModel, Verification)> {
        let mut mm = ma.clone();
        mm.universe = sub.universe.clone();
        match apply_substitution(&mm, &sub, Some(&tower_a)) {
            Ok(raw) => {
                let back: HashMap<usize, RatFunc> = tower_a.tower.transcendentals.iter().cloned().collect();
                let v = match raw.substitute(&back) {
                    Ok(b) => verify_realization(&b, &io_a, &cfg.gb),
                    Err(e) => Verification { vanishes: false, proportional: false, detail: Some(e.to_string()) },
                };
                Some((raw, v))
            }
            Err(e) => {
                st.warnings.push(format!("substitution rejected: {e}"));
                None
            }
        }
    };

    if let Some(lines) = &cfg.component_param {
        let Some((u, images, vars)) = st.fail("reparam", user_substitution(&w, lines, d)) else { return st };
        let at: HashMap<usize, RatFunc> = w.z_flat().into_iter().zip(images.iter().cloned()).collect();
        for g in &w.ideal.gens {
            if !RatFunc::from_poly(g.clone()).subst_map(&at).map(|r| r.is_zero()).unwrap_or(false) {
                st.error = Some(("reparam".into(), Error::Precondition("supplied map does not lie on the witness variety".into())));
                return st;
            }
        }
        let sub = Substitution { universe: u, vars, s: combine(&images), provenance: Provenance::UserSupplied };
        let Some((raw, v)) = try_sub(&mut st, sub.clone()) else {
            st.error = Some(("reparam".into(), Error::SingularSubstitution));
            return st;
        };
        st.substitution = Some(sub);
        st.verification = Some(v.clone());
        if !v.ok() {
            st.error = Some(("verify".into(), Error::NotARealization(v.detail.unwrap_or_default())));
            return st;
        }
        finish(&mut st, raw, &io_a, &tower_a, true, cfg);
        return st;
    }

    let poly_mode = cfg.mode == Mode::FirstOrderPolynomial;
    let qualifying: Vec<usize> = (0..comps.len())
        .filter(|&k| !comps[k].embedded && comps[k].dim >= d as i64 && (!poly_mode || line_check(&comps[k])))
        .collect();
    let mut nonlinear = false;
    for (pos, &k) in qualifying.iter().enumerate() {
        if !comps[k].linear {
            nonlinear = true;
            continue;
        }
        let mut u = w.universe.clone();
        let lp = match parametrize_linear_component(&comps[k], &w.z_flat(), &field, &mut u) {
            Ok(lp) => lp,
            Err(e) => {
                st.warnings.push(format!("component {k}: {e}"));
                continue;
            }
        };
        // surplus free variables are set to zero
        let zero: HashMap<usize, RatFunc> = lp.free.iter().skip(d).map(|&v| (v, RatFunc::zero())).collect();
        let Ok(images) = lp.images.iter().map(|e| e.subst_map(&zero)).collect::<Result<Vec<_>>>() else { continue };
        let sub = Substitution {
            universe: u,
            vars: lp.free[..d].to_vec(),
            s: combine(&images),
            provenance: Provenance::WitnessComponent(k),
        };
        let Some((raw, v)) = try_sub(&mut st, sub.clone()) else { continue };
        if !v.ok() {
            st.warnings.push(format!("component {k}: verification failed: {}", v.detail.clone().unwrap_or_default()));
            continue;
        }
        st.chosen = Some(k);
        st.alternatives = qualifying[pos + 1..].to_vec();
        st.substitution = Some(sub);
        st.verification = Some(v);
        finish(&mut st, raw, &io_a, &tower_a, true, cfg);
        return st;
    }
    let err = if poly_mode {
        Error::NoLine
    } else if nonlinear {
        Error::NonLinearComponent
    } else {
        Error::NoFRealization(format!("no linear witness component of dimension {d} or more"))
    };
    st.error = Some(("reparam".into(), err));
    st
}

fn finish(st: &mut Stages, raw: OdeModel, io: &IoSystem, tower: &TowerReport, rename: bool, cfg: &PipelineConfig) {
    if st.verification.is_none() {
        let back: HashMap<usize, RatFunc> = tower.tower.transcendentals.iter().cloned().collect();
        let v = match raw.substitute(&back) {
            Ok(b) => verify_realization(&b, io, &cfg.gb),
            Err(e) => Verification { vanishes: false, proportional: false, detail: Some(e.to_string()) },
        };
        if !v.ok() {
            st.error = Some(("verify".into(), Error::NotARealization(v.detail.clone().unwrap_or_default())));
            st.verification = Some(v);
            return;
        }
        st.verification = Some(v);
    }
    if cfg.mode == Mode::FirstOrderPolynomial && !is_polynomial(&raw) {
        st.error = Some(("reparam".into(), Error::NoPolynomialRealization("final-polynomiality".into())));
        return;
    }
    let Some(out) = st.fail("reparam", compact(&raw, rename)) else { return };
    st.result = Some(out);
}

fn into_result(st: Stages) -> Result<OdeModel> {
    match (st.result, st.error) {
        (Some(m), None) => Ok(m),
        (_, Some((_, e))) => Err(e),
        (None, None) => Err(Error::NoFRealization("pipeline produced no model".into())),
    }
}

pub fn optimal_realization_general(model: &OdeModel, cfg: &PipelineConfig) -> Result<OdeModel> {
    into_result(run_stages(model, &PipelineConfig { mode: Mode::General, ..cfg.clone() }))
}

pub fn optimal_realization_first_order(model: &OdeModel, cfg: &PipelineConfig) -> Result<OdeModel> {
    into_result(run_stages(model, &PipelineConfig { mode: Mode::FirstOrder, ..cfg.clone() }))
}

pub fn optimal_polynomial_realization_first_order(model: &OdeModel, cfg: &PipelineConfig) -> Result<OdeModel> {
    into_result(run_stages(model, &PipelineConfig { mode: Mode::FirstOrderPolynomial, ..cfg.clone() }))
}
