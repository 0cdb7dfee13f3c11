//! Serializable summary of a pipeline run. Polynomials appear as canonical
//! text in the universe they were computed in; rationals as "n/d" strings.

use crate::arith::rational::rat_to_json;
use crate::arith::text::{namer, poly_to_string, ratfunc_to_string};
use crate::arith::tower::from_upoly;
use crate::arith::{MPoly, RatFunc, VarUniverse};
use crate::error::Error;
use crate::field::TowerReport;
use crate::model::OdeModel;
use crate::reparam::{run_stages, PipelineConfig, Provenance, Stages, Verification};
use serde::Serialize;
use std::fmt;
use std::time::Instant;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NamedExpr {
    pub name: String,
    pub expr: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TowerSummary {
    /// Identifiable generators with their definitions in the parameters.
    pub generators: Vec<NamedExpr>,
    /// Parameters adjoined as transcendentals.
    pub residual: Vec<String>,
    pub alpha: Option<NamedExpr>,
    /// Monic, in alpha with coefficients in the generator names.
    pub min_poly: Option<String>,
    pub degree: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvaluationSummary {
    /// (parameter, value) with the value as "n/d".
    pub assignment: Vec<NamedExpr>,
    pub rewrite: Vec<NamedExpr>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComponentSummary {
    pub generators: Vec<String>,
    pub dim: i64,
    pub linear: bool,
    pub embedded: bool,
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessSummary {
    pub variables: Vec<String>,
    pub h: Vec<String>,
    pub delta: String,
    pub ideal: Vec<String>,
    pub components: Vec<ComponentSummary>,
    pub split_incomplete: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubstitutionSummary {
    pub new_states: Vec<String>,
    /// x_i = s_i(z), possibly involving alpha.
    pub images: Vec<NamedExpr>,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModelSummary {
    pub states: Vec<String>,
    pub params: Vec<String>,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    /// `x' = ...` then `y = ...`, in declaration order.
    pub equations: Vec<String>,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StageError {
    pub stage: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Timings {
    pub total_ms: u128,
}

/// Invariant: `reparametrized_model` is set only when `verification` passed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub seed: u64,
    pub input: ModelSummary,
    pub io_equations: Vec<String>,
    pub identifiable_generators: Vec<String>,
    pub tower: Option<TowerSummary>,
    pub evaluation: Option<EvaluationSummary>,
    /// Tower of the evaluated model; absent when nothing was evaluated.
    pub evaluated_tower: Option<TowerSummary>,
    pub witness: Option<WitnessSummary>,
    pub chosen_component: Option<usize>,
    pub alternative_components: Vec<usize>,
    pub substitution: Option<SubstitutionSummary>,
    pub verification: Option<Verification>,
    pub reparametrized_model: Option<ModelSummary>,
    pub warnings: Vec<String>,
    pub error: Option<StageError>,
    pub timings: Timings,
    #[serde(skip)]
    pub error_kind: Option<Error>,
}

fn show(r: &RatFunc, u: &VarUniverse) -> String {
    ratfunc_to_string(r, &namer(u))
}

fn showp(p: &MPoly, u: &VarUniverse) -> String {
    poly_to_string(p, &namer(u))
}

pub fn model_summary(m: &OdeModel) -> ModelSummary {
    let names = |vs: &[usize]| vs.iter().map(|&v| m.name(v)).collect::<Vec<_>>();
    let mut equations: Vec<String> = m.states.iter().zip(&m.f).map(|(&x, e)| format!("{}' = {}", m.name(x), m.show(e))).collect();
    equations.extend(m.outputs.iter().zip(&m.g).map(|(&y, e)| format!("{} = {}", m.name(y), m.show(e))));
    ModelSummary {
        states: names(&m.states),
        params: names(&m.params),
        inputs: names(&m.inputs),
        outputs: names(&m.outputs),
        equations,
        text: m.to_text(),
    }
}

pub fn tower_summary(t: &TowerReport, u: &VarUniverse) -> TowerSummary {
    let named = |v: usize, e: &RatFunc| NamedExpr { name: u.name(v).to_string(), expr: show(e, u) };
    let alpha = match (t.alpha_var(), &t.alpha_def) {
        (Some(a), Some(d)) => Some(named(a, d)),
        _ => None,
    };
    let min_poly = t.tower.alpha.as_ref().map(|a| show(&from_upoly(&a.min_poly, a.var), u));
    TowerSummary {
        generators: t.tower.transcendentals.iter().map(|(v, e)| named(*v, e)).collect(),
        residual: t.residual.iter().map(|&v| u.name(v).to_string()).collect(),
        alpha,
        min_poly,
        degree: t.degree,
    }
}

impl Report {
    pub fn from_stages(model: &OdeModel, st: &Stages, seed: u64, elapsed_ms: u128) -> Report {
        let io_equations = st.io.as_ref().map(|io| (0..io.equations.len()).map(|i| io.show(i)).collect()).unwrap_or_default();
        let tu = st.tower_universe.as_ref().unwrap_or(&model.universe);
        let identifiable_generators =
            st.generators.as_ref().map(|g| g.iter().map(|e| show(e, tu)).collect()).unwrap_or_default();
        let tower = st.tower.as_ref().map(|t| tower_summary(t, tu));
        let evaluation = st.evaluation.as_ref().map(|ev| EvaluationSummary {
            assignment: ev.assignment.iter().map(|(v, q)| NamedExpr { name: model.name(*v), expr: rat_to_json(q) }).collect(),
            rewrite: ev.rewrite.iter().map(|(v, e)| NamedExpr { name: model.name(*v), expr: model.show(e) }).collect(),
        });
        let evaluated_tower = match (&st.evaluation, &st.evaluated) {
            (Some(_), Some((m, _, t))) => Some(tower_summary(t, &m.universe)),
            _ => None,
        };
        let witness = st.witness.as_ref().map(|w| {
            let u = &w.universe;
            WitnessSummary {
                variables: w.z_flat().iter().map(|&v| u.name(v).to_string()).collect(),
                h: w.h_polys.iter().map(|p| showp(p, u)).collect(),
                delta: showp(&w.delta, u),
                ideal: w.ideal.gens.iter().map(|p| showp(p, u)).collect(),
                components: st
                    .components
                    .iter()
                    .map(|c| ComponentSummary {
                        generators: c.ideal.gens.iter().map(|p| showp(p, u)).collect(),
                        dim: c.dim,
                        linear: c.linear,
                        embedded: c.embedded,
                        certified: c.certified,
                    })
                    .collect(),
                split_incomplete: st.split_incomplete,
            }
        });
        let substitution = st.substitution.as_ref().map(|s| {
            let base = st.evaluated.as_ref().map(|(m, _, _)| m.states.clone()).unwrap_or_else(|| model.states.clone());
            SubstitutionSummary {
                new_states: s.vars.iter().map(|&v| s.universe.name(v).to_string()).collect(),
                images: base
                    .iter()
                    .zip(&s.s)
                    .map(|(&x, e)| NamedExpr { name: s.universe.name(x).to_string(), expr: show(e, &s.universe) })
                    .collect(),
                provenance: s.provenance.clone(),
            }
        });
        let verified = st.verification.as_ref().is_some_and(|v| v.ok());
        Report {
            seed,
            input: model_summary(model),
            io_equations,
            identifiable_generators,
            tower,
            evaluation,
            evaluated_tower,
            witness,
            chosen_component: st.chosen,
            alternative_components: st.alternatives.clone(),
            substitution,
            verification: st.verification.clone(),
            reparametrized_model: st.result.as_ref().filter(|_| verified).map(model_summary),
            warnings: st.warnings.clone(),
            error: st.error.as_ref().map(|(s, e)| StageError { stage: s.clone(), message: e.to_string() }),
            timings: Timings { total_ms: elapsed_ms },
            error_kind: st.error.as_ref().map(|(_, e)| e.clone()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Runs the pipeline and summarizes every stage it reached.
pub fn run_pipeline(model: &OdeModel, cfg: &PipelineConfig) -> Report {
    let start = Instant::now();
    let st = run_stages(model, cfg);
    Report::from_stages(model, &st, cfg.seed, start.elapsed().as_millis())
}

fn section(f: &mut fmt::Formatter<'_>, title: &str, lines: &[String]) -> fmt::Result {
    if lines.is_empty() {
        return Ok(());
    }
    writeln!(f, "{title}:")?;
    for l in lines {
        writeln!(f, "  {l}")?;
    }
    Ok(())
}

fn tower_lines(t: &TowerSummary) -> Vec<String> {
    let mut out: Vec<String> = t.generators.iter().map(|g| format!("{} = {}", g.name, g.expr)).collect();
    if !t.residual.is_empty() {
        out.push(format!("transcendental residue: {}", t.residual.join(", ")));
    }
    if let (Some(a), Some(mp)) = (&t.alpha, &t.min_poly) {
        out.push(format!("{} = {}, minimal polynomial {} (degree {})", a.name, a.expr, mp, t.degree));
    } else {
        out.push("degree 1".into());
    }
    out
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        section(f, "IO-equations", &self.io_equations)?;
        section(f, "identifiable generators", &self.identifiable_generators)?;
        if let Some(t) = &self.tower {
            section(f, "field tower", &tower_lines(t))?;
        }
        if let Some(e) = &self.evaluation {
            let mut lines: Vec<String> = e.assignment.iter().map(|a| format!("{} := {}", a.name, a.expr)).collect();
            lines.extend(e.rewrite.iter().map(|r| format!("{} -> {}", r.name, r.expr)));
            section(f, "evaluation", &lines)?;
        }
        if let Some(t) = &self.evaluated_tower {
            section(f, "field tower after evaluation", &tower_lines(t))?;
        }
        if let Some(w) = &self.witness {
            section(f, &format!("witness polynomials in {}", w.variables.join(", ")), &w.h)?;
            if w.delta != "1" {
                writeln!(f, "saturated by: {}", w.delta)?;
            }
            let lines: Vec<String> = w
                .components
                .iter()
                .enumerate()
                .map(|(k, c)| {
                    let mut tags = vec![format!("dim {}", c.dim)];
                    if c.linear {
                        tags.push("linear".into());
                    }
                    if c.embedded {
                        tags.push("embedded".into());
                    }
                    if !c.certified {
                        tags.push("uncertified".into());
                    }
                    let mark = if Some(k) == self.chosen_component { "*" } else { " " };
                    format!("{mark}W{} = V({}) [{}]", k + 1, c.generators.join(", "), tags.join(", "))
                })
                .collect();
            section(f, "components", &lines)?;
        }
        if let Some(s) = &self.substitution {
            let lines: Vec<String> = s.images.iter().map(|i| format!("{} = {}", i.name, i.expr)).collect();
            section(f, "substitution", &lines)?;
        }
        if let Some(v) = &self.verification {
            writeln!(f, "verification: equations vanish {}, proportional {}", v.vanishes, v.proportional)?;
        }
        if let Some(m) = &self.reparametrized_model {
            writeln!(f, "reparametrized model:")?;
            for l in m.text.lines() {
                writeln!(f, "  {l}")?;
            }
        }
        section(f, "warnings", &self.warnings)?;
        if let Some(e) = &self.error {
            writeln!(f, "error in stage {}: {}", e.stage, e.message)?;
        }
        Ok(())
    }
}
