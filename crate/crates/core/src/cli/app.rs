//! Command-line front end. `execute` returns the text to print and the exit
//! code so the binary stays a thin wrapper.

use super::parse_model;
use super::report::{run_pipeline, Report};
use crate::arith::rational::parse_rational;
use crate::error::Error;
use crate::groebner::GbOptions;
use crate::io_elim::io_equations;
use crate::model::OdeModel;
use crate::reparam::{polynomial_realization_first_order, verify_realization, Mode, PipelineConfig, Stages, StopAfter};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::{Path, PathBuf};
use std::time::Instant;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_STAGE: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "reparam", version, about = "Globally identifiable reparametrization of rational ODE models")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Print the JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Reduction-step limit per Groebner basis.
    #[arg(long, global = true)]
    pub gb_budget: Option<u64>,
    /// File of `zname = expr` lines parametrizing a witness component.
    #[arg(long, global = true)]
    pub component_param: Option<PathBuf>,
    /// Force a residual parameter, e.g. `--fix p2=1`. Repeatable.
    #[arg(long = "fix", global = true, value_name = "PARAM=RAT")]
    pub fix: Vec<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModeArg {
    General,
    FirstOrder,
    FirstOrderPolynomial,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// IO-equations of the model.
    IoEq { model: PathBuf },
    /// IO-equations, identifiable generators and the field tower.
    Identifiability { model: PathBuf },
    /// Everything up to the witness variety and its components.
    Witness { model: PathBuf },
    /// Full pipeline: a realization over the identifiable field.
    Reparam {
        model: PathBuf,
        #[arg(long, value_enum, default_value = "general")]
        mode: ModeArg,
    },
    /// Polynomial realization of a one-state, one-output model.
    PolyRealize { model: PathBuf },
    /// Checks that `candidate` realizes the IO-equations of `reference`.
    Verify { candidate: PathBuf, reference: PathBuf },
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::UndeclaredSymbol(_) | Error::DuplicateEquation(_) | Error::Io(_) => EXIT_PARSE,
        Error::BudgetExhausted(_) => EXIT_BUDGET,
        _ => EXIT_STAGE,
    }
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<OdeModel, Error> {
    parse_model(&read(path)?)
}

/// `name = expr` lines; `#` starts a comment.
pub fn parse_component_param(text: &str) -> Result<Vec<(String, String)>, Error> {
    let mut out = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let l = line.split('#').next().unwrap_or("").trim();
        if l.is_empty() {
            continue;
        }
        let (a, b) = l.split_once('=').ok_or_else(|| Error::Parse { line: k + 1, col: 1, msg: "expected `name = expr`".into() })?;
        out.push((a.trim().to_string(), b.trim().to_string()));
    }
    Ok(out)
}

fn parse_fix(s: &str) -> Result<(String, crate::arith::Rational), Error> {
    let bad = || Error::Parse { line: 0, col: 0, msg: format!("--fix expects PARAM=RATIONAL, got `{s}`") };
    let (p, q) = s.split_once('=').ok_or_else(bad)?;
    Ok((p.trim().to_string(), parse_rational(q).ok_or_else(bad)?))
}

fn config(g: &GlobalOpts) -> Result<PipelineConfig, Error> {
    let mut cfg = PipelineConfig { seed: g.seed, ..Default::default() };
    if let Some(b) = g.gb_budget {
        cfg.gb = GbOptions { budget: b, ..cfg.gb };
    }
    cfg.fixed = g.fix.iter().map(|s| parse_fix(s)).collect::<Result<_, _>>()?;
    if let Some(p) = &g.component_param {
        cfg.component_param = Some(parse_component_param(&read(p)?)?);
    }
    Ok(cfg)
}

fn render(r: &Report, json: bool) -> (String, i32) {
    let code = r.error_kind.as_ref().map(exit_code).unwrap_or(EXIT_OK);
    (if json { r.to_json() } else { r.to_string() }, code)
}

fn poly_realize(model: &OdeModel, cfg: &PipelineConfig) -> Report {
    let start = Instant::now();
    let mut st = Stages::default();
    match io_equations(model, &cfg.gb) {
        Ok(io) => {
            match polynomial_realization_first_order(model, &cfg.gb) {
                Ok(m) => {
                    let v = verify_realization(&m, &io, &cfg.gb);
                    if !v.ok() {
                        st.error = Some(("verify".into(), Error::NotARealization(v.detail.clone().unwrap_or_default())));
                    }
                    st.verification = Some(v);
                    st.result = Some(m);
                }
                Err(e) => st.error = Some(("poly-realize".into(), e)),
            }
            st.io = Some(io);
        }
        Err(e) => st.error = Some(("io-eq".into(), e)),
    }
    Report::from_stages(model, &st, cfg.seed, start.elapsed().as_millis())
}

fn verify(candidate: &OdeModel, reference: &OdeModel, cfg: &PipelineConfig) -> Report {
    let start = Instant::now();
    let mut st = Stages::default();
    match io_equations(reference, &cfg.gb) {
        Ok(io) => {
            let v = verify_realization(candidate, &io, &cfg.gb);
            if !v.ok() {
                st.error = Some(("verify".into(), Error::NotARealization(v.detail.clone().unwrap_or_default())));
            }
            st.verification = Some(v);
            st.io = Some(io);
        }
        Err(e) => st.error = Some(("io-eq".into(), e)),
    }
    Report::from_stages(candidate, &st, cfg.seed, start.elapsed().as_millis())
}

/// Output text and exit code for a parsed command line.
pub fn execute(cli: &Cli) -> (String, i32) {
    let fail = |e: Error| (format!("error: {e}\n"), exit_code(&e));
    let mut cfg = match config(&cli.global) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    let path = match &cli.command {
        Command::IoEq { model }
        | Command::Identifiability { model }
        | Command::Witness { model }
        | Command::Reparam { model, .. }
        | Command::PolyRealize { model } => model,
        Command::Verify { candidate, .. } => candidate,
    };
    let model = match load(path) {
        Ok(m) => m,
        Err(e) => return fail(e),
    };
    let report = match &cli.command {
        Command::IoEq { .. } => run_pipeline(&model, &PipelineConfig { stop_after: StopAfter::IoEquations, ..cfg }),
        Command::Identifiability { .. } => run_pipeline(&model, &PipelineConfig { stop_after: StopAfter::Identifiability, ..cfg }),
        Command::Witness { .. } => run_pipeline(&model, &PipelineConfig { stop_after: StopAfter::Witness, ..cfg }),
        Command::Reparam { mode, .. } => {
            cfg.mode = match mode {
                ModeArg::General => Mode::General,
                ModeArg::FirstOrder => Mode::FirstOrder,
                ModeArg::FirstOrderPolynomial => Mode::FirstOrderPolynomial,
            };
            run_pipeline(&model, &cfg)
        }
        Command::PolyRealize { .. } => poly_realize(&model, &cfg),
        Command::Verify { reference, .. } => match load(reference) {
            Ok(r) => verify(&model, &r, &cfg),
            Err(e) => return fail(e),
        },
    };
    render(&report, cli.global.json)
}
