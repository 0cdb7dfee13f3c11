//! Python bindings: models, IO-equations, the reparametrization pipeline and
//! its checks. Reports cross the boundary as dicts decoded from the JSON
//! report, so rationals arrive as "n/d" strings.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyDict;
use reparam::arith::rational::parse_rational;
use reparam::arith::text::{namer, parse_in, ratfunc_to_string};
use reparam::arith::Role;
use reparam::cli::report::model_summary;
use reparam::cli::{parse_model, run_pipeline};
use reparam::groebner::GbOptions;
use reparam::io_elim::{identifiable_generators, io_equations};
use reparam::model::OdeModel;
use reparam::reparam::{
    apply_substitution, compact, optimal_realization_general, polynomial_realization_first_order, verify_realization,
    Mode, PipelineConfig, Provenance, StopAfter, Substitution,
};

create_exception!(reparam_py, ReparamError, PyException);

fn err(e: reparam::Error) -> PyErr {
    ReparamError::new_err(e.to_string())
}

/// A parsed ODE model.
#[pyclass(frozen, skip_from_py_object, module = "reparam_py")]
#[derive(Clone)]
struct Model {
    inner: OdeModel,
}

fn names(m: &OdeModel, vs: &[usize]) -> Vec<String> {
    vs.iter().map(|&v| m.name(v)).collect()
}

#[pymethods]
impl Model {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(Model { inner: parse_model(text).map_err(err)? })
    }

    #[getter]
    fn states(&self) -> Vec<String> {
        names(&self.inner, &self.inner.states)
    }

    #[getter]
    fn params(&self) -> Vec<String> {
        names(&self.inner, &self.inner.params)
    }

    #[getter]
    fn inputs(&self) -> Vec<String> {
        names(&self.inner, &self.inner.inputs)
    }

    #[getter]
    fn outputs(&self) -> Vec<String> {
        names(&self.inner, &self.inner.outputs)
    }

    /// `x' = ...` lines followed by `y = ...` lines.
    fn equations(&self) -> Vec<String> {
        model_summary(&self.inner).equations
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    /// Lie derivative of an expression in the model's symbols.
    fn lie_derivative(&self, expr: &str) -> PyResult<String> {
        let mut m = self.inner.clone();
        let p = parse_in(expr, &m.universe).map_err(err)?;
        let d = m.lie_derivative(&p);
        let text = ratfunc_to_string(&d, &namer(&m.universe));
        Ok(text)
    }

    fn io_equations(&self) -> PyResult<Vec<String>> {
        let io = io_equations(&self.inner, &GbOptions::default()).map_err(err)?;
        Ok((0..io.equations.len()).map(|i| io.show(i)).collect())
    }

    /// Generators of the field of IO-identifiable functions.
    fn identifiable_generators(&self) -> PyResult<Vec<String>> {
        let opts = GbOptions::default();
        let io = io_equations(&self.inner, &opts).map_err(err)?;
        let gens = identifiable_generators(&io.coefficients(), &self.inner.params, &opts).map_err(err)?;
        Ok(gens.iter().map(|g| ratfunc_to_string(g, &namer(&io.universe))).collect())
    }

    /// x = s(z): `new_states` names the z, `images` gives one expression per
    /// current state.
    fn substitute(&self, new_states: Vec<String>, images: Vec<String>) -> PyResult<Model> {
        let mut u = self.inner.universe.clone();
        let mut vars = Vec::new();
        for n in &new_states {
            vars.push(u.add(n, Role::State).map_err(err)?);
        }
        let s = images.iter().map(|e| parse_in(e, &u)).collect::<Result<Vec<_>, _>>().map_err(err)?;
        let sub = Substitution { universe: u, vars, s, provenance: Provenance::UserSupplied };
        let out = apply_substitution(&self.inner, &sub, None).map_err(err)?;
        Ok(Model { inner: compact(&out, false).map_err(err)? })
    }

    fn __repr__(&self) -> String {
        format!("Model({:?})", self.inner.to_text())
    }

    fn __eq__(&self, other: &Model) -> bool {
        self.inner.to_text() == other.inner.to_text()
    }
}

fn config(seed: u64, fix: Option<&Bound<'_, PyDict>>, gb_budget: Option<u64>, mode: &str, stop_after: &str) -> PyResult<PipelineConfig> {
    let mut cfg = PipelineConfig { seed, ..Default::default() };
    if let Some(b) = gb_budget {
        cfg.gb.budget = b;
    }
    if let Some(d) = fix {
        for (k, v) in d.iter() {
            let name: String = k.extract()?;
            let text = v.str()?.to_string();
            let q = parse_rational(&text).ok_or_else(|| ReparamError::new_err(format!("not a rational: {text}")))?;
            cfg.fixed.push((name, q));
        }
    }
    cfg.mode = match mode {
        "general" => Mode::General,
        "first-order" => Mode::FirstOrder,
        "first-order-polynomial" => Mode::FirstOrderPolynomial,
        other => return Err(ReparamError::new_err(format!("unknown mode {other}"))),
    };
    cfg.stop_after = match stop_after {
        "io-eq" => StopAfter::IoEquations,
        "identifiability" => StopAfter::Identifiability,
        "witness" => StopAfter::Witness,
        "reparam" => StopAfter::Reparametrization,
        other => return Err(ReparamError::new_err(format!("unknown stage {other}"))),
    };
    Ok(cfg)
}

/// Full report as a dict; stage failures are reported, not raised.
#[pyfunction]
#[pyo3(signature = (model, seed = 0, fix = None, gb_budget = None, mode = "general", stop_after = "reparam"))]
fn pipeline<'py>(
    py: Python<'py>,
    model: &Model,
    seed: u64,
    fix: Option<&Bound<'py, PyDict>>,
    gb_budget: Option<u64>,
    mode: &str,
    stop_after: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let cfg = config(seed, fix, gb_budget, mode, stop_after)?;
    let report = run_pipeline(&model.inner, &cfg);
    py.import("json")?.call_method1("loads", (report.to_json(),))
}

/// Realization over the identifiable field; raises on failure.
#[pyfunction]
#[pyo3(signature = (model, seed = 0, fix = None))]
fn reparametrize(model: &Model, seed: u64, fix: Option<&Bound<'_, PyDict>>) -> PyResult<Model> {
    let cfg = config(seed, fix, None, "general", "reparam")?;
    Ok(Model { inner: optimal_realization_general(&model.inner, &cfg).map_err(err)? })
}

/// Polynomial realization of a one-state, one-output model.
#[pyfunction]
fn poly_realize(model: &Model) -> PyResult<Model> {
    Ok(Model { inner: polynomial_realization_first_order(&model.inner, &GbOptions::default()).map_err(err)? })
}

/// Whether `candidate` realizes the IO-equations of `reference`.
#[pyfunction]
fn verify(candidate: &Model, reference: &Model) -> PyResult<bool> {
    let opts = GbOptions::default();
    let io = io_equations(&reference.inner, &opts).map_err(err)?;
    Ok(verify_realization(&candidate.inner, &io, &opts).ok())
}

#[pymodule]
fn reparam_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Model>()?;
    m.add_function(wrap_pyfunction!(pipeline, m)?)?;
    m.add_function(wrap_pyfunction!(reparametrize, m)?)?;
    m.add_function(wrap_pyfunction!(poly_realize, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add("ReparamError", m.py().get_type::<ReparamError>())?;
    Ok(())
}
