//! Python bindings: formulas, traces, the debugging pipeline, the
//! satisfiability engine and signal-vacuity checks.
//!
//! Time values cross the boundary as strings (`"27.5"`, `"1/2"`) so the
//! exact rational arithmetic is preserved; report-shaped results come back
//! as plain dicts and lists.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyBool, PyDict, PyList, PyString};
use pyo3::IntoPyObjectExt;
use serde_json::Value;

use tempolint::debugger::{debug_pipeline, DebugConfig};
use tempolint::monitor::{
    antecedent_failure_check, classify_rr, evaluate as monitor_evaluate, falsification_localize,
    literal_removal_check, TimedTrace,
};
use tempolint::predicate::table_for_formula;
use tempolint::rational::{format_rational, parse_rational};
use tempolint::report::{debug_report_json, signal_finding_json};
use tempolint::sat::{check_sat, entails as sat_entails, export_dimacs, GridConfig, SatStatus};
use tempolint::tracegen::{generate_synthetic_traces, TraceProfile};
use tempolint::{
    annotate_effective_intervals, lit_occurrences, parse as parse_formula, substitute_occurrence,
    to_nnf, Formula as CoreFormula, Polarity, Replacement,
};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn json_to_py<'py>(py: Python<'py>, value: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match value {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => PyBool::new(py, *b).to_owned().into_any(),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                i.into_bound_py_any(py)?
            } else if let Some(u) = n.as_u64() {
                u.into_bound_py_any(py)?
            } else {
                n.as_f64().unwrap_or(f64::NAN).into_bound_py_any(py)?
            }
        }
        Value::String(s) => PyString::new(py, s).into_any(),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(json_to_py(py, item)?)?;
            }
            list.into_any()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, v) in map {
                dict.set_item(k, json_to_py(py, v)?)?;
            }
            dict.into_any()
        }
    })
}

fn grid_config(step: &str, horizon_cap: Option<&str>, refine_check: bool) -> PyResult<GridConfig> {
    Ok(GridConfig {
        step: parse_rational(step).map_err(value_err)?,
        horizon_cap: horizon_cap
            .map(parse_rational)
            .transpose()
            .map_err(value_err)?,
        refine_check,
    })
}

/// A requirement formula.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct Formula {
    inner: CoreFormula,
}

#[pymethods]
impl Formula {
    /// Parses a specification string.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Formula> {
        Ok(Formula {
            inner: parse_formula(text).map_err(value_err)?,
        })
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Formula({})", self.inner)
    }

    fn __eq__(&self, other: &Formula) -> bool {
        self.inner == other.inner
    }

    fn to_nnf(&self) -> Formula {
        Formula {
            inner: to_nnf(&self.inner),
        }
    }

    fn negate(&self) -> Formula {
        Formula {
            inner: tempolint::negate(&self.inner),
        }
    }

    /// Maximum look-ahead of the formula, as an exact rational string.
    fn horizon(&self) -> String {
        format_rational(&self.inner.horizon())
    }

    fn is_request_response(&self) -> bool {
        classify_rr(&self.inner)
    }

    /// Literal occurrences as (path, polarity, atom) triples, in parse-tree
    /// order. Requires negation normal form.
    fn lit_occurrences(&self) -> PyResult<Vec<(Vec<usize>, String, String)>> {
        let occs = lit_occurrences(&self.inner).map_err(value_err)?;
        Ok(occs
            .into_iter()
            .map(|o| {
                let polarity = match o.polarity {
                    Polarity::Positive => "positive",
                    Polarity::Negative => "negative",
                };
                (o.path, polarity.to_string(), o.atom.name())
            })
            .collect())
    }

    /// Replaces the literal occurrence at `path` with true or false.
    fn substitute(&self, path: Vec<usize>, value: bool) -> PyResult<Formula> {
        let occs = lit_occurrences(&self.inner).map_err(value_err)?;
        let occurrence = occs
            .into_iter()
            .find(|o| o.path == path)
            .ok_or_else(|| value_err("no literal occurrence at that path"))?;
        let replacement = if value {
            Replacement::Top
        } else {
            Replacement::Bottom
        };
        Ok(Formula {
            inner: substitute_occurrence(&self.inner, &occurrence, replacement)
                .map_err(value_err)?,
        })
    }

    /// Effective interval of every node, as {path tuple: interval string}.
    fn effective_intervals<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let ei = annotate_effective_intervals(&self.inner);
        let dict = PyDict::new(py);
        for (path, interval) in ei.iter() {
            let key = pyo3::types::PyTuple::new(py, path.iter())?;
            dict.set_item(key, interval.to_string())?;
        }
        Ok(dict)
    }
}

/// A finite piecewise-constant timed trace.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct Trace {
    inner: TimedTrace,
}

#[pymethods]
impl Trace {
    /// Parses the CSV trace format.
    #[staticmethod]
    #[pyo3(signature = (text, id="trace", duration=None))]
    fn from_csv(text: &str, id: &str, duration: Option<&str>) -> PyResult<Trace> {
        let duration = duration.map(parse_rational).transpose().map_err(value_err)?;
        Ok(Trace {
            inner: TimedTrace::from_csv(id, text, duration).map_err(value_err)?,
        })
    }

    /// Loads a CSV trace file.
    #[staticmethod]
    #[pyo3(signature = (path, duration=None))]
    fn load(path: &str, duration: Option<&str>) -> PyResult<Trace> {
        let duration = duration.map(parse_rational).transpose().map_err(value_err)?;
        Ok(Trace {
            inner: TimedTrace::from_csv_file(std::path::Path::new(path), duration)
                .map_err(value_err)?,
        })
    }

    fn to_csv(&self) -> String {
        self.inner.to_csv()
    }

    fn id(&self) -> String {
        self.inner.id().to_string()
    }

    fn duration(&self) -> String {
        format_rational(&self.inner.duration())
    }

    fn variables(&self) -> Vec<String> {
        self.inner.variables().map(str::to_string).collect()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Trace({}, {} samples, duration {})",
            self.inner.id(),
            self.inner.len(),
            format_rational(&self.inner.duration())
        )
    }
}

/// Evaluates a formula on a trace at time `t0`.
#[pyfunction]
#[pyo3(signature = (trace, formula, t0="0"))]
fn evaluate(trace: &Trace, formula: &Formula, t0: &str) -> PyResult<bool> {
    let t0 = parse_rational(t0).map_err(value_err)?;
    monitor_evaluate(&trace.inner, &formula.inner, &t0).map_err(value_err)
}

/// Runs the validity/redundancy/vacuity pipeline; returns the report dict.
#[pyfunction]
#[pyo3(signature = (formula, step="1", early_stop=false, mutex=None, use_mutex=true))]
fn debug<'py>(
    py: Python<'py>,
    formula: &Formula,
    step: &str,
    early_stop: bool,
    mutex: Option<Vec<Vec<String>>>,
    use_mutex: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let cfg = DebugConfig {
        grid: grid_config(step, None, false)?,
        early_stop,
        mutex_enabled: use_mutex,
        extra_mutex: mutex.unwrap_or_default(),
        use_fast_path: true,
    };
    let report = debug_pipeline(&formula.inner, None, &cfg).map_err(value_err)?;
    let config = serde_json::json!({ "gridStep": step, "earlyStop": early_stop });
    json_to_py(py, &debug_report_json(&report, config))
}

/// Grid satisfiability; returns (status, witness) where the witness is a
/// `Trace` or None.
#[pyfunction]
#[pyo3(signature = (formula, step="1", mutex=None))]
fn sat(formula: &Formula, step: &str, mutex: Option<Vec<Vec<String>>>) -> PyResult<(String, Option<Trace>)> {
    let cfg = grid_config(step, None, false)?;
    let nnf = to_nnf(&formula.inner);
    let verdict = check_sat(&nnf, &mutex.unwrap_or_default(), &cfg).map_err(value_err)?;
    let status = match verdict.status {
        SatStatus::Sat => "sat",
        SatStatus::Unsat => "unsat",
    };
    Ok((
        status.to_string(),
        verdict.witness.map(|inner| Trace { inner }),
    ))
}

/// Whether `lhs` entails `rhs` under grid semantics.
#[pyfunction]
#[pyo3(signature = (lhs, rhs, step="1", mutex=None))]
fn entails(lhs: &Formula, rhs: &Formula, step: &str, mutex: Option<Vec<Vec<String>>>) -> PyResult<bool> {
    let cfg = grid_config(step, None, false)?;
    sat_entails(&lhs.inner, &rhs.inner, &mutex.unwrap_or_default(), &cfg).map_err(value_err)
}

/// DIMACS CNF text of the grid unfolding.
#[pyfunction]
#[pyo3(signature = (formula, step="1", mutex=None))]
fn dimacs(formula: &Formula, step: &str, mutex: Option<Vec<Vec<String>>>) -> PyResult<String> {
    let cfg = grid_config(step, None, false)?;
    let nnf = to_nnf(&formula.inner);
    export_dimacs(&nnf, &mutex.unwrap_or_default(), &cfg).map_err(value_err)
}

/// Decomposes the formula's threshold predicates; returns the atom table
/// dict with the abstracted formula under "abstracted".
#[pyfunction]
fn decompose<'py>(py: Python<'py>, formula: &Formula) -> PyResult<Bound<'py, PyAny>> {
    let table = table_for_formula(&formula.inner);
    let abstracted =
        tempolint::predicate::abstract_formula(&formula.inner, &table).map_err(value_err)?;
    let mut doc = table.to_json();
    doc["abstracted"] = serde_json::json!(abstracted.to_string());
    json_to_py(py, &doc)
}

/// Signal-vacuity analysis of one trace: antecedent failure when the
/// formula is request-response, literal-occurrence removal otherwise.
/// Returns a list of finding dicts.
#[pyfunction]
fn vacuity_signal<'py>(
    py: Python<'py>,
    formula: &Formula,
    trace: &Trace,
) -> PyResult<Bound<'py, PyAny>> {
    let findings = if classify_rr(&formula.inner) {
        antecedent_failure_check(&formula.inner, &trace.inner).map_err(value_err)?
    } else {
        literal_removal_check(&formula.inner, &trace.inner).map_err(value_err)?
    };
    let docs: Vec<Value> = findings
        .iter()
        .map(|f| signal_finding_json(trace.inner.id(), f))
        .collect();
    json_to_py(py, &Value::Array(docs))
}

/// Finds the literals whose obligations falsified the trace.
#[pyfunction]
fn localize<'py>(py: Python<'py>, formula: &Formula, trace: &Trace) -> PyResult<Bound<'py, PyAny>> {
    let findings = falsification_localize(&formula.inner, &trace.inner).map_err(value_err)?;
    let docs: Vec<Value> = findings
        .iter()
        .map(|f| signal_finding_json(trace.inner.id(), f))
        .collect();
    json_to_py(py, &Value::Array(docs))
}

/// Generates deterministic synthetic traces from a built-in profile name
/// (`at`, `at-gear3`) or a JSON profile file.
#[pyfunction]
#[pyo3(signature = (profile="at", count=1, seed=0))]
fn generate_traces(profile: &str, count: usize, seed: u64) -> PyResult<Vec<Trace>> {
    let profile = TraceProfile::resolve(profile).map_err(value_err)?;
    let traces = generate_synthetic_traces(&profile, count, seed).map_err(value_err)?;
    Ok(traces.into_iter().map(|inner| Trace { inner }).collect())
}

#[pymodule]
fn tempolint_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Formula>()?;
    m.add_class::<Trace>()?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(debug, m)?)?;
    m.add_function(wrap_pyfunction!(sat, m)?)?;
    m.add_function(wrap_pyfunction!(entails, m)?)?;
    m.add_function(wrap_pyfunction!(dimacs, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(vacuity_signal, m)?)?;
    m.add_function(wrap_pyfunction!(localize, m)?)?;
    m.add_function(wrap_pyfunction!(generate_traces, m)?)?;
    Ok(())
}
