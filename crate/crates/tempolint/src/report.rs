//! Report documents shared by the library and the command line.
//!
//! Every analysis renders to one JSON document; the text format is a plain
//! rendering of the same data. Exit codes derive from findings only, never
//! from timing, and the resolved configuration is embedded for
//! reproducibility.

use crate::debugger::{DebugReport, Finding};
use crate::monitor::VacuityFinding;
use crate::sat::SatVerdict;
use serde_json::{json, Value};

pub fn finding_json(finding: &Finding) -> Value {
    match finding {
        Finding::Unsatisfiable => json!({ "kind": "Unsatisfiable" }),
        Finding::Tautology => json!({ "kind": "Tautology" }),
        Finding::RedundantConjunct(r) => json!({
            "kind": "RedundantConjunct",
            "conjunct": r.conjunct.to_string(),
            "context": if r.is_top_level() { "root".to_string() } else { r.context.to_string() },
            "contextPath": r.context_path,
            "conjunctIndex": r.conjunct_index,
        }),
        Finding::VacuousOccurrence(v) => json!({
            "kind": "VacuousOccurrence",
            "occurrencePath": v.occurrence.path,
            "literal": v.occurrence.literal_text(),
            "conjunctIndex": v.conjunct_index,
            "mutated": v.mutated.to_string(),
        }),
    }
}

pub fn debug_report_json(report: &DebugReport, config: Value) -> Value {
    json!({
        "formula": report.formula.to_string(),
        "nnf": report.nnf.to_string(),
        "status": format!("{:?}", report.status),
        "findings": report.findings.iter().map(finding_json).collect::<Vec<_>>(),
        "stats": {
            "validity": report.validity_stats,
            "redundancy": report.redundancy_stats,
            "vacuity": report.vacuity_stats,
        },
        "diagnostics": report.diagnostics,
        "config": config,
    })
}

pub fn debug_report_text(report: &DebugReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("specification: {}\n", report.formula));
    out.push_str(&format!("status: {:?}\n", report.status));
    for finding in &report.findings {
        match finding {
            Finding::Unsatisfiable => {
                out.push_str("finding: the specification is unsatisfiable\n")
            }
            Finding::Tautology => out.push_str("finding: the specification is a tautology\n"),
            Finding::RedundantConjunct(r) => {
                if r.is_top_level() {
                    out.push_str(&format!("finding: {} is redundant\n", r.conjunct));
                } else {
                    out.push_str(&format!(
                        "finding: {} is redundant in {}\n",
                        r.conjunct, r.context
                    ));
                }
            }
            Finding::VacuousOccurrence(v) => {
                out.push_str(&format!(
                    "finding: vacuous occurrence {} at path {:?}; equivalent mutation: {}\n",
                    v.occurrence.literal_text(),
                    v.occurrence.path,
                    v.mutated
                ));
            }
        }
    }
    for diagnostic in &report.diagnostics {
        out.push_str(&format!("diagnostic: {diagnostic}\n"));
    }
    out
}

pub fn sat_verdict_json(verdict: &SatVerdict, config: Value) -> Value {
    json!({
        "status": format!("{:?}", verdict.status),
        "witness": verdict.witness.as_ref().map(|w| w.to_csv()),
        "stats": verdict.stats,
        "diagnostics": verdict.refinement_note.iter().collect::<Vec<_>>(),
        "config": config,
    })
}

pub fn signal_finding_json(trace_id: &str, finding: &VacuityFinding) -> Value {
    match finding {
        VacuityFinding::AntecedentFailure {
            implication_path,
            antecedent,
            effective,
            mutation,
        } => json!({
            "kind": "AntecedentFailure",
            "trace": trace_id,
            "implicationPath": implication_path,
            "antecedent": antecedent.to_string(),
            "effectiveInterval": effective.to_string(),
            "mutated": mutation.to_string(),
        }),
        VacuityFinding::MutationPass { occurrence, mutated } => json!({
            "kind": "MutationPass",
            "trace": trace_id,
            "occurrencePath": occurrence.path,
            "literal": occurrence.literal_text(),
            "mutated": mutated.to_string(),
            "advisory": true,
        }),
        VacuityFinding::FalsificationSource { occurrence } => json!({
            "kind": "FalsificationSource",
            "trace": trace_id,
            "occurrencePath": occurrence.path,
            "literal": occurrence.literal_text(),
        }),
    }
}
