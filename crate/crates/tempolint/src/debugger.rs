//! The three-stage requirement debugger: validity, redundancy, vacuity.
//!
//! Validity asks whether the specification is unsatisfiable or a tautology;
//! either way no system behavior could distinguish it, so later stages are
//! skipped. Redundancy looks for conjuncts entailed by the rest of their
//! conjunction, at the top level and inside nested conjunctions (checked
//! locally, ignoring the temporal context above them). Vacuity looks for
//! literal occurrences that can be replaced by `false` without changing the
//! specification's models.
//!
//! Every check reduces to unsatisfiability: `lhs ⊨ rhs` iff `lhs && !rhs`
//! has no model. Queries whose NNF lands in a pure temporal fragment go
//! through the untimed fast path first; inconclusive answers fall through to
//! the grid engine.

use crate::formula::{
    lit_occurrences, substitute_occurrence, to_nnf, Formula, LiteralOccurrence, Path, Replacement,
};
use crate::predicate::{abstract_formula, table_for_formula, AtomTable, DecomposeError};
use crate::sat::{
    check_sat, fragment_classify, ltl_fast_path, EngineError, FastPathVerdict, Fragment,
    GridConfig, SatStats, SatStatus,
};
use std::time::Instant;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Decompose(#[from] DecomposeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Validity {
    Unsatisfiable,
    Tautology,
    Valid,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RedundancyFinding {
    /// The conjunct entailed by its siblings.
    pub conjunct: Formula,
    /// The flattened conjunction it sits in; equals the whole specification
    /// for top-level findings.
    pub context: Formula,
    /// Path of the conjunction within the NNF specification.
    pub context_path: Path,
    /// Position of the conjunct within the flattened conjunction.
    pub conjunct_index: usize,
}

impl RedundancyFinding {
    pub fn is_top_level(&self) -> bool {
        self.context_path.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VacuityFindingSpec {
    /// The literal occurrence, pathed from the NNF specification root.
    pub occurrence: LiteralOccurrence,
    /// Which root conjunct it belongs to.
    pub conjunct_index: usize,
    /// The whole specification with that occurrence replaced by `false`;
    /// entailed by (hence equivalent to) the original.
    pub mutated: Formula,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Finding {
    Unsatisfiable,
    Tautology,
    RedundantConjunct(RedundancyFinding),
    VacuousOccurrence(VacuityFindingSpec),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum FinalStatus {
    FailedValidity,
    FailedRedundancy,
    FailedVacuity,
    Passed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DebugConfig {
    pub grid: GridConfig,
    /// Stop at the first finding instead of enumerating everything.
    pub early_stop: bool,
    /// Supply mutual-exclusion constraints to the engine.
    pub mutex_enabled: bool,
    /// Mutex groups beyond those of the atom table (e.g. user-declared).
    pub extra_mutex: Vec<Vec<String>>,
    /// Consult the untimed fast path before grid queries.
    pub use_fast_path: bool,
}

impl Default for DebugConfig {
    fn default() -> Self {
        DebugConfig {
            grid: GridConfig::default(),
            early_stop: false,
            mutex_enabled: true,
            extra_mutex: Vec::new(),
            use_fast_path: true,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, serde::Serialize)]
pub struct StageStats {
    pub queries: u64,
    pub fast_path_conclusive: u64,
    pub sat: SatStats,
    pub millis: u128,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DebugReport {
    /// The analyzed formula (after predicate abstraction, before NNF).
    pub formula: Formula,
    pub nnf: Formula,
    pub status: FinalStatus,
    pub validity: Option<Validity>,
    pub findings: Vec<Finding>,
    pub validity_stats: StageStats,
    pub redundancy_stats: StageStats,
    pub vacuity_stats: StageStats,
    /// Grid-refinement diagnostics, verbatim; never silently dropped.
    pub diagnostics: Vec<String>,
}

impl DebugReport {
    pub fn redundancy_findings(&self) -> Vec<&RedundancyFinding> {
        self.findings
            .iter()
            .filter_map(|f| match f {
                Finding::RedundantConjunct(r) => Some(r),
                _ => None,
            })
            .collect()
    }

    pub fn vacuity_findings(&self) -> Vec<&VacuityFindingSpec> {
        self.findings
            .iter()
            .filter_map(|f| match f {
                Finding::VacuousOccurrence(v) => Some(v),
                _ => None,
            })
            .collect()
    }
}

/// Shared query driver: counts queries, consults the fast path, accumulates
/// solver statistics and refinement diagnostics.
struct Analyzer<'a> {
    mutex: &'a [Vec<String>],
    grid: &'a GridConfig,
    use_fast_path: bool,
    stats: StageStats,
    diagnostics: Vec<String>,
}

impl<'a> Analyzer<'a> {
    fn new(mutex: &'a [Vec<String>], grid: &'a GridConfig, use_fast_path: bool) -> Self {
        Analyzer {
            mutex,
            grid,
            use_fast_path,
            stats: StageStats::default(),
            diagnostics: Vec::new(),
        }
    }

    fn sat_status(&mut self, query: &Formula) -> Result<SatStatus, EngineError> {
        self.stats.queries += 1;
        if self.use_fast_path {
            if let Ok(fragment) = fragment_classify(query) {
                if fragment != Fragment::Mixed {
                    let (verdict, stats) = ltl_fast_path(query, self.mutex)?;
                    self.stats.sat.merge(&stats);
                    match verdict {
                        FastPathVerdict::Sat => {
                            self.stats.fast_path_conclusive += 1;
                            return Ok(SatStatus::Sat);
                        }
                        FastPathVerdict::Unsat => {
                            self.stats.fast_path_conclusive += 1;
                            return Ok(SatStatus::Unsat);
                        }
                        FastPathVerdict::Inconclusive => {}
                    }
                }
            }
        }
        let verdict = check_sat(query, self.mutex, self.grid)?;
        self.stats.sat.merge(&verdict.stats);
        if let Some(note) = verdict.refinement_note {
            self.diagnostics.push(note);
        }
        Ok(verdict.status)
    }

    fn entails(&mut self, lhs: &Formula, rhs: &Formula) -> Result<bool, EngineError> {
        let query = to_nnf(&Formula::and(lhs.clone(), Formula::not(rhs.clone())));
        Ok(self.sat_status(&query)? == SatStatus::Unsat)
    }

    fn take_stats(&mut self, started: Instant) -> StageStats {
        let mut stats = std::mem::take(&mut self.stats);
        stats.millis = started.elapsed().as_millis();
        stats
    }
}

/// Validity check: unsatisfiable, tautology, or genuinely contingent.
pub fn check_validity(
    f: &Formula,
    mutex: &[Vec<String>],
    cfg: &GridConfig,
) -> Result<Validity, EngineError> {
    let mut analyzer = Analyzer::new(mutex, cfg, true);
    validity_with(&mut analyzer, f)
}

fn validity_with(analyzer: &mut Analyzer, f: &Formula) -> Result<Validity, EngineError> {
    if analyzer.sat_status(&to_nnf(f))? == SatStatus::Unsat {
        return Ok(Validity::Unsatisfiable);
    }
    if analyzer.sat_status(&to_nnf(&Formula::not(f.clone())))? == SatStatus::Unsat {
        return Ok(Validity::Tautology);
    }
    Ok(Validity::Valid)
}

/// All conjunction nodes of the NNF tree that head a maximal `&&` chain.
fn conjunction_roots(f: &Formula) -> Vec<(Path, &Formula)> {
    fn go<'a>(f: &'a Formula, path: &mut Path, inside_and: bool, out: &mut Vec<(Path, &'a Formula)>) {
        let is_and = matches!(f, Formula::And(..));
        if is_and && !inside_and {
            out.push((path.clone(), f));
        }
        for (idx, child) in f.children().into_iter().enumerate() {
            path.push(idx);
            go(child, path, is_and, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    go(f, &mut Vec::new(), false, &mut out);
    out
}

/// Redundant conjuncts at every conjunction of the specification's NNF.
/// A conjunct is redundant when the remaining conjuncts of its (flattened)
/// conjunction entail it; nested conjunctions are checked locally, ignoring
/// the temporal context above them. With duplicated conjuncts the later
/// copy is the one reported.
pub fn check_redundancy(
    f: &Formula,
    mutex: &[Vec<String>],
    cfg: &GridConfig,
) -> Result<Vec<RedundancyFinding>, EngineError> {
    let mut analyzer = Analyzer::new(mutex, cfg, true);
    redundancy_with(&mut analyzer, &to_nnf(f), false)
}

fn redundancy_with(
    analyzer: &mut Analyzer,
    nnf: &Formula,
    early_stop: bool,
) -> Result<Vec<RedundancyFinding>, EngineError> {
    let mut findings = Vec::new();
    for (context_path, conjunction) in conjunction_roots(nnf) {
        let conjuncts = conjunction.flatten_and();
        for (j, conjunct) in conjuncts.iter().enumerate() {
            if conjuncts[j + 1..].iter().any(|later| later == conjunct) {
                continue; // a later duplicate will carry the finding
            }
            let rest: Vec<Formula> = conjuncts
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != j)
                .map(|(_, c)| (*c).clone())
                .collect();
            let rest = Formula::conjunction(rest);
            if analyzer.entails(&rest, conjunct)? {
                findings.push(RedundancyFinding {
                    conjunct: (*conjunct).clone(),
                    context: conjunction.clone(),
                    context_path: context_path.clone(),
                    conjunct_index: j,
                });
                if early_stop {
                    return Ok(findings);
                }
            }
        }
    }
    Ok(findings)
}

/// Inherent vacuity: literal occurrences whose replacement by `false` is
/// entailed by the whole specification. The reported mutation swaps the
/// mutated conjunct into the specification, which is then equivalent to the
/// original.
pub fn check_vacuity(
    f: &Formula,
    mutex: &[Vec<String>],
    cfg: &GridConfig,
) -> Result<Vec<VacuityFindingSpec>, EngineError> {
    let mut analyzer = Analyzer::new(mutex, cfg, true);
    vacuity_with(&mut analyzer, &to_nnf(f), false)
}

fn vacuity_with(
    analyzer: &mut Analyzer,
    nnf: &Formula,
    early_stop: bool,
) -> Result<Vec<VacuityFindingSpec>, EngineError> {
    let mut findings = Vec::new();
    let conjuncts = nnf.flatten_and_with_paths();
    for (conjunct_index, (conjunct_path, conjunct)) in conjuncts.iter().enumerate() {
        for occurrence in lit_occurrences(conjunct).expect("nnf input") {
            let mutated_conjunct =
                substitute_occurrence(conjunct, &occurrence, Replacement::Bottom)
                    .expect("occurrence of the same conjunct");
            if analyzer.entails(nnf, &mutated_conjunct)? {
                let mutated = nnf
                    .replace_at(conjunct_path, mutated_conjunct)
                    .expect("conjunct path is valid");
                findings.push(VacuityFindingSpec {
                    occurrence: occurrence.prefixed(conjunct_path),
                    conjunct_index,
                    mutated,
                });
                if early_stop {
                    return Ok(findings);
                }
            }
        }
    }
    Ok(findings)
}

/// Runs the full pipeline: predicate abstraction, validity, redundancy,
/// vacuity. A validity failure always stops the pipeline; with `early_stop`
/// set, the first redundancy or vacuity finding stops it too.
pub fn debug_pipeline(
    f: &Formula,
    table: Option<&AtomTable>,
    cfg: &DebugConfig,
) -> Result<DebugReport, PipelineError> {
    let built;
    let table = match table {
        Some(t) => Some(t),
        None if f.has_predicates() => {
            built = table_for_formula(f);
            Some(&built)
        }
        None => None,
    };
    let formula = match table {
        Some(t) => abstract_formula(f, t)?,
        None => f.clone(),
    };
    let mut mutex: Vec<Vec<String>> = Vec::new();
    if cfg.mutex_enabled {
        if let Some(t) = table {
            mutex.extend(t.mutex_groups());
        }
        mutex.extend(cfg.extra_mutex.iter().cloned());
    }

    let nnf = to_nnf(&formula);
    let mut analyzer = Analyzer::new(&mutex, &cfg.grid, cfg.use_fast_path);
    let mut findings = Vec::new();

    let started = Instant::now();
    let validity = validity_with(&mut analyzer, &formula)?;
    let validity_stats = analyzer.take_stats(started);
    match validity {
        Validity::Unsatisfiable => findings.push(Finding::Unsatisfiable),
        Validity::Tautology => findings.push(Finding::Tautology),
        Validity::Valid => {}
    }
    if validity != Validity::Valid {
        return Ok(DebugReport {
            formula,
            nnf,
            status: FinalStatus::FailedValidity,
            validity: Some(validity),
            findings,
            validity_stats,
            redundancy_stats: StageStats::default(),
            vacuity_stats: StageStats::default(),
            diagnostics: analyzer.diagnostics,
        });
    }

    let started = Instant::now();
    let redundant = redundancy_with(&mut analyzer, &nnf, cfg.early_stop)?;
    let redundancy_stats = analyzer.take_stats(started);
    let redundancy_failed = !redundant.is_empty();
    findings.extend(redundant.into_iter().map(Finding::RedundantConjunct));
    if redundancy_failed && cfg.early_stop {
        return Ok(DebugReport {
            formula,
            nnf,
            status: FinalStatus::FailedRedundancy,
            validity: Some(validity),
            findings,
            validity_stats,
            redundancy_stats,
            vacuity_stats: StageStats::default(),
            diagnostics: analyzer.diagnostics,
        });
    }

    let started = Instant::now();
    let vacuous = vacuity_with(&mut analyzer, &nnf, cfg.early_stop)?;
    let vacuity_stats = analyzer.take_stats(started);
    let vacuity_failed = !vacuous.is_empty();
    findings.extend(vacuous.into_iter().map(Finding::VacuousOccurrence));

    let status = if redundancy_failed {
        FinalStatus::FailedRedundancy
    } else if vacuity_failed {
        FinalStatus::FailedVacuity
    } else {
        FinalStatus::Passed
    };
    Ok(DebugReport {
        formula,
        nnf,
        status,
        validity: Some(validity),
        findings,
        validity_stats,
        redundancy_stats,
        vacuity_stats,
        diagnostics: analyzer.diagnostics,
    })
}
