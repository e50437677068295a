//! Bounded satisfiability for NNF formulas under grid semantics.
//!
//! The trace universe is piecewise-constant traces with change points on a
//! δ-spaced grid over `[0, horizon]`. SAT answers are sound for continuous
//! semantics (a grid witness is a real trace); UNSAT answers are exact for
//! grid semantics. The optional refinement check re-solves at δ/2 and
//! reports any verdict change rather than hiding it.

mod cnf;
mod encoder;
mod solver;

pub use cnf::{Cnf, Lit, Var};
pub use encoder::{encode, Encoding, EngineError, TimeModel};
pub use solver::{solve_cnf, SolveResult, SolverStats};

use crate::formula::{is_nnf, to_nnf, Formula};
use crate::monitor::TimedTrace;
use crate::rational::{format_rational, ratio, rat, Rational};
use serde::Serialize;

/// Engine configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridConfig {
    /// Grid step δ; must divide every interval endpoint of the query.
    pub step: Rational,
    /// Refuse queries whose horizon exceeds this bound.
    pub horizon_cap: Option<Rational>,
    /// Re-solve at δ/2 and flag verdict changes.
    pub refine_check: bool,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            step: rat(1),
            horizon_cap: None,
            refine_check: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SatStatus {
    Sat,
    Unsat,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SatStats {
    pub variables: usize,
    pub clauses: usize,
    pub decisions: u64,
    pub propagations: u64,
    pub conflicts: u64,
}

impl SatStats {
    fn absorb(&mut self, other: &SatStats) {
        self.variables += other.variables;
        self.clauses += other.clauses;
        self.decisions += other.decisions;
        self.propagations += other.propagations;
        self.conflicts += other.conflicts;
    }

    pub fn merge(&mut self, other: &SatStats) {
        self.absorb(other);
    }
}

#[derive(Debug, Clone)]
pub struct SatVerdict {
    pub status: SatStatus,
    /// A satisfying grid trace, present exactly when `status` is `Sat`.
    pub witness: Option<TimedTrace>,
    pub stats: SatStats,
    /// Set when the refinement check observed a verdict change between δ
    /// and δ/2; the verdict reported is the refined one.
    pub refinement_note: Option<String>,
}

impl SatVerdict {
    pub fn is_sat(&self) -> bool {
        self.status == SatStatus::Sat
    }
}

fn solve_grid(f: &Formula, mutex: &[Vec<String>], step: Rational) -> Result<SatVerdict, EngineError> {
    let encoding = encode(f, mutex, &TimeModel::Grid { step })?;
    let (result, solver_stats) = solve_cnf(&encoding.cnf);
    let stats = SatStats {
        variables: encoding.cnf.num_vars,
        clauses: encoding.cnf.clauses.len(),
        decisions: solver_stats.decisions,
        propagations: solver_stats.propagations,
        conflicts: solver_stats.conflicts,
    };
    Ok(match result {
        SolveResult::Sat(model) => SatVerdict {
            status: SatStatus::Sat,
            witness: Some(encoding.decode_witness(&model)),
            stats,
            refinement_note: None,
        },
        SolveResult::Unsat => SatVerdict {
            status: SatStatus::Unsat,
            witness: None,
            stats,
            refinement_note: None,
        },
    })
}

/// Decides satisfiability of an NNF formula over the δ-grid, under
/// mutual-exclusion constraints. The time domain runs to the formula's
/// horizon; beyond it no subformula is evaluated, so a longer domain cannot
/// change the verdict.
pub fn check_sat(
    f: &Formula,
    mutex: &[Vec<String>],
    cfg: &GridConfig,
) -> Result<SatVerdict, EngineError> {
    if !is_nnf(f) {
        return Err(EngineError::NotNnf);
    }
    if let Some(cap) = &cfg.horizon_cap {
        let horizon = f.horizon();
        if horizon > *cap {
            return Err(EngineError::HorizonExceedsCap {
                horizon: format_rational(&horizon),
                cap: format_rational(cap),
            });
        }
    }
    let mut verdict = solve_grid(f, mutex, cfg.step)?;
    if cfg.refine_check {
        let refined = solve_grid(f, mutex, cfg.step * ratio(1, 2))?;
        verdict.stats.absorb(&refined.stats);
        if refined.status != verdict.status {
            verdict.refinement_note = Some(format!(
                "grid refinement changed the verdict: δ={} gives {:?}, δ={} gives {:?}; reporting the refined verdict",
                format_rational(&cfg.step),
                verdict.status,
                format_rational(&(cfg.step * ratio(1, 2))),
                refined.status,
            ));
            verdict.status = refined.status;
            verdict.witness = refined.witness;
        }
    }
    Ok(verdict)
}

/// `lhs ⊨ rhs` iff `lhs && !rhs` is unsatisfiable.
pub fn entails(
    lhs: &Formula,
    rhs: &Formula,
    mutex: &[Vec<String>],
    cfg: &GridConfig,
) -> Result<bool, EngineError> {
    let query = to_nnf(&Formula::and(lhs.clone(), Formula::not(rhs.clone())));
    Ok(check_sat(&query, mutex, cfg)?.status == SatStatus::Unsat)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fragment {
    EventuallyOnly,
    AlwaysOnly,
    Mixed,
}

/// Classifies an NNF formula by its temporal operators. A temporal-free
/// formula counts as `AlwaysOnly` by convention.
pub fn fragment_classify(f: &Formula) -> Result<Fragment, EngineError> {
    if !is_nnf(f) {
        return Err(EngineError::NotNnf);
    }
    let mut has_eventually = false;
    let mut has_always = false;
    for (_, node) in f.walk() {
        match node {
            Formula::Eventually(..) => has_eventually = true,
            Formula::Always(..) => has_always = true,
            _ => {}
        }
    }
    Ok(match (has_eventually, has_always) {
        (true, true) => Fragment::Mixed,
        (true, false) => Fragment::EventuallyOnly,
        _ => Fragment::AlwaysOnly,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FastPathVerdict {
    Sat,
    Unsat,
    Inconclusive,
}

/// Drops every temporal operator, keeping its operand.
fn erase_temporal(f: &Formula) -> Formula {
    match f {
        Formula::True | Formula::False | Formula::Atom(_) => f.clone(),
        Formula::Not(c) => Formula::not(erase_temporal(c)),
        Formula::And(l, r) => Formula::and(erase_temporal(l), erase_temporal(r)),
        Formula::Or(l, r) => Formula::or(erase_temporal(l), erase_temporal(r)),
        Formula::Implies(l, r) => Formula::implies(erase_temporal(l), erase_temporal(r)),
        Formula::Eventually(_, c) | Formula::Always(_, c) => erase_temporal(c),
    }
}

fn count_eventually(f: &Formula) -> usize {
    f.walk()
        .iter()
        .filter(|(_, n)| matches!(n, Formula::Eventually(..)))
        .count()
}

/// Untimed fast path for pure fragments, with the interval constraints
/// stripped.
///
/// Always-only: a satisfying valuation of the operand formula extends to a
/// constant trace satisfying the original, so propositional SAT implies SAT;
/// propositional UNSAT says nothing because timed windows may release
/// obligations that untimed ones impose.
///
/// Eventually-only: any satisfying trace can be contracted to one decision
/// point per eventually-obligation plus the origin, so unsatisfiability of
/// that finite-point encoding transfers to the timed formula, while
/// satisfiability of the relaxed version says nothing.
pub fn ltl_fast_path(
    f: &Formula,
    mutex: &[Vec<String>],
) -> Result<(FastPathVerdict, SatStats), EngineError> {
    match fragment_classify(f)? {
        Fragment::Mixed => Err(EngineError::MixedFragment),
        Fragment::AlwaysOnly => {
            let erased = erase_temporal(f);
            let encoding = encode(&erased, mutex, &TimeModel::Suffix { points: 1 })?;
            let (result, solver_stats) = solve_cnf(&encoding.cnf);
            let stats = stats_of(&encoding, solver_stats);
            Ok(match result {
                SolveResult::Sat(_) => (FastPathVerdict::Sat, stats),
                SolveResult::Unsat => (FastPathVerdict::Inconclusive, stats),
            })
        }
        Fragment::EventuallyOnly => {
            let points = count_eventually(f) + 1;
            let encoding = encode(f, mutex, &TimeModel::Suffix { points })?;
            let (result, solver_stats) = solve_cnf(&encoding.cnf);
            let stats = stats_of(&encoding, solver_stats);
            Ok(match result {
                SolveResult::Unsat => (FastPathVerdict::Unsat, stats),
                SolveResult::Sat(_) => (FastPathVerdict::Inconclusive, stats),
            })
        }
    }
}

fn stats_of(encoding: &Encoding, solver_stats: SolverStats) -> SatStats {
    SatStats {
        variables: encoding.cnf.num_vars,
        clauses: encoding.cnf.clauses.len(),
        decisions: solver_stats.decisions,
        propagations: solver_stats.propagations,
        conflicts: solver_stats.conflicts,
    }
}

/// Emits the grid unfolding as a DIMACS CNF document. Comment lines map
/// every (atom, time) pair to its variable; satisfiability of the document
/// matches `check_sat`'s verdict.
pub fn export_dimacs(
    f: &Formula,
    mutex: &[Vec<String>],
    cfg: &GridConfig,
) -> Result<String, EngineError> {
    if let Some(cap) = &cfg.horizon_cap {
        let horizon = f.horizon();
        if horizon > *cap {
            return Err(EngineError::HorizonExceedsCap {
                horizon: format_rational(&horizon),
                cap: format_rational(cap),
            });
        }
    }
    let encoding = encode(f, mutex, &TimeModel::Grid { step: cfg.step })?;
    Ok(encoding.cnf.to_dimacs(&encoding.comments()))
}
