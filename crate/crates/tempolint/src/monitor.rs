//! Offline monitoring of formulas on finite timed traces, and signal-level
//! vacuity analysis.
//!
//! Traces are piecewise constant: the value at time `t` is the sample at the
//! greatest timestamp `<= t`. Temporal operators quantify over a finite set
//! of decision points per window — the trace timestamps inside the window
//! plus the window endpoints that are closed. An excluded (open) endpoint is
//! not a decision point for that bound at all, although the trace still has
//! a value there.
//!
//! Evaluation runs bottom-up: every subformula is evaluated once over all
//! trace timestamps (with prefix counts for O(log n) window queries) plus
//! the extra shifted endpoint times its ancestors need, so monitoring stays
//! polynomial in trace length times formula size.

use crate::formula::{
    annotate_effective_intervals, lit_occurrences, substitute_occurrence, to_nnf, Atom, Formula,
    LiteralOccurrence, Path, Replacement,
};
use crate::interval::Interval;
use crate::rational::{format_rational, parse_rational, Rational};
use num_traits::{Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path as FsPath;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TraceError {
    #[error("trace file {file}: {message}")]
    Format { file: String, message: String },
    #[error("trace file {file}, line {line}: {message}")]
    Line {
        file: String,
        line: usize,
        message: String,
    },
    #[error("failed to read {file}: {message}")]
    Io { file: String, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MonitorError {
    #[error("unknown atom `{0}` (no such trace column)")]
    UnknownAtom(String),
    #[error("unknown variable `{0}` (no such trace column)")]
    UnknownVariable(String),
    #[error("time {t} is outside the trace domain [0,{duration}]")]
    TimeOutOfRange { t: String, duration: String },
    #[error("formula is not a request-response specification")]
    NotRequestResponse,
    #[error("trace satisfies the formula; nothing to localize")]
    TraceSatisfiesFormula,
}

/// A finite, piecewise-constant timed valuation over `[0, duration]`.
/// Boolean atoms are columns holding 0/1; any nonzero value counts as true.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimedTrace {
    id: String,
    duration: Rational,
    times: Vec<Rational>,
    columns: Vec<(String, Vec<Rational>)>,
}

impl TimedTrace {
    /// Builds a trace; timestamps must be strictly increasing and start at 0,
    /// every column must have one sample per timestamp, and the duration
    /// (when given) must not cut samples off.
    pub fn new(
        id: impl Into<String>,
        times: Vec<Rational>,
        columns: Vec<(String, Vec<Rational>)>,
        duration: Option<Rational>,
    ) -> Result<TimedTrace, TraceError> {
        let id = id.into();
        let err = |message: String| TraceError::Format {
            file: id.clone(),
            message,
        };
        if times.is_empty() {
            return Err(err("trace has no samples".to_string()));
        }
        if !times[0].is_zero() {
            return Err(err("timestamps must start at 0".to_string()));
        }
        if times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(err("timestamps must be strictly increasing".to_string()));
        }
        for (name, samples) in &columns {
            if samples.len() != times.len() {
                return Err(err(format!(
                    "column `{name}` has {} samples for {} timestamps",
                    samples.len(),
                    times.len()
                )));
            }
        }
        let last = *times.last().unwrap();
        let duration = match duration {
            Some(d) if d < last => {
                return Err(err(format!(
                    "duration {} is before the last sample at {}",
                    format_rational(&d),
                    format_rational(&last)
                )))
            }
            Some(d) => d,
            None => last,
        };
        Ok(TimedTrace {
            id,
            duration,
            times,
            columns,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn duration(&self) -> Rational {
        self.duration
    }

    pub fn times(&self) -> &[Rational] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.columns.iter().map(|(name, _)| name.as_str())
    }

    pub fn column(&self, name: &str) -> Option<&[Rational]> {
        self.columns
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, samples)| samples.as_slice())
    }

    /// Index of the sample in effect at time `t` (greatest timestamp <= t).
    fn sample_index(&self, t: &Rational) -> usize {
        debug_assert!(*t >= self.times[0]);
        self.times.partition_point(|ts| ts <= t) - 1
    }

    /// The piecewise-constant value of a variable at time `t`.
    pub fn value_at(&self, variable: &str, t: &Rational) -> Result<Rational, MonitorError> {
        let samples = self
            .column(variable)
            .ok_or_else(|| MonitorError::UnknownVariable(variable.to_string()))?;
        Ok(samples[self.sample_index(t)])
    }

    fn atom_column<'a>(&'a self, atom: &Atom) -> Result<&'a [Rational], MonitorError> {
        match atom {
            Atom::Prop(name) => self
                .column(name)
                .ok_or_else(|| MonitorError::UnknownAtom(name.clone())),
            Atom::Pred { variable, .. } => self
                .column(variable)
                .ok_or_else(|| MonitorError::UnknownAtom(atom.name())),
        }
    }

    fn atom_truth(atom: &Atom, value: &Rational) -> bool {
        match atom {
            Atom::Prop(_) => !value.is_zero(),
            Atom::Pred { cmp, threshold, .. } => cmp.eval(value, threshold),
        }
    }

    /// Parses the CSV trace format: a `time,var1,var2,...` header followed
    /// by rows of decimal values with strictly increasing times from 0.
    pub fn from_csv(
        id: impl Into<String>,
        text: &str,
        duration: Option<Rational>,
    ) -> Result<TimedTrace, TraceError> {
        let id = id.into();
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| TraceError::Format {
            file: id.clone(),
            message: "empty trace file".to_string(),
        })?;
        let mut names: Vec<String> = header.split(',').map(|s| s.trim().to_string()).collect();
        if names.is_empty() || names[0] != "time" {
            return Err(TraceError::Format {
                file: id.clone(),
                message: "header must start with `time`".to_string(),
            });
        }
        names.remove(0);
        let mut times = Vec::new();
        let mut columns: Vec<(String, Vec<Rational>)> =
            names.into_iter().map(|n| (n, Vec::new())).collect();
        for (line_idx, line) in lines {
            let cells: Vec<&str> = line.split(',').map(|s| s.trim()).collect();
            if cells.len() != columns.len() + 1 {
                return Err(TraceError::Line {
                    file: id.clone(),
                    line: line_idx + 1,
                    message: format!(
                        "expected {} values, found {}",
                        columns.len() + 1,
                        cells.len()
                    ),
                });
            }
            let mut parsed = cells.iter().map(|c| {
                parse_rational(c).map_err(|e| TraceError::Line {
                    file: id.clone(),
                    line: line_idx + 1,
                    message: e.to_string(),
                })
            });
            times.push(parsed.next().unwrap()?);
            for (_, samples) in columns.iter_mut() {
                samples.push(parsed.next().unwrap()?);
            }
        }
        TimedTrace::new(id, times, columns, duration)
    }

    pub fn from_csv_file(
        path: &FsPath,
        duration: Option<Rational>,
    ) -> Result<TimedTrace, TraceError> {
        let text = std::fs::read_to_string(path).map_err(|e| TraceError::Io {
            file: path.display().to_string(),
            message: e.to_string(),
        })?;
        TimedTrace::from_csv(path.display().to_string(), &text, duration)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("time");
        for (name, _) in &self.columns {
            out.push(',');
            out.push_str(name);
        }
        out.push('\n');
        for (i, t) in self.times.iter().enumerate() {
            out.push_str(&format_rational(t));
            for (_, samples) in &self.columns {
                out.push(',');
                out.push_str(&format_rational(&samples[i]));
            }
            out.push('\n');
        }
        out
    }
}

/// Truth of one subformula over all trace timestamps plus the extra times
/// requested by its ancestors.
struct NodeEval {
    at_ts: Vec<bool>,
    /// prefix[i] = number of true entries among at_ts[..i].
    prefix: Vec<u32>,
    extra: BTreeMap<Rational, bool>,
}

impl NodeEval {
    fn from_values(at_ts: Vec<bool>, extra: BTreeMap<Rational, bool>) -> NodeEval {
        let mut prefix = Vec::with_capacity(at_ts.len() + 1);
        prefix.push(0);
        let mut acc = 0u32;
        for &v in &at_ts {
            acc += v as u32;
            prefix.push(acc);
        }
        NodeEval { at_ts, prefix, extra }
    }

    fn count_true(&self, range: std::ops::Range<usize>) -> u32 {
        self.prefix[range.end] - self.prefix[range.start]
    }
}

struct Evaluator<'a> {
    trace: &'a TimedTrace,
}

impl<'a> Evaluator<'a> {
    fn lookup(&self, eval: &NodeEval, t: &Rational) -> bool {
        let idx = self.trace.times.partition_point(|ts| ts < t);
        if idx < self.trace.times.len() && self.trace.times[idx] == *t {
            eval.at_ts[idx]
        } else {
            eval.extra[t]
        }
    }

    fn is_timestamp(&self, t: &Rational) -> bool {
        let idx = self.trace.times.partition_point(|ts| ts < t);
        idx < self.trace.times.len() && self.trace.times[idx] == *t
    }

    /// Decision points of the window `(t + iv) ∩ [0, duration]`: the index
    /// range of timestamps inside it and the closed endpoints. `None` for an
    /// empty window.
    fn window(
        &self,
        t: &Rational,
        iv: &Interval,
    ) -> Option<(std::ops::Range<usize>, Option<Rational>, Option<Rational>)> {
        let lo = *t + iv.lower();
        let hi_raw = *t + iv.upper();
        let duration = self.trace.duration;
        let (hi, hi_closed) = if hi_raw > duration {
            (duration, true)
        } else {
            (hi_raw, iv.upper_closed())
        };
        let lo_closed = iv.lower_closed();
        let nonempty = lo < hi || (lo == hi && lo_closed && hi_closed);
        if !nonempty {
            return None;
        }
        let times = &self.trace.times;
        let start = times.partition_point(|ts| if lo_closed { *ts < lo } else { *ts <= lo });
        let end = times.partition_point(|ts| if hi_closed { *ts <= hi } else { *ts < hi });
        let left = lo_closed.then_some(lo);
        let right = hi_closed.then_some(hi);
        Some((start..end.max(start), left, right))
    }

    fn eval(&self, f: &Formula, extras: &BTreeSet<Rational>) -> Result<NodeEval, MonitorError> {
        match f {
            Formula::True | Formula::False => {
                let v = matches!(f, Formula::True);
                Ok(NodeEval::from_values(
                    vec![v; self.trace.len()],
                    extras.iter().map(|t| (*t, v)).collect(),
                ))
            }
            Formula::Atom(atom) => {
                let samples = self.trace.atom_column(atom)?;
                let at_ts = samples
                    .iter()
                    .map(|v| TimedTrace::atom_truth(atom, v))
                    .collect();
                let extra = extras
                    .iter()
                    .map(|t| {
                        let idx = self.trace.sample_index(t);
                        (*t, TimedTrace::atom_truth(atom, &samples[idx]))
                    })
                    .collect();
                Ok(NodeEval::from_values(at_ts, extra))
            }
            Formula::Not(c) => {
                let child = self.eval(c, extras)?;
                Ok(NodeEval::from_values(
                    child.at_ts.iter().map(|v| !v).collect(),
                    child.extra.iter().map(|(t, v)| (*t, !v)).collect(),
                ))
            }
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
                let a = self.eval(l, extras)?;
                let b = self.eval(r, extras)?;
                let op = |x: bool, y: bool| match f {
                    Formula::And(..) => x && y,
                    Formula::Or(..) => x || y,
                    _ => !x || y,
                };
                let at_ts = a
                    .at_ts
                    .iter()
                    .zip(&b.at_ts)
                    .map(|(x, y)| op(*x, *y))
                    .collect();
                let extra = a
                    .extra
                    .iter()
                    .map(|(t, x)| (*t, op(*x, b.extra[t])))
                    .collect();
                Ok(NodeEval::from_values(at_ts, extra))
            }
            Formula::Eventually(iv, c) | Formula::Always(iv, c) => {
                // Collect the closed window endpoints the child must be
                // evaluated at, for every time this node is queried.
                let mut child_extras = BTreeSet::new();
                let mut request = |t: &Rational| {
                    if let Some((_, left, right)) = self.window(t, iv) {
                        for e in [left, right].into_iter().flatten() {
                            if !self.is_timestamp(&e) {
                                child_extras.insert(e);
                            }
                        }
                    }
                };
                for t in &self.trace.times {
                    request(t);
                }
                for t in extras {
                    request(t);
                }
                let child = self.eval(c, &child_extras)?;
                let is_eventually = matches!(f, Formula::Eventually(..));
                let query = |t: &Rational| -> bool {
                    match self.window(t, iv) {
                        // Vacuous window: no witness for eventually, nothing
                        // to violate for always.
                        None => !is_eventually,
                        Some((range, left, right)) => {
                            let inside = child.count_true(range.clone());
                            let mut any = inside > 0;
                            let mut all = inside as usize == range.len();
                            for e in [left, right].into_iter().flatten() {
                                let v = self.lookup(&child, &e);
                                any |= v;
                                all &= v;
                            }
                            if is_eventually {
                                any
                            } else {
                                all
                            }
                        }
                    }
                };
                let at_ts = self.trace.times.iter().map(&query).collect();
                let extra = extras.iter().map(|t| (*t, query(t))).collect();
                Ok(NodeEval::from_values(at_ts, extra))
            }
        }
    }
}

/// Evaluates `f` on the trace at time `t0` under piecewise-constant,
/// decision-point semantics. Implication is evaluated classically; threshold
/// predicates read the referenced variable directly.
pub fn evaluate(trace: &TimedTrace, f: &Formula, t0: &Rational) -> Result<bool, MonitorError> {
    if t0.is_negative() || *t0 > trace.duration() {
        return Err(MonitorError::TimeOutOfRange {
            t: format_rational(t0),
            duration: format_rational(&trace.duration()),
        });
    }
    let evaluator = Evaluator { trace };
    let mut extras = BTreeSet::new();
    if !evaluator.is_timestamp(t0) {
        extras.insert(*t0);
    }
    let root = evaluator.eval(f, &extras)?;
    Ok(evaluator.lookup(&root, t0))
}

/// Convenience: satisfaction at time zero.
pub fn satisfies(trace: &TimedTrace, f: &Formula) -> Result<bool, MonitorError> {
    evaluate(trace, f, &Rational::zero())
}

/// Maps a real-valued trace through an atom table: each atom becomes a 0/1
/// column that holds wherever the variable's value lies in the atom's
/// region. Change points are exactly the input timestamps.
pub fn abstract_trace(
    trace: &TimedTrace,
    table: &crate::predicate::AtomTable,
) -> Result<TimedTrace, MonitorError> {
    let mut columns = Vec::with_capacity(table.atoms.len());
    for atom in &table.atoms {
        let samples = trace
            .column(&atom.variable)
            .ok_or_else(|| MonitorError::UnknownVariable(atom.variable.clone()))?;
        let bits: Vec<Rational> = samples
            .iter()
            .map(|v| {
                if atom.region.contains(v) {
                    Rational::from_integer(1)
                } else {
                    Rational::zero()
                }
            })
            .collect();
        columns.push((atom.name.clone(), bits));
    }
    Ok(TimedTrace {
        id: trace.id.clone(),
        duration: trace.duration,
        times: trace.times.clone(),
        columns,
    })
}

/// True when the formula has at least one implication in positive polarity
/// and every such implication sits under a temporal operator.
pub fn classify_rr(f: &Formula) -> bool {
    let mut positive_implications = 0usize;
    let mut all_under_temporal = true;
    walk_rr(f, true, false, &mut positive_implications, &mut all_under_temporal);
    positive_implications >= 1 && all_under_temporal
}

fn walk_rr(f: &Formula, positive: bool, under_temporal: bool, count: &mut usize, ok: &mut bool) {
    match f {
        Formula::True | Formula::False | Formula::Atom(_) => {}
        Formula::Not(c) => walk_rr(c, !positive, under_temporal, count, ok),
        Formula::And(l, r) | Formula::Or(l, r) => {
            walk_rr(l, positive, under_temporal, count, ok);
            walk_rr(r, positive, under_temporal, count, ok);
        }
        Formula::Implies(l, r) => {
            if positive {
                *count += 1;
                *ok &= under_temporal;
            }
            // The antecedent flips polarity.
            walk_rr(l, !positive, under_temporal, count, ok);
            walk_rr(r, positive, under_temporal, count, ok);
        }
        Formula::Eventually(_, c) | Formula::Always(_, c) => {
            walk_rr(c, positive, true, count, ok);
        }
    }
}

/// A signal-vacuity verdict for one trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VacuityFinding {
    /// The antecedent of an implication never holds inside its effective
    /// interval; the trace satisfies the antecedent-failure mutation.
    AntecedentFailure {
        implication_path: Path,
        antecedent: Formula,
        effective: Interval,
        mutation: Formula,
    },
    /// The trace satisfies a literal-removal mutation of a conjunct. This is
    /// advisory: it flags which disjuncts carry the satisfaction, not
    /// necessarily a defect.
    MutationPass {
        occurrence: LiteralOccurrence,
        mutated: Formula,
    },
    /// Replacing this literal with `true` rescues a falsified formula, so
    /// its obligation is what the trace misses.
    FalsificationSource { occurrence: LiteralOccurrence },
}

impl VacuityFinding {
    pub fn kind(&self) -> &'static str {
        match self {
            VacuityFinding::AntecedentFailure { .. } => "AntecedentFailure",
            VacuityFinding::MutationPass { .. } => "MutationPass",
            VacuityFinding::FalsificationSource { .. } => "FalsificationSource",
        }
    }

    /// The mutated formula whose truth on the trace reproduces the finding,
    /// when the finding carries one.
    pub fn mutation(&self) -> Option<&Formula> {
        match self {
            VacuityFinding::AntecedentFailure { mutation, .. } => Some(mutation),
            VacuityFinding::MutationPass { mutated, .. } => Some(mutated),
            VacuityFinding::FalsificationSource { .. } => None,
        }
    }
}

impl fmt::Display for VacuityFinding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VacuityFinding::AntecedentFailure {
                antecedent,
                effective,
                mutation,
                ..
            } => write!(
                f,
                "antecedent failure: {antecedent} never holds in {effective}; trace satisfies {mutation}"
            ),
            VacuityFinding::MutationPass { occurrence, mutated } => write!(
                f,
                "literal removal: trace still satisfies {mutated} with {} removed",
                occurrence.literal_text()
            ),
            VacuityFinding::FalsificationSource { occurrence } => write!(
                f,
                "falsification source: obligation {} is what the trace misses",
                occurrence.literal_text()
            ),
        }
    }
}

/// Checks every positive-polarity implication of a request-response formula
/// for antecedent failure on the trace: the antecedent `a` of an implication
/// with effective interval `I` fails when the trace satisfies `G I (!a)`.
/// The formula must not be NNF-normalized first; implications are analyzed
/// as written. An empty result means the trace is not vacuous this way.
pub fn antecedent_failure_check(
    f: &Formula,
    trace: &TimedTrace,
) -> Result<Vec<VacuityFinding>, MonitorError> {
    if !classify_rr(f) {
        return Err(MonitorError::NotRequestResponse);
    }
    let ei = annotate_effective_intervals(f);
    let mut findings = Vec::new();
    for (path, node) in f.walk() {
        if !matches!(node, Formula::Implies(..)) || !is_positive_at(f, &path) {
            continue;
        }
        let mut antecedent_path = path.clone();
        antecedent_path.push(0);
        let antecedent = f.node_at(&antecedent_path).expect("implies has antecedent");
        let effective = *ei.get(&antecedent_path).expect("annotated");
        let mutation = Formula::always(effective, Formula::not(antecedent.clone()));
        if evaluate(trace, &mutation, &Rational::zero())? {
            findings.push(VacuityFinding::AntecedentFailure {
                implication_path: path,
                antecedent: antecedent.clone(),
                effective,
                mutation,
            });
        }
    }
    Ok(findings)
}

/// Polarity of the node at `path`: positive iff it sits under an even
/// number of polarity flips (negations and implication antecedents).
fn is_positive_at(f: &Formula, path: &[usize]) -> bool {
    let mut positive = true;
    let mut node = f;
    for &idx in path {
        match node {
            Formula::Not(_) => positive = !positive,
            Formula::Implies(_, _) if idx == 0 => positive = !positive,
            _ => {}
        }
        node = node.children()[idx];
    }
    positive
}

/// Literal-occurrence-removal check: for each root conjunct of the NNF, and
/// each literal occurrence, records a pass when the trace satisfies the
/// conjunct with that occurrence replaced by `false`. Skipped (empty result)
/// for formulas without a disjunction in NNF, where every such mutation is
/// trivially false.
pub fn literal_removal_check(
    f: &Formula,
    trace: &TimedTrace,
) -> Result<Vec<VacuityFinding>, MonitorError> {
    let nnf = to_nnf(f);
    if !nnf.contains_or() {
        return Ok(Vec::new());
    }
    let mut findings = Vec::new();
    for (conjunct_path, conjunct) in nnf.flatten_and_with_paths() {
        for occurrence in lit_occurrences(conjunct).expect("nnf") {
            let mutated = substitute_occurrence(conjunct, &occurrence, Replacement::Bottom)
                .expect("occurrence from the same formula");
            if evaluate(trace, &mutated, &Rational::zero())? {
                findings.push(VacuityFinding::MutationPass {
                    occurrence: occurrence.prefixed(&conjunct_path),
                    mutated,
                });
            }
        }
    }
    Ok(findings)
}

/// For a falsified NNF formula, finds the literals inside conjunctions whose
/// obligations caused the falsification: those whose replacement by `true`
/// makes the trace satisfy the formula.
pub fn falsification_localize(
    f: &Formula,
    trace: &TimedTrace,
) -> Result<Vec<VacuityFinding>, MonitorError> {
    let nnf = to_nnf(f);
    if evaluate(trace, &nnf, &Rational::zero())? {
        return Err(MonitorError::TraceSatisfiesFormula);
    }
    let mut findings = Vec::new();
    for occurrence in lit_occurrences(&nnf).expect("nnf") {
        if !has_and_ancestor(&nnf, &occurrence.path) {
            continue;
        }
        let mutated = substitute_occurrence(&nnf, &occurrence, Replacement::Top).expect("valid");
        if evaluate(trace, &mutated, &Rational::zero())? {
            findings.push(VacuityFinding::FalsificationSource { occurrence });
        }
    }
    Ok(findings)
}

fn has_and_ancestor(f: &Formula, path: &[usize]) -> bool {
    let mut node = f;
    for &idx in path {
        if matches!(node, Formula::And(..)) {
            return true;
        }
        node = node.children()[idx];
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::predicate::{generate_mutex_predicates, PredicateAtom};
    use crate::rational::{rat, ratio};

    fn trace(header: &str, rows: &[&str]) -> TimedTrace {
        let mut text = format!("time,{header}\n");
        for row in rows {
            text.push_str(row);
            text.push('\n');
        }
        TimedTrace::from_csv("test", &text, None).unwrap()
    }

    #[test]
    fn constant_signal_satisfies_the_tautology_shape() {
        let t = trace("p1", &["0,1", "60,1"]);
        let f = parse("F[0,30](p1 -> G[0,20]p1)").unwrap();
        assert!(evaluate(&t, &f, &rat(0)).unwrap());
        assert!(evaluate(&t, &parse("true").unwrap(), &rat(17)).unwrap());
    }

    #[test]
    fn window_inspection_matches_hand_evaluation() {
        // p false on [0,5), true on [5,10].
        let t = trace("p", &["0,0", "5,1", "10,1"]);
        assert!(!evaluate(&t, &parse("F[0,4]p").unwrap(), &rat(0)).unwrap());
        assert!(evaluate(&t, &parse("F[0,6]p").unwrap(), &rat(0)).unwrap());
        // Window clipped at the duration: G over an empty window is true.
        assert!(evaluate(&t, &parse("G[11,12]p").unwrap(), &rat(0)).unwrap());
        assert!(!evaluate(&t, &parse("F[11,12]p").unwrap(), &rat(0)).unwrap());
    }

    #[test]
    fn open_left_window_skips_the_endpoint() {
        // p true only at the sample point 5.
        let t = trace("p", &["0,0", "5,1", "6,0", "10,0"]);
        // (5 + (0, 1]] = (5, 6]: decision points are 6 only; p@6 = false.
        assert!(!evaluate(&t, &parse("F(0,1]p").unwrap(), &rat(5)).unwrap());
        // [5, 6): decision points 5; p@5 = true.
        assert!(evaluate(&t, &parse("F[0,1)p").unwrap(), &rat(5)).unwrap());
    }

    #[test]
    fn out_of_range_and_unknown_atoms_error() {
        let t = trace("p", &["0,1"]);
        assert!(matches!(
            evaluate(&t, &parse("q").unwrap(), &rat(0)),
            Err(MonitorError::UnknownAtom(_))
        ));
        assert!(matches!(
            evaluate(&t, &parse("p").unwrap(), &rat(5)),
            Err(MonitorError::TimeOutOfRange { .. })
        ));
    }

    #[test]
    fn predicates_evaluate_directly_on_signals() {
        let t = trace("speed", &["0,90", "5,110", "10,70"]);
        assert!(evaluate(&t, &parse("F[0,10](speed>100)").unwrap(), &rat(0)).unwrap());
        assert!(!evaluate(&t, &parse("G[0,10](speed>80)").unwrap(), &rat(0)).unwrap());
    }

    #[test]
    fn abstraction_respects_regions_and_mutex() {
        let preds = [
            PredicateAtom::from_pred_atom(&Atom::pred("speed", crate::formula::Cmp::Gt, rat(100)))
                .unwrap(),
            PredicateAtom::from_pred_atom(&Atom::pred("speed", crate::formula::Cmp::Gt, rat(80)))
                .unwrap(),
        ];
        let table = generate_mutex_predicates(&preds);
        // speed = 110 throughout: a holds, c never.
        let t = trace("speed", &["0,110", "10,110"]);
        let abstracted = abstract_trace(&t, &table).unwrap();
        assert!(evaluate(&abstracted, &parse("G[0,10]a").unwrap(), &rat(0)).unwrap());
        assert!(evaluate(&abstracted, &parse("G[0,10]!c").unwrap(), &rat(0)).unwrap());

        // speed 90 then 110: c then a, never both.
        let t2 = trace("speed", &["0,90", "5,110", "10,110"]);
        let ab2 = abstract_trace(&t2, &table).unwrap();
        assert!(evaluate(&ab2, &parse("G[0,10]!(a && c)").unwrap(), &rat(0)).unwrap());
        assert!(evaluate(&ab2, &parse("c").unwrap(), &rat(0)).unwrap());
        assert!(evaluate(&ab2, &parse("a").unwrap(), &rat(7)).unwrap());

        // Empty table: no columns.
        let empty = abstract_trace(&t, &generate_mutex_predicates(&[])).unwrap();
        assert_eq!(empty.variables().count(), 0);
    }

    #[test]
    fn request_response_classification() {
        assert!(classify_rr(&parse("G[0,5](req -> F[0,10]ack)").unwrap()));
        assert!(!classify_rr(&parse("p -> q").unwrap()));
        assert!(classify_rr(
            &parse("G[1,2](F[3,5]b -> G[4,6](c -> F[0,2]d))").unwrap()
        ));
        // No implication at all.
        assert!(!classify_rr(&parse("G[0,5](p && q)").unwrap()));
        // Implication under a negation is not in positive polarity.
        assert!(!classify_rr(&parse("!(G[0,5](p -> F[0,1]q)) && p").unwrap()));
    }

    #[test]
    fn antecedent_failure_on_constant_gear() {
        let f = parse("G[0,27.5]((g2 && F(0,0.04]g1) -> G[0,2.5](!g2))").unwrap();
        // gear stuck at 3: g1 and g2 never hold.
        let t = trace("g1,g2", &["0,0,0", "30,0,0"]);
        let findings = antecedent_failure_check(&f, &t).unwrap();
        assert_eq!(findings.len(), 1);
        match &findings[0] {
            VacuityFinding::AntecedentFailure { mutation, effective, .. } => {
                assert_eq!(effective.to_string(), "[0,27.5]");
                assert_eq!(mutation.to_string(), "G[0,27.5]!(g2 && F(0,0.04]g1)");
                assert!(evaluate(&t, mutation, &rat(0)).unwrap());
            }
            other => panic!("unexpected finding {other:?}"),
        }
    }

    #[test]
    fn antecedent_present_means_no_finding() {
        let f = parse("G[0,5](req -> F[0,10]ack)").unwrap();
        let t = trace("req,ack", &["0,0,0", "2,1,0", "3,0,1", "15,0,0"]);
        assert!(antecedent_failure_check(&f, &t).unwrap().is_empty());
        // Not request-response: error.
        assert!(matches!(
            antecedent_failure_check(&parse("p -> q").unwrap(), &t),
            Err(MonitorError::NotRequestResponse)
        ));
    }

    #[test]
    fn nested_implications_each_report() {
        let f = parse("G[1,2](F[3,5]b -> G[4,6](c -> F[0,2]d))").unwrap();
        // b occurs only at t=9 (outside [1,2]+[3,5] windows), c never.
        let t = trace("b,c,d", &["0,0,0,0", "9,1,0,0", "9.5,0,0,0", "10,0,0,0"]);
        let findings = antecedent_failure_check(&f, &t).unwrap();
        assert_eq!(findings.len(), 2);
        let mutations: Vec<String> = findings
            .iter()
            .map(|v| match v {
                VacuityFinding::AntecedentFailure { mutation, .. } => mutation.to_string(),
                other => panic!("unexpected {other:?}"),
            })
            .collect();
        assert_eq!(mutations, vec!["G[1,2]!F[3,5]b", "G[5,8]!c"]);
        for finding in &findings {
            assert!(evaluate(&t, finding.mutation().unwrap(), &rat(0)).unwrap());
        }
    }

    #[test]
    fn literal_removal_flags_unused_disjuncts() {
        let f = parse("F[0,5](a || b)").unwrap();
        let t = trace("a,b", &["0,0,0", "1,1,0", "6,1,0"]);
        let findings = literal_removal_check(&f, &t).unwrap();
        assert_eq!(findings.len(), 1);
        match &findings[0] {
            VacuityFinding::MutationPass { occurrence, mutated } => {
                assert_eq!(occurrence.atom.name(), "b");
                assert_eq!(mutated.to_string(), "F[0,5](a || false)");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn literal_removal_skips_conjunction_only_formulas() {
        let f = parse("F[0,5](a && b)").unwrap();
        let t = trace("a,b", &["0,1,1", "6,1,1"]);
        assert!(literal_removal_check(&f, &t).unwrap().is_empty());
    }

    #[test]
    fn literal_removal_on_nested_disjunction() {
        let f = parse("p || F[0,10]p").unwrap();
        let t = trace("p", &["0,1", "10,1"]);
        let findings = literal_removal_check(&f, &t).unwrap();
        assert_eq!(findings.len(), 2, "both mutations hold on this trace");
    }

    #[test]
    fn falsification_source_examples() {
        let f = parse("F[0,4](a && F[0,4]b)").unwrap();
        // b reachable, a never: a is the source.
        let t = trace("a,b", &["0,0,0", "2,0,1", "8,0,1"]);
        let findings = falsification_localize(&f, &t).unwrap();
        assert_eq!(findings.len(), 1);
        match &findings[0] {
            VacuityFinding::FalsificationSource { occurrence } => {
                assert_eq!(occurrence.atom.name(), "a")
            }
            other => panic!("unexpected {other:?}"),
        }

        // a holds, b never: b is the source.
        let t2 = trace("a,b", &["0,1,0", "8,1,0"]);
        let findings2 = falsification_localize(&f, &t2).unwrap();
        assert_eq!(findings2.len(), 1);
        match &findings2[0] {
            VacuityFinding::FalsificationSource { occurrence } => {
                assert_eq!(occurrence.atom.name(), "b")
            }
            other => panic!("unexpected {other:?}"),
        }

        // Neither holds: no single substitution rescues satisfaction.
        let f3 = parse("a && b").unwrap();
        let t3 = trace("a,b", &["0,0,0"]);
        assert!(falsification_localize(&f3, &t3).unwrap().is_empty());

        // Satisfied trace is a precondition violation.
        let t4 = trace("a,b", &["0,1,1"]);
        assert!(matches!(
            falsification_localize(&f3, &t4),
            Err(MonitorError::TraceSatisfiesFormula)
        ));
    }

    #[test]
    fn csv_round_trip_and_validation() {
        let t = trace("speed,g1", &["0,90.5,0", "2.5,110,1"]);
        let csv = t.to_csv();
        let back = TimedTrace::from_csv("test", &csv, None).unwrap();
        assert_eq!(t, back);
        assert_eq!(t.duration(), ratio(5, 2));

        assert!(TimedTrace::from_csv("bad", "time,p\n1,0\n", None).is_err());
        assert!(TimedTrace::from_csv("bad", "time,p\n0,0\n0,1\n", None).is_err());
        assert!(TimedTrace::from_csv("bad", "p,time\n0,0\n", None).is_err());
        assert!(TimedTrace::from_csv("bad", "time,p\n0,0,5\n", None).is_err());
        // Duration override must not cut samples off.
        assert!(TimedTrace::from_csv("bad", "time,p\n0,0\n5,1\n", Some(rat(3))).is_err());
        assert!(TimedTrace::from_csv("ok", "time,p\n0,0\n5,1\n", Some(rat(8))).is_ok());
    }
}
