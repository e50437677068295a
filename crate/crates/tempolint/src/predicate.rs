//! Boolean abstraction of threshold predicates.
//!
//! Overlapping predicates over the same variable (`speed>100`, `speed>80`)
//! cannot be mapped to independent propositions without losing their logical
//! dependency. This module decomposes each variable's predicates into
//! pairwise-disjoint cells, rewrites every original predicate as a
//! disjunction of cell atoms, and records per-variable mutual-exclusion
//! groups for the satisfiability engine.
//!
//! Regions are kept as sorted disjoint lists of rational intervals, so
//! intersection and difference are exact and the decomposition fixpoint
//! terminates on the finite endpoint partition.

use crate::formula::{Atom, Cmp, Formula};
use crate::rational::{format_rational, Rational};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

/// One endpoint of a real interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    Unbounded,
    Open(Rational),
    Closed(Rational),
}

/// A nonempty interval of reals, possibly unbounded on either side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RealInterval {
    pub lo: Endpoint,
    pub hi: Endpoint,
}

impl RealInterval {
    fn is_valid(&self) -> bool {
        match (self.lo, self.hi) {
            (Endpoint::Unbounded, _) | (_, Endpoint::Unbounded) => true,
            (Endpoint::Closed(a), Endpoint::Closed(b)) => a <= b,
            (Endpoint::Closed(a), Endpoint::Open(b))
            | (Endpoint::Open(a), Endpoint::Closed(b))
            | (Endpoint::Open(a), Endpoint::Open(b)) => a < b,
        }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let above = match self.lo {
            Endpoint::Unbounded => true,
            Endpoint::Open(a) => *x > a,
            Endpoint::Closed(a) => *x >= a,
        };
        let below = match self.hi {
            Endpoint::Unbounded => true,
            Endpoint::Open(b) => *x < b,
            Endpoint::Closed(b) => *x <= b,
        };
        above && below
    }

    fn intersect(&self, other: &RealInterval) -> Option<RealInterval> {
        let lo = max_lo(self.lo, other.lo);
        let hi = min_hi(self.hi, other.hi);
        let candidate = RealInterval { lo, hi };
        candidate.is_valid().then_some(candidate)
    }

    /// True when `self` ends exactly where `other` starts with no gap, so
    /// their union is a single interval.
    fn glues_onto(&self, other: &RealInterval) -> bool {
        match (self.hi, other.lo) {
            (Endpoint::Closed(a), Endpoint::Open(b)) | (Endpoint::Open(a), Endpoint::Closed(b)) => {
                a == b
            }
            (Endpoint::Closed(a), Endpoint::Closed(b)) => a == b,
            _ => false,
        }
    }
}

fn max_lo(a: Endpoint, b: Endpoint) -> Endpoint {
    match (a, b) {
        (Endpoint::Unbounded, x) | (x, Endpoint::Unbounded) => x,
        (Endpoint::Closed(x), Endpoint::Closed(y)) => Endpoint::Closed(x.max(y)),
        (Endpoint::Open(x), Endpoint::Open(y)) => Endpoint::Open(x.max(y)),
        (Endpoint::Closed(c), Endpoint::Open(o)) | (Endpoint::Open(o), Endpoint::Closed(c)) => {
            if o >= c {
                Endpoint::Open(o)
            } else {
                Endpoint::Closed(c)
            }
        }
    }
}

fn min_hi(a: Endpoint, b: Endpoint) -> Endpoint {
    match (a, b) {
        (Endpoint::Unbounded, x) | (x, Endpoint::Unbounded) => x,
        (Endpoint::Closed(x), Endpoint::Closed(y)) => Endpoint::Closed(x.min(y)),
        (Endpoint::Open(x), Endpoint::Open(y)) => Endpoint::Open(x.min(y)),
        (Endpoint::Closed(c), Endpoint::Open(o)) | (Endpoint::Open(o), Endpoint::Closed(c)) => {
            if o <= c {
                Endpoint::Open(o)
            } else {
                Endpoint::Closed(c)
            }
        }
    }
}

/// Upper endpoint of an interval -> lower endpoint of the piece that starts
/// right after it in the complement.
fn complement_of_hi(hi: Endpoint) -> Option<Endpoint> {
    match hi {
        Endpoint::Unbounded => None,
        Endpoint::Open(x) => Some(Endpoint::Closed(x)),
        Endpoint::Closed(x) => Some(Endpoint::Open(x)),
    }
}

fn complement_of_lo(lo: Endpoint) -> Option<Endpoint> {
    match lo {
        Endpoint::Unbounded => None,
        Endpoint::Open(x) => Some(Endpoint::Closed(x)),
        Endpoint::Closed(x) => Some(Endpoint::Open(x)),
    }
}

fn lo_sort_key(lo: Endpoint) -> (i8, Rational, i8) {
    match lo {
        Endpoint::Unbounded => (0, Rational::from_integer(0), 0),
        Endpoint::Closed(x) => (1, x, 0),
        Endpoint::Open(x) => (1, x, 1),
    }
}

/// A finite union of pairwise-disjoint intervals, kept sorted and glued.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Region {
    parts: Vec<RealInterval>,
}

impl Region {
    pub fn empty() -> Region {
        Region { parts: Vec::new() }
    }

    pub fn from_interval(interval: RealInterval) -> Region {
        debug_assert!(interval.is_valid());
        Region {
            parts: vec![interval],
        }
    }

    /// The set where a threshold predicate holds.
    pub fn from_threshold(cmp: Cmp, threshold: Rational) -> Region {
        let interval = match cmp {
            Cmp::Gt => RealInterval {
                lo: Endpoint::Open(threshold),
                hi: Endpoint::Unbounded,
            },
            Cmp::Ge => RealInterval {
                lo: Endpoint::Closed(threshold),
                hi: Endpoint::Unbounded,
            },
            Cmp::Lt => RealInterval {
                lo: Endpoint::Unbounded,
                hi: Endpoint::Open(threshold),
            },
            Cmp::Le => RealInterval {
                lo: Endpoint::Unbounded,
                hi: Endpoint::Closed(threshold),
            },
        };
        Region::from_interval(interval)
    }

    fn normalized(mut parts: Vec<RealInterval>) -> Region {
        parts.sort_by(|a, b| lo_sort_key(a.lo).cmp(&lo_sort_key(b.lo)));
        let mut merged: Vec<RealInterval> = Vec::new();
        for part in parts {
            if let Some(last) = merged.last_mut() {
                if last.intersect(&part).is_some() || last.glues_onto(&part) {
                    // Sorting fixed the lower bound; keep the later upper.
                    if min_hi(last.hi, part.hi) == last.hi {
                        last.hi = part.hi;
                    }
                    continue;
                }
            }
            merged.push(part);
        }
        Region { parts: merged }
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn parts(&self) -> &[RealInterval] {
        &self.parts
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.parts.iter().any(|p| p.contains(x))
    }

    pub fn intersect(&self, other: &Region) -> Region {
        let mut parts = Vec::new();
        for a in &self.parts {
            for b in &other.parts {
                if let Some(c) = a.intersect(b) {
                    parts.push(c);
                }
            }
        }
        Region::normalized(parts)
    }

    pub fn union(&self, other: &Region) -> Region {
        let mut parts = self.parts.clone();
        parts.extend(other.parts.iter().copied());
        Region::normalized(parts)
    }

    /// Complement within the full real line.
    pub fn complement(&self) -> Region {
        let mut parts = Vec::new();
        let mut lo = Endpoint::Unbounded;
        for part in &self.parts {
            if let Some(hi) = complement_of_lo(part.lo) {
                let gap = RealInterval { lo, hi };
                if gap.is_valid() {
                    parts.push(gap);
                }
            }
            match complement_of_hi(part.hi) {
                Some(next_lo) => lo = next_lo,
                None => return Region::normalized(parts),
            }
        }
        parts.push(RealInterval {
            lo,
            hi: Endpoint::Unbounded,
        });
        Region::normalized(parts)
    }

    pub fn difference(&self, other: &Region) -> Region {
        self.intersect(&other.complement())
    }

    pub fn overlaps(&self, other: &Region) -> bool {
        !self.intersect(other).is_empty()
    }

    /// Lower endpoint of the leftmost interval; used for deterministic cell
    /// ordering. Unbounded-below regions sort first, empty ones last.
    fn sort_key(&self) -> (i8, Rational, i8) {
        self.parts
            .first()
            .map(|p| lo_sort_key(p.lo))
            .unwrap_or((2, Rational::from_integer(0), 0))
    }

    /// Probe points on, around and between the region's endpoints; enough to
    /// distinguish regions built over the same endpoint set.
    pub fn probe_points(&self) -> Vec<Rational> {
        let mut out = Vec::new();
        let one = Rational::from_integer(1);
        let half = Rational::new(1, 2);
        for part in &self.parts {
            match (part.lo, part.hi) {
                (Endpoint::Unbounded, Endpoint::Unbounded) => out.push(Rational::from_integer(0)),
                (Endpoint::Unbounded, Endpoint::Open(b) | Endpoint::Closed(b)) => {
                    out.extend([b - one, b, b + one]);
                }
                (Endpoint::Open(a) | Endpoint::Closed(a), Endpoint::Unbounded) => {
                    out.extend([a - one, a, a + one]);
                }
                (Endpoint::Open(a) | Endpoint::Closed(a), Endpoint::Open(b) | Endpoint::Closed(b)) => {
                    out.extend([a - one, a, (a + b) * half, b, b + one]);
                }
            }
        }
        out
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "{{}}");
        }
        for (i, part) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, " u ")?;
            }
            match part.lo {
                Endpoint::Unbounded => write!(f, "(-inf,")?,
                Endpoint::Open(x) => write!(f, "({},", format_rational(&x))?,
                Endpoint::Closed(x) => write!(f, "[{},", format_rational(&x))?,
            }
            match part.hi {
                Endpoint::Unbounded => write!(f, "inf)")?,
                Endpoint::Open(x) => write!(f, "{})", format_rational(&x))?,
                Endpoint::Closed(x) => write!(f, "{}]", format_rational(&x))?,
            }
        }
        Ok(())
    }
}

/// An atom with the region of variable values where it holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredicateAtom {
    pub name: String,
    pub variable: String,
    pub region: Region,
}

impl PredicateAtom {
    pub fn new(name: impl Into<String>, variable: impl Into<String>, region: Region) -> Self {
        PredicateAtom {
            name: name.into(),
            variable: variable.into(),
            region,
        }
    }

    /// The atom induced by a threshold predicate, named by its text.
    pub fn from_pred_atom(atom: &Atom) -> Option<PredicateAtom> {
        match atom {
            Atom::Pred {
                variable,
                cmp,
                threshold,
            } => Some(PredicateAtom {
                name: atom.name(),
                variable: variable.clone(),
                region: Region::from_threshold(*cmp, *threshold),
            }),
            Atom::Prop(_) => None,
        }
    }
}

/// Atoms over one variable whose regions are pairwise disjoint; at most one
/// can hold at any time instant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MutexGroup {
    pub variable: String,
    pub members: Vec<String>,
}

/// Result of predicate decomposition: the disjoint atoms, the rewrite of
/// each original predicate as a disjunction of atoms, and the mutex groups.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AtomTable {
    pub atoms: Vec<PredicateAtom>,
    /// Original predicate text -> names of the atoms covering it, in atom
    /// allocation order.
    pub rewrites: BTreeMap<String, Vec<String>>,
    pub mutex: Vec<MutexGroup>,
}

impl AtomTable {
    pub fn atom(&self, name: &str) -> Option<&PredicateAtom> {
        self.atoms.iter().find(|a| a.name == name)
    }

    pub fn mutex_groups(&self) -> Vec<Vec<String>> {
        self.mutex.iter().map(|g| g.members.clone()).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let atoms: Vec<serde_json::Value> = self
            .atoms
            .iter()
            .map(|a| {
                let region: Vec<serde_json::Value> = a
                    .region
                    .parts()
                    .iter()
                    .map(|p| {
                        let (lo, lo_closed) = match p.lo {
                            Endpoint::Unbounded => (serde_json::Value::Null, false),
                            Endpoint::Open(x) => (rational_json(&x), false),
                            Endpoint::Closed(x) => (rational_json(&x), true),
                        };
                        let (hi, hi_closed) = match p.hi {
                            Endpoint::Unbounded => (serde_json::Value::Null, false),
                            Endpoint::Open(x) => (rational_json(&x), false),
                            Endpoint::Closed(x) => (rational_json(&x), true),
                        };
                        serde_json::json!([lo, hi, lo_closed, hi_closed])
                    })
                    .collect();
                serde_json::json!({
                    "name": a.name,
                    "variable": a.variable,
                    "region": region,
                })
            })
            .collect();
        let rewrites: BTreeMap<String, String> = self
            .rewrites
            .iter()
            .map(|(pred, atoms)| (pred.clone(), atoms.join("|")))
            .collect();
        serde_json::json!({ "atoms": atoms, "rewrites": rewrites, "mutex": self.mutex_groups() })
    }
}

fn rational_json(value: &Rational) -> serde_json::Value {
    if value.is_integer() {
        serde_json::json!(value.to_integer())
    } else {
        serde_json::json!(format_rational(value))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecomposeError {
    #[error("predicates constrain different variables: {0} vs {1}")]
    VariableMismatch(String, String),
    #[error("regions are disjoint; nothing to decompose")]
    DisjointRegions,
    #[error("unknown predicate `{0}` (not in the atom table)")]
    UnknownPredicate(String),
}

/// Splits two overlapping same-variable atoms into the nonempty cells among
/// intersection and the two differences. The union of the results equals the
/// union of the inputs; empty differences are dropped.
pub fn decompose_pair(
    p1: &PredicateAtom,
    p2: &PredicateAtom,
) -> Result<Vec<PredicateAtom>, DecomposeError> {
    if p1.variable != p2.variable {
        return Err(DecomposeError::VariableMismatch(
            p1.variable.clone(),
            p2.variable.clone(),
        ));
    }
    if !p1.region.overlaps(&p2.region) {
        return Err(DecomposeError::DisjointRegions);
    }
    let pieces = [
        p1.region.intersect(&p2.region),
        p1.region.difference(&p2.region),
        p2.region.difference(&p1.region),
    ];
    Ok(pieces
        .into_iter()
        .filter(|r| !r.is_empty())
        .map(|region| {
            PredicateAtom::new(
                format!("{}@{}", p1.variable, region),
                p1.variable.clone(),
                region,
            )
        })
        .collect())
}

/// Decomposes a set of predicate atoms into mutually exclusive cells,
/// rewrites every original predicate as a disjunction of cells, and records
/// the mutex groups.
///
/// Naming is deterministic: every input predicate reserves one name slot in
/// input order (`a`, `b`, `c`, ...); an input whose region survives as
/// exactly one cell keeps its reserved name, and the fresh cells produced by
/// decomposition take names after the reserved block, ordered by variable
/// (first seen) and region lower endpoint.
pub fn generate_mutex_predicates(predicates: &[PredicateAtom]) -> AtomTable {
    let mut variables: Vec<String> = Vec::new();
    for p in predicates {
        if !variables.contains(&p.variable) {
            variables.push(p.variable.clone());
        }
    }

    // Fixpoint decomposition per variable.
    let mut cells_by_var: BTreeMap<String, Vec<Region>> = BTreeMap::new();
    for var in &variables {
        let mut cells: Vec<Region> = Vec::new();
        for p in predicates.iter().filter(|p| &p.variable == var) {
            if !cells.contains(&p.region) {
                cells.push(p.region.clone());
            }
        }
        loop {
            let mut split = None;
            'outer: for i in 0..cells.len() {
                for j in i + 1..cells.len() {
                    if cells[i].overlaps(&cells[j]) {
                        split = Some((i, j));
                        break 'outer;
                    }
                }
            }
            let Some((i, j)) = split else { break };
            let a = cells[i].clone();
            let b = cells[j].clone();
            // Remove the later index first so the earlier stays valid.
            cells.remove(j);
            cells.remove(i);
            for piece in [a.intersect(&b), a.difference(&b), b.difference(&a)] {
                if !piece.is_empty() && !cells.contains(&piece) {
                    cells.push(piece);
                }
            }
        }
        cells.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        cells_by_var.insert(var.clone(), cells);
    }

    // Assign names: reserved block for the inputs, fresh cells afterwards.
    let mut atoms: Vec<PredicateAtom> = Vec::new();
    let mut named: Vec<(String, Region, String)> = Vec::new();
    let find_name = |named: &[(String, Region, String)], var: &str, region: &Region| {
        named
            .iter()
            .find(|(v, r, _)| v == var && r == region)
            .map(|(_, _, n)| n.clone())
    };
    for (idx, p) in predicates.iter().enumerate() {
        let survives = cells_by_var[&p.variable].contains(&p.region);
        if survives && find_name(&named, &p.variable, &p.region).is_none() {
            let name = letter_name(idx);
            named.push((p.variable.clone(), p.region.clone(), name.clone()));
            atoms.push(PredicateAtom::new(name, p.variable.clone(), p.region.clone()));
        }
    }
    let mut next = predicates.len();
    for var in &variables {
        for cell in &cells_by_var[var] {
            if find_name(&named, var, cell).is_none() {
                let name = letter_name(next);
                next += 1;
                named.push((var.clone(), cell.clone(), name.clone()));
                atoms.push(PredicateAtom::new(name, var.clone(), cell.clone()));
            }
        }
    }

    // Rewrite each original predicate as the disjunction of its cells. The
    // cells partition the variable's space, so a cell is either inside the
    // predicate's region or disjoint from it.
    let mut rewrites = BTreeMap::new();
    for p in predicates {
        let names: Vec<String> = atoms
            .iter()
            .filter(|a| a.variable == p.variable && a.region.overlaps(&p.region))
            .map(|a| a.name.clone())
            .collect();
        rewrites.insert(p.name.clone(), names);
    }

    // Mutex groups: one per variable that split into several cells.
    let mut mutex = Vec::new();
    for var in &variables {
        let members: Vec<String> = atoms
            .iter()
            .filter(|a| &a.variable == var)
            .map(|a| a.name.clone())
            .collect();
        if members.len() >= 2 {
            mutex.push(MutexGroup {
                variable: var.clone(),
                members,
            });
        }
    }

    AtomTable {
        atoms,
        rewrites,
        mutex,
    }
}

/// Spreadsheet-style name for slot `idx`: a..z, aa, ab, ...
fn letter_name(idx: usize) -> String {
    let mut n = idx + 1;
    let mut out = Vec::new();
    while n > 0 {
        n -= 1;
        out.push(b'a' + (n % 26) as u8);
        n /= 26;
    }
    out.reverse();
    String::from_utf8(out).unwrap()
}

/// Builds the atom table for every threshold predicate appearing in `f`,
/// in first-appearance order.
pub fn table_for_formula(f: &Formula) -> AtomTable {
    let mut preds: Vec<PredicateAtom> = Vec::new();
    for (_, node) in f.walk() {
        if let Formula::Atom(atom) = node {
            if let Some(p) = PredicateAtom::from_pred_atom(atom) {
                if !preds.iter().any(|q| q.name == p.name) {
                    preds.push(p);
                }
            }
        }
    }
    generate_mutex_predicates(&preds)
}

/// Replaces every predicate leaf with the disjunction of its atoms; all
/// other structure is untouched.
pub fn abstract_formula(f: &Formula, table: &AtomTable) -> Result<Formula, DecomposeError> {
    Ok(match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Atom(atom) => {
            if atom.is_pred() {
                let names = table
                    .rewrites
                    .get(&atom.name())
                    .ok_or_else(|| DecomposeError::UnknownPredicate(atom.name()))?;
                Formula::disjunction(names.iter().map(|n| Formula::atom(n.clone())).collect())
            } else {
                f.clone()
            }
        }
        Formula::Not(c) => Formula::not(abstract_formula(c, table)?),
        Formula::And(l, r) => Formula::and(abstract_formula(l, table)?, abstract_formula(r, table)?),
        Formula::Or(l, r) => Formula::or(abstract_formula(l, table)?, abstract_formula(r, table)?),
        Formula::Implies(l, r) => {
            Formula::implies(abstract_formula(l, table)?, abstract_formula(r, table)?)
        }
        Formula::Eventually(iv, c) => Formula::eventually(*iv, abstract_formula(c, table)?),
        Formula::Always(iv, c) => Formula::always(*iv, abstract_formula(c, table)?),
    })
}
