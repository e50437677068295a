//! A small conflict-driven clause-learning SAT solver.
//!
//! Two watched literals per clause, first-UIP learning, non-chronological
//! backjumping. Decisions follow a fixed variable order (index ascending,
//! true first), with no restarts and no clause deletion: instances here are
//! small and the fixed order keeps witnesses and cores reproducible run to
//! run.

use super::cnf::{Cnf, Lit, Var};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolverStats {
    pub decisions: u64,
    pub propagations: u64,
    pub conflicts: u64,
    pub learned: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveResult {
    Sat(Vec<bool>),
    Unsat,
}

impl SolveResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SolveResult::Sat(_))
    }
}

pub struct Solver {
    num_vars: usize,
    clauses: Vec<Vec<Lit>>,
    watches: Vec<Vec<usize>>,
    assign: Vec<Option<bool>>,
    level: Vec<u32>,
    reason: Vec<Option<usize>>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    queue_head: usize,
    stats: SolverStats,
}

impl Solver {
    pub fn new(cnf: &Cnf) -> Solver {
        Solver {
            num_vars: cnf.num_vars,
            clauses: Vec::with_capacity(cnf.clauses.len()),
            watches: vec![Vec::new(); cnf.num_vars * 2],
            assign: vec![None; cnf.num_vars],
            level: vec![0; cnf.num_vars],
            reason: vec![None; cnf.num_vars],
            trail: Vec::new(),
            trail_lim: Vec::new(),
            queue_head: 0,
            stats: SolverStats::default(),
        }
    }

    fn value(&self, lit: Lit) -> Option<bool> {
        self.assign[lit.var()].map(|v| v == lit.is_positive())
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    fn enqueue(&mut self, lit: Lit, reason: Option<usize>) -> bool {
        match self.value(lit) {
            Some(true) => true,
            Some(false) => false,
            None => {
                self.assign[lit.var()] = Some(lit.is_positive());
                self.level[lit.var()] = self.decision_level();
                self.reason[lit.var()] = reason;
                self.trail.push(lit);
                self.stats.propagations += 1;
                true
            }
        }
    }

    fn attach_clause(&mut self, idx: usize) {
        let clause = &self.clauses[idx];
        debug_assert!(clause.len() >= 2);
        self.watches[clause[0].negated().index()].push(idx);
        self.watches[clause[1].negated().index()].push(idx);
    }

    /// Propagates until fixpoint; returns the index of a conflicting clause
    /// if one arises.
    fn propagate(&mut self) -> Option<usize> {
        while self.queue_head < self.trail.len() {
            let lit = self.trail[self.queue_head];
            self.queue_head += 1;
            // Clauses watching `!lit` may have become unit or false.
            let watchers = std::mem::take(&mut self.watches[lit.index()]);
            let mut keep = Vec::with_capacity(watchers.len());
            let mut conflict = None;
            for (pos, &ci) in watchers.iter().enumerate() {
                let false_lit = lit.negated();
                // Normalize so the falsified watcher sits at position 1.
                if self.clauses[ci][0] == false_lit {
                    self.clauses[ci].swap(0, 1);
                }
                let first = self.clauses[ci][0];
                if self.value(first) == Some(true) {
                    keep.push(ci);
                    continue;
                }
                // Look for a replacement watch.
                let mut moved = false;
                for k in 2..self.clauses[ci].len() {
                    if self.value(self.clauses[ci][k]) != Some(false) {
                        self.clauses[ci].swap(1, k);
                        let new_watch = self.clauses[ci][1];
                        self.watches[new_watch.negated().index()].push(ci);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                keep.push(ci);
                if !self.enqueue(first, Some(ci)) {
                    // Conflict: keep the remaining watchers as-is.
                    keep.extend_from_slice(&watchers[pos + 1..]);
                    conflict = Some(ci);
                    break;
                }
            }
            let slot = &mut self.watches[lit.index()];
            keep.append(slot);
            *slot = keep;
            if conflict.is_some() {
                return conflict;
            }
        }
        None
    }

    /// First-UIP conflict analysis; returns the learned clause (asserting
    /// literal first) and the backjump level.
    fn analyze(&mut self, conflict: usize) -> (Vec<Lit>, u32) {
        let mut seen = vec![false; self.num_vars];
        let mut learnt: Vec<Lit> = vec![Lit::positive(0)]; // placeholder for the asserting literal
        let mut counter = 0usize;
        let mut clause_idx = conflict;
        let mut trail_pos = self.trail.len();
        let mut skip: Option<Var> = None;

        loop {
            for &q in &self.clauses[clause_idx] {
                let v = q.var();
                if Some(v) == skip || seen[v] || self.level[v] == 0 {
                    continue;
                }
                seen[v] = true;
                if self.level[v] == self.decision_level() {
                    counter += 1;
                } else {
                    learnt.push(q);
                }
            }
            // Walk the trail backwards to the next marked literal.
            loop {
                trail_pos -= 1;
                if seen[self.trail[trail_pos].var()] {
                    break;
                }
            }
            let p = self.trail[trail_pos];
            seen[p.var()] = false;
            counter -= 1;
            if counter == 0 {
                learnt[0] = p.negated();
                break;
            }
            clause_idx = self.reason[p.var()].expect("non-decision literal has a reason");
            skip = Some(p.var());
        }

        // Backjump to the second-highest level in the clause; keep a literal
        // of that level in watch position 1.
        let mut back_level = 0;
        for i in 1..learnt.len() {
            let lvl = self.level[learnt[i].var()];
            if lvl > back_level {
                back_level = lvl;
                learnt.swap(1, i);
            }
        }
        (learnt, back_level)
    }

    fn cancel_until(&mut self, level: u32) {
        while self.decision_level() > level {
            let lim = self.trail_lim.pop().unwrap();
            for lit in self.trail.drain(lim..) {
                self.assign[lit.var()] = None;
                self.reason[lit.var()] = None;
            }
        }
        self.queue_head = self.trail.len();
    }

    /// Lowest-index unassigned variable; assigned true first. Atom variables
    /// are numbered before definition variables and earlier times before
    /// later ones, so witness shapes are stable.
    fn decide(&mut self) -> bool {
        for v in 0..self.num_vars {
            if self.assign[v].is_none() {
                self.stats.decisions += 1;
                self.trail_lim.push(self.trail.len());
                let ok = self.enqueue(Lit::positive(v), None);
                debug_assert!(ok);
                return true;
            }
        }
        false
    }

    pub fn solve(mut self, cnf: &Cnf) -> (SolveResult, SolverStats) {
        // Load clauses; units go straight onto the level-0 trail.
        for clause in &cnf.clauses {
            let mut lits = clause.clone();
            lits.sort();
            lits.dedup();
            if lits.iter().any(|l| lits.contains(&l.negated())) {
                continue; // tautological clause
            }
            match lits.len() {
                0 => return (SolveResult::Unsat, self.stats),
                1 => {
                    if !self.enqueue(lits[0], None) {
                        return (SolveResult::Unsat, self.stats);
                    }
                }
                _ => {
                    let idx = self.clauses.len();
                    self.clauses.push(lits);
                    self.attach_clause(idx);
                }
            }
        }

        loop {
            if let Some(conflict) = self.propagate() {
                self.stats.conflicts += 1;
                if self.decision_level() == 0 {
                    return (SolveResult::Unsat, self.stats);
                }
                let (learnt, back_level) = self.analyze(conflict);
                self.cancel_until(back_level);
                let asserting = learnt[0];
                if learnt.len() == 1 {
                    let ok = self.enqueue(asserting, None);
                    debug_assert!(ok);
                } else {
                    let idx = self.clauses.len();
                    self.clauses.push(learnt);
                    self.attach_clause(idx);
                    self.stats.learned += 1;
                    let ok = self.enqueue(asserting, Some(idx));
                    debug_assert!(ok);
                }
            } else if !self.decide() {
                let model = self.assign.iter().map(|v| v.unwrap_or(true)).collect();
                return (SolveResult::Sat(model), self.stats);
            }
        }
    }
}

/// Solves a CNF instance.
pub fn solve_cnf(cnf: &Cnf) -> (SolveResult, SolverStats) {
    Solver::new(cnf).solve(cnf)
}
