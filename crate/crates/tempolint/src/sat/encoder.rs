//! Unfolds a bounded NNF formula into CNF over a finite set of time points.
//!
//! Grid mode realizes grid semantics: points `0, δ, 2δ, ..., H` where `H` is
//! the formula horizon, one boolean variable per (atom, point), temporal
//! operators quantified over the grid points of `(t + I) ∩ [0, H]`. Suffix
//! mode backs the untimed fast path: a fixed number of abstract points with
//! every temporal window running to the end.
//!
//! Subformulas get fresh definition variables with one-directional clauses
//! (`d -> encoding`); NNF keeps every context positive, so the reverse
//! implications are unnecessary. Variables are numbered atoms first in time
//! order, then definitions, which fixes the solver's decision order.

use super::cnf::{Cnf, Lit, Var};
use crate::formula::{is_nnf, Formula};
use crate::rational::{format_rational, is_multiple_of, multiple_index, rat, Rational};
use crate::monitor::TimedTrace;
use num_traits::Zero;
use std::collections::HashMap;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error("formula must be in negation normal form")]
    NotNnf,
    #[error("open interval {0} is not supported by the satisfiability engine")]
    OpenInterval(String),
    #[error("interval endpoint {endpoint} is not a multiple of the grid step {step}")]
    UnalignedEndpoint { endpoint: String, step: String },
    #[error("formula horizon {horizon} exceeds the configured cap {cap}")]
    HorizonExceedsCap { horizon: String, cap: String },
    #[error("formula mixes eventually and always; no pure-fragment fast path applies")]
    MixedFragment,
}

/// How formula time maps onto encoding points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TimeModel {
    /// `points` grid points spaced `step` apart, covering `[0, horizon]`.
    Grid { step: Rational },
    /// Abstract points with suffix windows; intervals are ignored.
    Suffix { points: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum EncLit {
    Const(bool),
    Lit(Lit),
}

pub struct Encoding {
    pub cnf: Cnf,
    /// Atom names present in the formula, sorted; variable `p * atoms.len()
    /// + i` is atom `i` at point `p`.
    pub atoms: Vec<String>,
    pub points: usize,
    pub step: Option<Rational>,
    pub horizon: Rational,
}

impl Encoding {
    pub fn atom_var(&self, atom_idx: usize, point: usize) -> Var {
        point * self.atoms.len() + atom_idx
    }

    /// DIMACS comment lines mapping atom variables to times.
    pub fn comments(&self) -> Vec<String> {
        let step = self.step.unwrap_or_else(|| rat(1));
        let mut out = Vec::new();
        for point in 0..self.points {
            let time = step * rat(point as i64);
            for (idx, name) in self.atoms.iter().enumerate() {
                out.push(format!(
                    "atom {name} t={} var={}",
                    format_rational(&time),
                    self.atom_var(idx, point) + 1
                ));
            }
        }
        out
    }

    /// Reads a model back into a piecewise-constant trace with change points
    /// on the grid.
    pub fn decode_witness(&self, model: &[bool]) -> TimedTrace {
        let step = self.step.unwrap_or_else(|| rat(1));
        let times: Vec<Rational> = (0..self.points).map(|p| step * rat(p as i64)).collect();
        let columns: Vec<(String, Vec<Rational>)> = self
            .atoms
            .iter()
            .enumerate()
            .map(|(idx, name)| {
                let samples = (0..self.points)
                    .map(|p| {
                        if model[self.atom_var(idx, p)] {
                            rat(1)
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect();
                (name.clone(), samples)
            })
            .collect();
        TimedTrace::new("witness", times, columns, Some(self.horizon))
            .expect("witness construction is well-formed")
    }
}

struct Encoder<'a> {
    nodes: Vec<&'a Formula>,
    children: Vec<Vec<usize>>,
    atom_index: HashMap<String, usize>,
    num_atoms: usize,
    points: usize,
    grid_step: Option<Rational>,
    cnf: Cnf,
    memo: HashMap<(usize, usize), EncLit>,
}

impl<'a> Encoder<'a> {
    fn atom_lit(&self, name: &str, point: usize, positive: bool) -> EncLit {
        let var = point * self.num_atoms + self.atom_index[name];
        EncLit::Lit(Lit::new(var, positive))
    }

    /// d -> (l1 & l2 & ...): one binary clause per conjunct.
    fn conjunction(&mut self, lits: Vec<EncLit>) -> EncLit {
        let mut plain = Vec::new();
        for lit in lits {
            match lit {
                EncLit::Const(false) => return EncLit::Const(false),
                EncLit::Const(true) => {}
                EncLit::Lit(l) => plain.push(l),
            }
        }
        plain.sort();
        plain.dedup();
        match plain.len() {
            0 => EncLit::Const(true),
            1 => EncLit::Lit(plain[0]),
            _ => {
                let d = self.cnf.new_var();
                for l in plain {
                    self.cnf.add_clause(vec![Lit::negative(d), l]);
                }
                EncLit::Lit(Lit::positive(d))
            }
        }
    }

    /// d -> (l1 | l2 | ...): one clause.
    fn disjunction(&mut self, lits: Vec<EncLit>) -> EncLit {
        let mut plain = Vec::new();
        for lit in lits {
            match lit {
                EncLit::Const(true) => return EncLit::Const(true),
                EncLit::Const(false) => {}
                EncLit::Lit(l) => plain.push(l),
            }
        }
        plain.sort();
        plain.dedup();
        match plain.len() {
            0 => EncLit::Const(false),
            1 => EncLit::Lit(plain[0]),
            _ => {
                let d = self.cnf.new_var();
                let mut clause = vec![Lit::negative(d)];
                clause.extend(plain);
                self.cnf.add_clause(clause);
                EncLit::Lit(Lit::positive(d))
            }
        }
    }

    /// Grid points covered by `(point*δ + I) ∩ [0, H]`, as a point range.
    fn window(&self, node: usize, point: usize) -> std::ops::Range<usize> {
        match self.nodes[node] {
            Formula::Eventually(iv, _) | Formula::Always(iv, _) => match &self.grid_step {
                Some(step) => {
                    let lo = point + multiple_index(&iv.lower(), step) as usize;
                    let hi = point
                        .saturating_add(multiple_index(&iv.upper(), step) as usize)
                        .min(self.points - 1);
                    if lo >= self.points {
                        0..0
                    } else {
                        lo..hi + 1
                    }
                }
                None => point..self.points,
            },
            _ => unreachable!("window of a non-temporal node"),
        }
    }

    fn encode(&mut self, node: usize, point: usize) -> EncLit {
        if let Some(&lit) = self.memo.get(&(node, point)) {
            return lit;
        }
        let result = match self.nodes[node] {
            Formula::True => EncLit::Const(true),
            Formula::False => EncLit::Const(false),
            Formula::Atom(atom) => self.atom_lit(&atom.name(), point, true),
            Formula::Not(inner) => match &**inner {
                Formula::Atom(atom) => self.atom_lit(&atom.name(), point, false),
                // NNF was validated up front.
                _ => unreachable!("negation over a non-atom in NNF"),
            },
            Formula::And(..) => {
                let lits = self.children[node]
                    .clone()
                    .into_iter()
                    .map(|c| self.encode(c, point))
                    .collect();
                self.conjunction(lits)
            }
            Formula::Or(..) => {
                let lits = self.children[node]
                    .clone()
                    .into_iter()
                    .map(|c| self.encode(c, point))
                    .collect();
                self.disjunction(lits)
            }
            Formula::Implies(..) => unreachable!("implication in NNF"),
            Formula::Eventually(..) => {
                let child = self.children[node][0];
                let lits = self
                    .window(node, point)
                    .map(|p| self.encode(child, p))
                    .collect();
                self.disjunction(lits)
            }
            Formula::Always(..) => {
                let child = self.children[node][0];
                let lits = self
                    .window(node, point)
                    .map(|p| self.encode(child, p))
                    .collect();
                self.conjunction(lits)
            }
        };
        self.memo.insert((node, point), result);
        result
    }
}

fn index_nodes<'a>(f: &'a Formula, nodes: &mut Vec<&'a Formula>, children: &mut Vec<Vec<usize>>) -> usize {
    let id = nodes.len();
    nodes.push(f);
    children.push(Vec::new());
    for child in f.children() {
        let cid = index_nodes(child, nodes, children);
        children[id].push(cid);
    }
    id
}

/// Encodes an NNF formula plus mutual-exclusion constraints over the given
/// time model. Grid mode validates that every operator interval is closed
/// and grid-aligned.
pub fn encode(
    f: &Formula,
    mutex: &[Vec<String>],
    model: &TimeModel,
) -> Result<Encoding, EngineError> {
    if !is_nnf(f) {
        return Err(EngineError::NotNnf);
    }

    let horizon = f.horizon();
    let (points, step) = match model {
        TimeModel::Grid { step } => {
            for (_, node) in f.walk() {
                if let Formula::Eventually(iv, _) | Formula::Always(iv, _) = node {
                    if !iv.is_closed() {
                        return Err(EngineError::OpenInterval(iv.to_string()));
                    }
                    for endpoint in [iv.lower(), iv.upper()] {
                        if !is_multiple_of(&endpoint, step) {
                            return Err(EngineError::UnalignedEndpoint {
                                endpoint: format_rational(&endpoint),
                                step: format_rational(step),
                            });
                        }
                    }
                }
            }
            debug_assert!(is_multiple_of(&horizon, step));
            let n = multiple_index(&horizon, step) as usize;
            (n + 1, Some(*step))
        }
        TimeModel::Suffix { points } => ((*points).max(1), None),
    };

    let atoms: Vec<String> = f.atoms().iter().map(|a| a.name()).collect();
    let atom_index: HashMap<String, usize> = atoms
        .iter()
        .enumerate()
        .map(|(i, n)| (n.clone(), i))
        .collect();

    let mut nodes = Vec::new();
    let mut children = Vec::new();
    index_nodes(f, &mut nodes, &mut children);

    let mut encoder = Encoder {
        nodes,
        children,
        num_atoms: atoms.len(),
        atom_index,
        points,
        grid_step: step,
        cnf: Cnf {
            num_vars: atoms.len() * points,
            clauses: Vec::new(),
        },
        memo: HashMap::new(),
    };

    let root = encoder.encode(0, 0);
    match root {
        EncLit::Const(true) => {}
        EncLit::Const(false) => encoder.cnf.add_clause(Vec::new()),
        EncLit::Lit(l) => encoder.cnf.add_clause(vec![l]),
    }

    // At most one atom of a mutex group holds at any point.
    for group in mutex {
        let present: Vec<usize> = group
            .iter()
            .filter_map(|name| encoder.atom_index.get(name).copied())
            .collect();
        for point in 0..points {
            for (i, &a) in present.iter().enumerate() {
                for &b in &present[i + 1..] {
                    encoder.cnf.add_clause(vec![
                        Lit::negative(point * encoder.num_atoms + a),
                        Lit::negative(point * encoder.num_atoms + b),
                    ]);
                }
            }
        }
    }

    Ok(Encoding {
        cnf: encoder.cnf,
        atoms,
        points,
        step,
        horizon,
    })
}
