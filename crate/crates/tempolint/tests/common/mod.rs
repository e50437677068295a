//! Shared test support: deterministic random generators for formulas and
//! traces, and a brute-force grid oracle that is independent of both the
//! monitor and the satisfiability engine.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use tempolint::interval::Interval;
use tempolint::monitor::TimedTrace;
use tempolint::rational::{rat, Rational};
use tempolint::Formula;

pub const ATOMS: [&str; 3] = ["a", "b", "c"];

/// A piecewise-constant grid trace as raw bits: `values[atom][time]`.
#[derive(Debug, Clone)]
pub struct GridTrace {
    pub atoms: Vec<String>,
    pub values: Vec<Vec<bool>>,
    pub points: usize,
}

impl GridTrace {
    pub fn from_mask(atoms: &[&str], points: usize, mut mask: u64) -> GridTrace {
        let values = atoms
            .iter()
            .map(|_| {
                (0..points)
                    .map(|_| {
                        let bit = mask & 1 == 1;
                        mask >>= 1;
                        bit
                    })
                    .collect()
            })
            .collect();
        GridTrace {
            atoms: atoms.iter().map(|s| s.to_string()).collect(),
            values,
            points,
        }
    }

    pub fn to_timed_trace(&self) -> TimedTrace {
        let times: Vec<Rational> = (0..self.points).map(|t| rat(t as i64)).collect();
        let columns = self
            .atoms
            .iter()
            .zip(&self.values)
            .map(|(name, bits)| {
                (
                    name.clone(),
                    bits.iter()
                        .map(|&b| if b { rat(1) } else { rat(0) })
                        .collect(),
                )
            })
            .collect();
        TimedTrace::new("grid", times, columns, None).unwrap()
    }
}

/// Direct recursive evaluation of a formula on a grid trace at integer time
/// `t`, straight from the satisfaction relation with windows clipped to
/// `[0, points-1]`. Supports negation and implication classically. This is
/// the oracle: it shares no code with the engine or the monitor.
pub fn oracle_eval(f: &Formula, trace: &GridTrace, t: usize) -> bool {
    let atom_index: BTreeMap<&str, usize> = trace
        .atoms
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i))
        .collect();
    eval_at(f, trace, &atom_index, t)
}

fn eval_at(f: &Formula, trace: &GridTrace, idx: &BTreeMap<&str, usize>, t: usize) -> bool {
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(atom) => {
            let i = idx[atom.name().as_str()];
            trace.values[i][t]
        }
        Formula::Not(c) => !eval_at(c, trace, idx, t),
        Formula::And(l, r) => eval_at(l, trace, idx, t) && eval_at(r, trace, idx, t),
        Formula::Or(l, r) => eval_at(l, trace, idx, t) || eval_at(r, trace, idx, t),
        Formula::Implies(l, r) => !eval_at(l, trace, idx, t) || eval_at(r, trace, idx, t),
        Formula::Eventually(iv, c) => window(iv, t, trace.points)
            .any(|u| eval_at(c, trace, idx, u)),
        Formula::Always(iv, c) => window(iv, t, trace.points)
            .all(|u| eval_at(c, trace, idx, u)),
    }
}

fn window(iv: &Interval, t: usize, points: usize) -> std::ops::Range<usize> {
    let lo = t + iv.lower().to_integer() as usize;
    let hi = (t + iv.upper().to_integer() as usize).min(points - 1);
    if lo >= points {
        0..0
    } else {
        lo..hi + 1
    }
}

/// True when some grid trace over the formula's atoms satisfies it at time
/// zero, enumerating every assignment and respecting mutex groups.
pub fn oracle_sat(f: &Formula, atoms: &[&str], points: usize, mutex: &[Vec<String>]) -> bool {
    let bits = atoms.len() * points;
    assert!(bits <= 24, "oracle domain too large");
    (0..1u64 << bits).any(|mask| {
        let trace = GridTrace::from_mask(atoms, points, mask);
        respects_mutex(&trace, mutex) && oracle_eval(f, &trace, 0)
    })
}

pub fn respects_mutex(trace: &GridTrace, mutex: &[Vec<String>]) -> bool {
    for group in mutex {
        let members: Vec<usize> = trace
            .atoms
            .iter()
            .enumerate()
            .filter(|(_, n)| group.contains(n))
            .map(|(i, _)| i)
            .collect();
        for t in 0..trace.points {
            if members.iter().filter(|&&i| trace.values[i][t]).count() > 1 {
                return false;
            }
        }
    }
    true
}

/// Options for the deterministic random formula generator.
pub struct GenOptions {
    pub max_depth: u32,
    pub max_endpoint: i64,
    pub allow_implies: bool,
    pub temporal: TemporalOps,
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum TemporalOps {
    Both,
    EventuallyOnly,
    AlwaysOnly,
}

impl Default for GenOptions {
    fn default() -> Self {
        GenOptions {
            max_depth: 4,
            max_endpoint: 3,
            allow_implies: false,
            temporal: TemporalOps::Both,
        }
    }
}

/// A random formula over `ATOMS` with closed integer intervals.
pub fn gen_formula(rng: &mut ChaCha8Rng, opts: &GenOptions) -> Formula {
    if opts.max_depth == 0 {
        return match rng.random_range(0..8) {
            0 => Formula::True,
            1 => Formula::False,
            k if k < 5 => Formula::atom(ATOMS[rng.random_range(0..ATOMS.len())]),
            _ => Formula::not(Formula::atom(ATOMS[rng.random_range(0..ATOMS.len())])),
        };
    }
    let inner = GenOptions {
        max_depth: opts.max_depth - 1,
        max_endpoint: opts.max_endpoint,
        allow_implies: opts.allow_implies,
        temporal: opts.temporal,
    };
    let choices = if opts.allow_implies { 6 } else { 5 };
    match rng.random_range(0..choices) {
        0 => gen_formula(rng, &GenOptions { max_depth: 0, ..inner }),
        1 => Formula::and(gen_formula(rng, &inner), gen_formula(rng, &inner)),
        2 => Formula::or(gen_formula(rng, &inner), gen_formula(rng, &inner)),
        3 | 4 => {
            let lower = rng.random_range(0..opts.max_endpoint);
            let upper = rng.random_range(lower + 1..=opts.max_endpoint);
            let interval = Interval::closed(rat(lower), rat(upper)).unwrap();
            let child = gen_formula(rng, &inner);
            let eventually = match opts.temporal {
                TemporalOps::Both => rng.random_range(0..2) == 0,
                TemporalOps::EventuallyOnly => true,
                TemporalOps::AlwaysOnly => false,
            };
            if eventually {
                Formula::eventually(interval, child)
            } else {
                Formula::always(interval, child)
            }
        }
        _ => Formula::implies(gen_formula(rng, &inner), gen_formula(rng, &inner)),
    }
}

/// A random boolean timed trace over `ATOMS` with integer timestamps
/// `0..samples` and the given duration.
pub fn gen_trace(rng: &mut ChaCha8Rng, samples: usize, duration: i64) -> TimedTrace {
    let samples = samples.max(1);
    let times: Vec<Rational> = (0..samples as i64).map(rat).collect();
    let columns = ATOMS
        .iter()
        .map(|name| {
            let bits = (0..samples)
                .map(|_| if rng.random_range(0..2) == 0 { rat(0) } else { rat(1) })
                .collect();
            (name.to_string(), bits)
        })
        .collect();
    TimedTrace::new("random", times, columns, Some(rat(duration.max(samples as i64 - 1)))).unwrap()
}
