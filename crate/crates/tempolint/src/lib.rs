//! tempolint: a linter and trace monitor for real-time requirements written
//! in the bounded eventually/always fragment of metric interval temporal
//! logic, with numeric threshold predicates over signals.
//!
//! The crate provides:
//!
//! - a formula core (parser, printer, negation normal form, literal
//!   occurrences, mutations, effective intervals);
//! - decomposition of overlapping threshold predicates into mutually
//!   exclusive atoms;
//! - a bounded satisfiability engine over a rational time grid, with an
//!   untimed fast path for pure fragments and DIMACS export;
//! - a three-stage requirement debugger (validity, redundancy, vacuity);
//! - an offline trace monitor with signal-vacuity analysis
//!   (antecedent failure, literal-occurrence removal, falsification
//!   localization) and a synthetic trace generator.

pub mod debugger;
pub mod formula;
pub mod interval;
pub mod monitor;
pub mod predicate;
pub mod rational;
pub mod report;
pub mod sat;
pub mod tracegen;

pub use formula::{
    annotate_effective_intervals, is_nnf, lit_occurrences, negate, parse, substitute_occurrence,
    to_nnf, Atom, Cmp, Formula, LiteralOccurrence, ParseError, Polarity, Replacement,
};
pub use interval::{interval_add, Interval};
pub use rational::{parse_rational, rat, ratio, Rational};
