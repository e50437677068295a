//! Formula representation for the bounded eventually/always fragment of
//! metric interval temporal logic, on top of either plain propositions or
//! numeric threshold predicates.

mod effective;
mod nnf;
mod occurrence;
mod parse;

pub use effective::{annotate_effective_intervals, EffectiveIntervals};
pub use nnf::{is_nnf, negate, to_nnf};
pub use occurrence::{
    lit_occurrences, substitute_occurrence, LiteralOccurrence, OccurrenceError, Polarity,
    Replacement,
};
pub use parse::{parse, ParseError};

use crate::interval::Interval;
use crate::rational::{format_rational, Rational};
use num_traits::Zero;
use std::fmt;

/// Comparison operator of a threshold predicate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cmp {
    Lt,
    Le,
    Gt,
    Ge,
}

impl Cmp {
    pub fn eval(&self, value: &Rational, threshold: &Rational) -> bool {
        match self {
            Cmp::Lt => value < threshold,
            Cmp::Le => value <= threshold,
            Cmp::Gt => value > threshold,
            Cmp::Ge => value >= threshold,
        }
    }

    pub fn symbol(&self) -> &'static str {
        match self {
            Cmp::Lt => "<",
            Cmp::Le => "<=",
            Cmp::Gt => ">",
            Cmp::Ge => ">=",
        }
    }
}

/// An atomic formula: a named proposition or a threshold predicate over one
/// real variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Atom {
    Prop(String),
    Pred {
        variable: String,
        cmp: Cmp,
        threshold: Rational,
    },
}

impl Atom {
    pub fn prop(name: impl Into<String>) -> Self {
        Atom::Prop(name.into())
    }

    pub fn pred(variable: impl Into<String>, cmp: Cmp, threshold: Rational) -> Self {
        Atom::Pred {
            variable: variable.into(),
            cmp,
            threshold,
        }
    }

    /// Canonical name: the proposition name, or the predicate text such as
    /// `speed>100`. Predicates are keyed by this text in atom tables.
    pub fn name(&self) -> String {
        match self {
            Atom::Prop(name) => name.clone(),
            Atom::Pred {
                variable,
                cmp,
                threshold,
            } => format!("{variable}{}{}", cmp.symbol(), format_rational(threshold)),
        }
    }

    pub fn is_pred(&self) -> bool {
        matches!(self, Atom::Pred { .. })
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// Path from the root of a formula to a node, as child indices.
pub type Path = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Eventually(Interval, Box<Formula>),
    Always(Interval, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Formula {
        Formula::Atom(Atom::prop(name))
    }

    pub fn pred(variable: impl Into<String>, cmp: Cmp, threshold: Rational) -> Formula {
        Formula::Atom(Atom::pred(variable, cmp, threshold))
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn implies(l: Formula, r: Formula) -> Formula {
        Formula::Implies(Box::new(l), Box::new(r))
    }

    pub fn eventually(interval: Interval, f: Formula) -> Formula {
        Formula::Eventually(interval, Box::new(f))
    }

    pub fn always(interval: Interval, f: Formula) -> Formula {
        Formula::Always(interval, Box::new(f))
    }

    /// Conjunction of a non-empty list, folded to the left.
    pub fn conjunction(mut parts: Vec<Formula>) -> Formula {
        assert!(!parts.is_empty(), "conjunction of nothing");
        let first = parts.remove(0);
        parts.into_iter().fold(first, Formula::and)
    }

    /// Disjunction of a non-empty list, folded to the left.
    pub fn disjunction(mut parts: Vec<Formula>) -> Formula {
        assert!(!parts.is_empty(), "disjunction of nothing");
        let first = parts.remove(0);
        parts.into_iter().fold(first, Formula::or)
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => Vec::new(),
            Formula::Not(c) | Formula::Eventually(_, c) | Formula::Always(_, c) => vec![c],
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => vec![l, r],
        }
    }

    /// The node a path points at, if the path is valid.
    pub fn node_at(&self, path: &[usize]) -> Option<&Formula> {
        let mut node = self;
        for &idx in path {
            node = *node.children().get(idx)?;
        }
        Some(node)
    }

    /// Rebuilds the formula with the node at `path` replaced. Returns `None`
    /// when the path is invalid.
    pub fn replace_at(&self, path: &[usize], replacement: Formula) -> Option<Formula> {
        let Some((&idx, rest)) = path.split_first() else {
            return Some(replacement);
        };
        Some(match self {
            Formula::True | Formula::False | Formula::Atom(_) => return None,
            Formula::Not(c) => {
                if idx != 0 {
                    return None;
                }
                Formula::not(c.replace_at(rest, replacement)?)
            }
            Formula::Eventually(iv, c) => {
                if idx != 0 {
                    return None;
                }
                Formula::eventually(*iv, c.replace_at(rest, replacement)?)
            }
            Formula::Always(iv, c) => {
                if idx != 0 {
                    return None;
                }
                Formula::always(*iv, c.replace_at(rest, replacement)?)
            }
            Formula::And(l, r) => match idx {
                0 => Formula::and(l.replace_at(rest, replacement)?, (**r).clone()),
                1 => Formula::and((**l).clone(), r.replace_at(rest, replacement)?),
                _ => return None,
            },
            Formula::Or(l, r) => match idx {
                0 => Formula::or(l.replace_at(rest, replacement)?, (**r).clone()),
                1 => Formula::or((**l).clone(), r.replace_at(rest, replacement)?),
                _ => return None,
            },
            Formula::Implies(l, r) => match idx {
                0 => Formula::implies(l.replace_at(rest, replacement)?, (**r).clone()),
                1 => Formula::implies((**l).clone(), r.replace_at(rest, replacement)?),
                _ => return None,
            },
        })
    }

    /// Depth-first preorder walk yielding each node with its path.
    pub fn walk(&self) -> Vec<(Path, &Formula)> {
        let mut out = Vec::new();
        let mut stack = vec![(Path::new(), self)];
        while let Some((path, node)) = stack.pop() {
            out.push((path.clone(), node));
            for (idx, child) in node.children().into_iter().enumerate().rev() {
                let mut child_path = path.clone();
                child_path.push(idx);
                stack.push((child_path, child));
            }
        }
        out
    }

    /// All distinct atoms, ordered by canonical name.
    pub fn atoms(&self) -> Vec<Atom> {
        let mut found: Vec<Atom> = Vec::new();
        for (_, node) in self.walk() {
            if let Formula::Atom(atom) = node {
                if !found.contains(atom) {
                    found.push(atom.clone());
                }
            }
        }
        found.sort_by_key(|a| a.name());
        found
    }

    pub fn has_predicates(&self) -> bool {
        self.walk()
            .iter()
            .any(|(_, node)| matches!(node, Formula::Atom(atom) if atom.is_pred()))
    }

    pub fn contains_or(&self) -> bool {
        self.walk().iter().any(|(_, n)| matches!(n, Formula::Or(..)))
    }

    pub fn contains_and(&self) -> bool {
        self.walk().iter().any(|(_, n)| matches!(n, Formula::And(..)))
    }

    /// How far into the future the formula can observe: 0 at leaves, max
    /// over boolean children, upper bound plus child horizon under a
    /// temporal operator.
    pub fn horizon(&self) -> Rational {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => Rational::zero(),
            Formula::Not(c) => c.horizon(),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
                l.horizon().max(r.horizon())
            }
            Formula::Eventually(iv, c) | Formula::Always(iv, c) => iv.upper() + c.horizon(),
        }
    }

    /// Splits a maximal chain of `&&` into its conjuncts, left to right.
    /// A non-conjunction is its own single conjunct.
    pub fn flatten_and(&self) -> Vec<&Formula> {
        self.flatten_and_with_paths()
            .into_iter()
            .map(|(_, f)| f)
            .collect()
    }

    /// Like [`Formula::flatten_and`], but each conjunct comes with its path
    /// from this node.
    pub fn flatten_and_with_paths(&self) -> Vec<(Path, &Formula)> {
        fn go<'a>(f: &'a Formula, path: &mut Path, out: &mut Vec<(Path, &'a Formula)>) {
            match f {
                Formula::And(l, r) => {
                    path.push(0);
                    go(l, path, out);
                    path.pop();
                    path.push(1);
                    go(r, path, out);
                    path.pop();
                }
                other => out.push((path.clone(), other)),
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::Atom(atom) => write!(f, "{atom}"),
            Formula::Not(c) => write!(f, "!{c}"),
            Formula::And(l, r) => write!(f, "({l} && {r})"),
            Formula::Or(l, r) => write!(f, "({l} || {r})"),
            Formula::Implies(l, r) => write!(f, "({l} -> {r})"),
            Formula::Eventually(iv, c) => write!(f, "F{iv}{c}"),
            Formula::Always(iv, c) => write!(f, "G{iv}{c}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn iv(l: i64, u: i64) -> Interval {
        Interval::closed(rat(l), rat(u)).unwrap()
    }

    #[test]
    fn horizon_examples() {
        // F[0,30](p1 -> G[0,20] p1) observes up to 50.
        let f = Formula::eventually(
            iv(0, 30),
            Formula::implies(
                Formula::atom("p1"),
                Formula::always(iv(0, 20), Formula::atom("p1")),
            ),
        );
        assert_eq!(f.horizon(), rat(50));

        let g = Formula::and(Formula::atom("p"), Formula::atom("q"));
        assert_eq!(g.horizon(), rat(0));

        // F[0,40](((p1||p3) -> F[0,20]p2) && G[0,30]p1) observes 40+max(20,30).
        let h = Formula::eventually(
            iv(0, 40),
            Formula::and(
                Formula::implies(
                    Formula::or(Formula::atom("p1"), Formula::atom("p3")),
                    Formula::eventually(iv(0, 20), Formula::atom("p2")),
                ),
                Formula::always(iv(0, 30), Formula::atom("p1")),
            ),
        );
        assert_eq!(h.horizon(), rat(70));
    }

    #[test]
    fn paths_resolve_and_replace() {
        let f = Formula::and(
            Formula::atom("a"),
            Formula::eventually(iv(0, 1), Formula::atom("b")),
        );
        assert_eq!(f.node_at(&[1, 0]), Some(&Formula::atom("b")));
        assert_eq!(f.node_at(&[2]), None);
        let swapped = f.replace_at(&[1, 0], Formula::True).unwrap();
        assert_eq!(
            swapped,
            Formula::and(
                Formula::atom("a"),
                Formula::eventually(iv(0, 1), Formula::True)
            )
        );
    }

    #[test]
    fn flatten_collects_maximal_chains() {
        let f = Formula::and(
            Formula::and(Formula::atom("a"), Formula::atom("b")),
            Formula::atom("c"),
        );
        let parts: Vec<String> = f.flatten_and().iter().map(|p| p.to_string()).collect();
        assert_eq!(parts, vec!["a", "b", "c"]);
    }
}
