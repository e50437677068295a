//! Literal occurrences and occurrence-level mutation.
//!
//! A literal occurrence is one positional appearance of an atom or negated
//! atom in an NNF parse tree. Mutations replace exactly one occurrence with
//! `true` or `false` and never simplify the result, so occurrence paths of
//! unrelated literals stay valid across mutations.

use super::nnf::is_nnf;
use super::{Atom, Formula, Path};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarity {
    Positive,
    Negative,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LiteralOccurrence {
    /// Child indices from the root to the literal. For a negative literal
    /// the path addresses the `!` node, matching one leaf of the NNF tree.
    pub path: Path,
    pub polarity: Polarity,
    pub atom: Atom,
}

impl LiteralOccurrence {
    /// Rendered like `!p3` or `p1`.
    pub fn literal_text(&self) -> String {
        match self.polarity {
            Polarity::Positive => self.atom.name(),
            Polarity::Negative => format!("!{}", self.atom.name()),
        }
    }

    /// The same occurrence re-rooted under a parent prefix.
    pub fn prefixed(&self, prefix: &[usize]) -> LiteralOccurrence {
        let mut path = prefix.to_vec();
        path.extend_from_slice(&self.path);
        LiteralOccurrence {
            path,
            polarity: self.polarity,
            atom: self.atom.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OccurrenceError {
    #[error("formula is not in negation normal form")]
    NotNnf,
    #[error("path does not resolve to a literal")]
    NotALiteral,
}

/// The multiset of literal occurrences in depth-first, left-to-right order.
/// Requires NNF so that every atom sits in a well-defined literal.
pub fn lit_occurrences(f: &Formula) -> Result<Vec<LiteralOccurrence>, OccurrenceError> {
    if !is_nnf(f) {
        return Err(OccurrenceError::NotNnf);
    }
    let mut out = Vec::new();
    collect(f, &mut Vec::new(), &mut out);
    Ok(out)
}

fn collect(f: &Formula, path: &mut Path, out: &mut Vec<LiteralOccurrence>) {
    match f {
        Formula::True | Formula::False => {}
        Formula::Atom(atom) => out.push(LiteralOccurrence {
            path: path.clone(),
            polarity: Polarity::Positive,
            atom: atom.clone(),
        }),
        Formula::Not(c) => {
            // NNF guarantees the child is an atom.
            if let Formula::Atom(atom) = &**c {
                out.push(LiteralOccurrence {
                    path: path.clone(),
                    polarity: Polarity::Negative,
                    atom: atom.clone(),
                });
            }
        }
        Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
            path.push(0);
            collect(l, path, out);
            path.pop();
            path.push(1);
            collect(r, path, out);
            path.pop();
        }
        Formula::Eventually(_, c) | Formula::Always(_, c) => {
            path.push(0);
            collect(c, path, out);
            path.pop();
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Replacement {
    Top,
    Bottom,
}

impl Replacement {
    fn formula(self) -> Formula {
        match self {
            Replacement::Top => Formula::True,
            Replacement::Bottom => Formula::False,
        }
    }
}

/// Replaces exactly the addressed literal occurrence with `true`/`false`.
/// No simplification is performed, so mutants stay structurally comparable
/// to the original.
pub fn substitute_occurrence(
    f: &Formula,
    occurrence: &LiteralOccurrence,
    replacement: Replacement,
) -> Result<Formula, OccurrenceError> {
    match f.node_at(&occurrence.path) {
        Some(Formula::Atom(_)) => {}
        Some(Formula::Not(inner)) if matches!(**inner, Formula::Atom(_)) => {}
        _ => return Err(OccurrenceError::NotALiteral),
    }
    f.replace_at(&occurrence.path, replacement.formula())
        .ok_or(OccurrenceError::NotALiteral)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse, to_nnf};

    #[test]
    fn traversal_order_matches_parse_tree() {
        let f = parse("(!p && q) || F[0,10]p || G[0,10]q").unwrap();
        let occs = lit_occurrences(&f).unwrap();
        let texts: Vec<String> = occs.iter().map(|o| o.literal_text()).collect();
        assert_eq!(texts, vec!["!p", "q", "p", "q"]);
    }

    #[test]
    fn single_atom_and_constants() {
        assert_eq!(lit_occurrences(&parse("p").unwrap()).unwrap().len(), 1);
        assert!(lit_occurrences(&parse("true").unwrap()).unwrap().is_empty());
        assert_eq!(
            lit_occurrences(&parse("p -> q").unwrap()),
            Err(OccurrenceError::NotNnf)
        );
    }

    #[test]
    fn substitution_replaces_one_leaf_without_simplifying() {
        // Mutating p3 in the usability-study formula keeps (p1 || false) intact.
        let f = to_nnf(&parse("F[0,40](((p1 || p3) -> F[0,20]p2) && G[0,30]p1)").unwrap());
        let occs = lit_occurrences(&f).unwrap();
        let p3 = occs.iter().find(|o| o.atom.name() == "p3").unwrap();
        let mutated = substitute_occurrence(&f, p3, Replacement::Bottom).unwrap();
        assert_eq!(
            mutated.to_string(),
            "F[0,40](((!p1 && false) || F[0,20]p2) && G[0,30]p1)"
        );
        // All other occurrences survive untouched.
        let remaining = lit_occurrences(&mutated).unwrap();
        assert_eq!(remaining.len(), occs.len() - 1);
    }

    #[test]
    fn substituting_the_root_literal() {
        let f = parse("p").unwrap();
        let occ = &lit_occurrences(&f).unwrap()[0];
        assert_eq!(
            substitute_occurrence(&f, occ, Replacement::Bottom).unwrap(),
            Formula::False
        );
    }

    #[test]
    fn top_substitution_in_conjunction() {
        let f = parse("a && F[0,5]b").unwrap();
        let occs = lit_occurrences(&f).unwrap();
        let mutated = substitute_occurrence(&f, &occs[0], Replacement::Top).unwrap();
        assert_eq!(mutated.to_string(), "(true && F[0,5]b)");
    }

    #[test]
    fn stale_path_is_rejected() {
        let f = parse("a && b").unwrap();
        let bogus = LiteralOccurrence {
            path: vec![0, 0],
            polarity: Polarity::Positive,
            atom: Atom::prop("a"),
        };
        assert_eq!(
            substitute_occurrence(&f, &bogus, Replacement::Top),
            Err(OccurrenceError::NotALiteral)
        );
    }
}
