//! Effective intervals: the time window in which each subformula can still
//! influence the truth value of the whole specification.
//!
//! Propagation starts from `[0,0]` at the root (only time zero matters for
//! the whole formula), passes through boolean connectives unchanged —
//! including implication, which forwards the window to both operands — and
//! shifts by interval addition under a temporal operator.
//!
//! Annotations live in a side table keyed by node path rather than on the
//! formula itself, which keeps formulas immutable and repeated analyses
//! idempotent.

use super::{Formula, Path};
use crate::interval::Interval;
use std::collections::BTreeMap;

/// Effective interval per node, keyed by path from the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EffectiveIntervals {
    map: BTreeMap<Path, Interval>,
}

impl EffectiveIntervals {
    pub fn get(&self, path: &[usize]) -> Option<&Interval> {
        self.map.get(path)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Path, &Interval)> {
        self.map.iter()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// Computes effective intervals for every node of `f`, rooted at `[0,0]`.
/// Accepts any formula shape; request-response formulas keep their
/// implications and both operands inherit the implication's window.
pub fn annotate_effective_intervals(f: &Formula) -> EffectiveIntervals {
    let mut map = BTreeMap::new();
    annotate(f, &mut Vec::new(), Interval::zero(), &mut map);
    EffectiveIntervals { map }
}

fn annotate(f: &Formula, path: &mut Path, window: Interval, map: &mut BTreeMap<Path, Interval>) {
    map.insert(path.clone(), window);
    match f {
        Formula::True | Formula::False | Formula::Atom(_) => {}
        Formula::Not(c) => {
            path.push(0);
            annotate(c, path, window, map);
            path.pop();
        }
        Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
            path.push(0);
            annotate(l, path, window, map);
            path.pop();
            path.push(1);
            annotate(r, path, window, map);
            path.pop();
        }
        Formula::Eventually(iv, c) | Formula::Always(iv, c) => {
            let shifted = window.add(iv);
            path.push(0);
            annotate(c, path, shifted, map);
            path.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::rational::rat;

    fn iv(l: i64, u: i64) -> Interval {
        Interval::closed(rat(l), rat(u)).unwrap()
    }

    #[test]
    fn nested_request_response_windows() {
        // G[1,2](F[3,5]b -> G[4,6](c -> F[0,2]d)): the outer antecedent is
        // observed in [1,2], the inner one in [5,8].
        let f = parse("G[1,2](F[3,5]b -> G[4,6](c -> F[0,2]d))").unwrap();
        let ei = annotate_effective_intervals(&f);
        assert_eq!(ei.get(&[]), Some(&Interval::zero()));
        // Node F[3,5]b is the antecedent of the outer implication.
        assert_eq!(ei.get(&[0, 0]), Some(&iv(1, 2)));
        // Node c is the antecedent of the inner implication.
        assert_eq!(ei.get(&[0, 1, 0, 0]), Some(&iv(5, 8)));
    }

    #[test]
    fn bare_atom_gets_the_root_window() {
        let ei = annotate_effective_intervals(&parse("p").unwrap());
        assert_eq!(ei.get(&[]), Some(&Interval::zero()));
        assert_eq!(ei.len(), 1);
    }

    #[test]
    fn temporal_chain_accumulates() {
        let f = parse("F[0,10]G[0,20]p").unwrap();
        let ei = annotate_effective_intervals(&f);
        assert_eq!(ei.get(&[0, 0]), Some(&iv(0, 30)));
    }

    #[test]
    fn every_node_is_annotated() {
        let f = parse("(a && F[0,1]b) -> !c").unwrap();
        let ei = annotate_effective_intervals(&f);
        assert_eq!(ei.len(), f.walk().len());
    }
}
