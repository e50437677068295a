//! Negation normal form.
//!
//! In NNF, negation sits only on atoms and implication is gone:
//! `a -> b` becomes `!a || b`, `!F[I]f` becomes `G[I]!f`, `!G[I]f` becomes
//! `F[I]!f`, and double negation cancels. Request-response formulas are
//! deliberately *not* normalized before antecedent-failure analysis; callers
//! apply this transformation only where an analysis requires it.

use super::Formula;

/// True when negation appears only directly above atoms and there is no
/// implication.
pub fn is_nnf(f: &Formula) -> bool {
    match f {
        Formula::True | Formula::False | Formula::Atom(_) => true,
        Formula::Not(c) => matches!(**c, Formula::Atom(_)),
        Formula::Implies(..) => false,
        Formula::And(l, r) | Formula::Or(l, r) => is_nnf(l) && is_nnf(r),
        Formula::Eventually(_, c) | Formula::Always(_, c) => is_nnf(c),
    }
}

/// Rewrites into negation normal form.
pub fn to_nnf(f: &Formula) -> Formula {
    match f {
        Formula::True | Formula::False | Formula::Atom(_) => f.clone(),
        Formula::And(l, r) => Formula::and(to_nnf(l), to_nnf(r)),
        Formula::Or(l, r) => Formula::or(to_nnf(l), to_nnf(r)),
        Formula::Implies(l, r) => Formula::or(negate(l), to_nnf(r)),
        Formula::Eventually(iv, c) => Formula::eventually(*iv, to_nnf(c)),
        Formula::Always(iv, c) => Formula::always(*iv, to_nnf(c)),
        Formula::Not(c) => negate(c),
    }
}

/// The NNF of `!f`; used to build entailment queries.
pub fn negate(f: &Formula) -> Formula {
    match f {
        Formula::True => Formula::False,
        Formula::False => Formula::True,
        Formula::Atom(_) => Formula::not(f.clone()),
        Formula::Not(c) => to_nnf(c),
        Formula::And(l, r) => Formula::or(negate(l), negate(r)),
        Formula::Or(l, r) => Formula::and(negate(l), negate(r)),
        Formula::Implies(l, r) => Formula::and(to_nnf(l), negate(r)),
        Formula::Eventually(iv, c) => Formula::always(*iv, negate(c)),
        Formula::Always(iv, c) => Formula::eventually(*iv, negate(c)),
    }
}
