//! The closure of a formula under subexpressions and dotted negation.

use super::{Concept, Formula};
use std::collections::BTreeSet;

/// Concepts and formulas relevant to a formula in negation normal form.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Fragment {
    /// Subconcepts, their dotted negations, `⊤` and `⊥`.
    pub concepts: BTreeSet<Concept>,
    /// Subformulas and their dotted negations.
    pub formulas: BTreeSet<Formula>,
    pub roles: BTreeSet<String>,
    pub individuals: BTreeSet<String>,
}

impl Fragment {
    /// Total number of formulas, concepts, roles and individuals.
    pub fn len(&self) -> usize {
        self.concepts.len() + self.formulas.len() + self.roles.len() + self.individuals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Computes the fragment of `phi`, which is first brought into negation
/// normal form.
pub fn fragment(phi: &Formula) -> Fragment {
    let phi = phi.nnf();
    let mut subs = BTreeSet::new();
    phi.subformulas(&mut subs);
    let mut concepts = BTreeSet::new();
    concepts.insert(Concept::Top);
    for f in &subs {
        for c in f.concepts() {
            c.subconcepts(&mut concepts);
        }
    }
    let mut concepts_neg = concepts.clone();
    concepts_neg.extend(concepts.iter().map(|c| c.dot_negate()));
    let mut formulas = subs.clone();
    formulas.extend(subs.iter().map(|f| f.dot_negate()));
    let sig = phi.signature();
    Fragment {
        concepts: concepts_neg,
        formulas,
        roles: sig.roles,
        individuals: sig.individuals,
    }
}
