//! Negation normal form, dotted negation and weight.
//!
//! In negation normal form negation occurs only in front of concept names and
//! in front of inclusions `⊤ ⊑ C`, every inclusion has `⊤` on the left, and
//! negated role assertions use the dedicated constructor.

use super::{Concept, Formula};

impl Concept {
    /// Negation normal form.
    pub fn nnf(&self) -> Concept {
        match self {
            Concept::Name(_) | Concept::Top | Concept::Bot => self.clone(),
            Concept::Not(c) => c.negated_nnf(),
            Concept::And(a, b) => Concept::and(a.nnf(), b.nnf()),
            Concept::Or(a, b) => Concept::or(a.nnf(), b.nnf()),
            Concept::Exists(r, c) => Concept::exists(r, c.nnf()),
            Concept::Forall(r, c) => Concept::forall(r, c.nnf()),
            Concept::Box(i, c) => Concept::boxed(*i, c.nnf()),
            Concept::Diamond(i, c) => Concept::diamond(*i, c.nnf()),
        }
    }

    /// Negation normal form of the negation of `self`.
    fn negated_nnf(&self) -> Concept {
        match self {
            Concept::Name(_) => Concept::not(self.clone()),
            Concept::Top => Concept::Bot,
            Concept::Bot => Concept::Top,
            Concept::Not(c) => c.nnf(),
            Concept::And(a, b) => Concept::or(a.negated_nnf(), b.negated_nnf()),
            Concept::Or(a, b) => Concept::and(a.negated_nnf(), b.negated_nnf()),
            Concept::Exists(r, c) => Concept::forall(r, c.negated_nnf()),
            Concept::Forall(r, c) => Concept::exists(r, c.negated_nnf()),
            Concept::Box(i, c) => Concept::diamond(*i, c.negated_nnf()),
            Concept::Diamond(i, c) => Concept::boxed(*i, c.negated_nnf()),
        }
    }

    /// Dotted negation: the negation normal form of `¬self`. On a concept in
    /// negation normal form this is the syntactic dual.
    pub fn dot_negate(&self) -> Concept {
        self.negated_nnf()
    }

    pub fn is_nnf(&self) -> bool {
        match self {
            Concept::Not(c) => matches!(**c, Concept::Name(_)),
            _ => self.children().iter().all(|c| c.is_nnf()),
        }
    }

    /// Weight of a concept in negation normal form. Literals weigh 0, `⊤` and
    /// `⊥` weigh 1 (they stand for `A0 ⊔ ¬A0` and `A0 ⊓ ¬A0`), each other
    /// constructor adds 1.
    pub fn weight(&self) -> usize {
        match self {
            Concept::Name(_) => 0,
            Concept::Not(c) => c.weight(),
            Concept::Top | Concept::Bot => 1,
            _ => 1 + self.children().iter().map(|c| c.weight()).sum::<usize>(),
        }
    }
}

impl Formula {
    /// Negation normal form.
    pub fn nnf(&self) -> Formula {
        match self {
            Formula::Sub(l, r) => {
                if *l == Concept::Top {
                    Formula::Sub(Concept::Top, r.nnf())
                } else {
                    Formula::Sub(Concept::Top, Concept::or(l.dot_negate(), r.nnf()))
                }
            }
            Formula::Assert(c, a) => Formula::Assert(c.nnf(), a.clone()),
            Formula::Role(..) | Formula::NegRole(..) => self.clone(),
            Formula::Not(g) => g.negated_nnf(),
            Formula::And(a, b) => Formula::and(a.nnf(), b.nnf()),
            Formula::Or(a, b) => Formula::or(a.nnf(), b.nnf()),
            Formula::Box(i, g) => Formula::boxed(*i, g.nnf()),
            Formula::Diamond(i, g) => Formula::diamond(*i, g.nnf()),
        }
    }

    fn negated_nnf(&self) -> Formula {
        match self {
            Formula::Sub(..) => Formula::not(self.nnf()),
            Formula::Assert(c, a) => Formula::Assert(c.dot_negate(), a.clone()),
            Formula::Role(r, a, b) => Formula::NegRole(r.clone(), a.clone(), b.clone()),
            Formula::NegRole(r, a, b) => Formula::Role(r.clone(), a.clone(), b.clone()),
            Formula::Not(g) => g.nnf(),
            Formula::And(a, b) => Formula::or(a.negated_nnf(), b.negated_nnf()),
            Formula::Or(a, b) => Formula::and(a.negated_nnf(), b.negated_nnf()),
            Formula::Box(i, g) => Formula::diamond(*i, g.negated_nnf()),
            Formula::Diamond(i, g) => Formula::boxed(*i, g.negated_nnf()),
        }
    }

    /// Dotted negation: the negation normal form of `¬self`.
    pub fn dot_negate(&self) -> Formula {
        self.negated_nnf()
    }

    pub fn is_nnf(&self) -> bool {
        match self {
            Formula::Sub(l, r) => *l == Concept::Top && r.is_nnf(),
            Formula::Assert(c, _) => c.is_nnf(),
            Formula::Role(..) | Formula::NegRole(..) => true,
            Formula::Not(g) => matches!(&**g, Formula::Sub(..)) && g.is_nnf(),
            _ => self.children().iter().all(|g| g.is_nnf()),
        }
    }

    /// Weight of a formula in negation normal form. Inclusions, assertions
    /// and their negations weigh 0, each connective and modal operator adds 1.
    pub fn weight(&self) -> usize {
        match self {
            Formula::Sub(..)
            | Formula::Assert(..)
            | Formula::Role(..)
            | Formula::NegRole(..)
            | Formula::Not(..) => 0,
            _ => 1 + self.children().iter().map(|g| g.weight()).sum::<usize>(),
        }
    }
}
