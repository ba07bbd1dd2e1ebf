//! Interning of the concepts and formulas of a fragment.
//!
//! `⊤` and `⊥` are interned as `A0 ⊔ ¬A0` and `A0 ⊓ ¬A0` over the reserved
//! concept name, so the rules treat them like any other disjunction and
//! conjunction while printing keeps the original symbols.

use super::{Term, TableauError};
use crate::syntax::{fragment, Agent, Concept, Formula, RESERVED_CONCEPT};
use std::collections::HashMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum CNode {
    Name(u32),
    Neg(u32),
    And(u32, u32),
    Or(u32, u32),
    Exists(u32, u32),
    Forall(u32, u32),
    Box(Agent, u32),
    Diamond(Agent, u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum FNode {
    /// `⊤ ⊑ C`.
    Sub(u32),
    /// `¬(⊤ ⊑ C)`.
    NotSub(u32),
    Assert(u32, Term),
    Role(u32, Term, Term),
    NegRole(u32, Term, Term),
    And(u32, u32),
    Or(u32, u32),
    Box(Agent, u32),
    Diamond(Agent, u32),
}

#[derive(Clone, Debug)]
pub(crate) struct Interner {
    pub names: Vec<String>,
    pub roles: Vec<String>,
    pub inds: Vec<String>,
    concepts: Vec<(Concept, CNode)>,
    cmap: HashMap<Concept, u32>,
    cneg: Vec<u32>,
    formulas: Vec<(Formula, FNode)>,
    fmap: HashMap<Formula, u32>,
    fneg: Vec<u32>,
}

fn not_nnf(what: &dyn std::fmt::Display) -> TableauError {
    TableauError::NotNnf(what.to_string())
}

impl Interner {
    /// Interns every member of the fragment of `phi`, which must be in NNF,
    /// and closes the tables under dotted negation.
    pub fn new(phi: &Formula) -> Result<Interner, TableauError> {
        let frag = fragment(phi);
        let mut int = Interner {
            names: vec![],
            roles: frag.roles.iter().cloned().collect(),
            inds: frag.individuals.iter().cloned().collect(),
            concepts: vec![],
            cmap: HashMap::new(),
            cneg: vec![],
            formulas: vec![],
            fmap: HashMap::new(),
            fneg: vec![],
        };
        int.formula(phi)?;
        for c in &frag.concepts {
            int.concept(c)?;
        }
        for f in &frag.formulas {
            int.formula(f)?;
        }
        let mut i = 0;
        while i < int.concepts.len() {
            let neg = int.concepts[i].0.dot_negate();
            let id = int.concept(&neg)?;
            int.cneg.push(id);
            i += 1;
        }
        let mut i = 0;
        while i < int.formulas.len() {
            let neg = int.formulas[i].0.dot_negate();
            let id = int.formula(&neg)?;
            int.fneg.push(id);
            i += 1;
        }
        // Negating formulas may add concepts.
        while int.cneg.len() < int.concepts.len() {
            let neg = int.concepts[int.cneg.len()].0.dot_negate();
            let id = int.concept(&neg)?;
            int.cneg.push(id);
        }
        Ok(int)
    }

    fn name(&mut self, n: &str) -> u32 {
        match self.names.iter().position(|x| x == n) {
            Some(i) => i as u32,
            None => {
                self.names.push(n.to_string());
                self.names.len() as u32 - 1
            }
        }
    }

    fn role(&self, r: &str) -> u32 {
        self.roles.iter().position(|x| x == r).expect("role from the fragment") as u32
    }

    pub fn ind(&self, a: &str) -> Term {
        self.inds.iter().position(|x| x == a).expect("individual from the fragment") as Term
    }

    fn concept(&mut self, c: &Concept) -> Result<u32, TableauError> {
        if let Some(&id) = self.cmap.get(c) {
            return Ok(id);
        }
        let reserved = || Concept::name(RESERVED_CONCEPT);
        let node = match c {
            Concept::Name(n) => CNode::Name(self.name(n)),
            Concept::Not(x) => match &**x {
                Concept::Name(n) => CNode::Neg(self.name(n)),
                _ => return Err(not_nnf(c)),
            },
            Concept::Top => CNode::Or(self.concept(&reserved())?, self.concept(&Concept::not(reserved()))?),
            Concept::Bot => CNode::And(self.concept(&reserved())?, self.concept(&Concept::not(reserved()))?),
            Concept::And(a, b) => CNode::And(self.concept(a)?, self.concept(b)?),
            Concept::Or(a, b) => CNode::Or(self.concept(a)?, self.concept(b)?),
            Concept::Exists(r, x) => CNode::Exists(self.role(r), self.concept(x)?),
            Concept::Forall(r, x) => CNode::Forall(self.role(r), self.concept(x)?),
            Concept::Box(i, x) => CNode::Box(*i, self.concept(x)?),
            Concept::Diamond(i, x) => CNode::Diamond(*i, self.concept(x)?),
        };
        let id = self.concepts.len() as u32;
        self.concepts.push((c.clone(), node));
        self.cmap.insert(c.clone(), id);
        Ok(id)
    }

    fn formula(&mut self, f: &Formula) -> Result<u32, TableauError> {
        if let Some(&id) = self.fmap.get(f) {
            return Ok(id);
        }
        let node = match f {
            Formula::Sub(l, r) if *l == Concept::Top => FNode::Sub(self.concept(r)?),
            Formula::Sub(..) => return Err(not_nnf(f)),
            Formula::Not(g) => match &**g {
                Formula::Sub(l, r) if *l == Concept::Top => FNode::NotSub(self.concept(r)?),
                _ => return Err(not_nnf(f)),
            },
            Formula::Assert(c, a) => FNode::Assert(self.concept(c)?, self.ind(a)),
            Formula::Role(r, a, b) => FNode::Role(self.role(r), self.ind(a), self.ind(b)),
            Formula::NegRole(r, a, b) => FNode::NegRole(self.role(r), self.ind(a), self.ind(b)),
            Formula::And(a, b) => FNode::And(self.formula(a)?, self.formula(b)?),
            Formula::Or(a, b) => FNode::Or(self.formula(a)?, self.formula(b)?),
            Formula::Box(i, g) => FNode::Box(*i, self.formula(g)?),
            Formula::Diamond(i, g) => FNode::Diamond(*i, self.formula(g)?),
        };
        let id = self.formulas.len() as u32;
        self.formulas.push((f.clone(), node));
        self.fmap.insert(f.clone(), id);
        Ok(id)
    }

    pub fn cnode(&self, id: u32) -> CNode {
        self.concepts[id as usize].1
    }

    pub fn fnode(&self, id: u32) -> FNode {
        self.formulas[id as usize].1
    }

    pub fn concept_of(&self, id: u32) -> &Concept {
        &self.concepts[id as usize].0
    }

    pub fn formula_of(&self, id: u32) -> &Formula {
        &self.formulas[id as usize].0
    }

    pub fn cneg(&self, id: u32) -> u32 {
        self.cneg[id as usize]
    }

    pub fn fneg(&self, id: u32) -> u32 {
        self.fneg[id as usize]
    }

    #[cfg(test)]
    pub fn concept_id(&self, c: &Concept) -> Option<u32> {
        self.cmap.get(c).copied()
    }

    pub fn formula_id(&self, f: &Formula) -> Option<u32> {
        self.fmap.get(f).copied()
    }

    #[cfg(test)]
    pub fn n_concepts(&self) -> usize {
        self.concepts.len()
    }
}
