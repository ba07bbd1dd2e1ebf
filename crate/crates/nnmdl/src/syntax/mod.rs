//! Abstract syntax of multi-agent non-normal modal description logic.
//!
//! Concepts are built from concept names with the Boolean constructors, the
//! role restrictions `some r.C` / `all r.C` and the agent-indexed modal
//! operators. Formulas are concept inclusions, assertions and role assertions
//! closed under the Boolean connectives and the modal operators.

mod fragment;
mod nnf;
mod parse;
mod print;

pub use fragment::{fragment, Fragment};
pub use parse::{parse_concept, parse_formula, SyntaxError};

use std::collections::BTreeSet;

/// Agent index, counted from 1.
pub type Agent = u32;

/// Concept name reserved for the expansion of `top` and `bot`.
pub const RESERVED_CONCEPT: &str = "A0";

/// A concept expression.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Concept {
    Name(String),
    /// Sugar for `A0 | ~A0`.
    Top,
    /// Sugar for `A0 & ~A0`.
    Bot,
    Not(Box<Concept>),
    And(Box<Concept>, Box<Concept>),
    Or(Box<Concept>, Box<Concept>),
    Exists(String, Box<Concept>),
    Forall(String, Box<Concept>),
    Box(Agent, Box<Concept>),
    Diamond(Agent, Box<Concept>),
}

/// A formula.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    /// Concept inclusion `lhs ⊑ rhs`.
    Sub(Concept, Concept),
    /// Concept assertion `C(a)`.
    Assert(Concept, String),
    /// Role assertion `r(a, b)`.
    Role(String, String, String),
    /// Negated role assertion `¬r(a, b)`.
    NegRole(String, String, String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Box(Agent, Box<Formula>),
    Diamond(Agent, Box<Formula>),
}

/// Either a concept or a formula, for operations defined on both.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Concept(Concept),
    Formula(Formula),
}

impl Concept {
    pub fn name(n: &str) -> Concept {
        Concept::Name(n.to_string())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(c: Concept) -> Concept {
        Concept::Not(Box::new(c))
    }

    pub fn and(a: Concept, b: Concept) -> Concept {
        Concept::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Concept, b: Concept) -> Concept {
        Concept::Or(Box::new(a), Box::new(b))
    }

    pub fn exists(r: &str, c: Concept) -> Concept {
        Concept::Exists(r.to_string(), Box::new(c))
    }

    pub fn forall(r: &str, c: Concept) -> Concept {
        Concept::Forall(r.to_string(), Box::new(c))
    }

    pub fn boxed(i: Agent, c: Concept) -> Concept {
        Concept::Box(i, Box::new(c))
    }

    pub fn diamond(i: Agent, c: Concept) -> Concept {
        Concept::Diamond(i, Box::new(c))
    }

    /// Direct subconcepts.
    pub fn children(&self) -> Vec<&Concept> {
        match self {
            Concept::Name(_) | Concept::Top | Concept::Bot => vec![],
            Concept::Not(c)
            | Concept::Exists(_, c)
            | Concept::Forall(_, c)
            | Concept::Box(_, c)
            | Concept::Diamond(_, c) => vec![c],
            Concept::And(a, b) | Concept::Or(a, b) => vec![a, b],
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    /// Nesting depth of modal operators.
    pub fn modal_depth(&self) -> usize {
        let inner = self.children().iter().map(|c| c.modal_depth()).max().unwrap_or(0);
        match self {
            Concept::Box(..) | Concept::Diamond(..) => inner + 1,
            _ => inner,
        }
    }

    /// Largest agent index used, or 0.
    pub fn max_agent(&self) -> Agent {
        let inner = self.children().iter().map(|c| c.max_agent()).max().unwrap_or(0);
        match self {
            Concept::Box(i, _) | Concept::Diamond(i, _) => inner.max(*i),
            _ => inner,
        }
    }

    /// True when some modal operator occurs in the concept.
    pub fn is_modal(&self) -> bool {
        self.modal_depth() > 0
    }

    /// Concept names, role names and individual names occurring in the concept.
    pub fn collect_signature(&self, sig: &mut Signature) {
        match self {
            Concept::Name(n) => {
                sig.concepts.insert(n.clone());
            }
            Concept::Exists(r, _) | Concept::Forall(r, _) => {
                sig.roles.insert(r.clone());
            }
            _ => {}
        }
        for c in self.children() {
            c.collect_signature(sig);
        }
    }

    /// All subconcepts, including the concept itself.
    pub fn subconcepts(&self, out: &mut BTreeSet<Concept>) {
        if out.insert(self.clone()) {
            for c in self.children() {
                c.subconcepts(out);
            }
        }
    }
}

impl Formula {
    pub fn sub(lhs: Concept, rhs: Concept) -> Formula {
        Formula::Sub(lhs, rhs)
    }

    pub fn assert(c: Concept, a: &str) -> Formula {
        Formula::Assert(c, a.to_string())
    }

    pub fn role(r: &str, a: &str, b: &str) -> Formula {
        Formula::Role(r.to_string(), a.to_string(), b.to_string())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn boxed(i: Agent, f: Formula) -> Formula {
        Formula::Box(i, Box::new(f))
    }

    pub fn diamond(i: Agent, f: Formula) -> Formula {
        Formula::Diamond(i, Box::new(f))
    }

    /// The formula `⊤ ⊑ ⊤`, true at every world.
    pub fn verum() -> Formula {
        Formula::Sub(Concept::Top, Concept::Top)
    }

    /// The formula `⊤ ⊑ ⊥`, false at every world (domains are non-empty).
    pub fn falsum() -> Formula {
        Formula::Sub(Concept::Top, Concept::Bot)
    }

    /// Conjunction of a non-empty list, associated to the left.
    pub fn conjunction(items: Vec<Formula>) -> Option<Formula> {
        items.into_iter().reduce(Formula::and)
    }

    /// Disjunction of a non-empty list, associated to the left.
    pub fn disjunction(items: Vec<Formula>) -> Option<Formula> {
        items.into_iter().reduce(Formula::or)
    }

    /// Direct subformulas.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Sub(..) | Formula::Assert(..) | Formula::Role(..) | Formula::NegRole(..) => {
                vec![]
            }
            Formula::Not(f) | Formula::Box(_, f) | Formula::Diamond(_, f) => vec![f],
            Formula::And(a, b) | Formula::Or(a, b) => vec![a, b],
        }
    }

    /// Concepts occurring directly in this node.
    pub fn concepts(&self) -> Vec<&Concept> {
        match self {
            Formula::Sub(a, b) => vec![a, b],
            Formula::Assert(c, _) => vec![c],
            _ => vec![],
        }
    }

    /// Number of AST nodes, counting concept nodes.
    pub fn size(&self) -> usize {
        1 + self.concepts().iter().map(|c| c.size()).sum::<usize>()
            + self.children().iter().map(|f| f.size()).sum::<usize>()
    }

    /// Nesting depth of modal operators, over formulas and concepts.
    pub fn modal_depth(&self) -> usize {
        let concepts = self.concepts().iter().map(|c| c.modal_depth()).max().unwrap_or(0);
        let inner = self.children().iter().map(|f| f.modal_depth()).max().unwrap_or(0);
        match self {
            Formula::Box(..) | Formula::Diamond(..) => inner + 1,
            _ => inner.max(concepts),
        }
    }

    /// Largest agent index used, or 0.
    pub fn max_agent(&self) -> Agent {
        let concepts = self.concepts().iter().map(|c| c.max_agent()).max().unwrap_or(0);
        let inner = self.children().iter().map(|f| f.max_agent()).max().unwrap_or(0);
        let own = match self {
            Formula::Box(i, _) | Formula::Diamond(i, _) => *i,
            _ => 0,
        };
        concepts.max(inner).max(own)
    }

    /// True when some concept in the formula contains a modal operator.
    pub fn has_modal_concept(&self) -> bool {
        self.first_modal_concept().is_some()
    }

    /// The first modalised concept found in a left-to-right traversal.
    pub fn first_modal_concept(&self) -> Option<&Concept> {
        for c in self.concepts() {
            if let Some(m) = first_modal_in(c) {
                return Some(m);
            }
        }
        self.children().into_iter().find_map(|f| f.first_modal_concept())
    }

    /// Names occurring in the formula.
    pub fn signature(&self) -> Signature {
        let mut sig = Signature::default();
        self.collect_signature(&mut sig);
        sig
    }

    pub fn collect_signature(&self, sig: &mut Signature) {
        match self {
            Formula::Assert(_, a) => {
                sig.individuals.insert(a.clone());
            }
            Formula::Role(r, a, b) | Formula::NegRole(r, a, b) => {
                sig.roles.insert(r.clone());
                sig.individuals.insert(a.clone());
                sig.individuals.insert(b.clone());
            }
            _ => {}
        }
        for c in self.concepts() {
            c.collect_signature(sig);
        }
        for f in self.children() {
            f.collect_signature(sig);
        }
    }

    /// All subformulas, including the formula itself.
    pub fn subformulas(&self, out: &mut BTreeSet<Formula>) {
        if out.insert(self.clone()) {
            for f in self.children() {
                f.subformulas(out);
            }
        }
    }
}

fn first_modal_in(c: &Concept) -> Option<&Concept> {
    match c {
        Concept::Box(..) | Concept::Diamond(..) => Some(c),
        _ => c.children().into_iter().find_map(first_modal_in),
    }
}

/// Concept, role and individual names.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    pub concepts: BTreeSet<String>,
    pub roles: BTreeSet<String>,
    pub individuals: BTreeSet<String>,
}

impl Signature {
    pub fn union(&self, other: &Signature) -> Signature {
        Signature {
            concepts: self.concepts.union(&other.concepts).cloned().collect(),
            roles: self.roles.union(&other.roles).cloned().collect(),
            individuals: self.individuals.union(&other.individuals).cloned().collect(),
        }
    }
}

impl Expr {
    pub fn dot_negate(&self) -> Expr {
        match self {
            Expr::Concept(c) => Expr::Concept(c.dot_negate()),
            Expr::Formula(f) => Expr::Formula(f.dot_negate()),
        }
    }

    pub fn weight(&self) -> usize {
        match self {
            Expr::Concept(c) => c.weight(),
            Expr::Formula(f) => f.weight(),
        }
    }
}

impl std::fmt::Display for Expr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Expr::Concept(c) => c.fmt(f),
            Expr::Formula(x) => x.fmt(f),
        }
    }
}
