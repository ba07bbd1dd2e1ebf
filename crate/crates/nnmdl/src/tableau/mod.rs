//! Labelled tableau deciding satisfiability of formulas in negation normal
//! form for a logic given by its frame letters.
//!
//! A completion set is a family of labelled constraint systems `S_0, S_1, …`.
//! Each label becomes a world of the extracted model. Rules are applied with
//! the non-generating group exhausted before any generating rule fires, and
//! nondeterministic choices are explored depth first.

mod intern;
pub(crate) mod rules;
mod trace;

pub use rules::{Rule, RuleInstance};
pub use trace::TraceStep;

use crate::logics::{Letter, Letters, LogicSpec};
use crate::model_extract::extract_model;
use crate::semantics::NeighbourhoodModel;
use crate::syntax::{Agent, Formula};
use intern::{CNode, FNode, Interner};
use std::collections::{BTreeMap, BTreeSet, HashSet};
use thiserror::Error;

/// A term: individuals are numbered `0..n` in name order, variables follow.
pub type Term = u32;

/// Default budget of rule applications.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableauError {
    #[error("formula is not in negation normal form: {0}")]
    NotNnf(String),
    #[error("branch {branch} is out of range for a rule with {count} branches")]
    InvalidBranch { branch: usize, count: usize },
    #[error("rule instance is not applicable: {0}")]
    NotApplicable(String),
    #[error("completion set is not complete and clash-free")]
    NotComplete,
}

/// The payload of a labelled constraint. Formulas are interned; concept and
/// role assertions on individuals are stored as constraints on terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Constraint {
    /// A formula other than an assertion.
    Formula(u32),
    Concept(u32, Term),
    Role(u32, Term, Term),
    NegRole(u32, Term, Term),
}

/// One labelled constraint system `S_n`.
#[derive(Clone, Debug, Default)]
pub(crate) struct Label {
    items: Vec<Constraint>,
    set: HashSet<Constraint>,
    terms: BTreeSet<Term>,
    concepts: BTreeMap<Term, BTreeSet<u32>>,
    succ: BTreeMap<(u32, Term), Vec<Term>>,
}

impl Label {
    fn contains(&self, c: &Constraint) -> bool {
        self.set.contains(c)
    }
}

/// A completion set.
#[derive(Clone, Debug, Default)]
pub struct CompletionSet {
    labels: Vec<Label>,
    clash: bool,
}

impl PartialEq for CompletionSet {
    fn eq(&self, other: &Self) -> bool {
        self.clash == other.clash
            && self.labels.len() == other.labels.len()
            && self.labels.iter().zip(&other.labels).all(|(a, b)| a.items == b.items)
    }
}

impl Eq for CompletionSet {}

impl CompletionSet {
    pub fn n_labels(&self) -> usize {
        self.labels.len()
    }

    /// The constraints of `S_n` in insertion order.
    pub fn constraints(&self, n: usize) -> &[Constraint] {
        &self.labels[n].items
    }

    pub fn contains(&self, n: usize, c: &Constraint) -> bool {
        self.labels.get(n).is_some_and(|l| l.contains(c))
    }

    /// Terms occurring in `S_n` through concept or role constraints.
    pub fn terms(&self, n: usize) -> &BTreeSet<Term> {
        &self.labels[n].terms
    }

    /// Total number of constraints.
    pub fn len(&self) -> usize {
        self.labels.iter().map(|l| l.items.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Counters of a run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub applications: u64,
    pub branches: u64,
    pub max_labels: usize,
    pub max_terms: usize,
}

/// Outcome of a tableau run.
#[derive(Clone, Debug)]
pub enum Verdict {
    Sat {
        completion: CompletionSet,
        model: NeighbourhoodModel,
    },
    Unsat,
    BudgetExceeded(Stats),
}

impl Verdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, Verdict::Sat { .. })
    }

    pub fn is_unsat(&self) -> bool {
        matches!(self, Verdict::Unsat)
    }
}

/// A verdict with the statistics of the run and the trace of one branch:
/// the successful branch for a satisfiable input, otherwise the first branch
/// that closed.
#[derive(Clone, Debug)]
pub struct Solution {
    pub verdict: Verdict,
    pub stats: Stats,
    pub trace: Vec<TraceStep>,
}

/// The tableau for one formula and one logic.
#[derive(Clone, Debug)]
pub struct Tableau {
    phi: Formula,
    spec: LogicSpec,
    letters: Letters,
    pub(crate) int: Interner,
    root: Constraint,
    n_agents: Agent,
}

impl Tableau {
    /// Prepares the tableau for `phi`, which must be in negation normal form.
    /// The rules are those of every letter the spec implies. With the letters
    /// as given, N and D without P would accept □⊥(a), which no frame of
    /// the logic satisfies.
    pub fn new(phi: &Formula, spec: LogicSpec) -> Result<Tableau, TableauError> {
        if !phi.is_nnf() {
            return Err(TableauError::NotNnf(phi.to_string()));
        }
        let int = Interner::new(phi)?;
        let fid = int.formula_id(phi).expect("root is interned");
        let mut t = Tableau {
            phi: phi.clone(),
            spec,
            letters: spec.closure(),
            int,
            root: Constraint::Formula(fid),
            n_agents: phi.max_agent().max(1),
        };
        t.root = t.item(fid);
        Ok(t)
    }

    pub fn formula(&self) -> &Formula {
        &self.phi
    }

    pub fn spec(&self) -> LogicSpec {
        self.spec
    }

    pub fn n_agents(&self) -> Agent {
        self.n_agents
    }

    pub(crate) fn has(&self, l: Letter) -> bool {
        self.letters.contains(l)
    }

    pub fn n_individuals(&self) -> usize {
        self.int.inds.len()
    }

    pub fn individuals(&self) -> &[String] {
        &self.int.inds
    }

    /// The interned name of a concept name index.
    pub(crate) fn concept_name(&self, k: u32) -> &str {
        &self.int.names[k as usize]
    }

    /// The concept name of an atomic concept id.
    pub(crate) fn atomic_name(&self, k: u32) -> Option<&str> {
        match self.int.cnode(k) {
            CNode::Name(a) => Some(self.concept_name(a)),
            _ => None,
        }
    }

    pub(crate) fn role_name(&self, r: u32) -> &str {
        &self.int.roles[r as usize]
    }

    pub fn term_name(&self, x: Term) -> String {
        let ni = self.int.inds.len() as Term;
        if x < ni {
            self.int.inds[x as usize].clone()
        } else {
            format!("v{}", x - ni)
        }
    }

    pub fn is_variable(&self, x: Term) -> bool {
        x as usize >= self.int.inds.len()
    }

    /// The constraint standing for the interned formula `fid`.
    pub(crate) fn item(&self, fid: u32) -> Constraint {
        match self.int.fnode(fid) {
            FNode::Assert(c, a) => Constraint::Concept(c, a),
            FNode::Role(r, a, b) => Constraint::Role(r, a, b),
            FNode::NegRole(r, a, b) => Constraint::NegRole(r, a, b),
            _ => Constraint::Formula(fid),
        }
    }

    /// The dotted negation of a constraint.
    pub(crate) fn negate(&self, c: Constraint) -> Constraint {
        match c {
            Constraint::Formula(f) => self.item(self.int.fneg(f)),
            Constraint::Concept(k, x) => Constraint::Concept(self.int.cneg(k), x),
            Constraint::Role(r, a, b) => Constraint::NegRole(r, a, b),
            Constraint::NegRole(r, a, b) => Constraint::Role(r, a, b),
        }
    }

    /// The agent of a box constraint.
    pub(crate) fn box_agent(&self, c: Constraint) -> Option<Agent> {
        match c {
            Constraint::Formula(f) => match self.int.fnode(f) {
                FNode::Box(i, _) => Some(i),
                _ => None,
            },
            Constraint::Concept(k, _) => match self.int.cnode(k) {
                CNode::Box(i, _) => Some(i),
                _ => None,
            },
            _ => None,
        }
    }

    /// The agent of a diamond constraint.
    pub(crate) fn diamond_agent(&self, c: Constraint) -> Option<Agent> {
        match c {
            Constraint::Formula(f) => match self.int.fnode(f) {
                FNode::Diamond(i, _) => Some(i),
                _ => None,
            },
            Constraint::Concept(k, _) => match self.int.cnode(k) {
                CNode::Diamond(i, _) => Some(i),
                _ => None,
            },
            _ => None,
        }
    }

    /// The constraint under the modal operator of a box or diamond
    /// constraint, on the same term.
    pub(crate) fn body(&self, c: Constraint) -> Constraint {
        match c {
            Constraint::Formula(f) => match self.int.fnode(f) {
                FNode::Box(_, g) | FNode::Diamond(_, g) => self.item(g),
                _ => unreachable!("body of a non-modal constraint"),
            },
            Constraint::Concept(k, x) => match self.int.cnode(k) {
                CNode::Box(_, d) | CNode::Diamond(_, d) => Constraint::Concept(d, x),
                _ => unreachable!("body of a non-modal constraint"),
            },
            _ => unreachable!("body of a role constraint"),
        }
    }

    /// The initial completion set `{0 : φ}`.
    pub fn initialize(&self) -> CompletionSet {
        let mut s = CompletionSet::default();
        self.new_label(&mut s);
        self.add(&mut s, 0, self.root);
        s
    }

    pub(crate) fn new_label(&self, s: &mut CompletionSet) -> usize {
        s.labels.push(Label::default());
        s.labels.len() - 1
    }

    /// Adds a constraint, keeping the clash flag and the indexes up to date.
    /// Returns whether the constraint is new.
    pub(crate) fn add(&self, s: &mut CompletionSet, n: usize, c: Constraint) -> bool {
        if s.labels[n].contains(&c) {
            return false;
        }
        let complement = match c {
            Constraint::Formula(f) => match self.int.fnode(f) {
                FNode::Sub(_) | FNode::NotSub(_) => Some(self.negate(c)),
                _ => None,
            },
            Constraint::Concept(k, _) => match self.int.cnode(k) {
                CNode::Name(_) | CNode::Neg(_) => Some(self.negate(c)),
                _ => None,
            },
            Constraint::Role(..) | Constraint::NegRole(..) => Some(self.negate(c)),
        };
        let label = &mut s.labels[n];
        if complement.is_some_and(|d| label.contains(&d)) {
            s.clash = true;
        }
        label.items.push(c);
        label.set.insert(c);
        match c {
            Constraint::Concept(k, x) => {
                label.terms.insert(x);
                label.concepts.entry(x).or_default().insert(k);
            }
            Constraint::Role(r, x, y) => {
                label.terms.insert(x);
                label.terms.insert(y);
                label.concepts.entry(x).or_default();
                label.concepts.entry(y).or_default();
                label.succ.entry((r, x)).or_default().push(y);
            }
            _ => {}
        }
        true
    }

    pub fn has_clash(&self, s: &CompletionSet) -> bool {
        s.clash
    }

    /// The `<`-least variable blocking the variable `x` in `S_n`.
    pub fn blocker(&self, s: &CompletionSet, n: usize, x: Term) -> Option<Term> {
        if !self.is_variable(x) {
            return None;
        }
        let label = &s.labels[n];
        let mine = label.concepts.get(&x)?;
        label
            .concepts
            .range(self.int.inds.len() as Term..x)
            .find(|(_, theirs)| mine.is_subset(theirs))
            .map(|(&v, _)| v)
    }

    /// All variables blocking `x` in `S_n`.
    pub(crate) fn blockers(&self, s: &CompletionSet, n: usize, x: Term) -> Vec<Term> {
        if !self.is_variable(x) {
            return vec![];
        }
        let label = &s.labels[n];
        let Some(mine) = label.concepts.get(&x) else { return vec![] };
        label
            .concepts
            .range(self.int.inds.len() as Term..x)
            .filter(|(_, theirs)| mine.is_subset(theirs))
            .map(|(&v, _)| v)
            .collect()
    }

    pub fn is_blocked(&self, s: &CompletionSet, n: usize, x: Term) -> bool {
        self.blocker(s, n, x).is_some()
    }

    /// The `<`-minimal variable not occurring in `S_n`.
    pub(crate) fn fresh_variable(&self, s: &CompletionSet, n: usize) -> Term {
        let mut v = self.int.inds.len() as Term;
        for &t in s.labels[n].terms.range(v..) {
            if t != v {
                break;
            }
            v += 1;
        }
        v
    }

    /// Every applicable rule instance: the non-generating group first, then
    /// the generating group, each ordered by label and insertion index.
    pub fn applicable_rules(&self, s: &CompletionSet) -> Vec<RuleInstance> {
        let mut out = vec![];
        self.instances(s, false, &mut out, usize::MAX);
        self.instances(s, true, &mut out, usize::MAX);
        out
    }

    /// The instance the strategy applies next.
    pub fn next_rule(&self, s: &CompletionSet) -> Option<RuleInstance> {
        let mut out = vec![];
        self.instances(s, false, &mut out, 1);
        if out.is_empty() {
            self.instances(s, true, &mut out, 1);
        }
        out.pop()
    }

    pub fn is_complete(&self, s: &CompletionSet) -> bool {
        self.next_rule(s).is_none()
    }

    /// Applies branch `branch` of an instance and returns the expanded set.
    pub fn apply_rule(
        &self,
        s: &CompletionSet,
        inst: &RuleInstance,
        branch: usize,
    ) -> Result<CompletionSet, TableauError> {
        let mut next = s.clone();
        self.apply_in_place(&mut next, inst, branch)?;
        Ok(next)
    }

    /// Runs the strategy with a budget of rule applications.
    pub fn solve(&self, budget: u64) -> Solution {
        struct Frame {
            set: CompletionSet,
            trace: Vec<TraceStep>,
        }
        let mut stats = Stats::default();
        let mut first_closed: Option<Vec<TraceStep>> = None;
        let mut stack = vec![Frame {
            set: self.initialize(),
            trace: vec![],
        }];
        while let Some(Frame { mut set, mut trace }) = stack.pop() {
            stats.branches += 1;
            loop {
                stats.max_labels = stats.max_labels.max(set.labels.len());
                let terms = set.labels.iter().map(|l| l.terms.len()).max().unwrap_or(0);
                stats.max_terms = stats.max_terms.max(terms);
                if set.clash {
                    if first_closed.is_none() {
                        first_closed = Some(trace);
                    }
                    break;
                }
                let Some(inst) = self.next_rule(&set) else {
                    let model = extract_model(self, &set).expect("complete clash-free set");
                    return Solution {
                        verdict: Verdict::Sat {
                            completion: set,
                            model,
                        },
                        stats,
                        trace,
                    };
                };
                if stats.applications >= budget {
                    return Solution {
                        verdict: Verdict::BudgetExceeded(stats),
                        stats,
                        trace,
                    };
                }
                stats.applications += 1;
                let count = self.branch_count(&inst);
                // Later branches are pushed first so that branch 0 runs next.
                for b in (1..count).rev() {
                    let mut alt = set.clone();
                    let added = self.apply_in_place(&mut alt, &inst, b).expect("branch in range");
                    let mut alt_trace = trace.clone();
                    alt_trace.push(TraceStep {
                        instance: inst.clone(),
                        branch: b,
                        added,
                    });
                    stack.push(Frame {
                        set: alt,
                        trace: alt_trace,
                    });
                }
                let added = self.apply_in_place(&mut set, &inst, 0).expect("branch in range");
                trace.push(TraceStep {
                    instance: inst,
                    branch: 0,
                    added,
                });
            }
        }
        Solution {
            verdict: Verdict::Unsat,
            stats,
            trace: first_closed.unwrap_or_default(),
        }
    }

    /// Replays a trace from the initial completion set.
    pub fn replay(&self, steps: &[TraceStep]) -> Result<CompletionSet, TableauError> {
        let mut s = self.initialize();
        for step in steps {
            self.apply_in_place(&mut s, &step.instance, step.branch)?;
        }
        Ok(s)
    }
}

/// Decides `phi` (brought into negation normal form) for the logic `spec`.
pub fn solve(phi: &Formula, spec: LogicSpec, budget: u64) -> Result<Solution, TableauError> {
    Ok(Tableau::new(&phi.nnf(), spec)?.solve(budget))
}
