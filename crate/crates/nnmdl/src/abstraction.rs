//! Satisfiability for formulas without modalised concepts, by propositional
//! abstraction.
//!
//! Every ALC atom (an inclusion, a concept assertion or a role assertion) is
//! replaced by a propositional letter. A valuation of the abstraction is
//! accepted when its atoms are jointly consistent in ALC and its boxed
//! subformulas meet the conditions of the logic, which are decided by
//! recursive calls on formulas of smaller modal depth.

use crate::logics::{Letter, LogicSpec};
use crate::syntax::{Agent, Formula};
use crate::tableau::{rules::subsets, Tableau, Verdict};
use std::collections::HashMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AbstractionError {
    #[error("the formula contains the modalised concept `{0}`")]
    ModalisedConceptPresent(String),
    #[error("budget of {0} steps exceeded")]
    BudgetExceeded(u64),
}

/// A propositional modal formula over letters `p0, p1, …`. Disjunction and
/// diamonds are expressed through negation, conjunction and boxes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Prop {
    Letter(usize),
    Not(Box<Prop>),
    And(Box<Prop>, Box<Prop>),
    Box(Agent, Box<Prop>),
}

impl Prop {
    #[allow(clippy::should_implement_trait)]
    pub fn not(p: Prop) -> Prop {
        Prop::Not(Box::new(p))
    }

    pub fn and(a: Prop, b: Prop) -> Prop {
        Prop::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Prop, b: Prop) -> Prop {
        Prop::not(Prop::and(Prop::not(a), Prop::not(b)))
    }

    pub fn boxed(i: Agent, p: Prop) -> Prop {
        Prop::Box(i, Box::new(p))
    }

    fn conjunction(items: impl IntoIterator<Item = Prop>) -> Prop {
        items.into_iter().reduce(Prop::and).expect("non-empty conjunction")
    }

    fn disjunction(items: impl IntoIterator<Item = Prop>) -> Prop {
        items.into_iter().reduce(Prop::or).expect("non-empty disjunction")
    }

    /// Letters occurring in the formula, ascending.
    pub fn letters(&self) -> Vec<usize> {
        let mut out = vec![];
        self.collect(&mut out, &mut vec![]);
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Distinct boxed subformulas in order of first occurrence.
    pub fn boxes(&self) -> Vec<Prop> {
        let mut out = vec![];
        self.collect(&mut vec![], &mut out);
        out
    }

    fn collect(&self, letters: &mut Vec<usize>, boxes: &mut Vec<Prop>) {
        match self {
            Prop::Letter(k) => letters.push(*k),
            Prop::Not(p) => p.collect(letters, boxes),
            Prop::And(a, b) => {
                a.collect(letters, boxes);
                b.collect(letters, boxes);
            }
            Prop::Box(_, p) => {
                if !boxes.contains(self) {
                    boxes.push(self.clone());
                }
                p.collect(letters, boxes);
            }
        }
    }
}

impl fmt::Display for Prop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prop::Letter(k) => write!(f, "p{k}"),
            Prop::Not(p) => write!(f, "~{p}"),
            Prop::And(a, b) => write!(f, "({a} /\\ {b})"),
            Prop::Box(i, p) => write!(f, "[{i}]{p}"),
        }
    }
}

/// A propositional abstraction: `sigma[k]` is the atom of letter `p_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropAbstraction {
    pub prop: Prop,
    pub sigma: Vec<Formula>,
}

impl PropAbstraction {
    /// Replaces each letter by its atom.
    pub fn concretize(&self, p: &Prop) -> Formula {
        match p {
            Prop::Letter(k) => self.sigma[*k].clone(),
            Prop::Not(q) => Formula::not(self.concretize(q)),
            Prop::And(a, b) => Formula::and(self.concretize(a), self.concretize(b)),
            Prop::Box(i, q) => Formula::boxed(*i, self.concretize(q)),
        }
    }
}

/// Abstracts a formula without modalised concepts.
pub fn prop_abstract(phi: &Formula) -> Result<PropAbstraction, AbstractionError> {
    if let Some(c) = phi.first_modal_concept() {
        return Err(AbstractionError::ModalisedConceptPresent(c.to_string()));
    }
    fn go(f: &Formula, sigma: &mut Vec<Formula>) -> Prop {
        let mut letter = |atom: Formula| {
            let k = sigma.iter().position(|a| *a == atom).unwrap_or_else(|| {
                sigma.push(atom);
                sigma.len() - 1
            });
            Prop::Letter(k)
        };
        match f {
            Formula::Sub(..) | Formula::Assert(..) | Formula::Role(..) => letter(f.clone()),
            Formula::NegRole(r, a, b) => Prop::not(letter(Formula::role(r, a, b))),
            Formula::Not(g) => Prop::not(go(g, sigma)),
            Formula::And(a, b) => {
                let a = go(a, sigma);
                Prop::and(a, go(b, sigma))
            }
            Formula::Or(a, b) => {
                let a = go(a, sigma);
                Prop::or(a, go(b, sigma))
            }
            Formula::Box(i, g) => Prop::boxed(*i, go(g, sigma)),
            Formula::Diamond(i, g) => Prop::not(Prop::boxed(*i, Prop::not(go(g, sigma)))),
        }
    }
    let mut sigma = vec![];
    let prop = go(phi, &mut sigma);
    Ok(PropAbstraction { prop, sigma })
}

/// A valuation, given by its values on letters and boxed subformulas and
/// extended to all formulas through the Boolean connectives.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Valuation {
    pub letters: HashMap<usize, bool>,
    pub boxes: HashMap<Prop, bool>,
}

impl Valuation {
    pub fn value(&self, p: &Prop) -> bool {
        match p {
            Prop::Letter(k) => self.letters[k],
            Prop::Not(q) => !self.value(q),
            Prop::And(a, b) => self.value(a) && self.value(b),
            Prop::Box(..) => self.boxes[p],
        }
    }
}

/// Outcome of the fragment procedure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FragmentVerdict {
    /// Satisfiable, with the accepted valuation of the top-level formula.
    Sat(Valuation),
    Unsat,
    BudgetExceeded,
}

/// The recursive decision procedure for one logic and one atom table.
pub struct Solver<'a> {
    spec: LogicSpec,
    sigma: &'a [Formula],
    budget: u64,
    used: u64,
    sat_memo: HashMap<Prop, bool>,
    alc_memo: HashMap<Vec<(usize, bool)>, bool>,
}

impl<'a> Solver<'a> {
    /// `budget` bounds the tableau rule applications of the ALC checks plus
    /// the number of valuations examined.
    pub fn new(spec: LogicSpec, sigma: &'a [Formula], budget: u64) -> Solver<'a> {
        Solver {
            spec,
            sigma,
            budget,
            used: 0,
            sat_memo: HashMap::new(),
            alc_memo: HashMap::new(),
        }
    }

    fn has(&self, l: Letter) -> bool {
        self.spec.closure().contains(l)
    }

    fn charge(&mut self, n: u64) -> Result<(), AbstractionError> {
        self.used += n;
        if self.used > self.budget {
            return Err(AbstractionError::BudgetExceeded(self.budget));
        }
        Ok(())
    }

    /// Whether the atoms true under `nu` together with the negations of the
    /// false ones are satisfiable in ALC.
    pub fn sigma_consistent(&mut self, nu: &Valuation) -> Result<bool, AbstractionError> {
        let mut key: Vec<(usize, bool)> = nu.letters.iter().map(|(&k, &v)| (k, v)).collect();
        key.sort_unstable();
        if let Some(&v) = self.alc_memo.get(&key) {
            return Ok(v);
        }
        let literals: Vec<Formula> = key
            .iter()
            .map(|&(k, v)| {
                let atom = self.sigma[k].clone();
                if v {
                    atom
                } else {
                    Formula::not(atom)
                }
            })
            .collect();
        let result = match Formula::conjunction(literals) {
            None => true,
            Some(f) => {
                let spec = LogicSpec::validate(crate::logics::Letters::empty()).expect("E is valid");
                let t = Tableau::new(&f.nnf(), spec).expect("NNF input");
                let remaining = self.budget.saturating_sub(self.used);
                let sol = t.solve(remaining);
                self.charge(sol.stats.applications)?;
                match sol.verdict {
                    Verdict::Sat { .. } => true,
                    Verdict::Unsat => false,
                    Verdict::BudgetExceeded(_) => return Err(AbstractionError::BudgetExceeded(self.budget)),
                }
            }
        };
        self.alc_memo.insert(key, result);
        Ok(result)
    }

    /// Whether `p` is satisfied in a Σ-consistent model of the logic.
    pub fn sat(&mut self, p: &Prop) -> Result<bool, AbstractionError> {
        if let Some(&v) = self.sat_memo.get(p) {
            return Ok(v);
        }
        let v = self.find_valuation(p)?.is_some();
        self.sat_memo.insert(p.clone(), v);
        Ok(v)
    }

    /// The first accepted valuation for `p`, if any.
    pub fn find_valuation(&mut self, p: &Prop) -> Result<Option<Valuation>, AbstractionError> {
        let letters = p.letters();
        let boxes = p.boxes();
        for lmask in 0u64..1 << letters.len() {
            let mut nu = Valuation {
                letters: letters.iter().enumerate().map(|(j, &k)| (k, lmask >> j & 1 == 1)).collect(),
                boxes: HashMap::new(),
            };
            if !self.sigma_consistent(&nu)? {
                continue;
            }
            for bmask in 0u64..1 << boxes.len() {
                self.charge(1)?;
                nu.boxes = boxes.iter().enumerate().map(|(j, b)| (b.clone(), bmask >> j & 1 == 1)).collect();
                if nu.value(p) && self.accepts(&nu, p)? {
                    return Ok(Some(nu));
                }
            }
        }
        Ok(None)
    }

    /// The gating of the checks for one valuation.
    fn accepts(&mut self, nu: &Valuation, p: &Prop) -> Result<bool, AbstractionError> {
        if !self.check(nu, p)? {
            return Ok(false);
        }
        let ntpq = [Letter::N, Letter::T, Letter::P, Letter::Q].iter().any(|&l| self.has(l));
        if ntpq && !self.check_ntpq(nu, p)? {
            return Ok(false);
        }
        if self.has(Letter::D) {
            return self.check_d(nu, p);
        }
        Ok(true)
    }

    /// Boxed subformulas of each agent with the given value, in order.
    fn boxes_of(&self, nu: &Valuation, p: &Prop, value: bool) -> Vec<(Agent, Vec<Prop>)> {
        let mut out: Vec<(Agent, Vec<Prop>)> = vec![];
        for b in p.boxes() {
            let Prop::Box(i, body) = &b else { unreachable!() };
            if nu.boxes[&b] != value {
                continue;
            }
            match out.iter_mut().find(|(j, _)| j == i) {
                Some((_, v)) => v.push((**body).clone()),
                None => out.push((*i, vec![(**body).clone()])),
            }
        }
        out.sort_by_key(|(i, _)| *i);
        out
    }

    /// Body subsets ranged over by the checks: all non-empty subsets when
    /// C holds, singletons otherwise.
    fn body_subsets(&self, bodies: &[Prop]) -> Vec<Vec<Prop>> {
        subsets(bodies.len(), self.has(Letter::C))
            .into_iter()
            .map(|idx| idx.into_iter().map(|j| bodies[j].clone()).collect())
            .collect()
    }

    /// The condition on a true and a false box of the same agent.
    pub fn check(&mut self, nu: &Valuation, p: &Prop) -> Result<bool, AbstractionError> {
        let falses = self.boxes_of(nu, p, false);
        for (i, trues) in self.boxes_of(nu, p, true) {
            let Some((_, chis)) = falses.iter().find(|(j, _)| *j == i) else { continue };
            for psis in self.body_subsets(&trues) {
                for chi in chis {
                    let conj = Prop::and(Prop::conjunction(psis.clone()), Prop::not(chi.clone()));
                    let goal = if self.has(Letter::M) {
                        conj
                    } else {
                        let swapped = psis.iter().map(|psi| Prop::and(Prop::not(psi.clone()), chi.clone()));
                        Prop::or(conj, Prop::disjunction(swapped))
                    };
                    if !self.sat(&goal)? {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// The conditions for N, T, P and Q.
    pub fn check_ntpq(&mut self, nu: &Valuation, p: &Prop) -> Result<bool, AbstractionError> {
        if self.has(Letter::N) {
            for (_, bodies) in self.boxes_of(nu, p, false) {
                for psi in bodies {
                    if !self.sat(&Prop::not(psi))? {
                        return Ok(false);
                    }
                }
            }
        }
        let trues = self.boxes_of(nu, p, true);
        if self.has(Letter::T) && trues.iter().any(|(_, bodies)| bodies.iter().any(|psi| !nu.value(psi))) {
            return Ok(false);
        }
        for (_, bodies) in &trues {
            for psis in self.body_subsets(bodies) {
                if self.has(Letter::P) && !self.sat(&Prop::conjunction(psis.clone()))? {
                    return Ok(false);
                }
                if self.has(Letter::Q) && !self.sat(&Prop::disjunction(psis.into_iter().map(Prop::not)))? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// The condition for D, over unordered pairs of body subsets.
    pub fn check_d(&mut self, nu: &Valuation, p: &Prop) -> Result<bool, AbstractionError> {
        for (_, bodies) in self.boxes_of(nu, p, true) {
            let subs = self.body_subsets(&bodies);
            for a in 0..subs.len() {
                for b in a..subs.len() {
                    let left = Prop::conjunction(subs[a].clone());
                    let right = Prop::conjunction(subs[b].clone());
                    let both = Prop::and(left.clone(), right.clone());
                    let goal = if self.has(Letter::M) {
                        both
                    } else {
                        Prop::or(both, Prop::and(Prop::not(left), Prop::not(right)))
                    };
                    if !self.sat(&goal)? {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

/// Decides a formula without modalised concepts on varying domains.
pub fn sat_no_modal_concepts(
    phi: &Formula,
    spec: LogicSpec,
    budget: u64,
) -> Result<FragmentVerdict, AbstractionError> {
    let abs = prop_abstract(phi)?;
    let mut solver = Solver::new(spec, &abs.sigma, budget);
    match solver.find_valuation(&abs.prop) {
        Ok(Some(nu)) => Ok(FragmentVerdict::Sat(nu)),
        Ok(None) => Ok(FragmentVerdict::Unsat),
        Err(AbstractionError::BudgetExceeded(_)) => Ok(FragmentVerdict::BudgetExceeded),
        Err(e) => Err(e),
    }
}
