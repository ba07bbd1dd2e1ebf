//! Lazy depth-first model search.
//!
//! The search assigns atomic facts (domain membership, individual images,
//! concept and role membership, neighbourhood membership or accessibility)
//! only when the formula's three-valued value at world 0 depends on them.
//! The first undetermined fact met by the evaluator is branched on, `false`
//! before `true`. Neighbourhood facts are checked against the logic after
//! every assignment: the least family containing the sets assigned `true`
//! and closed under the logic's closure conditions (M, C, N) must avoid the
//! sets assigned `false` and satisfy the remaining conditions (T, D, P, Q).
//! Every model found is rebuilt in full and re-verified with the reference
//! evaluator.

use crate::bitset::ElemSet;
use crate::logics::{Letter, LogicSpec};
use crate::semantics::{
    check_logic_conditions, formula_holds, relational_formula_holds, DomainMode, Interpretation,
    Neighbourhood, NeighbourhoodModel, RelationalModel,
};
use crate::syntax::{Concept, Formula, Signature};
use std::collections::{BTreeMap, BTreeSet};

/// Largest world count the search supports.
pub const MAX_SEARCH_WORLDS: usize = 6;

type R = Result<bool, Fact>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Fact {
    Dom(usize, usize),
    Ind(usize, usize),
    Con(usize, usize, usize),
    Role(usize, usize, usize, usize),
    Nb(usize, usize, u64),
    Rel(usize, usize, usize),
}

#[derive(Clone, Debug)]
enum C {
    Top,
    Bot,
    Name(usize),
    Not(Box<C>),
    And(Box<C>, Box<C>),
    Or(Box<C>, Box<C>),
    Exists(usize, Box<C>),
    Forall(usize, Box<C>),
    Box(usize, Box<C>),
    Diamond(usize, Box<C>),
}

#[derive(Clone, Debug)]
enum F {
    Sub(C, C),
    Assert(C, usize),
    Role(usize, usize, usize, bool),
    Not(Box<F>),
    And(Box<F>, Box<F>),
    Or(Box<F>, Box<F>),
    Box(usize, Box<F>),
    Diamond(usize, Box<F>),
}

struct Names {
    concepts: Vec<String>,
    roles: Vec<String>,
    inds: Vec<String>,
}

impl Names {
    fn of(sig: &Signature) -> Names {
        Names {
            concepts: sig.concepts.iter().cloned().collect(),
            roles: sig.roles.iter().cloned().collect(),
            inds: sig.individuals.iter().cloned().collect(),
        }
    }

    fn idx(list: &[String], name: &str) -> usize {
        list.iter().position(|x| x == name).expect("name collected from the formula")
    }

    fn concept(&self, c: &Concept) -> C {
        let b = |x: &Concept| Box::new(self.concept(x));
        match c {
            Concept::Name(n) => C::Name(Self::idx(&self.concepts, n)),
            Concept::Top => C::Top,
            Concept::Bot => C::Bot,
            Concept::Not(x) => C::Not(b(x)),
            Concept::And(x, y) => C::And(b(x), b(y)),
            Concept::Or(x, y) => C::Or(b(x), b(y)),
            Concept::Exists(r, x) => C::Exists(Self::idx(&self.roles, r), b(x)),
            Concept::Forall(r, x) => C::Forall(Self::idx(&self.roles, r), b(x)),
            Concept::Box(i, x) => C::Box(*i as usize - 1, b(x)),
            Concept::Diamond(i, x) => C::Diamond(*i as usize - 1, b(x)),
        }
    }

    fn formula(&self, f: &Formula) -> F {
        let b = |x: &Formula| Box::new(self.formula(x));
        match f {
            Formula::Sub(c, d) => F::Sub(self.concept(c), self.concept(d)),
            Formula::Assert(c, a) => F::Assert(self.concept(c), Self::idx(&self.inds, a)),
            Formula::Role(r, a, x) | Formula::NegRole(r, a, x) => F::Role(
                Self::idx(&self.roles, r),
                Self::idx(&self.inds, a),
                Self::idx(&self.inds, x),
                matches!(f, Formula::Role(..)),
            ),
            Formula::Not(x) => F::Not(b(x)),
            Formula::And(x, y) => F::And(b(x), b(y)),
            Formula::Or(x, y) => F::Or(b(x), b(y)),
            Formula::Box(i, x) => F::Box(*i as usize - 1, b(x)),
            Formula::Diamond(i, x) => F::Diamond(*i as usize - 1, b(x)),
        }
    }
}

fn kand(l: R, r: impl FnOnce() -> R) -> R {
    match l {
        Ok(false) => Ok(false),
        Ok(true) => r(),
        Err(f) => match r() {
            Ok(false) => Ok(false),
            _ => Err(f),
        },
    }
}

fn kor(l: R, r: impl FnOnce() -> R) -> R {
    match l {
        Ok(true) => Ok(true),
        Ok(false) => r(),
        Err(f) => match r() {
            Ok(true) => Ok(true),
            _ => Err(f),
        },
    }
}

fn knot(v: R) -> R {
    v.map(|b| !b)
}

fn kall(items: impl Iterator<Item = R>) -> R {
    let mut unknown = None;
    for v in items {
        match v {
            Ok(false) => return Ok(false),
            Ok(true) => {}
            Err(f) => {
                unknown.get_or_insert(f);
            }
        }
    }
    unknown.map_or(Ok(true), Err)
}

fn kany(items: impl Iterator<Item = R>) -> R {
    knot(kall(items.map(knot)))
}

/// The least family over `n` worlds containing `fam_in` and closed under the
/// closure conditions among `letters`, provided it avoids `fam_out` and
/// satisfies the other conditions.
pub(crate) fn least_family(fam_in: u64, fam_out: u64, w: usize, n: usize, letters: &[Letter]) -> Option<u64> {
    let full = (1u64 << n) - 1;
    let has = |l: Letter| letters.contains(&l);
    let mut fam = fam_in;
    if has(Letter::N) {
        fam |= 1 << full;
    }
    loop {
        let mut next = fam;
        let members: Vec<u64> = (0..=full).filter(|a| fam >> a & 1 == 1).collect();
        if has(Letter::M) {
            for &a in &members {
                for x in 0..n {
                    next |= 1 << (a | 1 << x);
                }
            }
        }
        if has(Letter::C) {
            for &a in &members {
                for &b in &members {
                    next |= 1 << (a & b);
                }
            }
        }
        if next == fam {
            break;
        }
        fam = next;
    }
    if fam & fam_out != 0 {
        return None;
    }
    let members = || (0..=full).filter(|a| fam >> a & 1 == 1);
    if (has(Letter::P) && fam & 1 == 1)
        || (has(Letter::Q) && fam >> full & 1 == 1)
        || (has(Letter::T) && members().any(|a| a >> w & 1 == 0))
        || (has(Letter::D) && members().any(|a| fam >> (full & !a) & 1 == 1))
    {
        return None;
    }
    Some(fam)
}

/// What the modal operators are interpreted by.
#[derive(Clone, Debug)]
pub(crate) enum Frames {
    /// Neighbourhood frames of each listed logic.
    Neighbourhood(Vec<LogicSpec>),
    Relational,
}

pub(crate) enum Found {
    Neighbourhood(NeighbourhoodModel),
    Relational(RelationalModel),
}

struct Search {
    phi: F,
    source: Formula,
    names: Names,
    sig: Signature,
    n: usize,
    k: usize,
    agents: usize,
    mode: DomainMode,
    relational: bool,
    specs: Vec<(LogicSpec, Vec<Letter>)>,
    dom: Vec<Option<bool>>,
    ind: Vec<Option<usize>>,
    con: Vec<Option<bool>>,
    role: Vec<Option<bool>>,
    rel: Vec<Option<bool>>,
    nb_in: Vec<u64>,
    nb_out: Vec<u64>,
    wanted: u64,
    found: Vec<Option<Found>>,
}

impl Search {
    fn dom_val(&self, w: usize, d: usize) -> R {
        if self.mode == DomainMode::Constant {
            Ok(true)
        } else {
            self.dom[w * self.k + d].ok_or(Fact::Dom(w, d))
        }
    }

    fn ind_slot(&self, a: usize, w: usize) -> usize {
        if self.mode == DomainMode::Constant {
            a * self.n
        } else {
            a * self.n + w
        }
    }

    fn ind_val(&self, a: usize, w: usize) -> Result<usize, Fact> {
        let slot = self.ind_slot(a, w);
        self.ind[slot].ok_or(Fact::Ind(a, slot % self.n))
    }

    fn con_slot(&self, c: usize, w: usize, d: usize) -> usize {
        (c * self.n + w) * self.k + d
    }

    fn role_slot(&self, r: usize, w: usize, d: usize, e: usize) -> usize {
        ((r * self.n + w) * self.k + d) * self.k + e
    }

    fn rel_slot(&self, i: usize, w: usize, v: usize) -> usize {
        (i * self.n + w) * self.n + v
    }

    fn nb_val(&self, i: usize, w: usize, alpha: u64) -> R {
        let s = i * self.n + w;
        if self.nb_in[s] >> alpha & 1 == 1 {
            Ok(true)
        } else if self.nb_out[s] >> alpha & 1 == 1 {
            Ok(false)
        } else {
            Err(Fact::Nb(i, w, alpha))
        }
    }

    fn rel_val(&self, i: usize, w: usize, v: usize) -> R {
        self.rel[self.rel_slot(i, w, v)].ok_or(Fact::Rel(i, w, v))
    }

    /// Whether `d` belongs to `c` at `w`.
    fn mem(&self, c: &C, w: usize, d: usize) -> R {
        kand(self.dom_val(w, d), || match c {
            C::Top => Ok(true),
            C::Bot => Ok(false),
            C::Name(x) => self.con[self.con_slot(*x, w, d)].ok_or(Fact::Con(*x, w, d)),
            C::Not(x) => knot(self.mem(x, w, d)),
            C::And(x, y) => kand(self.mem(x, w, d), || self.mem(y, w, d)),
            C::Or(x, y) => kor(self.mem(x, w, d), || self.mem(y, w, d)),
            C::Exists(r, x) => kany((0..self.k).map(|e| {
                kand(self.dom_val(w, e), || {
                    let edge = self.role[self.role_slot(*r, w, d, e)].ok_or(Fact::Role(*r, w, d, e));
                    kand(edge, || self.mem(x, w, e))
                })
            })),
            C::Forall(r, x) => kall((0..self.k).map(|e| {
                kor(knot(self.dom_val(w, e)), || {
                    let edge = self.role[self.role_slot(*r, w, d, e)].ok_or(Fact::Role(*r, w, d, e));
                    kor(knot(edge), || self.mem(x, w, e))
                })
            })),
            C::Box(i, x) if self.relational => {
                kall((0..self.n).map(|v| kor(knot(self.rel_val(*i, w, v)), || self.mem(x, v, d))))
            }
            C::Diamond(i, x) if self.relational => {
                kany((0..self.n).map(|v| kand(self.rel_val(*i, w, v), || self.mem(x, v, d))))
            }
            C::Box(i, x) => {
                let alpha = self.concept_truth(x, d, false)?;
                self.nb_val(*i, w, alpha)
            }
            C::Diamond(i, x) => {
                let alpha = self.concept_truth(x, d, true)?;
                knot(self.nb_val(*i, w, alpha))
            }
        })
    }

    /// The truth set of `x` (or of its negation) for element `d`.
    fn concept_truth(&self, x: &C, d: usize, negate: bool) -> Result<u64, Fact> {
        let mut alpha = 0u64;
        for v in 0..self.n {
            let inside = if negate {
                kand(self.dom_val(v, d), || knot(self.mem(x, v, d)))?
            } else {
                self.mem(x, v, d)?
            };
            if inside {
                alpha |= 1 << v;
            }
        }
        Ok(alpha)
    }

    fn formula_truth(&self, g: &F, negate: bool) -> Result<u64, Fact> {
        let mut alpha = 0u64;
        for v in 0..self.n {
            if self.holds(g, v)? != negate {
                alpha |= 1 << v;
            }
        }
        Ok(alpha)
    }

    fn holds(&self, f: &F, w: usize) -> R {
        match f {
            F::Sub(c, d) => kall((0..self.k).map(|x| kor(knot(self.mem(c, w, x)), || self.mem(d, w, x)))),
            F::Assert(c, a) => {
                let d = self.ind_val(*a, w)?;
                self.mem(c, w, d)
            }
            F::Role(r, a, b, positive) => {
                let d = self.ind_val(*a, w)?;
                let e = self.ind_val(*b, w)?;
                let edge = self.role[self.role_slot(*r, w, d, e)].ok_or(Fact::Role(*r, w, d, e))?;
                Ok(edge == *positive)
            }
            F::Not(g) => knot(self.holds(g, w)),
            F::And(x, y) => kand(self.holds(x, w), || self.holds(y, w)),
            F::Or(x, y) => kor(self.holds(x, w), || self.holds(y, w)),
            F::Box(i, g) if self.relational => {
                kall((0..self.n).map(|v| kor(knot(self.rel_val(*i, w, v)), || self.holds(g, v))))
            }
            F::Diamond(i, g) if self.relational => {
                kany((0..self.n).map(|v| kand(self.rel_val(*i, w, v), || self.holds(g, v))))
            }
            F::Box(i, g) => {
                let alpha = self.formula_truth(g, false)?;
                self.nb_val(*i, w, alpha)
            }
            F::Diamond(i, g) => {
                let alpha = self.formula_truth(g, true)?;
                knot(self.nb_val(*i, w, alpha))
            }
        }
    }

    /// Specifications still consistent with the neighbourhood facts of
    /// agent `i` at world `w`, among `alive`.
    fn still_alive(&self, alive: u64, i: usize, w: usize) -> u64 {
        let s = i * self.n + w;
        let mut out = 0;
        for (j, (_, letters)) in self.specs.iter().enumerate() {
            if alive >> j & 1 == 1
                && least_family(self.nb_in[s], self.nb_out[s], w, self.n, letters).is_some()
            {
                out |= 1 << j;
            }
        }
        out
    }

    fn dfs(&mut self, alive: u64) {
        if alive & self.wanted == 0 {
            return;
        }
        let fact = match self.holds(&self.phi.clone(), 0) {
            Ok(false) => return,
            Ok(true) => {
                self.record(alive & self.wanted);
                return;
            }
            Err(fact) => fact,
        };
        match fact {
            Fact::Dom(w, d) => {
                let slot = w * self.k + d;
                for v in [false, true] {
                    if !v && !self.can_drop(w, d) {
                        continue;
                    }
                    self.dom[slot] = Some(v);
                    self.dfs(alive);
                    self.dom[slot] = None;
                }
            }
            Fact::Ind(a, w) => {
                let slot = self.ind_slot(a, w);
                for d in 0..self.k {
                    let dom_slot = w * self.k + d;
                    let forced = self.mode == DomainMode::Varying && self.dom[dom_slot].is_none();
                    if self.mode == DomainMode::Varying && self.dom[dom_slot] == Some(false) {
                        continue;
                    }
                    if forced {
                        self.dom[dom_slot] = Some(true);
                    }
                    self.ind[slot] = Some(d);
                    self.dfs(alive);
                    self.ind[slot] = None;
                    if forced {
                        self.dom[dom_slot] = None;
                    }
                }
            }
            Fact::Con(c, w, d) => {
                let slot = self.con_slot(c, w, d);
                for v in [false, true] {
                    self.con[slot] = Some(v);
                    self.dfs(alive);
                }
                self.con[slot] = None;
            }
            Fact::Role(r, w, d, e) => {
                let slot = self.role_slot(r, w, d, e);
                for v in [false, true] {
                    self.role[slot] = Some(v);
                    self.dfs(alive);
                }
                self.role[slot] = None;
            }
            Fact::Rel(i, w, v) => {
                let slot = self.rel_slot(i, w, v);
                for b in [false, true] {
                    self.rel[slot] = Some(b);
                    self.dfs(alive);
                }
                self.rel[slot] = None;
            }
            Fact::Nb(i, w, alpha) => {
                let s = i * self.n + w;
                self.nb_out[s] |= 1 << alpha;
                let a = self.still_alive(alive, i, w);
                self.dfs(a);
                self.nb_out[s] &= !(1 << alpha);
                self.nb_in[s] |= 1 << alpha;
                let a = self.still_alive(alive, i, w);
                self.dfs(a);
                self.nb_in[s] &= !(1 << alpha);
            }
        }
    }

    /// Whether `d` may leave the domain of `w`: the domain stays non-empty
    /// and no individual is mapped to `d` there.
    fn can_drop(&self, w: usize, d: usize) -> bool {
        let other = (0..self.k).any(|e| e != d && self.dom[w * self.k + e] != Some(false));
        let named = (0..self.names.inds.len()).any(|a| self.ind[self.ind_slot(a, w)] == Some(d));
        other && !named
    }

    fn interpretations(&self) -> Vec<Interpretation> {
        let (n, k) = (self.n, self.k);
        let domains: Vec<ElemSet> = (0..n)
            .map(|w| {
                (0..k)
                    .filter(|&d| self.mode == DomainMode::Constant || self.dom[w * k + d] != Some(false))
                    .collect()
            })
            .collect();
        (0..n)
            .map(|w| {
                let domain = domains[w].clone();
                let concepts = self
                    .names
                    .concepts
                    .iter()
                    .enumerate()
                    .map(|(c, name)| {
                        let ext = domain
                            .iter()
                            .filter(|&d| self.con[self.con_slot(c, w, d)] == Some(true))
                            .collect();
                        (name.clone(), ext)
                    })
                    .collect();
                let roles = self
                    .names
                    .roles
                    .iter()
                    .enumerate()
                    .map(|(r, name)| {
                        let mut pairs = BTreeSet::new();
                        for d in domain.iter() {
                            for e in domain.iter() {
                                if self.role[self.role_slot(r, w, d, e)] == Some(true) {
                                    pairs.insert((d, e));
                                }
                            }
                        }
                        (name.clone(), pairs)
                    })
                    .collect();
                let first = domain.first().expect("domains are non-empty");
                let inds: BTreeMap<String, usize> = self
                    .names
                    .inds
                    .iter()
                    .enumerate()
                    .map(|(a, name)| {
                        let d = self.ind[self.ind_slot(a, w)].unwrap_or(first);
                        (name.clone(), d)
                    })
                    .collect();
                Interpretation {
                    domain,
                    concepts,
                    roles,
                    inds,
                }
            })
            .collect()
    }

    fn record(&mut self, targets: u64) {
        let interp = self.interpretations();
        if self.relational {
            let rel = (0..self.agents)
                .map(|i| {
                    let mut r = BTreeSet::new();
                    for w in 0..self.n {
                        for v in 0..self.n {
                            if self.rel[self.rel_slot(i, w, v)] == Some(true) {
                                r.insert((w, v));
                            }
                        }
                    }
                    r
                })
                .collect();
            let m = RelationalModel {
                n_worlds: self.n,
                n_agents: self.agents as u32,
                rel,
                interp,
                signature: self.sig.clone(),
            };
            let ok = matches!(relational_formula_holds(&m, 0, &self.source), Ok(true));
            debug_assert!(ok, "search produced a non-model");
            if ok {
                self.found[0] = Some(Found::Relational(m));
                self.wanted = 0;
            }
            return;
        }
        for j in 0..self.specs.len() {
            if targets >> j & 1 == 0 {
                continue;
            }
            let letters = &self.specs[j].1;
            let nbhd = (0..self.agents)
                .map(|i| {
                    (0..self.n)
                        .map(|w| {
                            let s = i * self.n + w;
                            let fam = least_family(self.nb_in[s], self.nb_out[s], w, self.n, letters)
                                .expect("live specification has a consistent family");
                            let sets = (0..1u64 << self.n)
                                .filter(|a| fam >> a & 1 == 1)
                                .map(crate::bitset::WorldSet::from_mask)
                                .collect();
                            Neighbourhood::Extensional(sets)
                        })
                        .collect()
                })
                .collect();
            let m = NeighbourhoodModel {
                n_worlds: self.n,
                n_agents: self.agents as u32,
                mode: self.mode,
                nbhd,
                interp: interp.clone(),
                signature: self.sig.clone(),
            };
            let ok = matches!(formula_holds(&m, 0, &self.source), Ok(true))
                && matches!(check_logic_conditions(&m, &self.specs[j].0), Ok(true))
                && m.validate().is_ok();
            debug_assert!(ok, "search produced a non-model");
            if ok {
                self.found[j] = Some(Found::Neighbourhood(m));
                self.wanted &= !(1 << j);
            }
        }
    }
}

/// Searches models with exactly `n` worlds and `k` candidate elements. On
/// return, `found[j]` holds a model for the `j`-th frame class unless none
/// exists at this size or it was found earlier (`wanted` bit clear).
pub(crate) fn search(
    phi: &Formula,
    frames: &Frames,
    n: usize,
    k: usize,
    mode: DomainMode,
    wanted: u64,
) -> Vec<Option<Found>> {
    assert!((1..=MAX_SEARCH_WORLDS).contains(&n) && k >= 1);
    let sig = phi.signature();
    let names = Names::of(&sig);
    let agents = phi.max_agent().max(1) as usize;
    let (relational, specs) = match frames {
        Frames::Relational => (true, vec![]),
        Frames::Neighbourhood(specs) => (
            false,
            specs.iter().map(|s| (*s, s.letters().iter().collect())).collect(),
        ),
    };
    let count = if relational { 1 } else { specs.len() };
    let mut s = Search {
        phi: names.formula(phi),
        source: phi.clone(),
        n,
        k,
        agents,
        mode,
        relational,
        dom: vec![None; n * k],
        ind: vec![None; names.inds.len() * n],
        con: vec![None; names.concepts.len() * n * k],
        role: vec![None; names.roles.len() * n * k * k],
        rel: vec![None; agents * n * n],
        nb_in: vec![0; agents * n],
        nb_out: vec![0; agents * n],
        names,
        sig,
        specs,
        wanted,
        found: (0..count).map(|_| None).collect(),
    };
    // Conditions such as N constrain worlds the formula never inspects.
    let mut alive = if relational { 1 } else { (1u64 << count) - 1 };
    if !relational {
        for i in 0..agents {
            for w in 0..n {
                alive = s.still_alive(alive, i, w);
            }
        }
    }
    s.dfs(alive);
    s.found
}
