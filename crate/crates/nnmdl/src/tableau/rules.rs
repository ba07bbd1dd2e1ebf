//! Rule instances, their application conditions and their expansions.

use super::intern::{CNode, FNode};
use super::{CompletionSet, Constraint, Tableau, TableauError, Term};
use crate::logics::Letter;
use crate::syntax::Agent;
use std::collections::BTreeMap;
use std::fmt;

/// The tableau rules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    And,
    Or,
    Sqcap,
    Sqcup,
    Exists,
    Forall,
    Sub,
    NotSub,
    L,
    LN,
    LT,
    LP,
    LQ,
    LD,
}

impl Rule {
    /// Whether the rule belongs to the generating group.
    pub fn is_generating(self) -> bool {
        matches!(
            self,
            Rule::Exists | Rule::NotSub | Rule::L | Rule::LN | Rule::LP | Rule::LQ | Rule::LD
        )
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::And => "R_∧",
            Rule::Or => "R_∨",
            Rule::Sqcap => "R_⊓",
            Rule::Sqcup => "R_⊔",
            Rule::Exists => "R_∃",
            Rule::Forall => "R_∀",
            Rule::Sub => "R_⊑",
            Rule::NotSub => "R_⋢",
            Rule::L => "R_L",
            Rule::LN => "R_LN",
            Rule::LT => "R_LT",
            Rule::LP => "R_LP",
            Rule::LQ => "R_LQ",
            Rule::LD => "R_LD",
        };
        f.write_str(s)
    }
}

/// A rule instantiated with premises from one label.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RuleInstance {
    And { label: usize, premise: Constraint },
    Or { label: usize, premise: Constraint },
    Sqcap { label: usize, premise: Constraint },
    Sqcup { label: usize, premise: Constraint },
    Forall { label: usize, premise: Constraint, edge: Constraint },
    Sub { label: usize, premise: Constraint, term: Term },
    NotSub { label: usize, premise: Constraint, term: Term },
    Exists { label: usize, premise: Constraint, term: Term },
    LT { label: usize, premise: Constraint },
    L { label: usize, boxes: Vec<Constraint>, diamond: Constraint },
    LN { label: usize, diamond: Constraint },
    LP { label: usize, boxes: Vec<Constraint> },
    LQ { label: usize, boxes: Vec<Constraint> },
    LD { label: usize, gammas: Vec<Constraint>, deltas: Vec<Constraint> },
}

impl RuleInstance {
    pub fn rule(&self) -> Rule {
        match self {
            RuleInstance::And { .. } => Rule::And,
            RuleInstance::Or { .. } => Rule::Or,
            RuleInstance::Sqcap { .. } => Rule::Sqcap,
            RuleInstance::Sqcup { .. } => Rule::Sqcup,
            RuleInstance::Forall { .. } => Rule::Forall,
            RuleInstance::Sub { .. } => Rule::Sub,
            RuleInstance::NotSub { .. } => Rule::NotSub,
            RuleInstance::Exists { .. } => Rule::Exists,
            RuleInstance::LT { .. } => Rule::LT,
            RuleInstance::L { .. } => Rule::L,
            RuleInstance::LN { .. } => Rule::LN,
            RuleInstance::LP { .. } => Rule::LP,
            RuleInstance::LQ { .. } => Rule::LQ,
            RuleInstance::LD { .. } => Rule::LD,
        }
    }

    /// The label holding the premises.
    pub fn label(&self) -> usize {
        match *self {
            RuleInstance::And { label, .. }
            | RuleInstance::Or { label, .. }
            | RuleInstance::Sqcap { label, .. }
            | RuleInstance::Sqcup { label, .. }
            | RuleInstance::Forall { label, .. }
            | RuleInstance::Sub { label, .. }
            | RuleInstance::NotSub { label, .. }
            | RuleInstance::Exists { label, .. }
            | RuleInstance::LT { label, .. }
            | RuleInstance::L { label, .. }
            | RuleInstance::LN { label, .. }
            | RuleInstance::LP { label, .. }
            | RuleInstance::LQ { label, .. }
            | RuleInstance::LD { label, .. } => label,
        }
    }
}

/// Index subsets of `0..k`: every non-empty subset by size and then
/// lexicographically when `all` holds, otherwise the singletons.
pub(crate) fn subsets(k: usize, all: bool) -> Vec<Vec<usize>> {
    if !all {
        return (0..k).map(|i| vec![i]).collect();
    }
    let mut out = vec![];
    for size in 1..=k {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            out.push(idx.clone());
            let Some(p) = (0..size).rev().find(|&p| idx[p] < k - size + p) else { break };
            idx[p] += 1;
            for q in p + 1..size {
                idx[q] = idx[q - 1] + 1;
            }
        }
    }
    out
}

impl Tableau {
    /// Whether some label contains every constraint of `cs`.
    fn some_label_has_all(&self, s: &CompletionSet, cs: &[Constraint]) -> bool {
        s.labels.iter().any(|l| cs.iter().all(|c| l.contains(c)))
    }

    /// Whether some label contains both constraints of one of the pairs.
    fn some_label_has_pair(&self, s: &CompletionSet, pairs: &[(Constraint, Constraint)]) -> bool {
        s.labels
            .iter()
            .any(|l| pairs.iter().any(|(a, b)| l.contains(a) && l.contains(b)))
    }

    fn bodies(&self, cs: &[Constraint]) -> Vec<Constraint> {
        cs.iter().map(|&c| self.body(c)).collect()
    }

    fn neg_bodies(&self, cs: &[Constraint]) -> Vec<Constraint> {
        cs.iter().map(|&c| self.negate(self.body(c))).collect()
    }

    /// Box constraints of each agent in `S_n`, in insertion order.
    fn boxes(&self, s: &CompletionSet, n: usize) -> BTreeMap<Agent, Vec<Constraint>> {
        let mut out: BTreeMap<Agent, Vec<Constraint>> = BTreeMap::new();
        for &c in &s.labels[n].items {
            if let Some(i) = self.box_agent(c) {
                out.entry(i).or_default().push(c);
            }
        }
        out
    }

    /// Collects applicable instances of one group, stopping at `limit`.
    pub(crate) fn instances(
        &self,
        s: &CompletionSet,
        generating: bool,
        out: &mut Vec<RuleInstance>,
        limit: usize,
    ) {
        for n in 0..s.labels.len() {
            if generating {
                self.generating_instances(s, n, out, limit);
            } else {
                self.plain_instances(s, n, out, limit);
            }
            if out.len() >= limit {
                return;
            }
        }
    }

    fn plain_instances(&self, s: &CompletionSet, n: usize, out: &mut Vec<RuleInstance>, limit: usize) {
        let label = &s.labels[n];
        let t = self.has(Letter::T);
        for &c in &label.items {
            match c {
                Constraint::Formula(f) => match self.int.fnode(f) {
                    FNode::And(a, b) => {
                        if !(label.contains(&self.item(a)) && label.contains(&self.item(b))) {
                            out.push(RuleInstance::And { label: n, premise: c });
                        }
                    }
                    FNode::Or(a, b) => {
                        if !label.contains(&self.item(a)) && !label.contains(&self.item(b)) {
                            out.push(RuleInstance::Or { label: n, premise: c });
                        }
                    }
                    FNode::Sub(k) => {
                        if label.terms.is_empty() {
                            out.push(RuleInstance::Sub {
                                label: n,
                                premise: c,
                                term: self.fresh_variable(s, n),
                            });
                        }
                        for &x in &label.terms {
                            if out.len() >= limit {
                                return;
                            }
                            if !label.contains(&Constraint::Concept(k, x)) {
                                out.push(RuleInstance::Sub { label: n, premise: c, term: x });
                            }
                        }
                    }
                    FNode::Box(_, g) if t
                        && !label.contains(&self.item(g)) => {
                            out.push(RuleInstance::LT { label: n, premise: c });
                        }
                    _ => {}
                },
                Constraint::Concept(k, x) => match self.int.cnode(k) {
                    CNode::And(a, b) => {
                        if !(label.contains(&Constraint::Concept(a, x)) && label.contains(&Constraint::Concept(b, x))) {
                            out.push(RuleInstance::Sqcap { label: n, premise: c });
                        }
                    }
                    CNode::Or(a, b) => {
                        if !label.contains(&Constraint::Concept(a, x)) && !label.contains(&Constraint::Concept(b, x)) {
                            out.push(RuleInstance::Sqcup { label: n, premise: c });
                        }
                    }
                    CNode::Forall(r, d) => {
                        if let Some(ys) = label.succ.get(&(r, x)) {
                            for &y in ys {
                                if out.len() >= limit {
                                    return;
                                }
                                if !label.contains(&Constraint::Concept(d, y)) {
                                    out.push(RuleInstance::Forall {
                                        label: n,
                                        premise: c,
                                        edge: Constraint::Role(r, x, y),
                                    });
                                }
                            }
                        }
                    }
                    CNode::Box(_, d) if t
                        && !label.contains(&Constraint::Concept(d, x)) => {
                            out.push(RuleInstance::LT { label: n, premise: c });
                        }
                    _ => {}
                },
                _ => {}
            }
            if out.len() >= limit {
                return;
            }
        }
    }

    /// Whether the premises of an `R_L` instance are already witnessed.
    fn l_witnessed(&self, s: &CompletionSet, boxes: &[Constraint], diamond: Constraint) -> bool {
        let mut all = self.bodies(boxes);
        all.push(self.body(diamond));
        if self.some_label_has_all(s, &all) {
            return true;
        }
        // With M only the first expansion exists, so only it can witness.
        if self.has(Letter::M) {
            return false;
        }
        let nd = self.negate(self.body(diamond));
        let pairs: Vec<_> = self.neg_bodies(boxes).into_iter().map(|g| (g, nd)).collect();
        self.some_label_has_pair(s, &pairs)
    }

    fn d_witnessed(&self, s: &CompletionSet, gammas: &[Constraint], deltas: &[Constraint]) -> bool {
        let mut all = self.bodies(gammas);
        all.extend(self.bodies(deltas));
        if self.some_label_has_all(s, &all) {
            return true;
        }
        if self.has(Letter::M) {
            return false;
        }
        let ng = self.neg_bodies(gammas);
        let nd = self.neg_bodies(deltas);
        let pairs: Vec<_> = ng.iter().flat_map(|&g| nd.iter().map(move |&d| (g, d))).collect();
        self.some_label_has_pair(s, &pairs)
    }

    fn generating_instances(&self, s: &CompletionSet, n: usize, out: &mut Vec<RuleInstance>, limit: usize) {
        let label = &s.labels[n];
        let all_subsets = self.has(Letter::C);
        let boxes = self.boxes(s, n);
        let pick = |idx: &[usize], of: &[Constraint]| idx.iter().map(|&j| of[j]).collect::<Vec<_>>();
        for &c in &label.items {
            match c {
                Constraint::Concept(k, x) => {
                    if let CNode::Exists(r, d) = self.int.cnode(k) {
                        let witnessed = label
                            .succ
                            .get(&(r, x))
                            .is_some_and(|ys| ys.iter().any(|&y| label.contains(&Constraint::Concept(d, y))));
                        if !witnessed && !self.is_blocked(s, n, x) {
                            out.push(RuleInstance::Exists {
                                label: n,
                                premise: c,
                                term: self.fresh_variable(s, n),
                            });
                        }
                    }
                }
                Constraint::Formula(f) => {
                    if let FNode::NotSub(k) = self.int.fnode(f) {
                        let nk = self.int.cneg(k);
                        if !label.concepts.values().any(|ks| ks.contains(&nk)) {
                            out.push(RuleInstance::NotSub {
                                label: n,
                                premise: c,
                                term: self.fresh_variable(s, n),
                            });
                        }
                    }
                }
                _ => {}
            }
            if out.len() >= limit {
                return;
            }
            let Some(i) = self.diamond_agent(c) else { continue };
            if self.has(Letter::N) && !self.some_label_has_all(s, &[self.body(c)]) {
                out.push(RuleInstance::LN { label: n, diamond: c });
                if out.len() >= limit {
                    return;
                }
            }
            let Some(bs) = boxes.get(&i) else { continue };
            for idx in subsets(bs.len(), all_subsets) {
                let chosen = pick(&idx, bs);
                if !self.l_witnessed(s, &chosen, c) {
                    out.push(RuleInstance::L {
                        label: n,
                        boxes: chosen,
                        diamond: c,
                    });
                    if out.len() >= limit {
                        return;
                    }
                }
            }
        }
        for bs in boxes.values() {
            let subs = subsets(bs.len(), all_subsets);
            if self.has(Letter::P) {
                for idx in &subs {
                    let chosen = pick(idx, bs);
                    if !self.some_label_has_all(s, &self.bodies(&chosen)) {
                        out.push(RuleInstance::LP { label: n, boxes: chosen });
                        if out.len() >= limit {
                            return;
                        }
                    }
                }
            }
            if self.has(Letter::Q) {
                for idx in &subs {
                    let chosen = pick(idx, bs);
                    let negs = self.neg_bodies(&chosen);
                    if !s.labels.iter().any(|l| negs.iter().any(|g| l.contains(g))) {
                        out.push(RuleInstance::LQ { label: n, boxes: chosen });
                        if out.len() >= limit {
                            return;
                        }
                    }
                }
            }
            if self.has(Letter::D) {
                for a in 0..subs.len() {
                    for b in a..subs.len() {
                        let gammas = pick(&subs[a], bs);
                        let deltas = pick(&subs[b], bs);
                        if !self.d_witnessed(s, &gammas, &deltas) {
                            out.push(RuleInstance::LD { label: n, gammas, deltas });
                            if out.len() >= limit {
                                return;
                            }
                        }
                    }
                }
            }
        }
    }

    /// Number of alternative expansions of an instance.
    pub fn branch_count(&self, inst: &RuleInstance) -> usize {
        let m = self.has(Letter::M);
        match inst {
            RuleInstance::Or { .. } | RuleInstance::Sqcup { .. } => 2,
            RuleInstance::L { boxes, .. } => {
                if m {
                    1
                } else {
                    1 + boxes.len()
                }
            }
            RuleInstance::LQ { boxes, .. } => boxes.len(),
            RuleInstance::LD { gammas, deltas, .. } => {
                if m {
                    1
                } else {
                    1 + gammas.len() * deltas.len()
                }
            }
            _ => 1,
        }
    }

    /// Applies one expansion and returns the constraints it added.
    pub(crate) fn apply_in_place(
        &self,
        s: &mut CompletionSet,
        inst: &RuleInstance,
        branch: usize,
    ) -> Result<Vec<(usize, Constraint)>, TableauError> {
        let count = self.branch_count(inst);
        if branch >= count {
            return Err(TableauError::InvalidBranch { branch, count });
        }
        let n = inst.label();
        if n >= s.labels.len() {
            return Err(TableauError::NotApplicable(format!("label {n} does not exist")));
        }
        let mut to_add: Vec<Constraint> = vec![];
        let mut target = n;
        let bad = || TableauError::NotApplicable(format!("{inst:?}"));
        match inst {
            RuleInstance::And { premise, .. } | RuleInstance::Or { premise, .. } => {
                let Constraint::Formula(f) = *premise else { return Err(bad()) };
                let (FNode::And(a, b) | FNode::Or(a, b)) = self.int.fnode(f) else { return Err(bad()) };
                match inst {
                    RuleInstance::And { .. } => to_add.extend([self.item(a), self.item(b)]),
                    _ => to_add.push(self.item(if branch == 0 { a } else { b })),
                }
            }
            RuleInstance::Sqcap { premise, .. } | RuleInstance::Sqcup { premise, .. } => {
                let Constraint::Concept(k, x) = *premise else { return Err(bad()) };
                let (CNode::And(a, b) | CNode::Or(a, b)) = self.int.cnode(k) else { return Err(bad()) };
                match inst {
                    RuleInstance::Sqcap { .. } => {
                        to_add.extend([Constraint::Concept(a, x), Constraint::Concept(b, x)])
                    }
                    _ => to_add.push(Constraint::Concept(if branch == 0 { a } else { b }, x)),
                }
            }
            RuleInstance::Forall { premise, edge, .. } => {
                let (Constraint::Concept(k, _), Constraint::Role(_, _, y)) = (*premise, *edge) else {
                    return Err(bad());
                };
                let CNode::Forall(_, d) = self.int.cnode(k) else { return Err(bad()) };
                to_add.push(Constraint::Concept(d, y));
            }
            RuleInstance::Sub { premise, term, .. } => {
                let Constraint::Formula(f) = *premise else { return Err(bad()) };
                let FNode::Sub(k) = self.int.fnode(f) else { return Err(bad()) };
                to_add.push(Constraint::Concept(k, *term));
            }
            RuleInstance::NotSub { premise, term, .. } => {
                let Constraint::Formula(f) = *premise else { return Err(bad()) };
                let FNode::NotSub(k) = self.int.fnode(f) else { return Err(bad()) };
                to_add.push(Constraint::Concept(self.int.cneg(k), *term));
            }
            RuleInstance::Exists { premise, term, .. } => {
                let Constraint::Concept(k, x) = *premise else { return Err(bad()) };
                let CNode::Exists(r, d) = self.int.cnode(k) else { return Err(bad()) };
                to_add.extend([Constraint::Role(r, x, *term), Constraint::Concept(d, *term)]);
            }
            RuleInstance::LT { premise, .. } => to_add.push(self.body(*premise)),
            RuleInstance::L { boxes, diamond, .. } => {
                target = self.new_label(s);
                if branch == 0 {
                    to_add.extend(self.bodies(boxes));
                    to_add.push(self.body(*diamond));
                } else {
                    to_add.push(self.negate(self.body(boxes[branch - 1])));
                    to_add.push(self.negate(self.body(*diamond)));
                }
            }
            RuleInstance::LN { diamond, .. } => {
                target = self.new_label(s);
                to_add.push(self.body(*diamond));
            }
            RuleInstance::LP { boxes, .. } => {
                target = self.new_label(s);
                to_add.extend(self.bodies(boxes));
            }
            RuleInstance::LQ { boxes, .. } => {
                target = self.new_label(s);
                to_add.push(self.negate(self.body(boxes[branch])));
            }
            RuleInstance::LD { gammas, deltas, .. } => {
                target = self.new_label(s);
                if branch == 0 {
                    to_add.extend(self.bodies(gammas));
                    to_add.extend(self.bodies(deltas));
                } else {
                    let (j, l) = ((branch - 1) / deltas.len(), (branch - 1) % deltas.len());
                    to_add.push(self.negate(self.body(gammas[j])));
                    to_add.push(self.negate(self.body(deltas[l])));
                }
            }
        }
        let mut added = vec![];
        for c in to_add {
            if self.add(s, target, c) {
                added.push((target, c));
            }
        }
        Ok(added)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_order() {
        assert_eq!(subsets(3, false), vec![vec![0], vec![1], vec![2]]);
        assert_eq!(
            subsets(3, true),
            vec![
                vec![0],
                vec![1],
                vec![2],
                vec![0, 1],
                vec![0, 2],
                vec![1, 2],
                vec![0, 1, 2]
            ]
        );
        assert!(subsets(0, true).is_empty());
    }
}
