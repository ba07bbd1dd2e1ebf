//! The bounded formula suite and principle instance sets.

use crate::semantics::InstanceSet;
use crate::syntax::{Agent, Concept, Formula};

/// Limits of the bounded grammar.
#[derive(Clone, Debug)]
pub struct SuiteBounds {
    pub agents: Agent,
    pub concepts: Vec<String>,
    pub roles: Vec<String>,
    pub individuals: Vec<String>,
    pub max_size: usize,
    pub max_depth: usize,
}

impl Default for SuiteBounds {
    fn default() -> Self {
        SuiteBounds {
            agents: 1,
            concepts: vec!["A".into(), "B".into()],
            roles: vec!["r".into()],
            individuals: vec!["a".into()],
            max_size: 7,
            max_depth: 2,
        }
    }
}

/// All NNF concepts of each size `0..=max`, indexed by size.
fn concepts_by_size(b: &SuiteBounds, max: usize) -> Vec<Vec<Concept>> {
    let mut by: Vec<Vec<Concept>> = vec![vec![]; max + 1];
    if max >= 1 {
        by[1].extend([Concept::Top, Concept::Bot]);
        by[1].extend(b.concepts.iter().map(|n| Concept::name(n)));
    }
    if max >= 2 {
        by[2].extend(b.concepts.iter().map(|n| Concept::not(Concept::name(n))));
    }
    for s in 2..=max {
        let mut next = vec![];
        for x in &by[s - 1] {
            for r in &b.roles {
                next.push(Concept::exists(r, x.clone()));
                next.push(Concept::forall(r, x.clone()));
            }
            for i in 1..=b.agents {
                next.push(Concept::boxed(i, x.clone()));
                next.push(Concept::diamond(i, x.clone()));
            }
        }
        for left in 1..s - 1 {
            let right = s - 1 - left;
            for x in &by[left] {
                for y in &by[right] {
                    // Commuted duplicates are left out.
                    if x <= y {
                        next.push(Concept::and(x.clone(), y.clone()));
                        next.push(Concept::or(x.clone(), y.clone()));
                    }
                }
            }
        }
        by[s].extend(next);
    }
    by
}

/// All NNF formulas of the bounded grammar, up to commutation of `⊓`, `⊔`,
/// `∧` and `∨`, ordered by size.
pub fn suite(b: &SuiteBounds) -> Vec<Formula> {
    let max = b.max_size;
    let concepts = concepts_by_size(b, max);
    let mut by: Vec<Vec<Formula>> = vec![vec![]; max + 1];
    let push = |f: Formula, by: &mut Vec<Vec<Formula>>| {
        let s = f.size();
        if s <= max {
            by[s].push(f);
        }
    };
    for cs in &concepts {
        for c in cs {
            push(Formula::sub(Concept::Top, c.clone()), &mut by);
            push(Formula::not(Formula::sub(Concept::Top, c.clone())), &mut by);
            for a in &b.individuals {
                push(Formula::assert(c.clone(), a), &mut by);
            }
        }
    }
    for r in &b.roles {
        for a in &b.individuals {
            for x in &b.individuals {
                push(Formula::role(r, a, x), &mut by);
                push(Formula::NegRole(r.clone(), a.clone(), x.clone()), &mut by);
            }
        }
    }
    for s in 2..=max {
        let mut next = vec![];
        for g in &by[s - 1] {
            for i in 1..=b.agents {
                next.push(Formula::boxed(i, g.clone()));
                next.push(Formula::diamond(i, g.clone()));
            }
        }
        for left in 1..s - 1 {
            let right = s - 1 - left;
            for x in &by[left] {
                for y in &by[right] {
                    if x <= y {
                        next.push(Formula::and(x.clone(), y.clone()));
                        next.push(Formula::or(x.clone(), y.clone()));
                    }
                }
            }
        }
        by[s].extend(next);
    }
    by.into_iter()
        .flatten()
        .filter(|f| f.modal_depth() <= b.max_depth)
        .collect()
}

/// The suite formulas with no modal operator inside a concept.
pub fn formula_modal_suite(b: &SuiteBounds) -> Vec<Formula> {
    suite(b).into_iter().filter(|f| !f.has_modal_concept()).collect()
}

/// Principle instances over the concept names `A` and `B`: the Boolean
/// concepts of size at most 3 and, for formulas, assertions and inclusions
/// built from them.
pub fn boolean_instances() -> InstanceSet {
    let b = SuiteBounds {
        roles: vec![],
        agents: 0,
        max_size: 3,
        ..SuiteBounds::default()
    };
    let concepts: Vec<Concept> = concepts_by_size(&b, 3).into_iter().flatten().collect();
    let mut formulas = vec![];
    for c in &concepts {
        formulas.push(Formula::assert(c.clone(), "a"));
        formulas.push(Formula::sub(Concept::Top, c.clone()));
    }
    InstanceSet { concepts, formulas }
}
