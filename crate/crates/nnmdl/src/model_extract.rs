//! Neighbourhood models read off complete, clash-free completion sets.
//!
//! Every label is a world whose domain is the set of terms occurring in it.
//! The neighbourhood of agent `i` at label `n` is the union of the intervals
//! `[LB, UB]` of the box constraints of `i` in `S_n`, where `LB` collects the
//! labels containing every body and `UB` the labels containing no dotted
//! negation of a body, or all labels when the logic is monotone.

use crate::bitset::{ElemSet, WorldSet};
use crate::logics::Letter;
use crate::semantics::model::EXPANSION_LIMIT;
use crate::semantics::{DomainMode, Interpretation, Neighbourhood, NeighbourhoodModel};
use crate::syntax::RESERVED_CONCEPT;
use crate::tableau::rules::subsets;
use crate::tableau::{CompletionSet, Constraint, Tableau, TableauError};

impl Tableau {
    /// Labels containing the constraint.
    fn floor(&self, s: &CompletionSet, c: Constraint) -> WorldSet {
        (0..s.n_labels()).filter(|&m| s.contains(m, &c)).collect()
    }

    /// Labels not containing the dotted negation of the constraint.
    fn ceil(&self, s: &CompletionSet, c: Constraint) -> WorldSet {
        let neg = self.negate(c);
        (0..s.n_labels()).filter(|&m| !s.contains(m, &neg)).collect()
    }
}

/// Builds the model of a complete, clash-free completion set.
pub fn extract_model(tab: &Tableau, s: &CompletionSet) -> Result<NeighbourhoodModel, TableauError> {
    if tab.has_clash(s) || !tab.is_complete(s) {
        return Err(TableauError::NotComplete);
    }
    let n_worlds = s.n_labels();
    let phi = tab.formula();
    let n_inds = tab.n_individuals();
    // A label without terms gets one element shared by all such labels.
    let dummy = (0..n_worlds)
        .filter_map(|n| s.terms(n).last())
        .map(|&t| t as usize + 1)
        .max()
        .unwrap_or(0)
        .max(n_inds);
    let mut interp = vec![];
    for n in 0..n_worlds {
        let terms = s.terms(n);
        let mut domain: ElemSet = terms.iter().map(|&t| t as usize).collect();
        if domain.is_empty() {
            domain.insert(dummy);
        }
        let least = domain.first().expect("non-empty domain");
        let mut it = Interpretation {
            domain,
            ..Interpretation::default()
        };
        for &c in s.constraints(n) {
            match c {
                Constraint::Concept(k, x) => {
                    if let Some(name) = tab.atomic_name(k) {
                        if name != RESERVED_CONCEPT {
                            it.concepts.entry(name.to_string()).or_default().insert(x as usize);
                        }
                    }
                }
                Constraint::Role(r, x, y) => {
                    it.roles
                        .entry(tab.role_name(r).to_string())
                        .or_default()
                        .insert((x as usize, y as usize));
                }
                _ => {}
            }
        }
        // A blocked variable borrows the role successors of its blockers.
        for &x in terms {
            for z in tab.blockers(s, n, x) {
                for &c in s.constraints(n) {
                    if let Constraint::Role(r, z2, y) = c {
                        if z2 == z {
                            it.roles
                                .entry(tab.role_name(r).to_string())
                                .or_default()
                                .insert((x as usize, y as usize));
                        }
                    }
                }
            }
        }
        for (a, name) in tab.individuals().iter().enumerate() {
            let image = if terms.contains(&(a as u32)) { a } else { least };
            it.inds.insert(name.clone(), image);
        }
        interp.push(it);
    }

    let all = WorldSet::full(n_worlds);
    let monotone = tab.has(Letter::M);
    let mut nbhd = vec![];
    for i in 1..=tab.n_agents() {
        let mut per_world = vec![];
        for n in 0..n_worlds {
            let boxes: Vec<Constraint> = s
                .constraints(n)
                .iter()
                .copied()
                .filter(|&c| tab.box_agent(c) == Some(i))
                .collect();
            let mut intervals: Vec<(WorldSet, WorldSet)> = vec![];
            for idx in subsets(boxes.len(), tab.has(Letter::C)) {
                let mut lb = all.clone();
                let mut ub = all.clone();
                for &j in &idx {
                    let body = tab.body(boxes[j]);
                    lb = lb.intersection(&tab.floor(s, body));
                    if !monotone {
                        ub = ub.intersection(&tab.ceil(s, body));
                    }
                }
                if lb.is_subset(&ub) && !intervals.contains(&(lb.clone(), ub.clone())) {
                    intervals.push((lb, ub));
                }
            }
            let nb = Neighbourhood::Intensional {
                intervals,
                unit: tab.has(Letter::N),
            };
            per_world.push(if n_worlds <= EXPANSION_LIMIT {
                Neighbourhood::Extensional(nb.expand(n_worlds).expect("within the expansion limit"))
            } else {
                nb
            });
        }
        nbhd.push(per_world);
    }
    Ok(NeighbourhoodModel {
        n_worlds,
        n_agents: tab.n_agents(),
        mode: DomainMode::Varying,
        nbhd,
        interp,
        signature: phi.signature(),
    })
}
