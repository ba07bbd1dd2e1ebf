//! Frame conditions on neighbourhood functions.
//!
//! A family over at most six worlds is also handled as a 64-bit mask whose
//! bit `α` is set when the world set with mask `α` belongs to the family.

use super::model::{Neighbourhood, NeighbourhoodModel};
use super::SemanticsError;
use crate::bitset::WorldSet;
use crate::logics::{Letter, LogicSpec};
use crate::syntax::Agent;
use std::collections::BTreeSet;

/// Largest world count for mask families.
pub const MASK_WORLDS: usize = 6;

/// Whether the family `fam`, the neighbourhood of world `w` in a frame with
/// `n` worlds, satisfies the letter's condition.
pub fn family_condition(fam: &BTreeSet<WorldSet>, w: usize, n: usize, letter: Letter) -> bool {
    let all = WorldSet::full(n);
    match letter {
        Letter::E => true,
        // Closure under one-element extensions gives closure under supersets.
        Letter::M => fam.iter().all(|a| {
            (0..n).filter(|&x| !a.contains(x)).all(|x| {
                let mut b = a.clone();
                b.insert(x);
                fam.contains(&b)
            })
        }),
        Letter::C => fam
            .iter()
            .all(|a| fam.iter().all(|b| fam.contains(&a.intersection(b)))),
        Letter::N => fam.contains(&all),
        Letter::T => fam.iter().all(|a| a.contains(w)),
        Letter::D => fam.iter().all(|a| !fam.contains(&a.complement(n))),
        Letter::P => !fam.contains(&WorldSet::new()),
        Letter::Q => !fam.contains(&all),
    }
}

/// Mask version of [`family_condition`], for `n <= 6`.
pub fn mask_condition(fam: u64, w: usize, n: usize, letter: Letter) -> bool {
    debug_assert!(n <= MASK_WORLDS);
    let full = (1u64 << n) - 1;
    let members = || (0..=full).filter(move |a| fam >> a & 1 == 1);
    let has = |a: u64| fam >> a & 1 == 1;
    match letter {
        Letter::E => true,
        Letter::M => members().all(|a| (0..n).all(|x| has(a | 1 << x))),
        Letter::C => members().all(|a| members().all(|b| has(a & b))),
        Letter::N => has(full),
        Letter::T => members().all(|a| a >> w & 1 == 1),
        Letter::D => members().all(|a| !has(full & !a)),
        Letter::P => !has(0),
        Letter::Q => !has(full),
    }
}

/// Whether the neighbourhood of world `w` satisfies the letter's condition.
/// Interval neighbourhoods are decided on their bounds, so models with many
/// worlds need no expansion.
pub fn neighbourhood_condition(nb: &Neighbourhood, w: usize, n: usize, letter: Letter) -> bool {
    match nb {
        Neighbourhood::Extensional(fam) => family_condition(fam, w, n, letter),
        Neighbourhood::Intensional { intervals, unit } => {
            let all = WorldSet::full(n);
            let mut ivs: Vec<(WorldSet, WorldSet)> =
                intervals.iter().filter(|(lb, ub)| lb.is_subset(ub)).cloned().collect();
            if *unit {
                ivs.push((all.clone(), all.clone()));
            }
            interval_condition(&ivs, w, n, letter)
        }
    }
}

fn interval_condition(ivs: &[(WorldSet, WorldSet)], w: usize, n: usize, letter: Letter) -> bool {
    let all = WorldSet::full(n);
    let pairs = || ivs.iter().flat_map(|a| ivs.iter().map(move |b| (a, b)));
    match letter {
        Letter::E => true,
        Letter::M => ivs.iter().all(|(lb, _)| covered(lb, &all, ivs)),
        // Intersections of members of two intervals fill the interval of
        // the intersected bounds.
        Letter::C => pairs().all(|((l1, u1), (l2, u2))| covered(&l1.intersection(l2), &u1.intersection(u2), ivs)),
        Letter::N => ivs.iter().any(|(_, ub)| *ub == all),
        Letter::T => ivs.iter().all(|(lb, _)| lb.contains(w)),
        // Complements of an interval's members form the interval of the
        // complemented bounds.
        Letter::D => pairs().all(|((l1, u1), (l2, u2))| {
            !u1.complement(n).union(l2).is_subset(&l1.complement(n).intersection(u2))
        }),
        Letter::P => ivs.iter().all(|(lb, _)| !lb.is_empty()),
        Letter::Q => ivs.iter().all(|(_, ub)| *ub != all),
    }
}

/// Whether every set between `lb` and `ub` lies in some interval. Splits on
/// a world that some overlapping interval constrains until one interval
/// contains the whole range or none overlaps it.
fn covered(lb: &WorldSet, ub: &WorldSet, ivs: &[(WorldSet, WorldSet)]) -> bool {
    if !lb.is_subset(ub) {
        return true;
    }
    let overlapping: Vec<(WorldSet, WorldSet)> = ivs
        .iter()
        .filter(|(l, u)| l.union(lb).is_subset(&u.intersection(ub)))
        .cloned()
        .collect();
    if overlapping.iter().any(|(l, u)| l.is_subset(lb) && ub.is_subset(u)) {
        return true;
    }
    let free = ub.difference(lb);
    let split = free
        .iter()
        .find(|&x| overlapping.iter().any(|(l, u)| l.contains(x) || !u.contains(x)));
    match split {
        None => false,
        Some(x) => {
            let mut with = lb.clone();
            with.insert(x);
            let mut without = ub.clone();
            without.remove(x);
            covered(&with, ub, &overlapping) && covered(lb, &without, &overlapping)
        }
    }
}

/// Whether N_agent satisfies the letter's condition at every world.
pub fn check_frame_condition(
    m: &NeighbourhoodModel,
    agent: Agent,
    letter: Letter,
) -> Result<bool, SemanticsError> {
    if agent == 0 || agent > m.n_agents {
        return Err(SemanticsError::AgentOutOfRange {
            agent,
            n_agents: m.n_agents,
        });
    }
    Ok((0..m.n_worlds).all(|w| neighbourhood_condition(m.neighbourhood(agent, w), w, m.n_worlds, letter)))
}

/// Whether every agent's neighbourhood function satisfies every condition
/// of the specification.
pub fn check_logic_conditions(
    m: &NeighbourhoodModel,
    spec: &LogicSpec,
) -> Result<bool, SemanticsError> {
    for agent in 1..=m.n_agents {
        for w in 0..m.n_worlds {
            let nb = m.neighbourhood(agent, w);
            if !spec
                .letters()
                .iter()
                .all(|l| neighbourhood_condition(nb, w, m.n_worlds, l))
            {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
