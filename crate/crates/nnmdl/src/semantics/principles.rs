//! Principles: the syntactic counterparts of the frame conditions.
//!
//! A principle is a schema with infinitely many instances, so it is checked
//! over a supplied finite set of concepts and formulas. Rule-shaped
//! principles (E, M, N) are checked as implications between validities over
//! that set.

use super::eval::{extensions, truth_set, Structure};
use super::SemanticsError;
use crate::bitset::{ElemSet, WorldSet};
use crate::logics::Letter;
use crate::syntax::{Agent, Concept, Formula};

/// Concepts and formulas that instantiate the schemas.
#[derive(Clone, Debug, Default)]
pub struct InstanceSet {
    pub concepts: Vec<Concept>,
    pub formulas: Vec<Formula>,
}

fn subset_everywhere(a: &[ElemSet], b: &[ElemSet]) -> bool {
    a.iter().zip(b).all(|(x, y)| x.is_subset(y))
}

fn all_empty(a: &[ElemSet]) -> bool {
    a.iter().all(|x| x.is_empty())
}

/// Whether every instance of the letter's principle, for every agent, is
/// valid in the structure.
pub fn check_principle<S: Structure + ?Sized>(
    s: &S,
    letter: Letter,
    instances: &InstanceSet,
) -> Result<bool, SemanticsError> {
    for agent in 1..=s.n_agents() {
        if !concept_principle(s, agent, letter, &instances.concepts)?
            || !formula_principle(s, agent, letter, &instances.formulas)?
        {
            return Ok(false);
        }
    }
    Ok(true)
}

fn concept_principle<S: Structure + ?Sized>(
    s: &S,
    i: Agent,
    letter: Letter,
    concepts: &[Concept],
) -> Result<bool, SemanticsError> {
    let n = s.n_worlds();
    let domains: Vec<ElemSet> = (0..n).map(|w| s.interp(w).domain.clone()).collect();
    let ext = concepts
        .iter()
        .map(|c| extensions(s, c))
        .collect::<Result<Vec<_>, _>>()?;
    let boxed = concepts
        .iter()
        .map(|c| extensions(s, &Concept::boxed(i, c.clone())))
        .collect::<Result<Vec<_>, _>>()?;
    let pairs = || (0..concepts.len()).flat_map(|a| (0..concepts.len()).map(move |b| (a, b)));
    Ok(match letter {
        Letter::E => pairs().all(|(a, b)| ext[a] != ext[b] || boxed[a] == boxed[b]),
        Letter::M => pairs()
            .all(|(a, b)| !subset_everywhere(&ext[a], &ext[b]) || subset_everywhere(&boxed[a], &boxed[b])),
        Letter::C => {
            for (a, b) in pairs() {
                let both = extensions(s, &Concept::boxed(i, Concept::and(concepts[a].clone(), concepts[b].clone())))?;
                let lhs: Vec<ElemSet> = boxed[a].iter().zip(&boxed[b]).map(|(x, y)| x.intersection(y)).collect();
                if !subset_everywhere(&lhs, &both) {
                    return Ok(false);
                }
            }
            true
        }
        Letter::N => (0..concepts.len()).all(|a| ext[a] != domains || boxed[a] == domains),
        Letter::T => (0..concepts.len()).all(|a| subset_everywhere(&boxed[a], &ext[a])),
        Letter::D => {
            for (a, c) in concepts.iter().enumerate() {
                let dia = extensions(s, &Concept::diamond(i, c.clone()))?;
                if !subset_everywhere(&boxed[a], &dia) {
                    return Ok(false);
                }
            }
            true
        }
        Letter::P => all_empty(&extensions(s, &Concept::boxed(i, Concept::Bot))?),
        Letter::Q => all_empty(&extensions(s, &Concept::boxed(i, Concept::Top))?),
    })
}

fn formula_principle<S: Structure + ?Sized>(
    s: &S,
    i: Agent,
    letter: Letter,
    formulas: &[Formula],
) -> Result<bool, SemanticsError> {
    let all = WorldSet::full(s.n_worlds());
    let truth = formulas
        .iter()
        .map(|f| truth_set(s, f))
        .collect::<Result<Vec<_>, _>>()?;
    let boxed = formulas
        .iter()
        .map(|f| truth_set(s, &Formula::boxed(i, f.clone())))
        .collect::<Result<Vec<_>, _>>()?;
    let pairs = || (0..formulas.len()).flat_map(|a| (0..formulas.len()).map(move |b| (a, b)));
    Ok(match letter {
        Letter::E => pairs().all(|(a, b)| truth[a] != truth[b] || boxed[a] == boxed[b]),
        Letter::M => pairs().all(|(a, b)| !truth[a].is_subset(&truth[b]) || boxed[a].is_subset(&boxed[b])),
        Letter::C => {
            for (a, b) in pairs() {
                let both = truth_set(s, &Formula::boxed(i, Formula::and(formulas[a].clone(), formulas[b].clone())))?;
                if !boxed[a].intersection(&boxed[b]).is_subset(&both) {
                    return Ok(false);
                }
            }
            true
        }
        Letter::N => (0..formulas.len()).all(|a| truth[a] != all || boxed[a] == all),
        Letter::T => (0..formulas.len()).all(|a| boxed[a].is_subset(&truth[a])),
        Letter::D => {
            for (a, f) in formulas.iter().enumerate() {
                let dia = truth_set(s, &Formula::diamond(i, f.clone()))?;
                if !boxed[a].is_subset(&dia) {
                    return Ok(false);
                }
            }
            true
        }
        Letter::P => truth_set(s, &Formula::boxed(i, Formula::falsum()))?.is_empty(),
        Letter::Q => truth_set(s, &Formula::boxed(i, Formula::verum()))?.is_empty(),
    })
}
