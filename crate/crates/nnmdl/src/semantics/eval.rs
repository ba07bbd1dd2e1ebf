//! Concept extensions and formula truth sets.
//!
//! Evaluation is bottom-up over all worlds at once: a concept denotes one
//! element set per world and a formula denotes a set of worlds. The modal
//! clause is supplied by the structure, so neighbourhood and relational
//! models share the evaluator.

use super::model::{Interpretation, NeighbourhoodModel, RelationalModel};
use super::SemanticsError;
use crate::bitset::{ElemSet, WorldSet};
use crate::syntax::{Agent, Concept, Formula, Signature};

/// A finite structure with a per-world interpretation and a box clause.
pub trait Structure {
    fn n_worlds(&self) -> usize;
    fn n_agents(&self) -> Agent;
    fn interp(&self, w: usize) -> &Interpretation;
    fn signature(&self) -> &Signature;
    /// Whether `□_agent` holds at `w` of an expression whose truth set is
    /// `truth`.
    fn box_holds(&self, agent: Agent, w: usize, truth: &WorldSet) -> bool;
}

impl Structure for NeighbourhoodModel {
    fn n_worlds(&self) -> usize {
        self.n_worlds
    }

    fn n_agents(&self) -> Agent {
        self.n_agents
    }

    fn interp(&self, w: usize) -> &Interpretation {
        &self.interp[w]
    }

    fn signature(&self) -> &Signature {
        &self.signature
    }

    fn box_holds(&self, agent: Agent, w: usize, truth: &WorldSet) -> bool {
        self.neighbourhood(agent, w).contains(truth, self.n_worlds)
    }
}

impl Structure for RelationalModel {
    fn n_worlds(&self) -> usize {
        self.n_worlds
    }

    fn n_agents(&self) -> Agent {
        self.n_agents
    }

    fn interp(&self, w: usize) -> &Interpretation {
        &self.interp[w]
    }

    fn signature(&self) -> &Signature {
        &self.signature
    }

    fn box_holds(&self, agent: Agent, w: usize, truth: &WorldSet) -> bool {
        self.successors(agent, w).is_subset(truth)
    }
}

fn check_agent<S: Structure + ?Sized>(s: &S, agent: Agent) -> Result<(), SemanticsError> {
    if agent == 0 || agent > s.n_agents() {
        return Err(SemanticsError::AgentOutOfRange {
            agent,
            n_agents: s.n_agents(),
        });
    }
    Ok(())
}

/// Truth set ⟦D⟧_d from per-world extensions: worlds where `d` is in the
/// extension. An element outside a world's domain is in no extension there.
fn truth_of(ext: &[ElemSet], d: usize) -> WorldSet {
    ext.iter()
        .enumerate()
        .filter(|(_, e)| e.contains(d))
        .map(|(v, _)| v)
        .collect()
}

/// The extension of `c` at every world.
pub fn extensions<S: Structure + ?Sized>(s: &S, c: &Concept) -> Result<Vec<ElemSet>, SemanticsError> {
    let n = s.n_worlds();
    let domains = || (0..n).map(|w| s.interp(w).domain.clone());
    Ok(match c {
        Concept::Name(name) => {
            if !s.signature().concepts.contains(name) {
                return Err(SemanticsError::UnknownConcept(name.clone()));
            }
            (0..n)
                .map(|w| s.interp(w).concept(name).intersection(&s.interp(w).domain))
                .collect()
        }
        Concept::Top => domains().collect(),
        Concept::Bot => vec![ElemSet::new(); n],
        Concept::Not(d) => {
            let e = extensions(s, d)?;
            domains().zip(e).map(|(dom, x)| dom.difference(&x)).collect()
        }
        Concept::And(a, b) => {
            let (ea, eb) = (extensions(s, a)?, extensions(s, b)?);
            ea.iter().zip(&eb).map(|(x, y)| x.intersection(y)).collect()
        }
        Concept::Or(a, b) => {
            let (ea, eb) = (extensions(s, a)?, extensions(s, b)?);
            ea.iter().zip(&eb).map(|(x, y)| x.union(y)).collect()
        }
        Concept::Exists(r, d) | Concept::Forall(r, d) => {
            if !s.signature().roles.contains(r) {
                return Err(SemanticsError::UnknownRole(r.clone()));
            }
            let e = extensions(s, d)?;
            let exists = matches!(c, Concept::Exists(..));
            (0..n)
                .map(|w| {
                    let i = s.interp(w);
                    i.domain
                        .iter()
                        .filter(|&x| {
                            let succ = i.successors(r, x);
                            if exists {
                                succ.intersects(&e[w])
                            } else {
                                succ.is_subset(&e[w])
                            }
                        })
                        .collect()
                })
                .collect()
        }
        Concept::Box(i, d) | Concept::Diamond(i, d) => {
            check_agent(s, *i)?;
            let is_box = matches!(c, Concept::Box(..));
            // ◇D is ¬□¬D, and ⟦¬D⟧_x collects worlds where x exists and is
            // outside D.
            let inner = if is_box {
                extensions(s, d)?
            } else {
                let e = extensions(s, d)?;
                domains().zip(e).map(|(dom, x)| dom.difference(&x)).collect()
            };
            (0..n)
                .map(|w| {
                    s.interp(w)
                        .domain
                        .iter()
                        .filter(|&x| s.box_holds(*i, w, &truth_of(&inner, x)) == is_box)
                        .collect()
                })
                .collect()
        }
    })
}

fn individual<S: Structure + ?Sized>(s: &S, w: usize, a: &str) -> Result<usize, SemanticsError> {
    if !s.signature().individuals.contains(a) {
        return Err(SemanticsError::UnknownIndividual(a.to_string()));
    }
    s.interp(w)
        .inds
        .get(a)
        .copied()
        .ok_or_else(|| SemanticsError::UnknownIndividual(a.to_string()))
}

/// The set of worlds where `f` holds.
pub fn truth_set<S: Structure + ?Sized>(s: &S, f: &Formula) -> Result<WorldSet, SemanticsError> {
    let n = s.n_worlds();
    let all = WorldSet::full(n);
    Ok(match f {
        Formula::Sub(c, d) => {
            let (ec, ed) = (extensions(s, c)?, extensions(s, d)?);
            (0..n).filter(|&w| ec[w].is_subset(&ed[w])).collect()
        }
        Formula::Assert(c, a) => {
            let ec = extensions(s, c)?;
            let mut out = WorldSet::new();
            for (w, e) in ec.iter().enumerate() {
                if e.contains(individual(s, w, a)?) {
                    out.insert(w);
                }
            }
            out
        }
        Formula::Role(r, a, b) | Formula::NegRole(r, a, b) => {
            if !s.signature().roles.contains(r) {
                return Err(SemanticsError::UnknownRole(r.clone()));
            }
            let mut out = WorldSet::new();
            for w in 0..n {
                let (x, y) = (individual(s, w, a)?, individual(s, w, b)?);
                if s.interp(w).has_edge(r, x, y) {
                    out.insert(w);
                }
            }
            if matches!(f, Formula::NegRole(..)) {
                out.complement(n)
            } else {
                out
            }
        }
        Formula::Not(g) => truth_set(s, g)?.complement(n),
        Formula::And(a, b) => truth_set(s, a)?.intersection(&truth_set(s, b)?),
        Formula::Or(a, b) => truth_set(s, a)?.union(&truth_set(s, b)?),
        Formula::Box(i, g) => {
            check_agent(s, *i)?;
            let t = truth_set(s, g)?;
            (0..n).filter(|&w| s.box_holds(*i, w, &t)).collect()
        }
        Formula::Diamond(i, g) => {
            check_agent(s, *i)?;
            let t = all.difference(&truth_set(s, g)?);
            (0..n).filter(|&w| !s.box_holds(*i, w, &t)).collect()
        }
    })
}

/// The extension of `c` at world `w`.
pub fn concept_extension<S: Structure + ?Sized>(
    s: &S,
    w: usize,
    c: &Concept,
) -> Result<ElemSet, SemanticsError> {
    if w >= s.n_worlds() {
        return Err(SemanticsError::UnknownWorld(w));
    }
    Ok(extensions(s, c)?.swap_remove(w))
}

/// Whether `f` holds at world `w` of a neighbourhood model.
pub fn formula_holds(m: &NeighbourhoodModel, w: usize, f: &Formula) -> Result<bool, SemanticsError> {
    holds_in(m, w, f)
}

/// Whether `f` holds at world `w` of a relational model.
pub fn relational_formula_holds(
    m: &RelationalModel,
    w: usize,
    f: &Formula,
) -> Result<bool, SemanticsError> {
    holds_in(m, w, f)
}

/// Whether `f` holds at world `w` of any structure.
pub fn holds_in<S: Structure + ?Sized>(s: &S, w: usize, f: &Formula) -> Result<bool, SemanticsError> {
    if w >= s.n_worlds() {
        return Err(SemanticsError::UnknownWorld(w));
    }
    Ok(truth_set(s, f)?.contains(w))
}

/// Whether `f` holds at every world.
pub fn valid_in<S: Structure + ?Sized>(s: &S, f: &Formula) -> Result<bool, SemanticsError> {
    Ok(truth_set(s, f)?.len() == s.n_worlds())
}

#[cfg(test)]
mod tests {
    use super::super::model::{DomainMode, Neighbourhood};
    use super::*;
    use crate::syntax::{parse_concept, parse_formula};
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn sig() -> Signature {
        let mut s = Signature::default();
        s.concepts.extend(["A".to_string(), "B".to_string()]);
        s.roles.insert("r".into());
        s.individuals.insert("a".into());
        s
    }

    fn interp(domain: u64, a: u64) -> Interpretation {
        let mut i = Interpretation {
            domain: ElemSet::from_mask(domain),
            ..Default::default()
        };
        i.concepts.insert("A".into(), ElemSet::from_mask(a));
        i.inds.insert("a".into(), domain.trailing_zeros() as usize);
        i
    }

    fn sets(masks: &[u64]) -> Neighbourhood {
        Neighbourhood::Extensional(masks.iter().map(|&m| WorldSet::from_mask(m)).collect())
    }

    #[test]
    fn complement_and_box() {
        // W = {w, v}, N1(w) = {{v}}, d in A at v only.
        let m = NeighbourhoodModel {
            n_worlds: 2,
            n_agents: 1,
            mode: DomainMode::Constant,
            nbhd: vec![vec![sets(&[0b10]), sets(&[])]],
            interp: vec![interp(0b1, 0b0), interp(0b1, 0b1)],
            signature: sig(),
        };
        let not_a = parse_concept("~A", 1).unwrap();
        assert_eq!(concept_extension(&m, 0, &not_a).unwrap(), ElemSet::from_mask(1));
        let box_a = parse_concept("[1]A", 1).unwrap();
        assert_eq!(concept_extension(&m, 0, &box_a).unwrap(), ElemSet::from_mask(1));
        assert_eq!(concept_extension(&m, 1, &box_a).unwrap(), ElemSet::new());
        // Empty neighbourhood at v: every box formula fails there.
        let f = parse_formula("~[1](top sub top)", 1).unwrap();
        assert!(formula_holds(&m, 1, &f).unwrap());
        let ci = parse_formula("(top sub A)", 1).unwrap();
        assert!(!formula_holds(&m, 0, &ci).unwrap());
        assert!(formula_holds(&m, 1, &ci).unwrap());
        assert!(matches!(
            formula_holds(&m, 0, &parse_formula("C(a)", 1).unwrap()),
            Err(SemanticsError::UnknownConcept(_))
        ));
        assert!(matches!(formula_holds(&m, 5, &ci), Err(SemanticsError::UnknownWorld(5))));
    }

    #[test]
    fn absent_elements_are_outside_every_extension() {
        // Element 1 exists only at world 1, so its truth set for ⊤ is {1};
        // element 0 exists everywhere.
        let m = NeighbourhoodModel {
            n_worlds: 2,
            n_agents: 1,
            mode: DomainMode::Varying,
            nbhd: vec![vec![sets(&[0b11]), sets(&[0b10])]],
            interp: vec![interp(0b01, 0), interp(0b11, 0)],
            signature: sig(),
        };
        let e = extensions(&m, &parse_concept("[1]top", 1).unwrap()).unwrap();
        assert_eq!(e[0], ElemSet::from_mask(0b01));
        assert_eq!(e[1], ElemSet::from_mask(0b10));
    }

    #[test]
    fn relational_box_is_universal() {
        let m = RelationalModel {
            n_worlds: 2,
            n_agents: 1,
            rel: vec![[(0, 1)].into_iter().collect::<BTreeSet<_>>()],
            interp: vec![interp(0b1, 0), interp(0b1, 1)],
            signature: sig(),
        };
        let f = parse_formula("[1](top sub bot)", 1).unwrap();
        assert!(!relational_formula_holds(&m, 0, &f).unwrap());
        assert!(relational_formula_holds(&m, 1, &f).unwrap());
        let g = parse_formula("[1]A(a)", 1).unwrap();
        assert!(relational_formula_holds(&m, 0, &g).unwrap());
    }

    fn arb_model() -> impl Strategy<Value = NeighbourhoodModel> {
        (1usize..=3, any::<u64>(), any::<bool>()).prop_map(|(n, bits, varying)| {
            let mut rng = bits;
            let mut next = |k: u32| {
                let v = rng & ((1u64 << k) - 1);
                rng = rng.rotate_right(k).wrapping_mul(6364136223846793005).wrapping_add(1);
                v
            };
            let constant_dom = next(2) | 1;
            let interp = (0..n)
                .map(|_| {
                    let dom = if varying { next(2).max(1) } else { constant_dom };
                    let mut i = Interpretation {
                        domain: ElemSet::from_mask(dom),
                        ..Default::default()
                    };
                    i.concepts.insert("A".into(), ElemSet::from_mask(next(2) & dom));
                    i.concepts.insert("B".into(), ElemSet::from_mask(next(2) & dom));
                    let mut r = BTreeSet::new();
                    for d in 0..2 {
                        for e in 0..2 {
                            if dom >> d & 1 == 1 && dom >> e & 1 == 1 && next(1) == 1 {
                                r.insert((d, e));
                            }
                        }
                    }
                    i.roles.insert("r".into(), r);
                    i.inds.insert("a".into(), dom.trailing_zeros() as usize);
                    i.inds.insert("b".into(), 63 - dom.leading_zeros() as usize);
                    i
                })
                .collect::<Vec<_>>();
            let interp = if varying {
                interp
            } else {
                let first = interp[0].inds.clone();
                interp
                    .into_iter()
                    .map(|mut i| {
                        i.inds = first.clone();
                        i
                    })
                    .collect()
            };
            let nbhd = vec![(0..n)
                .map(|_| {
                    let fam = next(1 << n as u32);
                    let masks: Vec<u64> = (0..1u64 << n).filter(|a| fam >> a & 1 == 1).collect();
                    sets(&masks)
                })
                .collect()];
            NeighbourhoodModel {
                n_worlds: n,
                n_agents: 1,
                mode: if varying { DomainMode::Varying } else { DomainMode::Constant },
                nbhd,
                interp,
                signature: full_sig(),
            }
        })
    }

    /// The names used by the random formula generator.
    fn full_sig() -> Signature {
        let mut s = sig();
        s.concepts.insert("C".into());
        s.roles.insert("s".into());
        s.individuals.insert("b".into());
        s
    }

    proptest! {
        #[test]
        fn nnf_preserves_truth(m in arb_model(), f in crate::syntax::strategies::arb_formula(1)) {
            prop_assert!(m.validate().is_ok());
            prop_assert_eq!(truth_set(&m, &f).unwrap(), truth_set(&m, &f.nnf()).unwrap());
        }
    }
}
