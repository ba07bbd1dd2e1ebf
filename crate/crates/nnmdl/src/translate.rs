//! Translations into relational multi-modal logic and the matching model
//! transformations.
//!
//! Under `†` agent `i` becomes the three agents `3(i-1)+1`, `3(i-1)+2` and
//! `3(i-1)+3`; under `‡` it becomes `2(i-1)+1` and `2(i-1)+2`. Both maps are
//! homomorphic on every constructor without a modal operator. A diamond is
//! read as `¬□¬` before translation.
//!
//! The forward model maps keep world `w` of the neighbourhood model as world
//! `w` of the relational model and append one world per set occurring in
//! some neighbourhood, in increasing set order. The backward maps keep the
//! worlds unchanged.

use crate::bitset::WorldSet;
use crate::semantics::model::EXPANSION_LIMIT;
use crate::semantics::{DomainMode, Interpretation, Neighbourhood, NeighbourhoodModel, RelationalModel};
use crate::syntax::{Agent, Concept, Expr, Formula};
use std::collections::BTreeSet;
use thiserror::Error;

/// Errors raised by the model transformations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("neighbourhood of agent {agent} at world {world} is intensional")]
    Intensional { agent: Agent, world: usize },
    #[error("the model does not have a constant domain with rigid individuals")]
    NotConstantDomain,
    #[error("neighbourhood of agent {agent} at world {world} is not closed under supersets")]
    NotSupplemented { agent: Agent, world: usize },
    #[error("a relational model with {found} agents is not the image of a translation with {group} agents per agent")]
    AgentCount { found: Agent, group: Agent },
}

/// The two translations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Into `3n` agents, for neighbourhood frames without conditions.
    Dagger,
    /// Into `2n` agents, for supplemented neighbourhood frames.
    Ddagger,
}

impl Mode {
    /// Target agents per source agent.
    pub fn group(self) -> Agent {
        match self {
            Mode::Dagger => 3,
            Mode::Ddagger => 2,
        }
    }

    /// The `k`-th target agent (`k` from 1) of source agent `i`.
    fn agent(self, i: Agent, k: Agent) -> Agent {
        self.group() * (i - 1) + k
    }

    pub fn concept(self, c: &Concept) -> Concept {
        let t = |d: &Concept| self.concept(d);
        match c {
            Concept::Name(_) | Concept::Top | Concept::Bot => c.clone(),
            Concept::Not(d) => Concept::not(t(d)),
            Concept::And(a, b) => Concept::and(t(a), t(b)),
            Concept::Or(a, b) => Concept::or(t(a), t(b)),
            Concept::Exists(r, d) => Concept::exists(r, t(d)),
            Concept::Forall(r, d) => Concept::forall(r, t(d)),
            Concept::Box(i, d) => {
                let body = t(d);
                match self {
                    Mode::Dagger => Concept::diamond(
                        self.agent(*i, 1),
                        Concept::and(
                            Concept::boxed(self.agent(*i, 2), body.clone()),
                            Concept::boxed(self.agent(*i, 3), Concept::not(body)),
                        ),
                    ),
                    Mode::Ddagger => {
                        Concept::diamond(self.agent(*i, 1), Concept::boxed(self.agent(*i, 2), body))
                    }
                }
            }
            Concept::Diamond(i, d) => Concept::not(self.concept(&Concept::boxed(*i, Concept::not((**d).clone())))),
        }
    }

    pub fn formula(self, f: &Formula) -> Formula {
        let t = |g: &Formula| self.formula(g);
        match f {
            Formula::Sub(c, d) => Formula::sub(self.concept(c), self.concept(d)),
            Formula::Assert(c, a) => Formula::assert(self.concept(c), a),
            Formula::Role(..) | Formula::NegRole(..) => f.clone(),
            Formula::Not(g) => Formula::not(t(g)),
            Formula::And(a, b) => Formula::and(t(a), t(b)),
            Formula::Or(a, b) => Formula::or(t(a), t(b)),
            Formula::Box(i, g) => {
                let body = t(g);
                match self {
                    Mode::Dagger => Formula::diamond(
                        self.agent(*i, 1),
                        Formula::and(
                            Formula::boxed(self.agent(*i, 2), body.clone()),
                            Formula::boxed(self.agent(*i, 3), Formula::not(body)),
                        ),
                    ),
                    Mode::Ddagger => {
                        Formula::diamond(self.agent(*i, 1), Formula::boxed(self.agent(*i, 2), body))
                    }
                }
            }
            Formula::Diamond(i, g) => Formula::not(self.formula(&Formula::boxed(*i, Formula::not((**g).clone())))),
        }
    }

    pub fn expr(self, e: &Expr) -> Expr {
        match e {
            Expr::Concept(c) => Expr::Concept(self.concept(c)),
            Expr::Formula(f) => Expr::Formula(self.formula(f)),
        }
    }
}

/// The `†` translation of a concept or formula.
pub fn dagger(e: &Expr) -> Expr {
    Mode::Dagger.expr(e)
}

/// The `‡` translation of a concept or formula.
pub fn ddagger(e: &Expr) -> Expr {
    Mode::Ddagger.expr(e)
}

/// The families of a model whose neighbourhoods are all extensional.
fn families(m: &NeighbourhoodModel) -> Result<Vec<Vec<&BTreeSet<WorldSet>>>, TranslateError> {
    let domain = &m.interp[0].domain;
    let inds = &m.interp[0].inds;
    if m.interp.iter().any(|i| &i.domain != domain || &i.inds != inds) {
        return Err(TranslateError::NotConstantDomain);
    }
    let mut out = vec![];
    for i in 1..=m.n_agents {
        let mut per_world = vec![];
        for w in 0..m.n_worlds {
            match m.neighbourhood(i, w) {
                Neighbourhood::Extensional(sets) => per_world.push(sets),
                Neighbourhood::Intensional { .. } => {
                    return Err(TranslateError::Intensional { agent: i, world: w })
                }
            }
        }
        out.push(per_world);
    }
    Ok(out)
}

fn forward(m: &NeighbourhoodModel, mode: Mode) -> Result<RelationalModel, TranslateError> {
    let fams = families(m)?;
    let n = m.n_worlds;
    if mode == Mode::Ddagger {
        let all = WorldSet::full(n);
        for (i, per_world) in fams.iter().enumerate() {
            for (w, fam) in per_world.iter().enumerate() {
                let closed = fam.iter().all(|alpha| {
                    // Adding one world at a time reaches every superset.
                    all.difference(alpha).iter().all(|v| {
                        let mut beta = alpha.clone();
                        beta.insert(v);
                        fam.contains(&beta)
                    })
                });
                if !closed {
                    return Err(TranslateError::NotSupplemented {
                        agent: i as Agent + 1,
                        world: w,
                    });
                }
            }
        }
    }
    let sets: Vec<&WorldSet> = fams
        .iter()
        .flatten()
        .flat_map(|fam| fam.iter())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let index = |alpha: &WorldSet| n + sets.iter().position(|s| *s == alpha).expect("collected set");
    let mut rel = vec![BTreeSet::new(); (m.n_agents * mode.group()) as usize];
    for i in 1..=m.n_agents {
        for (w, fam) in fams[i as usize - 1].iter().enumerate() {
            for alpha in fam.iter() {
                rel[mode.agent(i, 1) as usize - 1].insert((w, index(alpha)));
            }
        }
        for (j, alpha) in sets.iter().enumerate() {
            for w in 0..n {
                let k = if alpha.contains(w) { 2 } else { 3 };
                if k == 2 || mode == Mode::Dagger {
                    rel[mode.agent(i, k) as usize - 1].insert((n + j, w));
                }
            }
        }
    }
    let first = &m.interp[0];
    let empty = Interpretation {
        domain: first.domain.clone(),
        inds: first.inds.clone(),
        ..Interpretation::default()
    };
    let mut interp = m.interp.clone();
    interp.extend(std::iter::repeat_n(empty, sets.len()));
    Ok(RelationalModel {
        n_worlds: n + sets.len(),
        n_agents: m.n_agents * mode.group(),
        rel,
        interp,
        signature: m.signature.clone(),
    })
}

fn backward(m: &RelationalModel, mode: Mode) -> Result<NeighbourhoodModel, TranslateError> {
    let group = mode.group();
    if !m.n_agents.is_multiple_of(group) {
        return Err(TranslateError::AgentCount {
            found: m.n_agents,
            group,
        });
    }
    let n = m.n_worlds;
    let all = WorldSet::full(n);
    let agents = m.n_agents / group;
    let mut nbhd = vec![];
    for i in 1..=agents {
        let mut per_world = vec![];
        for w in 0..n {
            // Each successor v contributes the sets containing every
            // R_{i2}-successor of v and, under †, no R_{i3}-successor of v.
            let mut intervals: Vec<(WorldSet, WorldSet)> = vec![];
            for v in m.successors(mode.agent(i, 1), w).iter() {
                let lb = m.successors(mode.agent(i, 2), v);
                let ub = match mode {
                    Mode::Dagger => m.successors(mode.agent(i, 3), v).complement(n),
                    Mode::Ddagger => all.clone(),
                };
                if lb.is_subset(&ub) && !intervals.contains(&(lb.clone(), ub.clone())) {
                    intervals.push((lb, ub));
                }
            }
            let nb = Neighbourhood::Intensional { intervals, unit: false };
            per_world.push(if n <= EXPANSION_LIMIT {
                Neighbourhood::Extensional(nb.expand(n).expect("within the expansion limit"))
            } else {
                nb
            });
        }
        nbhd.push(per_world);
    }
    Ok(NeighbourhoodModel {
        n_worlds: n,
        n_agents: agents,
        mode: DomainMode::Constant,
        nbhd,
        interp: m.interp.clone(),
        signature: m.signature.clone(),
    })
}

/// The relational model on which `†`-translations hold exactly where the
/// originals hold in `m`.
pub fn nbhd_to_relational_dagger(m: &NeighbourhoodModel) -> Result<RelationalModel, TranslateError> {
    forward(m, Mode::Dagger)
}

/// The neighbourhood model on which formulas hold exactly where their
/// `†`-translations hold in `m`.
pub fn relational_to_nbhd_dagger(m: &RelationalModel) -> Result<NeighbourhoodModel, TranslateError> {
    backward(m, Mode::Dagger)
}

/// [`nbhd_to_relational_dagger`] for `‡`; the frame must be supplemented.
pub fn nbhd_to_relational_ddagger(m: &NeighbourhoodModel) -> Result<RelationalModel, TranslateError> {
    forward(m, Mode::Ddagger)
}

/// [`relational_to_nbhd_dagger`] for `‡`; the result is supplemented.
pub fn relational_to_nbhd_ddagger(m: &RelationalModel) -> Result<NeighbourhoodModel, TranslateError> {
    backward(m, Mode::Ddagger)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logics::Letter;
    use crate::oracle::signature;
    use crate::semantics::{check_frame_condition, formula_holds, relational_formula_holds};
    use crate::syntax::strategies::arb_formula;
    use crate::syntax::{parse_concept, parse_formula};
    use proptest::prelude::*;

    fn sets(masks: &[u64]) -> BTreeSet<WorldSet> {
        masks.iter().map(|&m| WorldSet::from_mask(m)).collect()
    }

    fn model(n: usize, fams: Vec<Vec<u64>>) -> NeighbourhoodModel {
        let interp = Interpretation {
            domain: [0].into_iter().collect(),
            inds: [("a".to_string(), 0)].into_iter().collect(),
            ..Interpretation::default()
        };
        NeighbourhoodModel {
            n_worlds: n,
            n_agents: 1,
            mode: DomainMode::Constant,
            nbhd: vec![fams.iter().map(|f| Neighbourhood::Extensional(sets(f))).collect()],
            interp: vec![interp; n],
            signature: signature(&["A"], &["r"], &["a"]),
        }
    }

    #[test]
    fn names_are_fixed_points() {
        let a = Expr::Concept(Concept::name("A"));
        assert_eq!(dagger(&a), a);
        assert_eq!(ddagger(&a), a);
    }

    #[test]
    fn box_clauses() {
        let psi = parse_formula("A(a)", 1).unwrap();
        let expect = parse_formula(r"<1>([2](A(a)) /\ [3]~(A(a)))", 3).unwrap();
        assert_eq!(Mode::Dagger.formula(&Formula::boxed(1, psi)), expect);
        let c = parse_concept("[1]A", 1).unwrap();
        assert_eq!(Mode::Ddagger.concept(&c), parse_concept("<1>[2]A", 2).unwrap());
        let c = parse_concept("[2]A", 2).unwrap();
        assert_eq!(Mode::Dagger.concept(&c), parse_concept("<4>([5]A & [6]~A)", 6).unwrap());
    }

    #[test]
    fn diamonds_go_through_negation() {
        let c = parse_concept("<1>A", 1).unwrap();
        assert_eq!(Mode::Ddagger.concept(&c), parse_concept("~<1>[2]~A", 2).unwrap());
    }

    #[test]
    fn empty_neighbourhoods_give_no_set_worlds() {
        let r = nbhd_to_relational_dagger(&model(2, vec![vec![], vec![]])).unwrap();
        assert_eq!(r.n_worlds, 2);
        assert_eq!(r.n_agents, 3);
        assert!(r.rel.iter().all(|x| x.is_empty()));
    }

    #[test]
    fn singleton_neighbourhood_unfolds() {
        let r = nbhd_to_relational_dagger(&model(1, vec![vec![0b1]])).unwrap();
        assert_eq!(r.n_worlds, 2);
        assert_eq!(r.rel[0], [(0, 1)].into_iter().collect());
        assert_eq!(r.rel[1], [(1, 0)].into_iter().collect());
        assert!(r.rel[2].is_empty());
        assert!(r.interp[1].concepts.is_empty() && r.interp[1].roles.is_empty());
        assert_eq!(r.interp[1].inds, r.interp[0].inds);
    }

    #[test]
    fn forward_errors() {
        let mut m = model(1, vec![vec![0b1]]);
        m.nbhd[0][0] = Neighbourhood::Intensional {
            intervals: vec![],
            unit: true,
        };
        assert_eq!(
            nbhd_to_relational_dagger(&m),
            Err(TranslateError::Intensional { agent: 1, world: 0 })
        );
        let m = model(2, vec![vec![0b01], vec![]]);
        assert_eq!(
            nbhd_to_relational_ddagger(&m),
            Err(TranslateError::NotSupplemented { agent: 1, world: 0 })
        );
        assert!(nbhd_to_relational_ddagger(&model(2, vec![vec![0b01, 0b11], vec![]])).is_ok());
    }

    #[test]
    fn empty_relations_give_empty_neighbourhoods() {
        let m = model(2, vec![vec![], vec![]]);
        let r = nbhd_to_relational_dagger(&m).unwrap();
        let back = relational_to_nbhd_dagger(&r).unwrap();
        assert_eq!(back.nbhd, m.nbhd);
        let r = nbhd_to_relational_ddagger(&m).unwrap();
        assert_eq!(relational_to_nbhd_ddagger(&r).unwrap().nbhd, m.nbhd);
    }

    #[test]
    fn q_fails_when_a_successor_pins_every_world() {
        // v has every world as R_2-successor, so W is in N(0).
        let mut r = RelationalModel {
            n_worlds: 2,
            n_agents: 3,
            rel: vec![BTreeSet::new(); 3],
            interp: model(2, vec![vec![], vec![]]).interp,
            signature: signature(&["A"], &["r"], &["a"]),
        };
        r.rel[0].insert((0, 1));
        r.rel[1].extend([(1, 0), (1, 1)]);
        let m = relational_to_nbhd_dagger(&r).unwrap();
        assert!(!check_frame_condition(&m, 1, Letter::Q).unwrap());
    }

    #[test]
    fn modality_free_formulas_are_unchanged() {
        for f in crate::oracle::suite(&Default::default()).iter().filter(|f| f.modal_depth() == 0) {
            assert_eq!(&Mode::Dagger.formula(f), f);
            assert_eq!(&Mode::Ddagger.formula(f), f);
        }
    }

    fn subexpressions(f: &Formula) -> usize {
        let mut fs = BTreeSet::new();
        f.subformulas(&mut fs);
        let mut cs = BTreeSet::new();
        for g in &fs {
            for c in g.concepts() {
                c.subconcepts(&mut cs);
            }
        }
        fs.len() + cs.len()
    }

    fn arb_relational(agents: Agent) -> impl Strategy<Value = RelationalModel> {
        (1usize..=3, proptest::collection::vec(any::<u64>(), 4)).prop_map(move |(n, bits)| {
            let k = 2;
            let mut it = bits.into_iter();
            let mut next = move || it.next().unwrap();
            let rb = next();
            let rel = (0..agents as usize)
                .map(|i| {
                    let mut r = BTreeSet::new();
                    for w in 0..n {
                        for v in 0..n {
                            if rb >> ((i * n * n + w * n + v) % 64) & 1 == 1 {
                                r.insert((w, v));
                            }
                        }
                    }
                    r
                })
                .collect();
            let (cb, eb, ab) = (next(), next(), next());
            let interp = (0..n)
                .map(|w| {
                    let mut it = Interpretation {
                        domain: (0..k).collect(),
                        inds: [("a".to_string(), (ab & 1) as usize), ("b".to_string(), (ab >> 1 & 1) as usize)]
                            .into_iter()
                            .collect(),
                        ..Interpretation::default()
                    };
                    for (j, name) in ["A", "B", "C"].iter().enumerate() {
                        let ext = (0..k).filter(|d| cb >> (w * 6 + j * 2 + d) & 1 == 1).collect();
                        it.concepts.insert(name.to_string(), ext);
                    }
                    for (j, name) in ["r", "s"].iter().enumerate() {
                        let edges = (0..k)
                            .flat_map(|d| (0..k).map(move |e| (d, e)))
                            .filter(|(d, e)| eb >> (w * 8 + j * 4 + d * 2 + e) & 1 == 1)
                            .collect();
                        it.roles.insert(name.to_string(), edges);
                    }
                    it
                })
                .collect();
            RelationalModel {
                n_worlds: n,
                n_agents: agents,
                rel,
                interp,
                signature: signature(&["A", "B", "C"], &["r", "s"], &["a", "b"]),
            }
        })
    }

    proptest! {
        #[test]
        fn translation_dag_is_linear(f in arb_formula(2)) {
            let (fd, fdd) = (Mode::Dagger.formula(&f), Mode::Ddagger.formula(&f));
            prop_assert!(subexpressions(&fd) <= 6 * subexpressions(&f));
            prop_assert!(subexpressions(&fdd) <= 4 * subexpressions(&f));
            prop_assert_eq!(fdd.modal_depth(), 2 * f.modal_depth());
            prop_assert_eq!(fd.modal_depth(), 2 * f.modal_depth());
            prop_assert!(fd.max_agent() <= 6 && fdd.max_agent() <= 4);
        }

        #[test]
        fn backward_maps_preserve_truth(r in arb_relational(3), f in arb_formula(1)) {
            let m = relational_to_nbhd_dagger(&r).unwrap();
            m.validate().unwrap();
            for w in 0..r.n_worlds {
                prop_assert_eq!(
                    formula_holds(&m, w, &f).unwrap(),
                    relational_formula_holds(&r, w, &Mode::Dagger.formula(&f)).unwrap()
                );
            }
        }

        #[test]
        fn backward_ddagger_is_supplemented(r in arb_relational(2), f in arb_formula(1)) {
            let m = relational_to_nbhd_ddagger(&r).unwrap();
            prop_assert!(check_frame_condition(&m, 1, Letter::M).unwrap());
            let there = nbhd_to_relational_ddagger(&m).unwrap();
            for w in 0..r.n_worlds {
                let expect = formula_holds(&m, w, &f).unwrap();
                prop_assert_eq!(expect, relational_formula_holds(&r, w, &Mode::Ddagger.formula(&f)).unwrap());
                prop_assert_eq!(expect, relational_formula_holds(&there, w, &Mode::Ddagger.formula(&f)).unwrap());
            }
        }

        #[test]
        fn forward_dagger_preserves_truth(r in arb_relational(3), f in arb_formula(1)) {
            // Neighbourhood models are drawn as images of relational ones.
            let m = relational_to_nbhd_dagger(&r).unwrap();
            let there = nbhd_to_relational_dagger(&m).unwrap();
            there.validate().unwrap();
            for w in 0..m.n_worlds {
                prop_assert_eq!(
                    formula_holds(&m, w, &f).unwrap(),
                    relational_formula_holds(&there, w, &Mode::Dagger.formula(&f)).unwrap()
                );
            }
        }
    }
}
