//! Bounded satisfiability by exhaustive search of small models.
//!
//! [`enumerate_models`] streams every model within the bounds in a fixed
//! order. The satisfiability searches explore the same space lazily: they
//! only fix the parts of a model the formula's value depends on, so a whole
//! block of models is discarded once the formula is decided on it.

mod search;
pub mod suite;

pub use search::MAX_SEARCH_WORLDS;
pub use suite::{boolean_instances, formula_modal_suite, suite, SuiteBounds};

use crate::bitset::{ElemSet, WorldSet};
use crate::logics::{Letters, LogicSpec};
use crate::semantics::{
    mask_condition, DomainMode, Interpretation, Neighbourhood, NeighbourhoodModel, RelationalModel,
};
use crate::syntax::{Agent, Formula, Signature};
use search::{Found, Frames};
use std::collections::BTreeSet;

/// Largest world count [`enumerate_models`] supports.
pub const MAX_STREAM_WORLDS: usize = 4;

/// Size limits for model search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub max_worlds: usize,
    pub max_domain: usize,
}

impl Bounds {
    pub fn new(max_worlds: usize, max_domain: usize) -> Bounds {
        Bounds {
            max_worlds,
            max_domain,
        }
    }
}

/// Outcome of a bounded search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleResult<M> {
    Sat { model: M, world: usize },
    NoModelWithinBounds,
}

impl<M> OracleResult<M> {
    pub fn is_sat(&self) -> bool {
        matches!(self, OracleResult::Sat { .. })
    }
}

fn configs(bounds: Bounds, mode: DomainMode, max_worlds: usize) -> Vec<(usize, Vec<ElemSet>)> {
    assert!(bounds.max_worlds >= 1 && bounds.max_domain >= 1, "bounds must be at least 1");
    assert!(
        bounds.max_worlds <= max_worlds,
        "at most {max_worlds} worlds are supported"
    );
    let mut out = vec![];
    for n in 1..=bounds.max_worlds {
        match mode {
            DomainMode::Constant => {
                for k in 1..=bounds.max_domain {
                    out.push((n, vec![ElemSet::full(k); n]));
                }
            }
            DomainMode::Varying => {
                let subsets: Vec<ElemSet> = (1..1u64 << bounds.max_domain).map(ElemSet::from_mask).collect();
                let mut idx = vec![0usize; n];
                loop {
                    out.push((n, idx.iter().map(|&i| subsets[i].clone()).collect()));
                    let Some(pos) = idx.iter().position(|&i| i + 1 < subsets.len()) else {
                        break;
                    };
                    idx[pos] += 1;
                    for i in &mut idx[..pos] {
                        *i = 0;
                    }
                }
            }
        }
    }
    out
}

/// The families over `n` worlds that satisfy every condition of `spec` at
/// world `w`, as masks, in increasing order.
fn valid_families(spec: &LogicSpec, w: usize, n: usize) -> Vec<u64> {
    let count = 1u64 << (1u64 << n);
    (0..count)
        .filter(|&f| spec.letters().iter().all(|l| mask_condition(f, w, n, l)))
        .collect()
}

/// Stream of the models within the bounds whose frames satisfy a logic.
///
/// Worlds and elements are numbered from 0. Configurations are visited by
/// world count, then domain choice; within a configuration each concept
/// extension, role extension, individual image and neighbourhood is a digit
/// of a mixed-radix counter, the first digit changing fastest.
pub struct ModelStream {
    sig: Signature,
    agents: Agent,
    mode: DomainMode,
    configs: std::vec::IntoIter<(usize, Vec<ElemSet>)>,
    spec: LogicSpec,
    current: Option<Config>,
}

struct Config {
    n: usize,
    domains: Vec<Vec<usize>>,
    families: Vec<Vec<u64>>,
    radices: Vec<u64>,
    digits: Vec<u64>,
}

impl ModelStream {
    fn start(&mut self) -> bool {
        let Some((n, domains)) = self.configs.next() else {
            return false;
        };
        let domains: Vec<Vec<usize>> = domains.iter().map(|d| d.iter().collect()).collect();
        let families: Vec<Vec<u64>> = (0..n).map(|w| valid_families(&self.spec, w, n)).collect();
        let mut radices = vec![];
        for d in &domains {
            for _ in &self.sig.concepts {
                radices.push(1u64 << d.len());
            }
            for _ in &self.sig.roles {
                radices.push(1u64 << (d.len() * d.len()));
            }
        }
        let ind_worlds = if self.mode == DomainMode::Constant { 1 } else { n };
        for d in domains.iter().take(ind_worlds) {
            for _ in &self.sig.individuals {
                radices.push(d.len() as u64);
            }
        }
        for _ in 0..self.agents {
            for f in &families {
                radices.push(f.len() as u64);
            }
        }
        let digits = vec![0; radices.len()];
        self.current = Some(Config {
            n,
            domains,
            families,
            radices,
            digits,
        });
        true
    }

    fn build(&self, c: &Config) -> NeighbourhoodModel {
        let mut pos = 0;
        let mut next = || {
            pos += 1;
            c.digits[pos - 1]
        };
        let mut interp: Vec<Interpretation> = c
            .domains
            .iter()
            .map(|d| Interpretation {
                domain: d.iter().copied().collect(),
                ..Default::default()
            })
            .collect();
        for (w, d) in c.domains.iter().enumerate() {
            for name in &self.sig.concepts {
                let bits = next();
                let ext = (0..d.len()).filter(|j| bits >> j & 1 == 1).map(|j| d[j]).collect();
                interp[w].concepts.insert(name.clone(), ext);
            }
            for name in &self.sig.roles {
                let bits = next();
                let mut pairs = BTreeSet::new();
                for x in 0..d.len() {
                    for y in 0..d.len() {
                        if bits >> (x * d.len() + y) & 1 == 1 {
                            pairs.insert((d[x], d[y]));
                        }
                    }
                }
                interp[w].roles.insert(name.clone(), pairs);
            }
        }
        if self.mode == DomainMode::Constant {
            let d = &c.domains[0];
            for name in &self.sig.individuals {
                let e = d[next() as usize];
                for i in &mut interp {
                    i.inds.insert(name.clone(), e);
                }
            }
        } else {
            for (w, d) in c.domains.iter().enumerate() {
                for name in &self.sig.individuals {
                    interp[w].inds.insert(name.clone(), d[next() as usize]);
                }
            }
        }
        let nbhd = (0..self.agents)
            .map(|_| {
                (0..c.n)
                    .map(|w| {
                        let fam = c.families[w][next() as usize];
                        let sets: BTreeSet<WorldSet> = (0..1u64 << c.n)
                            .filter(|a| fam >> a & 1 == 1)
                            .map(WorldSet::from_mask)
                            .collect();
                        Neighbourhood::Extensional(sets)
                    })
                    .collect()
            })
            .collect();
        NeighbourhoodModel {
            n_worlds: c.n,
            n_agents: self.agents,
            mode: self.mode,
            nbhd,
            interp,
            signature: self.sig.clone(),
        }
    }
}

impl Iterator for ModelStream {
    type Item = NeighbourhoodModel;

    fn next(&mut self) -> Option<NeighbourhoodModel> {
        loop {
            if self.current.is_none() && !self.start() {
                return None;
            }
            let c = self.current.as_mut().expect("configuration started");
            if c.radices.contains(&0) {
                self.current = None;
                continue;
            }
            let c = self.current.take().expect("configuration started");
            let model = self.build(&c);
            let mut c = c;
            match (0..c.digits.len()).find(|&i| c.digits[i] + 1 < c.radices[i]) {
                Some(i) => {
                    c.digits[i] += 1;
                    for d in &mut c.digits[..i] {
                        *d = 0;
                    }
                    self.current = Some(c);
                }
                None => self.current = None,
            }
            return Some(model);
        }
    }
}

/// Every model over `sig` for one agent within the bounds whose frame
/// satisfies `spec`. At most [`MAX_STREAM_WORLDS`] worlds are supported.
pub fn enumerate_models(sig: &Signature, bounds: Bounds, mode: DomainMode, spec: &LogicSpec) -> ModelStream {
    enumerate_models_for(sig, 1, bounds, mode, spec)
}

/// [`enumerate_models`] for `agents` agents.
pub fn enumerate_models_for(
    sig: &Signature,
    agents: Agent,
    bounds: Bounds,
    mode: DomainMode,
    spec: &LogicSpec,
) -> ModelStream {
    ModelStream {
        sig: sig.clone(),
        agents,
        mode,
        configs: configs(bounds, mode, MAX_STREAM_WORLDS).into_iter(),
        spec: *spec,
        current: None,
    }
}

/// Every relational model over `sig` for `agents` agents with constant
/// domain, in the same counter order as [`enumerate_models`].
pub fn enumerate_relational_models(sig: &Signature, agents: Agent, bounds: Bounds) -> impl Iterator<Item = RelationalModel> {
    // A relational frame is a neighbourhood frame whose digit ranges over
    // successor sets; the E stream supplies interpretations.
    let sig = sig.clone();
    configs(bounds, DomainMode::Constant, MAX_STREAM_WORLDS)
        .into_iter()
        .flat_map(move |(n, domains)| {
            let sig = sig.clone();
            let interps: Vec<Vec<Interpretation>> = {
                let spec = LogicSpec::validate(Letters::empty()).expect("E is consistent");
                let mut stream = ModelStream {
                    sig: sig.clone(),
                    agents: 0,
                    mode: DomainMode::Constant,
                    configs: vec![(n, domains)].into_iter(),
                    spec,
                    current: None,
                };
                std::iter::from_fn(|| stream.next()).map(|m| m.interp).collect()
            };
            let frames = 1u64 << (n * n * agents as usize);
            (0..frames).flat_map(move |bits| {
                let rel: Vec<BTreeSet<(usize, usize)>> = (0..agents as usize)
                    .map(|i| {
                        let mut r = BTreeSet::new();
                        for w in 0..n {
                            for v in 0..n {
                                if bits >> (i * n * n + w * n + v) & 1 == 1 {
                                    r.insert((w, v));
                                }
                            }
                        }
                        r
                    })
                    .collect();
                let sig = sig.clone();
                interps.clone().into_iter().map(move |interp| RelationalModel {
                    n_worlds: n,
                    n_agents: agents,
                    rel: rel.clone(),
                    interp,
                    signature: sig.clone(),
                })
            })
        })
}

fn check_search_bounds(bounds: Bounds) {
    assert!(bounds.max_worlds >= 1 && bounds.max_domain >= 1, "bounds must be at least 1");
    assert!(
        bounds.max_worlds <= MAX_SEARCH_WORLDS,
        "at most {MAX_SEARCH_WORLDS} worlds are supported"
    );
}

fn domain_sizes(bounds: Bounds) -> impl Iterator<Item = (usize, usize)> {
    (1..=bounds.max_worlds).flat_map(move |n| (1..=bounds.max_domain).map(move |k| (n, k)))
}

/// A model of `phi` under `spec` within the bounds, satisfying `phi` at
/// world 0, or [`OracleResult::NoModelWithinBounds`]. At most
/// [`MAX_SEARCH_WORLDS`] worlds are supported.
pub fn sat_by_enumeration(
    phi: &Formula,
    spec: &LogicSpec,
    bounds: Bounds,
    mode: DomainMode,
) -> OracleResult<NeighbourhoodModel> {
    sat_by_enumeration_multi(phi, std::slice::from_ref(spec), bounds, mode)
        .pop()
        .expect("one result per specification")
}

/// [`sat_by_enumeration`] for several logics in one pass over the search
/// space. Results are in the order of `specs` (at most 64).
pub fn sat_by_enumeration_multi(
    phi: &Formula,
    specs: &[LogicSpec],
    bounds: Bounds,
    mode: DomainMode,
) -> Vec<OracleResult<NeighbourhoodModel>> {
    check_search_bounds(bounds);
    assert!(specs.len() <= 64, "at most 64 specifications per search");
    let mut out: Vec<OracleResult<NeighbourhoodModel>> =
        specs.iter().map(|_| OracleResult::NoModelWithinBounds).collect();
    if specs.is_empty() {
        return out;
    }
    let mut wanted = if specs.len() == 64 { u64::MAX } else { (1u64 << specs.len()) - 1 };
    let frames = Frames::Neighbourhood(specs.to_vec());
    for (n, k) in domain_sizes(bounds) {
        for (j, found) in search::search(phi, &frames, n, k, mode, wanted).into_iter().enumerate() {
            if let Some(Found::Neighbourhood(model)) = found {
                out[j] = OracleResult::Sat { model, world: 0 };
                wanted &= !(1 << j);
            }
        }
        if wanted == 0 {
            break;
        }
    }
    out
}

/// A relational model of `phi` with constant domain within the bounds, or
/// [`OracleResult::NoModelWithinBounds`].
pub fn relational_sat_by_enumeration(phi: &Formula, bounds: Bounds) -> OracleResult<RelationalModel> {
    check_search_bounds(bounds);
    for (n, k) in domain_sizes(bounds) {
        let found = search::search(phi, &Frames::Relational, n, k, DomainMode::Constant, 1);
        if let Some(Some(Found::Relational(model))) = found.into_iter().next() {
            return OracleResult::Sat { model, world: 0 };
        }
    }
    OracleResult::NoModelWithinBounds
}

/// Signature with the given names.
pub fn signature(concepts: &[&str], roles: &[&str], individuals: &[&str]) -> Signature {
    let set = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<BTreeSet<String>>();
    Signature {
        concepts: set(concepts),
        roles: set(roles),
        individuals: set(individuals),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{check_logic_conditions, formula_holds, relational_formula_holds};
    use crate::syntax::{parse_formula, Concept};

    fn spec(s: &str) -> LogicSpec {
        s.parse().unwrap()
    }

    fn f(s: &str) -> Formula {
        parse_formula(s, 2).unwrap()
    }

    #[test]
    fn stream_count_single_world() {
        let sig = signature(&["A"], &[], &[]);
        let n = enumerate_models(&sig, Bounds::new(1, 1), DomainMode::Constant, &spec("E")).count();
        assert_eq!(n, 2 * 4);
    }

    #[test]
    fn stream_filters() {
        let sig = signature(&["A"], &[], &["a"]);
        for m in enumerate_models(&sig, Bounds::new(2, 1), DomainMode::Constant, &spec("EQ")) {
            for w in 0..m.n_worlds {
                assert!(!m.neighbourhood(1, w).contains(&WorldSet::full(m.n_worlds), m.n_worlds));
            }
        }
        for m in enumerate_models(&sig, Bounds::new(2, 1), DomainMode::Constant, &spec("EN")) {
            for w in 0..m.n_worlds {
                assert!(m.neighbourhood(1, w).contains(&WorldSet::full(m.n_worlds), m.n_worlds));
            }
        }
    }

    /// The stream's size follows from counting each choice independently.
    #[test]
    fn stream_counts_match_product() {
        let sig = signature(&["A"], &["r"], &["a"]);
        for letters in ["E", "EM", "EC", "ET", "EMCN"] {
            let s = spec(letters);
            let mut expected = 0u64;
            for n in 1..=2usize {
                let per_world: Vec<u64> = (0..n)
                    .map(|w| {
                        (0..1u64 << (1 << n))
                            .filter(|&f| {
                                let fam: BTreeSet<WorldSet> =
                                    (0..1u64 << n).filter(|a| f >> a & 1 == 1).map(WorldSet::from_mask).collect();
                                s.letters().iter().all(|l| crate::semantics::family_condition(&fam, w, n, l))
                            })
                            .count() as u64
                    })
                    .collect();
                for k in 1..=2u64 {
                    let interp = (1u64 << k).pow(n as u32) * (1u64 << (k * k)).pow(n as u32) * k;
                    expected += interp * per_world.iter().product::<u64>();
                }
            }
            let got = enumerate_models(&sig, Bounds::new(2, 2), DomainMode::Constant, &s).count() as u64;
            assert_eq!(got, expected, "{letters}");
        }
    }

    #[test]
    fn stream_models_are_valid() {
        let sig = signature(&["A"], &["r"], &["a"]);
        for mode in [DomainMode::Constant, DomainMode::Varying] {
            for m in enumerate_models(&sig, Bounds::new(2, 2), mode, &spec("EC")).step_by(97) {
                m.validate().unwrap();
                assert!(check_logic_conditions(&m, &spec("EC")).unwrap());
            }
        }
    }

    #[test]
    fn contradiction_has_no_model() {
        let phi = f("(A & ~A)(a)");
        for b in [Bounds::new(1, 1), Bounds::new(3, 2)] {
            assert_eq!(sat_by_enumeration(&phi, &spec("E"), b, DomainMode::Constant), OracleResult::NoModelWithinBounds);
            assert_eq!(sat_by_enumeration(&phi, &spec("E"), b, DomainMode::Varying), OracleResult::NoModelWithinBounds);
        }
    }

    #[test]
    fn sat_results_verify() {
        let cases = [
            ("E", "~(top sub [1]A)"),
            ("EM", r"([1]A(a) /\ <1>B(a))"),
            ("ET", r"(([1](A(a)) /\ ~A(a)) \/ r(a,a))"),
            ("EQ", "~[1]top(a)"),
            ("EC", r"([1]A(a) /\ ~[1](A | B)(a))"),
        ];
        for (s, text) in cases {
            let phi = f(text);
            for mode in [DomainMode::Constant, DomainMode::Varying] {
                match sat_by_enumeration(&phi, &spec(s), Bounds::new(3, 2), mode) {
                    OracleResult::Sat { model, world } => {
                        assert!(formula_holds(&model, world, &phi).unwrap(), "{s} {text}");
                        assert!(check_logic_conditions(&model, &spec(s)).unwrap());
                    }
                    OracleResult::NoModelWithinBounds => panic!("{s} {text} {mode:?}"),
                }
            }
        }
    }

    #[test]
    fn principles_block_countermodels() {
        let cases = [
            ("EC", r"(([1]A(a) /\ [1]B(a)) /\ ~[1](A & B)(a))"),
            ("EM", r"([1](A & B)(a) /\ ~[1]A(a))"),
            ("ET", r"([1]A(a) /\ ~A(a))"),
            ("EN", "~[1]top(a)"),
            ("EP", "[1]bot(a)"),
            ("ED", r"([1]A(a) /\ [1]~A(a))"),
        ];
        for (s, text) in cases {
            let r = sat_by_enumeration(&f(text), &spec(s), Bounds::new(3, 2), DomainMode::Constant);
            assert_eq!(r, OracleResult::NoModelWithinBounds, "{s} {text}");
            assert!(sat_by_enumeration(&f(text), &spec("E"), Bounds::new(3, 2), DomainMode::Constant).is_sat());
        }
    }

    #[test]
    fn worked_example_by_logic() {
        let phi = parse_formula(
            "~([1] some req.(Prod & InCatal) sub [1](Conf | ~Conf))",
            1,
        )
        .unwrap();
        let em = sat_by_enumeration(&phi, &spec("EM"), Bounds::new(3, 2), DomainMode::Constant);
        assert_eq!(em, OracleResult::NoModelWithinBounds);
        assert!(sat_by_enumeration(&phi, &spec("E"), Bounds::new(3, 2), DomainMode::Constant).is_sat());
    }

    /// The search agrees with running the full stream.
    #[test]
    fn search_agrees_with_stream() {
        let sig = signature(&["A"], &["r"], &["a"]);
        let b = Bounds::new(2, 1);
        let phis: Vec<Formula> = suite(&SuiteBounds {
            concepts: vec!["A".into()],
            max_size: 4,
            ..SuiteBounds::default()
        });
        for letters in ["E", "EM", "EC", "EN", "ET", "EQ", "ED"] {
            let s = spec(letters);
            let models: Vec<NeighbourhoodModel> = enumerate_models(&sig, b, DomainMode::Constant, &s).collect();
            let results = phis.iter().map(|phi| sat_by_enumeration(phi, &s, b, DomainMode::Constant));
            for (phi, r) in phis.iter().zip(results) {
                let streamed = models
                    .iter()
                    .any(|m| (0..m.n_worlds).any(|w| formula_holds(m, w, phi).unwrap()));
                assert_eq!(r.is_sat(), streamed, "{letters} {phi}");
            }
        }
    }

    #[test]
    fn multi_matches_single() {
        let specs: Vec<LogicSpec> = ["E", "EM", "EC", "EN", "ET", "EQ", "EP", "ED"].iter().map(|s| spec(s)).collect();
        for text in [r"([1]A(a) /\ ~A(a))", r"(~[1]top(a) /\ [1](A & B)(a))", r"(<1>A(a) /\ <1>~A(a))"] {
            let phi = f(text);
            let multi = sat_by_enumeration_multi(&phi, &specs, Bounds::new(2, 2), DomainMode::Constant);
            for (s, m) in specs.iter().zip(multi) {
                let single = sat_by_enumeration(&phi, s, Bounds::new(2, 2), DomainMode::Constant);
                assert_eq!(m.is_sat(), single.is_sat(), "{s} {text}");
            }
        }
    }

    #[test]
    fn relational_search() {
        // Q is unsatisfiable on relational frames.
        let q = Formula::sub(Concept::Top, Concept::not(Concept::boxed(1, Concept::Top)));
        assert_eq!(relational_sat_by_enumeration(&q, Bounds::new(3, 2)), OracleResult::NoModelWithinBounds);
        // A dead end satisfies every box.
        let phi = f(r"[1](A(a) /\ ~A(a))");
        match relational_sat_by_enumeration(&phi, Bounds::new(1, 1)) {
            OracleResult::Sat { model, world } => {
                assert!(relational_formula_holds(&model, world, &phi).unwrap());
                assert!(model.successors(1, world).is_empty());
            }
            OracleResult::NoModelWithinBounds => panic!(),
        }
        let c = f(r"(([1]A(a) /\ [1]B(a)) /\ ~[1](A & B)(a))");
        assert_eq!(relational_sat_by_enumeration(&c, Bounds::new(3, 2)), OracleResult::NoModelWithinBounds);
    }

    #[test]
    fn relational_search_agrees_with_stream() {
        let sig = signature(&["A"], &["r"], &["a"]);
        let b = Bounds::new(2, 1);
        let models: Vec<RelationalModel> = enumerate_relational_models(&sig, 1, b).collect();
        assert_eq!(models.len(), 2 * 4 + 16 * 16);
        let phis = suite(&SuiteBounds {
            concepts: vec!["A".into()],
            max_size: 4,
            ..SuiteBounds::default()
        });
        for phi in &phis {
            let streamed = models
                .iter()
                .any(|m| (0..m.n_worlds).any(|w| relational_formula_holds(m, w, phi).unwrap()));
            assert_eq!(relational_sat_by_enumeration(phi, b).is_sat(), streamed, "{phi}");
        }
    }

    #[test]
    fn varying_domains_separate_from_constant() {
        // Under EQ with rigid names, ([1]⊤)(a) needs the unit in N(w). With
        // varying domains the truth set of ⊤ for a can be a proper subset.
        let phi = f("[1]top(a)");
        assert!(!sat_by_enumeration(&phi, &spec("EQ"), Bounds::new(3, 2), DomainMode::Constant).is_sat());
        assert!(sat_by_enumeration(&phi, &spec("EQ"), Bounds::new(3, 2), DomainMode::Varying).is_sat());
    }
}
