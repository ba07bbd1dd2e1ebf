//! Finite neighbourhood and relational models.

use super::SemanticsError;
use crate::bitset::{ElemSet, WorldSet};
use crate::syntax::{Agent, Signature};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// Largest number of worlds for which interval neighbourhoods are expanded.
pub const EXPANSION_LIMIT: usize = 12;

/// Whether all worlds share one domain with rigid individual names.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DomainMode {
    Varying,
    Constant,
}

/// The interpretation at one world. Elements are global indices, so the
/// same index denotes the same object at every world where it exists.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Interpretation {
    pub domain: ElemSet,
    /// Concept extensions; a name missing from the map has empty extension.
    pub concepts: BTreeMap<String, ElemSet>,
    /// Role extensions; a name missing from the map has empty extension.
    pub roles: BTreeMap<String, BTreeSet<(usize, usize)>>,
    pub inds: BTreeMap<String, usize>,
}

impl Interpretation {
    pub fn concept(&self, name: &str) -> ElemSet {
        self.concepts.get(name).cloned().unwrap_or_default()
    }

    pub fn has_edge(&self, role: &str, d: usize, e: usize) -> bool {
        self.roles.get(role).is_some_and(|r| r.contains(&(d, e)))
    }

    pub fn successors(&self, role: &str, d: usize) -> ElemSet {
        match self.roles.get(role) {
            None => ElemSet::new(),
            Some(r) => r.range((d, 0)..(d + 1, 0)).map(|&(_, e)| e).collect(),
        }
    }
}

/// A neighbourhood N_i(w).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Neighbourhood {
    /// An explicit family of world sets.
    Extensional(BTreeSet<WorldSet>),
    /// All sets between some lower and upper bound, plus the set of all
    /// worlds when `unit` holds.
    Intensional {
        intervals: Vec<(WorldSet, WorldSet)>,
        unit: bool,
    },
}

impl Default for Neighbourhood {
    fn default() -> Self {
        Neighbourhood::Extensional(BTreeSet::new())
    }
}

impl Neighbourhood {
    pub fn contains(&self, alpha: &WorldSet, n_worlds: usize) -> bool {
        match self {
            Neighbourhood::Extensional(sets) => sets.contains(alpha),
            Neighbourhood::Intensional { intervals, unit } => {
                (*unit && alpha.len() == n_worlds)
                    || intervals
                        .iter()
                        .any(|(lb, ub)| lb.is_subset(alpha) && alpha.is_subset(ub))
            }
        }
    }

    /// The explicit family of sets.
    pub fn expand(&self, n_worlds: usize) -> Result<BTreeSet<WorldSet>, SemanticsError> {
        match self {
            Neighbourhood::Extensional(sets) => Ok(sets.clone()),
            Neighbourhood::Intensional { .. } => {
                if n_worlds > EXPANSION_LIMIT {
                    return Err(SemanticsError::IntensionalTooLarge { n_worlds });
                }
                Ok((0u64..1 << n_worlds)
                    .map(WorldSet::from_mask)
                    .filter(|a| self.contains(a, n_worlds))
                    .collect())
            }
        }
    }
}

/// A finite neighbourhood model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeighbourhoodModel {
    pub n_worlds: usize,
    pub n_agents: Agent,
    pub mode: DomainMode,
    /// `nbhd[i - 1][w]` is N_i(w).
    pub nbhd: Vec<Vec<Neighbourhood>>,
    pub interp: Vec<Interpretation>,
    /// Names the model interprets. Names outside it are reported as unknown.
    pub signature: Signature,
}

/// A finite relational model with constant domain and rigid individuals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationalModel {
    pub n_worlds: usize,
    pub n_agents: Agent,
    /// `rel[i - 1]` is the accessibility relation R_i.
    pub rel: Vec<BTreeSet<(usize, usize)>>,
    pub interp: Vec<Interpretation>,
    pub signature: Signature,
}

impl RelationalModel {
    pub fn successors(&self, agent: Agent, w: usize) -> WorldSet {
        self.rel[agent as usize - 1]
            .range((w, 0)..(w + 1, 0))
            .map(|&(_, v)| v)
            .collect()
    }

    /// Checks the structural invariants.
    pub fn validate(&self) -> Result<(), SemanticsError> {
        if self.rel.len() != self.n_agents as usize {
            return Err(invalid("relation count differs from the agent count"));
        }
        for r in &self.rel {
            if r.iter().any(|&(w, v)| w >= self.n_worlds || v >= self.n_worlds) {
                return Err(invalid("relation mentions an unknown world"));
            }
        }
        validate_interps(self.n_worlds, DomainMode::Constant, &self.interp, &self.signature)
    }
}

fn invalid(msg: &str) -> SemanticsError {
    SemanticsError::Invalid(msg.to_string())
}

fn validate_interps(
    n_worlds: usize,
    mode: DomainMode,
    interp: &[Interpretation],
    sig: &Signature,
) -> Result<(), SemanticsError> {
    if n_worlds == 0 {
        return Err(invalid("a model needs at least one world"));
    }
    if interp.len() != n_worlds {
        return Err(invalid("interpretation count differs from the world count"));
    }
    for (w, i) in interp.iter().enumerate() {
        if i.domain.is_empty() {
            return Err(SemanticsError::Invalid(format!("world {w} has an empty domain")));
        }
        for (name, ext) in &i.concepts {
            if !ext.is_subset(&i.domain) {
                return Err(SemanticsError::Invalid(format!(
                    "extension of {name} at world {w} leaves the domain"
                )));
            }
        }
        for (name, ext) in &i.roles {
            if ext
                .iter()
                .any(|&(d, e)| !i.domain.contains(d) || !i.domain.contains(e))
            {
                return Err(SemanticsError::Invalid(format!(
                    "extension of {name} at world {w} leaves the domain"
                )));
            }
        }
        for a in &sig.individuals {
            match i.inds.get(a) {
                Some(&d) if i.domain.contains(d) => {}
                _ => {
                    return Err(SemanticsError::Invalid(format!(
                        "individual {a} has no image in the domain of world {w}"
                    )))
                }
            }
        }
    }
    if mode == DomainMode::Constant {
        let first = &interp[0];
        if interp
            .iter()
            .any(|i| i.domain != first.domain || i.inds != first.inds)
        {
            return Err(invalid(
                "constant-domain model with differing domains or non-rigid individuals",
            ));
        }
    }
    Ok(())
}

impl NeighbourhoodModel {
    /// The neighbourhood N_i(w).
    pub fn neighbourhood(&self, agent: Agent, w: usize) -> &Neighbourhood {
        &self.nbhd[agent as usize - 1][w]
    }

    /// Union of all domains.
    pub fn all_elements(&self) -> ElemSet {
        self.interp
            .iter()
            .fold(ElemSet::new(), |acc, i| acc.union(&i.domain))
    }

    /// Checks the structural invariants.
    pub fn validate(&self) -> Result<(), SemanticsError> {
        if self.nbhd.len() != self.n_agents as usize {
            return Err(invalid("neighbourhood count differs from the agent count"));
        }
        let all = WorldSet::full(self.n_worlds);
        for per_world in &self.nbhd {
            if per_world.len() != self.n_worlds {
                return Err(invalid("neighbourhood count differs from the world count"));
            }
            for n in per_world {
                match n {
                    Neighbourhood::Extensional(sets) => {
                        if sets.iter().any(|a| !a.is_subset(&all)) {
                            return Err(invalid("neighbourhood mentions an unknown world"));
                        }
                    }
                    Neighbourhood::Intensional { intervals, .. } => {
                        for (lb, ub) in intervals {
                            if !lb.is_subset(ub) || !ub.is_subset(&all) {
                                return Err(invalid("interval with lower bound outside upper bound"));
                            }
                        }
                    }
                }
            }
        }
        validate_interps(self.n_worlds, self.mode, &self.interp, &self.signature)
    }

    /// Replaces intensional neighbourhoods by their expansion.
    pub fn expanded(&self) -> Result<NeighbourhoodModel, SemanticsError> {
        let mut m = self.clone();
        for per_world in &mut m.nbhd {
            for n in per_world.iter_mut() {
                *n = Neighbourhood::Extensional(n.expand(self.n_worlds)?);
            }
        }
        Ok(m)
    }

    pub fn to_json(&self) -> String {
        let nbhd = self
            .nbhd
            .iter()
            .enumerate()
            .map(|(i, per_world)| {
                let m = per_world
                    .iter()
                    .enumerate()
                    .map(|(w, n)| {
                        let j = match n {
                            Neighbourhood::Extensional(sets) => {
                                NbhdJson::Sets(sets.iter().map(|a| a.iter().collect()).collect())
                            }
                            Neighbourhood::Intensional { intervals, unit } => NbhdJson::Intervals {
                                intervals: intervals
                                    .iter()
                                    .map(|(lb, ub)| IntervalJson {
                                        lb: lb.iter().collect(),
                                        ub: ub.iter().collect(),
                                    })
                                    .collect(),
                                unit: *unit,
                            },
                        };
                        (w.to_string(), j)
                    })
                    .collect();
                ((i + 1).to_string(), m)
            })
            .collect();
        let json = ModelJson {
            worlds: (0..self.n_worlds).collect(),
            agents: self.n_agents,
            mode: self.mode,
            nbhd: Some(nbhd),
            rel: None,
            interp: interps_to_json(&self.interp, &self.signature),
        };
        serde_json::to_string_pretty(&json).expect("model serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<NeighbourhoodModel, SemanticsError> {
        let json: ModelJson =
            serde_json::from_str(text).map_err(|e| SemanticsError::Json(e.to_string()))?;
        let n_worlds = check_worlds(&json.worlds)?;
        let (interp, signature) = interps_from_json(&json.interp, n_worlds)?;
        let raw = json.nbhd.unwrap_or_default();
        let mut nbhd = vec![vec![Neighbourhood::default(); n_worlds]; json.agents as usize];
        for (agent, per_world) in raw {
            let i = parse_index(&agent, "agent")?;
            if i == 0 || i > json.agents as usize {
                return Err(SemanticsError::AgentOutOfRange {
                    agent: i as Agent,
                    n_agents: json.agents,
                });
            }
            for (world, n) in per_world {
                let w = parse_index(&world, "world")?;
                if w >= n_worlds {
                    return Err(SemanticsError::UnknownWorld(w));
                }
                nbhd[i - 1][w] = match n {
                    NbhdJson::Sets(sets) => Neighbourhood::Extensional(
                        sets.into_iter().map(|s| s.into_iter().collect()).collect(),
                    ),
                    NbhdJson::Intervals { intervals, unit } => Neighbourhood::Intensional {
                        intervals: intervals
                            .into_iter()
                            .map(|iv| (iv.lb.into_iter().collect(), iv.ub.into_iter().collect()))
                            .collect(),
                        unit,
                    },
                };
            }
        }
        let m = NeighbourhoodModel {
            n_worlds,
            n_agents: json.agents,
            mode: json.mode,
            nbhd,
            interp,
            signature,
        };
        m.validate()?;
        Ok(m)
    }
}

impl RelationalModel {
    pub fn to_json(&self) -> String {
        let rel = self
            .rel
            .iter()
            .enumerate()
            .map(|(i, r)| ((i + 1).to_string(), r.iter().copied().collect()))
            .collect();
        let json = ModelJson {
            worlds: (0..self.n_worlds).collect(),
            agents: self.n_agents,
            mode: DomainMode::Constant,
            nbhd: None,
            rel: Some(rel),
            interp: interps_to_json(&self.interp, &self.signature),
        };
        serde_json::to_string_pretty(&json).expect("model serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<RelationalModel, SemanticsError> {
        let json: ModelJson =
            serde_json::from_str(text).map_err(|e| SemanticsError::Json(e.to_string()))?;
        let n_worlds = check_worlds(&json.worlds)?;
        let (interp, signature) = interps_from_json(&json.interp, n_worlds)?;
        let mut rel = vec![BTreeSet::new(); json.agents as usize];
        for (agent, pairs) in json.rel.unwrap_or_default() {
            let i = parse_index(&agent, "agent")?;
            if i == 0 || i > json.agents as usize {
                return Err(SemanticsError::AgentOutOfRange {
                    agent: i as Agent,
                    n_agents: json.agents,
                });
            }
            rel[i - 1] = pairs.into_iter().collect();
        }
        let m = RelationalModel {
            n_worlds,
            n_agents: json.agents,
            rel,
            interp,
            signature,
        };
        m.validate()?;
        Ok(m)
    }
}

#[derive(Serialize, Deserialize)]
struct ModelJson {
    worlds: Vec<usize>,
    agents: Agent,
    mode: DomainMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    nbhd: Option<BTreeMap<String, BTreeMap<String, NbhdJson>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rel: Option<BTreeMap<String, Vec<(usize, usize)>>>,
    interp: BTreeMap<String, InterpJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum NbhdJson {
    Sets(Vec<Vec<usize>>),
    Intervals { intervals: Vec<IntervalJson>, unit: bool },
}

#[derive(Serialize, Deserialize)]
struct IntervalJson {
    lb: Vec<usize>,
    ub: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct InterpJson {
    domain: Vec<usize>,
    #[serde(default)]
    concepts: BTreeMap<String, Vec<usize>>,
    #[serde(default)]
    roles: BTreeMap<String, Vec<(usize, usize)>>,
    #[serde(default)]
    inds: BTreeMap<String, usize>,
}

fn interps_to_json(interp: &[Interpretation], sig: &Signature) -> BTreeMap<String, InterpJson> {
    interp
        .iter()
        .enumerate()
        .map(|(w, i)| {
            let j = InterpJson {
                domain: i.domain.iter().collect(),
                concepts: sig
                    .concepts
                    .iter()
                    .map(|c| (c.clone(), i.concept(c).iter().collect()))
                    .collect(),
                roles: sig
                    .roles
                    .iter()
                    .map(|r| {
                        let pairs = i.roles.get(r).map(|s| s.iter().copied().collect());
                        (r.clone(), pairs.unwrap_or_default())
                    })
                    .collect(),
                inds: i.inds.clone(),
            };
            (w.to_string(), j)
        })
        .collect()
}

fn interps_from_json(
    raw: &BTreeMap<String, InterpJson>,
    n_worlds: usize,
) -> Result<(Vec<Interpretation>, Signature), SemanticsError> {
    let mut interp = vec![None; n_worlds];
    let mut sig = Signature::default();
    for (world, j) in raw {
        let w = parse_index(world, "world")?;
        if w >= n_worlds {
            return Err(SemanticsError::UnknownWorld(w));
        }
        sig.concepts.extend(j.concepts.keys().cloned());
        sig.roles.extend(j.roles.keys().cloned());
        sig.individuals.extend(j.inds.keys().cloned());
        interp[w] = Some(Interpretation {
            domain: j.domain.iter().copied().collect(),
            concepts: j
                .concepts
                .iter()
                .map(|(c, e)| (c.clone(), e.iter().copied().collect()))
                .collect(),
            roles: j
                .roles
                .iter()
                .map(|(r, e)| (r.clone(), e.iter().copied().collect()))
                .collect(),
            inds: j.inds.clone(),
        });
    }
    let interp = interp
        .into_iter()
        .enumerate()
        .map(|(w, i)| i.ok_or_else(|| SemanticsError::Invalid(format!("world {w} has no interpretation"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((interp, sig))
}

fn check_worlds(worlds: &[usize]) -> Result<usize, SemanticsError> {
    if worlds.iter().copied().ne(0..worlds.len()) {
        return Err(invalid("worlds must be numbered 0, 1, .. in order"));
    }
    Ok(worlds.len())
}

fn parse_index(s: &str, what: &str) -> Result<usize, SemanticsError> {
    s.parse()
        .map_err(|_| SemanticsError::Invalid(format!("`{s}` is not a {what} index")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_world() -> NeighbourhoodModel {
        let mut i = Interpretation {
            domain: ElemSet::from_mask(0b11),
            ..Default::default()
        };
        i.concepts.insert("A".into(), ElemSet::from_mask(0b01));
        i.roles.insert("r".into(), [(0, 1)].into_iter().collect());
        i.inds.insert("a".into(), 1);
        let mut signature = Signature::default();
        signature.concepts.insert("A".into());
        signature.concepts.insert("B".into());
        signature.roles.insert("r".into());
        signature.individuals.insert("a".into());
        NeighbourhoodModel {
            n_worlds: 1,
            n_agents: 1,
            mode: DomainMode::Constant,
            nbhd: vec![vec![Neighbourhood::Intensional {
                intervals: vec![(WorldSet::new(), WorldSet::full(1))],
                unit: false,
            }]],
            interp: vec![i],
            signature,
        }
    }

    #[test]
    fn json_round_trip() {
        let m = one_world();
        m.validate().unwrap();
        let text = m.to_json();
        assert!(text.contains("\"B\": []"));
        let back = NeighbourhoodModel::from_json(&text).unwrap();
        assert_eq!(back.nbhd, m.nbhd);
        assert_eq!(back.signature, m.signature);
        assert_eq!(back.interp[0].concept("A"), m.interp[0].concept("A"));
    }

    #[test]
    fn interval_expansion() {
        let n = Neighbourhood::Intensional {
            intervals: vec![(WorldSet::from_mask(0b01), WorldSet::from_mask(0b11))],
            unit: true,
        };
        let sets = n.expand(3).unwrap();
        let masks: Vec<u64> = sets.iter().map(|s| s.to_mask().unwrap()).collect();
        assert_eq!(masks, vec![0b001, 0b011, 0b111]);
        for mask in 0u64..8 {
            let a = WorldSet::from_mask(mask);
            assert_eq!(n.contains(&a, 3), sets.contains(&a));
        }
        assert!(matches!(
            n.expand(13),
            Err(SemanticsError::IntensionalTooLarge { n_worlds: 13 })
        ));
    }

    #[test]
    fn validation_rejects_bad_models() {
        let mut m = one_world();
        m.interp[0].domain = ElemSet::new();
        assert!(m.validate().is_err());
        let mut m = one_world();
        m.interp[0].inds.clear();
        assert!(m.validate().is_err());
    }
}
