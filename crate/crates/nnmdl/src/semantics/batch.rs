//! Evaluation of many formulas over up to 64 models that share one frame.
//!
//! Bit `j` of every lane word refers to model `j`. The models must have the
//! domain `{0, …, k-1}` at every world and rigid individuals. Formulas are
//! interned once into a [`Dag`] whose nodes are evaluated bottom-up, so a
//! batch costs one pass over the distinct subexpressions.

use super::model::{Interpretation, NeighbourhoodModel, RelationalModel};
use super::SemanticsError;
use crate::syntax::{Agent, Concept, Formula};
use std::collections::HashMap;

/// Lane words per model position.
type Lanes = Vec<u64>;

enum Frame {
    /// `[agent - 1][w]` lists the members of N_agent(w) as world masks.
    Neighbourhood(Vec<Vec<Vec<u64>>>),
    /// `[agent - 1][w]` is the successor mask of `w`.
    Relational(Vec<Vec<u64>>),
}

/// Up to 64 models over one frame and one constant domain.
pub struct Batch {
    n_worlds: usize,
    k: usize,
    frame: Frame,
    /// Indexed by `w * k + d`.
    concepts: HashMap<String, Lanes>,
    /// Indexed by `(w * k + d) * k + e`.
    roles: HashMap<String, Lanes>,
    /// Indexed by `w * k + d`; exactly one `d` is set per world and lane.
    inds: HashMap<String, Lanes>,
    /// One bit per model in the batch.
    pub live: u64,
}

fn invalid(msg: &str) -> SemanticsError {
    SemanticsError::Invalid(msg.to_string())
}

fn world_mask(s: &crate::bitset::WorldSet) -> Result<u64, SemanticsError> {
    s.to_mask().ok_or_else(|| invalid("more than 64 worlds"))
}

impl Batch {
    fn build<'a>(
        n_worlds: usize,
        frame: Frame,
        interps: impl Iterator<Item = &'a [Interpretation]>,
    ) -> Result<Batch, SemanticsError> {
        let mut b = Batch {
            n_worlds,
            k: 0,
            frame,
            concepts: HashMap::new(),
            roles: HashMap::new(),
            inds: HashMap::new(),
            live: 0,
        };
        for (j, interp) in interps.enumerate() {
            if j >= 64 {
                return Err(invalid("more than 64 models in a batch"));
            }
            if j == 0 {
                b.k = interp[0].domain.len();
            }
            let (k, n) = (b.k, n_worlds);
            if interp.len() != n {
                return Err(invalid("models with differing world counts"));
            }
            let bit = 1u64 << j;
            b.live |= bit;
            for (w, it) in interp.iter().enumerate() {
                if it.domain.len() != k || it.domain.bound() != k {
                    return Err(invalid("domain differs from {0, …, k-1}"));
                }
                for (name, ext) in &it.concepts {
                    let lanes = b.concepts.entry(name.clone()).or_insert_with(|| vec![0; n * k]);
                    for d in ext.iter() {
                        lanes[w * k + d] |= bit;
                    }
                }
                for (name, edges) in &it.roles {
                    let lanes = b.roles.entry(name.clone()).or_insert_with(|| vec![0; n * k * k]);
                    for &(d, e) in edges {
                        lanes[(w * k + d) * k + e] |= bit;
                    }
                }
                for (name, &d) in &it.inds {
                    let lanes = b.inds.entry(name.clone()).or_insert_with(|| vec![0; n * k]);
                    lanes[w * k + d] |= bit;
                }
            }
        }
        if b.live == 0 {
            return Err(invalid("empty batch"));
        }
        Ok(b)
    }

    /// A batch of neighbourhood models with identical neighbourhoods.
    pub fn neighbourhood(models: &[NeighbourhoodModel]) -> Result<Batch, SemanticsError> {
        let first = models.first().ok_or_else(|| invalid("empty batch"))?;
        if models.iter().any(|m| m.n_worlds != first.n_worlds || m.nbhd != first.nbhd) {
            return Err(invalid("models with differing frames"));
        }
        let n = first.n_worlds;
        let mut frame = vec![];
        for i in 1..=first.n_agents {
            let mut per_world = vec![];
            for w in 0..n {
                let fam = first.neighbourhood(i, w).expand(n)?;
                per_world.push(fam.iter().map(world_mask).collect::<Result<Vec<_>, _>>()?);
            }
            frame.push(per_world);
        }
        Batch::build(n, Frame::Neighbourhood(frame), models.iter().map(|m| m.interp.as_slice()))
    }

    /// A batch of relational models with identical relations.
    pub fn relational(models: &[RelationalModel]) -> Result<Batch, SemanticsError> {
        let first = models.first().ok_or_else(|| invalid("empty batch"))?;
        if models.iter().any(|m| m.n_worlds != first.n_worlds || m.rel != first.rel) {
            return Err(invalid("models with differing frames"));
        }
        let n = first.n_worlds;
        let mut frame = vec![];
        for i in 1..=first.n_agents {
            let per_world = (0..n)
                .map(|w| world_mask(&first.successors(i, w)))
                .collect::<Result<Vec<_>, _>>()?;
            frame.push(per_world);
        }
        Batch::build(n, Frame::Relational(frame), models.iter().map(|m| m.interp.as_slice()))
    }

    pub fn n_worlds(&self) -> usize {
        self.n_worlds
    }

    /// Lanes where `□_agent` holds at `w` of an expression whose lanes at
    /// the worlds are `truth(v)`.
    fn box_lanes(&self, agent: Agent, w: usize, truth: impl Fn(usize) -> u64) -> u64 {
        let n = self.n_worlds;
        match &self.frame {
            Frame::Relational(succ) => {
                let s = succ[agent as usize - 1][w];
                (0..n).filter(|v| s >> v & 1 == 1).fold(!0, |acc, v| acc & truth(v))
            }
            Frame::Neighbourhood(fams) => fams[agent as usize - 1][w].iter().fold(0, |acc, &alpha| {
                acc | (0..n).fold(!0, |m, v| m & if alpha >> v & 1 == 1 { truth(v) } else { !truth(v) })
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Node {
    Name(usize),
    Top,
    Bot,
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Exists(usize, usize),
    Forall(usize, usize),
    CBox(Agent, usize),
    CDiamond(Agent, usize),
    Sub(usize, usize),
    Assert(usize, usize),
    Role(usize, usize, usize, bool),
    FNot(usize),
    FAnd(usize, usize),
    FOr(usize, usize),
    FBox(Agent, usize),
    FDiamond(Agent, usize),
}

impl Node {
    fn is_concept(&self) -> bool {
        matches!(
            self,
            Node::Name(_)
                | Node::Top
                | Node::Bot
                | Node::Not(_)
                | Node::And(..)
                | Node::Or(..)
                | Node::Exists(..)
                | Node::Forall(..)
                | Node::CBox(..)
                | Node::CDiamond(..)
        )
    }
}

/// Interned concepts and formulas in bottom-up order.
#[derive(Default)]
pub struct Dag {
    nodes: Vec<Node>,
    index: HashMap<Node, usize>,
    concept_names: Names,
    role_names: Names,
    ind_names: Names,
}

/// Names in order of first occurrence.
#[derive(Default)]
struct Names {
    list: Vec<String>,
    index: HashMap<String, usize>,
}

impl Names {
    fn id(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        self.list.push(name.to_string());
        self.index.insert(name.to_string(), self.list.len() - 1);
        self.list.len() - 1
    }

    /// The lanes of every name, empty for names the batch lacks.
    fn resolve<'a>(&self, lanes: &'a HashMap<String, Lanes>, none: &'a [u64]) -> Vec<&'a [u64]> {
        self.list.iter().map(|n| lanes.get(n).map_or(none, |l| &l[..])).collect()
    }
}

/// Node values of one batch.
pub struct Values {
    offset: Vec<usize>,
    data: Vec<u64>,
}

impl Values {
    /// Lanes where formula `id` holds at world `w`.
    pub fn holds(&self, id: usize, w: usize) -> u64 {
        self.data[self.offset[id] + w]
    }
}

impl Dag {
    pub fn new() -> Dag {
        Dag::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn intern(&mut self, node: Node) -> usize {
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        self.nodes.push(node.clone());
        self.index.insert(node, self.nodes.len() - 1);
        self.nodes.len() - 1
    }

    fn concept(&mut self, c: &Concept) -> usize {
        let node = match c {
            Concept::Name(a) => Node::Name(self.concept_names.id(a)),
            Concept::Top => Node::Top,
            Concept::Bot => Node::Bot,
            Concept::Not(d) => Node::Not(self.concept(d)),
            Concept::And(a, b) => Node::And(self.concept(a), self.concept(b)),
            Concept::Or(a, b) => Node::Or(self.concept(a), self.concept(b)),
            Concept::Exists(r, d) => Node::Exists(self.role_names.id(r), self.concept(d)),
            Concept::Forall(r, d) => Node::Forall(self.role_names.id(r), self.concept(d)),
            Concept::Box(i, d) => Node::CBox(*i, self.concept(d)),
            Concept::Diamond(i, d) => Node::CDiamond(*i, self.concept(d)),
        };
        self.intern(node)
    }

    /// Interns `f` and returns its node id.
    pub fn formula(&mut self, f: &Formula) -> usize {
        let node = match f {
            Formula::Sub(c, d) => Node::Sub(self.concept(c), self.concept(d)),
            Formula::Assert(c, a) => Node::Assert(self.concept(c), self.ind_names.id(a)),
            Formula::Role(r, a, b) | Formula::NegRole(r, a, b) => Node::Role(
                self.role_names.id(r),
                self.ind_names.id(a),
                self.ind_names.id(b),
                matches!(f, Formula::NegRole(..)),
            ),
            Formula::Not(g) => Node::FNot(self.formula(g)),
            Formula::And(a, b) => Node::FAnd(self.formula(a), self.formula(b)),
            Formula::Or(a, b) => Node::FOr(self.formula(a), self.formula(b)),
            Formula::Box(i, g) => Node::FBox(*i, self.formula(g)),
            Formula::Diamond(i, g) => Node::FDiamond(*i, self.formula(g)),
        };
        self.intern(node)
    }

    /// Evaluates every node on the batch. Names the batch does not
    /// interpret have empty extensions.
    pub fn eval(&self, b: &Batch) -> Values {
        let (n, k) = (b.n_worlds, b.k);
        let mut offset = Vec::with_capacity(self.nodes.len());
        let mut total = 0;
        for node in &self.nodes {
            offset.push(total);
            total += if node.is_concept() { n * k } else { n };
        }
        let mut data = vec![0u64; total];
        let none = vec![0u64; n * k * k];
        let concepts = self.concept_names.resolve(&b.concepts, &none);
        let roles = self.role_names.resolve(&b.roles, &none);
        let inds = self.ind_names.resolve(&b.inds, &none);
        for (id, node) in self.nodes.iter().enumerate() {
            let (done, rest) = data.split_at_mut(offset[id]);
            let at = |c: usize, p: usize| done[offset[c] + p];
            let out = &mut rest[..if node.is_concept() { n * k } else { n }];
            match node {
                Node::Name(a) => out.copy_from_slice(&concepts[*a][..n * k]),
                Node::Top => out.fill(!0),
                Node::Bot => {}
                Node::Not(c) => out.iter_mut().enumerate().for_each(|(p, o)| *o = !at(*c, p)),
                Node::And(x, y) => out.iter_mut().enumerate().for_each(|(p, o)| *o = at(*x, p) & at(*y, p)),
                Node::Or(x, y) => out.iter_mut().enumerate().for_each(|(p, o)| *o = at(*x, p) | at(*y, p)),
                Node::Exists(r, c) | Node::Forall(r, c) => {
                    let rl = roles[*r];
                    let exists = matches!(node, Node::Exists(..));
                    for w in 0..n {
                        for d in 0..k {
                            let mut acc = if exists { 0 } else { !0 };
                            for e in 0..k {
                                let edge = rl[(w * k + d) * k + e];
                                let v = at(*c, w * k + e);
                                if exists {
                                    acc |= edge & v;
                                } else {
                                    acc &= !edge | v;
                                }
                            }
                            out[w * k + d] = acc;
                        }
                    }
                }
                Node::CBox(i, c) | Node::CDiamond(i, c) => {
                    let is_box = matches!(node, Node::CBox(..));
                    for w in 0..n {
                        for d in 0..k {
                            out[w * k + d] = if is_box {
                                b.box_lanes(*i, w, |v| at(*c, v * k + d))
                            } else {
                                !b.box_lanes(*i, w, |v| !at(*c, v * k + d))
                            };
                        }
                    }
                }
                Node::Sub(x, y) => {
                    for (w, o) in out.iter_mut().enumerate() {
                        *o = (0..k).fold(!0, |acc, d| acc & (!at(*x, w * k + d) | at(*y, w * k + d)));
                    }
                }
                Node::Assert(c, a) => {
                    let il = inds[*a];
                    for (w, o) in out.iter_mut().enumerate() {
                        *o = (0..k).fold(0, |acc, d| acc | (il[w * k + d] & at(*c, w * k + d)));
                    }
                }
                Node::Role(r, x, y, neg) => {
                    let (rl, xl, yl) = (roles[*r], inds[*x], inds[*y]);
                    for (w, o) in out.iter_mut().enumerate() {
                        let mut acc = 0;
                        for d in 0..k {
                            for e in 0..k {
                                acc |= xl[w * k + d] & yl[w * k + e] & rl[(w * k + d) * k + e];
                            }
                        }
                        *o = if *neg { !acc } else { acc };
                    }
                }
                Node::FNot(g) => out.iter_mut().enumerate().for_each(|(w, o)| *o = !at(*g, w)),
                Node::FAnd(x, y) => out.iter_mut().enumerate().for_each(|(w, o)| *o = at(*x, w) & at(*y, w)),
                Node::FOr(x, y) => out.iter_mut().enumerate().for_each(|(w, o)| *o = at(*x, w) | at(*y, w)),
                Node::FBox(i, g) => {
                    for (w, o) in out.iter_mut().enumerate() {
                        *o = b.box_lanes(*i, w, |v| at(*g, v));
                    }
                }
                Node::FDiamond(i, g) => {
                    for (w, o) in out.iter_mut().enumerate() {
                        *o = !b.box_lanes(*i, w, |v| !at(*g, v));
                    }
                }
            }
        }
        Values { offset, data }
    }
}
