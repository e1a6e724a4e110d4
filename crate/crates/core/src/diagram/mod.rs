//! Diagrams as ordered port graphs.
//!
//! A [`Diagram`] is a set of generator nodes plus a set of undirected wires.
//! Every wire joins two endpoints, each of which is either a port of a node
//! or a position on the diagram's boundary. Swaps are never stored: a wire
//! crossing is just a wire whose endpoints sit at different positions.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_complex::Complex64 as C64;

use crate::error::{Result, ZxwError};

mod expand;
mod generator;
mod validate;

pub use expand::{expand_derived, expansion_of, split_wide_nodes};
pub(crate) use generator::fmt_complex;
pub use generator::{Dimension, GeneratorKind, PhaseVector};
pub use validate::validate;

/// Opaque node identifier, unique within one diagram.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    In,
    Out,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::In => "in",
            Role::Out => "out",
        })
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Endpoint {
    Boundary {
        role: Role,
        pos: usize,
    },
    Port {
        node: NodeId,
        role: Role,
        port: usize,
    },
}

impl Endpoint {
    pub fn input(pos: usize) -> Self {
        Endpoint::Boundary {
            role: Role::In,
            pos,
        }
    }

    pub fn output(pos: usize) -> Self {
        Endpoint::Boundary {
            role: Role::Out,
            pos,
        }
    }

    pub fn in_port(node: NodeId, port: usize) -> Self {
        Endpoint::Port {
            node,
            role: Role::In,
            port,
        }
    }

    pub fn out_port(node: NodeId, port: usize) -> Self {
        Endpoint::Port {
            node,
            role: Role::Out,
            port,
        }
    }

    pub fn node(&self) -> Option<NodeId> {
        match *self {
            Endpoint::Port { node, .. } => Some(node),
            Endpoint::Boundary { .. } => None,
        }
    }

    fn shifted(self, offset: u32) -> Self {
        match self {
            Endpoint::Port { node, role, port } => Endpoint::Port {
                node: NodeId(node.0 + offset),
                role,
                port,
            },
            b => b,
        }
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::Boundary { role, pos } => write!(f, "boundary.{role}[{pos}]"),
            Endpoint::Port { node, role, port } => write!(f, "{node}.{role}[{port}]"),
        }
    }
}

/// An undirected connection; the smaller endpoint is always stored first.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Wire(Endpoint, Endpoint);

impl Wire {
    pub fn new(a: Endpoint, b: Endpoint) -> Self {
        if a <= b {
            Wire(a, b)
        } else {
            Wire(b, a)
        }
    }

    pub fn ends(&self) -> (Endpoint, Endpoint) {
        (self.0, self.1)
    }

    pub fn touches(&self, e: Endpoint) -> bool {
        self.0 == e || self.1 == e
    }

    pub fn other(&self, e: Endpoint) -> Option<Endpoint> {
        if self.0 == e {
            Some(self.1)
        } else if self.1 == e {
            Some(self.0)
        } else {
            None
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Node {
    pub kind: GeneratorKind,
    pub dim: Dimension,
}

/// A ZXW diagram over a fixed dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct Diagram {
    dim: Dimension,
    nodes: BTreeMap<NodeId, Node>,
    wires: BTreeSet<Wire>,
    inputs: usize,
    outputs: usize,
}

/// Maps node ids of a diagram that was merged into another onto their new ids.
pub type IdMap = BTreeMap<NodeId, NodeId>;

impl Diagram {
    /// Assemble a diagram without checking it. Use [`validate`] afterwards.
    pub fn from_parts(
        dim: Dimension,
        nodes: BTreeMap<NodeId, Node>,
        wires: impl IntoIterator<Item = Wire>,
        inputs: usize,
        outputs: usize,
    ) -> Self {
        Diagram {
            dim,
            nodes,
            wires: wires.into_iter().collect(),
            inputs,
            outputs,
        }
    }

    /// The empty diagram: no nodes, no boundary.
    pub fn empty(dim: Dimension) -> Self {
        Self::from_parts(dim, BTreeMap::new(), [], 0, 0)
    }

    /// `n` parallel identity wires.
    pub fn identity(dim: Dimension, n: usize) -> Self {
        let wires = (0..n).map(|k| Wire::new(Endpoint::input(k), Endpoint::output(k)));
        Self::from_parts(dim, BTreeMap::new(), wires, n, n)
    }

    /// Wire permutation: output `p` is connected to input `perm[p]`.
    pub fn permutation(dim: Dimension, perm: &[usize]) -> Result<Self> {
        let mut seen = vec![false; perm.len()];
        for &p in perm {
            if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
                return Err(ZxwError::InvalidParameters(format!(
                    "{perm:?} is not a permutation"
                )));
            }
        }
        let wires = perm
            .iter()
            .enumerate()
            .map(|(out, &inp)| Wire::new(Endpoint::input(inp), Endpoint::output(out)));
        Ok(Self::from_parts(
            dim,
            BTreeMap::new(),
            wires,
            perm.len(),
            perm.len(),
        ))
    }

    /// A one-node diagram whose boundary matches the generator's arity.
    pub fn generator(kind: GeneratorKind, dim: Dimension) -> Result<Self> {
        let kind = kind.checked(dim)?;
        let (n, m) = kind.arity(dim);
        let id = NodeId(0);
        let wires = (0..n)
            .map(|k| Wire::new(Endpoint::input(k), Endpoint::in_port(id, k)))
            .chain((0..m).map(|k| Wire::new(Endpoint::out_port(id, k), Endpoint::output(k))));
        let nodes = BTreeMap::from([(id, Node { kind, dim })]);
        Ok(Self::from_parts(dim, nodes, wires, n, m))
    }

    /// The Bell state `Σ|jj⟩`, stored as a two-output green spider.
    pub fn cap(dim: Dimension) -> Self {
        Self::generator(GeneratorKind::spider(dim, 0, 2), dim).expect("valid spider")
    }

    /// The Bell effect `Σ⟨jj|`.
    pub fn cup(dim: Dimension) -> Self {
        Self::generator(GeneratorKind::spider(dim, 2, 0), dim).expect("valid spider")
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn outputs(&self) -> usize {
        self.outputs
    }

    pub fn nodes(&self) -> &BTreeMap<NodeId, Node> {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> Option<&Node> {
        self.nodes.get(&id)
    }

    pub fn wires(&self) -> &BTreeSet<Wire> {
        &self.wires
    }

    pub fn is_state(&self) -> bool {
        self.inputs == 0
    }

    /// First id not used by any node.
    pub fn next_id(&self) -> u32 {
        self.nodes.keys().next_back().map_or(0, |id| id.0 + 1)
    }

    /// Ports of a node in leg order: outputs first, then inputs.
    pub fn ports(&self, id: NodeId) -> Vec<Endpoint> {
        let Some(node) = self.nodes.get(&id) else {
            return vec![];
        };
        let (n, m) = node.kind.arity(node.dim);
        (0..m)
            .map(|k| Endpoint::out_port(id, k))
            .chain((0..n).map(|k| Endpoint::in_port(id, k)))
            .collect()
    }

    /// Partner lookup for every wired endpoint.
    pub fn partners(&self) -> HashMap<Endpoint, Endpoint> {
        let mut map = HashMap::with_capacity(2 * self.wires.len());
        for w in &self.wires {
            map.insert(w.0, w.1);
            map.insert(w.1, w.0);
        }
        map
    }

    /// `self` followed by `next`: outputs of `self` are joined positionally
    /// to the inputs of `next`.
    pub fn compose_seq(&self, next: &Diagram) -> Result<Diagram> {
        self.compose_seq_mapped(next).map(|(d, _)| d)
    }

    /// As [`Diagram::compose_seq`], also returning where the nodes of `next`
    /// ended up. Nodes of `self` keep their ids.
    pub fn compose_seq_mapped(&self, next: &Diagram) -> Result<(Diagram, IdMap)> {
        self.check_dim(next)?;
        if self.outputs != next.inputs {
            return Err(ZxwError::ArityMismatch(format!(
                "cannot plug {} outputs into {} inputs",
                self.outputs, next.inputs
            )));
        }
        let offset = self.next_id();
        let mut links = Vec::with_capacity(self.wires.len() + next.wires.len());
        for w in &self.wires {
            let pt = |e: Endpoint| match e {
                Endpoint::Boundary {
                    role: Role::Out,
                    pos,
                } => Pt::Junction(pos),
                e => Pt::Real(e),
            };
            links.push((pt(w.0), pt(w.1)));
        }
        for w in &next.wires {
            let pt = |e: Endpoint| match e {
                Endpoint::Boundary {
                    role: Role::In,
                    pos,
                } => Pt::Junction(pos),
                e => Pt::Real(e.shifted(offset)),
            };
            links.push((pt(w.0), pt(w.1)));
        }
        let mut nodes = self.nodes.clone();
        let mut map = IdMap::new();
        for (id, node) in &next.nodes {
            let new = NodeId(id.0 + offset);
            nodes.insert(new, node.clone());
            map.insert(*id, new);
        }
        let mut out = Diagram::from_parts(self.dim, nodes, [], self.inputs, next.outputs);
        out.absorb_links(links);
        Ok((out, map))
    }

    /// `self` next to `other`, `self` on the left.
    pub fn compose_par(&self, other: &Diagram) -> Result<Diagram> {
        self.compose_par_mapped(other).map(|(d, _)| d)
    }

    pub fn compose_par_mapped(&self, other: &Diagram) -> Result<(Diagram, IdMap)> {
        self.check_dim(other)?;
        let offset = self.next_id();
        let shift = |e: Endpoint| match e {
            Endpoint::Boundary {
                role: Role::In,
                pos,
            } => Endpoint::input(pos + self.inputs),
            Endpoint::Boundary {
                role: Role::Out,
                pos,
            } => Endpoint::output(pos + self.outputs),
            e => e.shifted(offset),
        };
        let mut out = self.clone();
        let mut map = IdMap::new();
        for (id, node) in &other.nodes {
            let new = NodeId(id.0 + offset);
            out.nodes.insert(new, node.clone());
            map.insert(*id, new);
        }
        out.wires.extend(
            other
                .wires
                .iter()
                .map(|w| Wire::new(shift(w.0), shift(w.1))),
        );
        out.inputs += other.inputs;
        out.outputs += other.outputs;
        Ok((out, map))
    }

    /// Shorthand for [`Diagram::compose_seq`].
    pub fn then(&self, next: &Diagram) -> Result<Diagram> {
        self.compose_seq(next)
    }

    /// Shorthand for [`Diagram::compose_par`].
    pub fn tensor(&self, other: &Diagram) -> Result<Diagram> {
        self.compose_par(other)
    }

    /// Map-state duality: every input is bent into an extra output with a
    /// cap. Input `p` becomes output `outputs + p`.
    pub fn bend_to_state(&self) -> Diagram {
        if self.inputs == 0 {
            return self.clone();
        }
        let mut nodes = self.nodes.clone();
        let mut cap_of = Vec::with_capacity(self.inputs);
        for next in (self.next_id()..).take(self.inputs) {
            let id = NodeId(next);
            nodes.insert(
                id,
                Node {
                    kind: GeneratorKind::spider(self.dim, 0, 2),
                    dim: self.dim,
                },
            );
            cap_of.push(id);
        }
        let map = |e: Endpoint| match e {
            Endpoint::Boundary {
                role: Role::In,
                pos,
            } => Endpoint::out_port(cap_of[pos], 0),
            e => e,
        };
        let mut wires: BTreeSet<Wire> = self
            .wires
            .iter()
            .map(|w| Wire::new(map(w.0), map(w.1)))
            .collect();
        for (p, &cap) in cap_of.iter().enumerate() {
            wires.insert(Wire::new(
                Endpoint::out_port(cap, 1),
                Endpoint::output(self.outputs + p),
            ));
        }
        Diagram::from_parts(self.dim, nodes, wires, 0, self.outputs + self.inputs)
    }

    /// Replace `removed` nodes by `replacement`.
    ///
    /// `slots` assigns a slot number to every port of a removed node that
    /// faces the rest of the diagram; replacement input `i` is glued to slot
    /// `i` and output `j` to slot `replacement.inputs() + j`. Wires between
    /// two removed ports without slots are dropped.
    pub fn splice(
        &self,
        removed: &BTreeSet<NodeId>,
        slots: &HashMap<Endpoint, usize>,
        replacement: &Diagram,
    ) -> Result<(Diagram, IdMap)> {
        self.check_dim(replacement)?;
        let n_in = replacement.inputs;
        let offset = self.next_id();
        let mut links = Vec::new();
        for w in &self.wires {
            let pt = |e: Endpoint| -> Option<Pt> {
                match e.node() {
                    Some(id) if removed.contains(&id) => slots.get(&e).map(|&s| Pt::Junction(s)),
                    _ => Some(Pt::Real(e)),
                }
            };
            match (pt(w.0), pt(w.1)) {
                (Some(a), Some(b)) => links.push((a, b)),
                (None, None) => {}
                _ => {
                    return Err(ZxwError::PatternMismatch(format!(
                        "wire {} - {} leaves the pattern through a port without a slot",
                        w.0, w.1
                    )))
                }
            }
        }
        for w in &replacement.wires {
            let pt = |e: Endpoint| match e {
                Endpoint::Boundary {
                    role: Role::In,
                    pos,
                } => Pt::Junction(pos),
                Endpoint::Boundary {
                    role: Role::Out,
                    pos,
                } => Pt::Junction(n_in + pos),
                e => Pt::Real(e.shifted(offset)),
            };
            links.push((pt(w.0), pt(w.1)));
        }
        let mut nodes: BTreeMap<NodeId, Node> = self
            .nodes
            .iter()
            .filter(|(id, _)| !removed.contains(id))
            .map(|(k, v)| (*k, v.clone()))
            .collect();
        let mut map = IdMap::new();
        for (id, node) in &replacement.nodes {
            let new = NodeId(id.0 + offset);
            nodes.insert(new, node.clone());
            map.insert(*id, new);
        }
        let mut out = Diagram::from_parts(self.dim, nodes, [], self.inputs, self.outputs);
        out.absorb_links(links);
        Ok((out, map))
    }

    /// Replace one node by a diagram of the same arity.
    pub fn substitute(&self, id: NodeId, replacement: &Diagram) -> Result<(Diagram, IdMap)> {
        let node = self.nodes.get(&id).ok_or(ZxwError::MissingNode(id))?;
        let (n, m) = node.kind.arity(node.dim);
        if (replacement.inputs, replacement.outputs) != (n, m) {
            return Err(ZxwError::ArityMismatch(format!(
                "node {id} is {n}->{m} but the replacement is {}->{}",
                replacement.inputs, replacement.outputs
            )));
        }
        let slots = (0..n)
            .map(|k| (Endpoint::in_port(id, k), k))
            .chain((0..m).map(|k| (Endpoint::out_port(id, k), n + k)))
            .collect();
        self.splice(&BTreeSet::from([id]), &slots, replacement)
    }

    /// Reassign node ids to `0..len` in their current order.
    pub fn compacted(&self) -> Diagram {
        let map: HashMap<NodeId, NodeId> = self
            .nodes
            .keys()
            .enumerate()
            .map(|(k, id)| (*id, NodeId(k as u32)))
            .collect();
        let re = |e: Endpoint| match e {
            Endpoint::Port { node, role, port } => Endpoint::Port {
                node: map[&node],
                role,
                port,
            },
            b => b,
        };
        let nodes = self
            .nodes
            .iter()
            .map(|(id, n)| (map[id], n.clone()))
            .collect();
        let wires = self.wires.iter().map(|w| Wire::new(re(w.0), re(w.1)));
        Diagram::from_parts(self.dim, nodes, wires, self.inputs, self.outputs)
    }

    fn check_dim(&self, other: &Diagram) -> Result<()> {
        if self.dim != other.dim {
            return Err(ZxwError::DimensionMismatch(self.dim.get(), other.dim.get()));
        }
        Ok(())
    }

    /// Add resolved links as wires; closed loops become a scalar `d^loops`.
    fn absorb_links(&mut self, links: Vec<(Pt, Pt)>) {
        let (wires, loops) = resolve(links);
        self.wires.extend(wires);
        if loops > 0 {
            let id = NodeId(self.next_id());
            let value = C64::new((self.dim.get() as f64).powi(loops as i32), 0.0);
            self.nodes.insert(
                id,
                Node {
                    kind: GeneratorKind::Scalar { value },
                    dim: self.dim,
                },
            );
        }
    }
}

/// Incremental construction of a diagram with explicit node ids.
#[derive(Clone, Debug)]
pub struct DiagramBuilder {
    dim: Dimension,
    nodes: BTreeMap<NodeId, Node>,
    wires: BTreeSet<Wire>,
    inputs: usize,
    outputs: usize,
}

impl DiagramBuilder {
    pub fn new(dim: Dimension, inputs: usize, outputs: usize) -> Self {
        DiagramBuilder {
            dim,
            nodes: BTreeMap::new(),
            wires: BTreeSet::new(),
            inputs,
            outputs,
        }
    }

    pub fn add(&mut self, kind: GeneratorKind) -> NodeId {
        let id = NodeId(self.nodes.keys().next_back().map_or(0, |id| id.0 + 1));
        self.nodes.insert(
            id,
            Node {
                kind,
                dim: self.dim,
            },
        );
        id
    }

    pub fn connect(&mut self, a: Endpoint, b: Endpoint) -> &mut Self {
        self.wires.insert(Wire::new(a, b));
        self
    }

    /// Check the result against all diagram invariants.
    pub fn build(self) -> Result<Diagram> {
        let mut nodes = BTreeMap::new();
        for (id, node) in self.nodes {
            let kind = node.kind.checked(node.dim)?;
            nodes.insert(
                id,
                Node {
                    kind,
                    dim: node.dim,
                },
            );
        }
        let d = Diagram::from_parts(self.dim, nodes, self.wires, self.inputs, self.outputs);
        let problems = validate(&d);
        if problems.is_empty() {
            Ok(d)
        } else {
            Err(ZxwError::IllFormed(problems))
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
enum Pt {
    Real(Endpoint),
    Junction(usize),
}

/// Follow chains of links through junction points. Each junction must occur
/// exactly twice; chains that never reach a real endpoint are closed loops.
fn resolve(links: Vec<(Pt, Pt)>) -> (Vec<Wire>, usize) {
    let mut at_junction: HashMap<usize, Vec<usize>> = HashMap::new();
    for (k, (a, b)) in links.iter().enumerate() {
        for p in [a, b] {
            if let Pt::Junction(j) = p {
                at_junction.entry(*j).or_default().push(k);
            }
        }
    }
    let mut used = vec![false; links.len()];
    let mut wires = Vec::new();
    for start in 0..links.len() {
        if used[start] {
            continue;
        }
        let (a, b) = links[start];
        let (origin, mut far) = match (a, b) {
            (Pt::Real(x), _) => (x, b),
            (_, Pt::Real(y)) => (y, a),
            _ => continue,
        };
        used[start] = true;
        let mut current = start;
        while let Pt::Junction(j) = far {
            let incident = &at_junction[&j];
            let next = incident.iter().copied().find(|&k| k != current && !used[k]);
            let Some(next) = next else { break };
            used[next] = true;
            let (x, y) = links[next];
            far = if x == Pt::Junction(j) { y } else { x };
            current = next;
        }
        if let Pt::Real(end) = far {
            wires.push(Wire::new(origin, end));
        }
    }
    // Everything left is made only of junctions.
    let mut loops = 0;
    for start in 0..links.len() {
        if used[start] {
            continue;
        }
        loops += 1;
        let mut stack = vec![start];
        used[start] = true;
        while let Some(k) = stack.pop() {
            for p in [links[k].0, links[k].1] {
                if let Pt::Junction(j) = p {
                    for &n in &at_junction[&j] {
                        if !used[n] {
                            used[n] = true;
                            stack.push(n);
                        }
                    }
                }
            }
        }
    }
    (wires, loops)
}
