//! Slicing a diagram into layers of parallel generators.

use std::collections::{BTreeMap, HashMap};

use crate::diagram::{Diagram, Endpoint, NodeId, Role, Wire};
use crate::error::{Result, ZxwError};

/// Nodes grouped into layers `A_1 … A_n`: every wire that runs from an
/// output port to an input port goes from an earlier layer to a later one.
#[derive(Clone, Debug, PartialEq)]
pub struct LayerDecomposition {
    pub layers: Vec<Vec<NodeId>>,
    /// Every wire runs from an output (or boundary input) to an input (or
    /// boundary output) and there is no cycle, so the layers compose back to
    /// the diagram.
    pub oriented: bool,
}

fn is_source(e: Endpoint) -> bool {
    matches!(
        e,
        Endpoint::Boundary { role: Role::In, .. }
            | Endpoint::Port {
                role: Role::Out,
                ..
            }
    )
}

/// Order a wire as (producer, consumer) when it has a direction.
fn directed(w: &Wire) -> Option<(Endpoint, Endpoint)> {
    let (a, b) = w.ends();
    match (is_source(a), is_source(b)) {
        (true, false) => Some((a, b)),
        (false, true) => Some((b, a)),
        _ => None,
    }
}

/// Longest-path layering. Wires without a direction (caps and cups drawn as
/// bare wires) do not constrain the order; nodes on a directed cycle are
/// appended one per layer.
pub fn layerize(diagram: &Diagram) -> LayerDecomposition {
    let mut preds: HashMap<NodeId, Vec<NodeId>> = HashMap::new();
    let mut succs: HashMap<NodeId, Vec<NodeId>> = HashMap::new();
    let mut oriented = true;
    for w in diagram.wires() {
        match directed(w) {
            Some((from, to)) => {
                if let (Some(a), Some(b)) = (from.node(), to.node()) {
                    succs.entry(a).or_default().push(b);
                    preds.entry(b).or_default().push(a);
                    if a == b {
                        oriented = false;
                    }
                }
            }
            None => oriented = false,
        }
    }
    let mut missing: BTreeMap<NodeId, usize> = diagram
        .nodes()
        .keys()
        .map(|id| {
            (
                *id,
                preds
                    .get(id)
                    .map_or(0, |p| p.iter().filter(|q| *q != id).count()),
            )
        })
        .collect();
    let mut depth: HashMap<NodeId, usize> = HashMap::new();
    let mut ready: Vec<NodeId> = missing
        .iter()
        .filter(|(_, k)| **k == 0)
        .map(|(id, _)| *id)
        .collect();
    while let Some(id) = ready.pop() {
        missing.remove(&id);
        let level = preds
            .get(&id)
            .into_iter()
            .flatten()
            .filter(|p| **p != id)
            .filter_map(|p| depth.get(p))
            .max()
            .map_or(0, |l| l + 1);
        depth.insert(id, level);
        for s in succs.get(&id).into_iter().flatten() {
            if *s == id {
                continue;
            }
            if let Some(k) = missing.get_mut(s) {
                *k -= 1;
                if *k == 0 {
                    ready.push(*s);
                }
            }
        }
    }
    let mut layers: Vec<Vec<NodeId>> = Vec::new();
    for (id, level) in &depth {
        if layers.len() <= *level {
            layers.resize(level + 1, Vec::new());
        }
        layers[*level].push(*id);
    }
    for layer in &mut layers {
        layer.sort();
    }
    if !missing.is_empty() {
        oriented = false;
        layers.extend(missing.keys().map(|id| vec![*id]));
    }
    LayerDecomposition { layers, oriented }
}

impl LayerDecomposition {
    /// Each layer as a diagram whose boundary is the cut before and after
    /// it; wires skipping a layer pass through as identities. Composing the
    /// result in sequence gives back `diagram`.
    pub fn to_diagrams(&self, diagram: &Diagram) -> Result<Vec<Diagram>> {
        if !self.oriented {
            return Err(ZxwError::NotLayerable(
                "some wire is not directed from an output to an input, or the wiring has a cycle"
                    .into(),
            ));
        }
        if self.layers.is_empty() {
            return Ok(vec![diagram.clone()]);
        }
        let mut level: HashMap<NodeId, usize> = HashMap::new();
        for (k, layer) in self.layers.iter().enumerate() {
            for id in layer {
                level.insert(*id, k);
            }
        }
        let last = self.layers.len();
        // Position of each end of a directed wire in layer terms: producers
        // at boundary inputs sit before layer 0, consumers at boundary
        // outputs after the last layer.
        let mut wires: Vec<(Endpoint, Endpoint, isize, usize)> = Vec::new();
        for w in diagram.wires() {
            let (from, to) = directed(w).expect("oriented");
            let start = from.node().map_or(-1, |id| level[&id] as isize);
            let end = to.node().map_or(last, |id| level[&id]);
            wires.push((from, to, start, end));
        }
        wires.sort();

        // cut[k] lists the wires crossing just before layer k.
        let mut cuts: Vec<Vec<usize>> = Vec::with_capacity(last + 1);
        for k in 0..=last {
            let mut cut: Vec<usize> = (0..wires.len())
                .filter(|&i| wires[i].2 < k as isize && wires[i].3 >= k)
                .collect();
            if k == 0 {
                cut.sort_by_key(|&i| boundary_pos(wires[i].0));
            } else if k == last {
                cut.sort_by_key(|&i| boundary_pos(wires[i].1));
            }
            cuts.push(cut);
        }

        let mut out = Vec::with_capacity(last);
        for k in 0..last {
            let before = &cuts[k];
            let after = &cuts[k + 1];
            let pos_in: HashMap<usize, usize> =
                before.iter().enumerate().map(|(p, &i)| (i, p)).collect();
            let pos_out: HashMap<usize, usize> =
                after.iter().enumerate().map(|(p, &i)| (i, p)).collect();
            let nodes = self.layers[k]
                .iter()
                .map(|id| (*id, diagram.nodes()[id].clone()))
                .collect::<BTreeMap<_, _>>();
            let mut layer_wires = Vec::new();
            for (i, (from, to, start, end)) in wires.iter().enumerate() {
                let a = if *start == k as isize {
                    Some(*from)
                } else {
                    pos_in.get(&i).map(|&p| Endpoint::input(p))
                };
                let b = if *end == k {
                    Some(*to)
                } else {
                    pos_out.get(&i).map(|&p| Endpoint::output(p))
                };
                if let (Some(a), Some(b)) = (a, b) {
                    layer_wires.push(Wire::new(a, b));
                }
            }
            out.push(Diagram::from_parts(
                diagram.dim(),
                nodes,
                layer_wires,
                before.len(),
                after.len(),
            ));
        }
        Ok(out)
    }
}

fn boundary_pos(e: Endpoint) -> usize {
    match e {
        Endpoint::Boundary { pos, .. } => pos,
        Endpoint::Port { .. } => usize::MAX,
    }
}
