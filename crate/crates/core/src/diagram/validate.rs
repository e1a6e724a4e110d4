use std::collections::HashMap;

use super::{Diagram, Endpoint, Role};

/// List every violated invariant; an empty list means the diagram is well
/// formed.
///
/// Every node port and every boundary position must be the end of exactly
/// one wire, wires may only mention existing ports, and node parameters must
/// fit the diagram's dimension.
pub fn validate(d: &Diagram) -> Vec<String> {
    let mut problems = Vec::new();
    for (id, node) in d.nodes() {
        if node.dim != d.dim() {
            problems.push(format!(
                "node {id} has dimension {} in a d={} diagram",
                node.dim,
                d.dim()
            ));
        }
        if let Err(e) = node.kind.checked(d.dim()) {
            problems.push(format!("node {id}: {e}"));
        }
    }

    let mut uses: HashMap<Endpoint, usize> = HashMap::new();
    for w in d.wires() {
        let (a, b) = w.ends();
        if a == b {
            problems.push(format!("wire joins {a} to itself"));
        }
        for e in [a, b] {
            *uses.entry(e).or_default() += 1;
            if let Some(reason) = dangling(d, e) {
                problems.push(reason);
            }
        }
    }

    let mut expected: Vec<Endpoint> = (0..d.inputs())
        .map(Endpoint::input)
        .chain((0..d.outputs()).map(Endpoint::output))
        .collect();
    for id in d.nodes().keys() {
        expected.extend(d.ports(*id));
    }
    for e in expected {
        match uses.get(&e).copied().unwrap_or(0) {
            1 => {}
            0 => problems.push(format!("{e} is not connected")),
            k => problems.push(format!("{e} is used by {k} wires")),
        }
    }
    problems
}

fn dangling(d: &Diagram, e: Endpoint) -> Option<String> {
    match e {
        Endpoint::Boundary {
            role: Role::In,
            pos,
        } if pos >= d.inputs() => Some(format!("{e} is out of range ({} inputs)", d.inputs())),
        Endpoint::Boundary {
            role: Role::Out,
            pos,
        } if pos >= d.outputs() => Some(format!("{e} is out of range ({} outputs)", d.outputs())),
        Endpoint::Boundary { .. } => None,
        Endpoint::Port { node, role, port } => {
            let Some(n) = d.node(node) else {
                return Some(format!("{e} refers to a missing node"));
            };
            let (ins, outs) = n.kind.arity(n.dim);
            let limit = if role == Role::In { ins } else { outs };
            (port >= limit).then(|| format!("{e} is out of range ({ins}->{outs})"))
        }
    }
}
