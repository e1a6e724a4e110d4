//! Defining expansions of derived gadgets, and splitting of wide nodes.

use std::collections::HashMap;

use num_complex::Complex64 as C64;

use super::{Diagram, DiagramBuilder, Dimension, Endpoint, GeneratorKind, NodeId, PhaseVector};
use crate::error::Result;

/// The defining composition of a derived gadget, or `None` for core kinds.
///
/// The result may itself contain derived gadgets; [`expand_derived`] keeps
/// substituting until only core generators remain.
pub fn expansion_of(kind: &GeneratorKind, d: Dimension) -> Option<Diagram> {
    use GeneratorKind::*;
    let built = match kind {
        ZBox { .. } | Hadamard | WNode => return None,
        HadamardDagger => hadamard_dagger(d),
        WGeneral {
            legs,
            transpose: false,
        } => w_general(d, *legs),
        WGeneral {
            legs,
            transpose: true,
        } => w_transposed(d, *legs),
        GreenSpider {
            angles,
            inputs,
            outputs,
        } => Diagram::generator(
            GeneratorKind::z_box(PhaseVector::from_angles(angles), *inputs, *outputs),
            d,
        ),
        LabeledBox {
            value,
            inputs,
            outputs,
        } => Diagram::generator(
            GeneratorKind::z_box(PhaseVector::labeled(d, *value), *inputs, *outputs),
            d,
        ),
        PinkSpider {
            phase,
            inputs,
            outputs,
        } => pink_spider(d, *phase, *inputs, *outputs),
        Dualiser => dualiser(d),
        Multiplier { weight } => multiplier(d, *weight),
        Triangle => triangle(d, C64::new(1.0, 0.0)),
        TriangleInverse => triangle(d, C64::new(-1.0, 0.0)),
        VBox => v_box(d),
        Scalar { value } => Diagram::generator(
            GeneratorKind::z_box(PhaseVector::labeled(d, value - 1.0), 0, 0),
            d,
        ),
    };
    Some(built.expect("expansions are well formed"))
}

/// Replace every derived gadget by its defining composition, recursively.
pub fn expand_derived(diagram: &Diagram) -> Diagram {
    let mut current = diagram.clone();
    loop {
        let next = current
            .nodes()
            .iter()
            .find_map(|(id, node)| expansion_of(&node.kind, node.dim).map(|e| (*id, e)));
        let Some((id, replacement)) = next else {
            return current;
        };
        current = current
            .substitute(id, &replacement)
            .expect("arity preserved")
            .0;
    }
}

fn hadamard_dagger(d: Dimension) -> Result<Diagram> {
    let h = Diagram::generator(GeneratorKind::Hadamard, d)?;
    h.then(&h)?.then(&h)
}

fn w_general(d: Dimension, legs: usize) -> Result<Diagram> {
    match legs {
        1 => Ok(Diagram::identity(d, 1)),
        2 => Diagram::generator(GeneratorKind::WNode, d),
        k => {
            let head = Diagram::generator(GeneratorKind::WNode, d)?;
            let rest = Diagram::generator(GeneratorKind::w_general(k - 1), d)?;
            head.then(&rest.tensor(&Diagram::identity(d, 1))?)
        }
    }
}

/// W node with its inputs and outputs exchanged through caps and cups.
fn w_transposed(d: Dimension, legs: usize) -> Result<Diagram> {
    let mut b = DiagramBuilder::new(d, legs, 1);
    let w = b.add(GeneratorKind::w_general(legs));
    let cap = b.add(GeneratorKind::spider(d, 0, 2));
    b.connect(Endpoint::out_port(cap, 0), Endpoint::in_port(w, 0));
    b.connect(Endpoint::out_port(cap, 1), Endpoint::output(0));
    for k in 0..legs {
        let cup = b.add(GeneratorKind::spider(d, 2, 0));
        b.connect(Endpoint::input(k), Endpoint::in_port(cup, 0));
        b.connect(Endpoint::out_port(w, k), Endpoint::in_port(cup, 1));
    }
    b.build()
}

/// `H` on every output, `H†` on every input, the Fourier-row Z box in the
/// middle, and the scalar `d^{(m+n-2)/2}`.
fn pink_spider(d: Dimension, phase: usize, inputs: usize, outputs: usize) -> Result<Diagram> {
    let mut b = DiagramBuilder::new(d, inputs, outputs);
    let z = b.add(GeneratorKind::z_box(
        PhaseVector::fourier(d, phase as i64),
        inputs,
        outputs,
    ));
    for k in 0..outputs {
        let h = b.add(GeneratorKind::Hadamard);
        b.connect(Endpoint::out_port(z, k), Endpoint::in_port(h, 0));
        b.connect(Endpoint::out_port(h, 0), Endpoint::output(k));
    }
    for k in 0..inputs {
        let h = b.add(GeneratorKind::HadamardDagger);
        b.connect(Endpoint::input(k), Endpoint::in_port(h, 0));
        b.connect(Endpoint::out_port(h, 0), Endpoint::in_port(z, k));
    }
    let legs = (inputs + outputs) as i32;
    if legs != 2 {
        let value = (d.get() as f64).powf(f64::from(legs - 2) / 2.0);
        b.add(GeneratorKind::Scalar {
            value: C64::new(value, 0.0),
        });
    }
    b.build()
}

fn dualiser(d: Dimension) -> Result<Diagram> {
    let mut b = DiagramBuilder::new(d, 1, 1);
    let cap = b.add(GeneratorKind::pink(0, d, 0, 2));
    let cup = b.add(GeneratorKind::spider(d, 2, 0));
    b.connect(Endpoint::out_port(cap, 0), Endpoint::output(0));
    b.connect(Endpoint::out_port(cap, 1), Endpoint::in_port(cup, 0));
    b.connect(Endpoint::input(0), Endpoint::in_port(cup, 1));
    b.build()
}

/// `w` parallel wires from a green copy into a pink sum.
fn multiplier(d: Dimension, weight: usize) -> Result<Diagram> {
    let mut b = DiagramBuilder::new(d, 1, 1);
    let z = b.add(GeneratorKind::spider(d, 1, weight));
    let x = b.add(GeneratorKind::pink(0, d, weight, 1));
    b.connect(Endpoint::input(0), Endpoint::in_port(z, 0));
    for k in 0..weight {
        b.connect(Endpoint::out_port(z, k), Endpoint::in_port(x, k));
    }
    b.connect(Endpoint::out_port(x, 0), Endpoint::output(0));
    b.build()
}

/// W node with its left leg capped by the effect `Σ_j c_j⟨j|` (`c_0 = 1`,
/// `c_j = sign`).
fn triangle(d: Dimension, sign: C64) -> Result<Diagram> {
    let mut b = DiagramBuilder::new(d, 1, 1);
    let w = b.add(GeneratorKind::WNode);
    let e = b.add(GeneratorKind::z_box(PhaseVector::constant(d, sign), 1, 0));
    b.connect(Endpoint::input(0), Endpoint::in_port(w, 0));
    b.connect(Endpoint::out_port(w, 0), Endpoint::in_port(e, 0));
    b.connect(Endpoint::out_port(w, 1), Endpoint::output(0));
    b.build()
}

/// Input `k` (counted from 1) is projected onto `{|0⟩, |d-1⟩}` by the
/// labelled box `(0, …, 0, 1)` and sent to `|k⟩` by a multiplier of weight
/// `-k`, before a transposed W node collects all of them.
fn v_box(d: Dimension) -> Result<Diagram> {
    let n = d.get() - 1;
    let mut b = DiagramBuilder::new(d, n, 1);
    let w = b.add(GeneratorKind::w_transpose(n));
    for k in 0..n {
        let p = b.add(GeneratorKind::LabeledBox {
            value: C64::new(1.0, 0.0),
            inputs: 1,
            outputs: 1,
        });
        let m = b.add(GeneratorKind::multiplier(-(k as i64 + 1), d));
        b.connect(Endpoint::input(k), Endpoint::in_port(p, 0));
        b.connect(Endpoint::out_port(p, 0), Endpoint::in_port(m, 0));
        b.connect(Endpoint::out_port(m, 0), Endpoint::in_port(w, k));
    }
    b.connect(Endpoint::out_port(w, 0), Endpoint::output(0));
    b.build()
}

/// Rewrite every node with more than `max_legs` legs into a chain of smaller
/// nodes with the same tensor. Z boxes, W nodes and pink spiders are split
/// along internal wires; other wide gadgets are expanded.
///
/// Wires are undirected, so pieces are free to attach an original input leg
/// to an output port; only the tensor matters to the interpreter.
pub fn split_wide_nodes(diagram: &Diagram, max_legs: usize) -> Diagram {
    let max_legs = max_legs.max(4);
    let mut current = diagram.clone();
    loop {
        let wide = current
            .nodes()
            .iter()
            .find(|(_, n)| n.kind.legs(n.dim) > max_legs)
            .map(|(id, n)| (*id, n.kind.clone()));
        let Some((id, kind)) = wide else {
            return current;
        };
        current = split_one(&current, id, &kind, max_legs);
    }
}

fn split_one(diagram: &Diagram, id: NodeId, kind: &GeneratorKind, max_legs: usize) -> Diagram {
    use GeneratorKind::*;
    let d = diagram.dim();
    let partners = diagram.partners();
    let (n, m) = kind.arity(d);
    // Legs wired to another leg of the same node become links between pieces.
    let mut loops: HashMap<super::Wire, usize> = HashMap::new();
    let mut attach = |port: Endpoint| {
        let partner = partners[&port];
        if partner.node() == Some(id) {
            let key = super::Wire::new(port, partner);
            let next = loops.len();
            Attach::Link(*loops.entry(key).or_insert(next))
        } else {
            Attach::Host(partner)
        }
    };
    let ins: Vec<Attach> = (0..n).map(|k| attach(Endpoint::in_port(id, k))).collect();
    let outs: Vec<Attach> = (0..m).map(|k| attach(Endpoint::out_port(id, k))).collect();

    let mut pieces: Vec<(GeneratorKind, Vec<Attach>)> = Vec::new();
    match kind {
        ZBox { phases, .. } => z_chain(
            &mut pieces,
            phases.clone(),
            ins.into_iter().chain(outs).collect(),
            max_legs,
            d,
        ),
        GreenSpider { angles, .. } => z_chain(
            &mut pieces,
            PhaseVector::from_angles(angles),
            ins.into_iter().chain(outs).collect(),
            max_legs,
            d,
        ),
        LabeledBox { value, .. } => z_chain(
            &mut pieces,
            PhaseVector::labeled(d, *value),
            ins.into_iter().chain(outs).collect(),
            max_legs,
            d,
        ),
        WGeneral { transpose, .. } => {
            let (root, branches) = if *transpose {
                (outs[0], ins)
            } else {
                (ins[0], outs)
            };
            w_chain(&mut pieces, root, branches, max_legs);
        }
        PinkSpider { phase, .. } => pink_chain(&mut pieces, *phase, ins, outs, max_legs),
        _ => {
            let replacement = expansion_of(kind, d).expect("wide gadgets are derived");
            return diagram
                .substitute(id, &replacement)
                .expect("arity preserved")
                .0;
        }
    }
    assemble(diagram, id, pieces)
}

/// How a port of a new piece is wired: to an existing endpoint of the host or
/// to the port of another piece (by piece index).
#[derive(Copy, Clone)]
enum Attach {
    Host(Endpoint),
    Link(usize),
}

/// Pieces list their legs in port order: inputs first, then outputs.
fn assemble(diagram: &Diagram, id: NodeId, pieces: Vec<(GeneratorKind, Vec<Attach>)>) -> Diagram {
    let d = diagram.dim();
    let mut nodes = diagram.nodes().clone();
    nodes.remove(&id);
    let mut wires: Vec<super::Wire> = diagram
        .wires()
        .iter()
        .filter(|w| !touches_node(w, id))
        .copied()
        .collect();
    let mut links: HashMap<usize, Vec<Endpoint>> = HashMap::new();
    for (next, (kind, attach)) in (diagram.next_id()..).zip(pieces) {
        let new = NodeId(next);
        let (n, _) = kind.arity(d);
        for (k, a) in attach.into_iter().enumerate() {
            let port = if k < n {
                Endpoint::in_port(new, k)
            } else {
                Endpoint::out_port(new, k - n)
            };
            match a {
                Attach::Host(e) => wires.push(super::Wire::new(port, e)),
                Attach::Link(l) => links.entry(l).or_default().push(port),
            }
        }
        nodes.insert(new, super::Node { kind, dim: d });
    }
    for (_, ends) in links {
        debug_assert_eq!(ends.len(), 2);
        wires.push(super::Wire::new(ends[0], ends[1]));
    }
    Diagram::from_parts(d, nodes, wires, diagram.inputs(), diagram.outputs())
}

fn touches_node(w: &super::Wire, id: NodeId) -> bool {
    let (a, b) = w.ends();
    a.node() == Some(id) || b.node() == Some(id)
}

fn z_chain(
    pieces: &mut Vec<(GeneratorKind, Vec<Attach>)>,
    phases: PhaseVector,
    legs: Vec<Attach>,
    max_legs: usize,
    d: Dimension,
) {
    let mut phases = Some(phases);
    let mut rest = legs.as_slice();
    let mut carry: Option<usize> = None;
    let mut link = LINK_BASE;
    while !rest.is_empty() {
        let mut attach: Vec<Attach> = carry.map(Attach::Link).into_iter().collect();
        let room = max_legs - attach.len();
        let last = rest.len() <= room;
        let take = if last { rest.len() } else { room - 1 };
        attach.extend(rest[..take].iter().copied());
        rest = &rest[take..];
        if !last {
            link += 1;
            attach.push(Attach::Link(link));
            carry = Some(link);
        }
        let p = phases.take().unwrap_or_else(|| PhaseVector::ones(d));
        let legs = attach.len();
        pieces.push((GeneratorKind::z_box(p, 0, legs), attach));
    }
}

fn w_chain(
    pieces: &mut Vec<(GeneratorKind, Vec<Attach>)>,
    root: Attach,
    branches: Vec<Attach>,
    max_legs: usize,
) {
    let all: Vec<Attach> = [root].into_iter().chain(branches).collect();
    let mut root = all[0];
    let mut rest = &all[1..];
    let mut link = LINK_BASE;
    while rest.len() + 1 > max_legs {
        link += 1;
        let (last, head) = rest.split_last().expect("wide");
        pieces.push((GeneratorKind::WNode, vec![root, Attach::Link(link), *last]));
        root = Attach::Link(link);
        rest = head;
    }
    let mut attach = vec![root];
    attach.extend(rest.iter().copied());
    pieces.push((GeneratorKind::w_general(rest.len()), attach));
}

fn pink_chain(
    pieces: &mut Vec<(GeneratorKind, Vec<Attach>)>,
    phase: usize,
    mut ins: Vec<Attach>,
    mut outs: Vec<Attach>,
    max_legs: usize,
) {
    let mut phase = phase;
    let mut link = LINK_BASE;
    // Each piece keeps a few legs and hands the remaining sum on through an
    // extra output, received as an extra input by the next piece.
    let mut carry: Option<usize> = None;
    loop {
        let extra = usize::from(carry.is_some());
        if ins.len() + outs.len() + extra <= max_legs {
            let mut a: Vec<Attach> = ins.clone();
            a.extend(carry.map(Attach::Link));
            let n_in = a.len();
            a.extend(outs.iter().copied());
            let n_out = outs.len();
            pieces.push((
                GeneratorKind::PinkSpider {
                    phase,
                    inputs: n_in,
                    outputs: n_out,
                },
                a,
            ));
            return;
        }
        let room = max_legs - extra - 1;
        let take_in = ins.len().min(room);
        let take_out = (room - take_in).min(outs.len());
        let mut a: Vec<Attach> = ins.drain(..take_in).collect();
        a.extend(carry.map(Attach::Link));
        let n_in = a.len();
        a.extend(outs.drain(..take_out));
        link += 1;
        a.push(Attach::Link(link));
        pieces.push((
            GeneratorKind::PinkSpider {
                phase,
                inputs: n_in,
                outputs: take_out + 1,
            },
            a,
        ));
        carry = Some(link);
        phase = 0;
    }
}

/// Offset keeping chain links apart from self-loop links.
const LINK_BASE: usize = 1 << 20;
