//! The normalization pipeline and the equality decision built on it.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_complex::Complex64 as C64;

use super::{contract_nf, generator_nf, layerize, partial_trace_nf, permute_outputs, NormalForm};
use crate::diagram::{
    expand_derived, split_wide_nodes, validate, Diagram, Dimension, Endpoint, GeneratorKind, Node,
    NodeId, Role, Wire,
};
use crate::error::{Result, ZxwError};
use crate::interpret::interpret;

/// Tolerance used by [`decide_equal`], per amplitude.
pub const DECIDE_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct NormalizeOptions {
    /// After every generator is absorbed, interpret the part of the diagram
    /// processed so far and compare it with the running normal form.
    pub check_steps: bool,
    /// Allowed deviation in those checks, relative to the largest amplitude
    /// (or absolute when amplitudes are below 1).
    pub step_tol: f64,
}

impl Default for NormalizeOptions {
    fn default() -> Self {
        NormalizeOptions {
            check_steps: cfg!(debug_assertions),
            step_tol: 1e-10,
        }
    }
}

/// Wider nodes are split into chains before absorption.
const MAX_LEGS: usize = 4;

/// Open leg of the running normal form.
#[derive(Copy, Clone, Debug, PartialEq)]
enum Leg {
    /// Already attached to boundary output `p` of the state.
    Boundary(usize),
    /// A node port whose partner has not been absorbed yet.
    Port(Endpoint),
}

pub fn normalize(diagram: &Diagram) -> Result<NormalForm> {
    normalize_with(diagram, &NormalizeOptions::default())
}

/// Rewrite `diagram` into the normal form of its state.
///
/// The diagram is bent into a state, wide nodes are split into chains, its
/// derived gadgets are expanded, and the result is sliced into layers. Every
/// generator starts as its own normal form. Two normal forms that share a
/// wire are then merged by a tensor product followed by a partial trace for
/// each shared wire, always picking the pair whose merge leaves the fewest
/// open legs (earlier layers first on ties), so amplitude vectors stay
/// small. Pieces with no wire between them are finally tensored together
/// and the open legs are permuted into boundary order.
pub fn normalize_with(diagram: &Diagram, opts: &NormalizeOptions) -> Result<NormalForm> {
    let problems = validate(diagram);
    if !problems.is_empty() {
        return Err(ZxwError::IllFormed(problems));
    }
    let d = diagram.dim();
    let bent = close_bare_wires(&diagram.bend_to_state());
    let state = split_wide_nodes(
        &expand_derived(&split_wide_nodes(&bent, MAX_LEGS)),
        MAX_LEGS,
    );
    let partners = state.partners();
    let level: HashMap<NodeId, usize> = layerize(&state)
        .layers
        .iter()
        .enumerate()
        .flat_map(|(k, layer)| layer.iter().map(move |id| (*id, k)))
        .collect();

    let mut pieces: Vec<Piece> = Vec::with_capacity(state.nodes().len());
    for (id, node) in state.nodes() {
        let legs = state
            .ports(*id)
            .into_iter()
            .map(|port| match partners[&port] {
                Endpoint::Boundary {
                    role: Role::Out,
                    pos,
                } => Leg::Boundary(pos),
                _ => Leg::Port(port),
            })
            .collect();
        let piece = Piece {
            nodes: BTreeSet::from([*id]),
            level: level[id],
            legs,
            nf: generator_nf(&node.kind, d)?,
        };
        pieces.push(piece.closed(&partners)?);
    }
    let mut step = 0;
    if opts.check_steps {
        for piece in &pieces {
            step += 1;
            check_step(&state, &partners, piece, step, opts.step_tol)?;
        }
    }
    let mut whole = Piece {
        nodes: BTreeSet::new(),
        level: 0,
        legs: Vec::new(),
        nf: scalar_one(d),
    };
    while !pieces.is_empty() {
        let (i, j) = match best_pair(&pieces, &partners) {
            Some(pair) => pair,
            None => {
                // Nothing left shares a wire: fold every piece into the result.
                for piece in pieces.drain(..) {
                    whole = whole.merge(piece, &partners)?;
                }
                break;
            }
        };
        let b = pieces.swap_remove(j);
        let a = pieces.swap_remove(i);
        let merged = a.merge(b, &partners)?;
        step += 1;
        if opts.check_steps {
            check_step(&state, &partners, &merged, step, opts.step_tol)?;
        }
        pieces.push(merged);
    }

    let mut perm = vec![usize::MAX; whole.legs.len()];
    for (k, leg) in whole.legs.iter().enumerate() {
        match leg {
            Leg::Boundary(p) => perm[*p] = k,
            Leg::Port(e) => return Err(ZxwError::IllFormed(vec![format!("{e} was never closed")])),
        }
    }
    permute_outputs(&whole.nf, &perm)
}

fn scalar_one(d: Dimension) -> NormalForm {
    NormalForm {
        dim: d,
        outputs: 0,
        amplitudes: vec![C64::new(1.0, 0.0)],
    }
}

/// A connected set of absorbed generators and the normal form of the state
/// they make, one output per open leg.
struct Piece {
    nodes: BTreeSet<NodeId>,
    level: usize,
    legs: Vec<Leg>,
    nf: NormalForm,
}

impl Piece {
    /// Trace out every pair of legs that are two ends of one wire.
    fn closed(mut self, partners: &HashMap<Endpoint, Endpoint>) -> Result<Piece> {
        while let Some((s, t)) = closable(partners, &self.legs) {
            self.nf = partial_trace_nf(&self.nf, s, t)?;
            self.legs.remove(t);
            self.legs.remove(s);
        }
        Ok(self)
    }

    fn merge(mut self, other: Piece, partners: &HashMap<Endpoint, Endpoint>) -> Result<Piece> {
        let position: HashMap<Endpoint, usize> = other
            .legs
            .iter()
            .enumerate()
            .filter_map(|(k, leg)| {
                if let Leg::Port(e) = leg {
                    Some((*e, k))
                } else {
                    None
                }
            })
            .collect();
        let pairs: Vec<(usize, usize)> = self
            .legs
            .iter()
            .enumerate()
            .filter_map(|(k, leg)| {
                if let Leg::Port(e) = leg {
                    position.get(&partners[e]).map(|&t| (k, t))
                } else {
                    None
                }
            })
            .collect();
        self.nf = contract_nf(&self.nf, &other.nf, &pairs)?;
        let (joined_a, joined_b): (Vec<usize>, Vec<usize>) = pairs.into_iter().unzip();
        let mut legs: Vec<Leg> = self
            .legs
            .iter()
            .enumerate()
            .filter(|(k, _)| !joined_a.contains(k))
            .map(|(_, l)| *l)
            .collect();
        legs.extend(
            other
                .legs
                .iter()
                .enumerate()
                .filter(|(k, _)| !joined_b.contains(k))
                .map(|(_, l)| *l),
        );
        self.legs = legs;
        self.nodes.extend(other.nodes);
        self.level = self.level.min(other.level);
        self.closed(partners)
    }
}

/// The two pieces joined by a wire whose merge leaves the fewest open legs.
fn best_pair(pieces: &[Piece], partners: &HashMap<Endpoint, Endpoint>) -> Option<(usize, usize)> {
    let mut owner: HashMap<Endpoint, usize> = HashMap::new();
    for (k, piece) in pieces.iter().enumerate() {
        for leg in &piece.legs {
            if let Leg::Port(e) = leg {
                owner.insert(*e, k);
            }
        }
    }
    let mut shared: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (k, piece) in pieces.iter().enumerate() {
        for leg in &piece.legs {
            let Leg::Port(e) = leg else { continue };
            match owner.get(&partners[e]) {
                Some(&other) if other > k => *shared.entry((k, other)).or_default() += 1,
                _ => {}
            }
        }
    }
    shared
        .into_iter()
        .min_by_key(|&((i, j), n)| {
            let (a, b) = (&pieces[i], &pieces[j]);
            let open = a.legs.len() + b.legs.len() - 2 * n;
            (
                open,
                a.level.min(b.level),
                *a.nodes.first().expect("pieces are nonempty"),
                *b.nodes.first().expect("pieces are nonempty"),
            )
        })
        .map(|(pair, _)| pair)
}

fn closable(partners: &HashMap<Endpoint, Endpoint>, legs: &[Leg]) -> Option<(usize, usize)> {
    for (s, a) in legs.iter().enumerate() {
        let Leg::Port(a) = a else { continue };
        for (t, b) in legs.iter().enumerate().skip(s + 1) {
            if let Leg::Port(b) = b {
                if partners[a] == *b {
                    return Some((s, t));
                }
            }
        }
    }
    None
}

/// Bare wires joining two outputs become explicit caps.
fn close_bare_wires(state: &Diagram) -> Diagram {
    let bare: Vec<Wire> = state
        .wires()
        .iter()
        .filter(|w| {
            let (a, b) = w.ends();
            a.node().is_none() && b.node().is_none()
        })
        .copied()
        .collect();
    if bare.is_empty() {
        return state.clone();
    }
    let d = state.dim();
    let mut nodes = state.nodes().clone();
    let mut wires: BTreeSet<Wire> = state.wires().clone();
    for (next, w) in (state.next_id()..).zip(bare) {
        wires.remove(&w);
        let (a, b) = w.ends();
        let cap = NodeId(next);
        nodes.insert(
            cap,
            Node {
                kind: GeneratorKind::spider(d, 0, 2),
                dim: d,
            },
        );
        wires.insert(Wire::new(Endpoint::out_port(cap, 0), a));
        wires.insert(Wire::new(Endpoint::out_port(cap, 1), b));
    }
    Diagram::from_parts(d, nodes, wires, state.inputs(), state.outputs())
}

/// The nodes of `piece` as a state whose outputs are its open legs, in
/// order; its interpretation must equal the piece's normal form.
fn partial_state(
    state: &Diagram,
    partners: &HashMap<Endpoint, Endpoint>,
    piece: &Piece,
) -> Diagram {
    let nodes: BTreeMap<NodeId, Node> = piece
        .nodes
        .iter()
        .map(|id| (*id, state.nodes()[id].clone()))
        .collect();
    let mut wires: Vec<Wire> = state
        .wires()
        .iter()
        .filter(|w| {
            let (a, b) = w.ends();
            matches!((a.node(), b.node()), (Some(x), Some(y)) if piece.nodes.contains(&x) && piece.nodes.contains(&y))
        })
        .copied()
        .collect();
    for (k, leg) in piece.legs.iter().enumerate() {
        let port = match leg {
            Leg::Boundary(p) => {
                partners[&Endpoint::Boundary {
                    role: Role::Out,
                    pos: *p,
                }]
            }
            Leg::Port(e) => *e,
        };
        wires.push(Wire::new(port, Endpoint::output(k)));
    }
    Diagram::from_parts(state.dim(), nodes, wires, 0, piece.legs.len())
}

fn check_step(
    state: &Diagram,
    partners: &HashMap<Endpoint, Endpoint>,
    piece: &Piece,
    step: usize,
    tol: f64,
) -> Result<()> {
    let nf = &piece.nf;
    let v = interpret(&partial_state(state, partners, piece))?.to_state_vector();
    let scale = nf.amplitudes.iter().map(|a| a.norm()).fold(1.0, f64::max);
    let deviation = v
        .iter()
        .zip(&nf.amplitudes)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    if deviation > tol * scale {
        return Err(ZxwError::StepMismatch { step, deviation });
    }
    Ok(())
}

/// Same dimension, same boundary, and normal forms of the bent diagrams
/// within [`DECIDE_TOL`]. Ill-formed inputs are never equal.
pub fn decide_equal(a: &Diagram, b: &Diagram) -> bool {
    decide_equal_with(a, b, DECIDE_TOL, &NormalizeOptions::default()).unwrap_or(false)
}

pub fn decide_equal_with(
    a: &Diagram,
    b: &Diagram,
    tol: f64,
    opts: &NormalizeOptions,
) -> Result<bool> {
    if a.dim() != b.dim() || a.inputs() != b.inputs() || a.outputs() != b.outputs() {
        return Ok(false);
    }
    let x = normalize_with(a, opts)?;
    let y = normalize_with(b, opts)?;
    Ok(x.max_abs_diff(&y).is_some_and(|dev| dev <= tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{Dimension, PhaseVector};
    use crate::normal_form::matrix_to_nf;

    fn dim(n: usize) -> Dimension {
        Dimension::new(n).unwrap()
    }

    fn checked() -> NormalizeOptions {
        NormalizeOptions {
            check_steps: true,
            ..Default::default()
        }
    }

    #[test]
    fn identity_is_bell_state() {
        let nf = normalize_with(&Diagram::identity(dim(3), 1), &checked()).unwrap();
        for (i, a) in nf.amplitudes.iter().enumerate() {
            let expected = if [0, 4, 8].contains(&i) { 1.0 } else { 0.0 };
            assert!((a - C64::new(expected, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn hadamard_pair_equals_identity() {
        let d = dim(2);
        let h = Diagram::generator(GeneratorKind::Hadamard, d).unwrap();
        let hd = Diagram::generator(GeneratorKind::HadamardDagger, d).unwrap();
        let hh = h.then(&hd).unwrap();
        let a = normalize_with(&hh, &checked()).unwrap();
        let b = normalize_with(&Diagram::identity(d, 1), &checked()).unwrap();
        assert!(a.max_abs_diff(&b).unwrap() < 1e-10);
        assert!(decide_equal(&hh, &Diagram::identity(d, 1)));
    }

    #[test]
    fn matches_interpretation_with_loops_and_caps() {
        let d = dim(3);
        let a = PhaseVector::new(vec![C64::new(0.2, 0.9), C64::new(-1.1, 0.3)]);
        let z = Diagram::generator(GeneratorKind::z_box(a, 2, 1), d).unwrap();
        let w = Diagram::generator(GeneratorKind::WNode, d).unwrap();
        let m = Diagram::generator(GeneratorKind::Multiplier { weight: 2 }, d).unwrap();
        let g = Diagram::cap(d)
            .then(&z.tensor(&Diagram::identity(d, 0)).unwrap())
            .unwrap()
            .then(&w)
            .unwrap()
            .then(&m.tensor(&Diagram::identity(d, 1)).unwrap())
            .unwrap();
        let g = g.tensor(&Diagram::cup(d)).unwrap();
        let nf = normalize_with(&g, &checked()).unwrap();
        let v = interpret(&g).unwrap().to_state_vector();
        let oracle = matrix_to_nf(&v, d, g.outputs() + g.inputs()).unwrap();
        assert!(nf.max_abs_diff(&oracle).unwrap() < 1e-9);
    }

    #[test]
    fn perturbed_phase_is_unequal() {
        let d = dim(2);
        let a = PhaseVector::new(vec![C64::new(0.5, 0.0)]);
        let b = PhaseVector::new(vec![C64::new(0.501, 0.0)]);
        let za = Diagram::generator(GeneratorKind::z_box(a, 1, 1), d).unwrap();
        let zb = Diagram::generator(GeneratorKind::z_box(b, 1, 1), d).unwrap();
        assert!(decide_equal(&za, &za));
        assert!(!decide_equal(&za, &zb));
        assert!(!decide_equal(&za, &Diagram::identity(d, 2)));
    }
}
