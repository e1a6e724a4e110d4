//! The normal-form diagram: building it, reading it back, and sorting its
//! branches into unique form.
//!
//! Shape: the state `|1⟩` (a pink `K_{d-1}` state) feeds a W node with one
//! leg per branch. Branch `i` is a Z box `(a_i, 0, …, 0)` with one output per
//! wire; output `p` passes a multiplier of weight `e_{p,i}` into the pink
//! `K_0` collector of wire `p`. The W node sends `|1⟩` into exactly one
//! branch, which then produces `a_i|e_{0,i} … e_{m-1,i}⟩`.

use std::collections::{BTreeSet, HashMap};

use num_complex::Complex64 as C64;

use super::NormalForm;
use crate::basis;
use crate::diagram::{
    Diagram, DiagramBuilder, Dimension, Endpoint, GeneratorKind, NodeId, PhaseVector, Role,
};
use crate::error::{Result, ZxwError};

/// One Z box of a normal-form diagram: its amplitude and the multiplier
/// weights it sends to each output wire, wire 0 first.
#[derive(Clone, Debug, PartialEq)]
pub struct Branch {
    pub amplitude: C64,
    pub weights: Vec<usize>,
}

impl Branch {
    pub fn index(&self, d: Dimension) -> usize {
        basis::index_of(&self.weights, d.get())
    }
}

/// The canonical diagram of `nf`: branches for the nonzero amplitudes in
/// ascending index order. The zero vector keeps a single zero branch.
pub fn emit_diagram(nf: &NormalForm) -> Diagram {
    let d = nf.dim;
    let mut branches: Vec<Branch> = nf
        .amplitudes
        .iter()
        .enumerate()
        .filter(|(_, a)| **a != C64::new(0.0, 0.0))
        .map(|(i, a)| Branch {
            amplitude: *a,
            weights: nf.weights(i),
        })
        .collect();
    if branches.is_empty() {
        branches.push(Branch {
            amplitude: C64::new(0.0, 0.0),
            weights: vec![0; nf.outputs],
        });
    }
    build_spine(d, nf.outputs, &branches)
}

/// The normal-form diagram with the given branches in the given order.
pub fn build_spine(d: Dimension, m: usize, branches: &[Branch]) -> Diagram {
    let n = branches.len();
    let mut b = DiagramBuilder::new(d, 0, m);
    let source = b.add(GeneratorKind::pink(-1, d, 0, 1));
    let w = b.add(GeneratorKind::w_general(n));
    b.connect(Endpoint::out_port(source, 0), Endpoint::in_port(w, 0));
    let collectors: Vec<NodeId> = (0..m)
        .map(|p| {
            let c = b.add(GeneratorKind::pink(0, d, n, 1));
            b.connect(Endpoint::out_port(c, 0), Endpoint::output(p));
            c
        })
        .collect();
    for (k, branch) in branches.iter().enumerate() {
        let mut phases = vec![C64::new(0.0, 0.0); d.get() - 1];
        phases[0] = branch.amplitude;
        let z = b.add(GeneratorKind::z_box(PhaseVector::new(phases), 1, m));
        b.connect(Endpoint::out_port(w, k), Endpoint::in_port(z, 0));
        for (p, &weight) in branch.weights.iter().enumerate() {
            let mult = b.add(GeneratorKind::Multiplier { weight });
            b.connect(Endpoint::out_port(z, p), Endpoint::in_port(mult, 0));
            b.connect(
                Endpoint::out_port(mult, 0),
                Endpoint::in_port(collectors[p], k),
            );
        }
    }
    b.build().expect("normal-form spine is well formed")
}

/// Read the branches of a normal-form-shaped diagram in W-leg order. The
/// weights are reported by boundary output position, so a diagram whose
/// outputs were permuted reads as the permuted state.
pub fn parse_normal_form(diagram: &Diagram) -> Result<(usize, Vec<Branch>)> {
    let bad = |msg: String| ZxwError::NotNormalForm(msg);
    let d = diagram.dim();
    if diagram.inputs() != 0 {
        return Err(bad("normal forms are states".into()));
    }
    let m = diagram.outputs();
    let partners = diagram.partners();
    let kind_of = |id: NodeId| &diagram.nodes()[&id].kind;
    let follow = |e: Endpoint| -> Result<Endpoint> {
        partners
            .get(&e)
            .copied()
            .ok_or_else(|| bad(format!("{e} is not connected")))
    };
    let node_at = |e: Endpoint, role: Role, port: usize| -> Result<NodeId> {
        match e {
            Endpoint::Port {
                node,
                role: r,
                port: p,
            } if r == role && p == port => Ok(node),
            other => Err(bad(format!("unexpected endpoint {other}"))),
        }
    };

    let sources: Vec<NodeId> = diagram
        .nodes()
        .iter()
        .filter(|(_, n)| matches!(n.kind, GeneratorKind::PinkSpider { inputs: 0, outputs: 1, phase } if phase == d.get() - 1))
        .map(|(id, _)| *id)
        .collect();
    let [source] = sources[..] else {
        return Err(bad(format!(
            "expected one |1> source, found {}",
            sources.len()
        )));
    };
    let w = node_at(follow(Endpoint::out_port(source, 0))?, Role::In, 0)?;
    let GeneratorKind::WGeneral {
        legs: n,
        transpose: false,
    } = *kind_of(w)
    else {
        return Err(bad(format!("{w} should be a W node")));
    };

    let mut seen: BTreeSet<NodeId> = BTreeSet::from([source, w]);
    let mut collectors: HashMap<NodeId, usize> = HashMap::new();
    let mut branches = Vec::with_capacity(n);
    for k in 0..n {
        let z = node_at(follow(Endpoint::out_port(w, k))?, Role::In, 0)?;
        let GeneratorKind::ZBox {
            phases,
            inputs: 1,
            outputs,
        } = kind_of(z)
        else {
            return Err(bad(format!("{z} should be a 1-input Z box")));
        };
        if *outputs != m
            || phases.entries()[1..]
                .iter()
                .any(|x| *x != C64::new(0.0, 0.0))
        {
            return Err(bad(format!("{z} is not a branch box")));
        }
        seen.insert(z);
        let mut weights = vec![usize::MAX; m];
        for p in 0..m {
            let mult = node_at(follow(Endpoint::out_port(z, p))?, Role::In, 0)?;
            let GeneratorKind::Multiplier { weight } = *kind_of(mult) else {
                return Err(bad(format!("{mult} should be a multiplier")));
            };
            seen.insert(mult);
            let Endpoint::Port {
                node: col,
                role: Role::In,
                ..
            } = follow(Endpoint::out_port(mult, 0))?
            else {
                return Err(bad(format!("{mult} does not feed a collector")));
            };
            if !matches!(kind_of(col), GeneratorKind::PinkSpider { phase: 0, inputs, outputs: 1 } if *inputs == n)
            {
                return Err(bad(format!(
                    "{col} should be a pink collector with {n} inputs"
                )));
            }
            let pos = match collectors.get(&col) {
                Some(&pos) => pos,
                None => {
                    let Endpoint::Boundary {
                        role: Role::Out,
                        pos,
                    } = follow(Endpoint::out_port(col, 0))?
                    else {
                        return Err(bad(format!("{col} does not reach an output")));
                    };
                    collectors.insert(col, pos);
                    seen.insert(col);
                    pos
                }
            };
            if weights[pos] != usize::MAX {
                return Err(bad(format!("branch {k} reaches output {pos} twice")));
            }
            weights[pos] = weight;
        }
        branches.push(Branch {
            amplitude: phases.entries()[0],
            weights,
        });
    }
    if seen.len() != diagram.nodes().len() || collectors.len() != m {
        return Err(bad("diagram has nodes outside the normal-form spine".into()));
    }
    Ok((m, branches))
}

/// Bring the branches into ascending index order by swapping neighbours,
/// then rebuild the diagram canonically.
pub fn unique_sort(diagram: &Diagram) -> Result<Diagram> {
    let d = diagram.dim();
    let (m, mut branches) = parse_normal_form(diagram)?;
    let mut sorted = false;
    while !sorted {
        sorted = true;
        for k in 1..branches.len() {
            if branches[k - 1].index(d) > branches[k].index(d) {
                branches.swap(k - 1, k);
                sorted = false;
            }
        }
    }
    Ok(build_spine(d, m, &branches))
}
