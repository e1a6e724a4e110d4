//! Seeded random generators, phase values and small diagrams, used by the
//! soundness checks and the property tests.

use std::f64::consts::TAU;

use num_complex::Complex64 as C64;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::diagram::{
    Diagram, Dimension, Endpoint, GeneratorKind, Node, NodeId, PhaseVector, Wire,
};

/// Probability of drawing one of the special values `0, 1, -1, ω`.
const ADVERSARIAL: f64 = 0.2;

/// A complex number from the closed unit disk, or now and then one of the
/// values where rules tend to have special cases.
pub fn sample_complex<R: Rng + ?Sized>(rng: &mut R, d: Dimension) -> C64 {
    if rng.gen_bool(ADVERSARIAL) {
        return match rng.gen_range(0..4) {
            0 => C64::new(0.0, 0.0),
            1 => C64::new(1.0, 0.0),
            2 => C64::new(-1.0, 0.0),
            _ => d.omega_pow(1),
        };
    }
    sample_disk(rng)
}

/// Uniform on the unit disk.
pub fn sample_disk<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let r = rng.gen::<f64>().sqrt();
    C64::from_polar(r, rng.gen_range(0.0..TAU))
}

/// A nonzero complex number, bounded away from zero.
pub fn sample_nonzero<R: Rng + ?Sized>(rng: &mut R, d: Dimension) -> C64 {
    if rng.gen_bool(ADVERSARIAL) {
        return match rng.gen_range(0..3) {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(-1.0, 0.0),
            _ => d.omega_pow(1),
        };
    }
    C64::from_polar(rng.gen_range(0.25..1.0f64).sqrt(), rng.gen_range(0.0..TAU))
}

pub fn sample_phases<R: Rng + ?Sized>(rng: &mut R, d: Dimension) -> PhaseVector {
    PhaseVector::new((1..d.get()).map(|_| sample_complex(rng, d)).collect())
}

pub fn sample_nonzero_phases<R: Rng + ?Sized>(rng: &mut R, d: Dimension) -> PhaseVector {
    PhaseVector::new((1..d.get()).map(|_| sample_nonzero(rng, d)).collect())
}

pub fn sample_angles<R: Rng + ?Sized>(rng: &mut R, d: Dimension) -> Vec<f64> {
    (1..d.get()).map(|_| rng.gen_range(0.0..TAU)).collect()
}

/// Bounds for [`random_diagram`].
#[derive(Clone, Debug)]
pub struct RandomDiagramConfig {
    pub max_nodes: usize,
    pub max_boundary: usize,
    /// Upper bound on the legs of a single node.
    pub max_legs: usize,
    /// Allow derived gadgets besides the core generators.
    pub derived: bool,
}

impl Default for RandomDiagramConfig {
    fn default() -> Self {
        RandomDiagramConfig {
            max_nodes: 6,
            max_boundary: 4,
            max_legs: 3,
            derived: true,
        }
    }
}

/// A random node kind with at most `max_legs` legs.
pub fn random_kind<R: Rng + ?Sized>(
    rng: &mut R,
    d: Dimension,
    max_legs: usize,
    derived: bool,
) -> GeneratorKind {
    loop {
        let n = rng.gen_range(0..=2);
        let m = rng.gen_range(0..=2);
        let choice = if derived {
            rng.gen_range(0..17)
        } else {
            rng.gen_range(0..5)
        };
        let kind = match choice {
            0 | 1 => GeneratorKind::z_box(sample_phases(rng, d), n, m),
            2 => GeneratorKind::Hadamard,
            3 => GeneratorKind::WNode,
            // caps and cups
            4 => {
                if rng.gen_bool(0.5) {
                    GeneratorKind::spider(d, 0, 2)
                } else {
                    GeneratorKind::spider(d, 2, 0)
                }
            }
            5 => GeneratorKind::HadamardDagger,
            6 => GeneratorKind::WGeneral {
                legs: rng.gen_range(1..=3),
                transpose: rng.gen_bool(0.5),
            },
            7 => GeneratorKind::GreenSpider {
                angles: sample_angles(rng, d),
                inputs: n,
                outputs: m,
            },
            8 => GeneratorKind::LabeledBox {
                value: sample_complex(rng, d),
                inputs: n,
                outputs: m,
            },
            9 | 10 => GeneratorKind::pink(rng.gen_range(0..d.get() as i64), d, n, m),
            11 => GeneratorKind::Dualiser,
            12 => GeneratorKind::multiplier(rng.gen_range(0..d.get() as i64), d),
            13 => GeneratorKind::Triangle,
            14 => GeneratorKind::TriangleInverse,
            15 => GeneratorKind::VBox,
            _ => GeneratorKind::Scalar {
                value: sample_complex(rng, d),
            },
        };
        if kind.legs(d) <= max_legs {
            return kind;
        }
    }
}

/// A random well-formed diagram: random nodes whose ports, together with a
/// random boundary, are paired up by a random perfect matching. Self-loops,
/// bare boundary wires and disconnected pieces all occur.
pub fn random_diagram<R: Rng + ?Sized>(
    rng: &mut R,
    d: Dimension,
    cfg: &RandomDiagramConfig,
) -> Diagram {
    let count = rng.gen_range(1..=cfg.max_nodes.max(1));
    let mut nodes = std::collections::BTreeMap::new();
    let mut ends: Vec<Endpoint> = Vec::new();
    for k in 0..count {
        let kind = random_kind(rng, d, cfg.max_legs, cfg.derived);
        let id = NodeId(k as u32);
        let (n, m) = kind.arity(d);
        ends.extend((0..n).map(|p| Endpoint::in_port(id, p)));
        ends.extend((0..m).map(|p| Endpoint::out_port(id, p)));
        nodes.insert(id, Node { kind, dim: d });
    }
    let parity = ends.len() % 2;
    let choices: Vec<usize> = (0..=cfg.max_boundary).filter(|b| b % 2 == parity).collect();
    let boundary = match choices.choose(rng) {
        Some(&b) => b,
        None => {
            // Odd leg count with no room for boundary: add a one-leg effect.
            let id = NodeId(count as u32);
            nodes.insert(
                id,
                Node {
                    kind: GeneratorKind::spider(d, 1, 0),
                    dim: d,
                },
            );
            ends.push(Endpoint::in_port(id, 0));
            0
        }
    };
    let inputs = rng.gen_range(0..=boundary);
    let outputs = boundary - inputs;
    ends.extend((0..inputs).map(Endpoint::input));
    ends.extend((0..outputs).map(Endpoint::output));
    ends.shuffle(rng);
    let wires: Vec<Wire> = ends.chunks(2).map(|p| Wire::new(p[0], p[1])).collect();
    Diagram::from_parts(d, nodes, wires, inputs, outputs)
}
