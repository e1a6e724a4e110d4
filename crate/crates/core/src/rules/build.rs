//! Small constructors for writing rule sides, plus a few named gadgets.

use num_complex::Complex64 as C64;

use crate::diagram::{Diagram, Dimension, GeneratorKind, PhaseVector};
use crate::error::Result;

pub fn gen(d: Dimension, kind: GeneratorKind) -> Result<Diagram> {
    Diagram::generator(kind, d)
}

pub fn z(d: Dimension, a: &PhaseVector, n: usize, m: usize) -> Result<Diagram> {
    gen(d, GeneratorKind::z_box(a.clone(), n, m))
}

/// Green spider with all phases 1.
pub fn spider(d: Dimension, n: usize, m: usize) -> Result<Diagram> {
    gen(d, GeneratorKind::spider(d, n, m))
}

/// Z box whose phases are all `c`.
pub fn z_const(d: Dimension, c: C64, n: usize, m: usize) -> Result<Diagram> {
    z(d, &PhaseVector::constant(d, c), n, m)
}

pub fn green(d: Dimension, angles: &[f64], n: usize, m: usize) -> Result<Diagram> {
    gen(
        d,
        GeneratorKind::GreenSpider {
            angles: angles.to_vec(),
            inputs: n,
            outputs: m,
        },
    )
}

pub fn labeled(d: Dimension, x: C64, n: usize, m: usize) -> Result<Diagram> {
    gen(
        d,
        GeneratorKind::LabeledBox {
            value: x,
            inputs: n,
            outputs: m,
        },
    )
}

pub fn scalar(d: Dimension, s: C64) -> Result<Diagram> {
    gen(d, GeneratorKind::Scalar { value: s })
}

pub fn pink(d: Dimension, j: i64, n: usize, m: usize) -> Result<Diagram> {
    gen(d, GeneratorKind::pink(j, d, n, m))
}

/// `|x⟩`.
pub fn ket(d: Dimension, x: i64) -> Result<Diagram> {
    pink(d, -x, 0, 1)
}

/// `⟨x|`.
pub fn bra(d: Dimension, x: i64) -> Result<Diagram> {
    pink(d, x, 1, 0)
}

pub fn h(d: Dimension) -> Result<Diagram> {
    gen(d, GeneratorKind::Hadamard)
}

pub fn hd(d: Dimension) -> Result<Diagram> {
    gen(d, GeneratorKind::HadamardDagger)
}

pub fn w(d: Dimension) -> Result<Diagram> {
    gen(d, GeneratorKind::WNode)
}

/// W node with `k` outputs.
pub fn wk(d: Dimension, k: usize) -> Result<Diagram> {
    gen(d, GeneratorKind::w_general(k))
}

/// W node with `k` inputs.
pub fn wt(d: Dimension, k: usize) -> Result<Diagram> {
    gen(d, GeneratorKind::w_transpose(k))
}

pub fn mult(d: Dimension, weight: i64) -> Result<Diagram> {
    gen(d, GeneratorKind::multiplier(weight, d))
}

pub fn dual(d: Dimension) -> Result<Diagram> {
    gen(d, GeneratorKind::Dualiser)
}

pub fn tri(d: Dimension) -> Result<Diagram> {
    gen(d, GeneratorKind::Triangle)
}

pub fn tri_inv(d: Dimension) -> Result<Diagram> {
    gen(d, GeneratorKind::TriangleInverse)
}

pub fn vbox(d: Dimension) -> Result<Diagram> {
    gen(d, GeneratorKind::VBox)
}

pub fn id(d: Dimension, n: usize) -> Result<Diagram> {
    Ok(Diagram::identity(d, n))
}

pub fn perm(d: Dimension, p: &[usize]) -> Result<Diagram> {
    Diagram::permutation(d, p)
}

pub fn empty(d: Dimension) -> Result<Diagram> {
    Ok(Diagram::empty(d))
}

/// Sequential composition, first part first.
pub fn seq(parts: &[Diagram]) -> Result<Diagram> {
    let (first, rest) = parts.split_first().expect("at least one part");
    rest.iter().try_fold(first.clone(), |acc, p| acc.then(p))
}

/// Parallel composition; the empty list is the empty diagram.
pub fn par(d: Dimension, parts: &[Diagram]) -> Result<Diagram> {
    parts
        .iter()
        .try_fold(Diagram::empty(d), |acc, p| acc.tensor(p))
}

/// `n` copies of `part` side by side.
pub fn repeat(d: Dimension, part: &Diagram, n: usize) -> Result<Diagram> {
    par(d, &vec![part.clone(); n])
}

/// Transpose of a one-wire map, drawn with a green cap and cup.
pub fn transpose(f: &Diagram) -> Result<Diagram> {
    let d = f.dim();
    seq(&[
        par(d, &[id(d, 1)?, spider(d, 0, 2)?])?,
        par(d, &[id(d, 1)?, f.clone(), id(d, 1)?])?,
        par(d, &[spider(d, 2, 0)?, id(d, 1)?])?,
    ])
}

/// `W_n` as a chain of binary W nodes.
pub fn w_chain(d: Dimension, n: usize) -> Result<Diagram> {
    match n {
        0 => Err(crate::ZxwError::InvalidParameters(
            "W node needs at least one leg".into(),
        )),
        1 => id(d, 1),
        2 => w(d),
        _ => seq(&[w(d)?, par(d, &[w_chain(d, n - 1)?, id(d, 1)?])?]),
    }
}

/// `√(n(d-1))·|W_n⟩`: the sum of all basis states on `n` wires with exactly
/// one nonzero digit.
pub fn w_state(d: Dimension, n: usize) -> Result<Diagram> {
    let c = C64::new(1.0 / (d.get() as f64 - 1.0), 0.0);
    par(
        d,
        &[
            seq(&[z_const(d, c, 0, 1)?, tri_inv(d)?, wk(d, n)?])?,
            scalar(d, C64::new(d.get() as f64 - 1.0, 0.0))?,
        ],
    )
}
