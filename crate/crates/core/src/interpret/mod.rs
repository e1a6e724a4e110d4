//! The standard interpretation of diagrams as complex matrices.

use std::fmt;

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::diagram::{validate, Diagram, Dimension};
use crate::error::{Result, ZxwError};

mod contract;
mod semantics;

pub use semantics::semantics;

/// Default tolerance for comparing interpretations.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Nodes with more legs than this are split before contraction.
const SPLIT_LEGS: usize = 4;

/// Dense `d^outputs × d^inputs` matrix. Rows and columns are indexed with
/// wire 0 as the most significant digit (see [`crate::basis`]).
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    dim: Dimension,
    outputs: usize,
    inputs: usize,
    data: Array2<C64>,
}

impl Matrix {
    pub fn new(dim: Dimension, outputs: usize, inputs: usize, data: Array2<C64>) -> Result<Self> {
        if data.dim() != (dim.pow(outputs), dim.pow(inputs)) {
            return Err(ZxwError::ArityMismatch(format!(
                "{:?} matrix cannot be {outputs} outputs x {inputs} inputs at d={dim}",
                data.dim()
            )));
        }
        Ok(Matrix {
            dim,
            outputs,
            inputs,
            data,
        })
    }

    pub fn from_fn(
        dim: Dimension,
        outputs: usize,
        inputs: usize,
        f: impl Fn(usize, usize) -> C64,
    ) -> Self {
        let data = Array2::from_shape_fn((dim.pow(outputs), dim.pow(inputs)), |(r, c)| f(r, c));
        Matrix {
            dim,
            outputs,
            inputs,
            data,
        }
    }

    /// Build from rows; the shape must be a power of `d` in both directions.
    pub fn from_rows(dim: Dimension, rows: &[Vec<C64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(ZxwError::ArityMismatch("ragged rows".into()));
        }
        let outputs = log_exact(dim, r)?;
        let inputs = log_exact(dim, c)?;
        let data = Array2::from_shape_fn((r, c), |(i, j)| rows[i][j]);
        Ok(Matrix {
            dim,
            outputs,
            inputs,
            data,
        })
    }

    /// A `d^len` column vector as a state.
    pub fn from_state(dim: Dimension, amplitudes: &[C64]) -> Result<Self> {
        let outputs = log_exact(dim, amplitudes.len())?;
        let data = Array2::from_shape_fn((amplitudes.len(), 1), |(i, _)| amplitudes[i]);
        Ok(Matrix {
            dim,
            outputs,
            inputs: 0,
            data,
        })
    }

    pub fn identity(dim: Dimension, wires: usize) -> Self {
        let n = dim.pow(wires);
        Matrix {
            dim,
            outputs: wires,
            inputs: wires,
            data: Array2::eye(n),
        }
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }

    pub fn outputs(&self) -> usize {
        self.outputs
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn rows(&self) -> usize {
        self.data.nrows()
    }

    pub fn cols(&self) -> usize {
        self.data.ncols()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[(row, col)]
    }

    pub fn data(&self) -> &Array2<C64> {
        &self.data
    }

    /// Row-major flattening: entry `(r, c)` lands at `r·d^inputs + c`. This
    /// is exactly the amplitude vector of the diagram with its inputs bent
    /// into trailing outputs.
    pub fn to_state_vector(&self) -> Vec<C64> {
        self.data.iter().copied().collect()
    }

    /// `next · self`: apply `self` first.
    pub fn then(&self, next: &Matrix) -> Result<Matrix> {
        if self.dim != next.dim || self.outputs != next.inputs {
            return Err(ZxwError::ArityMismatch(
                "matrix shapes do not compose".into(),
            ));
        }
        Ok(Matrix {
            dim: self.dim,
            outputs: next.outputs,
            inputs: self.inputs,
            data: next.data.dot(&self.data),
        })
    }

    /// Kronecker product, `self` on the more significant wires.
    pub fn kron(&self, other: &Matrix) -> Result<Matrix> {
        if self.dim != other.dim {
            return Err(ZxwError::DimensionMismatch(self.dim.get(), other.dim.get()));
        }
        let (r2, c2) = other.data.dim();
        let data = Array2::from_shape_fn((self.rows() * r2, self.cols() * c2), |(r, c)| {
            self.data[(r / r2, c / c2)] * other.data[(r % r2, c % c2)]
        });
        Ok(Matrix {
            dim: self.dim,
            outputs: self.outputs + other.outputs,
            inputs: self.inputs + other.inputs,
            data,
        })
    }

    pub fn scaled(&self, s: C64) -> Matrix {
        Matrix {
            data: self.data.mapv(|x| x * s),
            ..self.clone()
        }
    }

    /// Real and imaginary parts smaller than `tol` set to zero, for display.
    pub fn chopped(&self, tol: f64) -> Matrix {
        let chop = |x: f64| if x.abs() < tol { 0.0 } else { x };
        Matrix {
            data: self.data.mapv(|z| C64::new(chop(z.re), chop(z.im))),
            ..self.clone()
        }
    }

    /// Max-norm distance, `None` when the shapes differ.
    pub fn max_abs_diff(&self, other: &Matrix) -> Option<f64> {
        if self.dim != other.dim || self.data.dim() != other.data.dim() {
            return None;
        }
        Some(
            self.data
                .iter()
                .zip(other.data.iter())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max),
        )
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.data.rows() {
            let cells: Vec<String> = row
                .iter()
                .map(|z| format!("[{}, {}]", z.re, z.im))
                .collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

fn log_exact(dim: Dimension, n: usize) -> Result<usize> {
    let mut k = 0;
    let mut p = 1;
    while p < n {
        p *= dim.get();
        k += 1;
    }
    if p != n {
        return Err(ZxwError::ArityMismatch(format!(
            "{n} is not a power of {dim}"
        )));
    }
    Ok(k)
}

/// Same shape and every entry within `tol`. No global scalar is factored out.
pub fn matrices_equal(a: &Matrix, b: &Matrix, tol: f64) -> bool {
    a.max_abs_diff(b).is_some_and(|dev| dev <= tol)
}

/// Contract the diagram's tensor network into its matrix.
pub fn interpret(diagram: &Diagram) -> Result<Matrix> {
    let problems = validate(diagram);
    if !problems.is_empty() {
        return Err(ZxwError::IllFormed(problems));
    }
    let split = crate::diagram::split_wide_nodes(diagram, SPLIT_LEGS);
    let data = contract::contract(&split)?;
    Matrix::new(diagram.dim(), diagram.outputs(), diagram.inputs(), data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{GeneratorKind, PhaseVector};

    fn dim(n: usize) -> Dimension {
        Dimension::new(n).unwrap()
    }

    #[test]
    fn identity_wire() {
        let m = interpret(&Diagram::identity(dim(4), 1)).unwrap();
        assert_eq!(m, Matrix::identity(dim(4), 1));
    }

    #[test]
    fn hadamard_then_dagger_is_identity() {
        let d = dim(5);
        let h = Diagram::generator(GeneratorKind::Hadamard, d).unwrap();
        let hd = Diagram::generator(GeneratorKind::HadamardDagger, d).unwrap();
        let m = interpret(&h.then(&hd).unwrap()).unwrap();
        assert!(matrices_equal(&m, &Matrix::identity(d, 1), 1e-12));
    }

    #[test]
    fn bell_state() {
        let m = interpret(&Diagram::identity(dim(2), 1).bend_to_state()).unwrap();
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        assert_eq!(m.to_state_vector(), vec![one, zero, zero, one]);
    }

    #[test]
    fn z_chain_multiplies_diagonals() {
        let d = dim(3);
        let a = PhaseVector::new(vec![C64::new(2.0, 1.0), C64::new(0.5, 0.0)]);
        let b = PhaseVector::new(vec![C64::new(-1.0, 0.0), C64::new(0.0, 3.0)]);
        let za = Diagram::generator(GeneratorKind::z_box(a.clone(), 1, 1), d).unwrap();
        let zb = Diagram::generator(GeneratorKind::z_box(b.clone(), 1, 1), d).unwrap();
        let m = interpret(&za.then(&zb).unwrap()).unwrap();
        let expected = semantics(&GeneratorKind::z_box(a.product(&b), 1, 1), d).unwrap();
        assert!(matrices_equal(&m, &expected, 1e-12));
    }

    #[test]
    fn crossing_wires_give_swap() {
        let d = dim(3);
        let swap = interpret(&Diagram::permutation(d, &[1, 0]).unwrap()).unwrap();
        for r in 0..9 {
            for c in 0..9 {
                let expected = if r == (c % 3) * 3 + c / 3 { 1.0 } else { 0.0 };
                assert_eq!(swap.get(r, c).re, expected);
            }
        }
    }

    #[test]
    fn tolerance_is_scalar_exact() {
        let i = Matrix::identity(dim(2), 1);
        assert!(matrices_equal(&i, &i, 1e-12));
        assert!(!matrices_equal(&i, &i.scaled(C64::new(2.0, 0.0)), 1e-9));
        assert!(!matrices_equal(&i, &Matrix::identity(dim(2), 2), 1.0));
    }

    #[test]
    fn ill_formed_rejected() {
        let d = dim(2);
        let bad = Diagram::from_parts(d, Default::default(), [], 1, 0);
        assert!(matches!(interpret(&bad), Err(ZxwError::IllFormed(_))));
    }
}
