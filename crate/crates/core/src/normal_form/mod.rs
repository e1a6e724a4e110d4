//! Normal forms of state diagrams and the normalization procedure.

use std::fmt;

use ndarray::{Array2, ArrayD, IxDyn};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::basis;
use crate::diagram::{Dimension, GeneratorKind};
use crate::error::{Result, ZxwError};
use crate::interpret::semantics;

mod emit;
mod layers;
mod pipeline;

pub use emit::{build_spine, emit_diagram, parse_normal_form, unique_sort, Branch};
pub use layers::{layerize, LayerDecomposition};
pub use pipeline::{
    decide_equal, decide_equal_with, normalize, normalize_with, NormalizeOptions, DECIDE_TOL,
};

/// A state on `outputs` wires given by its full amplitude vector.
///
/// Amplitude `i` belongs to the basis state whose digits, wire 0 first, are
/// the base-`d` expansion of `i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalForm {
    pub dim: Dimension,
    pub outputs: usize,
    pub amplitudes: Vec<C64>,
}

impl NormalForm {
    pub fn amplitude(&self, index: usize) -> C64 {
        self.amplitudes[index]
    }

    /// Largest entrywise distance to another normal form, `None` when they
    /// live on different spaces.
    pub fn max_abs_diff(&self, other: &NormalForm) -> Option<f64> {
        if self.dim != other.dim || self.outputs != other.outputs {
            return None;
        }
        Some(
            self.amplitudes
                .iter()
                .zip(&other.amplitudes)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max),
        )
    }

    /// Multiplier weights of branch `index`, wire 0 first.
    pub fn weights(&self, index: usize) -> Vec<usize> {
        basis::digits(index, self.dim.get(), self.outputs)
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.amplitudes.iter().enumerate() {
            let digits: String = self.weights(i).iter().map(|e| e.to_string()).collect();
            writeln!(f, "|{digits}> [{}, {}]", a.re, a.im)?;
        }
        Ok(())
    }
}

/// Wrap an amplitude vector of length `d^m`.
pub fn matrix_to_nf(v: &[C64], d: Dimension, m: usize) -> Result<NormalForm> {
    if v.len() != d.pow(m) {
        return Err(ZxwError::ArityMismatch(format!(
            "{} amplitudes cannot describe {m} wires at d={d}",
            v.len()
        )));
    }
    Ok(NormalForm {
        dim: d,
        outputs: m,
        amplitudes: v.to_vec(),
    })
}

/// Normal form of a generator bent into a state: legs are its outputs
/// followed by its inputs.
pub fn generator_nf(kind: &GeneratorKind, d: Dimension) -> Result<NormalForm> {
    let kind = kind.checked(d)?;
    let dd = d.get();
    let legs = kind.legs(d);
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let mut amps = vec![zero; d.pow(legs)];
    match &kind {
        GeneratorKind::ZBox { phases, .. } if legs == 0 => {
            amps[0] = (0..dd as i64).map(|j| phases.get(j)).sum();
        }
        GeneratorKind::ZBox { phases, .. } => {
            for j in 0..dd {
                amps[basis::index_of(&vec![j; legs], dd)] = phases.get(j as i64);
            }
        }
        GeneratorKind::WNode => {
            amps[0] = one;
            for i in 1..dd {
                amps[basis::index_of(&[0, i, i], dd)] = one;
                amps[basis::index_of(&[i, 0, i], dd)] = one;
            }
        }
        GeneratorKind::Hadamard => {
            let s = 1.0 / (dd as f64).sqrt();
            for o in 0..dd {
                for i in 0..dd {
                    amps[o * dd + i] = d.omega_pow((o * i) as i64) * s;
                }
            }
        }
        other => amps = semantics(other, d)?.to_state_vector(),
    }
    matrix_to_nf(&amps, d, legs)
}

/// Normal form of the tensor product, `a` on the leading wires.
pub fn tensor_nf(a: &NormalForm, b: &NormalForm) -> Result<NormalForm> {
    if a.dim != b.dim {
        return Err(ZxwError::DimensionMismatch(a.dim.get(), b.dim.get()));
    }
    let mut amps = Vec::with_capacity(a.amplitudes.len() * b.amplitudes.len());
    for x in &a.amplitudes {
        amps.extend(b.amplitudes.iter().map(|y| x * y));
    }
    Ok(NormalForm {
        dim: a.dim,
        outputs: a.outputs + b.outputs,
        amplitudes: amps,
    })
}

/// Join outputs `s` and `t` with a cup. Indices with equal digits at `s`
/// and `t` are grouped and summed; all others drop out.
pub fn partial_trace_nf(nf: &NormalForm, s: usize, t: usize) -> Result<NormalForm> {
    let m = nf.outputs;
    if s == t || s >= m || t >= m {
        return Err(ZxwError::InvalidIndex(format!(
            "cannot trace outputs {s} and {t} of {m}"
        )));
    }
    let d = nf.dim.get();
    let kept: Vec<usize> = (0..m).filter(|&p| p != s && p != t).collect();
    let mut amps = vec![C64::new(0.0, 0.0); d.pow(m as u32 - 2)];
    let mut digits = vec![0; m];
    for (k, slot) in amps.iter_mut().enumerate() {
        for (p, e) in kept.iter().zip(basis::digits(k, d, m - 2)) {
            digits[*p] = e;
        }
        for y in 0..d {
            digits[s] = y;
            digits[t] = y;
            *slot += nf.amplitudes[basis::index_of(&digits, d)];
        }
    }
    Ok(NormalForm {
        dim: nf.dim,
        outputs: m - 2,
        amplitudes: amps,
    })
}

/// Tensor product of `a` and `b` with output `i` of `a` joined to output
/// `j` of `b` by a cup for every `(i, j)` in `pairs`. Equal to
/// [`tensor_nf`] followed by one [`partial_trace_nf`] per pair, without
/// building the full product first. The remaining outputs of `a` come
/// first, then those of `b`, each in their original order.
pub fn contract_nf(a: &NormalForm, b: &NormalForm, pairs: &[(usize, usize)]) -> Result<NormalForm> {
    if a.dim != b.dim {
        return Err(ZxwError::DimensionMismatch(a.dim.get(), b.dim.get()));
    }
    let (sa, sb): (Vec<usize>, Vec<usize>) = pairs.iter().copied().unzip();
    let distinct = |v: &[usize], m: usize| {
        v.iter().all(|&k| k < m)
            && v.iter().collect::<std::collections::BTreeSet<_>>().len() == v.len()
    };
    if !distinct(&sa, a.outputs) || !distinct(&sb, b.outputs) {
        return Err(ZxwError::InvalidIndex(format!(
            "cannot join outputs {pairs:?} of {} and {} wires",
            a.outputs, b.outputs
        )));
    }
    let d = a.dim.get();
    let a_free: Vec<usize> = (0..a.outputs).filter(|k| !sa.contains(k)).collect();
    let b_free: Vec<usize> = (0..b.outputs).filter(|k| !sb.contains(k)).collect();
    let matrix = |nf: &NormalForm, order: Vec<usize>, split: usize| -> Array2<C64> {
        let t = ArrayD::from_shape_vec(IxDyn(&vec![d; nf.outputs]), nf.amplitudes.clone())
            .expect("d^m amplitudes");
        let rows = d.pow(split as u32);
        let cols = nf.amplitudes.len() / rows;
        t.permuted_axes(IxDyn(&order))
            .as_standard_layout()
            .into_owned()
            .into_shape_with_order((rows, cols))
            .expect("contiguous")
    };
    let left = matrix(a, a_free.iter().chain(&sa).copied().collect(), a_free.len());
    let right = matrix(b, sb.iter().chain(&b_free).copied().collect(), sb.len());
    let amplitudes = left.dot(&right).into_iter().collect();
    Ok(NormalForm {
        dim: a.dim,
        outputs: a_free.len() + b_free.len(),
        amplitudes,
    })
}

/// Reorder wires: new output `p` is old output `perm[p]`.
pub fn permute_outputs(nf: &NormalForm, perm: &[usize]) -> Result<NormalForm> {
    let m = nf.outputs;
    let mut sorted = perm.to_vec();
    sorted.sort_unstable();
    if sorted != (0..m).collect::<Vec<_>>() {
        return Err(ZxwError::InvalidIndex(format!(
            "{perm:?} is not a permutation of {m} wires"
        )));
    }
    let d = nf.dim.get();
    let mut amps = vec![C64::new(0.0, 0.0); nf.amplitudes.len()];
    let mut new_digits = vec![0; m];
    for (i, a) in nf.amplitudes.iter().enumerate() {
        let old = basis::digits(i, d, m);
        for (p, &src) in perm.iter().enumerate() {
            new_digits[p] = old[src];
        }
        amps[basis::index_of(&new_digits, d)] = *a;
    }
    Ok(NormalForm {
        dim: nf.dim,
        outputs: m,
        amplitudes: amps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{Diagram, PhaseVector};
    use crate::interpret::interpret;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn dim(n: usize) -> Dimension {
        Dimension::new(n).unwrap()
    }

    #[test]
    fn contraction_is_tensor_then_traces() {
        let d = dim(3);
        let vec_of = |len: usize, seed: f64| {
            (0..len)
                .map(|k| c((k as f64 * seed).sin(), (k as f64 + seed).cos()))
                .collect::<Vec<_>>()
        };
        let a = matrix_to_nf(&vec_of(27, 0.7), d, 3).unwrap();
        let b = matrix_to_nf(&vec_of(9, 1.3), d, 2).unwrap();
        let fused = contract_nf(&a, &b, &[(2, 0), (0, 1)]).unwrap();
        let t = tensor_nf(&a, &b).unwrap();
        // outputs of the product: a0 a1 a2 b0 b1; join a2-b0, then a0-b1
        let slow = partial_trace_nf(&partial_trace_nf(&t, 2, 3).unwrap(), 0, 2).unwrap();
        assert_eq!(fused.outputs, 1);
        assert!(fused.max_abs_diff(&slow).unwrap() < 1e-12);
        assert!(contract_nf(&a, &b, &[(0, 0), (0, 1)]).is_err());
    }

    #[test]
    fn length_checked() {
        assert!(matrix_to_nf(&[c(1.0, 0.0); 3], dim(2), 2).is_err());
        assert!(matrix_to_nf(&[c(1.0, 0.0); 4], dim(2), 2).is_ok());
    }

    #[test]
    fn generator_nfs_match_bent_interpretation() {
        for n in 2..=4 {
            let d = dim(n);
            let a = PhaseVector::new((1..n).map(|k| c(k as f64, -0.5)).collect());
            for kind in [
                GeneratorKind::z_box(a.clone(), 1, 2),
                GeneratorKind::z_box(a.clone(), 0, 0),
                GeneratorKind::z_box(a, 0, 1),
                GeneratorKind::WNode,
                GeneratorKind::Hadamard,
                GeneratorKind::Dualiser,
            ] {
                let nf = generator_nf(&kind, d).unwrap();
                let g = Diagram::generator(kind.clone(), d).unwrap().bend_to_state();
                let v = interpret(&g).unwrap().to_state_vector();
                let oracle = matrix_to_nf(&v, d, g.outputs()).unwrap();
                assert!(nf.max_abs_diff(&oracle).unwrap() < 1e-12, "{kind} d={d}");
            }
        }
    }

    #[test]
    fn qubit_w_node_bent() {
        let nf = generator_nf(&GeneratorKind::WNode, dim(2)).unwrap();
        let expected: Vec<C64> = [1., 0., 0., 1., 0., 1., 0., 0.]
            .iter()
            .map(|&x| c(x, 0.0))
            .collect();
        assert_eq!(nf.amplitudes, expected);
    }

    #[test]
    fn tensor_of_two_qubits() {
        let (a, b) = (c(0.3, 1.0), c(-2.0, 0.5));
        let x = matrix_to_nf(&[c(1.0, 0.0), a], dim(2), 1).unwrap();
        let y = matrix_to_nf(&[c(1.0, 0.0), b], dim(2), 1).unwrap();
        let t = tensor_nf(&x, &y).unwrap();
        assert_eq!(t.amplitudes, vec![c(1.0, 0.0), b, a, a * b]);
    }

    #[test]
    fn trace_of_bell_and_basis_states() {
        let bell = matrix_to_nf(&[c(1., 0.), c(0., 0.), c(0., 0.), c(1., 0.)], dim(2), 2).unwrap();
        assert_eq!(
            partial_trace_nf(&bell, 0, 1).unwrap().amplitudes,
            vec![c(2.0, 0.0)]
        );
        let ket01 = matrix_to_nf(&[c(0., 0.), c(1., 0.), c(0., 0.), c(0., 0.)], dim(2), 2).unwrap();
        assert_eq!(
            partial_trace_nf(&ket01, 0, 1).unwrap().amplitudes,
            vec![c(0.0, 0.0)]
        );
        assert!(partial_trace_nf(&bell, 1, 1).is_err());
        assert!(partial_trace_nf(&bell, 0, 2).is_err());
    }

    #[test]
    fn permutation_moves_digits() {
        let d = dim(3);
        let mut v = vec![c(0.0, 0.0); 9];
        v[basis::index_of(&[1, 2], 3)] = c(1.0, 0.0);
        let nf = matrix_to_nf(&v, d, 2).unwrap();
        let p = permute_outputs(&nf, &[1, 0]).unwrap();
        assert_eq!(p.amplitudes[basis::index_of(&[2, 1], 3)], c(1.0, 0.0));
        assert!(permute_outputs(&nf, &[0, 0]).is_err());
    }
}
