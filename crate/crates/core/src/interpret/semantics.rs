use num_complex::Complex64 as C64;

use super::Matrix;
use crate::basis;
use crate::diagram::{Dimension, GeneratorKind, PhaseVector};
use crate::error::{Result, ZxwError};

/// Largest dense generator tensor built directly (in entries).
const MAX_ENTRIES: usize = 1 << 22;

/// The matrix of a single generator, `d^outputs × d^inputs`.
pub fn semantics(kind: &GeneratorKind, d: Dimension) -> Result<Matrix> {
    let kind = kind.checked(d)?;
    let (n, m) = kind.arity(d);
    if d.get()
        .checked_pow((n + m) as u32)
        .is_none_or(|s| s > MAX_ENTRIES)
    {
        return Err(ZxwError::InvalidParameters(format!(
            "{} with {} legs is too large to build densely at d={d}",
            kind.name(),
            n + m
        )));
    }
    let entry = entry_fn(&kind, d);
    let dd = d.get();
    Ok(Matrix::from_fn(d, m, n, |r, c| {
        let outs = basis::digits(r, dd, m);
        let ins = basis::digits(c, dd, n);
        entry(&outs, &ins)
    }))
}

type Entry = Box<dyn Fn(&[usize], &[usize]) -> C64>;

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

fn indicator(b: bool) -> C64 {
    if b {
        one()
    } else {
        C64::new(0.0, 0.0)
    }
}

fn entry_fn(kind: &GeneratorKind, d: Dimension) -> Entry {
    use GeneratorKind::*;
    let dd = d.get();
    match kind.clone() {
        ZBox { phases, .. } => z_entry(phases),
        GreenSpider { angles, .. } => z_entry(PhaseVector::from_angles(&angles)),
        LabeledBox { value, .. } => z_entry(PhaseVector::labeled(d, value)),
        Hadamard => Box::new(move |o, i| d.omega_pow((o[0] * i[0]) as i64) / (dd as f64).sqrt()),
        HadamardDagger => {
            Box::new(move |o, i| d.omega_pow(-((o[0] * i[0]) as i64)) / (dd as f64).sqrt())
        }
        WNode => Box::new(|o, i| w_entry(i[0], o)),
        WGeneral {
            transpose: false, ..
        } => Box::new(|o, i| w_entry(i[0], o)),
        WGeneral {
            transpose: true, ..
        } => Box::new(|o, i| w_entry(o[0], i)),
        PinkSpider { phase, .. } => Box::new(move |o, i| {
            let lhs: usize = o.iter().sum::<usize>() + phase;
            let rhs: usize = i.iter().sum();
            indicator(lhs % dd == rhs % dd)
        }),
        Dualiser => Box::new(move |o, i| indicator((o[0] + i[0]) % dd == 0)),
        Multiplier { weight } => Box::new(move |o, i| indicator(o[0] == (weight * i[0]) % dd)),
        Triangle => Box::new(|o, i| triangle_entry(o[0], i[0], 1.0)),
        TriangleInverse => Box::new(|o, i| triangle_entry(o[0], i[0], -1.0)),
        // Input k (counted from 1) carrying d-1 becomes |k⟩; any other
        // nonzero value is projected out.
        VBox => Box::new(move |o, i| {
            let hot: Vec<usize> = i
                .iter()
                .enumerate()
                .filter(|(_, &x)| x != 0)
                .map(|(k, &x)| if x == dd - 1 { k + 1 } else { 0 })
                .collect();
            match hot.as_slice() {
                [] => indicator(o[0] == 0),
                [k] if *k != 0 => indicator(o[0] == *k),
                _ => C64::new(0.0, 0.0),
            }
        }),
        Scalar { value } => Box::new(move |_, _| value),
    }
}

fn z_entry(phases: PhaseVector) -> Entry {
    let d = phases.len() + 1;
    Box::new(move |o, i| {
        let mut legs = o.iter().chain(i);
        match legs.next() {
            None => (0..d as i64).map(|j| phases.get(j)).sum(),
            Some(&j) if legs.all(|&k| k == j) => phases.get(j as i64),
            Some(_) => C64::new(0.0, 0.0),
        }
    })
}

/// `|0…0⟩⟨0| + Σ_{i≥1} Σ_p |0…i_p…0⟩⟨i|`.
fn w_entry(root: usize, branches: &[usize]) -> C64 {
    let mut nonzero = branches.iter().filter(|&&b| b != 0);
    match (nonzero.next(), nonzero.next()) {
        (None, _) => indicator(root == 0),
        (Some(&b), None) => indicator(root == b),
        _ => C64::new(0.0, 0.0),
    }
}

fn triangle_entry(o: usize, i: usize, sign: f64) -> C64 {
    if o == i {
        one()
    } else if o == 0 {
        C64::new(sign, 0.0)
    } else {
        C64::new(0.0, 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn dim(n: usize) -> Dimension {
        Dimension::new(n).unwrap()
    }

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn qubit_hadamard() {
        let h = semantics(&GeneratorKind::Hadamard, dim(2)).unwrap();
        let s = FRAC_1_SQRT_2;
        let expected = Matrix::from_rows(dim(2), &[vec![c(s), c(s)], vec![c(s), c(-s)]]).unwrap();
        assert!(h.max_abs_diff(&expected).unwrap() < 1e-12);
    }

    #[test]
    fn qubit_w_node_columns() {
        let w = semantics(&GeneratorKind::WNode, dim(2)).unwrap();
        let col0: Vec<C64> = (0..4).map(|r| w.get(r, 0)).collect();
        let col1: Vec<C64> = (0..4).map(|r| w.get(r, 1)).collect();
        assert_eq!(col0, vec![c(1.0), c(0.0), c(0.0), c(0.0)]);
        assert_eq!(col1, vec![c(0.0), c(1.0), c(1.0), c(0.0)]);
    }

    #[test]
    fn z_box_diagonal_and_scalar() {
        let a = PhaseVector::new(vec![c(2.0), c(3.0)]);
        let z = semantics(&GeneratorKind::z_box(a.clone(), 1, 1), dim(3)).unwrap();
        for r in 0..3 {
            for col in 0..3 {
                let expected = if r == col { a.get(r as i64) } else { c(0.0) };
                assert_eq!(z.get(r, col), expected);
            }
        }
        let s = semantics(&GeneratorKind::z_box(a, 0, 0), dim(3)).unwrap();
        assert_eq!(s.get(0, 0), c(6.0));
    }

    #[test]
    fn dualiser_and_triangle() {
        let du = semantics(&GeneratorKind::Dualiser, dim(3)).unwrap();
        assert_eq!(du.get(0, 0), c(1.0));
        assert_eq!(du.get(1, 2), c(1.0));
        assert_eq!(du.get(2, 1), c(1.0));
        assert_eq!(du.get(1, 1), c(0.0));
        let t = semantics(&GeneratorKind::Triangle, dim(2)).unwrap();
        let expected =
            Matrix::from_rows(dim(2), &[vec![c(1.0), c(1.0)], vec![c(0.0), c(1.0)]]).unwrap();
        assert_eq!(t, expected);
    }

    #[test]
    fn v_box_reads_one_hot_inputs() {
        let d = dim(3);
        let v = semantics(&GeneratorKind::VBox, d).unwrap();
        assert_eq!(v.get(2, basis::index_of(&[0, 2], 3)), c(1.0));
        assert_eq!(v.get(1, basis::index_of(&[2, 0], 3)), c(1.0));
        assert_eq!(v.get(0, 0), c(1.0));
        for x in [[0, 1], [1, 0], [2, 2], [1, 2]] {
            let col = basis::index_of(&x, 3);
            assert_eq!(
                (0..3).map(|r| v.get(r, col).norm()).sum::<f64>(),
                0.0,
                "{x:?}"
            );
        }
    }

    #[test]
    fn too_large_is_an_error() {
        let k = GeneratorKind::w_general(40);
        assert!(semantics(&k, dim(3)).is_err());
    }
}
