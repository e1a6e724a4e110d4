//! Greedy dense tensor-network contraction.

use std::collections::HashMap;

use ndarray::{Array2, ArrayD, IxDyn};
use num_complex::Complex64 as C64;

use super::semantics;
use crate::diagram::{Diagram, Endpoint, Role};
use crate::error::{Result, ZxwError};

/// A dense tensor whose axes carry wire labels. A label shared by two
/// tensors is summed over when they are contracted.
#[derive(Clone, Debug)]
struct Tensor {
    labels: Vec<usize>,
    data: ArrayD<C64>,
}

impl Tensor {
    /// Sum over the diagonal of axes `i < j`.
    fn trace(self, i: usize, j: usize, d: usize) -> Tensor {
        let rank = self.labels.len();
        let mut order: Vec<usize> = (0..rank).filter(|&k| k != i && k != j).collect();
        let labels: Vec<usize> = order.iter().map(|&k| self.labels[k]).collect();
        order.extend([i, j]);
        let rest = d.pow((rank - 2) as u32);
        let permuted = self
            .data
            .permuted_axes(IxDyn(&order))
            .as_standard_layout()
            .into_owned();
        let flat = permuted
            .into_shape_with_order((rest, d * d))
            .expect("contiguous");
        let reduced: Vec<C64> = flat
            .outer_iter()
            .map(|row| (0..d).map(|k| row[k * d + k]).sum())
            .collect();
        let data = ArrayD::from_shape_vec(IxDyn(&vec![d; rank - 2]), reduced).expect("shape");
        Tensor { labels, data }
    }

    /// Remove repeated labels by tracing them out.
    fn trace_repeats(mut self, d: usize) -> Tensor {
        loop {
            let pair = (0..self.labels.len()).find_map(|i| {
                (i + 1..self.labels.len())
                    .find(|&j| self.labels[j] == self.labels[i])
                    .map(|j| (i, j))
            });
            match pair {
                Some((i, j)) => self = self.trace(i, j, d),
                None => return self,
            }
        }
    }
}

/// Contract `a` with `b` over every label they share.
fn contract_pair(a: Tensor, b: Tensor, d: usize) -> Tensor {
    let shared: Vec<usize> = a
        .labels
        .iter()
        .copied()
        .filter(|l| b.labels.contains(l))
        .collect();
    let a_free: Vec<usize> = (0..a.labels.len())
        .filter(|&k| !shared.contains(&a.labels[k]))
        .collect();
    let b_free: Vec<usize> = (0..b.labels.len())
        .filter(|&k| !shared.contains(&b.labels[k]))
        .collect();
    let pos = |t: &Tensor, l: usize| t.labels.iter().position(|&x| x == l).expect("shared label");

    let mut a_order = a_free.clone();
    a_order.extend(shared.iter().map(|&l| pos(&a, l)));
    let mut b_order: Vec<usize> = shared.iter().map(|&l| pos(&b, l)).collect();
    b_order.extend(b_free.iter().copied());

    let rows = d.pow(a_free.len() as u32);
    let inner = d.pow(shared.len() as u32);
    let cols = d.pow(b_free.len() as u32);
    let a2: Array2<C64> = a
        .data
        .permuted_axes(IxDyn(&a_order))
        .as_standard_layout()
        .into_owned()
        .into_shape_with_order((rows, inner))
        .expect("contiguous");
    let b2: Array2<C64> = b
        .data
        .permuted_axes(IxDyn(&b_order))
        .as_standard_layout()
        .into_owned()
        .into_shape_with_order((inner, cols))
        .expect("contiguous");
    let product = a2.dot(&b2);

    let mut labels: Vec<usize> = a_free.iter().map(|&k| a.labels[k]).collect();
    labels.extend(b_free.iter().map(|&k| b.labels[k]));
    let data = product
        .into_shape_with_order(IxDyn(&vec![d; labels.len()]))
        .expect("shape");
    Tensor { labels, data }
}

/// Contract the whole diagram into its `d^outputs × d^inputs` matrix.
pub(super) fn contract(diagram: &Diagram) -> Result<Array2<C64>> {
    let d = diagram.dim().get();
    let mut label_of: HashMap<Endpoint, usize> = HashMap::new();
    let mut tensors: Vec<Tensor> = Vec::new();
    let mut next_label = 0;
    for w in diagram.wires() {
        let (a, b) = w.ends();
        if matches!(a, Endpoint::Boundary { .. }) && matches!(b, Endpoint::Boundary { .. }) {
            // A bare wire between two boundary positions is an identity.
            let (la, lb) = (next_label, next_label + 1);
            next_label += 2;
            label_of.insert(a, la);
            label_of.insert(b, lb);
            let eye = Array2::<C64>::eye(d).into_dyn();
            tensors.push(Tensor {
                labels: vec![la, lb],
                data: eye,
            });
        } else {
            label_of.insert(a, next_label);
            label_of.insert(b, next_label);
            next_label += 1;
        }
    }
    for (id, node) in diagram.nodes() {
        let m = semantics(&node.kind, node.dim)?;
        let labels: Vec<usize> = diagram
            .ports(*id)
            .iter()
            .map(|p| {
                label_of
                    .get(p)
                    .copied()
                    .ok_or_else(|| ZxwError::IllFormed(vec![format!("{p} is not connected")]))
            })
            .collect::<Result<_>>()?;
        let data = m
            .data()
            .clone()
            .into_shape_with_order(IxDyn(&vec![d; labels.len()]))
            .expect("square tensor");
        tensors.push(Tensor { labels, data }.trace_repeats(d));
    }

    let result = contract_all(tensors, d);

    let open: Vec<usize> = (0..diagram.outputs())
        .map(|p| {
            label_of[&Endpoint::Boundary {
                role: Role::Out,
                pos: p,
            }]
        })
        .chain((0..diagram.inputs()).map(|p| {
            label_of[&Endpoint::Boundary {
                role: Role::In,
                pos: p,
            }]
        }))
        .collect();
    let order: Vec<usize> = open
        .iter()
        .map(|l| {
            result
                .labels
                .iter()
                .position(|x| x == l)
                .expect("open label survives")
        })
        .collect();
    let rows = d.pow(diagram.outputs() as u32);
    let cols = d.pow(diagram.inputs() as u32);
    Ok(result
        .data
        .permuted_axes(IxDyn(&order))
        .as_standard_layout()
        .into_owned()
        .into_shape_with_order((rows, cols))
        .expect("contiguous"))
}

/// Repeatedly contract the connected pair with the smallest result; once no
/// pair shares a label, take outer products smallest first.
fn contract_all(mut tensors: Vec<Tensor>, d: usize) -> Tensor {
    if tensors.is_empty() {
        return Tensor {
            labels: vec![],
            data: ArrayD::from_elem(IxDyn(&[]), C64::new(1.0, 0.0)),
        };
    }
    loop {
        if tensors.len() == 1 {
            return tensors.pop().expect("one tensor");
        }
        let mut holders: HashMap<usize, Vec<usize>> = HashMap::new();
        for (k, t) in tensors.iter().enumerate() {
            for &l in &t.labels {
                holders.entry(l).or_default().push(k);
            }
        }
        let mut best: Option<(usize, usize, usize)> = None;
        for ks in holders.values() {
            if let [i, j] = ks[..] {
                let (ta, tb) = (&tensors[i], &tensors[j]);
                let shared = ta.labels.iter().filter(|l| tb.labels.contains(l)).count();
                let rank = ta.labels.len() + tb.labels.len() - 2 * shared;
                let cand = (rank, i.min(j), i.max(j));
                if best.is_none_or(|b| cand < b) {
                    best = Some(cand);
                }
            }
        }
        let (i, j) = match best {
            Some((_, i, j)) => (i, j),
            None => {
                let mut by_rank: Vec<usize> = (0..tensors.len()).collect();
                by_rank.sort_by_key(|&k| tensors[k].labels.len());
                let (a, b) = (by_rank[0], by_rank[1]);
                (a.min(b), a.max(b))
            }
        };
        let b = tensors.swap_remove(j);
        let a = tensors.swap_remove(i);
        tensors.push(contract_pair(a, b, d));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_of_identity_is_dimension() {
        let t = Tensor {
            labels: vec![7, 7],
            data: Array2::<C64>::eye(3).into_dyn(),
        };
        let s = t.trace_repeats(3);
        assert!(s.labels.is_empty());
        assert_eq!(s.data[IxDyn(&[])], C64::new(3.0, 0.0));
    }

    #[test]
    fn pair_contraction_is_matrix_product() {
        let a = Array2::from_shape_fn((2, 2), |(r, c)| C64::new((r * 2 + c) as f64, 0.0));
        let b = Array2::from_shape_fn((2, 2), |(r, c)| C64::new((r + 3 * c) as f64, 1.0));
        let ta = Tensor {
            labels: vec![0, 1],
            data: a.clone().into_dyn(),
        };
        let tb = Tensor {
            labels: vec![1, 2],
            data: b.clone().into_dyn(),
        };
        let c = contract_pair(ta, tb, 2);
        assert_eq!(c.labels, vec![0, 2]);
        let expected = a.dot(&b);
        for r in 0..2 {
            for k in 0..2 {
                assert_eq!(c.data[IxDyn(&[r, k])], expected[(r, k)]);
            }
        }
    }
}
