//! Computational basis ordering shared by every module.
//!
//! A basis state of `m` wires is indexed by its digits read with wire 0 as
//! the most significant one: `|e_0 e_1 … e_{m-1}⟩` has index
//! `e_0·d^{m-1} + … + e_{m-1}`.

/// Digit carried by wire `pos` of basis state `index` over `len` wires.
pub fn digit(index: usize, d: usize, len: usize, pos: usize) -> usize {
    (index / d.pow((len - 1 - pos) as u32)) % d
}

/// All digits of `index`, wire 0 first.
pub fn digits(index: usize, d: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    let mut rest = index;
    for slot in out.iter_mut().rev() {
        *slot = rest % d;
        rest /= d;
    }
    out
}

/// Inverse of [`digits`].
pub fn index_of(digits: &[usize], d: usize) -> usize {
    digits.iter().fold(0, |acc, &e| acc * d + e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for i in 0..27 {
            let e = digits(i, 3, 3);
            assert_eq!(index_of(&e, 3), i);
            for (p, &x) in e.iter().enumerate() {
                assert_eq!(digit(i, 3, 3, p), x);
            }
        }
        assert_eq!(digits(5, 2, 3), vec![1, 0, 1]);
    }
}
