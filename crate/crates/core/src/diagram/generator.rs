//! Generators of the qudit ZXW-calculus and the derived gadgets built on top
//! of them.

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, ZxwError};

/// The local dimension `d` of every wire in a diagram.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct Dimension(usize);

impl Dimension {
    pub fn new(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(ZxwError::InvalidDimension(d));
        }
        Ok(Self(d))
    }

    #[inline]
    pub fn get(self) -> usize {
        self.0
    }

    /// `d^k`.
    pub fn pow(self, k: usize) -> usize {
        self.0.pow(k as u32)
    }

    /// Reduce an arbitrary integer into `0..d`.
    pub fn reduce(self, j: i64) -> usize {
        j.rem_euclid(self.0 as i64) as usize
    }

    /// The primitive root of unity `ω^k = exp(2πik/d)`.
    pub fn omega_pow(self, k: i64) -> C64 {
        let k = self.reduce(k) as f64;
        C64::from_polar(1.0, TAU * k / self.0 as f64)
    }
}

impl TryFrom<usize> for Dimension {
    type Error = ZxwError;

    fn try_from(d: usize) -> Result<Self> {
        Self::new(d)
    }
}

impl From<Dimension> for usize {
    fn from(d: Dimension) -> usize {
        d.0
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Phase vector `(a_1, ..., a_{d-1})` of a Z box. The component `a_0` is
/// always 1 and indices are read modulo `d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PhaseVector(Vec<C64>);

impl PhaseVector {
    pub fn new(entries: Vec<C64>) -> Self {
        Self(entries)
    }

    /// `(1, ..., 1)`: the plain green spider.
    pub fn ones(d: Dimension) -> Self {
        Self::constant(d, C64::new(1.0, 0.0))
    }

    pub fn zeros(d: Dimension) -> Self {
        Self::constant(d, C64::new(0.0, 0.0))
    }

    pub fn constant(d: Dimension, value: C64) -> Self {
        Self(vec![value; d.get() - 1])
    }

    /// `(0, ..., 0, x)`: the vector behind a labelled box.
    pub fn labeled(d: Dimension, x: C64) -> Self {
        let mut v = vec![C64::new(0.0, 0.0); d.get() - 1];
        v[d.get() - 2] = x;
        Self(v)
    }

    /// Vector with a single 1 at position `j` (`1 <= j <= d-1`).
    pub fn unit(d: Dimension, j: usize) -> Self {
        let mut v = vec![C64::new(0.0, 0.0); d.get() - 1];
        v[j - 1] = C64::new(1.0, 0.0);
        Self(v)
    }

    /// `(e^{iα_1}, ..., e^{iα_{d-1}})`.
    pub fn from_angles(angles: &[f64]) -> Self {
        Self(angles.iter().map(|&a| C64::from_polar(1.0, a)).collect())
    }

    /// Phases of the Fourier row `K_j`: entry `k` is `ω^{jk}`.
    pub fn fourier(d: Dimension, j: i64) -> Self {
        Self((1..d.get() as i64).map(|k| d.omega_pow(j * k)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[C64] {
        &self.0
    }

    /// `a_j` with `a_0 = 1` and `j` taken modulo `d`.
    pub fn get(&self, j: i64) -> C64 {
        let d = self.0.len() as i64 + 1;
        match j.rem_euclid(d) {
            0 => C64::new(1.0, 0.0),
            k => self.0[k as usize - 1],
        }
    }

    /// Entrywise product, the phase of two fused Z boxes.
    pub fn product(&self, other: &PhaseVector) -> PhaseVector {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a * b).collect())
    }

    pub fn sum(&self, other: &PhaseVector) -> PhaseVector {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `(a_{d-1}, ..., a_1)`.
    pub fn reversed(&self) -> PhaseVector {
        Self(self.0.iter().rev().copied().collect())
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> PhaseVector {
        Self(self.0.iter().map(|&a| f(a)).collect())
    }
}

/// Every kind of node that can appear in a diagram.
///
/// Only [`GeneratorKind::ZBox`], [`GeneratorKind::Hadamard`] and
/// [`GeneratorKind::WNode`] are core generators; everything else has a
/// defining expansion (see [`crate::diagram::expand_derived`]) and a direct
/// interpretation, and the two are tested to agree.
#[derive(Clone, Debug, PartialEq)]
pub enum GeneratorKind {
    ZBox {
        phases: PhaseVector,
        inputs: usize,
        outputs: usize,
    },
    Hadamard,
    HadamardDagger,
    /// The core W node, one input and two outputs.
    WNode,
    /// W node with `legs` outputs, or `legs` inputs when `transpose` is set.
    WGeneral {
        legs: usize,
        transpose: bool,
    },
    GreenSpider {
        angles: Vec<f64>,
        inputs: usize,
        outputs: usize,
    },
    LabeledBox {
        value: C64,
        inputs: usize,
        outputs: usize,
    },
    /// Normalised X spider with phase `K_phase`.
    PinkSpider {
        phase: usize,
        inputs: usize,
        outputs: usize,
    },
    Dualiser,
    Multiplier {
        weight: usize,
    },
    Triangle,
    TriangleInverse,
    /// `d-1` inputs, one output.
    VBox,
    Scalar {
        value: C64,
    },
}

impl GeneratorKind {
    pub fn z_box(phases: PhaseVector, inputs: usize, outputs: usize) -> Self {
        Self::ZBox {
            phases,
            inputs,
            outputs,
        }
    }

    /// Plain green spider `Z(1,...,1)`.
    pub fn spider(d: Dimension, inputs: usize, outputs: usize) -> Self {
        Self::ZBox {
            phases: PhaseVector::ones(d),
            inputs,
            outputs,
        }
    }

    pub fn pink(phase: i64, d: Dimension, inputs: usize, outputs: usize) -> Self {
        Self::PinkSpider {
            phase: d.reduce(phase),
            inputs,
            outputs,
        }
    }

    pub fn multiplier(weight: i64, d: Dimension) -> Self {
        Self::Multiplier {
            weight: d.reduce(weight),
        }
    }

    pub fn w_general(legs: usize) -> Self {
        Self::WGeneral {
            legs,
            transpose: false,
        }
    }

    pub fn w_transpose(legs: usize) -> Self {
        Self::WGeneral {
            legs,
            transpose: true,
        }
    }

    /// `(inputs, outputs)` of this kind at dimension `d`.
    pub fn arity(&self, d: Dimension) -> (usize, usize) {
        use GeneratorKind::*;
        match *self {
            ZBox {
                inputs, outputs, ..
            }
            | GreenSpider {
                inputs, outputs, ..
            }
            | LabeledBox {
                inputs, outputs, ..
            }
            | PinkSpider {
                inputs, outputs, ..
            } => (inputs, outputs),
            Hadamard
            | HadamardDagger
            | Dualiser
            | Multiplier { .. }
            | Triangle
            | TriangleInverse => (1, 1),
            WNode => (1, 2),
            WGeneral {
                legs,
                transpose: false,
            } => (1, legs),
            WGeneral {
                legs,
                transpose: true,
            } => (legs, 1),
            VBox => (d.get() - 1, 1),
            Scalar { .. } => (0, 0),
        }
    }

    pub fn legs(&self, d: Dimension) -> usize {
        let (n, m) = self.arity(d);
        n + m
    }

    pub fn is_core(&self) -> bool {
        matches!(self, Self::ZBox { .. } | Self::Hadamard | Self::WNode)
    }

    /// Stable lowercase name, also used by the document format.
    pub fn name(&self) -> &'static str {
        use GeneratorKind::*;
        match self {
            ZBox { .. } => "z_box",
            Hadamard => "hadamard",
            HadamardDagger => "hadamard_dagger",
            WNode => "w_node",
            WGeneral { .. } => "w_general",
            GreenSpider { .. } => "green_spider",
            LabeledBox { .. } => "labeled_box",
            PinkSpider { .. } => "pink_spider",
            Dualiser => "dualiser",
            Multiplier { .. } => "multiplier",
            Triangle => "triangle",
            TriangleInverse => "triangle_inverse",
            VBox => "v_box",
            Scalar { .. } => "scalar",
        }
    }

    /// Check the parameters against `d` and return the kind with its
    /// modular parameters reduced.
    pub fn checked(&self, d: Dimension) -> Result<GeneratorKind> {
        use GeneratorKind::*;
        let bad = |msg: String| Err(ZxwError::InvalidParameters(msg));
        match self {
            ZBox { phases, .. } if phases.len() != d.get() - 1 => bad(format!(
                "z_box phase vector has length {}, expected {}",
                phases.len(),
                d.get() - 1
            )),
            ZBox { phases, .. } if phases.entries().iter().any(|a| !a.is_finite()) => {
                bad("z_box phase vector has non-finite entries".into())
            }
            GreenSpider { angles, .. } if angles.len() != d.get() - 1 => bad(format!(
                "green_spider has {} angles, expected {}",
                angles.len(),
                d.get() - 1
            )),
            GreenSpider { angles, .. } if angles.iter().any(|a| !a.is_finite()) => {
                bad("green_spider angles must be finite".into())
            }
            GreenSpider {
                angles,
                inputs,
                outputs,
            } => Ok(GreenSpider {
                angles: angles.iter().map(|a| a.rem_euclid(TAU)).collect(),
                inputs: *inputs,
                outputs: *outputs,
            }),
            LabeledBox { value, .. } | Scalar { value } if !value.is_finite() => {
                bad(format!("{} value must be finite", self.name()))
            }
            WGeneral { legs: 0, .. } => bad("w_general needs at least one leg".into()),
            PinkSpider {
                phase,
                inputs,
                outputs,
            } => Ok(PinkSpider {
                phase: phase % d.get(),
                inputs: *inputs,
                outputs: *outputs,
            }),
            Multiplier { weight } => Ok(Multiplier {
                weight: weight % d.get(),
            }),
            other => Ok(other.clone()),
        }
    }
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use GeneratorKind::*;
        match self {
            ZBox {
                phases,
                inputs,
                outputs,
            } => {
                write!(f, "Z[")?;
                for (k, a) in phases.entries().iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{}", fmt_complex(*a))?;
                }
                write!(f, "]({inputs}->{outputs})")
            }
            GreenSpider {
                angles,
                inputs,
                outputs,
            } => {
                write!(f, "G{:?}({inputs}->{outputs})", angles)
            }
            LabeledBox {
                value,
                inputs,
                outputs,
            } => {
                write!(f, "L[{}]({inputs}->{outputs})", fmt_complex(*value))
            }
            PinkSpider {
                phase,
                inputs,
                outputs,
            } => write!(f, "K{phase}({inputs}->{outputs})"),
            WGeneral { legs, transpose } => {
                write!(f, "W{}{}", legs, if *transpose { "^T" } else { "" })
            }
            Multiplier { weight } => write!(f, "x{weight}"),
            Scalar { value } => write!(f, "{}", fmt_complex(*value)),
            Hadamard => write!(f, "H"),
            HadamardDagger => write!(f, "H†"),
            WNode => write!(f, "W"),
            Dualiser => write!(f, "D"),
            Triangle => write!(f, "T"),
            TriangleInverse => write!(f, "T⁻¹"),
            VBox => write!(f, "V"),
        }
    }
}

pub(crate) fn fmt_complex(z: C64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("{}{:+}i", z.re, z.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimension_rejects_one() {
        assert!(Dimension::new(1).is_err());
        assert!(Dimension::new(0).is_err());
        assert_eq!(Dimension::new(3).unwrap().get(), 3);
    }

    #[test]
    fn phase_indices_wrap() {
        let d = Dimension::new(3).unwrap();
        let a = PhaseVector::new(vec![C64::new(2.0, 0.0), C64::new(5.0, 0.0)]);
        assert_eq!(a.get(0), C64::new(1.0, 0.0));
        assert_eq!(a.get(3), C64::new(1.0, 0.0));
        assert_eq!(a.get(-1), C64::new(5.0, 0.0));
        assert_eq!(a.get(4), C64::new(2.0, 0.0));
        assert_eq!(
            PhaseVector::labeled(d, C64::new(7.0, 0.0)).get(2),
            C64::new(7.0, 0.0)
        );
    }

    #[test]
    fn multiplier_weight_reduced() {
        let d = Dimension::new(3).unwrap();
        let k = GeneratorKind::Multiplier { weight: 7 }.checked(d).unwrap();
        assert_eq!(k, GeneratorKind::Multiplier { weight: 1 });
        assert_eq!(
            GeneratorKind::multiplier(-1, d),
            GeneratorKind::Multiplier { weight: 2 }
        );
    }

    #[test]
    fn wrong_phase_length_rejected() {
        let d = Dimension::new(4).unwrap();
        let k = GeneratorKind::z_box(PhaseVector::ones(Dimension::new(3).unwrap()), 1, 1);
        assert!(k.checked(d).is_err());
    }

    #[test]
    fn v_box_arity_tracks_dimension() {
        let d = Dimension::new(5).unwrap();
        assert_eq!(GeneratorKind::VBox.arity(d), (4, 1));
    }
}
