//! QUBO assembly for one box iteration, and decoding back to real space.
//!
//! Each real unknown is carried by two bits through the box representation
//! `x = c + L(−2·q₁ + q₂)`, so a d-dimensional system becomes a QUBO over
//! 2d binary variables with 4^d reachable points. Substituting the
//! representation into the potential energy Π(x) = ½xᵀAx − xᵀb gives
//!
//! ```text
//! Π = ½ qᵀ(L² MᵀAM) q + qᵀ(L Mᵀ(Ac − b)) + Π(c),    M = [−2I | I]
//! ```
//!
//! and because q_i² = q_i the linear term folds onto the diagonal (a linear
//! coefficient r_i adds 2r_i to Q_ii under the ½qᵀQq convention). The
//! constant Π(c) is kept as [`QuboProblem::offset`]; raw QUBO energies from
//! different iterations are not comparable without it.

use crate::error::{Error, Result};
use crate::linalg::{SpdSystem, SymMatrix, Vector};

/// Joint assignment of the 2d binary variables, laid out `[q₁ | q₂]` with
/// the q₁ block first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QubitAssignment {
    bits: Vec<bool>,
}

impl QubitAssignment {
    /// Build from the two per-dimension bit blocks.
    pub fn from_parts(q1: &[bool], q2: &[bool]) -> Result<Self> {
        if q1.len() != q2.len() {
            return Err(Error::DimensionMismatch {
                context: "qubit blocks",
                left: q1.len(),
                right: q2.len(),
            });
        }
        if q1.is_empty() {
            return Err(Error::EmptyDimension {
                context: "qubit assignment",
            });
        }
        let mut bits = Vec::with_capacity(2 * q1.len());
        bits.extend_from_slice(q1);
        bits.extend_from_slice(q2);
        Ok(QubitAssignment { bits })
    }

    /// Build from a flat `[q₁ | q₂]` buffer of even, nonzero length.
    pub fn from_bits(bits: Vec<bool>) -> Result<Self> {
        if bits.is_empty() || bits.len() % 2 != 0 {
            return Err(Error::InvalidConfig(format!(
                "qubit assignment needs an even, nonzero number of bits, got {}",
                bits.len()
            )));
        }
        Ok(QubitAssignment { bits })
    }

    /// Interpret the low 2d bits of `index` as an assignment: bit i is
    /// q₁\[i\], bit d+i is q₂\[i\] (q₁ is the low block).
    pub fn from_index(index: u64, d: usize) -> Self {
        assert!(d >= 1 && 2 * d <= 64);
        let bits = (0..2 * d).map(|i| (index >> i) & 1 == 1).collect();
        QubitAssignment { bits }
    }

    /// Inverse of [`QubitAssignment::from_index`] (requires 2d ≤ 64).
    pub fn to_index(&self) -> u64 {
        assert!(self.bits.len() <= 64);
        self.bits
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &b)| acc | (u64::from(b) << i))
    }

    /// Number of real dimensions d (half the variable count).
    pub fn dim(&self) -> usize {
        self.bits.len() / 2
    }

    pub fn num_vars(&self) -> usize {
        self.bits.len()
    }

    pub fn q1(&self) -> &[bool] {
        &self.bits[..self.dim()]
    }

    pub fn q2(&self) -> &[bool] {
        &self.bits[self.dim()..]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }
}

/// The QUBO of one box iteration: minimize ½ qᵀQq over q ∈ {0,1}^2d.
///
/// `Q` is symmetric with the linear term already absorbed into the diagonal;
/// `offset` is the constant Π(center) dropped from the binary form, so that
/// `energy(q) + offset` equals the true potential energy of the decoded
/// point.
#[derive(Debug, Clone)]
pub struct QuboProblem<'a> {
    system: &'a SpdSystem,
    coeffs: SymMatrix,
    offset: f64,
    center: Vector,
    scale: f64,
}

/// Assemble the QUBO for box center `c` and scale `L > 0`.
pub fn build_qubo<'a>(sys: &'a SpdSystem, center: &Vector, scale: f64) -> Result<QuboProblem<'a>> {
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::NonPositiveScale(scale));
    }
    let d = sys.dim();
    if center.len() != d {
        return Err(Error::DimensionMismatch {
            context: "build_qubo center",
            left: center.len(),
            right: d,
        });
    }

    // gradient of Π at the center: g = Ac − b
    let ac = sys.a().mat_vec(center)?;
    let g: Vec<f64> = ac
        .iter()
        .zip(sys.b().iter())
        .map(|(aci, bi)| aci - bi)
        .collect();

    let l2 = scale * scale;
    // Block structure of L²·MᵀAM for M = [−2I | I]:
    //   (q₁,q₁) → 4L²·A,  (q₂,q₂) → L²·A,  cross → −2L²·A
    // Linear term L·Mᵀg = (−2L·g | L·g) contributes twice itself on the
    // diagonal.
    let coeffs = SymMatrix::from_fn(2 * d, |i, j| {
        let (bi, ii) = if i < d { (0, i) } else { (1, i - d) };
        let (bj, jj) = if j < d { (0, j) } else { (1, j - d) };
        let factor = match (bi, bj) {
            (0, 0) => 4.0,
            (1, 1) => 1.0,
            _ => -2.0,
        };
        let mut q = factor * l2 * sys.a().get(ii, jj);
        if i == j {
            let r = if bi == 0 { -2.0 * scale * g[ii] } else { scale * g[ii] };
            q += 2.0 * r;
        }
        q
    });

    let offset = sys.potential_energy(center)?;
    Ok(QuboProblem {
        system: sys,
        coeffs,
        offset,
        center: center.clone(),
        scale,
    })
}

impl<'a> QuboProblem<'a> {
    /// Real dimension d of the underlying system.
    pub fn dim(&self) -> usize {
        self.system.dim()
    }

    /// Number of binary variables, 2d.
    pub fn num_vars(&self) -> usize {
        self.coeffs.dim()
    }

    pub fn coeffs(&self) -> &SymMatrix {
        &self.coeffs
    }

    /// Constant term Π(center) excluded from [`QuboProblem::energy`].
    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn center(&self) -> &Vector {
        &self.center
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn system(&self) -> &'a SpdSystem {
        self.system
    }

    /// Decode an assignment to the real point `c + L(−2q₁ + q₂)`.
    /// Every component lands on the 4-point lattice
    /// `{c_k − 2L, c_k − L, c_k, c_k + L}`.
    pub fn decode(&self, q: &QubitAssignment) -> Result<Vector> {
        if q.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                context: "decode",
                left: q.dim(),
                right: self.dim(),
            });
        }
        let entries = self
            .center
            .iter()
            .zip(q.q1().iter().zip(q.q2()))
            .map(|(ck, (&b1, &b2))| {
                let step = -2.0 * f64::from(u8::from(b1)) + f64::from(u8::from(b2));
                ck + self.scale * step
            })
            .collect();
        Vector::new(entries)
    }

    /// ½ qᵀQq — the raw binary energy, offset not included.
    ///
    /// Accumulation order is pinned (ascending i, diagonal first, then
    /// ascending j < i) so independent evaluation paths agree bit-for-bit.
    pub fn energy(&self, q: &QubitAssignment) -> Result<f64> {
        if q.num_vars() != self.num_vars() {
            return Err(Error::DimensionMismatch {
                context: "energy",
                left: q.num_vars(),
                right: self.num_vars(),
            });
        }
        let bits = q.bits();
        let mut e = 0.0;
        for i in 0..bits.len() {
            if !bits[i] {
                continue;
            }
            e += 0.5 * self.coeffs.get(i, i);
            for j in 0..i {
                if bits[j] {
                    e += self.coeffs.get(i, j);
                }
            }
        }
        Ok(e)
    }
}
