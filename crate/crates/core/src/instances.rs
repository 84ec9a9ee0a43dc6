//! Synthetic benchmark instances.
//!
//! Random SPD systems follow the standard diagonally dominant construction
//! `A = d·I − (B + Bᵀ)/2` with `B` uniform on [0, 1), which keeps every
//! eigenvalue strictly positive (Gershgorin: diagonal > d−1, off-diagonal
//! row sums < d−1). The exact solution is drawn uniformly from [−2, 1]^d —
//! the region the box representation reaches from the origin — and the
//! right-hand side is defined as `b = A·x_exact`.

use crate::linalg::{SpdSystem, SymMatrix, Vector};
use crate::seed;

/// Deterministic random SPD system of dimension `d`.
///
/// Draw order is pinned for reproducibility: the d² entries of `B` row-major
/// first, then the d entries of `x_exact` (each `−2 + 3u` for u ∈ [0, 1)).
pub fn gen_random_spd(d: usize, generator_seed: u64) -> SpdSystem {
    assert!(d >= 1, "system dimension must be at least 1");
    let mut rng = seed::stream(generator_seed);
    let mut b_entries = vec![0.0; d * d];
    for entry in b_entries.iter_mut() {
        *entry = seed::unit_f64(&mut rng);
    }
    let a = SymMatrix::from_fn(d, |i, j| {
        let diag = if i == j { d as f64 } else { 0.0 };
        diag - 0.5 * (b_entries[i * d + j] + b_entries[j * d + i])
    });
    let x_exact = Vector::new(
        (0..d)
            .map(|_| -2.0 + 3.0 * seed::unit_f64(&mut rng))
            .collect(),
    )
    .expect("entries are finite");
    let rhs = a.mat_vec(&x_exact).expect("dimensions agree");
    SpdSystem::new(a, rhs, Some(x_exact)).expect("construction guarantees an SPD system")
}

/// The 6×6 one-dimensional Poisson finite-difference system with a fixed
/// exact solution built from multiples of pi.
pub fn poisson_system() -> SpdSystem {
    use std::f64::consts::PI;
    let rows = [
        [6.0, -6.0, 0.0, 0.0, 0.0, 0.0],
        [-6.0, 12.0, -6.0, 0.0, 0.0, 0.0],
        [0.0, -6.0, 12.0, -6.0, 0.0, 0.0],
        [0.0, 0.0, -6.0, 12.0, -6.0, 0.0],
        [0.0, 0.0, 0.0, -6.0, 12.0, -6.0],
        [0.0, 0.0, 0.0, 0.0, -6.0, 12.0],
    ];
    let a = SymMatrix::from_fn(6, |i, j| rows[i][j]);
    let x_exact = Vector::new(vec![-PI / 9.0, PI / 11.0, -PI / 20.0, PI / 8.0, 0.05 * PI, -PI / 5.0])
        .expect("entries are finite");
    let rhs = a.mat_vec(&x_exact).expect("dimensions agree");
    SpdSystem::new(a, rhs, Some(x_exact)).expect("the Poisson matrix is SPD")
}
