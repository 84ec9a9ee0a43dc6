//! Solve symmetric positive-definite linear systems `A x = b` by iterative
//! box contraction over QUBO subproblems.
//!
//! Minimizing the potential energy Π(x) = ½xᵀAx − xᵀb is equivalent to
//! solving the system. Encoding each unknown with two bits around a moving
//! box (`x = c + L(−2q₁ + q₂)`) turns one minimization step into a QUBO
//! over 2d binary variables; the box algorithm then alternates translations
//! (recentering on a strictly better point) and contractions (shrinking L
//! by the ratio beta) until L drops below the target precision.
//!
//! Module map:
//!
//! * [`linalg`] — dense vectors/symmetric matrices, SPD systems, energies.
//! * [`qubo`] — QUBO assembly for one box step and decoding.
//! * [`solvers`] — exhaustive and simulated-annealing samplers.
//! * [`boxalg`] — the box driver itself.
//! * [`theory`] — iteration-count predictions and the optimal contraction
//!   ratio (≈ 0.21–0.232 rather than the customary 0.5).
//! * [`instances`] — reproducible benchmark systems.
//!
//! ```
//! use boxqubo::{box_solve, instances, BoxConfig, SamplerConfig};
//!
//! let sys = instances::gen_random_spd(2, 42);
//! let mut cfg = BoxConfig::new(0.2, 1e-6, SamplerConfig::exhaustive()).unwrap();
//! cfg.buffer = 0.0; // exact sampler: no slack needed, reach the ε/β bound
//! let run = box_solve(&sys, &cfg).unwrap();
//! assert!(run.converged);
//! assert!(run.residual_inf < 1e-5);
//! ```

pub mod boxalg;
pub mod error;
pub mod instances;
pub mod linalg;
pub mod qubo;
pub mod seed;
pub mod solvers;
pub mod theory;

pub use boxalg::{acceptance_test, box_solve, BoxConfig, BoxResult, BoxState, IterationRecord, StepKind};
pub use error::{Error, Result};
pub use linalg::{SpdSystem, SymMatrix, Vector};
pub use qubo::{build_qubo, QubitAssignment, QuboProblem};
pub use solvers::{
    sample, solve_exhaustive, solve_sa, SampleResult, SamplerConfig, SamplerMode,
};
pub use theory::{
    average_total, contraction_count, optimal_beta_average, optimal_beta_upper, theory_curve,
    upper_bound_total, TheoryBounds,
};
