//! The iterative box algorithm: translate-or-contract until the box is
//! smaller than epsilon or the iteration budget runs out.
//!
//! Each iteration encodes the current box (center `c`, scale `L`) as a QUBO,
//! asks a sampler for its minimizer, and re-evaluates the decoded point's
//! true potential energy Π*. A strictly lower energy moves the center
//! (translation); otherwise the box shrinks by the contraction ratio beta
//! (contraction). The total iteration count — the number of QUBO solves —
//! is the cost metric the `theory` module predicts.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{SpdSystem, Vector};
use crate::qubo::build_qubo;
use crate::seed;
use crate::solvers::{sample, SamplerConfig};

/// Default contraction ratio. The `theory` module shows values near 0.21
/// need fewer iterations.
pub const DEFAULT_BETA: f64 = 0.5;
/// Default initial box scale. Convergence is robust to this choice but a
/// badly mismatched value (or a solution far outside the initial reach
/// `[c − 2L, c + L]` per dimension) costs extra translations.
pub const DEFAULT_L_INIT: f64 = 1.0;
/// Default relative slack of the translation test; avoids churning on
/// energy improvements below noise.
pub const DEFAULT_BUFFER: f64 = 1e-8;

/// Box driver configuration.
#[derive(Debug, Clone)]
pub struct BoxConfig {
    /// Contraction ratio beta ∈ (0, 1).
    pub beta: f64,
    /// Termination scale: the run converges once L < epsilon.
    pub epsilon: f64,
    /// Iteration budget; the run stops unconverged once n_t + n_c exceeds it.
    pub n_allowable: u32,
    /// Initial box scale (must exceed epsilon).
    pub l_init: f64,
    /// Relative slack of the translation acceptance test: a candidate must
    /// beat the incumbent by more than `buffer·|Π̂|` to move the center.
    ///
    /// The slack guards against translation churn on noisy samplers, but it
    /// also floors the attainable accuracy near
    /// `sqrt(2·buffer·|Π̂|/λ_min(A))` — improvements below the slack are
    /// treated as ties even when real. Set it to 0 with exact samplers to
    /// reach the ε/β error bound of the strict test.
    pub buffer: f64,
    pub sampler: SamplerConfig,
}

impl BoxConfig {
    /// Config with the given contraction ratio and termination scale; the
    /// budget defaults to [`BoxConfig::default_n_allowable`].
    pub fn new(beta: f64, epsilon: f64, sampler: SamplerConfig) -> Result<Self> {
        let cfg = BoxConfig {
            beta,
            epsilon,
            n_allowable: Self::default_n_allowable(beta, epsilon, DEFAULT_L_INIT),
            l_init: DEFAULT_L_INIT,
            buffer: DEFAULT_BUFFER,
            sampler,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Ten times the worst-case iteration bound (1 + 1/(2β))·log_β(ε/L₀),
    /// so sampler noise cannot plausibly exhaust the budget first.
    pub fn default_n_allowable(beta: f64, epsilon: f64, l_init: f64) -> u32 {
        let bound = (1.0 + 1.0 / (2.0 * beta)) * (epsilon / l_init).ln() / beta.ln();
        if bound.is_finite() && bound > 0.0 {
            (10.0 * bound.ceil()) as u32
        } else {
            100
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "contraction ratio must lie in (0, 1), got {}",
                self.beta
            )));
        }
        if !(self.epsilon > 0.0) || !self.epsilon.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        if !(self.l_init > self.epsilon) || !self.l_init.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "l_init ({}) must exceed epsilon ({})",
                self.l_init, self.epsilon
            )));
        }
        if self.n_allowable < 1 {
            return Err(Error::InvalidConfig("n_allowable must be >= 1".into()));
        }
        if !(self.buffer >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "buffer must be non-negative, got {}",
                self.buffer
            )));
        }
        self.sampler.validate()
    }
}

impl Default for BoxConfig {
    fn default() -> Self {
        BoxConfig::new(DEFAULT_BETA, 1e-6, SamplerConfig::default())
            .expect("default config is valid")
    }
}

/// Mutable state of a box run.
#[derive(Debug, Clone)]
pub struct BoxState {
    pub center: Vector,
    pub scale: f64,
    /// Best potential energy found so far (Π̂); starts at 0 = Π(origin).
    pub best_energy: f64,
    pub n_t: u32,
    pub n_c: u32,
}

/// What one iteration did.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StepKind {
    Translation,
    Contraction,
}

/// One line of the run trace.
#[derive(Debug, Clone, Serialize)]
pub struct IterationRecord {
    pub index: u32,
    pub kind: StepKind,
    pub center_after: Vector,
    pub scale_after: f64,
    /// Π* — the true potential energy of the decoded sampler minimum.
    pub energy_star: f64,
    pub accepted: bool,
}

/// Outcome of a box run.
#[derive(Debug, Clone)]
pub struct BoxResult {
    /// Final center c.
    pub solution: Vector,
    pub n_t: u32,
    pub n_c: u32,
    pub n_total: u32,
    /// True iff terminated by L < epsilon rather than the budget.
    pub converged: bool,
    pub trace: Vec<IterationRecord>,
    pub residual_inf: f64,
}

/// The translation test: accept Π* as a strictly lower energy state than Π̂.
///
/// Implemented literally as `Π* < Π̂·(1 + buffer)`. Since Π̂ ≤ 0 throughout a
/// run, the slack tightens the test and suppresses translations on
/// improvements smaller than `buffer·|Π̂|`.
pub fn acceptance_test(pi_star: f64, pi_hat: f64, buffer: f64) -> bool {
    pi_star < pi_hat * (1.0 + buffer)
}

/// Run the box algorithm on an SPD system.
///
/// Per-iteration sampler seeds are split from `cfg.sampler.seed` so reruns
/// are identical while iterations stay decorrelated. Budget exhaustion is
/// not an error: the result reports `converged = false` and keeps every
/// accepted translation up to termination.
pub fn box_solve(sys: &SpdSystem, cfg: &BoxConfig) -> Result<BoxResult> {
    cfg.validate()?;
    let mut state = BoxState {
        center: Vector::zeros(sys.dim()),
        scale: cfg.l_init,
        best_energy: 0.0,
        n_t: 0,
        n_c: 0,
    };
    let mut trace: Vec<IterationRecord> = Vec::new();

    let converged = loop {
        let problem = build_qubo(sys, &state.center, state.scale)?;
        let mut sampler = cfg.sampler.clone();
        sampler.seed = seed::mix(
            cfg.sampler.seed,
            &[seed::STREAM_BOX_ITER, trace.len() as u64],
        );
        let found = sample(&problem, &sampler)?;
        let x_star = problem.decode(&found.assignment)?;
        let pi_star = sys.potential_energy(&x_star)?;

        let accepted = acceptance_test(pi_star, state.best_energy, cfg.buffer);
        if accepted {
            state.center = x_star;
            state.best_energy = pi_star;
            state.n_t += 1;
        } else {
            state.scale *= cfg.beta;
            state.n_c += 1;
        }
        trace.push(IterationRecord {
            index: trace.len() as u32,
            kind: if accepted {
                StepKind::Translation
            } else {
                StepKind::Contraction
            },
            center_after: state.center.clone(),
            scale_after: state.scale,
            energy_star: pi_star,
            accepted,
        });

        if state.scale < cfg.epsilon {
            break true;
        }
        if state.n_t + state.n_c > cfg.n_allowable {
            break false;
        }
    };

    let residual_inf = sys.residual_inf(&state.center)?;
    Ok(BoxResult {
        solution: state.center,
        n_t: state.n_t,
        n_c: state.n_c,
        n_total: state.n_t + state.n_c,
        converged,
        trace,
        residual_inf,
    })
}
