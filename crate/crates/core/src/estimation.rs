//! Phase-uncertainty calculus: error propagation, quantum Fisher information
//! and the sensitivity limits it is compared against.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::signals::{parity_series, CosineSeriesSignal};
use crate::special::{poisson_log_pmf, TruncationPolicy};
use crate::states::{ec_twice_norm_sq, InputStateSpec};

/// Absolute slack used in every bound comparison.
pub const BOUND_TOLERANCE: f64 = 1e-12;

const MIN_SLOPE: f64 = 1e-14;

fn check_nu(nu: u32) -> Result<f64> {
    if nu == 0 {
        return Err(Error::invalid("nu", "repetitions must be >= 1"));
    }
    Ok(f64::from(nu))
}

/// Parity error propagation, `sqrt(1 - S^2) / (sqrt(nu) |S'|)`, using
/// `<Pi^2> = 1`.
pub fn error_propagation_sensitivity(s: &CosineSeriesSignal, phi: f64, nu: u32) -> Result<f64> {
    let nu = check_nu(nu)?;
    let slope = s.derivative(phi);
    if slope.abs() <= MIN_SLOPE {
        return Err(Error::VanishingDerivative { phi, derivative: slope });
    }
    let value = s.evaluate(phi);
    let variance = (1.0 - value * value).max(0.0);
    Ok(variance.sqrt() / (nu.sqrt() * slope.abs()))
}

/// Limit of the parity error propagation as `phi -> 0+` for a unit-peak
/// signal: `1 / sqrt(nu sum_j W_j omega_j^2)`.
///
/// Near zero, `1 - S ~ c phi^2 / 2` and `S' ~ -c phi` with `c = sum W omega^2`,
/// so the ratio tends to `1/sqrt(c)`.
pub fn zero_phase_sensitivity_limit(s: &CosineSeriesSignal, nu: u32, tail_epsilon: f64) -> Result<f64> {
    let nu = check_nu(nu)?;
    let peak = s.peak();
    if (peak - 1.0).abs() > 10.0 * tail_epsilon.max(f64::EPSILON) {
        return Err(Error::NotUnitPeak { value: peak });
    }
    let curvature = s.curvature();
    if curvature <= 0.0 {
        return Err(Error::invalid("signal", "has no curvature at phi = 0"));
    }
    Ok(1.0 / (nu * curvature).sqrt())
}

/// Fisher information of the twin-Fock state `|n, n>`:
/// `(17/2) n^4 + 9 n^3 - n^2 / 2 - n`.
pub fn qfi_tf(n: u64) -> f64 {
    let n = n as f64;
    8.5 * n.powi(4) + 9.0 * n.powi(3) - 0.5 * n * n - n
}

/// Closed-form Fisher information of the phase-averaged squeezed vacuum.
pub fn qfi_tmsv_closed(nbar: f64) -> f64 {
    let x = nbar;
    12.75 * x.powi(4) + 45.0 * x.powi(3) + 43.0 * x * x + 8.0 * x
}

/// `sum_{n <= n_max} p_n F_TF(n)`, summed from the top down.
pub fn qfi_tmsv_series(nbar: f64, policy: &TruncationPolicy) -> Result<f64> {
    let weights = crate::signals::GeometricWeights::new(nbar, policy)?;
    Ok(weights
        .weights
        .iter()
        .enumerate()
        .rev()
        .map(|(n, p)| p * qfi_tf(n as u64))
        .sum())
}

pub fn qfi_noon(n: u64) -> f64 {
    (n as f64).powi(4)
}

/// `2 N^2 sum_{n >= 1} |c_n|^2 n^4` for the phase-averaged entangled
/// coherent state.
pub fn qfi_ec_series(alpha: f64, policy: &TruncationPolicy) -> Result<f64> {
    ec_moment_series(alpha, policy, 4)
}

fn ec_moment_series(alpha: f64, policy: &TruncationPolicy, power: i32) -> Result<f64> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::invalid("alpha", format!("must be finite and > 0, got {alpha}")));
    }
    let lambda = alpha * alpha;
    let sum: f64 = (1..=policy.n_max)
        .rev()
        .map(|n| poisson_log_pmf(lambda, n).exp() * (n as f64).powi(power))
        .sum();
    Ok(ec_twice_norm_sq(alpha) * sum)
}

/// Large-amplitude form `N^4 + 6N^3 + 7N^2 + N` of the entangled coherent
/// Fisher information without a reference beam.
pub fn qfi_ec_asymptotic(nbar: f64) -> f64 {
    let x = nbar;
    x.powi(4) + 6.0 * x.powi(3) + 7.0 * x * x + x
}

/// Reference-beam entangled coherent Fisher information
/// `N^4 + 10N^3 + 13N^2 + 2N`, kept for comparison only.
pub fn qfi_ec_joo(nbar: f64) -> f64 {
    let x = nbar;
    x.powi(4) + 10.0 * x.powi(3) + 13.0 * x * x + 2.0 * x
}

/// Fisher information of any state family, closed form where one exists.
pub fn qfi_for_state(spec: &InputStateSpec, tail_epsilon: f64) -> Result<f64> {
    spec.validate()?;
    Ok(match *spec {
        InputStateSpec::TwinFock { n } => qfi_tf(u64::from(n)),
        InputStateSpec::Tmsv { nbar } => qfi_tmsv_closed(nbar),
        InputStateSpec::Noon { n } => qfi_noon(u64::from(n)),
        InputStateSpec::EntangledCoherent { alpha } => {
            let policy = TruncationPolicy::for_state(spec, tail_epsilon)?;
            qfi_ec_series(alpha, &policy)?
        }
    })
}

/// Quantum Cramer-Rao bound `1 / sqrt(nu F)`.
pub fn qcr_bound(fisher: f64, nu: u32) -> Result<f64> {
    let nu = check_nu(nu)?;
    if !(fisher > 0.0) {
        return Err(Error::invalid("fisher", format!("must be > 0, got {fisher}")));
    }
    Ok(1.0 / (nu * fisher).sqrt())
}

/// Fixed-particle-number scaling limit `1 / (sqrt(nu) N^k)` for a k-body
/// generator.
pub fn bgsl(n: f64, k: u32, nu: u32) -> Result<f64> {
    let nu = check_nu(nu)?;
    if !(n > 0.0) {
        return Err(Error::invalid("n", format!("must be > 0, got {n}")));
    }
    Ok(1.0 / (nu.sqrt() * n.powi(k as i32)))
}

/// Power-law limit `1 / (sqrt(nu) nbar^exponent)` for non-integer exponents,
/// e.g. the `nbar^{-3/2}` edge of the coherent-state region.
pub fn power_law_limit(nbar: f64, exponent: f64, nu: u32) -> Result<f64> {
    let nu = check_nu(nu)?;
    if !(nbar > 0.0) {
        return Err(Error::invalid("nbar", format!("must be > 0, got {nbar}")));
    }
    Ok(1.0 / (nu.sqrt() * nbar.powf(exponent)))
}

/// `<N^4>` of the total photon number.
pub fn fourth_moment_total_photon(spec: &InputStateSpec, policy: &TruncationPolicy) -> Result<f64> {
    spec.validate()?;
    Ok(match *spec {
        InputStateSpec::TwinFock { n } => (2.0 * f64::from(n)).powi(4),
        InputStateSpec::Noon { n } => f64::from(n).powi(4),
        InputStateSpec::Tmsv { nbar } => {
            let x = nbar;
            24.0 * x.powi(4) + 72.0 * x.powi(3) + 56.0 * x * x + 8.0 * x
        }
        InputStateSpec::EntangledCoherent { alpha } => ec_moment_series(alpha, policy, 4)?,
    })
}

/// Fluctuating-number limit `1 / sqrt(nu <N^4>)`.
pub fn generalized_limit(fourth_moment: f64, nu: u32) -> Result<f64> {
    let nu = check_nu(nu)?;
    if !(fourth_moment > 0.0) {
        return Err(Error::invalid(
            "fourth_moment",
            format!("must be > 0, got {fourth_moment}"),
        ));
    }
    Ok(1.0 / (nu * fourth_moment).sqrt())
}

/// Gain over the `1/N^2` limit in dB: `-10 log10(nbar^2 / sqrt(F))`.
pub fn sensitivity_gain(fisher: f64, nbar: f64) -> Result<f64> {
    if !(fisher > 0.0) {
        return Err(Error::invalid("fisher", format!("must be > 0, got {fisher}")));
    }
    if !(nbar > 0.0) {
        return Err(Error::invalid("nbar", format!("must be > 0, got {nbar}")));
    }
    Ok(-10.0 * (nbar * nbar / fisher.sqrt()).log10())
}

/// Large-`nbar` limit of the squeezed-vacuum gain, `5 log10(51/4)` dB.
pub fn tmsv_gain_asymptote() -> f64 {
    5.0 * (51.0f64 / 4.0).log10()
}

/// One-axis-twisting limit `4 / (sqrt(nu) N^2)`.
pub fn one_axis_twisting_limit(n: u32, nu: u32) -> Result<f64> {
    let nu = check_nu(nu)?;
    if n == 0 {
        return Err(Error::invalid("n", "must be >= 1"));
    }
    Ok(4.0 / (nu.sqrt() * f64::from(n).powi(2)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundSet {
    pub bgsl_value: f64,
    pub generalized_value: f64,
    pub fourth_moment: f64,
}

impl BoundSet {
    pub fn new(spec: &InputStateSpec, nu: u32, tail_epsilon: f64) -> Result<Self> {
        let policy = TruncationPolicy::for_state(spec, tail_epsilon)?;
        let fourth_moment = fourth_moment_total_photon(spec, &policy)?;
        Ok(Self {
            bgsl_value: bgsl(spec.mean_photon_number(), 2, nu)?,
            generalized_value: generalized_limit(fourth_moment, nu)?,
            fourth_moment,
        })
    }
}

/// Every sensitivity figure of merit for one state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SensitivityReport {
    pub state: InputStateSpec,
    pub nbar: f64,
    pub nu: u32,
    pub delta_phi_parity: f64,
    pub qcr_bound: f64,
    pub bgsl: f64,
    pub generalized_limit: f64,
    pub gain_db: f64,
}

impl SensitivityReport {
    /// Parity sensitivity is taken in the `phi -> 0+` limit.
    pub fn compute(spec: &InputStateSpec, nu: u32, tail_epsilon: f64) -> Result<Self> {
        spec.validate()?;
        let nbar = spec.mean_photon_number();
        if !(nbar > 0.0) {
            return Err(Error::invalid("nbar", "sensitivity needs a nonvacuum state"));
        }
        let signal = parity_series(spec, tail_epsilon)?;
        let fisher = qfi_for_state(spec, tail_epsilon)?;
        let bounds = BoundSet::new(spec, nu, tail_epsilon)?;
        Ok(Self {
            state: *spec,
            nbar,
            nu,
            delta_phi_parity: zero_phase_sensitivity_limit(&signal, nu, tail_epsilon)?,
            qcr_bound: qcr_bound(fisher, nu)?,
            bgsl: bounds.bgsl_value,
            generalized_limit: bounds.generalized_value,
            gain_db: sensitivity_gain(fisher, nbar)?,
        })
    }
}
