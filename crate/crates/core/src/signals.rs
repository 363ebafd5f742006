//! Closed-form parity signals as exact cosine series.
//!
//! A signal is `S(phi) = offset + sum_j W_j cos(omega_j phi)`. Every frequency
//! that occurs (`4n(n - 2k)` for twin-Fock sectors, `n^2` for NOON sectors) is
//! an integer, so folding `+omega` onto `-omega` and merging equal frequencies
//! is exact.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::special::{geometric_ratio, log_binomial, poisson_log_pmf, TruncationPolicy};
use crate::states::{ec_twice_norm_sq, InputStateSpec};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CosineTerm {
    pub weight: f64,
    pub frequency: f64,
}

/// Parity signal `offset + sum W_j cos(omega_j phi)` with distinct,
/// nonnegative, ascending frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct CosineSeriesSignal {
    terms: Vec<CosineTerm>,
    constant_offset: f64,
}

impl CosineSeriesSignal {
    pub fn constant(value: f64) -> Self {
        Self {
            terms: Vec::new(),
            constant_offset: value,
        }
    }

    pub fn terms(&self) -> &[CosineTerm] {
        &self.terms
    }

    pub fn constant_offset(&self) -> f64 {
        self.constant_offset
    }

    /// `S(0) = offset + sum W_j`.
    pub fn peak(&self) -> f64 {
        self.constant_offset + self.terms.iter().map(|t| t.weight).sum::<f64>()
    }

    /// `sum W_j omega_j^2`, the curvature `-S''(0)`.
    pub fn curvature(&self) -> f64 {
        self.terms.iter().map(|t| t.weight * t.frequency * t.frequency).sum()
    }

    pub fn evaluate(&self, phi: f64) -> f64 {
        evaluate_signal(self, phi)
    }

    pub fn derivative(&self, phi: f64) -> f64 {
        signal_derivative(self, phi)
    }
}

/// Accumulates `(weight, integer frequency)` pairs, folding signs.
#[derive(Debug, Default)]
struct SeriesBuilder {
    merged: BTreeMap<u64, f64>,
    offset: f64,
}

impl SeriesBuilder {
    fn add(&mut self, weight: f64, frequency: i64) {
        *self.merged.entry(frequency.unsigned_abs()).or_insert(0.0) += weight;
    }

    fn build(self) -> CosineSeriesSignal {
        CosineSeriesSignal {
            terms: self
                .merged
                .into_iter()
                .map(|(frequency, weight)| CosineTerm {
                    weight,
                    frequency: frequency as f64,
                })
                .collect(),
            constant_offset: self.offset,
        }
    }
}

/// Weight `p_n = (1 - r) r^n`, `r = nbar / (nbar + 2)`, of the pair `|n, n>`
/// in a two-mode squeezed vacuum of mean photon number `nbar`.
pub fn tmsv_weight(n: u64, nbar: f64) -> Result<f64> {
    if !(nbar.is_finite() && nbar >= 0.0) {
        return Err(Error::invalid("nbar", format!("must be finite and >= 0, got {nbar}")));
    }
    if nbar == 0.0 {
        return Ok(if n == 0 { 1.0 } else { 0.0 });
    }
    let r = geometric_ratio(nbar);
    Ok((1.0 - r) * (n as f64 * r.ln()).exp())
}

/// Truncated squeezed-vacuum pair distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometricWeights {
    pub nbar: f64,
    pub weights: Vec<f64>,
}

impl GeometricWeights {
    pub fn new(nbar: f64, policy: &TruncationPolicy) -> Result<Self> {
        let weights = (0..=policy.n_max as u64)
            .map(|n| tmsv_weight(n, nbar))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { nbar, weights })
    }
}

/// Amplitude `C_nk` of `|2k, 2n - 2k>` when `|n, n>` passes the first beam
/// splitter: `(-1)^(n-k) 2^(-n) [C(2k, k) C(2n - 2k, n - k)]^(1/2)`.
pub fn beam_splitter_coefficient(n: u64, k: u64) -> Result<f64> {
    if k > n {
        return Err(Error::invalid("k", format!("must lie in 0..={n}, got {k}")));
    }
    let sign = if (n - k).is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sign * (0.5 * log_coefficient_sq(n, k)).exp())
}

fn log_coefficient_sq(n: u64, k: u64) -> f64 {
    log_binomial(2 * k, k as i64) + log_binomial(2 * (n - k), (n - k) as i64) - 2.0 * n as f64 * std::f64::consts::LN_2
}

/// All coefficients `C_n0 .. C_nn`.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamSplitterCoefficients {
    pub n: u64,
    pub c: Vec<f64>,
}

impl BeamSplitterCoefficients {
    pub fn new(n: u64) -> Self {
        let c = (0..=n)
            .map(|k| beam_splitter_coefficient(n, k).expect("k in range"))
            .collect();
        Self { n, c }
    }
}

fn add_twin_fock(builder: &mut SeriesBuilder, n: u64, scale: f64) {
    let n_i = n as i64;
    for k in 0..=n {
        let weight = scale * log_coefficient_sq(n, k).exp();
        builder.add(weight, 4 * n_i * (n_i - 2 * k as i64));
    }
}

/// Parity signal of the twin-Fock state `|n, n>`:
/// `sum_k C_nk^2 cos[4n(n - 2k) phi]`.
pub fn tf_parity_series(n: u64) -> CosineSeriesSignal {
    let mut builder = SeriesBuilder::default();
    add_twin_fock(&mut builder, n, 1.0);
    builder.build()
}

/// Parity signal of the squeezed vacuum: the `p_n`-weighted sum of twin-Fock
/// signals for `n <= policy.n_max`.
pub fn tmsv_parity_series(nbar: f64, policy: &TruncationPolicy) -> Result<CosineSeriesSignal> {
    let weights = GeometricWeights::new(nbar, policy)?;
    let mut builder = SeriesBuilder::default();
    for (n, &p) in weights.weights.iter().enumerate() {
        if p > 0.0 {
            add_twin_fock(&mut builder, n as u64, p);
        }
    }
    Ok(builder.build())
}

/// Parity signal of a NOON probe: constant 2 for `n = 0` (the unnormalized
/// `|0::0>` convention), `cos(n^2 phi)` otherwise.
pub fn noon_parity_series(n: u64) -> CosineSeriesSignal {
    if n == 0 {
        return CosineSeriesSignal::constant(2.0);
    }
    CosineSeriesSignal {
        terms: vec![CosineTerm {
            weight: 1.0,
            frequency: (n * n) as f64,
        }],
        constant_offset: 0.0,
    }
}

/// Parity signal of the phase-averaged entangled coherent state:
/// `2 N^2 [2|c_0|^2 + sum_{n>=1} |c_n|^2 cos(n^2 phi)]`. The vacuum part is
/// carried by the constant offset.
pub fn ec_parity_series(alpha: f64, policy: &TruncationPolicy) -> Result<CosineSeriesSignal> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::invalid("alpha", format!("must be finite and > 0, got {alpha}")));
    }
    let lambda = alpha * alpha;
    let scale = ec_twice_norm_sq(alpha);
    let mut builder = SeriesBuilder {
        offset: 2.0 * scale * (-lambda).exp(),
        ..SeriesBuilder::default()
    };
    for n in 1..=policy.n_max as u64 {
        let weight = scale * poisson_log_pmf(lambda, n as usize).exp();
        builder.add(weight, (n * n) as i64);
    }
    Ok(builder.build())
}

/// Analytic parity signal for any state family.
pub fn parity_series(spec: &InputStateSpec, tail_epsilon: f64) -> Result<CosineSeriesSignal> {
    spec.validate()?;
    let policy = TruncationPolicy::for_state(spec, tail_epsilon)?;
    match *spec {
        InputStateSpec::TwinFock { n } => Ok(tf_parity_series(u64::from(n))),
        InputStateSpec::Tmsv { nbar } => tmsv_parity_series(nbar, &policy),
        InputStateSpec::Noon { n } => Ok(noon_parity_series(u64::from(n))),
        InputStateSpec::EntangledCoherent { alpha } => ec_parity_series(alpha, &policy),
    }
}

pub fn evaluate_signal(s: &CosineSeriesSignal, phi: f64) -> f64 {
    s.constant_offset
        + s.terms
            .iter()
            .map(|t| t.weight * (t.frequency * phi).cos())
            .sum::<f64>()
}

/// Exact term-wise derivative `-sum W_j omega_j sin(omega_j phi)`.
pub fn signal_derivative(s: &CosineSeriesSignal, phi: f64) -> f64 {
    -s.terms
        .iter()
        .map(|t| t.weight * t.frequency * (t.frequency * phi).sin())
        .sum::<f64>()
}
