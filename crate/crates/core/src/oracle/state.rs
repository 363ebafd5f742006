//! Two-mode pure states stored sector by sector.

use num_complex::Complex64;

use super::sector::CVector;
use crate::error::{Error, Result};
use crate::signals::tmsv_weight;
use crate::special::{poisson_log_pmf, TruncationPolicy};
use crate::states::{ec_twice_norm_sq, InputStateSpec};

/// Where in the interferometer a state is specified.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    /// Before the first beam splitter.
    Input,
    /// Between the beam splitters, i.e. what the phase shift acts on.
    Probe,
}

/// Amplitudes over `|n_a, n_b>` grouped by total photon number:
/// `sectors[N][n_a]` is the amplitude of `|n_a, N - n_a>`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeState {
    pub stage: Stage,
    sectors: Vec<CVector>,
}

impl TwoModeState {
    /// An all-zero state holding sectors `0..=n_max`.
    pub fn zeros(n_max: usize, stage: Stage) -> Self {
        Self {
            stage,
            sectors: (0..=n_max).map(|total| CVector::zeros(total + 1)).collect(),
        }
    }

    /// A state living in the single sector `total`.
    pub fn from_sector(total: usize, amplitudes: CVector, stage: Stage) -> Self {
        assert_eq!(amplitudes.len(), total + 1, "sector {total} has {} levels", total + 1);
        let mut state = Self::zeros(total, stage);
        state.sectors[total] = amplitudes;
        state
    }

    /// Highest total photon number held.
    pub fn n_max(&self) -> usize {
        self.sectors.len() - 1
    }

    pub fn sector(&self, total: usize) -> &CVector {
        &self.sectors[total]
    }

    pub fn sectors(&self) -> impl Iterator<Item = (usize, &CVector)> {
        self.sectors.iter().enumerate()
    }

    pub fn amplitude(&self, n_a: usize, n_b: usize) -> Complex64 {
        self.sectors.get(n_a + n_b).map_or(Complex64::new(0.0, 0.0), |s| s[n_a])
    }

    pub fn set_amplitude(&mut self, n_a: usize, n_b: usize, value: Complex64) {
        self.sectors[n_a + n_b][n_a] = value;
    }

    pub fn norm_sqr(&self) -> f64 {
        self.sectors.iter().map(|s| s.norm_squared()).sum()
    }

    /// Sectors carrying nonzero amplitude.
    pub fn occupied_sectors(&self) -> Vec<usize> {
        self.sectors
            .iter()
            .enumerate()
            .filter(|(_, s)| s.iter().any(|z| z.norm_sqr() > 0.0))
            .map(|(total, _)| total)
            .collect()
    }

    /// Dense `(n_max + 1) x (n_max + 1)` amplitude grid indexed `[n_a][n_b]`;
    /// amplitudes outside the grid are dropped.
    pub fn to_grid(&self, n_max: usize) -> Vec<Vec<Complex64>> {
        (0..=n_max)
            .map(|n_a| (0..=n_max).map(|n_b| self.amplitude(n_a, n_b)).collect())
            .collect()
    }
}

/// Relative phase `i^N` that makes a NOON probe read `cos(N^2 phi)` at the
/// parity detector: the readout couples `|0,N>` to `|N,0>` with `(-i)^N`.
pub fn noon_relative_phase(n: usize) -> Complex64 {
    Complex64::new(0.0, 1.0).powu(n as u32)
}

/// `(|N,0> + i^N |0,N>) / sqrt(2)`; the vacuum for `N = 0`.
pub fn noon_sector(n: usize) -> CVector {
    let mut amps = CVector::zeros(n + 1);
    if n == 0 {
        amps[0] = Complex64::new(1.0, 0.0);
        return amps;
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    amps[n] = Complex64::new(h, 0.0);
    amps[0] = noon_relative_phase(n) * h;
    amps
}

/// Builds the pure state for `spec`.
///
/// Twin-Fock and squeezed-vacuum states are interferometer inputs. NOON and
/// entangled coherent states are probes; each entangled coherent sector is
/// the detector-aligned NOON state with amplitude `sqrt(2 N^2) c_n`
/// (`2 N c_0` for the vacuum).
pub fn prepare_input_state(spec: &InputStateSpec, policy: &TruncationPolicy) -> Result<TwoModeState> {
    spec.validate()?;
    let too_small = |what: String| Error::TruncationMismatch {
        n_max: policy.n_max,
        what,
    };
    match *spec {
        InputStateSpec::TwinFock { n } => {
            let n = n as usize;
            if n > policy.n_max {
                return Err(too_small(format!("|{n},{n}>")));
            }
            let mut state = TwoModeState::zeros(2 * n, Stage::Input);
            state.set_amplitude(n, n, Complex64::new(1.0, 0.0));
            Ok(state)
        }
        InputStateSpec::Tmsv { nbar } => {
            let mut state = TwoModeState::zeros(2 * policy.n_max, Stage::Input);
            for n in 0..=policy.n_max {
                let p = tmsv_weight(n as u64, nbar)?;
                state.set_amplitude(n, n, Complex64::new(p.sqrt(), 0.0));
            }
            Ok(state)
        }
        InputStateSpec::Noon { n } => {
            let n = n as usize;
            if n > policy.n_max {
                return Err(too_small(format!("NOON order {n}")));
            }
            Ok(TwoModeState::from_sector(n, noon_sector(n), Stage::Probe))
        }
        InputStateSpec::EntangledCoherent { alpha } => {
            let lambda = alpha * alpha;
            let scale = ec_twice_norm_sq(alpha);
            let mut state = TwoModeState::zeros(policy.n_max, Stage::Probe);
            state.sectors[0][0] = Complex64::new((2.0 * scale * (-lambda).exp()).sqrt(), 0.0);
            for n in 1..=policy.n_max {
                let weight = (scale * poisson_log_pmf(lambda, n).exp()).sqrt();
                state.sectors[n] = noon_sector(n) * Complex64::new(weight, 0.0);
            }
            Ok(state)
        }
    }
}
