//! Parity readout and Fisher information computed from explicit sector
//! matrices, independent of the closed-form series.

use rayon::prelude::*;

use super::sector::{self, BeamSplitter, CMatrix, CVector};
use super::state::{prepare_input_state, Stage, TwoModeState};
use crate::error::{Error, Result};
use crate::special::TruncationPolicy;
use crate::states::InputStateSpec;

/// One occupied sector: the (unnormalized) probe amplitudes reaching the
/// phase shift and the parity readout `B2^dagger Pi_b B2` of that sector.
#[derive(Debug, Clone)]
struct SectorStage {
    total: usize,
    probe: CVector,
    readout: CMatrix,
}

/// Parity expectation `<psi| B1^dagger U^dagger B2^dagger Pi_b B2 U B1 |psi>`
/// with everything except the phase shift precomputed.
#[derive(Debug, Clone)]
pub struct ParityPipeline {
    stages: Vec<SectorStage>,
}

impl ParityPipeline {
    pub fn new(spec: &InputStateSpec, policy: &TruncationPolicy) -> Result<Self> {
        let state = prepare_input_state(spec, policy)?;
        Ok(Self::from_state(&state))
    }

    pub fn from_state(state: &TwoModeState) -> Self {
        let stages = state
            .occupied_sectors()
            .into_par_iter()
            .map(|total| {
                let amps = state.sector(total);
                let probe = match state.stage {
                    Stage::Input => BeamSplitter::First.sector_unitary(total) * amps,
                    Stage::Probe => amps.clone(),
                };
                SectorStage {
                    total,
                    probe,
                    readout: sector::parity_readout(total),
                }
            })
            .collect();
        Self { stages }
    }

    /// Parity at the output for a Kerr phase `phi`. Sector contributions are
    /// summed in ascending photon number.
    pub fn expectation(&self, phi: f64) -> f64 {
        let parts: Vec<f64> = self
            .stages
            .par_iter()
            .map(|stage| {
                let phases = sector::kerr_phases(stage.total, phi, 2);
                let shifted =
                    CVector::from_iterator(stage.probe.len(), stage.probe.iter().zip(&phases).map(|(a, p)| a * p));
                shifted.dotc(&(&stage.readout * &shifted)).re
            })
            .collect();
        parts.iter().sum()
    }
}

/// One-shot parity expectation; build a [`ParityPipeline`] for grids.
pub fn parity_expectation_output(spec: &InputStateSpec, phi: f64, policy: &TruncationPolicy) -> Result<f64> {
    Ok(ParityPipeline::new(spec, policy)?.expectation(phi))
}

/// The phase generator of the sector as seen by the state:
/// `B1^dagger (a^dagger a)^2 B1` for inputs, `(a^dagger a)^2` for probes.
pub fn sector_generator(total: usize, stage: Stage) -> CMatrix {
    let kerr = sector::kerr_hamiltonian(total);
    match stage {
        Stage::Input => {
            let b1 = BeamSplitter::First.sector_unitary(total);
            b1.adjoint() * kerr * b1
        }
        Stage::Probe => kerr,
    }
}

/// `(<G>, <G^2>)` for a normalized state on a single sector.
pub fn generator_moments(state: &TwoModeState) -> Result<(f64, f64)> {
    let total = single_sector(state)?;
    let psi = state.sector(total);
    let g = sector_generator(total, state.stage);
    let g_psi = &g * psi;
    let first = psi.dotc(&g_psi).re;
    let second = g_psi.dotc(&g_psi).re;
    Ok((first, second))
}

/// `4 (<G^2> - <G>^2)` for a pure state on one photon-number sector.
pub fn qfi_fixed_sector(state: &TwoModeState) -> Result<f64> {
    let (first, second) = generator_moments(state)?;
    Ok(4.0 * (second - first * first))
}

/// Fisher information of the phase-averaged mixture: the weighted sum of the
/// QFI of each normalized sector component.
pub fn qfi_phase_averaged(spec: &InputStateSpec, policy: &TruncationPolicy) -> Result<f64> {
    if !spec.is_fluctuating() {
        return Err(Error::UnsupportedState {
            operation: "qfi_phase_averaged",
            state: spec.tag(),
        });
    }
    let state = prepare_input_state(spec, policy)?;
    let parts = state
        .occupied_sectors()
        .into_par_iter()
        .map(|total| {
            let amps = state.sector(total);
            let weight = amps.norm_squared();
            let component = TwoModeState::from_sector(total, amps.unscale(weight.sqrt()), state.stage);
            Ok(weight * qfi_fixed_sector(&component)?)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(parts.iter().sum())
}

fn single_sector(state: &TwoModeState) -> Result<usize> {
    match state.occupied_sectors().as_slice() {
        [total] => Ok(*total),
        other => Err(Error::MultiSector { sectors: other.len() }),
    }
}

/// The amplitudes of `U_phi B1 |psi>` on one sector, for inspection.
pub fn evolved_sector(state: &TwoModeState, total: usize, phi: f64) -> CVector {
    let amps = state.sector(total);
    let probe = match state.stage {
        Stage::Input => BeamSplitter::First.sector_unitary(total) * amps,
        Stage::Probe => amps.clone(),
    };
    let phases = sector::kerr_phases(total, phi, 2);
    CVector::from_iterator(probe.len(), probe.iter().zip(&phases).map(|(a, p)| a * p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimation::{qfi_ec_series, qfi_tf, qfi_tmsv_closed};
    use crate::signals::{beam_splitter_coefficient, noon_parity_series, parity_series, tf_parity_series};
    use crate::special::truncation_cutoff;
    use num_complex::Complex64;
    use std::f64::consts::FRAC_PI_2;

    fn grid(points: usize) -> impl Iterator<Item = f64> {
        (0..points).map(move |i| FRAC_PI_2 * i as f64 / (points - 1) as f64)
    }

    fn tf(n: u32) -> TwoModeState {
        prepare_input_state(&InputStateSpec::TwinFock { n }, &TruncationPolicy::exact(n as usize)).unwrap()
    }

    #[test]
    fn twin_fock_signal_matches_series() {
        for n in 0..=6u32 {
            let spec = InputStateSpec::TwinFock { n };
            let pipeline = ParityPipeline::new(&spec, &TruncationPolicy::exact(n as usize)).unwrap();
            let series = tf_parity_series(n as u64);
            assert!((pipeline.expectation(0.0) - 1.0).abs() <= 1e-10);
            for phi in grid(201) {
                let diff = (pipeline.expectation(phi) - series.evaluate(phi)).abs();
                assert!(diff <= 1e-10, "n = {n}, phi = {phi}: {diff:e}");
            }
        }
        let at = std::f64::consts::FRAC_PI_4;
        let oracle =
            parity_expectation_output(&InputStateSpec::TwinFock { n: 2 }, at, &TruncationPolicy::exact(2)).unwrap();
        assert!((oracle - tf_parity_series(2).evaluate(at)).abs() <= 1e-10);
    }

    #[test]
    fn noon_signal_is_a_single_cosine() {
        for n in 1..=6u32 {
            let spec = InputStateSpec::Noon { n };
            let pipeline = ParityPipeline::new(&spec, &TruncationPolicy::exact(n as usize)).unwrap();
            let series = noon_parity_series(n as u64);
            for phi in grid(201) {
                let expected = ((n * n) as f64 * phi).cos();
                assert!((pipeline.expectation(phi) - expected).abs() <= 1e-10, "N = {n}");
                assert!((series.evaluate(phi) - expected).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn fluctuating_signals_match_series() {
        for spec in [
            InputStateSpec::Tmsv { nbar: 2.0 },
            InputStateSpec::EntangledCoherent { alpha: 1.5 },
        ] {
            let policy = truncation_cutoff(&spec, 1e-12).unwrap();
            let pipeline = ParityPipeline::new(&spec, &policy).unwrap();
            let series = parity_series(&spec, 1e-12).unwrap();
            for phi in grid(41) {
                let diff = (pipeline.expectation(phi) - series.evaluate(phi)).abs();
                assert!(diff <= 1e-8, "{spec}, phi = {phi}: {diff:e}");
            }
        }
    }

    #[test]
    fn evolved_twin_fock_amplitudes() {
        for n in 0..=4u32 {
            let state = tf(n);
            let total = 2 * n as usize;
            for phi in [0.0, 0.37, 1.1] {
                let out = evolved_sector(&state, total, phi);
                let reference_sign = out[0].re.signum() * beam_splitter_coefficient(n as u64, 0).unwrap().signum();
                for n_a in 0..=total {
                    if n_a % 2 == 1 {
                        assert!(out[n_a].norm() <= 1e-10, "odd n_a = {n_a} populated");
                        continue;
                    }
                    let k = (n_a / 2) as u64;
                    let c = beam_splitter_coefficient(n as u64, k).unwrap();
                    let expected = Complex64::from_polar(reference_sign * c, -4.0 * (k * k) as f64 * phi);
                    assert!((out[n_a] - expected).norm() <= 1e-10, "n = {n}, k = {k}, phi = {phi}");
                }
            }
        }
    }

    #[test]
    fn twin_fock_generator_moments() {
        for n in 1..=6u32 {
            let (first, second) = generator_moments(&tf(n)).unwrap();
            let x = n as f64;
            assert!((first - (3.0 * x * x + x) / 2.0).abs() <= 1e-10);
            let expected = (35.0 * x.powi(4) + 30.0 * x.powi(3) + x * x - 2.0 * x) / 8.0;
            assert!((second - expected).abs() <= 1e-10 * expected.max(1.0), "n = {n}");
            let fisher = qfi_fixed_sector(&tf(n)).unwrap();
            assert!((fisher - qfi_tf(n as u64)).abs() <= 1e-9 * qfi_tf(n as u64));
        }
        assert!((qfi_fixed_sector(&tf(1)).unwrap() - 16.0).abs() <= 1e-12);
    }

    #[test]
    fn noon_fisher_information_is_n_to_the_fourth() {
        for n in 1..=8u32 {
            let state = prepare_input_state(&InputStateSpec::Noon { n }, &TruncationPolicy::exact(n as usize)).unwrap();
            let expected = (n as f64).powi(4);
            assert!((qfi_fixed_sector(&state).unwrap() - expected).abs() <= 1e-9 * expected);
        }
    }

    #[test]
    fn phase_averaged_fisher_information() {
        let spec = InputStateSpec::Tmsv { nbar: 2.0 };
        let policy = truncation_cutoff(&spec, 1e-12).unwrap();
        let fisher = qfi_phase_averaged(&spec, &policy).unwrap();
        assert!((fisher - 752.0).abs() <= 1e-6 * 752.0);
        assert!((qfi_tmsv_closed(2.0) - 752.0).abs() < 1e-12);

        let zero = InputStateSpec::Tmsv { nbar: 0.0 };
        let policy = truncation_cutoff(&zero, 1e-12).unwrap();
        assert_eq!(qfi_phase_averaged(&zero, &policy).unwrap(), 0.0);

        let spec = InputStateSpec::EntangledCoherent { alpha: 2.0 };
        let policy = truncation_cutoff(&spec, 1e-12).unwrap();
        let oracle = qfi_phase_averaged(&spec, &policy).unwrap();
        let series = qfi_ec_series(2.0, &policy).unwrap();
        assert!((oracle - series).abs() <= 1e-8 * series);
    }

    #[test]
    fn multi_sector_states_are_rejected() {
        let spec = InputStateSpec::Tmsv { nbar: 1.0 };
        let state = prepare_input_state(&spec, &truncation_cutoff(&spec, 1e-6).unwrap()).unwrap();
        assert!(matches!(qfi_fixed_sector(&state), Err(Error::MultiSector { .. })));
        assert!(matches!(
            qfi_phase_averaged(&InputStateSpec::TwinFock { n: 1 }, &TruncationPolicy::exact(1)),
            Err(Error::UnsupportedState { .. })
        ));
    }
}
