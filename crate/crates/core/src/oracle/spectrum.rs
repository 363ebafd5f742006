//! Spectra of the Kerr generator and its pieces on one photon-number sector.

use nalgebra::SymmetricEigen;
use num_complex::Complex64;

use super::sector::{self, CMatrix, CVector};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hamiltonian {
    /// `J_z^2 + N J_z`: `(a^dagger a)^2` with the sector constant `N^2/4` removed.
    KerrEffective,
    /// `J_z^2`.
    OneAxisTwisting,
    /// `N J_z`.
    NumberTimesJz,
}

impl Hamiltonian {
    pub fn sector_matrix(self, total: usize) -> CMatrix {
        let [_, _, jz] = sector::angular_momentum(total);
        let n = Complex64::new(total as f64, 0.0);
        match self {
            Hamiltonian::KerrEffective => &jz * &jz + &jz * n,
            Hamiltonian::OneAxisTwisting => &jz * &jz,
            Hamiltonian::NumberTimesJz => jz * n,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SpectrumRecord {
    /// Ascending eigenvalues.
    pub eigenvalues: Vec<f64>,
    /// `lambda_max - lambda_min`.
    pub seminorm: f64,
    /// `seminorm^2`, the largest `4 Var(H)` over pure sector states.
    pub max_qfi: f64,
    /// Equal superposition of extremal eigenvectors, in the `|n_a, N - n_a>` basis.
    pub witness: CVector,
}

impl SpectrumRecord {
    /// Best single-shot sensitivity reachable with this generator, `1 / seminorm`.
    pub fn sensitivity_limit(&self) -> f64 {
        1.0 / self.seminorm
    }
}

pub fn heff_sector_spectrum(total: usize, hamiltonian: Hamiltonian) -> Result<SpectrumRecord> {
    if total < 1 {
        return Err(Error::invalid("N", "must be >= 1"));
    }
    let eigen = SymmetricEigen::new(hamiltonian.sector_matrix(total));
    let mut order: Vec<usize> = (0..eigen.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eigen.eigenvalues[i].total_cmp(&eigen.eigenvalues[j]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eigen.eigenvalues[i]).collect();
    let (low, high) = (order[0], order[order.len() - 1]);
    let seminorm = eigenvalues[eigenvalues.len() - 1] - eigenvalues[0];
    let witness = (eigen.eigenvectors.column(low) + eigen.eigenvectors.column(high)).unscale(std::f64::consts::SQRT_2);
    Ok(SpectrumRecord {
        eigenvalues,
        seminorm,
        max_qfi: seminorm * seminorm,
        witness,
    })
}

/// `4 Var(H)` of a normalized sector state.
pub fn variance_qfi(h: &CMatrix, psi: &CVector) -> f64 {
    let h_psi = h * psi;
    let mean = psi.dotc(&h_psi).re;
    4.0 * (h_psi.norm_squared() - mean * mean)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimation::one_axis_twisting_limit;
    use crate::oracle::pipeline::qfi_fixed_sector;
    use crate::oracle::state::{Stage, TwoModeState};
    use rand::rngs::StdRng;
    use rand::SeedableRng;
    use rand_distr::{Distribution, StandardNormal};

    fn support(v: &CVector) -> Vec<usize> {
        (0..v.len()).filter(|&i| v[i].norm() > 1e-9).collect()
    }

    #[test]
    fn kerr_effective_two_photons() {
        let record = heff_sector_spectrum(2, Hamiltonian::KerrEffective).unwrap();
        for (got, want) in record.eigenvalues.iter().zip([-1.0, 0.0, 3.0]) {
            assert!((got - want).abs() <= 1e-12);
        }
        assert!((record.seminorm - 4.0).abs() <= 1e-12);
        assert!((record.max_qfi - 16.0).abs() <= 1e-12);
        assert_eq!(support(&record.witness), vec![0, 2]);
    }

    #[test]
    fn noon_is_extremal() {
        for total in 1..=8usize {
            let n4 = (total as f64).powi(4);
            for h in [Hamiltonian::KerrEffective, Hamiltonian::NumberTimesJz] {
                let record = heff_sector_spectrum(total, h).unwrap();
                assert!((record.max_qfi - n4).abs() <= 1e-9 * n4, "{h:?}, N = {total}");
                assert_eq!(support(&record.witness), vec![0, total]);
                let achieved = variance_qfi(&h.sector_matrix(total), &record.witness);
                assert!((achieved - n4).abs() <= 1e-9 * n4);
            }
        }
    }

    #[test]
    fn one_axis_twisting_seminorm() {
        for total in (2..=8usize).step_by(2) {
            let record = heff_sector_spectrum(total, Hamiltonian::OneAxisTwisting).unwrap();
            let n = total as f64;
            assert!((record.seminorm - n * n / 4.0).abs() <= 1e-12);
            let limit = one_axis_twisting_limit(total as u32, 1).unwrap();
            assert!((record.sensitivity_limit() - limit).abs() <= 1e-12 * limit);
            let achieved = variance_qfi(&Hamiltonian::OneAxisTwisting.sector_matrix(total), &record.witness);
            assert!((achieved - record.max_qfi).abs() <= 1e-9 * record.max_qfi);
        }
    }

    #[test]
    fn random_states_respect_the_spectral_bound() {
        let mut rng = StdRng::seed_from_u64(0x5eed);
        for sample in 0..200 {
            let total = 1 + sample % 6;
            let mut psi = CVector::from_fn(total + 1, |_, _| {
                Complex64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng))
            });
            psi.unscale_mut(psi.norm());
            let bound = heff_sector_spectrum(total, Hamiltonian::KerrEffective).unwrap().max_qfi;
            for stage in [Stage::Input, Stage::Probe] {
                let state = TwoModeState::from_sector(total, psi.clone(), stage);
                let fisher = qfi_fixed_sector(&state).unwrap();
                assert!(fisher <= bound + 1e-9, "sample {sample}: {fisher} > {bound}");
            }
        }
    }

    #[test]
    fn empty_sector_is_rejected() {
        assert!(heff_sector_spectrum(0, Hamiltonian::KerrEffective).is_err());
    }
}
