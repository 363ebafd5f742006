//! Operators restricted to the `N`-photon sector, basis `|n_a, N - n_a>`
//! ordered by `n_a = 0..=N`. Every interferometer element conserves the
//! total photon number, so these blocks are exact.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// `exp(-i H)` for Hermitian `H`, through its eigendecomposition.
pub fn exp_minus_i(h: &CMatrix) -> CMatrix {
    let eigen = SymmetricEigen::new(h.clone());
    let phases = CVector::from_iterator(
        eigen.eigenvalues.len(),
        eigen
            .eigenvalues
            .iter()
            .map(|&lambda| Complex64::from_polar(1.0, -lambda)),
    );
    let v = &eigen.eigenvectors;
    let mut scaled = v.clone();
    for (mut column, phase) in scaled.column_iter_mut().zip(phases.iter()) {
        column *= *phase;
    }
    scaled * v.adjoint()
}

/// `a^dagger b` on the sector: `|n_a, n_b> -> sqrt((n_a + 1) n_b) |n_a + 1, n_b - 1>`.
pub fn raise_a_lower_b(total: usize) -> CMatrix {
    let mut m = CMatrix::zeros(total + 1, total + 1);
    for n_a in 0..total {
        let n_b = total - n_a;
        m[(n_a + 1, n_a)] = Complex64::new((((n_a + 1) * n_b) as f64).sqrt(), 0.0);
    }
    m
}

pub fn diagonal(total: usize, f: impl Fn(usize) -> Complex64) -> CMatrix {
    CMatrix::from_diagonal(&CVector::from_iterator(total + 1, (0..=total).map(f)))
}

/// Schwinger operators `J_x`, `J_y`, `J_z` on the sector.
pub fn angular_momentum(total: usize) -> [CMatrix; 3] {
    let up = raise_a_lower_b(total);
    let down = up.adjoint();
    let jx = (&up + &down) * Complex64::new(0.5, 0.0);
    let jy = (&up - &down) * Complex64::new(0.0, -0.5);
    let jz = diagonal(total, |n_a| Complex64::new(n_a as f64 - 0.5 * total as f64, 0.0));
    [jx, jy, jz]
}

/// The two balanced beam splitters of the interferometer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BeamSplitter {
    /// `B1 = exp[pi (a^dagger b - a b^dagger) / 4]`.
    First,
    /// `B2 = exp[-i pi (a^dagger b + a b^dagger) / 4]`.
    Second,
}

impl BeamSplitter {
    /// Hermitian `H` with `B = exp(-i H)`.
    pub fn generator(self, total: usize) -> CMatrix {
        let up = raise_a_lower_b(total);
        let down = up.adjoint();
        let quarter_pi = std::f64::consts::FRAC_PI_4;
        match self {
            // pi/4 (a^dag b - a b^dag) = -i H  =>  H = i pi/4 (a^dag b - a b^dag)
            BeamSplitter::First => (up - down) * Complex64::new(0.0, quarter_pi),
            BeamSplitter::Second => (up + down) * Complex64::new(quarter_pi, 0.0),
        }
    }

    pub fn sector_unitary(self, total: usize) -> CMatrix {
        exp_minus_i(&self.generator(total))
    }
}

/// `exp(-i phi n_a^k)` as a vector of diagonal phases.
pub fn kerr_phases(total: usize, phi: f64, k: u32) -> Vec<Complex64> {
    (0..=total)
        .map(|n_a| Complex64::from_polar(1.0, -phi * (n_a as f64).powi(k as i32)))
        .collect()
}

/// `(-1)^{n_b}` on the sector.
pub fn parity_b(total: usize) -> CMatrix {
    diagonal(total, |n_a| {
        let sign = if (total - n_a).is_multiple_of(2) { 1.0 } else { -1.0 };
        Complex64::new(sign, 0.0)
    })
}

/// `B2^dagger Pi_b B2`: parity at output port `b`, pulled back to the arms.
pub fn parity_readout(total: usize) -> CMatrix {
    let b2 = BeamSplitter::Second.sector_unitary(total);
    b2.adjoint() * parity_b(total) * b2
}

/// `(a^dagger a)^2` on the sector.
pub fn kerr_hamiltonian(total: usize) -> CMatrix {
    diagonal(total, |n_a| Complex64::new((n_a * n_a) as f64, 0.0))
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity(total: usize) -> CMatrix {
        CMatrix::identity(total + 1, total + 1)
    }

    #[test]
    fn sector_unitaries_are_unitary() {
        for total in 0..=20 {
            for which in [BeamSplitter::First, BeamSplitter::Second] {
                let u = which.sector_unitary(total);
                assert!(max_abs(&(u.adjoint() * &u - identity(total))) <= 1e-12, "N = {total}");
            }
            let readout = parity_readout(total);
            assert!(max_abs(&(&readout * &readout - identity(total))) <= 1e-12);
            assert!(max_abs(&(readout.adjoint() - &readout)) <= 1e-12);
        }
    }

    #[test]
    fn angular_momentum_algebra_is_exact_in_sectors() {
        let i = Complex64::new(0.0, 1.0);
        for total in 0..=12 {
            let [jx, jy, jz] = angular_momentum(total);
            let commutator = &jx * &jy - &jy * &jx;
            assert!(max_abs(&(commutator - &jz * i)) <= 1e-12);
            let j = 0.5 * total as f64;
            let casimir = &jx * &jx + &jy * &jy + &jz * &jz;
            assert!(max_abs(&(casimir - identity(total) * Complex64::new(j * (j + 1.0), 0.0))) <= 1e-10);
        }
    }

    #[test]
    fn hong_ou_mandel() {
        let b1 = BeamSplitter::First.sector_unitary(2);
        let out = b1.column(1);
        assert!(out[1].norm() < 1e-14);
        assert!((out[0].norm() - 0.5f64.sqrt()).abs() < 1e-14);
        assert!((out[2].norm() - 0.5f64.sqrt()).abs() < 1e-14);
    }
}
