//! Dense operators on the truncated product basis `|n_a, n_b>`,
//! `0 <= n_a, n_b <= n_max`, flattened as `n_a (n_max + 1) + n_b`.
//!
//! Ladder operators are cut at `n_max`, which corrupts matrix elements near
//! the top of the grid; checks are restricted to an interior block.

use num_complex::Complex64;

use super::sector::{self, BeamSplitter, CMatrix};
use crate::error::{Error, Result};

/// Levels below `n_max` excluded from interior residual checks.
pub const GUARD_BAND: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub n_max: usize,
    pub entries: CMatrix,
    pub hermitian: bool,
}

impl OperatorMatrix {
    fn dim(n_max: usize) -> usize {
        (n_max + 1) * (n_max + 1)
    }

    pub fn index(n_max: usize, n_a: usize, n_b: usize) -> usize {
        n_a * (n_max + 1) + n_b
    }

    pub fn levels(n_max: usize, index: usize) -> (usize, usize) {
        (index / (n_max + 1), index % (n_max + 1))
    }

    pub fn identity(n_max: usize) -> Self {
        Self {
            n_max,
            entries: CMatrix::identity(Self::dim(n_max), Self::dim(n_max)),
            hermitian: true,
        }
    }

    fn diagonal(n_max: usize, f: impl Fn(usize, usize) -> Complex64, hermitian: bool) -> Self {
        let mut entries = CMatrix::zeros(Self::dim(n_max), Self::dim(n_max));
        for n_a in 0..=n_max {
            for n_b in 0..=n_max {
                let i = Self::index(n_max, n_a, n_b);
                entries[(i, i)] = f(n_a, n_b);
            }
        }
        Self {
            n_max,
            entries,
            hermitian,
        }
    }

    pub fn adjoint(&self) -> Self {
        Self {
            n_max: self.n_max,
            entries: self.entries.adjoint(),
            hermitian: self.hermitian,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n_max, other.n_max, "operators live on different grids");
        Self {
            n_max: self.n_max,
            entries: &self.entries * &other.entries,
            hermitian: false,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n_max, other.n_max, "operators live on different grids");
        Self {
            n_max: self.n_max,
            entries: &self.entries + &other.entries,
            hermitian: self.hermitian && other.hermitian,
        }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            n_max: self.n_max,
            entries: &self.entries * factor,
            hermitian: self.hermitian && factor.im == 0.0,
        }
    }

    /// Basis indices with `n_a + n_b <= n_max - guard`.
    pub fn interior_indices(&self, guard: usize) -> Vec<usize> {
        let limit = self.n_max.saturating_sub(guard);
        (0..Self::dim(self.n_max))
            .filter(|&i| {
                let (n_a, n_b) = Self::levels(self.n_max, i);
                n_a + n_b <= limit
            })
            .collect()
    }

    /// Largest `|self - other|` entry on the interior block.
    pub fn interior_residual(&self, other: &Self, guard: usize) -> f64 {
        let idx = self.interior_indices(guard);
        let mut worst = 0.0_f64;
        for &r in &idx {
            for &c in &idx {
                worst = worst.max((self.entries[(r, c)] - other.entries[(r, c)]).norm());
            }
        }
        worst
    }

    /// Matrix element `<n_a', n_b'| self |n_a, n_b>`.
    pub fn element(&self, row: (usize, usize), col: (usize, usize)) -> Complex64 {
        self.entries[(
            Self::index(self.n_max, row.0, row.1),
            Self::index(self.n_max, col.0, col.1),
        )]
    }
}

/// Ladder, number and Schwinger operators on the truncated grid.
#[derive(Debug, Clone)]
pub struct ModeOperators {
    pub a: OperatorMatrix,
    pub a_dag: OperatorMatrix,
    pub b: OperatorMatrix,
    pub b_dag: OperatorMatrix,
    pub total_number: OperatorMatrix,
    pub jx: OperatorMatrix,
    pub jy: OperatorMatrix,
    pub jz: OperatorMatrix,
}

pub fn build_mode_operators(n_max: usize) -> Result<ModeOperators> {
    if n_max < 1 {
        return Err(Error::invalid("n_max", "must be >= 1"));
    }
    let dim = OperatorMatrix::dim(n_max);
    let mut a = CMatrix::zeros(dim, dim);
    let mut b = CMatrix::zeros(dim, dim);
    for n_a in 0..=n_max {
        for n_b in 0..=n_max {
            let col = OperatorMatrix::index(n_max, n_a, n_b);
            if n_a > 0 {
                a[(OperatorMatrix::index(n_max, n_a - 1, n_b), col)] = Complex64::new((n_a as f64).sqrt(), 0.0);
            }
            if n_b > 0 {
                b[(OperatorMatrix::index(n_max, n_a, n_b - 1), col)] = Complex64::new((n_b as f64).sqrt(), 0.0);
            }
        }
    }
    let wrap = |entries: CMatrix, hermitian| OperatorMatrix {
        n_max,
        entries,
        hermitian,
    };
    let a_dag = a.adjoint();
    let b_dag = b.adjoint();
    let half = Complex64::new(0.5, 0.0);
    let jx = (&a_dag * &b + &a * &b_dag) * half;
    let jy = (&a_dag * &b - &a * &b_dag) * Complex64::new(0.0, -0.5);
    let jz = (&a_dag * &a - &b_dag * &b) * half;
    let total_number = &a_dag * &a + &b_dag * &b;
    Ok(ModeOperators {
        a: wrap(a, false),
        a_dag: wrap(a_dag, false),
        b: wrap(b, false),
        b_dag: wrap(b_dag, false),
        total_number: wrap(total_number, true),
        jx: wrap(jx, true),
        jy: wrap(jy, true),
        jz: wrap(jz, true),
    })
}

/// Beam splitter on the grid, assembled from exact per-sector exponentials
/// for every sector `N <= n_max`; states above the last complete sector are
/// left untouched.
pub fn beam_splitter_unitary(which: BeamSplitter, n_max: usize) -> Result<OperatorMatrix> {
    if n_max < 1 {
        return Err(Error::invalid("n_max", "must be >= 1"));
    }
    let mut op = OperatorMatrix::identity(n_max);
    op.hermitian = false;
    for total in 0..=n_max {
        let block = which.sector_unitary(total);
        for row in 0..=total {
            for col in 0..=total {
                let r = OperatorMatrix::index(n_max, row, total - row);
                let c = OperatorMatrix::index(n_max, col, total - col);
                op.entries[(r, c)] = block[(row, col)];
            }
        }
    }
    Ok(op)
}

/// Phase shift `exp(-i phi (a^dagger a)^k)` on the lower arm.
pub fn kerr_unitary(phi: f64, k: u32, n_max: usize) -> OperatorMatrix {
    OperatorMatrix::diagonal(
        n_max,
        |n_a, _| Complex64::from_polar(1.0, -phi * (n_a as f64).powi(k as i32)),
        false,
    )
}

/// Parity `(-1)^{b^dagger b}` of the output port.
pub fn parity_operator(n_max: usize) -> OperatorMatrix {
    OperatorMatrix::diagonal(
        n_max,
        |_, n_b| Complex64::new(if n_b % 2 == 0 { 1.0 } else { -1.0 }, 0.0),
        true,
    )
}

/// Largest entry of `(a^dagger a)^2 - [N^2/4 + J_z^2 + N J_z]` on the interior block.
pub fn schwinger_identity_residual(n_max: usize) -> Result<f64> {
    if n_max < 2 {
        return Err(Error::invalid("n_max", "must be >= 2"));
    }
    let ops = build_mode_operators(n_max)?;
    let number_a = ops.a_dag.mul(&ops.a);
    let kerr = number_a.mul(&number_a);
    let n = &ops.total_number;
    let split = n
        .mul(n)
        .scale(Complex64::new(0.25, 0.0))
        .add(&ops.jz.mul(&ops.jz))
        .add(&n.mul(&ops.jz));
    Ok(kerr.interior_residual(&split, GUARD_BAND.min(n_max)))
}

/// The same identity checked on the exact `N`-photon block.
pub fn sector_schwinger_residual(total: usize) -> f64 {
    let [_, _, jz] = sector::angular_momentum(total);
    let n = total as f64;
    let identity = CMatrix::identity(total + 1, total + 1);
    let split = identity * Complex64::new(0.25 * n * n, 0.0) + &jz * &jz + &jz * Complex64::new(n, 0.0);
    sector::max_abs(&(sector::kerr_hamiltonian(total) - split))
}
