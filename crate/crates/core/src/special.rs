//! Combinatorial kernels, photon-number distributions and truncation rules.
//!
//! Binomials are evaluated in the log domain: `C(2n, n)` leaves the `f64`
//! range near `n = 510`, well inside the photon numbers the sweeps reach.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::states::InputStateSpec;

/// `ln(k!)` for `k = 0..=k_max`.
#[derive(Debug, Clone)]
pub struct LogFactorialTable {
    values: Vec<f64>,
}

impl LogFactorialTable {
    pub fn new(k_max: usize) -> Self {
        let mut values = Vec::with_capacity(k_max + 1);
        values.push(0.0);
        // Kahan-compensated running sum of ln k.
        let (mut sum, mut carry) = (0.0_f64, 0.0_f64);
        for k in 1..=k_max {
            let y = (k as f64).ln() - carry;
            let t = sum + y;
            carry = (t - sum) - y;
            sum = t;
            values.push(sum);
        }
        Self { values }
    }

    pub fn k_max(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `ln(k!)`, falling back to the Stirling series past the end of the table.
    pub fn get(&self, k: usize) -> f64 {
        match self.values.get(k) {
            Some(&v) => v,
            None => stirling_log_factorial(k as f64),
        }
    }
}

fn stirling_log_factorial(k: f64) -> f64 {
    let inv = 1.0 / k;
    let inv2 = inv * inv;
    let series = inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
    k * k.ln() - k + 0.5 * (2.0 * std::f64::consts::PI * k).ln() + series
}

const SHARED_TABLE_LEN: usize = 1 << 16;

fn shared_table() -> &'static LogFactorialTable {
    static TABLE: OnceLock<LogFactorialTable> = OnceLock::new();
    TABLE.get_or_init(|| LogFactorialTable::new(SHARED_TABLE_LEN))
}

/// `ln(k!)` from the process-wide table.
pub fn log_factorial(k: usize) -> f64 {
    shared_table().get(k)
}

/// `ln C(n, k)`; negative infinity when `k < 0` or `k > n`.
pub fn log_binomial(n: u64, k: i64) -> f64 {
    if k < 0 || k as u64 > n {
        return f64::NEG_INFINITY;
    }
    let (n, k) = (n as usize, k as usize);
    log_factorial(n) - log_factorial(k) - log_factorial(n - k)
}

/// Ratio `r = nbar / (nbar + 2)` of the two-mode squeezed vacuum pair distribution.
pub fn geometric_ratio(nbar: f64) -> f64 {
    nbar / (nbar + 2.0)
}

/// `sum_n p_n n^order` for the pair distribution `p_n = (1 - r) r^n`,
/// in closed form.
pub fn geometric_moment(nbar: f64, order: u32) -> Result<f64> {
    if !(nbar.is_finite() && nbar >= 0.0) {
        return Err(Error::invalid("nbar", format!("must be finite and >= 0, got {nbar}")));
    }
    let x = nbar;
    Ok(match order {
        1 => x / 2.0,
        2 => (x * x + x) / 2.0,
        3 => (3.0 * x.powi(3) + 6.0 * x * x + 2.0 * x) / 4.0,
        4 => (3.0 * x.powi(4) + 9.0 * x.powi(3) + 7.0 * x * x + x) / 2.0,
        _ => return Err(Error::invalid("order", format!("must be in 1..=4, got {order}"))),
    })
}

/// `ln` of the Poisson(`lambda`) probability of `n`.
pub fn poisson_log_pmf(lambda: f64, n: usize) -> f64 {
    if lambda == 0.0 {
        return if n == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    -lambda + n as f64 * lambda.ln() - log_factorial(n)
}

/// Cutoff governing every infinite photon-number sum.
///
/// `n_max` indexes the distribution being truncated: the pair index `n` of
/// `|n, n>` for squeezed vacuum, the NOON order `n` for entangled coherent
/// states, or the fixed photon label for the fixed-number families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    pub n_max: usize,
    pub tail_epsilon: f64,
}

impl TruncationPolicy {
    /// A policy for a fixed-number state whose label is at most `n_max`;
    /// nothing is discarded.
    pub fn exact(n_max: usize) -> Self {
        Self {
            n_max,
            tail_epsilon: f64::MIN_POSITIVE,
        }
    }

    /// The cutoff appropriate for any state family.
    pub fn for_state(spec: &InputStateSpec, tail_epsilon: f64) -> Result<Self> {
        match *spec {
            InputStateSpec::TwinFock { n } | InputStateSpec::Noon { n } => {
                check_epsilon(tail_epsilon)?;
                Ok(Self::exact(n as usize))
            }
            _ => truncation_cutoff(spec, tail_epsilon),
        }
    }
}

fn check_epsilon(tail_epsilon: f64) -> Result<()> {
    if tail_epsilon > 0.0 && tail_epsilon < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(
            "tail_epsilon",
            format!("must lie in (0, 1), got {tail_epsilon}"),
        ))
    }
}

/// Smallest cutoff whose discarded probability mass is at most `tail_epsilon`.
///
/// Squeezed vacuum uses the closed-form geometric tail `r^(n_max+1)`; entangled
/// coherent states sum the Poisson(`alpha^2`) distribution until a rigorous
/// bound on the remaining tail drops below `tail_epsilon`.
pub fn truncation_cutoff(spec: &InputStateSpec, tail_epsilon: f64) -> Result<TruncationPolicy> {
    check_epsilon(tail_epsilon)?;
    spec.validate()?;
    let n_max = match *spec {
        InputStateSpec::Tmsv { nbar } => geometric_cutoff(nbar, tail_epsilon),
        InputStateSpec::EntangledCoherent { alpha } => poisson_cutoff(alpha * alpha, tail_epsilon),
        InputStateSpec::TwinFock { .. } | InputStateSpec::Noon { .. } => {
            return Err(Error::UnsupportedState {
                operation: "truncation_cutoff",
                state: spec.tag(),
            })
        }
    };
    Ok(TruncationPolicy { n_max, tail_epsilon })
}

fn geometric_cutoff(nbar: f64, eps: f64) -> usize {
    if nbar == 0.0 {
        return 0;
    }
    let r = geometric_ratio(nbar);
    let estimate = (eps.ln() / r.ln()).ceil() - 1.0;
    let mut n = estimate.max(0.0) as usize;
    // The logarithm ratio can land one step off either way in floating point.
    let tail = |n: usize| ((n + 1) as f64 * r.ln()).exp();
    while n > 0 && tail(n - 1) <= eps {
        n -= 1;
    }
    while tail(n) > eps {
        n += 1;
    }
    n
}

fn poisson_cutoff(lambda: f64, eps: f64) -> usize {
    if lambda == 0.0 {
        return 0;
    }
    let mut head = 0.0_f64;
    let mut carry = 0.0_f64;
    let mut n = 0usize;
    loop {
        let p = poisson_log_pmf(lambda, n).exp();
        let y = p - carry;
        let t = head + y;
        carry = (t - head) - y;
        head = t;
        let next = poisson_log_pmf(lambda, n + 1).exp();
        let ratio = lambda / (n + 2) as f64;
        // Past the mode the tail is dominated by a geometric series.
        let bound = if ratio < 1.0 {
            next / (1.0 - ratio)
        } else {
            (1.0 - head).max(next)
        };
        if bound <= eps {
            return n;
        }
        n += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn exact_factorial(k: u64) -> u64 {
        (1..=k).product()
    }

    fn exact_binomial(n: u64, k: u64) -> u128 {
        let mut c: u128 = 1;
        for i in 0..k {
            c = c * u128::from(n - i) / u128::from(i + 1);
        }
        c
    }

    #[test]
    fn table_matches_integer_factorials() {
        let table = LogFactorialTable::new(40);
        assert_eq!(table.values()[0], 0.0);
        for k in 0..=20u64 {
            let exact = exact_factorial(k) as f64;
            let got = table.values()[k as usize].exp();
            assert!(((got - exact) / exact).abs() <= 1e-13, "k = {k}");
        }
        for k in 2..table.values().len() {
            assert!(table.values()[k] > table.values()[k - 1]);
        }
    }

    #[test]
    fn stirling_tail_is_continuous() {
        let table = LogFactorialTable::new(2000);
        for k in [200usize, 1000, 2000] {
            let rel = (stirling_log_factorial(k as f64) - table.get(k)) / table.get(k);
            assert!(rel.abs() < 1e-14, "k = {k}: {rel}");
        }
        let short = LogFactorialTable::new(10);
        assert!((short.get(500) - table.get(500)).abs() / table.get(500) < 1e-14);
    }

    #[test]
    fn log_binomial_examples() {
        assert_eq!(log_binomial(0, 0), 0.0);
        assert!((log_binomial(4, 2) - 6f64.ln()).abs() < 1e-15);
        assert_eq!(log_binomial(2, 3), f64::NEG_INFINITY);
        assert_eq!(log_binomial(2, -1), f64::NEG_INFINITY);
        for n in 0..=60u64 {
            for k in 0..=n {
                let exact = exact_binomial(n, k) as f64;
                let got = log_binomial(n, k as i64).exp();
                assert!(((got - exact) / exact).abs() < 1e-12, "C({n},{k})");
            }
        }
    }

    #[test]
    fn pascal_rule() {
        for n in 1..=60u64 {
            for k in 0..=n as i64 {
                let lhs = log_binomial(n, k).exp();
                let rhs = log_binomial(n - 1, k - 1).exp() + log_binomial(n - 1, k).exp();
                assert!(((lhs - rhs) / lhs).abs() <= 1e-12, "n={n} k={k}");
            }
        }
    }

    fn brute_geometric_moment(nbar: f64, order: i32) -> f64 {
        let r = geometric_ratio(nbar);
        let mut sum = 0.0;
        let mut p = 1.0 - r;
        let mut n = 0.0_f64;
        // Stop once the remaining tail is below 1e-14 of the accumulated sum.
        loop {
            sum += p * n.powi(order);
            n += 1.0;
            p *= r;
            if p * (n + 50.0).powi(order) < 1e-17 * sum.max(1e-300) {
                break;
            }
        }
        sum
    }

    #[test]
    fn geometric_moment_examples() {
        for order in 1..=4 {
            assert_eq!(geometric_moment(0.0, order).unwrap(), 0.0);
        }
        assert!((geometric_moment(2.0, 4).unwrap() - 75.0).abs() < 1e-12);
        assert!((geometric_moment(1.0, 1).unwrap() - 0.5).abs() < 1e-15);
        assert!((brute_geometric_moment(2.0, 4) - 75.0).abs() < 1e-10);
        assert!((brute_geometric_moment(1.0, 1) - 0.5).abs() < 1e-12);
        assert!(geometric_moment(1.0, 0).is_err());
        assert!(geometric_moment(1.0, 5).is_err());
        assert!(geometric_moment(-1.0, 2).is_err());
    }

    #[test]
    fn geometric_moment_matches_series() {
        for nbar in [0.5, 1.0, 2.0, 4.0, 8.0] {
            for order in 1..=4u32 {
                let closed = geometric_moment(nbar, order).unwrap();
                let series = brute_geometric_moment(nbar, order as i32);
                assert!(((closed - series) / closed).abs() <= 1e-10, "nbar={nbar} m={order}");
            }
        }
    }

    #[test]
    fn cutoff_examples() {
        let vac = truncation_cutoff(&InputStateSpec::Tmsv { nbar: 0.0 }, 1e-12).unwrap();
        assert_eq!(vac.n_max, 0);
        let two = truncation_cutoff(&InputStateSpec::Tmsv { nbar: 2.0 }, 1e-12).unwrap();
        assert_eq!(two.n_max, 39);
        assert!(truncation_cutoff(&InputStateSpec::Tmsv { nbar: 2.0 }, 0.0).is_err());
        assert!(truncation_cutoff(&InputStateSpec::Tmsv { nbar: 2.0 }, 1.0).is_err());
        assert!(truncation_cutoff(&InputStateSpec::TwinFock { n: 2 }, 1e-6).is_err());
        assert!(truncation_cutoff(&InputStateSpec::Noon { n: 2 }, 1e-6).is_err());
    }

    #[test]
    fn poisson_cutoff_is_minimal() {
        for lambda in [0.01_f64, 1.0, 4.0, 36.0, 400.0] {
            for eps in [1e-6, 1e-12] {
                let n = poisson_cutoff(lambda, eps);
                let tail: f64 = (n + 1..n + 2000).map(|k| poisson_log_pmf(lambda, k).exp()).sum();
                assert!(tail <= eps, "lambda={lambda} eps={eps}");
                if n > 0 {
                    let longer: f64 = (n..n + 2000).map(|k| poisson_log_pmf(lambda, k).exp()).sum();
                    // The running bound is conservative by at most a few terms.
                    assert!(longer > eps * 1e-3, "lambda={lambda} eps={eps} n={n}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn retained_mass(nbar in 0.0f64..50.0, log_eps in -14.0f64..-1.0) {
            let eps = 10f64.powf(log_eps);
            let policy = truncation_cutoff(&InputStateSpec::Tmsv { nbar }, eps).unwrap();
            let r = geometric_ratio(nbar);
            let kept: f64 = (0..=policy.n_max).map(|n| (1.0 - r) * r.powi(n as i32)).sum();
            prop_assert!(kept >= 1.0 - eps - 1e-14);
            if policy.n_max > 0 {
                prop_assert!(r.powi(policy.n_max as i32) > eps);
            }
        }
    }
}
