//! The four probe-state families and their photon-number bookkeeping.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Selects one of the input-state families.
///
/// Twin-Fock and two-mode squeezed vacuum states enter the interferometer
/// before the first beam splitter. NOON and entangled coherent states are
/// specified as probe states, i.e. as they appear between the beam splitters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum InputStateSpec {
    /// `|n, n>`, total photon number `2n`.
    #[serde(rename = "tf")]
    TwinFock { n: u32 },
    /// Two-mode squeezed vacuum with mean total photon number `nbar`.
    #[serde(rename = "tmsv")]
    Tmsv { nbar: f64 },
    /// `(|N,0> + e^{i chi}|0,N>)/sqrt(2)`.
    #[serde(rename = "noon")]
    Noon { n: u32 },
    /// Entangled coherent state with real amplitude `alpha`.
    #[serde(rename = "ec")]
    EntangledCoherent { alpha: f64 },
}

impl InputStateSpec {
    pub fn tag(&self) -> &'static str {
        match self {
            InputStateSpec::TwinFock { .. } => "tf",
            InputStateSpec::Tmsv { .. } => "tmsv",
            InputStateSpec::Noon { .. } => "noon",
            InputStateSpec::EntangledCoherent { .. } => "ec",
        }
    }

    /// True for the families whose total photon number fluctuates.
    pub fn is_fluctuating(&self) -> bool {
        matches!(
            self,
            InputStateSpec::Tmsv { .. } | InputStateSpec::EntangledCoherent { .. }
        )
    }

    /// Mean total photon number of the (phase-averaged) state.
    pub fn mean_photon_number(&self) -> f64 {
        match *self {
            InputStateSpec::TwinFock { n } => 2.0 * f64::from(n),
            InputStateSpec::Tmsv { nbar } => nbar,
            InputStateSpec::Noon { n } => f64::from(n),
            InputStateSpec::EntangledCoherent { alpha } => ec_mean_photon_number(alpha),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            InputStateSpec::Tmsv { nbar } if !(nbar.is_finite() && nbar >= 0.0) => {
                Err(Error::invalid("nbar", format!("must be finite and >= 0, got {nbar}")))
            }
            InputStateSpec::EntangledCoherent { alpha } if !(alpha.is_finite() && alpha > 0.0) => {
                Err(Error::invalid("alpha", format!("must be finite and > 0, got {alpha}")))
            }
            _ => Ok(()),
        }
    }

    /// The member of this family whose mean total photon number is `nbar`.
    pub fn with_mean_photon_number(&self, nbar: f64) -> Result<Self> {
        if !(nbar.is_finite() && nbar >= 0.0) {
            return Err(Error::invalid("nbar", format!("must be finite and >= 0, got {nbar}")));
        }
        let integral = |value: f64, what: &str| -> Result<u32> {
            if value.fract() == 0.0 && value <= f64::from(u32::MAX) {
                Ok(value as u32)
            } else {
                Err(Error::invalid(
                    "nbar",
                    format!("{what} states need an integer photon count, got nbar = {nbar}"),
                ))
            }
        };
        Ok(match self {
            InputStateSpec::TwinFock { .. } => InputStateSpec::TwinFock {
                n: integral(nbar / 2.0, "tf")?,
            },
            InputStateSpec::Tmsv { .. } => InputStateSpec::Tmsv { nbar },
            InputStateSpec::Noon { .. } => InputStateSpec::Noon {
                n: integral(nbar, "noon")?,
            },
            InputStateSpec::EntangledCoherent { .. } => {
                if nbar == 0.0 {
                    return Err(Error::invalid("nbar", "ec states need nbar > 0"));
                }
                InputStateSpec::EntangledCoherent {
                    alpha: ec_alpha_for_mean(nbar).sqrt(),
                }
            }
        })
    }
}

impl fmt::Display for InputStateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputStateSpec::TwinFock { n } => write!(f, "tf(n={n})"),
            InputStateSpec::Tmsv { nbar } => write!(f, "tmsv(nbar={nbar})"),
            InputStateSpec::Noon { n } => write!(f, "noon(n={n})"),
            InputStateSpec::EntangledCoherent { alpha } => write!(f, "ec(alpha={alpha})"),
        }
    }
}

/// `2 N_alpha^2 = 1 / (1 + e^{-alpha^2})`, the weight multiplying every
/// `|c_n|^2` in the phase-averaged entangled coherent state.
pub fn ec_twice_norm_sq(alpha: f64) -> f64 {
    1.0 / (1.0 + (-alpha * alpha).exp())
}

/// Mean total photon number `alpha^2 / (1 + e^{-alpha^2})`.
pub fn ec_mean_photon_number(alpha: f64) -> f64 {
    alpha * alpha * ec_twice_norm_sq(alpha)
}

/// Inverts [`ec_mean_photon_number`]: returns `alpha^2` for a target mean.
pub(crate) fn ec_alpha_for_mean(nbar: f64) -> f64 {
    // x / (1 + e^-x) is increasing and lies in [x/2, x], so x in [nbar, 2 nbar].
    let f = |x: f64| x / (1.0 + (-x).exp()) - nbar;
    let (mut lo, mut hi) = (nbar, 2.0 * nbar);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ec_mean_inverse_roundtrip() {
        for nbar in [0.01, 0.5, 1.0, 2.0, 36.0, 1000.0] {
            let alpha = ec_alpha_for_mean(nbar).sqrt();
            let back = ec_mean_photon_number(alpha);
            assert!((back - nbar).abs() <= 1e-12 * nbar.max(1.0), "{nbar} -> {back}");
        }
    }

    #[test]
    fn family_rescaling() {
        let tf = InputStateSpec::TwinFock { n: 1 };
        assert_eq!(
            tf.with_mean_photon_number(6.0).unwrap(),
            InputStateSpec::TwinFock { n: 3 }
        );
        assert!(tf.with_mean_photon_number(3.0).is_err());
        let noon = InputStateSpec::Noon { n: 1 };
        assert_eq!(
            noon.with_mean_photon_number(4.0).unwrap(),
            InputStateSpec::Noon { n: 4 }
        );
    }

    #[test]
    fn validation() {
        assert!(InputStateSpec::Tmsv { nbar: -1.0 }.validate().is_err());
        assert!(InputStateSpec::EntangledCoherent { alpha: 0.0 }.validate().is_err());
        assert!(InputStateSpec::Tmsv { nbar: 0.0 }.validate().is_ok());
    }
}
