//! Kerr-nonlinear phase estimation in a Mach-Zehnder interferometer.
//!
//! - [`special`]: log-domain combinatorics, photon-number distributions, truncation.
//! - [`signals`]: closed-form parity signals as exact cosine series.
//! - [`estimation`]: error propagation, Fisher information, sensitivity limits.
//! - [`oracle`]: brute-force truncated Fock-space simulator used to check all of the above.
//! - [`io`]: configuration, sweeps, figure tables and their CSV/JSON encoding.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod estimation;
pub mod io;
pub mod oracle;
pub mod signals;
pub mod special;
pub mod states;

pub use error::{Error, Result};
pub use states::InputStateSpec;
