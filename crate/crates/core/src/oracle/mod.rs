//! Brute-force two-mode Fock-space simulator.
//!
//! Every interferometer element conserves total photon number, so states and
//! operators are handled per `N`-photon sector where the matrices are exact.
//! The dense truncated grid in [`operator`] exists to check operator
//! identities on the full product basis.

pub mod operator;
pub mod pipeline;
pub mod sector;
pub mod spectrum;
pub mod state;

pub use operator::{
    beam_splitter_unitary, build_mode_operators, kerr_unitary, schwinger_identity_residual, OperatorMatrix,
};
pub use pipeline::{parity_expectation_output, qfi_fixed_sector, qfi_phase_averaged, ParityPipeline};
pub use sector::BeamSplitter;
pub use spectrum::{heff_sector_spectrum, Hamiltonian, SpectrumRecord};
pub use state::{prepare_input_state, Stage, TwoModeState};
