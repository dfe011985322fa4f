//! Ramsey spectroscopy with two-mode squeezed light.
//!
//! - [`fock`]: two-mode states on a truncated Fock grid, the beam splitter,
//!   normally ordered moments, photon parity and a dense matrix-exponential
//!   oracle.
//! - [`ramsey`]: the transit-broadened envelope and the perturbative
//!   single-/two-atom excitation probabilities for an arbitrary field state.
//! - [`analytic`]: closed-form fringe, visibility and moment laws.
//! - [`cli`]: fringe scans, visibility sweeps and the validation suite behind
//!   the `ramsey-squeeze` binary.

pub mod analytic;
pub mod cli;
pub mod fock;
pub mod ramsey;
