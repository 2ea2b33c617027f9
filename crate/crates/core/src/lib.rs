//! Ground-state simulator for two coupled spin-1 condensates.
//!
//! The crate covers the four layers needed to reproduce the phase structure
//! of the binary spin-1 mixture and its field-selection analysis:
//!
//! - [`fock`]: constrained two-species Fock sectors and matrix elements of
//!   normal-ordered operator monomials;
//! - [`model`]: the full six-mode Hamiltonian, the four-mode reduced models,
//!   and the two-site Hubbard benchmark;
//! - [`solve`]: dense and Lanczos ground-state solvers, even-parity
//!   resolution of quasi-degenerate doublets, and parallel sweeps;
//! - [`observe`]: number statistics, amplitude profiles, entanglement
//!   entropy, corner (GHZ) scores, profile classification, and analytic
//!   reference overlaps;
//! - [`zeeman`]: hyperfine Zeeman energies, exchange-channel detunings, and
//!   resonance fields.
//!
//! The `spinmix` binary wraps these in batch subcommands; see [`cli`].

pub mod cli;
pub mod fock;
pub mod model;
pub mod observe;
pub mod solve;
pub mod sparse;
pub mod zeeman;
