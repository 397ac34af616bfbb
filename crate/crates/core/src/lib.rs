//! Noise and disturbance in quantum measurements, accuracy limits imposed by
//! additive conservation laws, and gate-error bounds for angular-momentum
//! conserving implementations of the Hadamard gate.
//!
//! The crate is organised bottom-up:
//!
//! - [`qcore`]: dense operators, states, tensor products, moments.
//! - [`measurement`]: indirect measurement models, rms noise `ε(A)` and
//!   disturbance `η(B)`, and checkers for the Robertson, Heisenberg-type and
//!   universal noise-disturbance relations.
//! - [`conservation`]: additive conserved charges, the conservation and
//!   Yanase conditions, and the conservation-law lower bound on `ε(A)²`.
//! - [`gates`]: Hadamard-gate scenarios with spin and bosonic ancillas, the
//!   analytic error-probability bounds and truncated Fock-space states.
//! - [`optimizer`]: exact parametrization of charge-commuting unitaries,
//!   multi-start minimization of the gate error, and a randomized search for
//!   models that break the Heisenberg-type relation.
//! - [`cli`]: batch runners behind the `qmeasure` binary.
//!
//! ħ = 1 throughout; spin components are `S_i = σ_i / 2`.

pub mod cli;
pub mod conservation;
pub mod error;
pub mod gates;
pub mod measurement;
pub mod optimizer;
pub mod qcore;
pub mod random;

pub use error::{Error, Result};
