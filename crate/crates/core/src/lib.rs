//! Variational multi-phase elastoplasticity with linear kinematic hardening
//! and phase-transformation kinetics.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only numerics:
//!
//! - [`tensor`]: symmetric second-order tensors and isotropic stiffness in
//!   Voigt storage.
//! - [`phase`]: phase parameters, the volume-fraction / plastic-strain
//!   mixture state and the transition-rate matrix.
//! - [`energy`]: per-phase and relaxed (Reuss) free energies, stress and
//!   driving forces.
//! - [`evolution`]: yield functions, viscous evolution rates, phase
//!   initiation and the incremental update of one material point.
//! - [`matpoint`]: strain-controlled material-point programs.
//! - [`fem`]: plane-strain Q4 finite elements running the material model at
//!   every Gauss point.
//! - [`oracles`]: brute-force and closed-form reference computations used to
//!   verify the rest of the crate.
//!
//! File formats, configuration and the command-line front end live in the
//! `phasemix` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod energy;
pub mod error;
pub mod evolution;
pub mod fem;
pub mod matpoint;
pub mod oracles;
pub mod phase;
pub mod tensor;

pub use error::Error;
pub use evolution::{Material, ModelOptions, RegularizationParams, StepReport};
pub use phase::{MixtureState, PhaseParams, TransitionMatrix, TransitionParams};
pub use tensor::{Dim, Stiffness4, SymTensor2};

pub type Result<T, E = Error> = core::result::Result<T, E>;
