use alloc::string::String;
use core::fmt;

use crate::tensor::{Dim, SymTensor2};

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two tensors (or a tensor and a stiffness) live in different dimensions.
    DimensionMismatch { left: Dim, right: Dim },
    /// A scalar parameter is outside its admissible range.
    InvalidParameter { name: &'static str, value: f64 },
    /// A state or parameter set violates one of its invariants.
    InvalidState(String),
    /// A stiffness or compliance matrix could not be inverted.
    SingularMatrix,
    /// The initiation argmax did not reach the gradient tolerance.
    InitiationNotConverged {
        best: SymTensor2,
        gradient_norm: f64,
    },
    /// Brute-force search grid exceeds the point budget.
    GridTooLarge { points: f64 },
    /// The constrained relaxation minimization did not converge.
    RelaxationNotConverged { gradient_norm: f64 },
    InvalidMesh(String),
    /// Global stiffness is not positive definite on the free dofs.
    SingularSystem { equation: usize },
    /// Staggered global iteration failed even after sub-stepping.
    GlobalNotConverged { step: usize, increment: f64 },
    /// A driver aborted at the given step.
    StepFailed { step: usize, source: alloc::boxed::Box<Error> },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { left, right } => {
                write!(f, "dimension mismatch: {left:?} vs {right:?}")
            }
            Error::InvalidParameter { name, value } => {
                write!(f, "parameter `{name}` out of range: {value}")
            }
            Error::InvalidState(msg) => write!(f, "invalid state: {msg}"),
            Error::SingularMatrix => f.write_str("singular stiffness or compliance matrix"),
            Error::InitiationNotConverged { gradient_norm, .. } => write!(
                f,
                "phase initiation did not converge (gradient norm {gradient_norm:e})"
            ),
            Error::GridTooLarge { points } => {
                write!(f, "search grid too large ({points:e} points)")
            }
            Error::RelaxationNotConverged { gradient_norm } => write!(
                f,
                "constrained relaxation minimum did not converge (gradient norm {gradient_norm:e})"
            ),
            Error::InvalidMesh(msg) => write!(f, "invalid mesh: {msg}"),
            Error::SingularSystem { equation } => {
                write!(f, "singular global system at equation {equation} (insufficient boundary conditions?)")
            }
            Error::GlobalNotConverged { step, increment } => write!(
                f,
                "global iteration did not converge at step {step} (relative increment {increment:e})"
            ),
            Error::StepFailed { step, source } => write!(f, "step {step}: {source}"),
        }
    }
}

impl core::error::Error for Error {}
