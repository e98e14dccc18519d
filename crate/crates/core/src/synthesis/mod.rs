//! Supervisory controller synthesis and independent checks of its result.

mod engine;
mod normalize;
mod supervisor;
mod verify;

use thiserror::Error;

use crate::efa::EfaError;
use crate::symbolic::SymbolicError;

pub use engine::{synthesize, Engine, Synthesis, SynthesisOptions, SynthesisReport};
pub use normalize::{normalize, ControlProblem, RequirementClass};
pub use supervisor::{GuardStat, Supervisor};
pub use verify::{maximality_probe, verify_controlled, Counterexample, ProbeReport, VerifyReport};

#[derive(Debug, Error)]
pub enum SynthesisError {
    #[error(transparent)]
    Efa(#[from] EfaError),
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
    #[error("requirement automaton `{automaton}` is nondeterministic: two edges for `{event}` leave `{location}` with overlapping guards")]
    Nondeterministic {
        automaton: String,
        location: String,
        event: String,
    },
    #[error("supervisor is empty: no initial state can be kept safe, nonblocking and controllable")]
    Empty(Box<SynthesisReport>),
    #[error("{0}")]
    Unsupported(String),
}

impl SynthesisError {
    /// The explicit state budget was exceeded.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            SynthesisError::Efa(EfaError::Budget { .. }) | SynthesisError::Symbolic(SymbolicError::Budget { .. })
        )
    }
}
