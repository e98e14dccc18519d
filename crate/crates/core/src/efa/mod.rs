//! Explicit semantics: synchronous composition and state-space exploration.

mod compose;
mod dot;
mod explore;

use thiserror::Error;

use crate::model::EvalError;

pub use compose::{Choice, Composition, Enabled};
pub use dot::to_dot;
pub use explore::{explore, explore_from, ExploreOptions, ExploreStats, Transition, TransitionSystem};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum EfaError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("update of `{var}` to {value} on `{event}` in `{automaton}` leaves its domain")]
    OutOfRange {
        var: String,
        value: i64,
        event: String,
        automaton: String,
    },
    #[error("state space too large (more than {limit} states), use the symbolic engine")]
    Budget { limit: usize },
    #[error("requirement automaton `{automaton}` has several enabled edges for `{event}` at {state}")]
    Nondeterministic {
        automaton: String,
        event: String,
        state: String,
    },
}
