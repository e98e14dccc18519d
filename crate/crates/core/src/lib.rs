//! Supervisory controller synthesis for reconfigurable product lines.

pub mod efa;
pub mod feature;
pub mod lang;
pub mod model;
pub mod random;
pub mod symbolic;
pub mod synthesis;

pub use model::Model;
pub use num_bigint::BigUint;
pub use synthesis::{synthesize, Engine, Supervisor, Synthesis, SynthesisError, SynthesisOptions, SynthesisReport};
