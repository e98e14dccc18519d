//! Symbolic state-space analysis with binary decision diagrams.

pub mod bdd;
pub mod encode;
pub mod expr;
pub mod fixpoint;

use num_bigint::BigUint;
use thiserror::Error;

pub use bdd::{Bdd, EffortMetrics, NodeStore, FALSE, TRUE};
pub use encode::{EncodeOptions, EventRel, Slot, SlotKind, SymbolicModel, VarOrder};
pub use fixpoint::{Limits, ReachStats, Relation, SymbolicSupervisor};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SymbolicError {
    #[error("state encoding needs {bits} bits, limit is {limit}")]
    DomainTooLarge { bits: u32, limit: u32 },
    #[error("node budget exceeded: {nodes} live nodes, limit {limit}")]
    Budget { nodes: usize, limit: usize },
    #[error("expression `{0}` has the wrong sort")]
    Type(String),
    #[error("arithmetic overflow in `{0}`")]
    Overflow(String),
    #[error("state set belongs to store {found}, expected {expected}")]
    StoreMismatch { expected: u32, found: u32 },
}

/// A state predicate tagged with the store that owns it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StateSet {
    root: Bdd,
    store: u32,
}

impl StateSet {
    pub fn new(sm: &SymbolicModel<'_>, root: Bdd) -> StateSet {
        StateSet {
            root,
            store: sm.store.id(),
        }
    }

    /// The underlying node, if `sm` still owns it.
    pub fn root(&self, sm: &SymbolicModel<'_>) -> Result<Bdd, SymbolicError> {
        if self.store != sm.store.id() {
            return Err(SymbolicError::StoreMismatch {
                expected: sm.store.id(),
                found: self.store,
            });
        }
        Ok(self.root)
    }

    pub fn count(&self, sm: &SymbolicModel<'_>) -> Result<BigUint, SymbolicError> {
        Ok(sm.count(self.root(sm)?))
    }

    pub fn and(&self, other: &StateSet, sm: &mut SymbolicModel<'_>) -> Result<StateSet, SymbolicError> {
        let (a, b) = (self.root(sm)?, other.root(sm)?);
        let r = sm.store.and(a, b);
        Ok(StateSet::new(sm, r))
    }

    pub fn or(&self, other: &StateSet, sm: &mut SymbolicModel<'_>) -> Result<StateSet, SymbolicError> {
        let (a, b) = (self.root(sm)?, other.root(sm)?);
        let r = sm.store.or(a, b);
        Ok(StateSet::new(sm, r))
    }

    pub fn is_empty(&self, sm: &SymbolicModel<'_>) -> Result<bool, SymbolicError> {
        Ok(self.root(sm)? == FALSE)
    }
}

/// `n` in scientific notation with `digits` significant digits, e.g. `7.7e20`.
pub fn scientific(n: &BigUint, digits: usize) -> String {
    let s = n.to_string();
    let digits = digits.max(1);
    if s.len() <= digits {
        return s;
    }
    let mut head: u64 = s[..digits].parse().unwrap_or(0);
    let mut exp = s.len() - 1;
    if s.as_bytes()[digits] >= b'5' {
        head += 1;
        if head.to_string().len() > digits {
            head /= 10;
            exp += 1;
        }
    }
    let h = head.to_string();
    if digits == 1 {
        format!("{h}e{exp}")
    } else {
        format!("{}.{}e{exp}", &h[..1], &h[1..])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scientific_rounds_half_up() {
        let n = |x: u128| BigUint::from(x);
        assert_eq!(scientific(&n(134_217_728), 2), "1.3e8");
        assert_eq!(scientific(&n(996), 2), "1.0e3");
        assert_eq!(scientific(&n(42), 2), "42");
        assert_eq!(scientific(&n(770_000_000_000_000_000_000), 2), "7.7e20");
        assert_eq!(scientific(&n(95), 1), "1e2");
    }
}
