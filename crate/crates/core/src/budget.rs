//! Node-count search budgets.
//!
//! Every exponential search in the crate takes a [`Budget`]. Budgets count
//! search nodes, never wall-clock time, so results are machine independent.

use crate::error::Error;

/// A node-count limit. `Budget::unlimited()` never runs out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    limit: Option<u64>,
    used: u64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget {
            limit: Some(limit),
            used: 0,
        }
    }

    pub fn unlimited() -> Self {
        Budget {
            limit: None,
            used: 0,
        }
    }

    pub fn from_option(limit: Option<u64>) -> Self {
        Budget { limit, used: 0 }
    }

    /// Consumes one node. Returns `false` once the limit has been passed.
    #[inline]
    pub fn tick(&mut self) -> bool {
        self.used += 1;
        match self.limit {
            Some(l) => self.used <= l,
            None => true,
        }
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn limit(&self) -> Option<u64> {
        self.limit
    }

    pub fn exhausted(&self) -> bool {
        matches!(self.limit, Some(l) if self.used > l)
    }

    pub(crate) fn error(&self, stage: &str) -> Error {
        Error::BudgetExhausted {
            stage: stage.to_string(),
            limit: self.limit.unwrap_or(u64::MAX),
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::unlimited()
    }
}

/// Result of a decision search that may run out of budget.
///
/// Budget exhaustion is kept distinct from a negative answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome<T> {
    Found(T),
    Infeasible,
    Exhausted { nodes: u64 },
}

impl<T> Outcome<T> {
    pub fn found(self) -> Option<T> {
        match self {
            Outcome::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn as_found(&self) -> Option<&T> {
        match self {
            Outcome::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, Outcome::Found(_))
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(self, Outcome::Infeasible)
    }

    pub fn is_exhausted(&self) -> bool {
        matches!(self, Outcome::Exhausted { .. })
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Outcome<U> {
        match self {
            Outcome::Found(t) => Outcome::Found(f(t)),
            Outcome::Infeasible => Outcome::Infeasible,
            Outcome::Exhausted { nodes } => Outcome::Exhausted { nodes },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn limit_is_inclusive() {
        let mut b = Budget::new(2);
        assert!(b.tick());
        assert!(b.tick());
        assert!(!b.tick());
        assert!(b.exhausted());
    }

    #[test]
    fn unlimited_never_exhausts() {
        let mut b = Budget::unlimited();
        for _ in 0..10_000 {
            assert!(b.tick());
        }
        assert_eq!(b.used(), 10_000);
    }
}
