//! Work accounting for the exhaustive search routines.
//!
//! Every cut enumeration, branch-and-bound search and hitting-set search
//! charges the states it visits against a budget.  The default corresponds to
//! the documented desk-scale cap of roughly 10^8 enumerated states after
//! symmetry pruning; exceeding it yields an explicit "instance too large"
//! error instead of silent open-ended slowness.

use crate::error::{Error, Result};

/// Default number of search states an operation may visit.
pub const DEFAULT_WORK_BUDGET: u64 = 300_000_000;

/// Upper limit on the number of cuts a family may materialize.
pub const MAX_MATERIALIZED_CUTS: usize = 2_000_000;

/// A decrementing counter of search states.
#[derive(Clone, Debug)]
pub struct WorkBudget {
    remaining: u64,
    limit: u64,
}

impl Default for WorkBudget {
    fn default() -> Self {
        WorkBudget::new(DEFAULT_WORK_BUDGET)
    }
}

impl WorkBudget {
    pub fn new(limit: u64) -> Self {
        WorkBudget {
            remaining: limit,
            limit,
        }
    }

    pub fn remaining(&self) -> u64 {
        self.remaining
    }

    /// Charges `amount` states; fails once the budget is exhausted.
    pub fn charge(&mut self, amount: u64, what: &str) -> Result<()> {
        if self.remaining < amount {
            self.remaining = 0;
            return Err(Error::too_large(format!(
                "{what} exceeds the work budget of {} states",
                self.limit
            )));
        }
        self.remaining -= amount;
        Ok(())
    }

    /// Rejects up front an enumeration whose state count is known in advance.
    pub fn admit(&self, states: u128, what: &str) -> Result<()> {
        if states > self.remaining as u128 {
            return Err(Error::too_large(format!(
                "{what} needs {states} states, budget is {}",
                self.remaining
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charge_until_exhausted() {
        let mut b = WorkBudget::new(10);
        assert!(b.charge(6, "x").is_ok());
        assert!(b.charge(4, "x").is_ok());
        assert!(b.charge(1, "x").is_err());
    }

    #[test]
    fn admit_checks_without_spending() {
        let b = WorkBudget::new(100);
        assert!(b.admit(100, "x").is_ok());
        assert!(b.admit(101, "x").is_err());
        assert_eq!(b.remaining(), 100);
    }
}
