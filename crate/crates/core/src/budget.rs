use crate::error::{Error, Result};

/// Environment variable that overrides [`Budget::DEFAULT_LIMIT`].
pub const BUDGET_ENV: &str = "KCUBE_BUDGET";

/// Work limit shared by every exhaustive routine: points enumerated, pairs
/// compared while building a graph, and families emitted by an enumerator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    limit: u64,
}

impl Budget {
    pub const DEFAULT_LIMIT: u64 = 100_000_000;

    pub fn new(limit: u64) -> Self {
        Budget { limit }
    }

    pub fn unlimited() -> Self {
        Budget { limit: u64::MAX }
    }

    /// Reads `KCUBE_BUDGET`, falling back to the default when unset.
    pub fn from_env() -> Result<Self> {
        match std::env::var(BUDGET_ENV) {
            Ok(raw) => raw
                .trim()
                .parse::<u64>()
                .map(Budget::new)
                .map_err(|e| Error::Parse {
                    what: "budget",
                    input: raw,
                    reason: e.to_string(),
                }),
            Err(_) => Ok(Budget::default()),
        }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// `needed` of `None` means the quantity overflowed u64.
    pub fn check(&self, what: &'static str, needed: Option<u64>) -> Result<()> {
        match needed {
            Some(n) if n <= self.limit => Ok(()),
            Some(n) => Err(Error::BudgetExceeded {
                what,
                needed: n.to_string(),
                limit: self.limit,
            }),
            None => Err(Error::BudgetExceeded {
                what,
                needed: "more than 2^64".to_string(),
                limit: self.limit,
            }),
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(Self::DEFAULT_LIMIT)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_accepts_up_to_limit() {
        let b = Budget::new(10);
        assert!(b.check("points", Some(10)).is_ok());
        assert!(b.check("points", Some(11)).unwrap_err().is_budget());
        assert!(b.check("points", None).unwrap_err().is_budget());
    }

    #[test]
    fn default_is_ten_to_the_eighth() {
        assert_eq!(Budget::default().limit(), 100_000_000);
    }
}
