//! Search caps shared by the exhaustive routines.

use crate::error::{ArenaError, Result};

pub const BUDGET_ENV: &str = "BOTTLENECK_ARENA_BUDGET";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of paths `all_simple_paths` may return.
    pub path_cap: u64,
    /// Maximum backtracking nodes for one feasibility query.
    pub search_nodes: u64,
    /// Maximum number of strategy profiles `enumerate_nash` visits.
    pub profile_cap: u64,
    /// Maximum candidate subsets examined by exact support-set search.
    pub support_subsets: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            path_cap: 1_000_000,
            search_nodes: 10_000_000,
            profile_cap: 10_000_000,
            support_subsets: 1_000_000,
        }
    }
}

impl Budget {
    /// Defaults overridden by `BOTTLENECK_ARENA_BUDGET` when it is set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(BUDGET_ENV) {
            Ok(spec) => Budget::default().with_overrides(&spec),
            Err(_) => Ok(Budget::default()),
        }
    }

    /// Applies an override string. A bare integer sets every cap; otherwise a
    /// comma-separated list of `paths=N`, `nodes=N`, `profiles=N`, `subsets=N`.
    pub fn with_overrides(mut self, spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if spec.is_empty() {
            return Ok(self);
        }
        let parse = |s: &str| -> Result<u64> {
            s.trim()
                .replace('_', "")
                .parse::<u64>()
                .ok()
                .filter(|&v| v > 0)
                .ok_or_else(|| ArenaError::InvalidParameter(format!("bad budget value `{s}`")))
        };
        if !spec.contains('=') {
            let v = parse(spec)?;
            return Ok(Budget {
                path_cap: v,
                search_nodes: v,
                profile_cap: v,
                support_subsets: v,
            });
        }
        for item in spec.split(',') {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| ArenaError::InvalidParameter(format!("bad budget item `{item}`")))?;
            let v = parse(value)?;
            match key.trim() {
                "paths" => self.path_cap = v,
                "nodes" => self.search_nodes = v,
                "profiles" => self.profile_cap = v,
                "subsets" => self.support_subsets = v,
                other => {
                    return Err(ArenaError::InvalidParameter(format!(
                        "unknown budget key `{other}`"
                    )))
                }
            }
        }
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides() {
        let b = Budget::default().with_overrides("500").unwrap();
        assert_eq!(b.profile_cap, 500);
        assert_eq!(b.path_cap, 500);
        let b = Budget::default().with_overrides("profiles=10, nodes=1_000").unwrap();
        assert_eq!(b.profile_cap, 10);
        assert_eq!(b.search_nodes, 1000);
        assert_eq!(b.path_cap, Budget::default().path_cap);
        assert!(Budget::default().with_overrides("bogus=1").is_err());
        assert!(Budget::default().with_overrides("0").is_err());
    }
}
