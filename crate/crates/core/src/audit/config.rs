use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::claims::ClaimId;
use crate::comm::DEFAULT_BRUTE_CAP;
use crate::error::{Error, Result};
use crate::group::DEFAULT_MAX_ORDER;

/// Which targets `g` are examined per instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GPolicy {
    /// Commutator values, the identity, and the smallest non-value.
    Support,
    All,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AuditConfig {
    pub groups: Vec<String>,
    pub n_values: Vec<usize>,
    pub m_values: Vec<usize>,
    pub g_policy: GPolicy,
    /// `None` runs the whole catalog; an empty list runs nothing.
    pub claims: Option<Vec<ClaimId>>,
    pub seed: u64,
    pub max_order: usize,
    pub brute_cap: u128,
    /// Groups up to this order get their full subgroup lattice; larger ones
    /// use `triv`, `full`, `center` and anything listed in `subgroups`.
    pub subgroup_enumeration_cap: usize,
    pub subgroups: BTreeMap<String, Vec<String>>,
    /// Factor pairs `(E, F)` for the multiplicativity check.
    pub products: Vec<(String, String)>,
    /// Record wall-clock time per finding. Off by default so reports are
    /// reproducible byte for byte.
    pub timing: bool,
}

impl Default for AuditConfig {
    fn default() -> Self {
        Self::default_battery()
    }
}

impl AuditConfig {
    /// Named groups of order at most 24 plus a handful of small direct
    /// products.
    pub fn default_battery() -> Self {
        let mut groups: Vec<String> = (1..=24).map(|n| format!("C{n}")).collect();
        groups.extend((1..=12).map(|n| format!("D{n}")));
        groups.extend((1..=4).map(|n| format!("S{n}")));
        groups.extend((1..=4).map(|n| format!("A{n}")));
        groups.push("Q8".into());
        groups.extend(
            [
                "C2xC2", "C2xC2xC2", "C3xC3", "C2xC4", "D4xC2", "S3xC3", "Q8xC3", "A4xC2", "Q8xC2",
                "S3xC2",
            ]
            .map(String::from),
        );
        Self {
            groups,
            n_values: vec![1, 2],
            m_values: vec![1, 2],
            g_policy: GPolicy::Support,
            claims: None,
            seed: 0,
            max_order: DEFAULT_MAX_ORDER,
            brute_cap: DEFAULT_BRUTE_CAP,
            subgroup_enumeration_cap: 24,
            subgroups: BTreeMap::new(),
            products: [("C2", "C2"), ("S3", "C2"), ("S3", "C3"), ("Q8", "C2"), ("D4", "C3"), ("S3", "Q8")]
                .iter()
                .map(|&(a, b)| (a.to_string(), b.to_string()))
                .collect(),
            timing: false,
        }
    }

    pub fn battery(name: &str) -> Result<Self> {
        match name {
            "default" => Ok(Self::default_battery()),
            "small" => Ok(Self {
                groups: ["C1", "C2", "C3", "C4", "C2xC2", "S3", "D4", "Q8", "A4"].map(String::from).to_vec(),
                products: vec![("C2".into(), "C2".into()), ("S3".into(), "C2".into())],
                ..Self::default_battery()
            }),
            _ => Err(Error::ConfigInvalid(format!("unknown battery `{name}` (expected default or small)"))),
        }
    }

    pub fn wants(&self, claim: ClaimId) -> bool {
        self.claims.as_ref().is_none_or(|c| c.contains(&claim))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |s: &str| Err(Error::ConfigInvalid(s.into()));
        if self.n_values.is_empty() || self.m_values.is_empty() {
            return bad("n_values and m_values must be non-empty");
        }
        if self.n_values.iter().chain(&self.m_values).any(|&w| w == 0) {
            return bad("weights must be at least 1");
        }
        if self.max_order == 0 {
            return bad("max_order must be positive");
        }
        Ok(())
    }
}
