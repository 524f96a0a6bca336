//! Claim-by-claim checks over batteries of small groups.
//!
//! Each check produces [`Finding`]s with a verdict and, where a comparison
//! was made, the exact or toleranced values behind it. Violations of the
//! report-only claims are data, not failures; only the hard guarantees
//! (`EQ3`, `EQ4`, `EQ7`, `PSI` and the derived-predicate `P3_m1`) are
//! expected to hold everywhere.

mod checks;
mod claims;
mod config;
mod report;

pub use checks::{check_class_formula, check_multiplicativity, oracle_mismatches};
pub use claims::{ClaimId, Finding, Instance, Verdict, VerdictCounts, Witness};
pub use config::{AuditConfig, GPolicy};
pub use report::{recheck, run_battery, AuditReport};
