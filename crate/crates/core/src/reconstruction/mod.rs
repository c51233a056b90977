//! Stepwise reconstruction: which variable placements on a support matrix
//! could give the target polynomial, and a backtracking search that rules
//! them all out (or finds one).

mod family;
mod prove;
mod search;

pub use family::{common_slice, compute_admissible_family, compute_admissible_family_at, AdmissibleFamily};
pub use prove::{prove_lower_bound, prove_lower_bound_with, write_proof_report, ProofReport};
pub use search::{stepwise_search, stepwise_search_with, Outcome, SearchOptions, SearchReport, SearchStats};

