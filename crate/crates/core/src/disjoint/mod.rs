//! Disjointness workbench: dense enumerations, witness searches, criterion
//! scans, joining coverage, dual-family checks and witness transfers.

mod criteria;
mod enumerate;
mod joining;
mod scan;
mod transfer;
mod witness;

pub use criteria::{central_criterion_check, star_check_over, star_sufficient_check, CentralCheck, StarCheck, StarKind};
pub use enumerate::{cylinder_index_bound, cylinders, enumerate_dense, primitive_words, DenseEnumeration};
pub use joining::{joining_coverage, transitive_point, JoiningApprox};
pub use scan::{criterion_scan, default_scan_gap, PairResult, ScanCounts, ScanParams, ScanReport};
pub use transfer::{power_witness_transfer, product_witness_transfer, tower_identity, PowerTransfer};
pub use witness::{sample_points, witness_search, witness_search_all, WitnessOutcome, WitnessQuery, WitnessRecord};

use crate::intfam::FamilyError;
use crate::systems::SystemError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DisjointError {
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("witness transfer failed: {0}")]
    Transfer(String),
}
