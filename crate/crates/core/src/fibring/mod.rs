//! Certified membership of characters in the BNS invariant, fibred checks,
//! scans and the catalog harness.

pub mod betti;
pub mod catalog;
pub mod certify;
pub mod oracle;
pub mod scan;

use thiserror::Error;

use crate::chain::ChainError;
use crate::characters::CharacterError;
use crate::groups::GroupError;
use crate::novikov::NovikovError;

pub use betti::betti1_abelian;
pub use catalog::{catalog, consistency_harness, CatalogEntry, ConsistencyReport};
pub use certify::{sikorav_certify, verify_certificate, Certificate, CertifyOutcome, CutoffPolicy, DirectionStatus};
pub use oracle::SigmaOracle;
pub use scan::{character_scan, fibred_check, Combined, FibringVerdict, ScanReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FibringError {
    #[error("character vanishes on every generator")]
    ZeroCharacter,
    #[error("cutoff must be positive, got {0}")]
    InvalidCutoff(String),
    #[error("character is not rational: {0}")]
    NotRational(String),
    #[error("group is not free abelian")]
    NotAbelian,
    #[error("catalog entry {0} has no oracle")]
    OracleMissing(String),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Novikov(#[from] NovikovError),
    #[error(transparent)]
    Character(#[from] CharacterError),
    #[error(transparent)]
    Group(#[from] GroupError),
}
