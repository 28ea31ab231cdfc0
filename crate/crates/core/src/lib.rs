//! Exact generalized mirror transformation for multi-point virtual structure
//! constants of degree-`k` hypersurfaces in `CP^{N-1}`.
//!
//! The crate is organised bottom-up:
//!
//! - [`scalar`]: exact rational scalars and their string encoding
//! - [`partitions`]: integer partitions, symmetry factors, insertion splits
//! - [`invariants`]: keys, selection rules, normalization, tables and their file format
//! - [`gmt`]: the correction-term expansion relating virtual structure constants to
//!   Gromov–Witten invariants, plus solvers in both directions
//! - [`series`]: truncated Novikov-graded series, mirror map, inversion, composition
//!   and the generating-function cross-check
//! - [`excess`]: dimension counts for old and new excess intersections
//! - [`fixtures`]: the CP² and octic data tables
//! - [`selftest`]: random consistent tables for property runs

pub mod error;
pub mod excess;
pub mod fixtures;
pub mod gmt;
pub mod invariants;
pub mod partitions;
pub mod scalar;
pub mod selftest;
pub mod series;

pub use error::{Error, Result};
pub use invariants::{
    Context, GwKey, InsertionMultiset, InvariantKey, InvariantTable, MissingPolicy, Normalized,
    TableKind, WKey,
};
pub use scalar::Scalar;
