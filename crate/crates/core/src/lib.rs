//! Twisted cohomology jump loci of plane curve singularity links.
//!
//! The pipeline: encode the link of a germ as a braid closure, present the
//! complement group via the Artin action, evaluate Fox derivatives at
//! torsion characters in exact cyclotomic arithmetic, and read off the
//! cohomology dimensions h0, h1, h2. On top of that sit grid scans of
//! jump loci, linking matrices (from braids and independently from branch
//! parametrizations), and the deletion formulas predicting how dimensions
//! change when link components are removed.

pub mod braid;
pub mod branches;
pub mod character;
pub mod corpus;
pub mod cyclotomic;
pub mod deletion;
pub mod error;
pub mod fox;
pub mod matrix;
pub mod variety;

pub use braid::{BraidInput, BraidWord, ComponentPartition, LinkingMatrix};
pub use branches::{
    intersection_multiplicity, linking_matrix_from_branches, Branch, BranchInput, Parametrization,
    PolyXY, Series, Trunc,
};
pub use character::TorsionCharacter;
pub use corpus::CorpusEntry;
pub use cyclotomic::CycScalar;
pub use deletion::{
    meridian_exponent, meridian_scalar, predict_deleted_h1, predict_multi_deleted,
    punctured_circle_dims, transform_jump_locus, verify_deletion, DeletionScenario,
    VerificationReport, VerifyRow,
};
pub use error::{Error, Result};
pub use fox::{fox_derivative, jump_membership, twisted_dims, CohomologyDims, Presentation};
pub use matrix::{Matrix, MatrixScalar};
pub use variety::{scan, LocusEntry, ScanRecord, ScanReport, TorsionCoset, DEFAULT_BUDGET};

/// Matrix over the cyclotomic scalars; the type every twisted evaluation
/// reduces ranks over.
pub type CycMatrix = Matrix<CycScalar>;

/// Matrix over exact rationals.
pub type RatMatrix = Matrix<num_rational::BigRational>;
