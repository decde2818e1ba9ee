//! Machinery for searching binary self-dual codes with a prescribed
//! automorphism of odd order, via the module decomposition of the code
//! over F2[x]/(x^r - 1).
//!
//! The pipeline: factor the group ring into field components, enumerate
//! component codes satisfying the duality constraints, glue candidates
//! back to binary codes, and refute or certify minimum-distance targets
//! with exact or witness-based evidence.

pub mod compcodes;
pub mod decomp;
pub mod gf2core;
pub mod macwms;
pub mod ringalg;
pub mod search96;

pub use gf2core::{BinaryCode, Perm, WeightDistribution};
