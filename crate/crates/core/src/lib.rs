//! Quasi-Polish spaces realized as spaces of ideals over staged transitive
//! relations on ℕ.
//!
//! Every object is executable: relations, sets and codes come with stage
//! approximations, and every query is a fuel-bounded semidecision whose
//! positive answers are final.

pub mod check;
pub mod codes;
pub mod comptop;
pub mod constructions;
pub mod encoding;
pub mod error;
pub mod ideal;
pub mod metric;
pub mod powerspace;
pub mod relation;
pub mod spec;
pub mod staged;

pub use error::{Error, Result};

/// Naturals are arbitrary precision: finite-set and sequence codes grow fast.
pub type Nat = num_bigint::BigUint;
