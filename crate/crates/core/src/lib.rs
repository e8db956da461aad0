//! Exact construction and verification of Z-paraunitary (ZPU) matrices and
//! the Z-complementary code sets they describe.
//!
//! Sequence entries are q-th roots of unity and every correlation value is
//! computed exactly in the cyclotomic ring Z[ω_q], so PU and ZPU verdicts
//! never depend on a floating-point tolerance.
//!
//! Layers, bottom up: [`cyclotomic`] scalars, [`polymat`] Laurent
//! polynomial matrices, [`correlation`] verdicts, the [`bh`] catalog,
//! [`constructions`], and the document, recipe and oracle layers used by the
//! `zccs` binary.

pub mod bh;
pub mod constructions;
pub mod correlation;
pub mod cyclotomic;
pub mod error;
pub mod io;
pub mod oracle;
pub mod polymat;
pub mod recipe;
pub mod report;

pub use error::{Error, Result};
