//! Word problems of non-solvable groups: Grigorchuk, Thompson's F, free and
//! finite permutation groups; straight-line programs; a Barrington-style
//! compiler from nand-tree circuits to G-programs; wreath-product
//! evaluation; and the circuit → subsetsum → SLP reduction pipeline.

pub mod barrington;
pub mod error;
pub mod grigorchuk;
pub mod providers;
pub mod reduction;
pub mod perm;
pub mod slp;
pub mod thompson;
pub mod words;
pub mod wreath;

pub use error::{Error, Result};
