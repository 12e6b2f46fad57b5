//! The `gwp` guide, compiled as documentation so that every Rust snippet in
//! the book runs as a doctest. The chapters live in `book/src/` and are
//! rendered with mdbook; this crate guarantees they stay in sync with the
//! library.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/words.md")]
pub mod words {}

#[doc = include_str!("../../../book/src/slp.md")]
pub mod slp {}

#[doc = include_str!("../../../book/src/grigorchuk.md")]
pub mod grigorchuk {}

#[doc = include_str!("../../../book/src/thompson.md")]
pub mod thompson {}

#[doc = include_str!("../../../book/src/wreath.md")]
pub mod wreath {}

#[doc = include_str!("../../../book/src/barrington.md")]
pub mod barrington {}

#[doc = include_str!("../../../book/src/reduction.md")]
pub mod reduction {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
