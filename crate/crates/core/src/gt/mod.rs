//! Explicit finite-rank modules on the interlacing-pattern basis.

mod pattern;
mod rep;

pub use pattern::{enumerate_patterns, weyl_dim, GtPattern};
pub use rep::{build_module, GtError, ModuleRep};
