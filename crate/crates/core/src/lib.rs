//! Construction, verification and nonexistence filtering of almost difference
//! sets and related designs in finite abelian groups.

pub mod arith;
pub mod cli;
pub mod constructions;
pub mod cyclotomy;
pub mod diffcore;
pub mod error;
pub mod filters;
pub mod gf;
pub mod groups;
pub mod sequences;

pub use error::{Error, Result};
pub use groups::{make_group, Elem, GroupCtx};
