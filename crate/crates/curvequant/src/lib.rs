//! Command-line front end and file formats for `curvequant-core`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod curvefile;
pub mod error;
pub mod jsonio;
pub mod manifest;
pub mod numfmt;
pub mod parallel;
pub mod sweep;
pub mod svg;
pub mod verify;

pub use error::{CliError, Result};
