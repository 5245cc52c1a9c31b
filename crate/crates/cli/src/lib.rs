//! Front end for the `ptmetro` binary: parameter resolution, grid scans,
//! figure data, file output and the verification suite.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod figures;
pub mod output;
pub mod scan;
pub mod verify;

pub use config::{Grid, ParamLayer, Params};
pub use error::CliError;
pub use scan::{run_scan, Axis, Model, Quantity, ScanSpec};
