//! File formats, experiment runner and reference checks around `qcg-core`.

pub mod clock;
pub mod config;
pub mod error;
pub mod mtx;
pub mod oracle;
pub mod png_io;
pub mod runner;
pub mod verify;

pub use error::QcgError;
