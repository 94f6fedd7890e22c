//! File formats, parallel execution and the batch front end for
//! [`cpd_core`].
//!
//! A [`RunSpec`] names a mode (`lloyd`, `search`, `sweep` or `verify`), a
//! domain, one or more values of `λ` and solver settings. [`run`] validates it,
//! executes it and writes JSON results, CSV traces and SVG diagrams into the
//! output directory. Results are deterministic for a fixed spec; wall-clock
//! data goes to a separate `metadata.json`.

pub mod dto;
pub mod error;
pub mod exec;
pub mod run;
pub mod spec;
pub mod svg;
pub mod trace;
pub mod verify;

pub use error::CliError;
pub use exec::Rayon;
pub use run::{reevaluate, run, RunSummary};
pub use spec::{validate, Diagnostic, DomainSpec, Format, Mode, RunSpec};
