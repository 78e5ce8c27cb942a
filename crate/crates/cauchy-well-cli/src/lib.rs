//! Library side of the `cauchy-well` command-line tool: run configuration,
//! pipeline orchestration, file formats, and external reference data. The
//! binary in `main.rs` is a thin argument-parsing layer over these modules,
//! and the integration tests drive both this API and the binary itself.

pub mod config;
pub mod io;
pub mod pipeline;
pub mod references;
