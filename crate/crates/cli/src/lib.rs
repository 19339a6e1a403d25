//! Library side of the CLI: row types and table emission, shared with the
//! integration tests.

pub mod report;
