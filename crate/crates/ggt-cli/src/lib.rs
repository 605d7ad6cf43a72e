//! File formats and the bench harness behind the `ggt` binary, split out so
//! integration tests can drive them directly.

pub mod bench;
pub mod formats;
