//! File formats, the `tftwb` command line and the self-test suite on top of
//! `tftwb-core`.

pub mod cli;
pub mod doc;
pub mod report;
pub mod selftest;
