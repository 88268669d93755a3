//! File formats, fuzzing, report rendering and the command-line driver for
//! `floerkit-core`.

pub mod cli;
pub mod fixtures;
pub mod fuzz;
pub mod json;
pub mod report;
pub mod selftest;
