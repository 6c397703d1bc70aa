//! File formats, the parallel sweep runner and the `predcode` command line
//! around [`predcode_core`].

pub mod cli;
pub mod dataset;
pub mod dumps;
pub mod gridfile;
pub mod manifest;
pub mod report;
pub mod results;
pub mod runner;
