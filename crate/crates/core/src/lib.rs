//! Predictive-coding experimentation core.
//!
//! Everything in this crate is pure computation over in-memory data and builds
//! without `std` (it needs `alloc`). File formats, the parallel sweep runner and
//! the command-line front end live in the `predcode` crate.
//!
//! Pipeline for one experiment, in order:
//!
//! 1. [`textprep::tokenize`], [`textprep::stem`], [`textprep::ngrams`]
//! 2. [`features::build_vocabulary`], [`features::information_gain`],
//!    [`features::select_top_k`]
//! 3. [`sampling::down_sample`] on the training documents
//! 4. [`features::vectorize`] with the configured [`features::TokenValueType`]
//! 5. [`learners::train`], then [`learners::score`] the validation split
//! 6. [`evaluation::build_curve`] and the review-effort metrics
//!
//! [`sweep`] wires these together for a whole parameter grid.

#![cfg_attr(not(any(test, doctest)), no_std)]

extern crate alloc;

pub mod corpus;
mod error;
pub mod evaluation;
pub mod features;
pub mod learners;
pub mod sampling;
pub mod sweep;
pub mod synthetic;
pub mod textprep;

pub use error::{Error, Result};
