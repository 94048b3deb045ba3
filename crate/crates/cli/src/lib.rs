//! Experiment harness over the `eigenmeans` library: sweep records, the
//! verification suite, and report emission.

// `!(x > 0.0)` guards reject NaN along with the out-of-domain sign.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod experiments;
pub mod report;
pub mod suite;
