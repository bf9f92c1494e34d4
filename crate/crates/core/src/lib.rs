//! Estimation of preferential attachment and node fitness in growing
//! temporal networks.

pub mod cli;
pub mod error;
pub mod estimator;
pub mod ingest;
pub mod metrics;
pub mod synth;
pub mod temporal_net;

pub use error::{Error, Result};
