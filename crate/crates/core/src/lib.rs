//! Joint user association and transmission scheduling for networks that
//! pair mmWave access links with terahertz backhaul links.
//!
//! The crate is organised bottom-up:
//!
//! - [`scenario`]: seeded random topologies and per-UE QoS demands.
//! - [`radio`]: antenna patterns, path loss and Shannon-rate link budgets.
//! - [`framing`]: superframe slot arithmetic and the served-user test.
//! - [`schedulers`]: the minimum rate-ratio scheduler plus the max-SNR and
//!   random baselines, system metrics and slot timelines.
//! - [`oracle`]: exact served-user maximisation for tiny instances.
//! - [`harness`]: Monte Carlo parameter sweeps and aggregation.
//! - [`config`] / [`report`]: the TOML configuration file and CSV output
//!   used by the command-line tool.

pub mod config;
pub mod error;
pub mod framing;
pub mod harness;
pub mod oracle;
pub mod radio;
pub mod report;
pub mod scenario;
pub mod schedulers;

pub use error::{Error, Result};
