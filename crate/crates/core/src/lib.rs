//! Stability analytics for AI-search visibility.
//!
//! The crate ingests repeated-prompt response logs (one engine answer per
//! line, with ordered citations), and quantifies how stable the cited
//! sources and mentioned brands are:
//!
//! - pairwise set and rank similarity ([`similarity::jaccard`],
//!   [`similarity::rbo_min`]) over consecutive-day and within-24h pairs
//!   ([`pairing`]),
//! - citation concentration per campaign and engine ([`concentration`]),
//! - how many runs or observation days are needed before a per-brand
//!   detection rate estimate settles down ([`convergence`]).
//!
//! A seeded engine simulator ([`collector`]) produces datasets with known
//! ground truth, which the integration tests use end to end.

pub mod brands;
pub mod collector;
pub mod concentration;
pub mod convergence;
pub mod error;
pub mod ingest;
pub mod model;
pub mod pairing;
pub mod report;
pub mod rng;
pub mod similarity;
pub mod svg;

pub use error::{Error, Result};
