//! Command line and HTTP front ends for `plumitif-core`.

pub mod config;
pub mod fill_mask;
pub mod service;
