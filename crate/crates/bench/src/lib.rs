//! Fixed inputs shared by the benchmarks.

use plumitif_core::corpus::{district_profiles, synthesize_mixed, GoldPlumitif};

pub const SEED: u64 = 42;

/// Documents cycling through every bundled district.
pub fn corpus(n: usize) -> Vec<GoldPlumitif> {
    synthesize_mixed(&district_profiles(), SEED, n).expect("bundled profiles are valid")
}
