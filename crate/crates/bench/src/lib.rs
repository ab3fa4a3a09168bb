//! Shared instances for the criterion benchmarks.

use pcurv::random::random_system;
use pcurv::DiffSystem;

/// Primes of the timing table, smallest to largest.
pub const P_LADDER: [u64; 8] = [157, 281, 521, 983, 1811, 3433, 6421, 12007];

/// Seeded random system with `deg f_A = d` and dense numerators of degree `d`.
pub fn instance(p: u64, d: usize, r: usize) -> DiffSystem {
    random_system(p, d, r, 0x5eed).expect("ladder entries are prime")
}
