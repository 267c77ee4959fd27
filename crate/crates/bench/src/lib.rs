//! Fixed workloads shared by the criterion benches.

use num_bigint::BigInt;

/// Discriminants whose class polynomials are benchmarked, small to large.
pub const CLASSPOLY_DISCRIMINANTS: [i64; 4] = [-56, -84, -120, -260];

/// Inputs for the end-to-end decision benches: `(a, b, n)`.
pub const DECISION_INPUTS: [(i64, i64, i64); 4] = [(2, 7, 23), (2, 7, 19_999), (1, 5, 9_941), (3, 11, 12_345)];

pub fn big(n: i64) -> BigInt {
    BigInt::from(n)
}
