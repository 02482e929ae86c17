//! Published relative volumes of `B_n`, used for verification and to
//! predict Monte Carlo hit rates.

use num_bigint::BigInt;

const RELATIVE_VOLUMES: [&str; 8] = [
    "1",
    "1",
    "3",
    "352",
    "4718075",
    "14666561365176",
    "17832560768358341943028",
    "12816077964079346687829905128694016",
];

/// The relative volume of `B_n` for `1 <= n <= 8`.
pub fn known_relative_volume(n: usize) -> Option<BigInt> {
    let s = RELATIVE_VOLUMES.get(n.checked_sub(1)?)?;
    Some(s.parse().expect("valid literal"))
}
