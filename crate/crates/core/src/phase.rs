//! Exact integer powers of the imaginary unit.

use crate::C64;

/// `i^e` for any integer exponent, selected from `e mod 4` without any
/// floating-point exponentiation.
pub fn i_pow(e: i64) -> C64 {
    match e.rem_euclid(4) {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}
