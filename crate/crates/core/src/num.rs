//! The integer abstraction shared by the exact-arithmetic layers.
//!
//! Everything that only needs ring operations, Euclidean division and a
//! bit length is written against [`Int`], so the same code runs on machine
//! integers (handy for fast property tests) and on [`BigInt`].

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// Signed integer usable as the scalar of words, matrices and quadratic
/// numbers.
pub trait Int:
    Integer + Signed + Clone + Hash + Debug + Display + FromPrimitive + ToPrimitive + Send + Sync
{
    /// Number of significant bits of `|self|`; zero for zero.
    fn bit_length(&self) -> u64;

    /// `2^exp`. Callers keep `exp` below the width of the type.
    fn pow2(exp: u64) -> Self;

    fn from_u64_exact(v: u64) -> Self {
        Self::from_u64(v).expect("value does not fit the integer type")
    }
}

macro_rules! impl_int_primitive {
    ($($t:ty),*) => {$(
        impl Int for $t {
            fn bit_length(&self) -> u64 {
                u64::from(<$t>::BITS - self.unsigned_abs().leading_zeros())
            }

            fn pow2(exp: u64) -> Self {
                1 << exp
            }
        }
    )*};
}

impl_int_primitive!(i64, i128);

impl Int for BigInt {
    fn bit_length(&self) -> u64 {
        self.bits()
    }

    fn pow2(exp: u64) -> Self {
        BigInt::from(1u8) << exp
    }
}

/// `base^exp` by square-and-multiply.
pub fn pow<T: Int>(base: &T, mut exp: u64) -> T {
    let mut acc = T::one();
    let mut b = base.clone();
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b.clone();
        }
        exp >>= 1;
        if exp > 0 {
            b = b.clone() * b;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bit_lengths_agree_across_types() {
        for v in [0i64, 1, 2, 3, 255, 256, -7, i64::MAX] {
            let big = BigInt::from(v);
            assert_eq!(v.bit_length(), big.bit_length(), "{v}");
            assert_eq!(i128::from(v).bit_length(), big.bit_length(), "{v}");
        }
    }

    #[test]
    fn pow_matches_repeated_product() {
        assert_eq!(pow(&3i64, 0), 1);
        assert_eq!(pow(&3i64, 5), 243);
        assert_eq!(pow(&BigInt::from(-2), 65), -(BigInt::from(1) << 65u32));
    }
}
