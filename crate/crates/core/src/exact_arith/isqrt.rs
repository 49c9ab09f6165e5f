use crate::num::Int;

/// Floor square root by Newton iteration, with an exactness flag.
///
/// The starting point `2^ceil(bits/2)` is never below `√n`, so the
/// iterates decrease monotonically onto `⌊√n⌋`.
///
/// # Panics
///
/// Panics if `n` is negative.
pub fn isqrt<T: Int>(n: &T) -> (T, bool) {
    assert!(!n.is_negative(), "isqrt of a negative integer");
    let two = T::one() + T::one();
    if *n < two {
        return (n.clone(), true);
    }
    let mut x = T::pow2(n.bit_length().div_ceil(2));
    loop {
        let y = (x.clone() + n.clone() / x.clone()) / two.clone();
        if y >= x {
            break;
        }
        x = y;
    }
    let exact = x.clone() * x.clone() == *n;
    (x, exact)
}

pub fn is_perfect_square<T: Int>(n: &T) -> bool {
    !n.is_negative() && isqrt(n).1
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::{BigInt, RandBigInt};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn small_values() {
        assert_eq!(isqrt(&0i64), (0, true));
        assert_eq!(isqrt(&1i64), (1, true));
        assert_eq!(isqrt(&25i64), (5, true));
        assert_eq!(isqrt(&24i64), (4, false));
        assert_eq!(isqrt(&26i64), (5, false));
        assert_eq!(isqrt(&i64::MAX), (3_037_000_499, false));
    }

    #[test]
    fn exhaustive_against_linear_scan() {
        let mut root = 0i64;
        for n in 0..20_000i64 {
            while (root + 1) * (root + 1) <= n {
                root += 1;
            }
            assert_eq!(isqrt(&n), (root, root * root == n), "n = {n}");
        }
    }

    #[test]
    fn bracket_holds_for_random_big_integers() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
        for _ in 0..10_000 {
            let bits = rng.gen_range(1..=1024u64);
            let n: BigInt = rng.gen_biguint(bits).into();
            let (r, exact) = isqrt(&n);
            assert!(&r * &r <= n);
            let next = &r + 1u8;
            assert!(&next * &next > n);
            assert_eq!(exact, &r * &r == n);
        }
    }

    #[test]
    fn perfect_squares_of_big_roots() {
        let root = BigInt::from(10u8).pow(40) + 7u8;
        let sq = &root * &root;
        assert_eq!(isqrt(&sq), (root.clone(), true));
        assert_eq!(isqrt(&(&sq - 1u8)), (root - 1u8, false));
    }

    #[test]
    #[should_panic]
    fn negative_input_panics() {
        let _ = isqrt(&-4i64);
    }
}
