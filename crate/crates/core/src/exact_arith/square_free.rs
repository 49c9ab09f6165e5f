use std::fmt;

use crate::num::Int;

pub const DEFAULT_SQUARE_FREE_BOUND: u64 = 100_000;

/// Outcome of a bounded square-factor search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SquareFreeStatus {
    /// The integer was fully factored below the bound and no prime repeats.
    SquareFree,
    /// `p²` divides the probed integer.
    HasSquareFactor(u64),
    /// No square factor below the bound, but a cofactor stayed unfactored.
    Unknown(u64),
}

impl fmt::Display for SquareFreeStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SquareFreeStatus::SquareFree => f.write_str("square-free"),
            SquareFreeStatus::HasSquareFactor(p) => write!(f, "square-factor:{p}"),
            SquareFreeStatus::Unknown(bound) => write!(f, "unknown:{bound}"),
        }
    }
}

fn primes_up_to(bound: u64) -> Vec<u64> {
    let n = usize::try_from(bound).expect("bound fits in memory");
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

/// Trial division by the primes `p ≤ bound`, stopping at the first square
/// factor.
///
/// # Panics
///
/// Panics unless `n ≥ 2` and `bound ≥ 2`.
pub fn square_free_probe<T: Int>(n: &T, bound: u64) -> SquareFreeStatus {
    assert!(*n >= T::one() + T::one(), "square_free_probe needs n >= 2");
    assert!(bound >= 2, "square_free_probe needs bound >= 2");

    let mut rest = n.clone();
    for p in primes_up_to(bound) {
        let pt = T::from_u64_exact(p);
        if pt.clone() * pt.clone() > rest {
            // What is left is 1 or a prime.
            return SquareFreeStatus::SquareFree;
        }
        let (q, r) = rest.div_rem(&pt);
        if r.is_zero() {
            rest = q;
            if rest.is_multiple_of(&pt) {
                return SquareFreeStatus::HasSquareFactor(p);
            }
        }
    }
    // Every prime up to `bound` is gone from `rest`, so a cofactor below
    // (bound+1)² is 1 or a single prime.
    let next = T::from_u64_exact(bound) + T::one();
    if rest < next.clone() * next {
        SquareFreeStatus::SquareFree
    } else {
        SquareFreeStatus::Unknown(bound)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn small_cases() {
        assert_eq!(
            square_free_probe(&12i64, 10),
            SquareFreeStatus::HasSquareFactor(2)
        );
        assert_eq!(square_free_probe(&22i64, 10), SquareFreeStatus::SquareFree);
        assert_eq!(square_free_probe(&2i64, 2), SquareFreeStatus::SquareFree);
        assert_eq!(
            square_free_probe(&49i64, 10),
            SquareFreeStatus::HasSquareFactor(7)
        );
        assert_eq!(
            square_free_probe(&(9 * 5i64), 10),
            SquareFreeStatus::HasSquareFactor(3)
        );
    }

    #[test]
    fn cofactor_beyond_bound_is_unknown() {
        // 101·103 has no factor up to 10 and exceeds 11².
        assert_eq!(
            square_free_probe(&(101 * 103i64), 10),
            SquareFreeStatus::Unknown(10)
        );
        // 101² is reported as unknown, never guessed.
        assert_eq!(
            square_free_probe(&(101 * 101i64), 10),
            SquareFreeStatus::Unknown(10)
        );
        // A prime cofactor below (bound+1)² is recognised.
        assert_eq!(
            square_free_probe(&(2 * 113i64), 11),
            SquareFreeStatus::SquareFree
        );
    }

    #[test]
    fn agrees_with_brute_force_below_two_thousand() {
        for n in 2i64..2000 {
            let expected = (2..n).find(|p| n % (p * p) == 0 && (2..*p).all(|q| p % q != 0));
            let got = square_free_probe(&n, 50);
            // Every cofactor here is below 51², so the probe always concludes.
            match expected {
                Some(p) => assert_eq!(got, SquareFreeStatus::HasSquareFactor(p as u64), "n = {n}"),
                None => assert_eq!(got, SquareFreeStatus::SquareFree, "n = {n}"),
            }
            if let SquareFreeStatus::HasSquareFactor(p) = got {
                assert_eq!(n % (p as i64 * p as i64), 0);
            }
        }
    }

    #[test]
    fn worked_family_radicand() {
        // 446005190022 = 2·3·7·241·1039·42409, all below 10⁶.
        let d: BigInt = "446005190022".parse().unwrap();
        assert_eq!(
            square_free_probe(&d, 1_000_000),
            SquareFreeStatus::SquareFree
        );
        // 4792683254153105 = 5·24841·38586878581: the last prime is out of
        // reach at the default bound.
        let d: BigInt = "4792683254153105".parse().unwrap();
        assert_eq!(
            square_free_probe(&d, DEFAULT_SQUARE_FREE_BOUND),
            SquareFreeStatus::Unknown(100_000)
        );
        assert_eq!(
            square_free_probe(&d, 1_000_000),
            SquareFreeStatus::SquareFree
        );
    }
}
