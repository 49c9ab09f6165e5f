use std::cmp::Ordering;
use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use super::isqrt::is_perfect_square;
use crate::error::{Error, Result};
use crate::num::Int;

/// An element `a + b√d` of the real quadratic field `Q(√d)`.
///
/// `d` is a positive non-square integer; `a` and `b` are kept in lowest
/// terms with positive denominators, so structural equality is value
/// equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QuadRat<T: Int> {
    d: T,
    a: Ratio<T>,
    b: Ratio<T>,
}

impl<T: Int> QuadRat<T> {
    pub fn new(d: T, a: Ratio<T>, b: Ratio<T>) -> Result<Self> {
        if !d.is_positive() || is_perfect_square(&d) {
            return Err(Error::InvalidRadicand(d.to_string()));
        }
        Ok(Self { d, a, b })
    }

    pub fn from_integers(d: T, a: T, b: T) -> Result<Self> {
        Self::new(d, Ratio::from_integer(a), Ratio::from_integer(b))
    }

    pub fn from_rational(d: T, a: Ratio<T>) -> Result<Self> {
        Self::new(d, a, Ratio::zero())
    }

    /// `√d` itself.
    pub fn sqrt_of(d: T) -> Result<Self> {
        Self::new(d, Ratio::zero(), Ratio::one())
    }

    pub fn one(d: T) -> Result<Self> {
        Self::from_rational(d, Ratio::one())
    }

    pub fn d(&self) -> &T {
        &self.d
    }

    /// Rational part.
    pub fn a(&self) -> &Ratio<T> {
        &self.a
    }

    /// Coefficient of `√d`.
    pub fn b(&self) -> &Ratio<T> {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.a.is_integer() && self.b.is_integer()
    }

    /// `a² − d·b²`.
    pub fn norm(&self) -> Ratio<T> {
        let d = Ratio::from_integer(self.d.clone());
        self.a.clone() * self.a.clone() - d * self.b.clone() * self.b.clone()
    }

    pub fn conj(&self) -> Self {
        Self {
            d: self.d.clone(),
            a: self.a.clone(),
            b: -self.b.clone(),
        }
    }

    /// An integral element of norm ±1.
    pub fn is_unit(&self) -> bool {
        self.is_integral() && self.norm().abs().is_one()
    }

    fn check_radicand(&self, other: &Self) -> Result<()> {
        if self.d == other.d {
            Ok(())
        } else {
            Err(Error::MismatchedRadicand(
                self.d.to_string(),
                other.d.to_string(),
            ))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_radicand(other)?;
        Ok(Self {
            d: self.d.clone(),
            a: self.a.clone() + other.a.clone(),
            b: self.b.clone() + other.b.clone(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            d: self.d.clone(),
            a: -self.a.clone(),
            b: -self.b.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_radicand(other)?;
        let d = Ratio::from_integer(self.d.clone());
        let a = self.a.clone() * other.a.clone() + d * self.b.clone() * other.b.clone();
        let b = self.a.clone() * other.b.clone() + self.b.clone() * other.a.clone();
        Ok(Self {
            d: self.d.clone(),
            a,
            b,
        })
    }

    /// Multiplicative inverse `conj(x) / norm(x)`.
    pub fn inv(&self) -> Result<Self> {
        // d is not a square, so the norm vanishes only at zero.
        if self.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        let n = self.norm();
        Ok(Self {
            d: self.d.clone(),
            a: self.a.clone() / n.clone(),
            b: -self.b.clone() / n,
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check_radicand(other)?;
        self.mul(&other.inv()?)
    }

    /// Exact power by square-and-multiply; `x^0 = 1`.
    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self {
            d: self.d.clone(),
            a: Ratio::one(),
            b: Ratio::zero(),
        };
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same radicand");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same radicand");
            }
        }
        acc
    }

    pub fn scale(&self, k: &Ratio<T>) -> Self {
        Self {
            d: self.d.clone(),
            a: self.a.clone() * k.clone(),
            b: self.b.clone() * k.clone(),
        }
    }

    pub fn add_rational(&self, k: &Ratio<T>) -> Self {
        Self {
            d: self.d.clone(),
            a: self.a.clone() + k.clone(),
            b: self.b.clone(),
        }
    }

    /// Exact sign of the real number `a + b√d`.
    pub fn signum(&self) -> Ordering {
        let zero = Ratio::zero();
        let sa = self.a.cmp(&zero);
        let sb = self.b.cmp(&zero);
        match (sa, sb) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (Ordering::Greater, Ordering::Greater) => Ordering::Greater,
            (Ordering::Less, Ordering::Less) => Ordering::Less,
            (sa, _) => {
                // Opposite signs: compare a² with d·b².
                let a2 = self.a.clone() * self.a.clone();
                let db2 = Ratio::from_integer(self.d.clone()) * self.b.clone() * self.b.clone();
                if sa == Ordering::Greater {
                    a2.cmp(&db2)
                } else {
                    db2.cmp(&a2)
                }
            }
        }
    }

    pub fn exceeds_one(&self) -> bool {
        self.add_rational(&-Ratio::<T>::one()).signum() == Ordering::Greater
    }
}

impl<T: Int> fmt::Display for QuadRat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_negative() {
            write!(f, "{} - {}√{}", self.a, -self.b.clone(), self.d)
        } else {
            write!(f, "{} + {}√{}", self.a, self.b, self.d)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn q(d: i64, a: i64, b: i64) -> QuadRat<i64> {
        QuadRat::from_integers(d, a, b).unwrap()
    }

    fn big(d: &str, a: &str, b: &str) -> QuadRat<BigInt> {
        QuadRat::from_integers(d.parse().unwrap(), a.parse().unwrap(), b.parse().unwrap()).unwrap()
    }

    #[test]
    fn radicand_must_be_positive_non_square() {
        assert!(QuadRat::from_integers(4i64, 1, 1).is_err());
        assert!(QuadRat::from_integers(0i64, 1, 1).is_err());
        assert!(QuadRat::from_integers(-3i64, 1, 1).is_err());
        assert!(QuadRat::from_integers(5i64, 1, 1).is_ok());
    }

    #[test]
    fn products() {
        assert_eq!(q(2, 1, 1).mul(&q(2, 1, 1)).unwrap(), q(2, 3, 2));
        assert_eq!(q(2, 1, 1).mul(&q(2, 1, -1)).unwrap(), q(2, -1, 0));
        let e = big("22", "197", "42");
        assert_eq!(e.mul(&e.conj()).unwrap(), big("22", "1", "0"));
    }

    #[test]
    fn mismatched_radicands_are_rejected() {
        assert_eq!(
            q(2, 1, 1).mul(&q(3, 1, 1)),
            Err(Error::MismatchedRadicand("2".into(), "3".into()))
        );
        assert!(q(2, 1, 1).add(&q(3, 1, 1)).is_err());
    }

    #[test]
    fn inverses() {
        assert_eq!(q(2, 1, 1).inv().unwrap(), q(2, -1, 1));
        assert_eq!(q(2, 3, 2).inv().unwrap(), q(2, 3, -2));
        let half = QuadRat::new(5i64, Ratio::new(1, 2), Ratio::zero()).unwrap();
        assert_eq!(q(5, 2, 0).inv().unwrap(), half);
        assert_eq!(q(7, 0, 0).inv(), Err(Error::ZeroDivisor));
    }

    #[test]
    fn powers() {
        assert_eq!(q(2, 1, 1).pow(2), q(2, 3, 2));
        assert_eq!(q(2, 1, 1).pow(0), q(2, 1, 0));
        // (1+√22)³ by repeated multiplication: (23+2√22)(1+√22) = 67+25√22.
        let x = q(22, 1, 1);
        let cube = x.mul(&x).unwrap().mul(&x).unwrap();
        assert_eq!(cube, q(22, 67, 25));
        assert_eq!(x.pow(3), cube);
    }

    #[test]
    fn norms() {
        assert_eq!(q(2, 1, 1).norm(), Ratio::from_integer(-1));
        // 197² − 22·42² = 38809 − 38808.
        assert_eq!(
            big("22", "197", "42").norm(),
            Ratio::from_integer(BigInt::from(1))
        );
        assert_eq!(q(7, 0, 0).norm(), Ratio::from_integer(0));
    }

    #[test]
    fn signs() {
        assert_eq!(q(2, 1, -1).signum(), Ordering::Less);
        assert_eq!(q(2, -1, 1).signum(), Ordering::Greater);
        assert_eq!(q(2, 0, 0).signum(), Ordering::Equal);
        assert_eq!(q(2, -2, -1).signum(), Ordering::Less);
        assert!(q(2, 1, 1).exceeds_one());
        assert!(!q(2, -1, 1).exceeds_one());
        assert!(!q(2, 1, 0).exceeds_one());
    }

    #[test]
    fn display() {
        assert_eq!(q(22, 197, 42).to_string(), "197 + 42√22");
        assert_eq!(q(2, 3, -2).to_string(), "3 - 2√2");
    }

    fn arb_quad(d: i64) -> impl Strategy<Value = QuadRat<i64>> {
        (-50i64..50, 1i64..20, -50i64..50, 1i64..20).prop_map(move |(an, ad, bn, bd)| {
            QuadRat::new(d, Ratio::new(an, ad), Ratio::new(bn, bd)).unwrap()
        })
    }

    fn arb_pair() -> impl Strategy<Value = (QuadRat<i64>, QuadRat<i64>)> {
        prop::sample::select(vec![2i64, 3, 5, 7, 22, 41, 94])
            .prop_flat_map(|d| (arb_quad(d), arb_quad(d)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn norm_is_multiplicative((x, y) in arb_pair()) {
            prop_assert_eq!(x.mul(&y).unwrap().norm(), x.norm() * y.norm());
        }

        #[test]
        fn inverse_is_two_sided((x, _y) in arb_pair()) {
            prop_assume!(!x.is_zero());
            let one = QuadRat::one(*x.d()).unwrap();
            prop_assert_eq!(x.inv().unwrap().mul(&x).unwrap(), one.clone());
            prop_assert_eq!(x.mul(&x.inv().unwrap()).unwrap(), one);
        }

        #[test]
        fn arithmetic_is_closed_over_the_radicand((x, y) in arb_pair()) {
            prop_assert_eq!(*x.add(&y).unwrap().d(), *x.d());
            prop_assert_eq!(*x.mul(&y).unwrap().d(), *x.d());
            prop_assert_eq!(x.sub(&y).unwrap().add(&y).unwrap(), x);
        }
    }
}
