//! Words of partial quotients and their 2×2 matrix images.
//!
//! A word `a₁,…,aⱼ` maps to the product of the matrices `[[aᵢ,1],[1,0]]`.
//! Reading off the first column of that product gives the convergents, and
//! concatenation of words is matrix multiplication. Formal words may carry
//! zero or negative entries; [`normalize`] rewrites them into regular form
//! with the two value-preserving rules
//!
//! ```text
//! [m, n, 0, p, α] = [m, n+p, α]
//! [m, −n, α]      = [m−1, 1, n−1, −α]
//! ```
//!
//! where `−α` negates every remaining entry.

use std::fmt;
use std::ops::Deref;

use num_rational::Ratio;
use num_traits::Zero;

use crate::cf::eval_periodic_fixed_point;
use crate::error::{Error, Result};
use crate::num::Int;

pub const DEFAULT_REWRITE_BUDGET: usize = 10_000;

/// A finite sequence of integer partial quotients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct Word<T>(Vec<T>);

impl<T: Int> Word<T> {
    pub fn new(entries: Vec<T>) -> Self {
        Word(entries)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn entries(&self) -> &[T] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<T> {
        self.0
    }

    pub fn reversed(&self) -> Self {
        reverse(self)
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn is_palindrome(&self) -> bool {
        self.0.iter().eq(self.0.iter().rev())
    }

    /// Every entry is at least one.
    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|a| *a >= T::one())
    }

    /// Every entry after the first is at least one; the first is the
    /// integer part and may be anything.
    pub fn is_regular(&self) -> bool {
        self.0.iter().skip(1).all(|a| *a >= T::one())
    }

    pub fn matrix(&self) -> Mat2<T> {
        matrix_of_word(&self.0)
    }
}

impl<T> Deref for Word<T> {
    type Target = [T];

    fn deref(&self) -> &[T] {
        &self.0
    }
}

impl<T> From<Vec<T>> for Word<T> {
    fn from(v: Vec<T>) -> Self {
        Word(v)
    }
}

impl<T> FromIterator<T> for Word<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl<T> IntoIterator for Word<T> {
    type Item = T;
    type IntoIter = std::vec::IntoIter<T>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

impl<T: fmt::Display> fmt::Display for Word<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

/// 2×2 integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mat2<T> {
    pub m11: T,
    pub m12: T,
    pub m21: T,
    pub m22: T,
}

impl<T: Int> Mat2<T> {
    pub fn new(m11: T, m12: T, m21: T, m22: T) -> Self {
        Mat2 { m11, m12, m21, m22 }
    }

    pub fn identity() -> Self {
        Mat2::new(T::one(), T::zero(), T::zero(), T::one())
    }

    /// `[[a, 1], [1, 0]]`.
    pub fn quotient(a: T) -> Self {
        Mat2::new(a, T::one(), T::one(), T::zero())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Mat2::new(
            self.m11.clone() * rhs.m11.clone() + self.m12.clone() * rhs.m21.clone(),
            self.m11.clone() * rhs.m12.clone() + self.m12.clone() * rhs.m22.clone(),
            self.m21.clone() * rhs.m11.clone() + self.m22.clone() * rhs.m21.clone(),
            self.m21.clone() * rhs.m12.clone() + self.m22.clone() * rhs.m22.clone(),
        )
    }

    /// Right-multiplication by `[[a, 1], [1, 0]]`, without building it.
    fn push_quotient(&mut self, a: &T) {
        let m11 = self.m11.clone() * a.clone() + self.m12.clone();
        let m21 = self.m21.clone() * a.clone() + self.m22.clone();
        self.m12 = std::mem::replace(&mut self.m11, m11);
        self.m22 = std::mem::replace(&mut self.m21, m21);
    }

    pub fn transpose(&self) -> Self {
        Mat2::new(
            self.m11.clone(),
            self.m21.clone(),
            self.m12.clone(),
            self.m22.clone(),
        )
    }

    pub fn det(&self) -> T {
        self.m11.clone() * self.m22.clone() - self.m12.clone() * self.m21.clone()
    }

    pub fn is_symmetric(&self) -> bool {
        self.m12 == self.m21
    }
}

impl<T: fmt::Display> fmt::Display for Mat2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.m11, self.m12, self.m21, self.m22
        )
    }
}

/// Left-to-right product of `[[aᵢ,1],[1,0]]`; the empty word maps to the
/// identity.
pub fn matrix_of_word<T: Int>(word: &[T]) -> Mat2<T> {
    let mut m = Mat2::identity();
    for a in word {
        m.push_quotient(a);
    }
    m
}

pub fn reverse<T: Int>(word: &Word<T>) -> Word<T> {
    word.0.iter().rev().cloned().collect()
}

/// The symmetric matrix `[[w, u], [u, v]]` of a palindromic word together
/// with the check that `√(w/v)` has the periodic expansion the word
/// predicts.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Lemma1Check<T> {
    pub w: T,
    pub u: T,
    pub v: T,
    pub ratio_ok: bool,
}

impl<T: Int> Lemma1Check<T> {
    /// `w / v`, the square of the surd.
    pub fn ratio(&self) -> Ratio<T> {
        Ratio::new(self.w.clone(), self.v.clone())
    }
}

/// For a palindrome `q₀,q₁,…,q₁,q₀` of positive integers, `√(w/v)` equals
/// `[q₀; q₁,…,q₁,2q₀]` repeated.
pub fn lemma1_check<T: Int>(word: &Word<T>) -> Result<Lemma1Check<T>> {
    if !word.is_palindrome() {
        return Err(Error::NotPalindromic);
    }
    if word.len() < 2 || !word.is_positive() {
        return Err(Error::HypothesisViolated(
            "palindrome needs at least two positive entries".into(),
        ));
    }
    let m = word.matrix();
    debug_assert!(m.is_symmetric());
    let q0 = word[0].clone();
    let mut period: Vec<T> = word[1..word.len() - 1].to_vec();
    period.push(q0.clone() + q0.clone());
    let ratio_ok = eval_periodic_fixed_point(&q0, &period);
    Ok(Lemma1Check {
        w: m.m11,
        u: m.m12,
        v: m.m22,
        ratio_ok,
    })
}

/// Exact value of the finite continued fraction `[w₀; w₁, …]`.
pub fn eval_finite<T: Int>(word: &[T]) -> Result<Ratio<T>> {
    let (last, init) = word.split_last().ok_or(Error::DivisionByZero)?;
    let mut value = Ratio::from_integer(last.clone());
    for a in init.iter().rev() {
        if value.is_zero() {
            return Err(Error::DivisionByZero);
        }
        value = Ratio::from_integer(a.clone()) + value.recip();
    }
    Ok(value)
}

pub fn normalize<T: Int>(word: &Word<T>) -> Result<Word<T>> {
    normalize_with_budget(word, DEFAULT_REWRITE_BUDGET)
}

/// Rewrites a formal word until every entry after the first is positive.
///
/// Rewrites always act on the first offending entry. A trailing zero drops
/// together with its predecessor, since `[…, z, y, 0] = […, z]`.
pub fn normalize_with_budget<T: Int>(word: &Word<T>, budget: usize) -> Result<Word<T>> {
    let mut w = word.0.clone();
    let mut steps = 0usize;
    while let Some(i) = (1..w.len()).find(|&j| w[j] <= T::zero()) {
        steps += 1;
        if steps > budget {
            return Err(Error::NonTerminating { budget });
        }
        if w[i].is_zero() {
            if i + 1 < w.len() {
                let p = w.remove(i + 1);
                w.remove(i);
                w[i - 1] = w[i - 1].clone() + p;
            } else if i >= 2 {
                w.truncate(i - 1);
            } else {
                // [y, 0] has the value ∞.
                return Err(Error::DivisionByZero);
            }
        } else {
            let n = -w[i].clone();
            w[i - 1] = w[i - 1].clone() - T::one();
            w[i] = T::one();
            for a in &mut w[i + 1..] {
                *a = -a.clone();
            }
            w.insert(i + 1, n - T::one());
        }
    }
    Ok(Word(w))
}

/// Normalizes the periodic expansion `[a0; period, period, …]`.
///
/// The rewrites are applied to five explicit copies of the period; the
/// regular period is the shortest block that repeats three times at the
/// front of the result and ends in twice the new integer part.
pub fn normalize_periodic<T: Int>(a0: &T, period: &Word<T>, budget: usize) -> Result<(T, Word<T>)> {
    const COPIES: usize = 5;
    let mut formal = Vec::with_capacity(1 + COPIES * period.len());
    formal.push(a0.clone());
    for _ in 0..COPIES {
        formal.extend_from_slice(period);
    }
    let budget = budget.saturating_mul(COPIES);
    let out = normalize_with_budget(&Word(formal), budget)?.0;
    let (head, tail) = out.split_first().ok_or(Error::DivisionByZero)?;
    let twice = head.clone() + head.clone();
    (1..=tail.len() / 3)
        .find(|&l| {
            tail[..l] == tail[l..2 * l] && tail[..l] == tail[2 * l..3 * l] && tail[l - 1] == twice
        })
        .map(|l| (head.clone(), Word(tail[..l].to_vec())))
        .ok_or_else(|| Error::NormalizationMismatch("normalized word has no stable period".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn w(v: &[i64]) -> Word<i64> {
        Word::new(v.to_vec())
    }

    #[test]
    fn matrices_of_small_words() {
        assert_eq!(matrix_of_word(&[2i64, 1]), Mat2::new(3, 2, 1, 1));
        assert_eq!(matrix_of_word(&[1i64, 2, 1]), Mat2::new(4, 3, 3, 2));
        assert_eq!(matrix_of_word::<i64>(&[]), Mat2::identity());
    }

    #[test]
    fn reversal() {
        assert_eq!(reverse(&w(&[1, 2, 3])), w(&[3, 2, 1]));
        assert_eq!(reverse(&w(&[1, 2, 1])), w(&[1, 2, 1]));
        assert_eq!(reverse(&w(&[])), w(&[]));
        let word = w(&[4, 1, 7, 2]);
        assert_eq!(word.reversed().matrix(), word.matrix().transpose());
    }

    #[test]
    fn lemma1_small_palindromes() {
        let c = lemma1_check(&w(&[1, 2, 1])).unwrap();
        assert_eq!((c.w, c.u, c.v, c.ratio_ok), (4, 3, 2, true));
        assert_eq!(c.ratio(), Ratio::from_integer(2));

        let c = lemma1_check(&w(&[4, 1, 2, 4, 2, 1, 4])).unwrap();
        assert!(c.ratio_ok);
        assert_eq!(c.ratio(), Ratio::from_integer(22));

        assert_eq!(lemma1_check(&w(&[1, 2, 3])), Err(Error::NotPalindromic));
        assert!(lemma1_check(&w(&[3])).is_err());
    }

    #[test]
    fn finite_evaluation() {
        assert_eq!(
            eval_finite(&[1i64, 2, 0, 3, 4]).unwrap(),
            Ratio::new(25, 21)
        );
        assert_eq!(eval_finite(&[3i64, -2]).unwrap(), Ratio::new(5, 2));
        assert_eq!(eval_finite(&[7i64]).unwrap(), Ratio::from_integer(7));
        assert_eq!(eval_finite(&[1i64, 0]), Err(Error::DivisionByZero));
        assert_eq!(eval_finite::<i64>(&[]), Err(Error::DivisionByZero));
    }

    #[test]
    fn normalization_examples() {
        assert_eq!(normalize(&w(&[1, 2, 0, 3, 4])).unwrap(), w(&[1, 5, 4]));
        assert_eq!(normalize(&w(&[3, -2])).unwrap(), w(&[2, 1, 1]));
        assert_eq!(normalize(&w(&[5, 1, 1])).unwrap(), w(&[5, 1, 1]));
        assert_eq!(normalize(&w(&[5])).unwrap(), w(&[5]));
        assert_eq!(normalize(&w(&[-3, 2])).unwrap(), w(&[-3, 2]));
    }

    #[test]
    fn normalization_at_word_ends() {
        // [m, -1] = [m-1, 1, 0] = [m-1].
        assert_eq!(normalize(&w(&[4, -1])).unwrap(), w(&[3]));
        // Trailing (y, 0) collapses.
        assert_eq!(normalize(&w(&[2, 3, 5, 0])).unwrap(), w(&[2, 3]));
        assert_eq!(normalize(&w(&[2, 0])), Err(Error::DivisionByZero));
        // Leading zero is a legitimate integer part.
        assert_eq!(normalize(&w(&[0, 3])).unwrap(), w(&[0, 3]));
    }

    #[test]
    fn budget_is_enforced() {
        let word = w(&[1, -1, -1, -1, -1, -1]);
        assert_eq!(
            normalize_with_budget(&word, 1),
            Err(Error::NonTerminating { budget: 1 })
        );
    }

    #[test]
    fn periodic_normalization_of_a_negative_template() {
        // T1 template with a ↦ −a, (a, m, s, k) = (−2, 1, 1, 1): the regular
        // form is √43 = [6; 1,1,3,1,5,1,3,1,1,12].
        let (a0, period) =
            normalize_periodic(&7i64, &w(&[-2, -4, 7, -4, -2, 14]), DEFAULT_REWRITE_BUDGET)
                .unwrap();
        assert_eq!(a0, 6);
        assert_eq!(period, w(&[1, 1, 3, 1, 5, 1, 3, 1, 1, 12]));
    }

    #[test]
    fn big_and_small_integers_agree() {
        let small = w(&[3, 7, 15, 1, 292]);
        let big: Word<BigInt> = small.iter().map(|&a| BigInt::from(a)).collect();
        let ms = small.matrix();
        let mb = big.matrix();
        assert_eq!(mb.m11, BigInt::from(ms.m11));
        assert_eq!(mb.m22, BigInt::from(ms.m22));
    }

    fn arb_word(max_len: usize, lo: i64, hi: i64) -> impl Strategy<Value = Vec<i64>> {
        prop::collection::vec(lo..=hi, 0..=max_len)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn concatenation_is_matrix_product(a in arb_word(8, -9, 9), b in arb_word(8, -9, 9)) {
            let joined: Vec<i64> = a.iter().chain(&b).copied().collect();
            prop_assert_eq!(
                matrix_of_word(&joined),
                matrix_of_word(&a).mul(&matrix_of_word(&b))
            );
        }

        #[test]
        fn determinant_is_plus_minus_one(a in arb_word(12, -9, 9)) {
            let expected = if a.len() % 2 == 0 { 1 } else { -1 };
            prop_assert_eq!(matrix_of_word(&a).det(), expected);
        }

        #[test]
        fn reversal_transposes(a in arb_word(10, 1, 9)) {
            let word = Word::new(a);
            prop_assert_eq!(word.reversed().matrix(), word.matrix().transpose());
        }

        #[test]
        fn normalize_preserves_value(a in prop::collection::vec(-5i64..=9, 1..=10)) {
            let word = Word::new(a);
            let before = eval_finite(&word);
            if let Ok(out) = normalize(&word) {
                prop_assert!(out.is_regular());
                if let (Ok(x), Ok(y)) = (before, eval_finite(&out)) {
                    prop_assert_eq!(x, y);
                }
            }
        }
    }
}
