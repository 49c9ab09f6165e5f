//! Periodic continued fractions of `√d` and the fundamental unit.
//!
//! The expansion runs the classical surd recurrence on the state `(P, Q)`
//! of `(P + √d) / Q`:
//!
//! ```text
//! aᵢ = ⌊(Pᵢ + ⌊√d⌋) / Qᵢ⌋,   Pᵢ₊₁ = aᵢQᵢ − Pᵢ,   Qᵢ₊₁ = (d − Pᵢ₊₁²) / Qᵢ
//! ```
//!
//! Only integers are touched, and the period ends when the state after
//! `a₀` comes round again.

use num_rational::Ratio;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_arith::{isqrt, QuadRat};
use crate::num::Int;
use crate::word::{matrix_of_word, Word};

pub const DEFAULT_MAX_PERIOD: usize = 1_000_000;

/// `√d = [a0; period, period, …]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PeriodicCf<T: Int> {
    pub d: T,
    pub a0: T,
    pub period: Word<T>,
}

impl<T: Int> PeriodicCf<T> {
    pub fn period_len(&self) -> usize {
        self.period.len()
    }

    /// `A_{s−1} + B_{s−1}√d` for period length `s`, with its norm `(−1)^s`.
    pub fn fundamental_unit(&self) -> (QuadRat<T>, i8) {
        let s = self.period_len();
        let m = matrix_of_word(&self.approximant_word(s - 1));
        let unit = QuadRat::from_integers(self.d.clone(), m.m11, m.m21)
            .expect("radicand was validated by the expansion");
        (unit, if s.is_multiple_of(2) { 1 } else { -1 })
    }

    /// `a0, a1, …, a_n`, reading past the period as often as needed.
    pub fn approximant_word(&self, n: usize) -> Vec<T> {
        std::iter::once(self.a0.clone())
            .chain(self.period.iter().cloned().cycle())
            .take(n + 1)
            .collect()
    }
}

impl<T: Int> std::fmt::Display for PeriodicCf<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}; {}] l={}", self.a0, self.period, self.period_len())
    }
}

/// The state `(P, Q)` of the complete quotient `(P + √d) / Q`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SurdState<T> {
    pub p: T,
    pub q: T,
}

/// Partial quotients of `(P + √d) / Q`, one per step.
#[derive(Clone, Debug)]
pub struct SurdQuotients<T> {
    d: T,
    root: T,
    state: SurdState<T>,
}

impl<T: Int> SurdQuotients<T> {
    /// Starts at `√d` itself, i.e. `(P, Q) = (0, 1)`.
    pub fn new(d: T) -> Result<Self> {
        let root = checked_root(&d)?;
        Ok(Self {
            d,
            root,
            state: SurdState {
                p: T::zero(),
                q: T::one(),
            },
        })
    }

    /// The state of the complete quotient whose partial quotient comes next.
    pub fn state(&self) -> &SurdState<T> {
        &self.state
    }
}

impl<T: Int> Iterator for SurdQuotients<T> {
    type Item = T;

    fn next(&mut self) -> Option<T> {
        let SurdState { p, q } = &self.state;
        let a = (p.clone() + self.root.clone()).div_floor(q);
        let p_next = a.clone() * q.clone() - p.clone();
        let q_next = (self.d.clone() - p_next.clone() * p_next.clone()) / q.clone();
        self.state = SurdState {
            p: p_next,
            q: q_next,
        };
        Some(a)
    }
}

fn checked_root<T: Int>(d: &T) -> Result<T> {
    if d.is_negative() {
        return Err(Error::InvalidRadicand(d.to_string()));
    }
    let (root, exact) = isqrt(d);
    if exact {
        return Err(Error::PerfectSquare(d.to_string()));
    }
    Ok(root)
}

/// Expands `√d`, giving up once the period exceeds `max_period`.
pub fn expand_sqrt<T: Int>(d: &T, max_period: usize) -> Result<PeriodicCf<T>> {
    let mut it = SurdQuotients::new(d.clone())?;
    let a0 = it.next().expect("quotients never run out");
    let first = it.state().clone();
    let mut period = Vec::new();
    loop {
        period.push(it.next().expect("quotients never run out"));
        if *it.state() == first {
            break;
        }
        if period.len() >= max_period {
            return Err(Error::PeriodTooLong {
                d: d.to_string(),
                max_period,
            });
        }
    }
    Ok(PeriodicCf {
        d: d.clone(),
        a0,
        period: Word::new(period),
    })
}

/// `A_i / B_i`, the `i`-th approximant.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Convergent<T> {
    pub index: usize,
    pub numerator: T,
    pub denominator: T,
}

/// Convergents `0..=upto` of `[a0; word]`, from `A₋₁ = 1, A₋₂ = 0` and
/// `B₋₁ = 0, B₋₂ = 1`.
pub fn convergents<T: Int>(a0: &T, word: &[T], upto: usize) -> Result<Vec<Convergent<T>>> {
    if upto > word.len() {
        return Err(Error::IndexOutOfRange {
            index: upto,
            max: word.len(),
        });
    }
    let (mut a_prev, mut a_prev2) = (T::one(), T::zero());
    let (mut b_prev, mut b_prev2) = (T::zero(), T::one());
    let mut out = Vec::with_capacity(upto + 1);
    for (index, q) in std::iter::once(a0).chain(word).take(upto + 1).enumerate() {
        let a = q.clone() * a_prev.clone() + a_prev2;
        let b = q.clone() * b_prev.clone() + b_prev2;
        a_prev2 = std::mem::replace(&mut a_prev, a.clone());
        b_prev2 = std::mem::replace(&mut b_prev, b.clone());
        out.push(Convergent {
            index,
            numerator: a,
            denominator: b,
        });
    }
    Ok(out)
}

/// Fundamental unit of `Z[√d]` read off the expansion, with its norm.
pub fn unit_from_expansion<T: Int>(d: &T) -> Result<(QuadRat<T>, i8)> {
    unit_from_expansion_with(d, DEFAULT_MAX_PERIOD)
}

pub fn unit_from_expansion_with<T: Int>(d: &T, max_period: usize) -> Result<(QuadRat<T>, i8)> {
    Ok(expand_sqrt(d, max_period)?.fundamental_unit())
}

/// Decides exactly whether `[a0; period, period, …]` is the square root of
/// a rational number, and in that case that it is `√(w/v)` for the matrix
/// `[[w, ·], [·, v]]` of `a0, p₁, …, p_{L−1}, p_L − a0`.
///
/// The value `x` of the expansion is the positive fixed point of the
/// Möbius map of `a0, p₁, …, p_L` composed with `x ↦ x − a0`, so the test
/// is the fixed-point identity `α(m21 + α·m22) = m11 + α·m12` for
/// `α = √(w/v)`, carried out in `Q(√(wv))`, together with `a0 = ⌊α⌋`.
pub fn eval_periodic_fixed_point<T: Int>(a0: &T, period: &[T]) -> bool {
    let Some((last, init)) = period.split_last() else {
        return false;
    };
    if a0.is_negative() || !period.iter().all(|p| p.is_positive()) {
        return false;
    }
    let mut word = Vec::with_capacity(period.len() + 1);
    word.push(a0.clone());
    word.extend_from_slice(init);
    word.push(last.clone() - a0.clone());
    let m = matrix_of_word(&word);
    let (w, v) = (m.m11.clone(), m.m22.clone());
    if !w.is_positive() || !v.is_positive() {
        return false;
    }

    let Ok(alpha) = QuadRat::new(
        w.clone() * v.clone(),
        Ratio::zero(),
        Ratio::new(T::one(), v.clone()),
    ) else {
        // w·v a square makes α rational, but a periodic expansion is not.
        return false;
    };
    let lift = |t: &T| Ratio::from_integer(t.clone());
    let lhs = alpha
        .scale(&lift(&m.m22))
        .add_rational(&lift(&m.m21))
        .mul(&alpha)
        .expect("same radicand");
    let rhs = alpha.scale(&lift(&m.m12)).add_rational(&lift(&m.m11));
    if lhs != rhs {
        return false;
    }

    let a1 = a0.clone() + T::one();
    a0.clone() * a0.clone() * v.clone() <= w && w < a1.clone() * a1 * v
}

/// The identity `A² − d·B² = ±1` for an integral pair.
pub fn is_pell_solution<T: Int>(d: &T, a: &T, b: &T) -> Option<i8> {
    let n = a.clone() * a.clone() - d.clone() * b.clone() * b.clone();
    if n.is_one() {
        Some(1)
    } else if (-n).is_one() {
        Some(-1)
    } else {
        None
    }
}
