//! Assembly of long periods from the words of the matrices `Nₙ`, and the
//! matching closed-form units.
//!
//! Three shapes are covered. With `C = diag(r, 1)` and `Nₙ = C⁻ⁿ N₀ Cⁿ`
//! factored into words of positive partial quotients, the period of `√D`
//! is `N_{k−1} … N₀` followed by a central block, the reversal, and
//! `2a₀`:
//!
//! | shape | `D`                              | `a₀`  | centre      |
//! |-------|----------------------------------|-------|-------------|
//! | 1     | `w·rᵏ/v + w²x²`                  | `wx`  | `2vx`       |
//! | 2     | `r²ᵏ + x²`                       | `x`   | none        |
//! | 3     | `rᵏ(rᵏ + 4qw) + (w + γ)²`        | `w+γ` | `2q, 2q`    |
//!
//! where `γ = q(rᵏ + 4qw)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::exact_arith::QuadRat;
use crate::num::pow;
use crate::word::{lemma1_check, matrix_of_word, Mat2, Word};

/// Inputs of the shape with a central quotient `2vx`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prop1Params {
    pub k: u64,
    pub u: BigInt,
    pub v: BigInt,
    pub w: BigInt,
    pub r: BigInt,
    pub x: BigRational,
}

/// Inputs of the shape without a central quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prop2Params {
    pub k: u64,
    pub u: BigInt,
    pub v: BigInt,
    pub x: BigInt,
    pub r: BigInt,
}

/// Inputs of the shape with the two central quotients `2q, 2q`. Here
/// `k = 0` is allowed and yields the period `2q, 2q, 2a₀`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prop3Params {
    pub k: u64,
    pub u: BigInt,
    pub v: BigInt,
    pub w: BigInt,
    pub q: BigInt,
    pub r: BigInt,
}

/// `√d = [a0; period]` as built from the `Nₙ` words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assembly {
    pub d: BigInt,
    pub a0: BigInt,
    pub period: Word<BigInt>,
}

fn violated(msg: impl Into<String>) -> Error {
    Error::HypothesisViolated(msg.into())
}

fn require_positive(name: &str, value: &BigInt) -> Result<()> {
    if value.is_positive() {
        Ok(())
    } else {
        Err(violated(format!("{name} = {value} must be positive")))
    }
}

fn to_integer(x: &BigRational, what: &str) -> Result<BigInt> {
    if x.is_integer() {
        Ok(x.to_integer())
    } else {
        Err(violated(format!("{what} = {x} must be an integer")))
    }
}

impl Prop1Params {
    fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(violated("k must be positive"));
        }
        for (name, value) in [
            ("u", &self.u),
            ("v", &self.v),
            ("w", &self.w),
            ("r", &self.r),
        ] {
            require_positive(name, value)?;
        }
        if !self.x.is_positive() {
            return Err(violated(format!("x = {} must be positive", self.x)));
        }
        if !(self.r.clone() * self.w.clone()).is_multiple_of(&self.v) {
            return Err(violated("r·w/v must be an integer"));
        }
        self.wx()?;
        self.two_vx()?;
        Ok(())
    }

    fn wx(&self) -> Result<BigInt> {
        to_integer(
            &(self.x.clone() * BigRational::from_integer(self.w.clone())),
            "w·x",
        )
    }

    fn two_vx(&self) -> Result<BigInt> {
        let two_v = BigRational::from_integer(self.v.clone() * 2);
        to_integer(&(self.x.clone() * two_v), "2·v·x")
    }

    /// `w·rᵏ/v + w²x²`.
    pub fn d(&self) -> Result<BigInt> {
        self.validate()?;
        let wx = self.wx()?;
        Ok(self.w.clone() * pow(&self.r, self.k) / self.v.clone() + wx.clone() * wx)
    }

    /// `[[u, r^{k−1−n}v], [rⁿw, ru − 2vwx]]`.
    pub fn n_matrix(&self, n: u64) -> Result<Mat2<BigInt>> {
        self.validate()?;
        let corner = self.r.clone() * self.u.clone() - self.two_vx()? * self.w.clone();
        Ok(Mat2::new(
            self.u.clone(),
            pow(&self.r, self.k - 1 - n) * self.v.clone(),
            pow(&self.r, n) * self.w.clone(),
            corner,
        ))
    }
}

impl Prop2Params {
    fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(violated("k must be positive"));
        }
        for (name, value) in [
            ("u", &self.u),
            ("v", &self.v),
            ("x", &self.x),
            ("r", &self.r),
        ] {
            require_positive(name, value)?;
        }
        Ok(())
    }

    /// `r²ᵏ + x²`.
    pub fn d(&self) -> Result<BigInt> {
        self.validate()?;
        Ok(pow(&self.r, 2 * self.k) + self.x.clone() * self.x.clone())
    }

    /// `[[u, r^{k−1−n}v], [r^{k+n}v, ru − 2vx]]`.
    pub fn n_matrix(&self, n: u64) -> Result<Mat2<BigInt>> {
        self.validate()?;
        let two_vx = self.v.clone() * self.x.clone() * 2;
        Ok(Mat2::new(
            self.u.clone(),
            pow(&self.r, self.k - 1 - n) * self.v.clone(),
            pow(&self.r, self.k + n) * self.v.clone(),
            self.r.clone() * self.u.clone() - two_vx,
        ))
    }
}

impl Prop3Params {
    fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("u", &self.u),
            ("v", &self.v),
            ("w", &self.w),
            ("q", &self.q),
            ("r", &self.r),
        ] {
            require_positive(name, value)?;
        }
        Ok(())
    }

    fn rk_plus_4qw(&self) -> BigInt {
        pow(&self.r, self.k) + self.q.clone() * self.w.clone() * 4
    }

    /// `γ = q(rᵏ + 4qw)`.
    pub fn gamma(&self) -> BigInt {
        self.q.clone() * self.rk_plus_4qw()
    }

    /// `rᵏ(rᵏ + 4qw) + (w + γ)²`.
    pub fn d(&self) -> Result<BigInt> {
        self.validate()?;
        let a0 = self.w.clone() + self.gamma();
        Ok(pow(&self.r, self.k) * self.rk_plus_4qw() + a0.clone() * a0)
    }

    /// `[[u, r^{k−1−n}v], [rⁿv(rᵏ + 4qw), ru − 2qrᵏv − 2(1 + 4q²)vw]]`.
    pub fn n_matrix(&self, n: u64) -> Result<Mat2<BigInt>> {
        self.validate()?;
        let (q, v, w) = (&self.q, &self.v, &self.w);
        let corner = self.r.clone() * self.u.clone()
            - q.clone() * pow(&self.r, self.k) * v.clone() * 2
            - (q.clone() * q.clone() * 4 + 1) * v.clone() * w.clone() * 2;
        Ok(Mat2::new(
            self.u.clone(),
            pow(&self.r, self.k - 1 - n) * v.clone(),
            pow(&self.r, n) * v.clone() * self.rk_plus_4qw(),
            corner,
        ))
    }
}

/// Checks `n_words[n]` against `Nₙ` and returns the forward block
/// `N_{k−1} … N₀`.
fn forward_block(
    k: u64,
    n_words: &[Word<BigInt>],
    n_matrix: impl Fn(u64) -> Result<Mat2<BigInt>>,
) -> Result<Vec<BigInt>> {
    if n_words.len() as u64 != k {
        return Err(violated(format!(
            "expected {k} words, got {}",
            n_words.len()
        )));
    }
    for (n, word) in n_words.iter().enumerate() {
        if word.is_empty() || !word.is_positive() {
            return Err(violated(format!("word {n} must have positive entries")));
        }
        let expected = n_matrix(n as u64)?;
        let got = matrix_of_word(word);
        if got != expected {
            return Err(violated(format!(
                "word {n} has matrix {got}, expected {expected}"
            )));
        }
    }
    Ok(n_words
        .iter()
        .rev()
        .flat_map(|w| w.iter().cloned())
        .collect())
}

/// Joins `forward, centre, reverse(forward), 2a0` and confirms with the
/// palindrome `a0, …, a0` that the result really expands `√d`.
fn finish(d: BigInt, a0: BigInt, forward: Vec<BigInt>, centre: &[BigInt]) -> Result<Assembly> {
    let mut period = forward.clone();
    period.extend_from_slice(centre);
    period.extend(forward.into_iter().rev());
    let mut palindrome = Vec::with_capacity(period.len() + 2);
    palindrome.push(a0.clone());
    palindrome.extend_from_slice(&period);
    palindrome.push(a0.clone());
    period.push(a0.clone() * 2);

    let check = lemma1_check(&Word::new(palindrome))?;
    if !check.ratio_ok || check.ratio() != BigRational::from_integer(d.clone()) {
        return Err(violated(format!(
            "assembled palindrome does not expand √{d}"
        )));
    }
    Ok(Assembly {
        d,
        a0,
        period: Word::new(period),
    })
}

pub fn prop1_assemble(p: &Prop1Params, n_words: &[Word<BigInt>]) -> Result<Assembly> {
    let d = p.d()?;
    let forward = forward_block(p.k, n_words, |n| p.n_matrix(n))?;
    finish(d, p.wx()?, forward, &[p.two_vx()?])
}

pub fn prop2_assemble(p: &Prop2Params, n_words: &[Word<BigInt>]) -> Result<Assembly> {
    let d = p.d()?;
    let forward = forward_block(p.k, n_words, |n| p.n_matrix(n))?;
    finish(d, p.x.clone(), forward, &[])
}

pub fn prop3_assemble(p: &Prop3Params, n_words: &[Word<BigInt>]) -> Result<Assembly> {
    let d = p.d()?;
    let forward = forward_block(p.k, n_words, |n| p.n_matrix(n))?;
    let two_q: BigInt = p.q.clone() * 2u32;
    finish(d, p.w.clone() + p.gamma(), forward, &[two_q.clone(), two_q])
}

fn lift(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

/// Accepts `x` only if it is an integral unit above 1.
fn into_unit(x: QuadRat<BigInt>) -> Result<QuadRat<BigInt>> {
    if x.is_unit() && x.exceeds_one() {
        Ok(x)
    } else {
        Err(Error::NonUnit(x.to_string()))
    }
}

/// `w(ru + v(√D − wx))^{2k} / (v(√D − wx)²)`.
pub fn prop1_unit(p: &Prop1Params) -> Result<QuadRat<BigInt>> {
    let d = p.d()?;
    let t = QuadRat::sqrt_of(d)?.add_rational(&-lift(&p.wx()?));
    let base = t
        .scale(&lift(&p.v))
        .add_rational(&lift(&(p.r.clone() * p.u.clone())));
    let num = base.pow(2 * p.k).scale(&lift(&p.w));
    let den = t.mul(&t)?.scale(&lift(&p.v));
    into_unit(num.div(&den)?)
}

/// `(x + √D)(u + v(√D − x)/r)^{2k}`.
pub fn prop2_unit(p: &Prop2Params) -> Result<QuadRat<BigInt>> {
    let d = p.d()?;
    let sqrt_d = QuadRat::sqrt_of(d)?;
    let v_over_r = BigRational::new(p.v.clone(), p.r.clone());
    let base = sqrt_d
        .add_rational(&-lift(&p.x))
        .scale(&v_over_r)
        .add_rational(&lift(&p.u));
    into_unit(sqrt_d.add_rational(&lift(&p.x)).mul(&base.pow(2 * p.k))?)
}

/// `(u + v(√D − w − γ)/r)^{2k} · q²(√D − w + γ)(√D + w + γ)² / γ²`.
pub fn prop3_unit(p: &Prop3Params) -> Result<QuadRat<BigInt>> {
    let d = p.d()?;
    let sqrt_d = QuadRat::sqrt_of(d)?;
    let gamma = p.gamma();
    let a0 = p.w.clone() + gamma.clone();
    let v_over_r = BigRational::new(p.v.clone(), p.r.clone());
    let base = sqrt_d
        .add_rational(&-lift(&a0))
        .scale(&v_over_r)
        .add_rational(&lift(&p.u));
    let left = sqrt_d.add_rational(&lift(&(gamma.clone() - p.w.clone())));
    let right = sqrt_d.add_rational(&lift(&a0));
    let q_over_gamma = BigRational::new(p.q.clone(), gamma);
    let tail = left
        .mul(&right.mul(&right)?)?
        .scale(&(q_over_gamma.clone() * q_over_gamma));
    into_unit(base.pow(2 * p.k).mul(&tail)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::{expand_sqrt, unit_from_expansion, DEFAULT_MAX_PERIOD};
    use num_traits::One;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn big(s: &str) -> BigInt {
        s.parse().unwrap()
    }

    fn word(v: &[i64]) -> Word<BigInt> {
        v.iter().map(|&a| b(a)).collect()
    }

    fn quad(d: &str, a: &str, c: &str) -> QuadRat<BigInt> {
        QuadRat::from_integers(big(d), big(a), big(c)).unwrap()
    }

    fn small_p1() -> Prop1Params {
        Prop1Params {
            k: 1,
            u: b(3),
            v: b(1),
            w: b(2),
            r: b(3),
            x: BigRational::from_integer(b(2)),
        }
    }

    /// The substitution taking the `a, m, s, k` family to shape 1.
    fn p1_from_t1(a: i64, m: i64, s: i64, k: u64) -> (Prop1Params, Vec<Word<BigInt>>) {
        let r = b(1 + 2 * a * m * s);
        let rk = pow(&r, k);
        let p = Prop1Params {
            k,
            u: pow(&r, k - 1) * (2 * a * a * m) + 1,
            v: b(a),
            w: b(2 * a * m),
            r: r.clone(),
            x: BigRational::new(rk * a + s, b(2 * a)),
        };
        let words = (0..k)
            .map(|n| Word::new(vec![pow(&r, k - 1 - n) * a, pow(&r, n) * (2 * a * m)]))
            .collect();
        (p, words)
    }

    fn p2_from_t2(bb: i64, s: i64, half_k: u64) -> (Prop2Params, Vec<Word<BigInt>>) {
        let r = b(4 * bb * s + 1);
        let p = Prop2Params {
            k: half_k,
            u: pow(&r, 2 * half_k - 1) * (4 * bb * bb) + 1,
            v: b(2 * bb),
            x: pow(&r, 2 * half_k) * bb + s,
            r: r.clone(),
        };
        let words = (0..half_k)
            .map(|n| {
                Word::new(vec![
                    pow(&r, half_k - 1 - n) * (2 * bb),
                    pow(&r, half_k + n) * (2 * bb),
                ])
            })
            .collect();
        (p, words)
    }

    fn p3_from_t2(bb: i64, s: i64, half_k: u64) -> (Prop3Params, Vec<Word<BigInt>>) {
        let r = b(4 * bb * s + 1);
        let p = Prop3Params {
            k: half_k,
            u: pow(&r, 2 * half_k) * (4 * bb * bb) + 1,
            v: b(2 * bb),
            w: b(s),
            q: pow(&r, half_k) * bb,
            r: r.clone(),
        };
        let words = (0..half_k)
            .map(|n| {
                Word::new(vec![
                    pow(&r, half_k - 1 - n) * (2 * bb),
                    pow(&r, half_k + n + 1) * (2 * bb),
                ])
            })
            .collect();
        (p, words)
    }

    #[test]
    fn shape1_small() {
        let got = prop1_assemble(&small_p1(), &[word(&[1, 2])]).unwrap();
        assert_eq!(got.d, b(22));
        assert_eq!(got.a0, b(4));
        assert_eq!(got.period, word(&[1, 2, 4, 2, 1, 8]));
        assert!(matches!(
            prop1_assemble(&small_p1(), &[word(&[2, 1])]),
            Err(Error::HypothesisViolated(_))
        ));
        assert_eq!(prop1_unit(&small_p1()).unwrap(), quad("22", "197", "42"));
    }

    #[test]
    fn shape1_integrality_hypotheses() {
        let mut p = small_p1();
        p.x = BigRational::new(b(1), b(3));
        assert!(matches!(p.d(), Err(Error::HypothesisViolated(_))));
        let mut p = small_p1();
        p.v = b(4);
        assert!(matches!(p.d(), Err(Error::HypothesisViolated(_))));
    }

    #[test]
    fn shape1_from_family() {
        let (p, words) = p1_from_t1(1, 1, 2, 1);
        assert_eq!(p.u, b(3));
        let got = prop1_assemble(&p, &words).unwrap();
        assert_eq!(got.d, b(59));
        assert_eq!(got.period, word(&[1, 2, 7, 2, 1, 14]));

        let (p, words) = p1_from_t1(5, 3, 7, 2);
        let got = prop1_assemble(&p, &words).unwrap();
        assert_eq!(got.d, big("446005190022"));
        assert_eq!(got.period.len(), 10);
        assert_eq!(
            prop1_unit(&p).unwrap(),
            quad(
                "446005190022",
                "149199899813252915906267542273",
                "223407925198820626278032"
            )
        );
    }

    #[test]
    fn shape2_from_family() {
        let (p, words) = p2_from_t2(1, 1, 1);
        assert_eq!((p.u.clone(), p.x.clone()), (b(21), b(26)));
        let got = prop2_assemble(&p, &words).unwrap();
        assert_eq!(got.d, b(701));
        assert_eq!(got.a0, b(26));
        assert_eq!(got.period, word(&[2, 10, 10, 2, 52]));
        assert_eq!(
            prop2_unit(&p).unwrap(),
            unit_from_expansion(&b(701)).unwrap().0
        );

        let (p, _) = p2_from_t2(5, 3, 2);
        assert_eq!(
            prop2_unit(&p).unwrap(),
            quad(
                "4792683254153105",
                "18375851029288260766491636025698114848",
                "265434944781468068474213871001"
            )
        );
    }

    #[test]
    fn shape2_rejects_bad_inputs() {
        let (mut p, words) = p2_from_t2(1, 1, 1);
        p.x = b(0);
        assert!(matches!(
            prop2_assemble(&p, &words),
            Err(Error::HypothesisViolated(_))
        ));
        let (mut p, _) = p2_from_t2(1, 1, 1);
        p.x = b(25);
        assert!(matches!(prop2_unit(&p), Err(Error::NonUnit(_))));
    }

    #[test]
    fn shape3_from_family() {
        let (p, words) = p3_from_t2(1, 1, 1);
        assert_eq!(p.gamma(), b(125));
        let got = prop3_assemble(&p, &words).unwrap();
        assert_eq!(got.d, b(16001));
        assert_eq!(got.period, word(&[2, 50, 10, 10, 50, 2, 252]));
        assert_eq!(
            prop3_unit(&p).unwrap(),
            quad("16001", "130839532", "1034345")
        );

        let (p, _) = p3_from_t2(2, 5, 1);
        assert_eq!(
            prop3_unit(&p).unwrap(),
            quad("19001864330", "2682318982172034563", "19458632525153")
        );
    }

    #[test]
    fn shape3_without_words() {
        // k = 0 leaves only the centre: √41 = [6; 2, 2, 12].
        let (p, words) = p3_from_t2(1, 1, 0);
        assert!(words.is_empty());
        let got = prop3_assemble(&p, &words).unwrap();
        assert_eq!(
            (got.d.clone(), got.period.clone()),
            (b(41), word(&[2, 2, 12]))
        );
        assert_eq!(prop3_unit(&p).unwrap(), quad("41", "32", "5"));
    }

    #[test]
    fn shape3_rejects_bad_inputs() {
        let (mut p, words) = p3_from_t2(1, 1, 1);
        p.q = b(0);
        assert!(matches!(
            prop3_assemble(&p, &words),
            Err(Error::HypothesisViolated(_))
        ));
        let (p, _) = p3_from_t2(1, 1, 1);
        assert!(matches!(
            prop3_assemble(&p, &[word(&[2, 49])]),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn assembled_lengths_and_oracle_agree() {
        for (a, m, s, k) in [(1, 1, 1, 1), (2, 1, 3, 2), (1, 3, 2, 3), (3, 2, 1, 4)] {
            let (p, words) = p1_from_t1(a, m, s, k);
            let total: usize = words.iter().map(|w| w.len()).sum();
            let got = prop1_assemble(&p, &words).unwrap();
            assert_eq!(got.period.len(), 2 * total + 2);
            let oracle = expand_sqrt(&got.d, DEFAULT_MAX_PERIOD).unwrap();
            assert_eq!((oracle.a0, oracle.period), (got.a0, got.period));
            let (unit, sign) = unit_from_expansion(&got.d).unwrap();
            let closed = prop1_unit(&p).unwrap();
            assert_eq!(closed, unit);
            assert!(closed.norm().abs().is_one());
            assert_eq!(closed.norm(), BigRational::from_integer(b(i64::from(sign))));
        }
        for (bb, s, kk) in [(1, 1, 1), (2, 1, 2), (1, 3, 3)] {
            let (p, words) = p2_from_t2(bb, s, kk);
            let got = prop2_assemble(&p, &words).unwrap();
            assert_eq!(got.period.len(), 4 * kk as usize + 1);
            assert_eq!(
                expand_sqrt(&got.d, DEFAULT_MAX_PERIOD).unwrap().period,
                got.period
            );

            let (p, words) = p3_from_t2(bb, s, kk);
            let got = prop3_assemble(&p, &words).unwrap();
            assert_eq!(got.period.len(), 4 * kk as usize + 3);
            assert_eq!(
                expand_sqrt(&got.d, DEFAULT_MAX_PERIOD).unwrap().period,
                got.period
            );
            assert_eq!(
                prop3_unit(&p).unwrap(),
                unit_from_expansion(&got.d).unwrap().0
            );
        }
    }
}
