//! The named long-period families: radicand, predicted expansion and,
//! where a closed form exists, the fundamental unit.
//!
//! Each generator is transcribed from its displayed expansion. Two
//! independent routes back them up: substituting negative parameters into
//! the `T1`/`T2` templates and normalizing ([`derive_by_signflip`]), and
//! specializing a parent family ([`derive_by_specialization`]).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_arith::QuadRat;
use crate::num::pow;
use crate::props::{
    prop1_assemble, prop1_unit, prop2_assemble, prop2_unit, prop3_assemble, prop3_unit, Assembly,
    Prop1Params, Prop2Params, Prop3Params,
};
use crate::word::{normalize_periodic, Word, DEFAULT_REWRITE_BUDGET};

#[allow(non_camel_case_types)]
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyId {
    T1,
    T1A,
    C_6KM2,
    T1B,
    C_6K,
    T1C,
    C1_8K,
    C2_8KM4,
    C3_8K,
    T2,
    C6_6KP1,
    C7_6KP5,
    MADDEN_INTRO,
}

impl FamilyId {
    pub const ALL: [FamilyId; 13] = [
        FamilyId::T1,
        FamilyId::T1A,
        FamilyId::C_6KM2,
        FamilyId::T1B,
        FamilyId::C_6K,
        FamilyId::T1C,
        FamilyId::C1_8K,
        FamilyId::C2_8KM4,
        FamilyId::C3_8K,
        FamilyId::T2,
        FamilyId::C6_6KP1,
        FamilyId::C7_6KP5,
        FamilyId::MADDEN_INTRO,
    ];

    /// Families reachable from a template by negating parameters.
    pub const SIGN_FLIP: [FamilyId; 5] = [
        FamilyId::T1A,
        FamilyId::T1B,
        FamilyId::T1C,
        FamilyId::C6_6KP1,
        FamilyId::C7_6KP5,
    ];

    /// Families obtained by fixing `a` (and sometimes `m`) in a parent.
    pub const SPECIALIZED: [FamilyId; 5] = [
        FamilyId::C_6KM2,
        FamilyId::C_6K,
        FamilyId::C1_8K,
        FamilyId::C2_8KM4,
        FamilyId::C3_8K,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyId::T1 => "T1",
            FamilyId::T1A => "T1A",
            FamilyId::C_6KM2 => "C_6KM2",
            FamilyId::T1B => "T1B",
            FamilyId::C_6K => "C_6K",
            FamilyId::T1C => "T1C",
            FamilyId::C1_8K => "C1_8K",
            FamilyId::C2_8KM4 => "C2_8KM4",
            FamilyId::C3_8K => "C3_8K",
            FamilyId::T2 => "T2",
            FamilyId::C6_6KP1 => "C6_6KP1",
            FamilyId::C7_6KP5 => "C7_6KP5",
            FamilyId::MADDEN_INTRO => "MADDEN_INTRO",
        }
    }

    /// Parameter names in their canonical order; `k` is always last.
    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            FamilyId::T1 | FamilyId::T1A | FamilyId::T1B | FamilyId::T1C => &["a", "m", "s", "k"],
            FamilyId::C_6KM2 | FamilyId::C_6K | FamilyId::C1_8K | FamilyId::C3_8K => {
                &["m", "s", "k"]
            }
            FamilyId::C2_8KM4 => &["s", "k"],
            FamilyId::T2 | FamilyId::C6_6KP1 | FamilyId::C7_6KP5 => &["b", "s", "k"],
            FamilyId::MADDEN_INTRO => &["b", "n", "k"],
        }
    }

    /// Smallest admissible value of each parameter taken on its own.
    pub fn param_min(self, name: &str) -> u64 {
        match (self, name) {
            (FamilyId::T1A | FamilyId::T1B, "a") => 2,
            (FamilyId::T1C, "a") => 3,
            (FamilyId::C1_8K, "m") => 2,
            (FamilyId::C1_8K | FamilyId::C3_8K, "k") => 2,
            (FamilyId::C2_8KM4, "k") => 3,
            _ => 1,
        }
    }

    /// Period length as a function of `k`.
    pub fn period_length(self, k: u64) -> u64 {
        match self {
            FamilyId::T1 | FamilyId::MADDEN_INTRO => 4 * k + 2,
            FamilyId::T1A => 6 * k + 2,
            FamilyId::C_6KM2 => 6 * k - 2,
            FamilyId::T1B => 6 * k + 4,
            FamilyId::C_6K => 6 * k,
            FamilyId::T1C => 8 * k + 4,
            FamilyId::C1_8K | FamilyId::C3_8K => 8 * k,
            FamilyId::C2_8KM4 => 8 * k - 4,
            FamilyId::T2 => 2 * k + 1,
            FamilyId::C6_6KP1 => 6 * k + 1,
            FamilyId::C7_6KP5 => 6 * k + 5,
        }
    }

    pub fn has_unit(self) -> bool {
        matches!(
            self,
            FamilyId::T1 | FamilyId::T1A | FamilyId::T2 | FamilyId::MADDEN_INTRO
        )
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }
}

impl Serialize for FamilyId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// Named positive-integer parameters, e.g. `a=1,m=1,s=1,k=1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Params(BTreeMap<String, u64>);

impl Params {
    pub fn new() -> Self {
        Params::default()
    }

    pub fn with(mut self, name: &str, value: u64) -> Self {
        self.0.insert(name.to_string(), value);
        self
    }

    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, u64)>) -> Self {
        pairs
            .into_iter()
            .fold(Params::new(), |p, (n, v)| p.with(n, v))
    }

    pub fn get(&self, name: &str) -> Option<u64> {
        self.0.get(name).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }

    /// Values in the family's canonical order, for sorting and display.
    pub fn tuple(&self, id: FamilyId) -> Vec<u64> {
        id.param_names()
            .iter()
            .map(|n| self.get(n).unwrap_or(0))
            .collect()
    }

    pub fn display_for(&self, id: FamilyId) -> String {
        id.param_names()
            .iter()
            .map(|n| match self.get(n) {
                Some(v) => format!("{n}={v}"),
                None => format!("{n}=?"),
            })
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl FromStr for Params {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut out = Params::new();
        for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (name, value) = item
                .split_once('=')
                .ok_or_else(|| Error::Inadmissible(format!("expected name=value, got `{item}`")))?;
            let value: u64 = value.trim().parse().map_err(|_| {
                Error::Inadmissible(format!("`{value}` is not a non-negative integer"))
            })?;
            let name = name.trim();
            if out.get(name).is_some() {
                return Err(Error::Inadmissible(format!("parameter {name} given twice")));
            }
            out = out.with(name, value);
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Admissibility {
    Admissible,
    Inadmissible(String),
}

impl Admissibility {
    pub fn is_admissible(&self) -> bool {
        matches!(self, Admissibility::Admissible)
    }
}

/// Checks the family's hypotheses, including the two extra conditions
/// without which the stated period length fails: `ms > 1` for `C_6K`
/// (`m = s = 1` gives `D = 2`) and `m > 1` for `C1_8K` (`m = 1` produces a
/// zero quotient and lands in `C2_8KM4`).
pub fn admissible(id: FamilyId, params: &Params) -> Admissibility {
    use Admissibility::Inadmissible as No;
    for (name, _) in params.iter() {
        if !id.param_names().contains(&name) {
            return No(format!("unknown parameter {name} for {id}"));
        }
    }
    for &name in id.param_names() {
        let Some(v) = params.get(name) else {
            return No(format!("missing parameter {name}"));
        };
        if v == 0 {
            return No(format!("{name} must be positive"));
        }
        let min = id.param_min(name);
        if v < min {
            return No(format!("{name}>{} required", min - 1));
        }
    }
    let get = |n| params.get(n).unwrap_or(0);
    match id {
        FamilyId::C_6KM2 | FamilyId::C_6K | FamilyId::C1_8K if get("m") * get("s") <= 1 => {
            No("ms>1 required".into())
        }
        _ => Admissibility::Admissible,
    }
}

fn check(id: FamilyId, params: &Params) -> Result<()> {
    match admissible(id, params) {
        Admissibility::Admissible => Ok(()),
        Admissibility::Inadmissible(reason) => Err(Error::Inadmissible(format!("{id}: {reason}"))),
    }
}

/// Which reading of the displayed expansions to follow.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Transcription {
    /// Displays with the misprints fixed; agrees with the expansion.
    #[default]
    Corrected,
    /// Displays exactly as typeset, misprints included.
    AsPrinted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyInstance {
    pub id: FamilyId,
    pub params: Params,
    pub d: BigInt,
    pub a0: BigInt,
    pub predicted_period: Word<BigInt>,
    pub predicted_len: usize,
    pub predicted_unit: Option<QuadRat<BigInt>>,
}

/// `D`, `a₀` and the period.
type Expansion = (BigInt, BigInt, Vec<BigInt>);

fn big(v: u64) -> BigInt {
    BigInt::from(v)
}

/// Closes a period `forward, centre, mirror, last`.
fn join(forward: Vec<BigInt>, centre: &[BigInt], mirror: Vec<BigInt>, last: BigInt) -> Vec<BigInt> {
    let mut out = forward;
    out.extend_from_slice(centre);
    out.extend(mirror);
    out.push(last);
    out
}

fn reversed(v: &[BigInt]) -> Vec<BigInt> {
    v.iter().rev().cloned().collect()
}

fn t1(a: u64, m: u64, s: u64, k: u64) -> Expansion {
    let (a, m, s) = (big(a), big(m), big(s));
    let r: BigInt = a.clone() * &m * &s * 2 + 1;
    let rk: BigInt = pow(&r, k);
    let c: BigInt = s + a.clone() * &rk;
    let d: BigInt = m.clone() * (rk * 2 + m.clone() * &c * &c);
    let a0: BigInt = m.clone() * &c;
    let mut f = Vec::new();
    for n in 0..k {
        f.push(a.clone() * pow(&r, n));
        f.push(a.clone() * &m * 2 * pow(&r, k - 1 - n));
    }
    let mirror = reversed(&f);
    (d, a0.clone(), join(f, &[c], mirror, a0 * 2))
}

fn madden(b: u64, n: u64, k: u64) -> Expansion {
    let (b, n) = (big(b), big(n));
    let r: BigInt = b.clone() * &n * 2 + 1;
    let rk: BigInt = pow(&r, k);
    let a0: BigInt = b.clone() * &rk + &n;
    let d: BigInt = a0.clone() * &a0 + rk * 2;
    let f: Vec<BigInt> = (0..k)
        .flat_map(|i| [b.clone() * pow(&r, i), b.clone() * 2 * pow(&r, k - 1 - i)])
        .collect();
    let mirror = reversed(&f);
    (
        d,
        a0.clone(),
        join(f, std::slice::from_ref(&a0), mirror, &a0 * 2),
    )
}

fn t1a(a: u64, m: u64, s: u64, k: u64, mode: Transcription) -> Expansion {
    let (a, m, s) = (big(a), big(m), big(s));
    let r: BigInt = a.clone() * &m * &s * 2 - 1;
    let misprinted: BigInt = a.clone() * &m * &s * 2 + 1;
    let rk: BigInt = pow(&r, k);
    let c: BigInt = a.clone() * &rk - &s;
    let d: BigInt = m.clone() * (rk * 2 + m.clone() * &c * &c);
    let a0: BigInt = m.clone() * &c;
    let am2: BigInt = a.clone() * &m * 2;
    let mut f = Vec::new();
    for n in 0..k {
        f.extend([
            a.clone() * pow(&r, n) - 1,
            big(1),
            am2.clone() * pow(&r, k - 1 - n) - 1,
        ]);
    }
    let mut mirror = Vec::new();
    for n in (0..k).rev() {
        let base = if mode == Transcription::AsPrinted && n >= 1 && (n == 1 || n == k - 1) {
            &misprinted
        } else {
            &r
        };
        mirror.extend([
            am2.clone() * pow(&r, k - 1 - n) - 1,
            big(1),
            a.clone() * pow(base, n) - 1,
        ]);
    }
    (d, a0.clone(), join(f, &[c], mirror, a0 * 2))
}

fn c_6km2(m: u64, s: u64, k: u64, mode: Transcription) -> Expansion {
    let (m, s) = (big(m), big(s));
    let r: BigInt = m.clone() * &s * 2 - 1;
    let misprinted: BigInt = m.clone() * &s * 2 + 1;
    let rk: BigInt = pow(&r, k);
    let c: BigInt = rk.clone() - &s;
    let d: BigInt = m.clone() * (rk * 2 + m.clone() * &c * &c);
    let a0: BigInt = m.clone() * &c + 1;
    let m2: BigInt = m.clone() * 2;
    let head: BigInt = m2.clone() * pow(&r, k - 1) - 1;
    let mut f = vec![head.clone()];
    for n in 1..k {
        f.extend([pow(&r, n) - 1, big(1), m2.clone() * pow(&r, k - 1 - n) - 1]);
    }
    let mut mirror = Vec::new();
    for n in (1..k).rev() {
        let base = if mode == Transcription::AsPrinted && (n == 1 || n == k - 1) {
            &misprinted
        } else {
            &r
        };
        mirror.extend([
            m2.clone() * pow(&r, k - 1 - n) - 1,
            big(1),
            pow(base, n) - 1,
        ]);
    }
    mirror.push(head);
    (d, a0.clone(), join(f, &[c], mirror, a0 * 2))
}

fn t1b(a: u64, m: u64, s: u64, k: u64) -> Expansion {
    let (a, m, s) = (big(a), big(m), big(s));
    let r: BigInt = a.clone() * &m * &s * 2 - 1;
    let rk: BigInt = pow(&r, k);
    let c: BigInt = s + a.clone() * &rk;
    let d: BigInt = m.clone() * (m.clone() * &c * &c - rk * 2);
    let a0: BigInt = m.clone() * &c - 1;
    let am2: BigInt = a.clone() * &m * 2;
    let mut f = Vec::new();
    for n in 0..k {
        f.extend([
            big(1),
            a.clone() * pow(&r, n) - 1,
            am2.clone() * pow(&r, k - 1 - n) - 1,
        ]);
    }
    let mirror = reversed(&f);
    (
        d,
        a0.clone(),
        join(f, &[big(1), c - 2, big(1)], mirror, a0 * 2),
    )
}

fn c_6k(m: u64, s: u64, k: u64) -> Expansion {
    let (m, s) = (big(m), big(s));
    let r: BigInt = m.clone() * &s * 2 - 1;
    let rk: BigInt = pow(&r, k);
    let c: BigInt = s + &rk;
    let d: BigInt = m.clone() * (m.clone() * &c * &c - rk * 2);
    let a0: BigInt = m.clone() * &c - 1;
    let m2: BigInt = m.clone() * 2;
    let mut f = vec![m2.clone() * pow(&r, k - 1)];
    for n in 1..k {
        f.extend([big(1), pow(&r, n) - 1, m2.clone() * pow(&r, k - 1 - n) - 1]);
    }
    let mirror = reversed(&f);
    (
        d,
        a0.clone(),
        join(f, &[big(1), c - 2, big(1)], mirror, a0 * 2),
    )
}

fn t1c(a: u64, m: u64, s: u64, k: u64) -> Expansion {
    let (a, m, s) = (big(a), big(m), big(s));
    let r: BigInt = a.clone() * &m * &s * 2 + 1;
    let rk: BigInt = pow(&r, k);
    let c: BigInt = a.clone() * &rk - s;
    let d: BigInt = m.clone() * (m.clone() * &c * &c - rk * 2);
    let a0: BigInt = m.clone() * &c - 1;
    let am2: BigInt = a.clone() * &m * 2;
    let mut f = Vec::new();
    for n in 0..k {
        f.extend([
            big(1),
            a.clone() * pow(&r, n) - 2,
            big(1),
            am2.clone() * pow(&r, k - 1 - n) - 2,
        ]);
    }
    let mirror = reversed(&f);
    (
        d,
        a0.clone(),
        join(f, &[big(1), c - 2, big(1)], mirror, a0 * 2),
    )
}

fn c1_8k(m: u64, s: u64, k: u64) -> Expansion {
    let (m, s) = (big(m), big(s));
    let r: BigInt = m.clone() * &s * 2 + 1;
    let rk: BigInt = pow(&r, k);
    let c: BigInt = rk.clone() - s;
    let d: BigInt = m.clone() * (m.clone() * &c * &c - rk * 2);
    let a0: BigInt = m.clone() * &c - 2;
    let m2: BigInt = m.clone() * 2;
    let mut f = vec![big(1), m2.clone() * pow(&r, k - 1) - 3];
    for n in 1..k {
        f.extend([
            big(1),
            pow(&r, n) - 2,
            big(1),
            m2.clone() * pow(&r, k - 1 - n) - 2,
        ]);
    }
    let mirror = reversed(&f);
    (
        d,
        a0.clone(),
        join(f, &[big(1), c - 2, big(1)], mirror, a0 * 2),
    )
}

fn c2_8km4(s: u64, k: u64, mode: Transcription) -> Expansion {
    let s = big(s);
    let r: BigInt = s.clone() * 2 + 1;
    let rk: BigInt = pow(&r, k);
    let c: BigInt = rk.clone() - &s;
    let d: BigInt = c.clone() * &c - rk.clone() * 2;
    let a0: BigInt = c.clone() - 2;
    let printed = mode == Transcription::AsPrinted;

    let mut f = vec![big(1), pow(&r, k - 1) * 2 - 3];
    for n in 1..k - 1 {
        f.extend([big(1), pow(&r, n) - 2, big(1), pow(&r, k - 1 - n) * 2 - 2]);
    }
    f.extend([big(1), pow(&r, k - 1) - 2, big(2)]);

    let mut mirror = vec![big(2), pow(&r, k - 1) - 2, big(1)];
    for n in (1..k - 1).rev() {
        let e = if printed && n == k - 2 { k - 1 } else { n };
        mirror.extend([pow(&r, k - 1 - n) * 2 - 2, big(1), pow(&r, e) - 2, big(1)]);
    }
    mirror.extend([pow(&r, k - 1) * 2 - 3, big(1)]);

    let last: BigInt = if printed {
        (s + rk) * 2 - 4
    } else {
        a0.clone() * 2
    };
    (d, a0, join(f, &[c - 2], mirror, last))
}

fn c3_8k(m: u64, s: u64, k: u64) -> Expansion {
    let (m, s) = (big(m), big(s));
    let r: BigInt = m.clone() * &s * 4 + 1;
    let rk: BigInt = pow(&r, k);
    let c: BigInt = rk.clone() * 2 - s;
    let d: BigInt = m.clone() * (m.clone() * &c * &c - rk * 2);
    let a0: BigInt = m.clone() * &c - 1;
    let m4: BigInt = m.clone() * 4;
    let mut f = vec![big(2), m4.clone() * pow(&r, k - 1) - 2];
    for n in 1..k {
        f.extend([
            big(1),
            pow(&r, n) * 2 - 2,
            big(1),
            m4.clone() * pow(&r, k - 1 - n) - 2,
        ]);
    }
    let mirror = reversed(&f);
    (
        d,
        a0.clone(),
        join(f, &[big(1), c - 2, big(1)], mirror, a0 * 2),
    )
}

fn t2(b: u64, s: u64, k: u64) -> Expansion {
    let (b, s) = (big(b), big(s));
    let r: BigInt = b.clone() * &s * 4 + 1;
    let rk: BigInt = pow(&r, k);
    let a0: BigInt = b.clone() * &rk + s;
    let d: BigInt = rk + a0.clone() * &a0;
    let mut period: Vec<BigInt> = (0..k)
        .flat_map(|i| {
            [
                b.clone() * 2 * pow(&r, i),
                b.clone() * 2 * pow(&r, k - 1 - i),
            ]
        })
        .collect();
    period.push(a0.clone() * 2);
    (d, a0, period)
}

fn c6_6kp1(b: u64, s: u64, k: u64, mode: Transcription) -> Expansion {
    let (b, s) = (big(b), big(s));
    let r: BigInt = b.clone() * &s * 4 - 1;
    let r2k: BigInt = pow(&r, 2 * k);
    let a0: BigInt = b.clone() * &r2k - s;
    let d: BigInt = r2k + a0.clone() * &a0;
    let b2: BigInt = b.clone() * 2;
    let mut period = Vec::new();
    for i in 0..2 * k {
        let dropped = mode == Transcription::AsPrinted && k >= 3 && i == 2 * k - 3;
        period.push(b2.clone() * pow(&r, i) - 1);
        if !dropped {
            period.push(big(1));
        }
        period.push(b2.clone() * pow(&r, 2 * k - 1 - i) - 1);
    }
    period.push(a0.clone() * 2);
    (d, a0, period)
}

fn c7_6kp5(b: u64, s: u64, k: u64, mode: Transcription) -> Expansion {
    let (b, s) = (big(b), big(s));
    let r: BigInt = b.clone() * &s * 4 - 1;
    let rk: BigInt = pow(&r, 2 * k + 1);
    let top: BigInt = b.clone() * &rk + &s;
    let d: BigInt = top.clone() * &top - rk;
    let a0: BigInt = top.clone() - 1;
    let b2: BigInt = b.clone() * 2;
    let f: Vec<BigInt> = (0..k)
        .flat_map(|i| {
            [
                big(1),
                b2.clone() * pow(&r, i) - 1,
                b2.clone() * pow(&r, 2 * k - i) - 1,
            ]
        })
        .collect();
    let centre: BigInt = b2 * pow(&r, k) - 1;
    let mirror = reversed(&f);
    let last: BigInt = if mode == Transcription::AsPrinted {
        (top - 2) * 2
    } else {
        a0.clone() * 2
    };
    (
        d,
        a0,
        join(f, &[big(1), centre.clone(), centre, big(1)], mirror, last),
    )
}

fn expansion(id: FamilyId, p: &Params, mode: Transcription) -> Expansion {
    let g = |n: &str| p.get(n).expect("checked by admissible");
    match id {
        FamilyId::T1 => t1(g("a"), g("m"), g("s"), g("k")),
        FamilyId::T1A => t1a(g("a"), g("m"), g("s"), g("k"), mode),
        FamilyId::C_6KM2 => c_6km2(g("m"), g("s"), g("k"), mode),
        FamilyId::T1B => t1b(g("a"), g("m"), g("s"), g("k")),
        FamilyId::C_6K => c_6k(g("m"), g("s"), g("k")),
        FamilyId::T1C => t1c(g("a"), g("m"), g("s"), g("k")),
        FamilyId::C1_8K => c1_8k(g("m"), g("s"), g("k")),
        FamilyId::C2_8KM4 => c2_8km4(g("s"), g("k"), mode),
        FamilyId::C3_8K => c3_8k(g("m"), g("s"), g("k")),
        FamilyId::T2 => t2(g("b"), g("s"), g("k")),
        FamilyId::C6_6KP1 => c6_6kp1(g("b"), g("s"), g("k"), mode),
        FamilyId::C7_6KP5 => c7_6kp5(g("b"), g("s"), g("k"), mode),
        FamilyId::MADDEN_INTRO => madden(g("b"), g("n"), g("k")),
    }
}

pub fn generate(id: FamilyId, params: &Params) -> Result<FamilyInstance> {
    generate_with(id, params, Transcription::Corrected)
}

pub fn generate_with(id: FamilyId, params: &Params, mode: Transcription) -> Result<FamilyInstance> {
    check(id, params)?;
    let (d, a0, period) = expansion(id, params, mode);
    let predicted_unit = match prop_form(id, params) {
        Some(form) => Some(form.unit()?),
        None => None,
    };
    Ok(FamilyInstance {
        id,
        params: params.clone(),
        d,
        a0,
        predicted_len: period.len(),
        predicted_period: Word::new(period),
        predicted_unit,
    })
}

/// Differences between the typeset and corrected expansions, as
/// human-readable notes.
pub fn display_errata(id: FamilyId, params: &Params) -> Result<Vec<String>> {
    check(id, params)?;
    let (_, _, good) = expansion(id, params, Transcription::Corrected);
    let (_, _, printed) = expansion(id, params, Transcription::AsPrinted);
    if good == printed {
        return Ok(Vec::new());
    }
    if good.len() != printed.len() {
        return Ok(vec![format!(
            "display-mismatch: printed period has {} entries, expansion has {}",
            printed.len(),
            good.len()
        )]);
    }
    Ok(good
        .iter()
        .zip(&printed)
        .enumerate()
        .filter(|(_, (g, p))| g != p)
        .map(|(i, (g, p))| {
            format!(
                "display-mismatch: entry {} printed {p}, expansion has {g}",
                i + 1
            )
        })
        .collect())
}

/// A family instance written in one of the three assembly shapes.
#[derive(Clone, Debug)]
pub enum PropForm {
    One(Prop1Params, Vec<Word<BigInt>>),
    Two(Prop2Params, Vec<Word<BigInt>>),
    Three(Prop3Params, Vec<Word<BigInt>>),
}

impl PropForm {
    pub fn assemble(&self) -> Result<Assembly> {
        match self {
            PropForm::One(p, w) => prop1_assemble(p, w),
            PropForm::Two(p, w) => prop2_assemble(p, w),
            PropForm::Three(p, w) => prop3_assemble(p, w),
        }
    }

    pub fn unit(&self) -> Result<QuadRat<BigInt>> {
        match self {
            PropForm::One(p, _) => prop1_unit(p),
            PropForm::Two(p, _) => prop2_unit(p),
            PropForm::Three(p, _) => prop3_unit(p),
        }
    }
}

/// The `a, m, s, k` family as shape 1, with `Nₙ = a·r^{k−1−n}, 2am·rⁿ`.
fn t1_form(a: u64, m: u64, s: u64, k: u64) -> PropForm {
    let (a, m, s) = (big(a), big(m), big(s));
    let r: BigInt = a.clone() * &m * &s * 2 + 1;
    let w: BigInt = a.clone() * &m * 2;
    let params = Prop1Params {
        k,
        u: a.clone() * &w * pow(&r, k - 1) + 1,
        v: a.clone(),
        w: w.clone(),
        r: r.clone(),
        x: BigRational::new(s + a.clone() * pow(&r, k), a.clone() * 2),
    };
    let words = (0..k)
        .map(|n| Word::new(vec![a.clone() * pow(&r, k - 1 - n), w.clone() * pow(&r, n)]))
        .collect();
    PropForm::One(params, words)
}

/// `T1A` as shape 1, with `Nₙ = a·r^{k−1−n} − 1, 1, 2am·rⁿ − 1`.
fn t1a_form(a: u64, m: u64, s: u64, k: u64) -> PropForm {
    let (a, m, s) = (big(a), big(m), big(s));
    let r: BigInt = a.clone() * &m * &s * 2 - 1;
    let w: BigInt = a.clone() * &m * 2;
    let params = Prop1Params {
        k,
        u: a.clone() * &w * pow(&r, k - 1) - 1,
        v: a.clone(),
        w: w.clone(),
        r: r.clone(),
        x: BigRational::new(a.clone() * pow(&r, k) - s, a.clone() * 2),
    };
    let words = (0..k)
        .map(|n| {
            Word::new(vec![
                a.clone() * pow(&r, k - 1 - n) - 1,
                big(1),
                w.clone() * pow(&r, n) - 1,
            ])
        })
        .collect();
    PropForm::One(params, words)
}

/// `T2` as shape 2 for even `k = 2K` and shape 3 for odd `k = 2K + 1`.
fn t2_form(b: u64, s: u64, k: u64) -> PropForm {
    let (b, s) = (big(b), big(s));
    let r: BigInt = b.clone() * &s * 4 + 1;
    let v: BigInt = b.clone() * 2;
    let half = k / 2;
    let bb4: BigInt = b.clone() * &b * 4;
    if k.is_multiple_of(2) {
        let params = Prop2Params {
            k: half,
            u: bb4 * pow(&r, 2 * half - 1) + 1,
            v: v.clone(),
            x: s + b.clone() * pow(&r, 2 * half),
            r: r.clone(),
        };
        let words = (0..half)
            .map(|n| {
                Word::new(vec![
                    v.clone() * pow(&r, half - 1 - n),
                    v.clone() * pow(&r, half + n),
                ])
            })
            .collect();
        PropForm::Two(params, words)
    } else {
        let params = Prop3Params {
            k: half,
            u: bb4 * pow(&r, 2 * half) + 1,
            v: v.clone(),
            w: s,
            q: b.clone() * pow(&r, half),
            r: r.clone(),
        };
        let words = (0..half)
            .map(|n| {
                Word::new(vec![
                    v.clone() * pow(&r, half - 1 - n),
                    v.clone() * pow(&r, half + n + 1),
                ])
            })
            .collect();
        PropForm::Three(params, words)
    }
}

/// The assembly-shape description of an instance, for the families that
/// have a closed-form unit.
pub fn prop_form(id: FamilyId, params: &Params) -> Option<PropForm> {
    if !admissible(id, params).is_admissible() {
        return None;
    }
    let g = |n: &str| params.get(n).unwrap_or(0);
    match id {
        FamilyId::T1 => Some(t1_form(g("a"), g("m"), g("s"), g("k"))),
        FamilyId::MADDEN_INTRO => Some(t1_form(g("b"), 1, g("n"), g("k"))),
        FamilyId::T1A => Some(t1a_form(g("a"), g("m"), g("s"), g("k"))),
        FamilyId::T2 => Some(t2_form(g("b"), g("s"), g("k"))),
        _ => None,
    }
}

/// The `T1` expansion with signed parameters, as a formal word.
fn t1_template(a: i64, m: i64, s: i64, k: u64) -> (BigInt, BigInt, Word<BigInt>) {
    let (a, m, s) = (BigInt::from(a), BigInt::from(m), BigInt::from(s));
    let r: BigInt = a.clone() * &m * &s * 2 + 1;
    let rk: BigInt = pow(&r, k);
    let c: BigInt = s + a.clone() * &rk;
    let d: BigInt = m.clone() * (rk * 2 + m.clone() * &c * &c);
    let a0: BigInt = m.clone() * &c;
    let mut f = Vec::new();
    for n in 0..k {
        f.push(a.clone() * pow(&r, n));
        f.push(a.clone() * &m * 2 * pow(&r, k - 1 - n));
    }
    let mirror = reversed(&f);
    (d, a0.clone(), Word::new(join(f, &[c], mirror, a0 * 2)))
}

/// The `T2` expansion with signed parameters, as a formal word.
fn t2_template(b: i64, s: i64, k: u64) -> (BigInt, BigInt, Word<BigInt>) {
    let (b, s) = (BigInt::from(b), BigInt::from(s));
    let r: BigInt = b.clone() * &s * 4 + 1;
    let rk: BigInt = pow(&r, k);
    let a0: BigInt = b.clone() * &rk + s;
    let d: BigInt = rk + a0.clone() * &a0;
    let mut period: Vec<BigInt> = (0..k)
        .flat_map(|i| {
            [
                b.clone() * 2 * pow(&r, i),
                b.clone() * 2 * pow(&r, k - 1 - i),
            ]
        })
        .collect();
    period.push(a0.clone() * 2);
    (d, a0, Word::new(period))
}

fn signed(v: u64) -> Result<i64> {
    i64::try_from(v).map_err(|_| Error::Inadmissible(format!("{v} is too large for a sign flip")))
}

/// Normalized expansion reached by negating parameters of a template,
/// without any admissibility check.
fn flipped(id: FamilyId, p: &Params) -> Result<(BigInt, BigInt, Word<BigInt>)> {
    let g = |n: &str| -> Result<i64> {
        signed(
            p.get(n)
                .ok_or_else(|| Error::Inadmissible(format!("missing parameter {n}")))?,
        )
    };
    let k = p
        .get("k")
        .ok_or_else(|| Error::Inadmissible("missing parameter k".into()))?;
    let (d, a0, word) = match id {
        FamilyId::T1A if k % 2 == 0 => t1_template(g("a")?, g("m")?, -g("s")?, k),
        FamilyId::T1A => t1_template(g("a")?, -g("m")?, g("s")?, k),
        FamilyId::T1B if k % 2 == 1 => t1_template(-g("a")?, g("m")?, g("s")?, k),
        FamilyId::T1B => t1_template(-g("a")?, -g("m")?, -g("s")?, k),
        FamilyId::T1C => t1_template(-g("a")?, -g("m")?, g("s")?, k),
        FamilyId::C6_6KP1 => t2_template(g("b")?, -g("s")?, 2 * k),
        FamilyId::C7_6KP5 => t2_template(-g("b")?, g("s")?, 2 * k + 1),
        _ => {
            return Err(Error::Inadmissible(format!(
                "{id} has no sign-flip derivation"
            )))
        }
    };
    let (a0, period) = normalize_periodic(&a0, &word, DEFAULT_REWRITE_BUDGET)?;
    Ok((d, a0, period))
}

fn compare(
    id: FamilyId,
    params: &Params,
    derived: (BigInt, BigInt, Word<BigInt>),
    route: &str,
) -> Result<FamilyInstance> {
    let direct = generate(id, params)?;
    let (d, a0, period) = derived;
    if d != direct.d || a0 != direct.a0 || period != direct.predicted_period {
        return Err(Error::NormalizationMismatch(format!(
            "{id} {}: {route} gives [{a0}; {period}] for D = {d}, transcription gives [{}; {}] for D = {}",
            params.display_for(id),
            direct.a0,
            direct.predicted_period,
            direct.d
        )));
    }
    Ok(FamilyInstance {
        id,
        params: params.clone(),
        d,
        a0,
        predicted_len: period.len(),
        predicted_period: period,
        predicted_unit: None,
    })
}

/// Rebuilds the expansion by flipping signs in the `T1` or `T2` template
/// and normalizing, then checks it against [`generate`].
pub fn derive_by_signflip(id: FamilyId, params: &Params) -> Result<FamilyInstance> {
    if !FamilyId::SIGN_FLIP.contains(&id) {
        return Err(Error::Inadmissible(format!(
            "{id} has no sign-flip derivation"
        )));
    }
    check(id, params)?;
    compare(id, params, flipped(id, params)?, "sign flip")
}

/// Rebuilds a corollary from its parent: `a = 1` in `T1A`, `T1B`, `T1C`;
/// `a = m = 1` in `T1C`; `a = 2` in `T1C`.
pub fn derive_by_specialization(id: FamilyId, params: &Params) -> Result<FamilyInstance> {
    let g = |n: &str| params.get(n).unwrap_or(0);
    let (parent, a, m) = match id {
        FamilyId::C_6KM2 => (FamilyId::T1A, 1, g("m")),
        FamilyId::C_6K => (FamilyId::T1B, 1, g("m")),
        FamilyId::C1_8K => (FamilyId::T1C, 1, g("m")),
        FamilyId::C2_8KM4 => (FamilyId::T1C, 1, 1),
        FamilyId::C3_8K => (FamilyId::T1C, 2, g("m")),
        _ => return Err(Error::Inadmissible(format!("{id} is not a specialization"))),
    };
    check(id, params)?;
    let parent_params = Params::from_pairs([("a", a), ("m", m), ("s", g("s")), ("k", g("k"))]);
    compare(
        id,
        params,
        flipped(parent, &parent_params)?,
        "specialization",
    )
}
