//! Checks family predictions against the expansion and runs parameter
//! sweeps.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::cf::{expand_sqrt, is_pell_solution, DEFAULT_MAX_PERIOD};
use crate::error::Result;
use crate::exact_arith::{square_free_probe, SquareFreeStatus, DEFAULT_SQUARE_FREE_BOUND};
use crate::families::{
    admissible, derive_by_signflip, derive_by_specialization, display_errata, generate, prop_form,
    FamilyId, FamilyInstance, Params,
};
use crate::word::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    pub max_period: usize,
    pub square_free_bound: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            max_period: DEFAULT_MAX_PERIOD,
            square_free_bound: DEFAULT_SQUARE_FREE_BOUND,
        }
    }
}

fn decimal<S: Serializer>(n: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(n)
}

fn decimals<S: Serializer>(w: &Word<BigInt>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(w.iter().map(|a| a.to_string()))
}

fn display<S: Serializer>(v: &SquareFreeStatus, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// One verified instance. Serializes to a single JSON object with big
/// integers as decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub family: FamilyId,
    pub params: Params,
    #[serde(serialize_with = "decimal")]
    pub d: BigInt,
    #[serde(serialize_with = "decimal")]
    pub a0: BigInt,
    #[serde(serialize_with = "decimals")]
    pub predicted_period: Word<BigInt>,
    #[serde(serialize_with = "decimals")]
    pub oracle_period: Word<BigInt>,
    pub word_match: bool,
    pub len_match: bool,
    pub unit_match: Option<bool>,
    /// `A² − d·B²` for the unit read off the expansion.
    pub pell_sign: i8,
    pub d_mod8: u8,
    #[serde(serialize_with = "display")]
    pub square_free: SquareFreeStatus,
    pub notes: Vec<String>,
}

pub const DERIVATION_MISMATCH: &str = "derivation-mismatch";

impl VerifyReport {
    pub fn passed(&self) -> bool {
        let expected_sign = if self.oracle_period.len().is_multiple_of(2) {
            1
        } else {
            -1
        };
        self.word_match
            && self.len_match
            && self.unit_match != Some(false)
            && self.pell_sign == expected_sign
            && !self
                .notes
                .iter()
                .any(|n| n.starts_with(DERIVATION_MISMATCH))
    }
}

/// Generates the instance, expands `√d` independently and compares the
/// two, including the closed-form unit and every alternative derivation
/// that applies to the family.
pub fn verify(id: FamilyId, params: &Params, config: &VerifyConfig) -> Result<VerifyReport> {
    let FamilyInstance {
        d,
        a0,
        predicted_period,
        predicted_len,
        predicted_unit,
        ..
    } = generate(id, params)?;
    let oracle = expand_sqrt(&d, config.max_period)?;
    let k = params.get("k").expect("admissible instances have k");
    let formula = id.period_length(k) as usize;

    let word_match = oracle.a0 == a0 && oracle.period == predicted_period;
    let len_match = oracle.period_len() == formula && predicted_len == formula;

    let (unit, _) = oracle.fundamental_unit();
    let (ua, ub) = (unit.a().to_integer(), unit.b().to_integer());
    let pell_sign = is_pell_solution(&d, &ua, &ub).unwrap_or(0);
    let unit_match = predicted_unit.map(|u| u == unit);

    let d_mod8 = d
        .mod_floor(&BigInt::from(8))
        .to_u8()
        .expect("residue below 8");
    let square_free = square_free_probe(&d, config.square_free_bound);

    let mut notes = display_errata(id, params)?;
    if FamilyId::SIGN_FLIP.contains(&id) {
        if let Err(e) = derive_by_signflip(id, params) {
            notes.push(format!("{DERIVATION_MISMATCH}: sign flip: {e}"));
        }
    }
    if FamilyId::SPECIALIZED.contains(&id) {
        if let Err(e) = derive_by_specialization(id, params) {
            notes.push(format!("{DERIVATION_MISMATCH}: specialization: {e}"));
        }
    }
    if let Some(form) = prop_form(id, params) {
        match form.assemble() {
            Ok(asm) if asm.d == d && asm.a0 == a0 && asm.period == predicted_period => {}
            Ok(asm) => notes.push(format!(
                "{DERIVATION_MISMATCH}: matrix assembly gives [{}; {}]",
                asm.a0, asm.period
            )),
            Err(e) => notes.push(format!("{DERIVATION_MISMATCH}: matrix assembly: {e}")),
        }
    }
    if d_mod8 == 5 {
        notes.push(
            "advisory: d ≡ 5 (mod 8), the unit of Z[√d] may be a power of the field's".into(),
        );
    }
    match square_free {
        SquareFreeStatus::HasSquareFactor(p) => {
            notes.push(format!("advisory: {p}² divides d, Z[√d] is a proper order"))
        }
        SquareFreeStatus::Unknown(b) => notes.push(format!(
            "advisory: no square factor up to {b}, square-freeness not settled"
        )),
        SquareFreeStatus::SquareFree => {}
    }

    Ok(VerifyReport {
        family: id,
        params: params.clone(),
        d,
        a0,
        predicted_period,
        oracle_period: oracle.period,
        word_match,
        len_match,
        unit_match,
        pell_sign,
        d_mod8,
        square_free,
        notes,
    })
}

/// Every admissible parameter tuple with each non-`k` parameter in
/// `1..=param_bound` and `k` up to `k_bound`, ordered by family name and
/// then by tuple.
pub fn sweep_grid(
    families: &[FamilyId],
    param_bound: u64,
    k_bound: u64,
) -> Vec<(FamilyId, Params)> {
    let mut grid = Vec::new();
    for &id in families {
        let names = id.param_names();
        let ranges: Vec<(u64, u64)> = names
            .iter()
            .map(|&n| {
                (
                    id.param_min(n),
                    if n == "k" { k_bound } else { param_bound },
                )
            })
            .collect();
        if ranges.iter().any(|(lo, hi)| lo > hi) {
            continue;
        }
        let mut current: Vec<u64> = ranges.iter().map(|r| r.0).collect();
        loop {
            let params = Params::from_pairs(names.iter().copied().zip(current.iter().copied()));
            if admissible(id, &params).is_admissible() {
                grid.push((id, params));
            }
            // Odometer step, last position fastest.
            let mut i = current.len();
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                if current[i] < ranges[i].1 {
                    current[i] += 1;
                    break;
                }
                current[i] = ranges[i].0;
            }
            if current.iter().zip(&ranges).all(|(c, r)| *c == r.0) {
                break;
            }
        }
    }
    grid.sort_by(|(a, pa), (b, pb)| {
        a.name()
            .cmp(b.name())
            .then_with(|| pa.tuple(*a).cmp(&pb.tuple(*b)))
    });
    grid.dedup();
    grid
}

/// Outcome of one grid point.
pub type SweepItem = (FamilyId, Params, Result<VerifyReport>);

/// Verifies the grid on `jobs` worker threads. Results come back in grid
/// order whatever the thread count.
pub fn run_sweep(
    grid: &[(FamilyId, Params)],
    config: &VerifyConfig,
    jobs: usize,
) -> Vec<SweepItem> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .expect("worker pool starts");
    pool.install(|| {
        grid.par_iter()
            .map(|(id, params)| (*id, params.clone(), verify(*id, params, config)))
            .collect()
    })
}
