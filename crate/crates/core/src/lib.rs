//! Exact continued fractions of `√d`, words of partial quotients, and the
//! long-period radicand families together with their fundamental units.
//!
//! The algebra in [`word`], [`cf`] and [`exact_arith`] is generic over
//! [`num::Int`]. The aliases below fix the scalar to [`BigInt`], which is
//! what the families, the closed forms and the command line use.

pub mod cf;
pub mod error;
pub mod exact_arith;
pub mod families;
pub mod num;
pub mod props;
pub mod verify;
pub mod word;

pub use error::{Error, Result};
pub use families::{FamilyId, FamilyInstance, Params, Transcription};
pub use num_bigint::BigInt;
pub use verify::{VerifyConfig, VerifyReport};

pub type Word = word::Word<BigInt>;
pub type Mat2 = word::Mat2<BigInt>;
pub type QuadRat = exact_arith::QuadRat<BigInt>;
pub type PeriodicCf = cf::PeriodicCf<BigInt>;
pub type Convergent = cf::Convergent<BigInt>;
pub type Lemma1Check = word::Lemma1Check<BigInt>;

/// `√d` expanded with the default period limit.
pub fn expand(d: &BigInt) -> Result<PeriodicCf> {
    cf::expand_sqrt(d, cf::DEFAULT_MAX_PERIOD)
}
