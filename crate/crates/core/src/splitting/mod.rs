//! Splitting of rational primes in a number field given by a monic
//! polynomial, ideal counts at prime powers and the on-disk prime cache.

mod cache;
mod field;
pub mod fp;
mod poly;

pub use cache::{fingerprint, PrimeSplittingCache};
pub use field::{
    a_at_prime_power, factor_shape_mod_p, root_count_oracle, splitting_type, BadPrimeOverride,
    FieldPresentation, SplittingType,
};
pub use poly::{certify_irreducible, discriminant, resultant, IntPoly};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SplittingError {
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("cannot certify irreducibility of {0}")]
    Uncertified(String),
    #[error("polynomial {0} is reducible over Q")]
    Reducible(String),
    #[error("bad prime without override: {0}")]
    MissingOverride(u64),
    #[error("override for {0}, which does not divide the discriminant")]
    OverrideNotBad(u64),
    #[error("override at {p} has residue degree sum {sum} exceeding the field degree {degree}")]
    OverrideDegreeSum { p: u64, sum: u32, degree: u32 },
    #[error("malformed splitting data: {0}")]
    Format(String),
    #[error("cache fingerprint {found} does not match the field ({expected})")]
    FingerprintMismatch { expected: String, found: String },
    #[error("cache covers primes up to {pmax}, {needed} needed")]
    CacheTooSmall { pmax: u64, needed: u64 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Override files shipped with the crate, keyed by the polynomial's display form.
pub fn builtin_overrides(poly: &IntPoly) -> Option<BadPrimeOverride> {
    let text = match poly.to_string().as_str() {
        "x^2+1" => include_str!("../../data/x2+1.overrides"),
        "x^3-2" => include_str!("../../data/x3-2.overrides"),
        "x^4-2" => include_str!("../../data/x4-2.overrides"),
        _ => return None,
    };
    Some(BadPrimeOverride::parse(text).expect("shipped override file parses"))
}
