use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

use super::fp::{factor_degrees, FpPoly};
use super::poly::{certify_irreducible, discriminant, IntPoly};
use super::SplittingError;
use crate::primes::primes_up_to;

const BAD_PRIME_SCAN: u64 = 1_000_000;

/// A number field `K = Q[x]/(f)` for a monic irreducible `f`.
#[derive(Clone, Debug)]
pub struct FieldPresentation {
    poly: IntPoly,
    disc: BigInt,
    small_bad_primes: Vec<u64>,
}

impl FieldPresentation {
    pub fn new(poly: IntPoly) -> Result<Self, SplittingError> {
        let disc = discriminant(&poly);
        if disc == BigInt::from(0) {
            return Err(SplittingError::Reducible(poly.to_string()));
        }
        certify_irreducible(&poly, &disc)?;
        let small_bad_primes = primes_up_to(BAD_PRIME_SCAN)
            .into_iter()
            .filter(|&p| &disc % BigInt::from(p) == BigInt::from(0))
            .collect();
        Ok(FieldPresentation { poly, disc, small_bad_primes })
    }

    pub fn parse(s: &str) -> Result<Self, SplittingError> {
        Self::new(s.parse()?)
    }

    pub fn poly(&self) -> &IntPoly {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.poly.degree()
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.disc
    }

    /// Primes below 10⁶ dividing the discriminant.
    pub fn small_bad_primes(&self) -> &[u64] {
        &self.small_bad_primes
    }

    pub fn is_bad_prime(&self, p: u64) -> bool {
        if p <= BAD_PRIME_SCAN {
            self.small_bad_primes.binary_search(&p).is_ok()
        } else {
            &self.disc % BigInt::from(p) == BigInt::from(0)
        }
    }
}

/// Residue degrees of the primes of `K` above a rational prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplittingType {
    pub p: u64,
    pub residue_degrees: Vec<u32>,
    pub ramified: bool,
}

impl SplittingType {
    /// `p:f1,f2,...[:R]`
    pub fn to_line(&self) -> String {
        let degrees: Vec<String> = self.residue_degrees.iter().map(u32::to_string).collect();
        let mut line = format!("{}:{}", self.p, degrees.join(","));
        if self.ramified {
            line.push_str(":R");
        }
        line
    }

    pub fn parse_line(line: &str) -> Result<Self, SplittingError> {
        let bad = || SplittingError::Format(format!("bad splitting line `{line}`"));
        let mut parts = line.trim().split(':');
        let p: u64 = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
        let degrees = parts.next().ok_or_else(bad)?;
        let mut residue_degrees: Vec<u32> = degrees
            .split(',')
            .map(|d| d.trim().parse::<u32>().map_err(|_| bad()))
            .collect::<Result<_, _>>()?;
        if residue_degrees.contains(&0) {
            return Err(bad());
        }
        residue_degrees.sort_unstable();
        let ramified = match parts.next() {
            None => false,
            Some(flag) if flag.trim() == "R" => true,
            Some(_) => return Err(bad()),
        };
        if parts.next().is_some() {
            return Err(bad());
        }
        Ok(SplittingType { p, residue_degrees, ramified })
    }

    pub fn degree_sum(&self) -> u32 {
        self.residue_degrees.iter().sum()
    }

    /// Number of primes above `p` of residue degree one, i.e. `a_K(p)`.
    pub fn degree_one_count(&self) -> usize {
        self.residue_degrees.iter().filter(|&&f| f == 1).count()
    }
}

impl fmt::Display for SplittingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_line())
    }
}

/// Residue degrees supplied by hand for primes dividing the discriminant.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BadPrimeOverride {
    entries: BTreeMap<u64, SplittingType>,
}

impl BadPrimeOverride {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Same line format as the cache; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, SplittingError> {
        let mut entries = BTreeMap::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let st = SplittingType::parse_line(line)?;
            if entries.insert(st.p, st).is_some() {
                return Err(SplittingError::Format(format!("duplicate override in `{line}`")));
            }
        }
        Ok(BadPrimeOverride { entries })
    }

    pub fn to_text(&self) -> String {
        self.entries.values().map(|st| st.to_line() + "\n").collect()
    }

    /// Only bad primes may appear, and `Σ fᵢ ≤ d` (equality unless ramified).
    pub fn validate(&self, field: &FieldPresentation) -> Result<(), SplittingError> {
        let d = field.degree() as u32;
        for st in self.entries.values() {
            if !field.is_bad_prime(st.p) {
                return Err(SplittingError::OverrideNotBad(st.p));
            }
            let sum = st.degree_sum();
            if sum > d {
                return Err(SplittingError::OverrideDegreeSum { p: st.p, sum, degree: d });
            }
        }
        Ok(())
    }

    pub fn get(&self, p: u64) -> Option<&SplittingType> {
        self.entries.get(&p)
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.entries.keys().copied()
    }
}

/// `(degree, multiplicity)` of each irreducible factor of `f mod p`.
pub fn factor_shape_mod_p(f: &IntPoly, p: u64) -> Vec<(usize, usize)> {
    factor_degrees(&f.reduce_mod(p))
}

/// Splitting type at `p`: factor degrees of `f mod p` at good primes, the
/// override at bad primes.
pub fn splitting_type(
    field: &FieldPresentation,
    p: u64,
    overrides: &BadPrimeOverride,
) -> Result<SplittingType, SplittingError> {
    if field.is_bad_prime(p) {
        let st = overrides.get(p).ok_or(SplittingError::MissingOverride(p))?;
        let ramified = st.ramified || st.degree_sum() < field.degree() as u32;
        return Ok(SplittingType { ramified, ..st.clone() });
    }
    let shape = factor_shape_mod_p(field.poly(), p);
    if shape.iter().any(|&(_, m)| m > 1) {
        return Err(SplittingError::Format(format!("repeated factor mod good prime {p}")));
    }
    let residue_degrees = shape.into_iter().map(|(d, _)| d as u32).collect();
    Ok(SplittingType { p, residue_degrees, ramified: false })
}

/// Number of ideals of norm `p^k`: solutions `cᵢ ≥ 0` of `Σ cᵢ fᵢ = k`.
pub fn a_at_prime_power(st: &SplittingType, k: u32) -> u64 {
    let k = k as usize;
    let mut ways = vec![0u64; k + 1];
    ways[0] = 1;
    for &f in &st.residue_degrees {
        let f = f as usize;
        for j in f..=k {
            ways[j] = ways[j].saturating_add(ways[j - f]);
        }
    }
    ways[k]
}

const BRUTE_ROOT_LIMIT: u64 = 100_000;

/// Number of roots of `f` mod `p`, by exhaustive evaluation for small `p`
/// and otherwise as `deg gcd(x^p − x, f)`.
pub fn root_count_oracle(f: &IntPoly, p: u64) -> usize {
    if p < BRUTE_ROOT_LIMIT {
        let coeffs: Vec<u64> = f.coeffs().iter().map(|&c| c.rem_euclid(p as i64) as u64).collect();
        (0..p)
            .filter(|&x| coeffs.iter().rev().fold(0u64, |acc, &c| (acc * x + c) % p) == 0)
            .count()
    } else {
        let g = f.reduce_mod(p);
        let x = FpPoly::x(p);
        x.pow_mod(p, &g).sub(&x).gcd(&g).degree().unwrap_or(0)
    }
}
