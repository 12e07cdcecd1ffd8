//! Ideal counts `a_K(m)` for all `m ≤ X` and checkpointed moment sums
//! `S_l(X) = Σ_{m≤X} a_K(m)^l`.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use crate::primes::smallest_prime_factors;
use crate::splitting::{a_at_prime_power, PrimeSplittingCache};

pub const MAX_MOMENT: u32 = 8;
pub const DEFAULT_CHECKPOINTS: usize = 64;
pub const DEFAULT_SPAN: f64 = 64.0;

const TABLE_MAGIC: &[u8; 8] = b"IMSIEVE1";

#[derive(Debug, Error)]
pub enum MomentError {
    #[error("cache covers primes up to {pmax}, sieve bound is {x}")]
    CacheTooSmall { pmax: u64, x: u64 },
    #[error("a({m}) = {value} does not fit in 16 bits")]
    ValueOverflow { m: u64, value: u64 },
    #[error("S_{l} overflows 128 bits at m = {m} (a(m) = {a})")]
    SumOverflow { l: u32, m: u64, a: u16 },
    #[error("moment exponent {0} outside 1..={MAX_MOMENT}")]
    Exponent(u32),
    #[error("checkpoints must be sorted, positive and at most {x}")]
    Checkpoints { x: u64 },
    #[error("sieve bound must be at least 1")]
    EmptyRange,
    #[error("sieve table fingerprint {found} does not match {expected}")]
    FingerprintMismatch { expected: String, found: String },
    #[error("malformed data: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// `a_K(m)` for `1 ≤ m ≤ X`; index 0 is unused.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SieveTable {
    x: u64,
    fingerprint: String,
    values: Vec<u16>,
}

impl SieveTable {
    pub fn bound(&self) -> u64 {
        self.x
    }

    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    pub fn a(&self, m: u64) -> u16 {
        self.values[m as usize]
    }

    /// Values for `1..=X`.
    pub fn values(&self) -> &[u16] {
        &self.values[1..]
    }

    pub fn max_value(&self) -> u16 {
        self.values.iter().copied().max().unwrap_or(0)
    }

    pub fn write_to(&self, out: &mut impl Write) -> std::io::Result<()> {
        out.write_all(TABLE_MAGIC)?;
        let fp = self.fingerprint.as_bytes();
        out.write_all(&(fp.len() as u32).to_le_bytes())?;
        out.write_all(fp)?;
        out.write_all(&self.x.to_le_bytes())?;
        for v in self.values() {
            out.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<(), MomentError> {
        let mut out = BufWriter::new(fs::File::create(path)?);
        self.write_to(&mut out)?;
        out.flush()?;
        Ok(())
    }

    pub fn read_from(mut input: impl Read, expected_fingerprint: &str) -> Result<Self, MomentError> {
        let mut magic = [0u8; 8];
        input.read_exact(&mut magic)?;
        if &magic != TABLE_MAGIC {
            return Err(MomentError::Format("not a sieve table".into()));
        }
        let mut word = [0u8; 4];
        input.read_exact(&mut word)?;
        let len = u32::from_le_bytes(word) as usize;
        if len > 1024 {
            return Err(MomentError::Format("fingerprint too long".into()));
        }
        let mut fp = vec![0u8; len];
        input.read_exact(&mut fp)?;
        let found = String::from_utf8(fp).map_err(|_| MomentError::Format("fingerprint".into()))?;
        if found != expected_fingerprint {
            return Err(MomentError::FingerprintMismatch {
                expected: expected_fingerprint.to_string(),
                found,
            });
        }
        let mut long = [0u8; 8];
        input.read_exact(&mut long)?;
        let x = u64::from_le_bytes(long);
        let mut raw = Vec::new();
        input.read_to_end(&mut raw)?;
        if raw.len() as u64 != 2 * x {
            return Err(MomentError::Format(format!("expected {x} values, found {} bytes", raw.len())));
        }
        let mut values = Vec::with_capacity(x as usize + 1);
        values.push(0);
        values.extend(raw.chunks_exact(2).map(|c| u16::from_le_bytes([c[0], c[1]])));
        Ok(SieveTable { x, fingerprint: found, values })
    }

    pub fn load(path: &Path, expected_fingerprint: &str) -> Result<Self, MomentError> {
        Self::read_from(BufReader::new(fs::File::open(path)?), expected_fingerprint)
    }
}

/// Multiplicative sieve: `a(m) = a(p^v)·a(m/p^v)` with `p` the smallest
/// prime factor of `m`.
pub fn sieve_a_values(cache: &PrimeSplittingCache, x: u64) -> Result<SieveTable, MomentError> {
    if x < 1 {
        return Err(MomentError::EmptyRange);
    }
    if cache.pmax() < x {
        return Err(MomentError::CacheTooSmall { pmax: cache.pmax(), x });
    }
    let n = x as usize;
    let spf = smallest_prime_factors(n);
    let mut values = vec![0u16; n + 1];
    values[1] = 1;
    for m in 2..=n {
        let p = spf[m] as usize;
        let mut pv = p;
        let mut v = 1u32;
        while (m / pv).is_multiple_of(p) {
            pv *= p;
            v += 1;
        }
        let local = if pv == m {
            let st = cache.get(p as u64).expect("cache holds every prime up to its bound");
            a_at_prime_power(st, v)
        } else {
            values[pv] as u64
        };
        let value = local * values[m / pv] as u64;
        values[m] = u16::try_from(value)
            .map_err(|_| MomentError::ValueOverflow { m: m as u64, value })?;
    }
    Ok(SieveTable { x, fingerprint: cache.fingerprint().to_string(), values })
}

/// `a(m)` by trial division, independent of the sieve.
pub fn a_by_trial_division(cache: &PrimeSplittingCache, m: u64) -> u64 {
    let mut rest = m;
    let mut value = 1u64;
    let mut p = 2u64;
    while p * p <= rest {
        if rest.is_multiple_of(p) {
            let mut v = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                v += 1;
            }
            value *= a_at_prime_power(cache.get(p).expect("prime within cache"), v);
        }
        p += 1;
    }
    if rest > 1 {
        value *= a_at_prime_power(cache.get(rest).expect("prime within cache"), 1);
    }
    value
}

/// `(X_j, S_l(X_j))` with exact sums.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MomentSeries {
    pub l: u32,
    pub checkpoints: Vec<(u64, u128)>,
}

impl MomentSeries {
    pub fn write_csv(&self, out: &mut impl Write) -> std::io::Result<()> {
        writeln!(out, "X,S")?;
        for (x, s) in &self.checkpoints {
            writeln!(out, "{x},{s}")?;
        }
        Ok(())
    }

    pub fn save_csv(&self, path: &Path) -> Result<(), MomentError> {
        let mut out = BufWriter::new(fs::File::create(path)?);
        self.write_csv(&mut out)?;
        out.flush()?;
        Ok(())
    }

    /// The exponent is not part of the file and must be supplied.
    pub fn read_csv(input: impl BufRead, l: u32) -> Result<Self, MomentError> {
        let mut lines = input.lines();
        match lines.next() {
            Some(Ok(h)) if h.trim() == "X,S" => {}
            _ => return Err(MomentError::Format("checkpoint CSV must start with `X,S`".into())),
        }
        let mut checkpoints = Vec::new();
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let bad = || MomentError::Format(format!("bad checkpoint row `{line}`"));
            let (x, s) = line.trim().split_once(',').ok_or_else(bad)?;
            checkpoints.push((x.parse().map_err(|_| bad())?, s.parse().map_err(|_| bad())?));
        }
        Ok(MomentSeries { l, checkpoints })
    }

    pub fn load_csv(path: &Path, l: u32) -> Result<Self, MomentError> {
        Self::read_csv(BufReader::new(fs::File::open(path)?), l)
    }

    /// `(X_j, S(X_j)/X_j)`
    pub fn normalized(&self) -> Vec<(f64, f64)> {
        self.checkpoints.iter().map(|&(x, s)| (x as f64, s as f64 / x as f64)).collect()
    }
}

/// `count` points from `x/span` to `x`, equally spaced in `log X`.
pub fn geometric_checkpoints(x: u64, count: usize, span: f64) -> Vec<u64> {
    if count <= 1 {
        return vec![x];
    }
    let lo = (x as f64 / span).max(1.0).ln();
    let hi = (x as f64).ln();
    let mut points: Vec<u64> = (0..count)
        .map(|j| {
            let t = j as f64 / (count - 1) as f64;
            ((lo + t * (hi - lo)).exp().round() as u64).clamp(1, x)
        })
        .collect();
    *points.last_mut().unwrap() = x;
    points
}

pub fn partial_sums(table: &SieveTable, l: u32, checkpoints: &[u64]) -> Result<MomentSeries, MomentError> {
    if l == 0 || l > MAX_MOMENT {
        return Err(MomentError::Exponent(l));
    }
    let sorted = checkpoints.windows(2).all(|w| w[0] <= w[1]);
    if !sorted || checkpoints.first() == Some(&0) || checkpoints.last().is_some_and(|&c| c > table.x) {
        return Err(MomentError::Checkpoints { x: table.x });
    }
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut sum: u128 = 0;
    let mut m = 0u64;
    for &c in checkpoints {
        while m < c {
            m += 1;
            let a = table.a(m);
            let term = (a as u128)
                .checked_pow(l)
                .ok_or(MomentError::SumOverflow { l, m, a })?;
            sum = sum.checked_add(term).ok_or(MomentError::SumOverflow { l, m, a })?;
        }
        out.push((c, sum));
    }
    Ok(MomentSeries { l, checkpoints: out })
}
