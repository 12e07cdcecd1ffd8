use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use super::field::{splitting_type, BadPrimeOverride, FieldPresentation, SplittingType};
use super::SplittingError;
use crate::primes::primes_up_to;

/// sha256 over the coefficient string and the override file.
pub fn fingerprint(field: &FieldPresentation, overrides: &BadPrimeOverride) -> String {
    let mut hasher = Sha256::new();
    hasher.update(field.poly().coeff_string().as_bytes());
    hasher.update(b"\n");
    hasher.update(overrides.to_text().as_bytes());
    hex::encode(hasher.finalize())
}

/// Splitting types of every prime up to `pmax`, in prime order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeSplittingCache {
    coeffs: String,
    fingerprint: String,
    pmax: u64,
    entries: Vec<SplittingType>,
}

impl PrimeSplittingCache {
    pub fn build(
        field: &FieldPresentation,
        pmax: u64,
        overrides: &BadPrimeOverride,
    ) -> Result<Self, SplittingError> {
        overrides.validate(field)?;
        let entries = primes_up_to(pmax)
            .into_par_iter()
            .map(|p| splitting_type(field, p, overrides))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PrimeSplittingCache {
            coeffs: field.poly().coeff_string(),
            fingerprint: fingerprint(field, overrides),
            pmax,
            entries,
        })
    }

    pub fn pmax(&self) -> u64 {
        self.pmax
    }

    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[SplittingType] {
        &self.entries
    }

    pub fn get(&self, p: u64) -> Option<&SplittingType> {
        self.entries.binary_search_by_key(&p, |st| st.p).ok().map(|i| &self.entries[i])
    }

    pub fn write_to(&self, out: &mut impl Write) -> std::io::Result<()> {
        writeln!(out, "#field {}", self.coeffs)?;
        writeln!(out, "#pmax {}", self.pmax)?;
        writeln!(out, "#fingerprint {}", self.fingerprint)?;
        for st in &self.entries {
            writeln!(out, "{}", st.to_line())?;
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<(), SplittingError> {
        let mut out = BufWriter::new(fs::File::create(path)?);
        self.write_to(&mut out)?;
        out.flush()?;
        Ok(())
    }

    /// Reads a cache and checks it against the requesting field and overrides.
    pub fn load(
        path: &Path,
        field: &FieldPresentation,
        overrides: &BadPrimeOverride,
    ) -> Result<Self, SplittingError> {
        let reader = BufReader::new(fs::File::open(path)?);
        Self::read_from(reader, field, overrides)
    }

    pub fn read_from(
        reader: impl BufRead,
        field: &FieldPresentation,
        overrides: &BadPrimeOverride,
    ) -> Result<Self, SplittingError> {
        let (mut coeffs, mut pmax, mut found) = (None, None, None);
        let mut entries = Vec::new();
        for line in reader.lines() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(header) = line.strip_prefix('#') {
                let (key, value) = header.split_once(' ').unwrap_or((header, ""));
                match key {
                    "field" => coeffs = Some(value.trim().to_string()),
                    "pmax" => {
                        let v = value.trim().parse().map_err(|_| {
                            SplittingError::Format(format!("bad pmax header `{line}`"))
                        })?;
                        pmax = Some(v);
                    }
                    "fingerprint" => found = Some(value.trim().to_string()),
                    _ => {}
                }
                continue;
            }
            entries.push(SplittingType::parse_line(line)?);
        }
        let missing = |h: &str| SplittingError::Format(format!("cache lacks #{h} header"));
        let coeffs = coeffs.ok_or_else(|| missing("field"))?;
        let pmax = pmax.ok_or_else(|| missing("pmax"))?;
        let found = found.ok_or_else(|| missing("fingerprint"))?;
        let expected = fingerprint(field, overrides);
        if found != expected || coeffs != field.poly().coeff_string() {
            return Err(SplittingError::FingerprintMismatch { expected, found });
        }
        let primes = primes_up_to(pmax);
        if primes.len() != entries.len() || primes.iter().zip(&entries).any(|(&p, st)| p != st.p) {
            return Err(SplittingError::Format(format!(
                "cache entries do not cover the primes up to {pmax}"
            )));
        }
        Ok(PrimeSplittingCache { coeffs, fingerprint: found, pmax, entries })
    }
}
