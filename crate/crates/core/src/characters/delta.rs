use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::group::GroupInvariants;

use super::{CharError, MomentParameters};

pub type Rational = Ratio<i128>;

pub(crate) fn serialize_ratio<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_ratio(r))
}

pub fn format_ratio(r: &Rational) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"p/q"`, an integer, or a finite decimal such as `"1.5"`.
pub fn parse_ratio(s: &str) -> Result<Rational, CharError> {
    let s = s.trim();
    let bad = || CharError::InvalidTheta(s.to_string());
    if let Some((p, q)) = s.split_once('/') {
        let p: i128 = p.trim().parse().map_err(|_| bad())?;
        let q: i128 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        return Ok(Ratio::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.len() > 18 || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.trim_start().starts_with('-');
        let int: i128 = if int.is_empty() || int == "-" { 0 } else { int.parse().map_err(|_| bad())? };
        let frac_val: i128 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        let scale = 10i128.pow(frac.len() as u32);
        let frac_part = Ratio::new(frac_val, scale);
        let int_part = Ratio::from_integer(int);
        return Ok(if negative { int_part - frac_part } else { int_part + frac_part });
    }
    s.parse::<i128>().map(Ratio::from_integer).map_err(|_| bad())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DeltaMode {
    /// Uses `θ₃` for `L(s, χ₁)`.
    Direct,
    /// Assumes `L(s, χ₁′)` entire and replaces `θ₃` by `θ₁ + θ₂`.
    Dedekind,
}

impl FromStr for DeltaMode {
    type Err = CharError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "direct" => Ok(DeltaMode::Direct),
            "dedekind" => Ok(DeltaMode::Dedekind),
            other => Err(CharError::InvalidTheta(format!("unknown mode `{other}`"))),
        }
    }
}

impl fmt::Display for DeltaMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DeltaMode::Direct => "direct",
            DeltaMode::Dedekind => "dedekind",
        })
    }
}

/// Growth exponents for `ζ`, `L(χ₁′)`, `L(χ₁)` and `L(χ₁⊗χ₂)` on the
/// critical strip.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SubconvexityConfig {
    #[serde(serialize_with = "serialize_ratio")]
    pub theta1: Rational,
    #[serde(serialize_with = "serialize_ratio")]
    pub theta2: Rational,
    #[serde(serialize_with = "serialize_ratio")]
    pub theta3: Rational,
    #[serde(serialize_with = "serialize_ratio")]
    pub theta4: Rational,
    pub mode: DeltaMode,
}

impl SubconvexityConfig {
    /// `θ₁ = 13/42`, `θ₂ = max(n″/3 − 1, 0)`, `θ₃ = n″/3`, `θ₄ = n″(h−1)/2`.
    pub fn defaults(inv: &GroupInvariants, mode: DeltaMode) -> Self {
        let nd = inv.n_dprime as i128;
        let theta2 = Ratio::new(nd, 3) - 1;
        SubconvexityConfig {
            theta1: Ratio::new(13, 42),
            theta2: if theta2 < Ratio::from_integer(0) { Ratio::from_integer(0) } else { theta2 },
            theta3: Ratio::new(nd, 3),
            theta4: Ratio::new(nd * (inv.h as i128 - 1), 2),
            mode,
        }
    }

    pub fn with_mode(mut self, mode: DeltaMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn validate(&self) -> Result<(), CharError> {
        for (name, t) in [
            ("theta1", self.theta1),
            ("theta2", self.theta2),
            ("theta3", self.theta3),
            ("theta4", self.theta4),
        ] {
            if t < Ratio::from_integer(0) {
                return Err(CharError::InvalidTheta(format!("{name} = {} is negative", format_ratio(&t))));
            }
        }
        Ok(())
    }

    /// Exponent used in place of `θ₃` for the given mode.
    pub fn main_exponent(&self) -> Rational {
        match self.mode {
            DeltaMode::Direct => self.theta3,
            DeltaMode::Dedekind => self.theta1 + self.theta2,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DeltaReport {
    #[serde(serialize_with = "serialize_ratio")]
    pub delta: Rational,
    #[serde(serialize_with = "serialize_ratio")]
    pub one_minus_delta: Rational,
    pub config: SubconvexityConfig,
    /// Degree of the main-term polynomial, `α(l) − 1`.
    pub degree: u128,
}

/// `δ = 1 / (α·θ + β·θ₄ + 2)` with `θ` from [`SubconvexityConfig::main_exponent`].
pub fn compute_delta(params: &MomentParameters, config: &SubconvexityConfig) -> Result<DeltaReport, CharError> {
    config.validate()?;
    let alpha = i128::try_from(params.alpha).map_err(|_| CharError::Overflow)?;
    let beta = i128::try_from(params.beta).map_err(|_| CharError::Overflow)?;
    let denom = config.main_exponent() * alpha + config.theta4 * beta + 2;
    let delta = denom.recip();
    Ok(DeltaReport {
        delta,
        one_minus_delta: Ratio::from_integer(1) - delta,
        config: *config,
        degree: params.degree(),
    })
}
