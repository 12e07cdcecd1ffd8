//! Run configuration: INI file with sections `[field]`, `[group]`,
//! `[theta]` and `[run]`, overridable from the command line.

use std::path::{Path, PathBuf};

use ini::Ini;
use thiserror::Error;

use crate::characters::{parse_ratio, CharError, DeltaMode};
use crate::group::{preset, GroupError, Preset, PresetName};
use crate::moments::DEFAULT_CHECKPOINTS;
use crate::report::ThetaOverrides;
use crate::splitting::{builtin_overrides, BadPrimeOverride, FieldPresentation, SplittingError};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config: {0}")]
    Read(String),
    #[error("bad value for {key}: {value}")]
    Value { key: String, value: String },
    #[error("unknown key [{section}] {key}")]
    UnknownKey { section: String, key: String },
    #[error("field degree {degree} differs from n″ = {n_dprime} of {preset} with N′ = {n_prime}")]
    DegreeMismatch { degree: usize, n_dprime: usize, preset: String, n_prime: String },
    #[error("no field polynomial given")]
    MissingField,
    #[error("no group preset given")]
    MissingPreset,
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Char(#[from] CharError),
    #[error(transparent)]
    Splitting(#[from] SplittingError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub field: Option<String>,
    pub overrides: Option<PathBuf>,
    pub preset: Option<String>,
    pub n_prime: String,
    pub declared_ii: bool,
    pub l_values: Vec<u32>,
    pub x: u64,
    pub pmax: Option<u64>,
    pub checkpoints: usize,
    pub max_degree: usize,
    pub theta: ThetaOverrides,
    pub mode: DeltaMode,
    pub output: Option<PathBuf>,
    pub workers: Option<usize>,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            field: None,
            overrides: None,
            preset: None,
            n_prime: "trivial".into(),
            declared_ii: true,
            l_values: vec![2],
            x: 4_000_000,
            pmax: None,
            checkpoints: DEFAULT_CHECKPOINTS,
            max_degree: 6,
            theta: ThetaOverrides::default(),
            mode: DeltaMode::Direct,
            output: None,
            workers: None,
            seed: 0,
        }
    }
}

fn value_err(key: &str, value: &str) -> ConfigError {
    ConfigError::Value { key: key.into(), value: value.into() }
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
    value.trim().parse().map_err(|_| value_err(key, value))
}

/// Comma-separated exponents, `2,3` or `1-4`.
pub fn parse_l_list(s: &str) -> Result<Vec<u32>, ConfigError> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once('-') {
            Some((a, b)) => {
                let (a, b): (u32, u32) = (parse("l", a)?, parse("l", b)?);
                if a > b {
                    return Err(value_err("l", s));
                }
                out.extend(a..=b);
            }
            None => out.push(parse("l", part)?),
        }
    }
    if out.is_empty() || out.contains(&0) {
        return Err(value_err("l", s));
    }
    Ok(out)
}

fn parse_bool(key: &str, v: &str) -> Result<bool, ConfigError> {
    match v.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(value_err(key, v)),
    }
}

impl RunConfig {
    pub fn from_ini_str(text: &str) -> Result<Self, ConfigError> {
        let ini = Ini::load_from_str(text).map_err(|e| ConfigError::Read(e.to_string()))?;
        let mut cfg = RunConfig::default();
        for (section, props) in ini.iter() {
            let section = section.unwrap_or("");
            for (key, value) in props.iter() {
                cfg.set(section, key, value)?;
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Read(format!("{}: {e}", path.display())))?;
        Self::from_ini_str(&text)
    }

    fn set(&mut self, section: &str, key: &str, v: &str) -> Result<(), ConfigError> {
        let ratio = |v: &str| parse_ratio(v).map(Some).map_err(|_| value_err(key, v));
        match (section, key) {
            ("field", "polynomial") => self.field = Some(v.trim().to_string()),
            ("field", "overrides") => self.overrides = Some(PathBuf::from(v.trim())),
            ("group", "preset") => self.preset = Some(v.trim().to_string()),
            ("group", "nprime") => self.n_prime = v.trim().to_string(),
            ("group", "declare_ii") => self.declared_ii = parse_bool(key, v)?,
            ("theta", "theta1") => self.theta.theta1 = ratio(v)?,
            ("theta", "theta2") => self.theta.theta2 = ratio(v)?,
            ("theta", "theta3") => self.theta.theta3 = ratio(v)?,
            ("theta", "theta4") => self.theta.theta4 = ratio(v)?,
            ("theta", "mode") => self.mode = parse(key, v)?,
            ("run", "l") => self.l_values = parse_l_list(v)?,
            ("run", "x") => self.x = parse_u64(key, v)?,
            ("run", "pmax") => self.pmax = Some(parse_u64(key, v)?),
            ("run", "checkpoints") => self.checkpoints = parse(key, v)?,
            ("run", "max_degree") => self.max_degree = parse(key, v)?,
            ("run", "output") => self.output = Some(PathBuf::from(v.trim())),
            ("run", "workers") => self.workers = Some(parse(key, v)?),
            ("run", "seed") => self.seed = parse(key, v)?,
            _ => return Err(ConfigError::UnknownKey { section: section.into(), key: key.into() }),
        }
        Ok(())
    }

    pub fn pmax(&self) -> u64 {
        self.pmax.unwrap_or(self.x)
    }

    pub fn field_presentation(&self) -> Result<FieldPresentation, ConfigError> {
        let poly = self.field.as_deref().ok_or(ConfigError::MissingField)?;
        Ok(FieldPresentation::parse(poly)?)
    }

    /// The override file when given, else the shipped file, else none.
    pub fn bad_prime_overrides(&self, field: &FieldPresentation) -> Result<BadPrimeOverride, ConfigError> {
        let ov = match &self.overrides {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| ConfigError::Read(format!("{}: {e}", path.display())))?;
                BadPrimeOverride::parse(&text)?
            }
            None => builtin_overrides(field.poly()).unwrap_or_default(),
        };
        ov.validate(field)?;
        Ok(ov)
    }

    /// Explicit preset, else the one paired with a known field.
    pub fn preset_name(&self) -> Option<String> {
        self.preset.clone().or_else(|| {
            let field = self.field.as_deref()?;
            let poly = FieldPresentation::parse(field).ok()?;
            default_preset_for(&poly.poly().to_string()).map(str::to_string)
        })
    }

    pub fn group_preset(&self) -> Result<Preset, ConfigError> {
        let name = self.preset_name().ok_or(ConfigError::MissingPreset)?;
        let name: PresetName = name.parse()?;
        Ok(preset(&name)?)
    }

    /// `d = n″` when both a field and a preset are configured.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.l_values.iter().any(|&l| l == 0 || l > crate::moments::MAX_MOMENT) {
            return Err(value_err("l", &format!("{:?}", self.l_values)));
        }
        if self.x == 0 || self.checkpoints < 2 || self.max_degree < 1 {
            return Err(value_err("run", "x, checkpoints and max_degree must be positive"));
        }
        if self.workers == Some(0) {
            return Err(value_err("workers", "0"));
        }
        if let (Some(_), Some(name)) = (&self.field, self.preset_name()) {
            let field = self.field_presentation()?;
            let p = self.group_preset()?;
            let choice = p.n_prime(&self.n_prime)?;
            let inv = p.presentation.invariants(&choice.subgroup)?;
            if inv.n_dprime != field.degree() {
                return Err(ConfigError::DegreeMismatch {
                    degree: field.degree(),
                    n_dprime: inv.n_dprime,
                    preset: name,
                    n_prime: self.n_prime.clone(),
                });
            }
        }
        Ok(())
    }
}

fn parse_u64(key: &str, v: &str) -> Result<u64, ConfigError> {
    let t = v.trim().replace('_', "");
    if let Ok(n) = t.parse() {
        return Ok(n);
    }
    // 4e6 style
    match t.parse::<f64>() {
        Ok(f) if f >= 0.0 && f.fract() == 0.0 && f < 1.8e19 => Ok(f as u64),
        _ => Err(value_err(key, v)),
    }
}

pub fn parse_bound(v: &str) -> Result<u64, ConfigError> {
    parse_u64("bound", v)
}

/// Galois-closure presentation for the fields shipped with overrides.
pub fn default_preset_for(poly: &str) -> Option<&'static str> {
    match poly {
        "x^2+1" => Some("galois:cyclic:2"),
        "x^3-2" => Some("symmetric:3"),
        "x^4-2" => Some("dihedral:4"),
        "x-1" => Some("galois:cyclic:1"),
        _ => None,
    }
}
