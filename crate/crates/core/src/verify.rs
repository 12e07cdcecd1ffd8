//! Verification suites bundling the cross-module properties.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_rational::Ratio;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::characters::{
    chi1_formula, chi1_permutation, chi2, compute_delta, format_ratio, inner_product,
    satisfies_linear_system, solve_alpha_beta, verify_first_order_euler, ClassFunction, DeltaMode,
    SubconvexityConfig,
};
use crate::fit::{select_degree, select_degree_points, SelectionRule};
use crate::group::{conjugacy_classes, preset, Preset, PresetName};
use crate::moments::{
    a_by_trial_division, geometric_checkpoints, partial_sums, sieve_a_values, DEFAULT_CHECKPOINTS,
    DEFAULT_SPAN,
};
use crate::report::{expected_densities, splitting_summary};
use crate::splitting::{
    a_at_prime_power, builtin_overrides, root_count_oracle, BadPrimeOverride, FieldPresentation,
    PrimeSplittingCache,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Euler,
    Characters,
    Divisibility,
    Oracle,
    Chebotarev,
    Fit,
    Delta,
    All,
}

impl Suite {
    pub const EACH: [Suite; 7] = [
        Suite::Euler,
        Suite::Characters,
        Suite::Divisibility,
        Suite::Oracle,
        Suite::Chebotarev,
        Suite::Fit,
        Suite::Delta,
    ];
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "euler" => Suite::Euler,
            "characters" => Suite::Characters,
            "divisibility" => Suite::Divisibility,
            "oracle" => Suite::Oracle,
            "chebotarev" => Suite::Chebotarev,
            "fit" => Suite::Fit,
            "delta" => Suite::Delta,
            "all" => Suite::All,
            _ => return Err(format!("unknown suite `{s}`")),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).unwrap();
        f.write_str(s.as_str().unwrap())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Prime bound for the divisibility and frequency suites.
    pub pmax: u64,
    /// Bound for the root-count and Kronecker oracles.
    pub oracle_bound: u64,
    /// Bound for the sieve-versus-trial-division comparison.
    pub sieve_bound: u64,
    /// Sieve bound for the fit suite.
    pub fit_x: u64,
    pub l_max: u32,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            pmax: 1_000_000,
            oracle_bound: 100_000,
            sieve_bound: 10_000,
            fit_x: 4_000_000,
            l_max: 6,
            seed: 0,
        }
    }
}

/// Presets exercised by the character suites.
pub fn standard_presets() -> Vec<Preset> {
    let mut names = vec![
        PresetName::Symmetric(3),
        PresetName::Dihedral(4),
        PresetName::Dihedral(5),
        PresetName::Alternating4,
        PresetName::Symmetric(6),
    ];
    names.extend((1..=6).map(PresetName::GaloisCyclic));
    names.iter().map(|n| preset(n).expect("standard preset builds")).collect()
}

/// The two non-Galois example fields, with their Galois-closure presets.
pub const EXAMPLE_FIELDS: [(&str, &str); 2] = [("x^3-2", "symmetric:3"), ("x^4-2", "dihedral:4")];

fn check(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
    Check { name: name.into(), passed, detail: detail.into() }
}

fn field_cache(poly: &str, pmax: u64) -> Result<PrimeSplittingCache, String> {
    let field = FieldPresentation::parse(poly).map_err(|e| e.to_string())?;
    let ov = builtin_overrides(field.poly()).unwrap_or_else(BadPrimeOverride::empty);
    PrimeSplittingCache::build(&field, pmax, &ov).map_err(|e| e.to_string())
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Vec<SuiteReport> {
    match suite {
        Suite::All => Suite::EACH.iter().flat_map(|&s| run_suite(s, opts)).collect(),
        s => {
            let checks = match s {
                Suite::Euler => euler(opts),
                Suite::Characters => characters(),
                Suite::Divisibility => divisibility(opts),
                Suite::Oracle => oracle(opts),
                Suite::Chebotarev => chebotarev(opts),
                Suite::Fit => fit(opts),
                Suite::Delta => delta(opts),
                Suite::All => unreachable!(),
            };
            vec![SuiteReport { suite: s, seed: opts.seed, checks }]
        }
    }
}

fn euler(opts: &VerifyOptions) -> Vec<Check> {
    let mut out = Vec::new();
    for p in standard_presets() {
        let pres = &p.presentation;
        let classes = Arc::new(conjugacy_classes(pres.group()));
        let c2 = chi2(pres, &classes).expect("chi2");
        for choice in p.n_prime_choices.iter().filter(|c| c.admissible) {
            let inv = pres.invariants(&choice.subgroup).expect("invariants");
            let c1 = chi1_formula(pres, &choice.subgroup, &classes).expect("chi1");
            for l in 1..=opts.l_max {
                let Ok(params) = solve_alpha_beta(&inv, l) else { continue };
                let name = format!("{} N′={} l={l}", p.name, choice.label);
                match verify_first_order_euler(&c1, &c2, &params) {
                    Ok(r) => out.push(check(name, true, format!("{} classes", r.rows.len()))),
                    Err(e) => out.push(check(name, false, e.to_string())),
                }
            }
        }
    }
    out
}

fn characters() -> Vec<Check> {
    let mut out = Vec::new();
    for p in standard_presets() {
        let pres = &p.presentation;
        let classes = Arc::new(conjugacy_classes(pres.group()));
        let one = ClassFunction::constant(classes.clone(), 1);
        for choice in &p.n_prime_choices {
            let name = format!("{} N′={}", p.name, choice.label);
            let (lemma, normal_in_g) = pres.check_normality_equivalence(&choice.subgroup);
            out.push(check(
                format!("{name} normality equivalence"),
                lemma == normal_in_g,
                format!("lemma {lemma}, normal in G {normal_in_g}"),
            ));
            if !choice.admissible {
                out.push(check(
                    format!("{name} closed form refused"),
                    chi1_formula(pres, &choice.subgroup, &classes).is_err(),
                    "N′ not admissible",
                ));
                continue;
            }
            let formula = chi1_formula(pres, &choice.subgroup, &classes).expect("chi1");
            let g_prime = pres.subgroup_over(&choice.subgroup).expect("G′");
            let perm = chi1_permutation(pres.group(), &g_prime, &classes).expect("perm");
            let agree = pres.group().elements().all(|g| formula.value_at(g) == perm.value_at(g));
            out.push(check(format!("{name} χ₁ closed form = coset count"), agree, format!("|G| = {}", pres.group().order())));
            let ip = inner_product(&one, &formula).expect("inner product");
            out.push(check(format!("{name} ⟨1, χ₁⟩ = 1"), ip == Ratio::from_integer(1), ip.to_string()));
            let inv = pres.invariants(&choice.subgroup).expect("invariants");
            for l in 1..=6 {
                if let Ok(params) = solve_alpha_beta(&inv, l) {
                    out.push(check(
                        format!("{name} l={l} linear system"),
                        satisfies_linear_system(&inv, &params),
                        format!("α={} β={}", params.alpha, params.beta),
                    ));
                }
            }
        }
    }
    out
}

fn divisibility(opts: &VerifyOptions) -> Vec<Check> {
    EXAMPLE_FIELDS
        .iter()
        .map(|(poly, _)| {
            let name = format!("{poly} a(p) ∈ {{0}} ∪ divisors(d), p ≤ {}", opts.pmax);
            match field_cache(poly, opts.pmax) {
                Ok(cache) => {
                    let d = FieldPresentation::parse(poly).unwrap().degree() as u64;
                    let violations = cache
                        .entries()
                        .iter()
                        .filter(|st| !st.ramified)
                        .filter(|st| {
                            let a = a_at_prime_power(st, 1);
                            a != 0 && !d.is_multiple_of(a)
                        })
                        .count();
                    check(name, violations == 0, format!("{violations} violations"))
                }
                Err(e) => check(name, false, e),
            }
        })
        .collect()
}

fn kronecker_divisor_sum(m: u64) -> i64 {
    let chi = |n: u64| match n % 4 {
        1 => 1,
        3 => -1,
        _ => 0,
    };
    let mut sum = 0;
    let mut d = 1;
    while d * d <= m {
        if m.is_multiple_of(d) {
            sum += chi(d);
            if d * d != m {
                sum += chi(m / d);
            }
        }
        d += 1;
    }
    sum
}

fn oracle(opts: &VerifyOptions) -> Vec<Check> {
    let mut out = Vec::new();
    for (poly, _) in EXAMPLE_FIELDS {
        let cache = match field_cache(poly, opts.oracle_bound) {
            Ok(c) => c,
            Err(e) => {
                out.push(check(format!("{poly} cache"), false, e));
                continue;
            }
        };
        let field = FieldPresentation::parse(poly).unwrap();
        let mismatches: Vec<u64> = cache
            .entries()
            .iter()
            .filter(|st| !st.ramified)
            .filter(|st| st.degree_one_count() != root_count_oracle(field.poly(), st.p))
            .map(|st| st.p)
            .collect();
        out.push(check(
            format!("{poly} degree-1 primes = roots mod p, p ≤ {}", opts.oracle_bound),
            mismatches.is_empty(),
            format!("{} mismatches {:?}", mismatches.len(), &mismatches[..mismatches.len().min(5)]),
        ));
        let bound = opts.sieve_bound.min(opts.oracle_bound);
        match sieve_a_values(&cache, bound) {
            Ok(table) => {
                let bad = (1..=bound).filter(|&m| table.a(m) as u64 != a_by_trial_division(&cache, m)).count();
                out.push(check(format!("{poly} sieve = trial division, m ≤ {bound}"), bad == 0, format!("{bad} mismatches")));
            }
            Err(e) => out.push(check(format!("{poly} sieve"), false, e.to_string())),
        }
    }
    let name = format!("x^2+1 a(m) = Σ χ₋₄(d), m ≤ {}", opts.oracle_bound);
    match field_cache("x^2+1", opts.oracle_bound).and_then(|c| sieve_a_values(&c, opts.oracle_bound).map_err(|e| e.to_string())) {
        Ok(table) => {
            let bad = (1..=opts.oracle_bound).filter(|&m| table.a(m) as i64 != kronecker_divisor_sum(m)).count();
            out.push(check(name, bad == 0, format!("{bad} mismatches")));
        }
        Err(e) => out.push(check(name, false, e)),
    }
    out.push(multiplicativity(opts));
    out
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

fn multiplicativity(opts: &VerifyOptions) -> Check {
    let x = opts.sieve_bound.max(10_000) * 10;
    let name = format!("x^3-2 multiplicativity on 10⁴ coprime pairs, seed {}", opts.seed);
    let table = match field_cache("x^3-2", x).and_then(|c| sieve_a_values(&c, x).map_err(|e| e.to_string())) {
        Ok(t) => t,
        Err(e) => return check(name, false, e),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let root = (x as f64).sqrt() as u64;
    let (mut tested, mut bad) = (0, 0);
    while tested < 10_000 {
        let (m1, m2) = (rng.random_range(1..=root), rng.random_range(1..=root));
        if gcd(m1, m2) != 1 {
            continue;
        }
        tested += 1;
        if table.a(m1 * m2) as u64 != table.a(m1) as u64 * table.a(m2) as u64 {
            bad += 1;
        }
    }
    check(name, bad == 0, format!("{bad} failures"))
}

fn chebotarev(opts: &VerifyOptions) -> Vec<Check> {
    EXAMPLE_FIELDS
        .iter()
        .map(|(poly, preset_name)| {
            let name = format!("{poly} splitting frequencies within 0.01, p ≤ {}", opts.pmax);
            let cache = match field_cache(poly, opts.pmax) {
                Ok(c) => c,
                Err(e) => return check(name, false, e),
            };
            let p = preset(&preset_name.parse().unwrap()).unwrap();
            let g_prime = p.presentation.subgroup_over(&p.trivial_n_prime().subgroup).unwrap();
            let expected = expected_densities(&p.presentation, &g_prime);
            let summary = splitting_summary(&cache, Some(&expected));
            let worst = summary.max_deviation.unwrap_or(f64::INFINITY);
            let detail = summary
                .rows
                .iter()
                .map(|r| format!("{:?}: {:.4} vs {}", r.splitting_type, r.observed, r.expected.as_deref().unwrap_or("-")))
                .collect::<Vec<_>>()
                .join("; ");
            check(name, worst <= 0.01, detail)
        })
        .collect()
}

/// Fields, exponents and predicted degrees for the degree-selection runs.
pub const FIT_TARGETS: [(&str, u32, usize); 7] = [
    ("x^3-2", 2, 1),
    ("x^3-2", 3, 4),
    ("x^4-2", 2, 2),
    ("x^2+1", 2, 1),
    ("x-1", 1, 0),
    ("x-1", 2, 0),
    ("x-1", 3, 0),
];

fn fit(opts: &VerifyOptions) -> Vec<Check> {
    let mut out = Vec::new();
    let x = opts.fit_x;
    let grid = geometric_checkpoints(x, DEFAULT_CHECKPOINTS, DEFAULT_SPAN);
    let mut tables = BTreeMap::new();
    for (poly, l, predicted) in FIT_TARGETS {
        let name = format!("{poly} l={l} selects degree {predicted} at X={x}");
        if !tables.contains_key(poly) {
            match field_cache(poly, x).and_then(|c| sieve_a_values(&c, x).map_err(|e| e.to_string())) {
                Ok(t) => {
                    tables.insert(poly, t);
                }
                Err(e) => {
                    out.push(check(name, false, e));
                    continue;
                }
            }
        }
        let table = &tables[poly];
        let series = partial_sums(table, l, &grid).expect("moment sums");
        let report = select_degree(&series, 6, SelectionRule::default(), Some(predicted as u64)).expect("fit");
        let ladder: Vec<String> = report.residual_ladder.iter().map(|r| format!("{r:.2e}")).collect();
        out.push(check(&name, report.matches_prediction, format!("{:?}, ladder {}", report.selection, ladder.join(" "))));
        if predicted == 0 {
            let c0 = report.coefficients.first().copied().unwrap_or(f64::NAN);
            out.push(check(format!("{poly} l={l} c₀ = 1 ± 10⁻³"), (c0 - 1.0).abs() <= 1e-3, format!("c₀ = {c0}")));
        } else if let Some(drift) = report.half_window_drift() {
            out.push(check(format!("{poly} l={l} half-window drift < 5%"), drift < 0.05, format!("{:.3}%", 100.0 * drift)));
        } else {
            out.push(check(format!("{poly} l={l} half-window drift < 5%"), false, "no selected degree"));
        }
        out.push(check(format!("{poly} l={l} residual ladder monotone"), report.ladder_monotone(), ""));
    }
    for (poly, _) in EXAMPLE_FIELDS {
        let Some(table) = tables.get(poly) else { continue };
        let d = FieldPresentation::parse(poly).unwrap().degree() as i32;
        let series = partial_sums(table, 2, &grid).expect("moment sums");
        let ratios: Vec<f64> = series
            .checkpoints
            .iter()
            .map(|&(x, s)| s as f64 / (x as f64 * (x as f64).ln().powi(d - 1)))
            .collect();
        let top = &ratios[ratios.len() / 2..];
        let ok = top.windows(2).all(|w| w[1] <= w[0]);
        out.push(check(
            format!("{poly} S₂/(X log^{} X) non-increasing over the top half", d - 1),
            ok,
            format!("{:.5} → {:.5}", top[0], top[top.len() - 1]),
        ));
    }
    out
}

fn delta(opts: &VerifyOptions) -> Vec<Check> {
    let mut out = Vec::new();
    let p = preset(&PresetName::Symmetric(3)).unwrap();
    let inv = p.presentation.invariants(&p.trivial_n_prime().subgroup).unwrap();
    let params = solve_alpha_beta(&inv, 2).unwrap();
    let direct = compute_delta(&params, &SubconvexityConfig::defaults(&inv, DeltaMode::Direct)).unwrap();
    let dedekind = compute_delta(&params, &SubconvexityConfig::defaults(&inv, DeltaMode::Dedekind)).unwrap();
    out.push(check("S₃ l=2 δ direct = 2/11", direct.delta == Ratio::new(2, 11), format_ratio(&direct.delta)));
    out.push(check(
        "S₃ l=2 δ dedekind > δ direct",
        dedekind.delta > direct.delta,
        format!("{} vs {}", format_ratio(&dedekind.delta), format_ratio(&direct.delta)),
    ));

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let xs: Vec<f64> = geometric_checkpoints(4_000_000, DEFAULT_CHECKPOINTS, DEFAULT_SPAN).into_iter().map(|x| x as f64).collect();
    let mut failures = Vec::new();
    for k in 0..=5usize {
        for _ in 0..4 {
            let coeffs: Vec<f64> = (0..=k).map(|_| rng.random_range(0.5..2.0)).collect();
            let pts: Vec<(f64, f64)> = xs
                .iter()
                .map(|&x| {
                    let y = coeffs.iter().rev().fold(0.0, |acc, &c| acc * x.ln() + c);
                    (x, y * (1.0 + 1e-6 * rng.random_range(-1.0..1.0)))
                })
                .collect();
            let r = select_degree_points(1, &pts, 6, SelectionRule::default(), Some(k as u64)).unwrap();
            if !r.matches_prediction {
                failures.push(format!("k={k}: {:?}", r.selection));
            }
        }
    }
    out.push(check(
        format!("synthetic degree recovery k ≤ 5, noise 10⁻⁶, seed {}", opts.seed),
        failures.is_empty(),
        failures.join("; "),
    ));
    out
}
