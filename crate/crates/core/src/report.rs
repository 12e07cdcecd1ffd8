//! JSON-ready reports: group analysis per moment exponent and splitting
//! frequencies against class densities.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::Ratio;
use serde::Serialize;

use crate::characters::{
    check_assumptions, chi1_formula, chi1_permutation, chi2, compute_delta, euler_identity_table,
    format_ratio, inner_product, AssumptionReport, CharError, ClassFunction, DeltaMode, DeltaReport,
    EulerReport, MomentParameters, Rational, SubconvexityConfig,
};
use crate::group::{conjugacy_classes, CosetAction, GroupInvariants, Preset, SemidirectPresentation, SubgroupData};
use crate::splitting::PrimeSplittingCache;

/// User-supplied replacements for the default θ exponents.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ThetaOverrides {
    pub theta1: Option<Rational>,
    pub theta2: Option<Rational>,
    pub theta3: Option<Rational>,
    pub theta4: Option<Rational>,
}

impl ThetaOverrides {
    pub fn apply(&self, mut cfg: SubconvexityConfig) -> SubconvexityConfig {
        cfg.theta1 = self.theta1.unwrap_or(cfg.theta1);
        cfg.theta2 = self.theta2.unwrap_or(cfg.theta2);
        cfg.theta3 = self.theta3.unwrap_or(cfg.theta3);
        cfg.theta4 = self.theta4.unwrap_or(cfg.theta4);
        cfg
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassSummary {
    pub representative: usize,
    pub size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi1: Option<i64>,
    pub chi2: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coset_cycle_type: Option<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MomentEntry {
    pub l: u32,
    pub assumption_iii: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parameters: Option<MomentParameters>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub predicted_degree: Option<u128>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<DeltaReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_other_mode: Option<DeltaReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub euler: Option<EulerReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupReport {
    pub preset: String,
    pub n_prime: String,
    pub order: usize,
    pub invariants: GroupInvariants,
    pub assumptions: AssumptionReport,
    pub classes: Vec<ClassSummary>,
    /// `⟨1, χ₁⟩`, absent when `G′` is undefined.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trivial_multiplicity: Option<String>,
    pub chi1_routes_agree: Option<bool>,
    pub mode: DeltaMode,
    pub moments: Vec<MomentEntry>,
}

impl GroupReport {
    pub fn entry(&self, l: u32) -> Option<&MomentEntry> {
        self.moments.iter().find(|m| m.l == l)
    }
}

pub struct GroupRequest<'a> {
    pub preset: &'a Preset,
    pub n_prime: &'a str,
    pub l_values: &'a [u32],
    pub declared_ii: bool,
    pub mode: DeltaMode,
    pub theta: ThetaOverrides,
}

fn other(mode: DeltaMode) -> DeltaMode {
    match mode {
        DeltaMode::Direct => DeltaMode::Dedekind,
        DeltaMode::Dedekind => DeltaMode::Direct,
    }
}

pub fn analyze_group(req: &GroupRequest<'_>) -> Result<GroupReport, CharError> {
    let pres = &req.preset.presentation;
    let choice = req.preset.n_prime(req.n_prime)?;
    let inv = pres.invariants(&choice.subgroup)?;
    let assumptions = check_assumptions(&inv, req.l_values.iter().copied(), req.declared_ii);
    let classes = Arc::new(conjugacy_classes(pres.group()));
    let c2 = chi2(pres, &classes)?;

    let mut chi1: Option<ClassFunction> = None;
    let mut routes_agree = None;
    let mut coset_action = None;
    if assumptions.normality_holds {
        let formula = chi1_formula(pres, &choice.subgroup, &classes)?;
        let g_prime = pres.subgroup_over(&choice.subgroup)?;
        let perm = chi1_permutation(pres.group(), &g_prime, &classes)?;
        routes_agree = Some(formula.class_values() == perm.class_values());
        coset_action = Some(CosetAction::new(pres.group(), &g_prime));
        chi1 = Some(formula);
    }
    let trivial_multiplicity = match &chi1 {
        Some(c) => Some(ratio64(inner_product(&ClassFunction::constant(classes.clone(), 1), c)?)),
        None => None,
    };

    let class_rows = classes
        .classes()
        .iter()
        .enumerate()
        .map(|(i, class)| ClassSummary {
            representative: class.representative,
            size: class.size(),
            chi1: chi1.as_ref().map(|c| c.class_values()[i]),
            chi2: c2.class_values()[i],
            coset_cycle_type: coset_action.as_ref().map(|a| a.cycle_type(class.representative)),
        })
        .collect();

    let mut moments = Vec::new();
    for &l in req.l_values {
        let mut entry = MomentEntry {
            l,
            assumption_iii: assumptions.assumption_iii.get(&l).copied().unwrap_or(false),
            parameters: None,
            predicted_degree: None,
            error: None,
            delta: None,
            delta_other_mode: None,
            euler: None,
        };
        match crate::characters::solve_alpha_beta(&inv, l) {
            Ok(params) => {
                entry.parameters = Some(params);
                entry.predicted_degree = Some(params.degree());
                let base = SubconvexityConfig::defaults(&inv, req.mode);
                let cfg = req.theta.apply(base);
                entry.delta = Some(compute_delta(&params, &cfg)?);
                entry.delta_other_mode = Some(compute_delta(&params, &cfg.with_mode(other(req.mode)))?);
                if let Some(c1) = &chi1 {
                    entry.euler = Some(euler_identity_table(c1, &c2, &params)?);
                }
            }
            Err(e) => entry.error = Some(e.to_string()),
        }
        moments.push(entry);
    }

    Ok(GroupReport {
        preset: req.preset.name.to_string(),
        n_prime: choice.label.clone(),
        order: pres.group().order(),
        invariants: inv,
        assumptions,
        classes: class_rows,
        trivial_multiplicity,
        chi1_routes_agree: routes_agree,
        mode: req.mode,
        moments,
    })
}

fn ratio64(r: Ratio<i64>) -> String {
    format_ratio(&Ratio::new(*r.numer() as i128, *r.denom() as i128))
}

/// Density of each cycle type of `G` acting on `G/G′`.
pub fn expected_densities(pres: &SemidirectPresentation, g_prime: &SubgroupData) -> BTreeMap<Vec<u32>, Rational> {
    let group = pres.group();
    let classes = conjugacy_classes(group);
    let action = CosetAction::new(group, g_prime);
    let mut out: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
    for class in classes.classes() {
        let shape: Vec<u32> = action.cycle_type(class.representative).into_iter().map(|c| c as u32).collect();
        *out.entry(shape).or_insert(Ratio::from_integer(0)) += Ratio::new(class.size() as i128, group.order() as i128);
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct DensityRow {
    pub splitting_type: Vec<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
    pub count: u64,
    pub observed: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deviation: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SplittingSummary {
    pub pmax: u64,
    pub primes: usize,
    pub unramified: u64,
    pub ramified_primes: Vec<u64>,
    pub rows: Vec<DensityRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_deviation: Option<f64>,
}

/// Frequencies of splitting types over unramified primes, compared with
/// `expected` when given.
pub fn splitting_summary(
    cache: &PrimeSplittingCache,
    expected: Option<&BTreeMap<Vec<u32>, Rational>>,
) -> SplittingSummary {
    let mut counts: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
    let mut unramified = 0u64;
    let mut ramified_primes = Vec::new();
    for st in cache.entries() {
        if st.ramified {
            ramified_primes.push(st.p);
            continue;
        }
        unramified += 1;
        *counts.entry(st.residue_degrees.clone()).or_default() += 1;
    }
    let mut keys: Vec<Vec<u32>> = counts.keys().cloned().collect();
    if let Some(exp) = expected {
        keys.extend(exp.keys().filter(|k| !counts.contains_key(*k)).cloned());
        keys.sort();
    }
    let total = unramified.max(1) as f64;
    let rows: Vec<DensityRow> = keys
        .into_iter()
        .map(|k| {
            let count = counts.get(&k).copied().unwrap_or(0);
            let observed = count as f64 / total;
            let exp = expected.map(|e| e.get(&k).copied().unwrap_or(Ratio::from_integer(0)));
            DensityRow {
                expected: exp.map(|r| format_ratio(&r)),
                deviation: exp.map(|r| observed - *r.numer() as f64 / *r.denom() as f64),
                splitting_type: k,
                count,
                observed,
            }
        })
        .collect();
    let max_deviation = expected.map(|_| rows.iter().filter_map(|r| r.deviation).fold(0.0f64, |m, d| m.max(d.abs())));
    SplittingSummary { pmax: cache.pmax(), primes: cache.len(), unramified, ramified_primes, rows, max_deviation }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{preset, PresetName};

    fn request<'a>(p: &'a Preset, n: &'a str, ls: &'a [u32]) -> GroupRequest<'a> {
        GroupRequest { preset: p, n_prime: n, l_values: ls, declared_ii: true, mode: DeltaMode::Direct, theta: ThetaOverrides::default() }
    }

    #[test]
    fn a4_order_two_is_formal() {
        let p = preset(&PresetName::Alternating4).unwrap();
        let r = analyze_group(&request(&p, "order2", &[2, 3])).unwrap();
        assert!(!r.assumptions.normality_holds);
        assert!(!r.assumptions.assumption_iii[&2]);
        assert!(r.assumptions.assumption_iii[&3]);
        assert!(r.entry(2).unwrap().error.is_some());
        assert!(r.entry(3).unwrap().euler.is_none());
        assert!(r.chi1_routes_agree.is_none());
    }

    #[test]
    fn galois_and_dihedral_entries() {
        let p = preset(&PresetName::GaloisCyclic(2)).unwrap();
        let r = analyze_group(&request(&p, "trivial", &[3])).unwrap();
        let params = r.entry(3).unwrap().parameters.unwrap();
        assert_eq!((params.alpha, params.beta, params.degree()), (4, 0, 3));

        let p = preset(&PresetName::Dihedral(4)).unwrap();
        let r = analyze_group(&request(&p, "trivial", &[2])).unwrap();
        let params = r.entry(2).unwrap().parameters.unwrap();
        assert_eq!((params.alpha, params.beta, params.degree()), (3, 1, 2));
        assert_eq!(r.trivial_multiplicity.as_deref(), Some("1"));
        assert_eq!(r.chi1_routes_agree, Some(true));
        assert!(r.entry(2).unwrap().euler.as_ref().unwrap().all_hold());
    }

    #[test]
    fn theta_override_changes_delta() {
        let p = preset(&PresetName::Symmetric(3)).unwrap();
        let mut req = request(&p, "trivial", &[2]);
        let base = analyze_group(&req).unwrap();
        assert_eq!(format_ratio(&base.entry(2).unwrap().delta.as_ref().unwrap().delta), "2/11");
        req.theta.theta3 = Some(Ratio::new(1, 2));
        let changed = analyze_group(&req).unwrap();
        assert_eq!(format_ratio(&changed.entry(2).unwrap().delta.as_ref().unwrap().delta), "2/9");
    }

    #[test]
    fn dihedral_densities() {
        let p = preset(&PresetName::Dihedral(4)).unwrap();
        let pres = &p.presentation;
        let g_prime = pres.subgroup_over(&p.trivial_n_prime().subgroup).unwrap();
        let d = expected_densities(pres, &g_prime);
        let show: Vec<(Vec<u32>, String)> = d.iter().map(|(k, v)| (k.clone(), format_ratio(v))).collect();
        assert_eq!(
            show,
            vec![
                (vec![1, 1, 1, 1], "1/8".to_string()),
                (vec![1, 1, 2], "1/4".to_string()),
                (vec![2, 2], "3/8".to_string()),
                (vec![4], "1/4".to_string()),
            ]
        );
    }
}
