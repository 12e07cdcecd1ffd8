use std::sync::Arc;

use num_rational::Ratio;
use proptest::prelude::*;

use super::*;
use crate::group::{conjugacy_classes, preset, ClassStructure, Preset, SubgroupData};

fn load(name: &str) -> (Preset, Arc<ClassStructure>) {
    let p = preset(&name.parse().unwrap()).unwrap();
    let classes = Arc::new(conjugacy_classes(p.presentation.group()));
    (p, classes)
}

/// χ₁ via the coset action on G/(N′⋊H).
fn chi1_by_cosets(p: &Preset, n_prime: &SubgroupData, classes: &Arc<ClassStructure>) -> ClassFunction {
    let pres = &p.presentation;
    let g_prime = pres.subgroup_over(n_prime).unwrap();
    chi1_permutation(pres.group(), &g_prime, classes).unwrap()
}

#[test]
fn s3_chi1_values() {
    let (p, classes) = load("dihedral:3");
    let pres = &p.presentation;
    let chi1 = chi1_formula(pres, &p.trivial_n_prime().subgroup, &classes).unwrap();
    // e, 3-cycle, transposition
    assert_eq!(chi1.value_at(0), 3);
    assert_eq!(chi1.value_at(pres.embed_n(1)), 0);
    assert_eq!(chi1.value_at(pres.embed_h(1)), 1);
    let oracle = chi1_by_cosets(&p, &p.trivial_n_prime().subgroup, &classes);
    assert_eq!(chi1.class_values(), oracle.class_values());
}

#[test]
fn d8_chi1_values() {
    let (p, classes) = load("dihedral:4");
    let pres = &p.presentation;
    let chi1 = chi1_formula(pres, &p.trivial_n_prime().subgroup, &classes).unwrap();
    let r = |k| pres.embed_n(k);
    let rs = |k| pres.encode(k, 1);
    assert_eq!(
        [chi1.value_at(0), chi1.value_at(r(2)), chi1.value_at(r(1)), chi1.value_at(rs(0)), chi1.value_at(rs(1))],
        [4, 0, 0, 2, 0]
    );
    assert_eq!(classes.sizes(), vec![1, 2, 2, 2, 1]);
}

#[test]
fn galois_chi1_is_regular() {
    let (p, classes) = load("galois:cyclic:5");
    let chi1 = chi1_formula(&p.presentation, &p.trivial_n_prime().subgroup, &classes).unwrap();
    assert_eq!(chi1.class_values(), &[5, 0, 0, 0, 0]);
    let chi2 = super::chi2(&p.presentation, &classes).unwrap();
    assert!(chi2.class_values().iter().all(|&v| v == 0));
}

#[test]
fn a4_with_a3_takes_values_0_1_4() {
    let (p, classes) = load("a4");
    let pres = &p.presentation;
    let a3 = pres.complement_subgroup();
    let chi1 = chi1_permutation(pres.group(), &a3, &classes).unwrap();
    let mut values: Vec<i64> = chi1.class_values().to_vec();
    values.sort_unstable();
    values.dedup();
    assert_eq!(values, vec![0, 1, 4]);
    let formula = chi1_formula(pres, &p.trivial_n_prime().subgroup, &classes).unwrap();
    assert_eq!(formula.class_values(), chi1.class_values());
}

#[test]
fn chi1_formula_rejects_non_normal_n_prime() {
    let (p, classes) = load("a4");
    let order2 = &p.n_prime("order2").unwrap().subgroup;
    assert!(matches!(
        chi1_formula(&p.presentation, order2, &classes),
        Err(CharError::NormalityFails)
    ));
    assert_eq!(p.presentation.check_normality_equivalence(order2), (false, false));
}

#[test]
fn subgroup_equal_to_group_gives_trivial_character() {
    let (p, classes) = load("dihedral:5");
    let whole = SubgroupData::whole(p.presentation.group());
    let chi = chi1_permutation(p.presentation.group(), &whole, &classes).unwrap();
    assert!(chi.class_values().iter().all(|&v| v == 1));
}

#[test]
fn chi2_values() {
    let (p, classes) = load("dihedral:3");
    let c = super::chi2(&p.presentation, &classes).unwrap();
    let pres = &p.presentation;
    assert_eq!((c.value_at(0), c.value_at(pres.embed_n(1)), c.value_at(pres.embed_h(1))), (1, 1, -1));

    let (p, classes) = load("a4");
    let c = super::chi2(&p.presentation, &classes).unwrap();
    let mut vals = c.class_values().to_vec();
    vals.sort_unstable();
    assert_eq!(vals, vec![-1, -1, 2, 2]);
}

#[test]
fn inner_products() {
    let (p, classes) = load("dihedral:3");
    let one = ClassFunction::constant(classes.clone(), 1);
    let chi1 = chi1_formula(&p.presentation, &p.trivial_n_prime().subgroup, &classes).unwrap();
    assert_eq!(inner_product(&one, &chi1).unwrap(), Ratio::from_integer(1));
    assert_eq!(inner_product(&one, &one).unwrap(), Ratio::from_integer(1));

    let (p, classes8) = load("dihedral:4");
    let one8 = ClassFunction::constant(classes8.clone(), 1);
    let chi2 = super::chi2(&p.presentation, &classes8).unwrap();
    assert_eq!(inner_product(&one8, &chi2).unwrap(), Ratio::from_integer(0));

    assert!(matches!(inner_product(&one, &one8), Err(CharError::MismatchedGroups)));
}

#[test]
fn assumptions_for_a4() {
    let (p, _) = load("a4");
    let pres = &p.presentation;
    let inv = pres.invariants(&p.n_prime("order2").unwrap().subgroup).unwrap();
    let report = check_assumptions(&inv, 1..=9, false);
    assert!(!report.normality_holds);
    for (l, holds) in &report.assumption_iii {
        assert_eq!(*holds, l % 2 == 1, "l = {l}");
    }
    let inv = pres.invariants(&p.trivial_n_prime().subgroup).unwrap();
    let report = check_assumptions(&inv, 1..=9, false);
    assert!(report.normality_holds && report.assumption_i);
    assert!(report.assumption_iii.values().all(|&b| b));
}

#[test]
fn dihedral_assumption_iii_for_all_l() {
    for k in 2..=12 {
        let (p, _) = load(&format!("dihedral:{k}"));
        let inv = p.presentation.invariants(&p.trivial_n_prime().subgroup).unwrap();
        let report = check_assumptions(&inv, 1..=9, true);
        assert!(report.assumption_i);
        assert!(report.assumption_iii.values().all(|&b| b), "dihedral:{k}");
    }
}

#[test]
fn alpha_beta_values() {
    let (s3, _) = load("dihedral:3");
    let inv = s3.presentation.invariants(&s3.trivial_n_prime().subgroup).unwrap();
    let p2 = solve_alpha_beta(&inv, 2).unwrap();
    assert_eq!((p2.alpha, p2.beta, p2.degree()), (2, 1, 1));
    let p3 = solve_alpha_beta(&inv, 3).unwrap();
    assert_eq!((p3.alpha, p3.beta, p3.degree()), (5, 4, 4));

    let (d8, _) = load("dihedral:4");
    let inv = d8.presentation.invariants(&d8.trivial_n_prime().subgroup).unwrap();
    let p = solve_alpha_beta(&inv, 2).unwrap();
    assert_eq!((p.alpha, p.beta), (3, 1));

    for n in 2..=6 {
        let (g, _) = load(&format!("galois:cyclic:{n}"));
        let inv = g.presentation.invariants(&g.trivial_n_prime().subgroup).unwrap();
        for l in 1..=6u32 {
            let p = solve_alpha_beta(&inv, l).unwrap();
            assert_eq!(p.beta, 0);
            assert_eq!(p.alpha, (n as u128).pow(l - 1));
            assert!(satisfies_linear_system(&inv, &p));
        }
    }
}

#[test]
fn alpha_beta_signals_assumption_iii() {
    let (p, _) = load("a4");
    let inv = p.presentation.invariants(&p.n_prime("order2").unwrap().subgroup).unwrap();
    assert!(matches!(solve_alpha_beta(&inv, 2), Err(CharError::AssumptionIII { l: 2, .. })));
    let params = solve_alpha_beta(&inv, 3).unwrap();
    assert_eq!((params.alpha, params.beta), (2, 1));
}

#[test]
fn euler_identity_examples() {
    let (p, classes) = load("dihedral:3");
    let pres = &p.presentation;
    let n_prime = &p.trivial_n_prime().subgroup;
    let inv = pres.invariants(n_prime).unwrap();
    let chi1 = chi1_formula(pres, n_prime, &classes).unwrap();
    let chi2 = super::chi2(pres, &classes).unwrap();
    let report = verify_first_order_euler(&chi1, &chi2, &solve_alpha_beta(&inv, 2).unwrap()).unwrap();
    let transposition = classes.class_of(pres.embed_h(1));
    let row = &report.rows[transposition];
    assert_eq!((row.lhs, row.rhs), (1, 1));
    let three_cycle = classes.class_of(pres.embed_n(1));
    assert_eq!((report.rows[three_cycle].lhs, report.rows[three_cycle].rhs), (0, 0));

    let (p, classes) = load("dihedral:4");
    let pres = &p.presentation;
    let n_prime = &p.trivial_n_prime().subgroup;
    let inv = pres.invariants(n_prime).unwrap();
    let chi1 = chi1_formula(pres, n_prime, &classes).unwrap();
    let chi2 = super::chi2(pres, &classes).unwrap();
    let report = verify_first_order_euler(&chi1, &chi2, &solve_alpha_beta(&inv, 2).unwrap()).unwrap();
    let row = &report.rows[classes.class_of(pres.encode(0, 1))];
    assert_eq!((row.chi1, row.chi2, row.lhs, row.rhs), (2, -1, 4, 4));
}

#[test]
fn euler_identity_reports_failure() {
    let (p, classes) = load("dihedral:3");
    let pres = &p.presentation;
    let n_prime = &p.trivial_n_prime().subgroup;
    let chi1 = chi1_formula(pres, n_prime, &classes).unwrap();
    let chi2 = super::chi2(pres, &classes).unwrap();
    let wrong = MomentParameters { l: 2, alpha: 3, beta: 1 };
    assert!(matches!(
        verify_first_order_euler(&chi1, &chi2, &wrong),
        Err(CharError::EulerIdentity { .. })
    ));
}

fn s3_config() -> (MomentParameters, SubconvexityConfig) {
    let (p, _) = load("dihedral:3");
    let inv = p.presentation.invariants(&p.trivial_n_prime().subgroup).unwrap();
    (solve_alpha_beta(&inv, 2).unwrap(), SubconvexityConfig::defaults(&inv, DeltaMode::Direct))
}

#[test]
fn delta_direct_and_dedekind() {
    let (params, config) = s3_config();
    assert_eq!(config.theta3, Ratio::from_integer(1));
    assert_eq!(config.theta4, Ratio::new(3, 2));
    let direct = compute_delta(&params, &config).unwrap();
    assert_eq!(direct.delta, Ratio::new(2, 11));
    assert_eq!(direct.one_minus_delta, Ratio::new(9, 11));
    // 1 / (2·(13/42 + 0) + 1·(3/2) + 2) = 42/173
    let dedekind = compute_delta(&params, &config.with_mode(DeltaMode::Dedekind)).unwrap();
    assert_eq!(dedekind.delta, Ratio::new(42, 173));
    assert!(dedekind.delta > direct.delta);
}

#[test]
fn delta_galois_specialisation() {
    let (g, _) = load("galois:cyclic:4");
    let inv = g.presentation.invariants(&g.trivial_n_prime().subgroup).unwrap();
    let params = solve_alpha_beta(&inv, 3).unwrap();
    let config = SubconvexityConfig::defaults(&inv, DeltaMode::Direct);
    let report = compute_delta(&params, &config).unwrap();
    let expected = (Ratio::from_integer(params.alpha as i128) * Ratio::new(4, 3) + 2).recip();
    assert_eq!(report.delta, expected);
}

#[test]
fn negative_theta_is_rejected() {
    let (params, mut config) = s3_config();
    config.theta4 = Ratio::new(-1, 2);
    assert!(compute_delta(&params, &config).is_err());
}

#[test]
fn ratio_parsing() {
    assert_eq!(parse_ratio("13/42").unwrap(), Ratio::new(13, 42));
    assert_eq!(parse_ratio("1.5").unwrap(), Ratio::new(3, 2));
    assert_eq!(parse_ratio("2").unwrap(), Ratio::from_integer(2));
    assert!(parse_ratio("1/0").is_err());
    assert!(parse_ratio("abc").is_err());
}

proptest! {
    #[test]
    fn delta_is_monotone_in_each_theta(
        t in proptest::collection::vec((1i128..200, 1i128..50), 4),
        which in 0usize..4,
        shrink in 1i128..100,
        mode in prop::bool::ANY,
    ) {
        let (params, _) = s3_config();
        let mode = if mode { DeltaMode::Dedekind } else { DeltaMode::Direct };
        let thetas: Vec<Rational> = t.iter().map(|&(p, q)| Ratio::new(p, q)).collect();
        let config = SubconvexityConfig {
            theta1: thetas[0], theta2: thetas[1], theta3: thetas[2], theta4: thetas[3], mode,
        };
        let mut smaller = config;
        let slot = match which {
            0 => &mut smaller.theta1,
            1 => &mut smaller.theta2,
            2 => &mut smaller.theta3,
            _ => &mut smaller.theta4,
        };
        *slot *= Ratio::new(shrink, shrink + 1);
        let used = matches!((which, mode), (3, _) | (2, DeltaMode::Direct) | (0 | 1, DeltaMode::Dedekind));
        let before = compute_delta(&params, &config).unwrap().delta;
        let after = compute_delta(&params, &smaller).unwrap().delta;
        if used {
            prop_assert!(after > before);
        } else {
            prop_assert_eq!(after, before);
        }
    }
}
