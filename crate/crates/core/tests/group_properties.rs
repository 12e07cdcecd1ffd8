use std::collections::BTreeSet;
use std::sync::Arc;

use idealmoments::characters::{
    check_assumptions, chi1_formula, chi1_permutation, chi2, solve_alpha_beta, ClassFunction,
};
use idealmoments::group::{
    conjugacy_classes, preset, CosetAction, CosetDecomposition, FiniteGroup, Preset, PresetName,
    EXHAUSTIVE_CHECK_ORDER,
};
use idealmoments::verify::standard_presets;
use proptest::prelude::*;

fn named(s: &str) -> Preset {
    preset(&s.parse::<PresetName>().unwrap()).unwrap()
}

fn small_presets() -> Vec<Preset> {
    standard_presets().into_iter().filter(|p| p.presentation.group().order() <= EXHAUSTIVE_CHECK_ORDER).collect()
}

#[test]
fn orders_factor() {
    for p in standard_presets() {
        let pres = &p.presentation;
        assert_eq!(pres.group().order(), pres.normal_factor().order() * pres.complement().order(), "{}", p.name);
        for c in p.n_prime_choices.iter().filter(|c| c.admissible) {
            let inv = pres.invariants(&c.subgroup).unwrap();
            assert_eq!(inv.n_prime * inv.n_dprime * inv.h, inv.n, "{} {}", p.name, c.label);
        }
    }
}

#[test]
fn multiplication_rule_and_normality() {
    for p in small_presets() {
        let pres = &p.presentation;
        let (g, n, h, act) = (pres.group(), pres.normal_factor(), pres.complement(), pres.action());
        for n1 in n.elements() {
            for h1 in h.elements() {
                for n2 in n.elements() {
                    for h2 in h.elements() {
                        let lhs = g.mul(pres.encode(n1, h1), pres.encode(n2, h2));
                        let rhs = pres.encode(n.mul(n1, act.apply(h1, n2)), h.mul(h1, h2));
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
        assert!(pres.normal_subgroup().is_normal_in_parent());
        let inter: Vec<_> = pres.normal_subgroup().members().iter().filter(|&&x| pres.complement_subgroup().contains(x)).copied().collect();
        assert_eq!(inter, vec![g.identity()]);
    }
}

#[test]
fn normality_booleans_agree_on_all_subgroups() {
    // every subgroup of N generated by at most two elements
    for p in small_presets() {
        let pres = &p.presentation;
        let n = pres.normal_factor();
        let mut seen = BTreeSet::new();
        for a in n.elements() {
            for b in n.elements() {
                let sub = idealmoments::group::SubgroupData::generated_by(n, &[a, b]).unwrap();
                if !seen.insert(sub.members().to_vec()) {
                    continue;
                }
                let (lemma, direct) = pres.check_normality_equivalence(&sub);
                assert_eq!(lemma, direct, "{} {:?}", p.name, sub.members());
            }
        }
    }
}

#[test]
fn coset_action_is_a_homomorphism() {
    for p in small_presets() {
        let pres = &p.presentation;
        let g = pres.group();
        for c in p.n_prime_choices.iter().filter(|c| c.admissible) {
            let sub = pres.subgroup_over(&c.subgroup).unwrap();
            let action = CosetAction::new(g, &sub);
            let cosets = CosetDecomposition::left(g, &sub);
            assert_eq!(action.degree(), g.order() / sub.order());
            for a in g.elements() {
                // permutation recomputed from scratch
                for i in 0..cosets.len() {
                    let moved = cosets.coset_of(g.mul(a, cosets.representative(i)));
                    assert_eq!(action.permutation(a)[i] as usize, moved);
                }
                for b in g.elements() {
                    assert!(action.respects_product(g, a, b), "{} {} {a} {b}", p.name, c.label);
                }
            }
        }
    }
}

#[test]
fn twisted_map_fibers_have_fixed_size() {
    for p in standard_presets() {
        let pres = &p.presentation;
        for c in p.n_prime_choices.iter().filter(|c| c.admissible) {
            let inv = pres.invariants(&c.subgroup).unwrap();
            for (&h, &nh) in &inv.n_h_dprime {
                let fibers = pres.twisted_map_fibers(&c.subgroup, h).unwrap();
                assert!(fibers.values().all(|&f| f == nh), "{} {} h={h}: {fibers:?}", p.name, c.label);
                assert_eq!(fibers.len() * nh, inv.n_dprime);
            }
        }
    }
}

#[test]
fn chi1_routes_agree_and_take_table_values() {
    for p in small_presets() {
        let pres = &p.presentation;
        let classes = Arc::new(conjugacy_classes(pres.group()));
        let c2 = chi2(pres, &classes).unwrap();
        let h = pres.complement().order() as i64;
        for c in p.n_prime_choices.iter().filter(|c| c.admissible) {
            let inv = pres.invariants(&c.subgroup).unwrap();
            let formula = chi1_formula(pres, &c.subgroup, &classes).unwrap();
            let g_prime = pres.subgroup_over(&c.subgroup).unwrap();
            let perm = chi1_permutation(pres.group(), &g_prime, &classes).unwrap();
            assert_eq!(formula.class_values(), perm.class_values(), "{} {}", p.name, c.label);
            for g in pres.group().elements() {
                let (x2, x1) = (c2.value_at(g), formula.value_at(g));
                let (_, hg) = pres.decompose(g);
                if pres.in_normal_factor(g) {
                    assert_eq!(x2, h - 1);
                    assert!(x1 == inv.n_dprime as i64 || x1 == 0);
                } else {
                    assert_eq!(x2, -1);
                    assert!(x1 == 0 || x1 == inv.n_h_dprime[&hg] as i64);
                }
            }
        }
    }
}

#[test]
fn every_nonzero_chi1_value_divides_the_index() {
    for p in standard_presets() {
        let pres = &p.presentation;
        let classes = Arc::new(conjugacy_classes(pres.group()));
        for c in p.n_prime_choices.iter().filter(|c| c.admissible) {
            let inv = pres.invariants(&c.subgroup).unwrap();
            let chi1 = chi1_formula(pres, &c.subgroup, &classes).unwrap();
            for &v in chi1.class_values() {
                assert!(v == 0 || inv.n_dprime as i64 % v == 0, "{} {} value {v}", p.name, c.label);
            }
        }
    }
}

#[test]
fn class_sizes_of_small_examples() {
    let sizes = |s: &str| {
        let mut v = conjugacy_classes(named(s).presentation.group()).sizes();
        v.sort_unstable();
        v
    };
    assert_eq!(sizes("symmetric:3"), vec![1, 2, 3]);
    assert_eq!(sizes("dihedral:4"), vec![1, 1, 2, 2, 2]);
    assert_eq!(sizes("a4"), vec![1, 3, 4, 4]);
    assert_eq!(sizes("dihedral:5"), vec![1, 2, 2, 5]);
    assert_eq!(conjugacy_classes(named("symmetric:6").presentation.group()).len(), 11);
}

#[test]
fn d8_rotation_is_a_four_cycle() {
    let p = named("dihedral:4");
    let pres = &p.presentation;
    let g_prime = pres.subgroup_over(&p.trivial_n_prime().subgroup).unwrap();
    let action = CosetAction::new(pres.group(), &g_prime);
    let rotation = pres.embed_n(1);
    assert_eq!(action.cycle_type(rotation), vec![4]);
    let reflection = pres.embed_h(1);
    assert_eq!(action.fixed_points(reflection), 2);
}

#[test]
fn assumption_reports() {
    let a4 = named("a4");
    let order2 = a4.n_prime("order2").unwrap();
    assert!(!order2.admissible);
    assert_eq!(a4.presentation.check_normality_equivalence(&order2.subgroup), (false, false));
    let inv = a4.presentation.invariants(&order2.subgroup).unwrap();
    let report = check_assumptions(&inv, 1..=9, true);
    assert!(!report.normality_holds);
    for (l, holds) in report.assumption_iii {
        assert_eq!(holds, l % 2 == 1, "l = {l}");
    }
    let s3 = named("symmetric:3");
    let inv = s3.presentation.invariants(&s3.trivial_n_prime().subgroup).unwrap();
    assert!(check_assumptions(&inv, [2], true).assumption_i);
}

#[test]
fn trivial_character_appears_once() {
    for p in small_presets() {
        let pres = &p.presentation;
        let classes = Arc::new(conjugacy_classes(pres.group()));
        let one = ClassFunction::constant(classes.clone(), 1);
        for c in p.n_prime_choices.iter().filter(|c| c.admissible) {
            let chi1 = chi1_formula(pres, &c.subgroup, &classes).unwrap();
            let total: i64 = pres.group().elements().map(|g| chi1.value_at(g) * one.value_at(g)).sum();
            assert_eq!(total, pres.group().order() as i64);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn dihedral_family(k in 2usize..=30) {
        let p = preset(&PresetName::Dihedral(k)).unwrap();
        let pres = &p.presentation;
        prop_assert_eq!(pres.group().order(), 2 * k);
        let inv = pres.invariants(&p.trivial_n_prime().subgroup).unwrap();
        // x ↦ x² on C_k has kernel of size gcd(2, k)
        let fixed = if k % 2 == 0 { 2 } else { 1 };
        prop_assert_eq!(inv.common_n_h_dprime(), Some(fixed));
        for l in 1..=6u32 {
            let top = (k as u128).pow(l - 1);
            let bottom = (fixed as u128).pow(l - 1);
            match solve_alpha_beta(&inv, l) {
                Ok(params) => {
                    prop_assert_eq!(params.alpha + params.beta, top);
                    prop_assert_eq!(params.alpha - params.beta, bottom);
                }
                Err(_) => prop_assert!((top - bottom) % 2 == 1),
            }
        }
    }

    #[test]
    fn cyclic_table_is_associative(k in 1usize..=40) {
        let g = FiniteGroup::cyclic(k).unwrap();
        for a in g.elements() {
            prop_assert_eq!(g.mul(g.inv(a), a), g.identity());
            prop_assert_eq!(g.mul(a, g.identity()), a);
        }
    }
}
