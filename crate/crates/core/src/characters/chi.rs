use std::sync::Arc;

use crate::group::{ClassStructure, CosetAction, FiniteGroup, SemidirectPresentation, SubgroupData};

use super::{CharError, ClassFunction};

/// Closed form of the permutation character of `G` on `G/(N′ ⋊ H)`.
///
/// For `g = n₁n₂h` the value is `|N″_h|` (with `|N″_e| = |N″|`) when
/// `n₁ ≡ x·φ_h(x)⁻¹ (mod N′)` for some `x ∈ N″`, and zero otherwise. No coset
/// action is formed.
pub fn chi1_formula(
    pres: &SemidirectPresentation,
    n_prime: &SubgroupData,
    classes: &Arc<ClassStructure>,
) -> Result<ClassFunction, CharError> {
    let (lemma, _) = pres.check_normality_equivalence(n_prime);
    if !lemma {
        return Err(CharError::NormalityFails);
    }
    let n_group = pres.normal_factor();
    let h_group = pres.complement();
    let action = pres.action();
    let quotient = pres.quotient(n_prime)?;
    let cosets = quotient.cosets();
    let n_dprime = quotient.len() as i64;
    let identity_coset = cosets.coset_of(n_group.identity());

    // Per h: image of x ↦ x·φ_h(x)⁻¹ on N″ and the size of N″_h.
    let mut image = vec![vec![false; quotient.len()]; h_group.order()];
    let mut fixed = vec![n_dprime; h_group.order()];
    for h in h_group.elements().filter(|&h| h != h_group.identity()) {
        for c in 0..quotient.len() {
            let x = cosets.representative(c);
            let y = n_group.mul(x, n_group.inv(action.apply(h, x)));
            image[h][cosets.coset_of(y)] = true;
        }
        fixed[h] = pres.fixed_subgroup(n_prime, h)?.order() as i64;
    }

    ClassFunction::from_element_fn(classes.clone(), |g| {
        let (n, h) = pres.decompose(g);
        let c = cosets.coset_of(n);
        if h == h_group.identity() {
            if c == identity_coset { n_dprime } else { 0 }
        } else if image[h][c] {
            fixed[h]
        } else {
            0
        }
    })
}

/// Permutation character of `G` on the cosets of an arbitrary subgroup:
/// the number of cosets fixed by each element.
pub fn chi1_permutation(
    group: &FiniteGroup,
    sub: &SubgroupData,
    classes: &Arc<ClassStructure>,
) -> Result<ClassFunction, CharError> {
    let action = CosetAction::new(group, sub);
    ClassFunction::from_element_fn(classes.clone(), |g| action.fixed_points(g) as i64)
}

/// Character of `⊕_{π ≠ 1} π^{dim π}` over the irreducibles of `H`, pulled
/// back through `G → G/N`: `|H| − 1` on `N` and `−1` elsewhere.
pub fn chi2(pres: &SemidirectPresentation, classes: &Arc<ClassStructure>) -> Result<ClassFunction, CharError> {
    let h = pres.complement().order() as i64;
    ClassFunction::from_element_fn(classes.clone(), |g| if pres.in_normal_factor(g) { h - 1 } else { -1 })
}
