use std::collections::BTreeMap;

use serde::Serialize;

use crate::group::GroupInvariants;

use super::{CharError, ClassFunction};

#[derive(Clone, Debug, Serialize)]
pub struct AssumptionIWitness {
    pub h1: usize,
    pub h2: usize,
    pub fixed_h1: Vec<usize>,
    pub fixed_h2: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AssumptionReport {
    /// `N′ ⊴ N` and `φ_H(N′) ⊆ N′`. When false the remaining fields are
    /// formal: `φ_h` does not act on `N″`.
    pub normality_holds: bool,
    #[serde(rename = "I")]
    pub assumption_i: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub assumption_i_witness: Option<AssumptionIWitness>,
    /// Declared by the user, never computed.
    #[serde(rename = "II")]
    pub assumption_ii_declared: bool,
    #[serde(rename = "III")]
    pub assumption_iii: BTreeMap<u32, bool>,
}

fn pow_mod(base: u128, exp: u32, modulus: u128) -> u128 {
    let mut result = 1 % modulus;
    let mut b = base % modulus;
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            result = result * b % modulus;
        }
        b = b * b % modulus;
        e >>= 1;
    }
    result
}

/// `n″^{l−1} ≡ n″_h^{l−1} (mod h)` for every non-identity `h`. Vacuous when
/// `H` is trivial.
pub fn assumption_iii_holds(inv: &GroupInvariants, l: u32) -> bool {
    if inv.h <= 1 {
        return true;
    }
    let modulus = inv.h as u128;
    let e = l.saturating_sub(1);
    let lhs = pow_mod(inv.n_dprime as u128, e, modulus);
    inv.n_h_dprime.values().all(|&nh| pow_mod(nh as u128, e, modulus) == lhs)
}

/// Checks (I) as set equality of all `N″_h` and (III) for each `l`.
pub fn check_assumptions(
    inv: &GroupInvariants,
    l_values: impl IntoIterator<Item = u32>,
    assumption_ii_declared: bool,
) -> AssumptionReport {
    let mut witness = None;
    let mut sets = inv.fixed_sets.iter();
    if let Some((&h1, first)) = sets.next() {
        if let Some((&h2, other)) = sets.find(|(_, s)| *s != first) {
            witness = Some(AssumptionIWitness {
                h1,
                h2,
                fixed_h1: first.clone(),
                fixed_h2: other.clone(),
            });
        }
    }
    AssumptionReport {
        normality_holds: inv.quotient_action_defined,
        assumption_i: witness.is_none(),
        assumption_i_witness: witness,
        assumption_ii_declared,
        assumption_iii: l_values.into_iter().map(|l| (l, assumption_iii_holds(inv, l))).collect(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MomentParameters {
    pub l: u32,
    pub alpha: u128,
    pub beta: u128,
}

impl MomentParameters {
    /// Predicted degree of the log-polynomial main term, `α − 1`.
    pub fn degree(&self) -> u128 {
        self.alpha - 1
    }
}

fn checked_pow(base: usize, exp: u32) -> Result<u128, CharError> {
    (base as u128).checked_pow(exp).ok_or(CharError::Overflow)
}

/// Solves `[[1, h−1], [1, −1]]·(α, β)ᵀ = (n″^{l−1}, n″_h^{l−1})ᵀ`.
///
/// With trivial `H` only the first row is present and `β = 0`.
pub fn solve_alpha_beta(inv: &GroupInvariants, l: u32) -> Result<MomentParameters, CharError> {
    if l == 0 {
        return Err(CharError::InvalidExponent(l));
    }
    let top = checked_pow(inv.n_dprime, l - 1)?;
    if inv.h <= 1 {
        return Ok(MomentParameters { l, alpha: top, beta: 0 });
    }
    let nh = inv.common_n_h_dprime().ok_or(CharError::AssumptionI)?;
    let bottom = checked_pow(nh, l - 1)?;
    let diff = top.checked_sub(bottom).ok_or(CharError::Overflow)?;
    let h = inv.h as u128;
    if diff % h != 0 {
        return Err(CharError::AssumptionIII { l, remainder: diff % h, modulus: h });
    }
    let beta = diff / h;
    let params = MomentParameters { l, alpha: beta + bottom, beta };
    debug_assert!(satisfies_linear_system(inv, &params));
    Ok(params)
}

/// Checks both rows of the linear system in exact integer arithmetic.
pub fn satisfies_linear_system(inv: &GroupInvariants, params: &MomentParameters) -> bool {
    let Ok(top) = checked_pow(inv.n_dprime, params.l - 1) else {
        return false;
    };
    let h = inv.h as u128;
    let row1 = params
        .beta
        .checked_mul(h.saturating_sub(1))
        .and_then(|b| b.checked_add(params.alpha));
    if row1 != Some(top) {
        return false;
    }
    if inv.h <= 1 {
        return params.beta == 0;
    }
    match inv.common_n_h_dprime().map(|nh| checked_pow(nh, params.l - 1)) {
        Some(Ok(bottom)) => params.alpha.checked_sub(params.beta) == Some(bottom),
        _ => false,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EulerRow {
    pub class_representative: usize,
    pub class_size: usize,
    pub chi1: i64,
    pub chi2: i64,
    /// `χ₁(g)^l`
    pub lhs: i128,
    /// `α·χ₁(g) + β·χ₁(g)·χ₂(g)`
    pub rhs: i128,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct EulerReport {
    pub l: u32,
    pub rows: Vec<EulerRow>,
}

impl EulerReport {
    pub fn all_hold(&self) -> bool {
        self.rows.iter().all(|r| r.holds)
    }
}

/// Per-class table of `χ₁^l = α·χ₁ + β·χ₁·χ₂`, the vanishing of the `p^{−s}`
/// coefficient of `D_l / (L(χ₁)^α · L(χ₁⊗χ₂)^β)` at primes whose Frobenius
/// lies in that class.
pub fn euler_identity_table(
    chi1: &ClassFunction,
    chi2: &ClassFunction,
    params: &MomentParameters,
) -> Result<EulerReport, CharError> {
    let product = chi1.product(chi2)?;
    let alpha = i128::try_from(params.alpha).map_err(|_| CharError::Overflow)?;
    let beta = i128::try_from(params.beta).map_err(|_| CharError::Overflow)?;
    let mut rows = Vec::with_capacity(chi1.classes().len());
    for (i, class) in chi1.classes().classes().iter().enumerate() {
        let a = chi1.class_values()[i] as i128;
        let ab = product.class_values()[i] as i128;
        let lhs = a.checked_pow(params.l).ok_or(CharError::Overflow)?;
        let rhs = alpha
            .checked_mul(a)
            .zip(beta.checked_mul(ab))
            .and_then(|(x, y)| x.checked_add(y))
            .ok_or(CharError::Overflow)?;
        rows.push(EulerRow {
            class_representative: class.representative,
            class_size: class.size(),
            chi1: chi1.class_values()[i],
            chi2: chi2.class_values()[i],
            lhs,
            rhs,
            holds: lhs == rhs,
        });
    }
    Ok(EulerReport { l: params.l, rows })
}

/// Like [`euler_identity_table`] but fails on the first class where the
/// identity is violated.
pub fn verify_first_order_euler(
    chi1: &ClassFunction,
    chi2: &ClassFunction,
    params: &MomentParameters,
) -> Result<EulerReport, CharError> {
    let report = euler_identity_table(chi1, chi2, params)?;
    if let Some(row) = report.rows.iter().find(|r| !r.holds) {
        return Err(CharError::EulerIdentity {
            class_representative: row.class_representative,
            lhs: row.lhs,
            rhs: row.rhs,
        });
    }
    Ok(report)
}
