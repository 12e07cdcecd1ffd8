//! Characters `χ₁` (permutation character on `G/G′`) and `χ₂`, the
//! assumptions on the semidirect structure, the moment parameters `α(l)`,
//! `β(l)`, the first-order Euler-factor identity, and the exponent `δ`.
//!
//! Everything here is exact integer or rational arithmetic.

mod chi;
mod class_function;
mod delta;
mod moments;

pub use chi::{chi1_formula, chi1_permutation, chi2};
pub use class_function::{inner_product, ClassFunction};
pub use delta::{
    compute_delta, format_ratio, parse_ratio, DeltaMode, DeltaReport, Rational, SubconvexityConfig,
};
pub use moments::{
    assumption_iii_holds, check_assumptions, euler_identity_table, satisfies_linear_system,
    solve_alpha_beta, verify_first_order_euler, AssumptionIWitness, AssumptionReport, EulerReport,
    EulerRow, MomentParameters,
};

use crate::group::GroupError;

#[derive(Debug, thiserror::Error)]
pub enum CharError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("N′ does not satisfy the normality conditions (N′ ⊴ N and φ_H(N′) ⊆ N′)")]
    NormalityFails,
    #[error("class functions belong to different groups")]
    MismatchedGroups,
    #[error("function is not constant on the conjugacy class of element {element}")]
    NotClassFunction { element: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("assumption (I) fails: the fixed subgroups N″_h differ in size")]
    AssumptionI,
    #[error("assumption (III) fails for l = {l}: n″^(l−1) − n″_h^(l−1) ≡ {remainder} (mod {modulus})")]
    AssumptionIII { l: u32, remainder: u128, modulus: u128 },
    #[error("moment exponent l must be positive, got {0}")]
    InvalidExponent(u32),
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("Euler identity fails on the class of {class_representative}: {lhs} ≠ {rhs}")]
    EulerIdentity { class_representative: usize, lhs: i128, rhs: i128 },
    #[error("invalid subconvexity exponent: {0}")]
    InvalidTheta(String),
}

#[cfg(test)]
mod tests;
