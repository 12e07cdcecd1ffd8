//! Finite groups with explicit multiplication tables, semidirect products
//! `N ⋊_φ H`, subgroups and quotients, conjugacy classes and coset actions.

mod classes;
mod finite;
mod presets;
mod semidirect;

pub use classes::{conjugacy_classes, ClassStructure, ConjugacyClass};
pub use finite::{
    group_from_permutations, CosetDecomposition, FiniteGroup, SubgroupData, EXHAUSTIVE_CHECK_ORDER,
    MAX_ORDER,
};
pub use presets::{preset, NPrimeChoice, Preset, PresetName};
pub use semidirect::{Action, CosetAction, GroupInvariants, Quotient, SemidirectPresentation};

#[derive(Debug, thiserror::Error)]
pub enum GroupError {
    #[error("group must have at least one element")]
    Empty,
    #[error("group order {order} exceeds the supported bound {max}")]
    OrderTooLarge { order: usize, max: usize },
    #[error("malformed multiplication table: {0}")]
    MalformedTable(String),
    #[error("table has no two-sided identity")]
    NoIdentity,
    #[error("element {0} has no two-sided inverse")]
    NoInverse(usize),
    #[error("multiplication is not associative on ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("subgroup is not stable under the action of H")]
    NotStable,
    #[error("fixed subgroup requested for the identity of H")]
    IdentityComplement,
    #[error("unknown group preset `{0}`")]
    UnknownPreset(String),
    #[error("unknown N′ choice `{label}` (available: {available:?})")]
    UnknownNPrime { label: String, available: Vec<String> },
}
