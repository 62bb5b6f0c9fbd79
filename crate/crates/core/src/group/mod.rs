//! Finite matrix groups, permutation groups and the symmetry action of conv(G).

mod action;
mod chain;
mod coxeter;
mod matgroup;
mod perm;
mod permgroup;

pub use action::{action_generators, build_symmetry_action, symmetry_order, ActionGenerators, SymmetryOptions};
pub use chain::{Level, StabChain};
pub use coxeter::{coxeter_group, coxeter_group_capped, reflection, AnyMatGroup, CoxeterName};
pub use matgroup::{MatGroup, DEFAULT_ELEMENT_CAP};
pub use perm::{NotAPermutation, Perm};
pub use permgroup::{group_order, PermGroup, SetStabilizer};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("generators must be {dim}x{dim} matrices")]
    Shape { dim: usize },
    #[error("a generator is singular")]
    Singular,
    #[error("group closure exceeded {0} elements")]
    CapExceeded(usize),
    #[error("unknown group name `{0}`")]
    UnknownGroup(String),
    #[error("unsupported group parameter `{0}`")]
    UnsupportedParameter(String),
    #[error("the group is not closed under transposition")]
    TransposeNotClosed,
    #[error("a generator does not map the group to itself")]
    NotClosed,
}
