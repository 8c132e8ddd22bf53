//! Profinite groups given by symbolic descriptors, their finite quotients and
//! cofinal families of open normal subgroups.

pub mod descriptor;
pub mod family;
pub mod finite_group;
pub mod supernatural;
pub mod tower;

pub use descriptor::{
    closed_subgroup, index, quotient, subgroup_descriptor, ClosedSubgroupSpec, FiniteSub,
    LocalFactor, OpenNormalDescriptor, ProfiniteDescriptor, Shape,
};
pub use family::{
    check_cofinal, induced_family, ChainPattern, CofinalCertificate, CofinalFamily, Cofinality,
    PatternExponent,
};
pub use finite_group::FiniteGroupTable;
pub use supernatural::{Exponent, SupernaturalNumber};
pub use tower::{
    canonical_kernels, canonical_tower, canonical_tower_with, QuotientTower, TowerLevel,
};
