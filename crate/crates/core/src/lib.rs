//! Exact facet enumeration for convex hulls of finite matrix groups.

pub mod cli;
pub mod group;
pub mod linalg;
pub mod polytope;
pub mod scalar;
pub mod store;
