//! Exact coverability for vector addition systems and affine nets over `N^d`.
//!
//! The crate implements the backward coverability algorithm in its classical
//! (ascending filters) and dual (descending downward-closed sets) views, on
//! top of an exact algebra of order ideals. Runs are recorded as chains and
//! can be checked against structural monitors: control of the norms, omega-
//! and strong monotonicity of proper ideals, thinness of ideals and near
//! thinness of filter bases, and length bounds from the associated bound
//! tables. Independent oracles (Karp-Miller trees, bounded forward search)
//! cross-validate verdicts on small instances.

pub mod bounds;
pub mod cli;
pub mod engine;
pub mod ideal;
pub mod models;
pub mod oracle;
