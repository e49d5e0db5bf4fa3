//! Robinson and Toeplitz structure, spectral seriation, and a closed-form
//! solver for the quadratic assignment problem on Robinsonian instances with
//! Toeplitz structure, backed by an exhaustive oracle.
//!
//! Indices and permutations are zero-based in the API and one-based in every
//! textual form (`Display`, the CLI, JSON).

pub mod cli;
pub mod error;
pub mod fixtures;
pub mod matrix;
pub mod permutation;
pub mod qap;
pub mod seriation;
pub mod structure;

pub use error::{Error, Result, Side};
pub use matrix::{inner_product, SymMatrix};
pub use permutation::{apply_permutation, compose, invert, Permutation};
pub use qap::{
    brute_force, build_distance, counterexample_instance, qap_value, solve_robinsonian,
    spectral_heuristic_2sum, verify_theorem1, DistanceKind, Method, QapInstance, QapSolution,
};
pub use seriation::{fiedler, laplacian, seriate, SeriationResult};
