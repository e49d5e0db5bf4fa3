//! Structural predicates, exact decompositions and instance generators.

pub mod decompose;
pub mod generate;
pub mod predicates;

pub use decompose::{
    build_b_delta, cut_matrix, decompose_cuts, decompose_toeplitz, BDeltaCombination, CutWeights,
};
pub use generate::{
    gen_cut_combination, gen_robinson_similarity, gen_robinson_similarity_general,
    gen_toeplitz_dissimilarity, gen_toeplitz_profile, instance_rng,
};
pub use predicates::*;
