//! Exact critical groups of graphs.
//!
//! The critical (sandpile) group of a graph is the torsion part of the
//! cokernel of its Laplacian; this crate computes it through an exact Smith
//! normal form over arbitrary-precision integers. For the Kneser graph
//! `KG(n, 2)` it also provides the closed forms for the group order, the
//! per-prime elementary divisors and the invariant factors, so the two routes
//! can be checked against each other.
//!
//! ```
//! use kneser_sandpile::{critical_group, kneser_graph, laplacian_matrix, predicted_critical_group};
//!
//! let petersen = kneser_graph(5, 2).unwrap();
//! let group = critical_group(&laplacian_matrix(&petersen));
//! assert_eq!(group.invariant_factors, predicted_critical_group(5).unwrap().normalized());
//! ```

pub mod arith;
pub mod critical;
pub mod error;
pub mod formulas;
pub mod graph;
pub mod matrix;
pub mod mtx;
pub mod residue;
pub mod smith;

pub use arith::{is_prime, prime_divisors};
pub use critical::{
    critical_group, invariant_factors_from_profiles, mbar_filtration, p_elementary_divisors,
    spanning_tree_count, verify_eigenspace_bound, verify_mdim_identity, ElementaryDivisorProfile,
    MbarFiltration,
};
pub use error::{Error, Result};
pub use formulas::{
    branch_hypothesis, critical_group_order, grassmann_conclusion, predict_with_branch,
    predicted_critical_group, predicted_elementary_divisors, select_branch, spectral_data,
    trivial_profile, valuation, verify_laplacian_identity, Branch, Case, GrassmannHypothesis,
    Parity, PredictedGroup, SpectralData,
};
pub use graph::{
    adjacency_matrix, kneser_graph, laplacian_matrix, srg_parameters, verify_srg_identity, Graph,
    SrgParameters, VertexLabel,
};
pub use matrix::{determinant, BigIntMatrix};
pub use mtx::{read_matrix_market, write_matrix_market, MtxFormat};
pub use residue::kernel_dimension_mod;
pub use smith::{cokernel, smith_normal_form, AbelianGroupDecomposition, SmithDecomposition};

pub use num_bigint::BigInt;
