//! Numerical tools for sets with positive reach: subspace geometry, tangent
//! cones of sampled sets, reach estimators, constructive fixtures, product
//! integration of matrix-valued interval functions and Whitney-type checks.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cloud;
pub mod cone;
pub mod error;
pub mod generators;
pub mod halton;
pub mod io;
pub mod linalg;
pub mod lipschitz;
pub mod prodint;
pub mod reach;
pub mod simplex;
pub mod tangent;
pub mod whitney;

pub use cloud::{median_spacing, neighbors, PointCloud, StratumLabel};
pub use cone::{cone_dimension, cone_distance, contains_line, ConvexCone};
pub use error::{Error, Result};
pub use linalg::{
    gap_distance, gj_norm, norm_equivalence_constant, numerical_rank, operator_norm, orthonormalize, principal_subspace, Matrix,
    Point, Subspace,
};
pub use lipschitz::{empirical_lipschitz, paper_constant, EmpiricalLipschitz, LipschitzReport, PaperConstant};
pub use prodint::{
    alpha_eval, build_alpha_from_leaves, domination_bound, product_integral_atomic, product_integral_partition, Atom,
    AtomicIntervalFunction, LeafPlanes,
};
pub use reach::{
    angle_bound_check, d_of_pair, federer_reach, federer_reach_with_cones, midpoint_reach, midpoint_reach_eps,
    projection_uniqueness_reach, ProjectionParams, ReachEstimate, ReachMethod,
};
pub use simplex::{fullness, related, simplex_volume, Relatedness, Simplex};
pub use tangent::{estimate_all, estimate_at, estimate_tangent, estimate_tangent_cone, leaves, psi_k, stratify, Leaf, TangentParams};
pub use whitney::{tdmnapl_data, whitney_check, WhitneyData, WhitneyResult};
