//! Strict positivity of linear maps on matrix algebras and D-majorization of
//! vectors and hermitian matrices.
//!
//! Maps are carried as [`ChoiMatrix`] values. Kraus operators follow the
//! convention `T(A) = Σ Kᵢ* A Kᵢ` (see [`KrausSet`]).
//!
//! Every tolerance argument is relative: comparisons are made against
//! `tol · max(1, ‖M‖)` for the matrix `M` under test. [`DEFAULT_TOL`] is used
//! where no tolerance is given.

pub mod catalog;
pub mod channels;
pub mod error;
pub mod feasibility;
pub mod linalg;
pub mod matrix;
pub mod random;
pub mod vector;

pub const DEFAULT_TOL: f64 = 1e-9;

pub use channels::{
    apply_choi, block_form_decomposition, choi_from_map, distance_to_identity, dual_map,
    kraus_from_choi, kraus_kernel_intersection, sp_density_sequence, strict_positivity_check,
    universal_kernel, BlockFormReport, ChoiMatrix, DistanceEstimate, KrausSet, SearchBudget,
    SpVerdict,
};
pub use error::{Error, Result};
pub use feasibility::{FeasibilityReport, SolverParams, Verdict};
pub use linalg::{
    hermitian_eig, psd_check, psd_project, sqrt_psd, trace_norm, ComplexMatrix, Definiteness,
    HermitianEig, PsdCheck, Subspace,
};
pub use matrix::{
    construct_channel_pair, d_maj_feasibility, iterate_majorization, lift_diagonal_channel,
    matrix_convex_necessary_check, minmax_elements, pure_state_majorization, qubit_check,
    trace_norm_curve_check, DMajInstance, QubitCheckReport,
};
pub use vector::{
    classical_majorization_check, collapse_matrix, d_majorization_check, d_stochastic_witness,
    transfer_matrix, StochasticMatrix, WeightVector,
};
