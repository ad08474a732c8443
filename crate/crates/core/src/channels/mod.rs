//! Linear maps `C^{n×n} → C^{k×k}`: Choi and Kraus forms, positivity
//! structure and distance to the identity channel.

mod choi;
mod distance;
mod kraus;
mod positivity;

pub use choi::{apply_choi, choi_from_map, dual_map, ChoiMatrix, CpDiagnostics, TpDiagnostics};
pub use distance::{distance_to_identity, DistanceEstimate, SearchBudget};
pub use kraus::{kraus_from_choi, kraus_kernel_intersection, KrausSet};
pub use positivity::{
    block_form_decomposition, kernel_of, sp_density_sequence, strict_positivity_check,
    universal_kernel, BlockFormReport, SpCheck, SpVerdict, UniversalKernel,
};
