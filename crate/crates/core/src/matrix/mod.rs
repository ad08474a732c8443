//! D-majorization of hermitian matrices: `A ≺_D B` iff some channel `T` with
//! `T(D) = D` maps `B` to `A`.

mod construct;
mod curve;
mod feasibility;
mod instance;
mod iteration;
mod qubit;

pub use construct::{
    construct_channel_pair, lift_diagonal_channel, minmax_elements, pure_state_majorization,
    ChannelConstruction, MinMaxElements, PureStateReport,
};
pub use curve::{
    matrix_convex_necessary_check, trace_norm_curve_check, ConvexCheck, ConvexFunction,
    CurveCheckReport, CurveSample, SampleSource, DEFAULT_GRID_POINTS,
};
pub use feasibility::d_maj_feasibility;
pub use instance::DMajInstance;
pub use iteration::{iterate_majorization, iteration_factors, IterationFactors, IterationReport, IterationStep};
pub use qubit::{qubit_check, QubitCheckReport};
