//! Classical and d-majorization of real vectors.
//!
//! `x ≺_d y` means `x = Ay` for a column-stochastic `A` with `Ad = d`.

mod check;
mod transfer;
mod types;
mod witness;

pub use check::{
    classical_majorization_check, d_majorization_check, BindingInequality, Criterion, DMajCheck,
};
pub use transfer::{collapse_matrix, t_transform_chain, transfer_matrix, TTransform};
pub use types::{StochasticMatrix, WeightVector};
pub use witness::d_stochastic_witness;
