//! Fixed benchmark inputs shared by the criterion benches.

use dmaj_core::catalog;
use dmaj_core::random::{random_hermitian, seeded_rng};
use dmaj_core::{ComplexMatrix, DMajInstance};

/// Seeded random hermitian matrix of size `n`.
pub fn hermitian_input(n: usize) -> ComplexMatrix {
    random_hermitian(n, &mut seeded_rng(n as u64))
}

/// The qutrit instance whose trace-norm curves agree but which is infeasible.
pub fn heinosaari_instance() -> DMajInstance {
    let (a, b, d) = catalog::heinosaari_triple();
    DMajInstance::with_reference(a, b, &d, dmaj_core::DEFAULT_TOL).expect("positive definite D")
}
