//! Linear finite elements on a 1-D mesh: quadrature, assembly, boundary
//! conditions and the tridiagonal solve.

mod assembly;
mod quadrature;
mod system;

pub use assembly::{
    assemble, for_each_quad_point, integrate, integrate_elements, ElementKernel, FnKernel,
    QuadPoint, SumKernel,
};
pub use quadrature::ElementQuadrature;
pub use system::{solve_tridiagonal, LinearSystem};

use crate::mesh::Mesh1D;
use crate::scalar::Real;

/// Nodal gradient: mean of the adjacent element gradients, one-sided at the
/// boundary nodes.
pub fn nodal_gradient<T: Real>(mesh: &Mesh1D<T>, field: &[T]) -> Vec<T> {
    let ne = mesh.n_elements();
    let elem: Vec<T> = (0..ne)
        .map(|e| (field[e + 1] - field[e]) / mesh.element_len(e))
        .collect();
    let half = T::lit(0.5);
    (0..=ne)
        .map(|i| match i {
            0 => elem[0],
            i if i == ne => elem[ne - 1],
            i => half * (elem[i - 1] + elem[i]),
        })
        .collect()
}
