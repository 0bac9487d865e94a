use crate::fem::quadrature::ElementQuadrature;
use crate::fem::system::LinearSystem;
use crate::mesh::Mesh1D;
use crate::scalar::Real;

/// A quadrature point of one element, with helpers that interpolate nodal
/// data linearly to it.
#[derive(Debug, Clone, Copy)]
pub struct QuadPoint<'a, T> {
    pub element: usize,
    pub x: T,
    /// `[N1, N2]` at the point.
    pub shape: [T; 2],
    /// Physical derivatives `[dN1/dx, dN2/dx]`.
    pub dshape: [T; 2],
    /// Quadrature weight times the element Jacobian.
    pub jxw: T,
    mesh: &'a Mesh1D<T>,
}

impl<T: Real> QuadPoint<'_, T> {
    /// Linear interpolant of a nodal field.
    #[inline]
    pub fn interp(&self, nodal: &[T]) -> T {
        let e = self.element;
        self.shape[0] * nodal[e] + self.shape[1] * nodal[e + 1]
    }

    /// Element-constant gradient of a nodal field.
    #[inline]
    pub fn grad(&self, nodal: &[T]) -> T {
        let e = self.element;
        self.dshape[0] * nodal[e] + self.dshape[1] * nodal[e + 1]
    }

    /// Interpolated cross-section area.
    #[inline]
    pub fn area(&self) -> T {
        self.interp(&self.mesh.area)
    }

    /// Interpolated convective surface per unit length.
    #[inline]
    pub fn surface(&self) -> T {
        self.interp(&self.mesh.surf_per_len)
    }
}

/// Integrand coefficients of a weak form with linear elements.
///
/// Each method returns the scalar multiplying the corresponding operator
/// at a quadrature point; area factors are the kernel's responsibility.
pub trait ElementKernel<T: Real> {
    /// Coefficient of `BᵀB`.
    fn stiffness(&self, _qp: &QuadPoint<'_, T>) -> T {
        T::zero()
    }
    /// Coefficient of `NᵀN`.
    fn mass(&self, _qp: &QuadPoint<'_, T>) -> T {
        T::zero()
    }
    /// Right-hand side coefficient of `N`.
    fn load(&self, _qp: &QuadPoint<'_, T>) -> T {
        T::zero()
    }
    /// Right-hand side coefficient of `B`.
    fn load_gradient(&self, _qp: &QuadPoint<'_, T>) -> T {
        T::zero()
    }
}

impl<T: Real, K: ElementKernel<T> + ?Sized> ElementKernel<T> for &K {
    fn stiffness(&self, qp: &QuadPoint<'_, T>) -> T {
        (**self).stiffness(qp)
    }
    fn mass(&self, qp: &QuadPoint<'_, T>) -> T {
        (**self).mass(qp)
    }
    fn load(&self, qp: &QuadPoint<'_, T>) -> T {
        (**self).load(qp)
    }
    fn load_gradient(&self, qp: &QuadPoint<'_, T>) -> T {
        (**self).load_gradient(qp)
    }
}

/// Sum of two kernels.
#[derive(Debug, Clone, Copy)]
pub struct SumKernel<A, B>(pub A, pub B);

impl<T: Real, A: ElementKernel<T>, B: ElementKernel<T>> ElementKernel<T> for SumKernel<A, B> {
    fn stiffness(&self, qp: &QuadPoint<'_, T>) -> T {
        self.0.stiffness(qp) + self.1.stiffness(qp)
    }
    fn mass(&self, qp: &QuadPoint<'_, T>) -> T {
        self.0.mass(qp) + self.1.mass(qp)
    }
    fn load(&self, qp: &QuadPoint<'_, T>) -> T {
        self.0.load(qp) + self.1.load(qp)
    }
    fn load_gradient(&self, qp: &QuadPoint<'_, T>) -> T {
        self.0.load_gradient(qp) + self.1.load_gradient(qp)
    }
}

/// Integrand evaluated at a quadrature point.
pub type PointFn<'f, T> = Box<dyn Fn(&QuadPoint<'_, T>) -> T + 'f>;

/// Kernel built from closures; unset terms are zero.
pub struct FnKernel<'f, T> {
    pub stiffness: Option<PointFn<'f, T>>,
    pub mass: Option<PointFn<'f, T>>,
    pub load: Option<PointFn<'f, T>>,
    pub load_gradient: Option<PointFn<'f, T>>,
}

impl<T> Default for FnKernel<'_, T> {
    fn default() -> Self {
        Self {
            stiffness: None,
            mass: None,
            load: None,
            load_gradient: None,
        }
    }
}

impl<T: Real> ElementKernel<T> for FnKernel<'_, T> {
    fn stiffness(&self, qp: &QuadPoint<'_, T>) -> T {
        self.stiffness.as_ref().map_or(T::zero(), |f| f(qp))
    }
    fn mass(&self, qp: &QuadPoint<'_, T>) -> T {
        self.mass.as_ref().map_or(T::zero(), |f| f(qp))
    }
    fn load(&self, qp: &QuadPoint<'_, T>) -> T {
        self.load.as_ref().map_or(T::zero(), |f| f(qp))
    }
    fn load_gradient(&self, qp: &QuadPoint<'_, T>) -> T {
        self.load_gradient.as_ref().map_or(T::zero(), |f| f(qp))
    }
}

/// Calls `f` for every quadrature point of every element.
pub fn for_each_quad_point<T: Real>(mesh: &Mesh1D<T>, mut f: impl FnMut(&QuadPoint<'_, T>)) {
    let quad = ElementQuadrature::<T>::gauss2();
    let half = T::lit(0.5);
    for e in 0..mesh.n_elements() {
        let h = mesh.element_len(e);
        let jac = half * h;
        let dshape = [quad.dshape_ref[0] / jac, quad.dshape_ref[1] / jac];
        for q in 0..quad.points.len() {
            let shape = quad.shape[q];
            let qp = QuadPoint {
                element: e,
                x: shape[0] * mesh.node_x[e] + shape[1] * mesh.node_x[e + 1],
                shape,
                dshape,
                jxw: quad.weights[q] * jac,
                mesh,
            };
            f(&qp);
        }
    }
}

/// Assembles the global tridiagonal operator and right-hand side.
pub fn assemble<T: Real, K: ElementKernel<T> + ?Sized>(
    mesh: &Mesh1D<T>,
    kernel: &K,
) -> LinearSystem<T> {
    let mut sys = LinearSystem::zeros(mesh.n_nodes());
    for_each_quad_point(mesh, |qp| {
        let e = qp.element;
        let k = kernel.stiffness(qp) * qp.jxw;
        let m = kernel.mass(qp) * qp.jxw;
        let s = kernel.load(qp) * qp.jxw;
        let g = kernel.load_gradient(qp) * qp.jxw;
        let (n, b) = (qp.shape, qp.dshape);

        let entry = |a: usize, c: usize| k * b[a] * b[c] + m * n[a] * n[c];
        sys.diag[e] += entry(0, 0);
        sys.diag[e + 1] += entry(1, 1);
        sys.upper[e] += entry(0, 1);
        sys.lower[e + 1] += entry(1, 0);
        sys.rhs[e] += s * n[0] + g * b[0];
        sys.rhs[e + 1] += s * n[1] + g * b[1];
    });
    sys
}

/// Integrates `f` over the mesh.
pub fn integrate<T: Real>(mesh: &Mesh1D<T>, f: impl Fn(&QuadPoint<'_, T>) -> T) -> T {
    let mut total = T::zero();
    for_each_quad_point(mesh, |qp| total += f(qp) * qp.jxw);
    total
}

/// Per-element integral of `f`.
pub fn integrate_elements<T: Real>(mesh: &Mesh1D<T>, f: impl Fn(&QuadPoint<'_, T>) -> T) -> Vec<T> {
    let mut out = vec![T::zero(); mesh.n_elements()];
    for_each_quad_point(mesh, |qp| out[qp.element] += f(qp) * qp.jxw);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    struct ConstBar(f64);
    impl ElementKernel<f64> for ConstBar {
        fn stiffness(&self, qp: &QuadPoint<'_, f64>) -> f64 {
            self.0 * qp.area()
        }
    }

    struct Mass;
    impl ElementKernel<f64> for Mass {
        fn mass(&self, qp: &QuadPoint<'_, f64>) -> f64 {
            qp.area()
        }
    }

    #[test]
    fn stiffness_stencil() {
        let mesh = Mesh1D::uniform(4.0, 4, 2.0).unwrap();
        let sys = assemble(&mesh, &ConstBar(3.0));
        let ca_h = 3.0 * 2.0 / 1.0;
        assert_relative_eq!(sys.diag[0], ca_h, max_relative = 1e-14);
        assert_relative_eq!(sys.diag[2], 2.0 * ca_h, max_relative = 1e-14);
        assert_relative_eq!(sys.upper[1], -ca_h, max_relative = 1e-14);
        assert_relative_eq!(sys.lower[2], -ca_h, max_relative = 1e-14);
        assert!(sys.rhs.iter().all(|&r| r == 0.0));
    }

    #[test]
    fn mass_row_sums() {
        let mesh = Mesh1D::uniform(5.0, 10, 3.0).unwrap();
        let sys = assemble(&mesh, &Mass);
        let rows = sys.row_sums();
        let h = 0.5;
        for &r in &rows[1..10] {
            assert_relative_eq!(r, 3.0 * h, max_relative = 1e-14);
        }
        assert_relative_eq!(rows[0], 3.0 * h / 2.0, max_relative = 1e-14);
        // consistent mass entries: A h/3 on the element diagonal, A h/6 off it
        assert_relative_eq!(sys.upper[3], 3.0 * h / 6.0, max_relative = 1e-14);
    }

    #[test]
    fn zero_kernel_gives_zero_system() {
        let mesh = Mesh1D::build(10.0, 5, 1.0, 1.0).unwrap();
        let sys = assemble(&mesh, &FnKernel::default());
        assert_eq!(sys, LinearSystem::zeros(6));
    }

    #[test]
    fn patch_test_reproduces_linear_solution() {
        let mesh = Mesh1D::uniform(7.0, 13, 0.3).unwrap();
        let mut sys = assemble(&mesh, &ConstBar(11.0));
        sys.apply_dirichlet(0, -1.0).unwrap();
        sys.apply_dirichlet(13, 2.5).unwrap();
        let u = sys.solve().unwrap();
        for (x, v) in mesh.node_x.iter().zip(&u) {
            let exact = -1.0 + 3.5 * x / 7.0;
            assert!((v - exact).abs() < 1e-13);
        }
    }

    #[test]
    fn linearity_in_kernel() {
        let mesh = Mesh1D::<f64>::build(20.0, 8, 1.0, 2.0).unwrap();
        let phi: Vec<f64> = mesh.node_x.iter().map(|x| (x / 20.0).powi(2)).collect();
        let k1 = FnKernel {
            stiffness: Some(Box::new(|qp: &QuadPoint<'_, f64>| qp.area() * (1.0 - qp.interp(&phi)).powi(2))),
            load: Some(Box::new(|qp: &QuadPoint<'_, f64>| qp.x)),
            ..Default::default()
        };
        let k2 = FnKernel {
            mass: Some(Box::new(|qp: &QuadPoint<'_, f64>| qp.surface())),
            load_gradient: Some(Box::new(|qp: &QuadPoint<'_, f64>| qp.grad(&phi).powi(2))),
            ..Default::default()
        };
        let separate = assemble(&mesh, &k1) + assemble(&mesh, &k2);
        let combined = assemble(&mesh, &SumKernel(&k1, &k2));
        for (a, b) in [
            (&separate.diag, &combined.diag),
            (&separate.lower, &combined.lower),
            (&separate.upper, &combined.upper),
            (&separate.rhs, &combined.rhs),
        ] {
            for (x, y) in a.iter().zip(b.iter()) {
                assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0));
            }
        }
    }

    #[test]
    fn cubic_integrands_exact_per_element() {
        let mesh = Mesh1D::<f64>::uniform(3.0, 3, 1.0).unwrap();
        for k in 0..=3 {
            let got = integrate(&mesh, |qp| qp.x.powi(k));
            let exact = 3f64.powi(k + 1) / (k + 1) as f64;
            assert_relative_eq!(got, exact, max_relative = 1e-14);
        }
    }
}
