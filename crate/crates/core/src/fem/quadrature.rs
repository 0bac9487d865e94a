use crate::scalar::Real;

/// Two-node linear element on the reference interval `[-1, 1]` with a
/// 2-point Gauss rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementQuadrature<T> {
    pub points: [T; 2],
    pub weights: [T; 2],
    /// `shape[q] = [N1, N2]` at point `q`.
    pub shape: [[T; 2]; 2],
    /// Reference derivatives `[dN1/dξ, dN2/dξ]` (constant over the element).
    pub dshape_ref: [T; 2],
}

impl<T: Real> ElementQuadrature<T> {
    pub fn gauss2() -> Self {
        let g = T::one() / T::lit(3.0).sqrt();
        let points = [-g, g];
        let half = T::lit(0.5);
        let shape = points.map(|xi| [half * (T::one() - xi), half * (T::one() + xi)]);
        Self {
            points,
            weights: [T::one(), T::one()],
            shape,
            dshape_ref: [-half, half],
        }
    }

    /// Length of the reference element.
    pub fn reference_length(&self) -> T {
        T::lit(2.0)
    }
}

impl<T: Real> Default for ElementQuadrature<T> {
    fn default() -> Self {
        Self::gauss2()
    }
}
