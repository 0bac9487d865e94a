//! Uniform 1-D mesh carrying the cross-section precursor profile.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Nodal description of the conductor span.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mesh1D<T> {
    /// Span length (m).
    pub length: T,
    /// Node coordinates (m), `n_elements + 1` entries.
    pub node_x: Vec<T>,
    /// Cross-section area per node (m²).
    pub area: Vec<T>,
    /// Convective surface per unit length per node (m²/m).
    pub surf_per_len: Vec<T>,
}

impl<T: Real> Mesh1D<T> {
    /// Builds the reference mesh with a Gaussian area reduction centred at `L/2`:
    ///
    /// `A(x) = A0 (1 - exp(-(x - L/2)² / (2 Aσ²)) / (Aσ √(2π)))`
    ///
    /// An infinite `a_sigma` yields a uniform conductor.
    pub fn build(length: T, n_elements: usize, area0: T, a_sigma: T) -> Result<Self> {
        if n_elements < 2 {
            return Err(Error::InvalidMesh(format!(
                "need at least 2 elements, got {n_elements}"
            )));
        }
        if !(length > T::zero()) || !length.is_finite() {
            return Err(Error::InvalidMesh(format!(
                "length must be positive and finite, got {length}"
            )));
        }
        if !(area0 > T::zero()) {
            return Err(Error::InvalidMesh(format!(
                "undamaged area must be positive, got {area0}"
            )));
        }
        if !(a_sigma > T::zero()) {
            return Err(Error::NonPositiveArea {
                a_sigma: a_sigma.to_f64_lossy(),
                node: n_elements / 2,
                x: (length / T::lit(2.0)).to_f64_lossy(),
            });
        }

        let node_x = uniform_nodes(length, n_elements);
        let half = length / T::lit(2.0);
        let two = T::lit(2.0);
        let amplitude = T::one() / (a_sigma * (two * T::PI()).sqrt());

        let mut area = Vec::with_capacity(node_x.len());
        for (i, &x) in node_x.iter().enumerate() {
            let a = if a_sigma.is_infinite() {
                area0
            } else {
                let dx = x - half;
                let gauss = (-(dx * dx) / (two * a_sigma * a_sigma)).exp();
                area0 * (T::one() - amplitude * gauss)
            };
            if !(a > T::zero()) {
                return Err(Error::NonPositiveArea {
                    a_sigma: a_sigma.to_f64_lossy(),
                    node: i,
                    x: x.to_f64_lossy(),
                });
            }
            area.push(a);
        }
        let surf_per_len = area.iter().map(|&a| perimeter_of_area(a)).collect();

        Ok(Self {
            length,
            node_x,
            area,
            surf_per_len,
        })
    }

    /// Mesh with a constant cross-section.
    pub fn uniform(length: T, n_elements: usize, area: T) -> Result<Self> {
        Self::build(length, n_elements, area, T::infinity())
    }

    pub fn n_nodes(&self) -> usize {
        self.node_x.len()
    }

    pub fn n_elements(&self) -> usize {
        self.node_x.len() - 1
    }

    /// Length of element `e`.
    #[inline]
    pub fn element_len(&self, e: usize) -> T {
        self.node_x[e + 1] - self.node_x[e]
    }

    /// Index of the node nearest to the span midpoint.
    pub fn mid_node(&self) -> usize {
        self.n_elements() / 2
    }

    /// Replaces the area profile; the convective surface follows from the
    /// circular cross-section assumption.
    pub fn with_area(mut self, area: Vec<T>) -> Result<Self> {
        if area.len() != self.n_nodes() {
            return Err(Error::DimensionMismatch {
                expected: self.n_nodes(),
                got: area.len(),
            });
        }
        if let Some(i) = area.iter().position(|&a| !(a > T::zero())) {
            return Err(Error::InvalidMesh(format!("area at node {i} is not positive")));
        }
        self.surf_per_len = area.iter().map(|&a| perimeter_of_area(a)).collect();
        self.area = area;
        Ok(self)
    }

    pub(crate) fn check_nodal(&self, v: &[T]) -> Result<()> {
        if v.len() != self.n_nodes() {
            return Err(Error::DimensionMismatch {
                expected: self.n_nodes(),
                got: v.len(),
            });
        }
        Ok(())
    }
}

fn uniform_nodes<T: Real>(length: T, n_elements: usize) -> Vec<T> {
    let n = T::from_count(n_elements);
    let mut x: Vec<T> = (0..=n_elements)
        .map(|i| length * T::from_count(i) / n)
        .collect();
    x[n_elements] = length;
    x
}

/// Diameter of a circular cross-section with area `a`.
#[inline]
pub fn diameter_of_area<T: Real>(a: T) -> T {
    (T::lit(4.0) * a / T::PI()).sqrt()
}

/// Area of a circular cross-section with diameter `d`.
#[inline]
pub fn area_of_diameter<T: Real>(d: T) -> T {
    T::PI() * d * d / T::lit(4.0)
}

/// Lateral surface per unit length, `π d(A)`.
#[inline]
pub fn perimeter_of_area<T: Real>(a: T) -> T {
    T::PI() * diameter_of_area(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn reference_center_area() {
        let a0 = PI * 0.04 * 0.04 / 4.0;
        let mesh = Mesh1D::build(200.0, 1000, a0, 2.5).unwrap();
        let mid = mesh.mid_node();
        assert_eq!(mesh.node_x[mid], 100.0);
        // 1/(2.5 sqrt(2 pi)) evaluated independently
        let factor = 1.0 - 1.0 / (2.5 * (2.0 * PI).sqrt());
        assert_relative_eq!(mesh.area[mid], a0 * factor, max_relative = 1e-14);
        assert_relative_eq!(factor, 1.0 - 0.15958, epsilon = 1e-5);
    }

    #[test]
    fn infinite_spread_is_uniform() {
        let mesh = Mesh1D::build(10.0, 4, 2.0, f64::INFINITY).unwrap();
        assert!(mesh.area.iter().all(|&a| a == 2.0));
        let huge = Mesh1D::<f64>::build(10.0, 4, 2.0, 1e12).unwrap();
        assert!(huge.area.iter().all(|&a| (a - 2.0).abs() < 1e-11));
    }

    #[test]
    fn gaussian_tail_recovers_undamaged_area() {
        let mesh = Mesh1D::<f64>::build(200.0, 100, 1.0, 2.5).unwrap();
        assert!((mesh.area[0] - 1.0).abs() <= 1e-12);
        assert!((mesh.area[100] - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn spread_below_positivity_bound_rejected() {
        match Mesh1D::build(200.0, 100, 1.0, 0.3) {
            Err(Error::NonPositiveArea { a_sigma, node, .. }) => {
                assert_eq!(a_sigma, 0.3);
                assert_eq!(node, 50);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(Mesh1D::build(200.0, 1, 1.0, 2.5).is_err());
    }

    #[test]
    fn node_layout_and_surface() {
        let mesh = Mesh1D::build(3.0, 3, PI / 4.0, f64::INFINITY).unwrap();
        assert_eq!(mesh.node_x, vec![0.0, 1.0, 2.0, 3.0]);
        // d = 1 for area pi/4
        for &s in &mesh.surf_per_len {
            assert_relative_eq!(s, PI, max_relative = 1e-15);
        }
        assert!(mesh.node_x.windows(2).all(|w| w[1] > w[0]));
    }
}
