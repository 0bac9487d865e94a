//! Sampling designs: collocation tensor grids and Monte Carlo draws.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::params::RandomParam;
use super::quadrature::gauss_legendre;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Largest number of random dimensions accepted for a full tensor grid.
pub const MAX_DIMS: usize = 6;

/// A weighted set of parameter realizations.
///
/// Weights are normalized probability masses; they sum to one.
pub trait Design<T: Real>: Sync {
    fn dims(&self) -> &[RandomParam<T>];
    fn len(&self) -> usize;
    fn is_empty(&self) -> bool {
        self.len() == 0
    }
    /// Physical parameter values of realization `r`, one per dimension.
    fn point(&self, r: usize) -> Vec<T>;
    fn weight(&self, r: usize) -> T;

    /// `Σ_r w_r q_r` for `q.len() == self.len()`.
    fn integrate(&self, q: &[T]) -> T {
        q.iter()
            .enumerate()
            .fold(T::zero(), |acc, (r, &v)| acc + self.weight(r) * v)
    }
}

/// Tensor-product Gauss-Legendre grid over independent uniform inputs.
///
/// Realizations are ordered with the last dimension varying fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct CollocationGrid<T> {
    dims: Vec<RandomParam<T>>,
    n_per_dim: usize,
    /// Reference nodes on `[-1, 1]`.
    pub nodes: Vec<T>,
    /// Reference weights; they sum to 2.
    pub weights: Vec<T>,
}

impl<T: Real> CollocationGrid<T> {
    pub fn new(dims: Vec<RandomParam<T>>, n_per_dim: usize) -> Result<Self> {
        if dims.len() > MAX_DIMS {
            return Err(Error::TooManyDimensions {
                dims: dims.len(),
                max: MAX_DIMS,
            });
        }
        for d in &dims {
            d.validate()?;
        }
        let (nodes, weights) = gauss_legendre(n_per_dim)?;
        Ok(Self {
            dims,
            n_per_dim,
            nodes,
            weights,
        })
    }

    pub fn n_per_dim(&self) -> usize {
        self.n_per_dim
    }

    pub fn n_dims(&self) -> usize {
        self.dims.len()
    }

    /// Per-dimension node indices of realization `r`.
    pub fn multi_index(&self, mut r: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dims.len()];
        for slot in idx.iter_mut().rev() {
            *slot = r % self.n_per_dim;
            r /= self.n_per_dim;
        }
        idx
    }

    /// Probability mass of node `i` in one dimension: `w_i ρ J = w_i / 2`.
    pub fn node_mass(&self, i: usize) -> T {
        self.weights[i] / T::lit(2.0)
    }
}

impl<T: Real> Design<T> for CollocationGrid<T> {
    fn dims(&self) -> &[RandomParam<T>] {
        &self.dims
    }

    fn len(&self) -> usize {
        self.n_per_dim.pow(self.dims.len() as u32)
    }

    fn point(&self, r: usize) -> Vec<T> {
        self.multi_index(r)
            .into_iter()
            .zip(&self.dims)
            .map(|(i, d)| d.map(self.nodes[i]))
            .collect()
    }

    /// `Π_p w_p ρ_p J_p`; for uniform inputs `ρ J = 1/2` exactly, which is
    /// used directly so that the weights telescope to one without roundoff
    /// from narrow ranges.
    fn weight(&self, r: usize) -> T {
        self.multi_index(r)
            .into_iter()
            .map(|i| self.node_mass(i))
            .fold(T::one(), |acc, w| acc * w)
    }

    /// Contracts one dimension at a time, fastest first, so roundoff grows
    /// with `k n` instead of `n^k`.
    fn integrate(&self, q: &[T]) -> T {
        let n = self.n_per_dim;
        let mut cur = q.to_vec();
        for _ in 0..self.dims.len() {
            cur = cur
                .chunks_exact(n)
                .map(|c| {
                    c.iter()
                        .enumerate()
                        .fold(T::zero(), |acc, (i, &v)| acc + self.node_mass(i) * v)
                })
                .collect();
        }
        cur.first().copied().unwrap_or_else(T::zero)
    }
}

/// Independent uniform draws from a seeded ChaCha8 stream.
#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarlo<T> {
    dims: Vec<RandomParam<T>>,
    samples: Vec<Vec<T>>,
    seed: u64,
}

impl<T: Real> MonteCarlo<T> {
    pub fn new(dims: Vec<RandomParam<T>>, n_samples: usize, seed: u64) -> Result<Self> {
        if n_samples == 0 {
            return Err(Error::InvalidParameter("Monte Carlo needs at least one sample".into()));
        }
        for d in &dims {
            d.validate()?;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let samples = (0..n_samples)
            .map(|_| {
                dims.iter()
                    .map(|d| {
                        let (a, b) = d.bounds();
                        a + (b - a) * T::lit(rng.gen::<f64>())
                    })
                    .collect()
            })
            .collect();
        Ok(Self { dims, samples, seed })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

impl<T: Real> Design<T> for MonteCarlo<T> {
    fn dims(&self) -> &[RandomParam<T>] {
        &self.dims
    }

    fn len(&self) -> usize {
        self.samples.len()
    }

    fn point(&self, r: usize) -> Vec<T> {
        self.samples[r].clone()
    }

    fn weight(&self, _r: usize) -> T {
        T::one() / T::from_count(self.samples.len())
    }
}
