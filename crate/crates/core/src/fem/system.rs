use crate::error::{Error, Result};
use crate::scalar::Real;

/// Tridiagonal system `A x = rhs` in three-array storage.
///
/// `lower[i]` couples row `i` to column `i - 1` (`lower[0]` is unused),
/// `upper[i]` couples row `i` to column `i + 1` (`upper[n - 1]` is unused).
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem<T> {
    pub lower: Vec<T>,
    pub diag: Vec<T>,
    pub upper: Vec<T>,
    pub rhs: Vec<T>,
}

impl<T: Real> LinearSystem<T> {
    pub fn zeros(n: usize) -> Self {
        Self {
            lower: vec![T::zero(); n],
            diag: vec![T::zero(); n],
            upper: vec![T::zero(); n],
            rhs: vec![T::zero(); n],
        }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Matrix-vector product `A x`.
    pub fn apply(&self, x: &[T]) -> Vec<T> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * x[i];
                if i > 0 {
                    s += self.lower[i] * x[i - 1];
                }
                if i + 1 < n {
                    s += self.upper[i] * x[i + 1];
                }
                s
            })
            .collect()
    }

    /// Row sums of the matrix (lumping).
    pub fn row_sums(&self) -> Vec<T> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i];
                if i > 0 {
                    s += self.lower[i];
                }
                if i + 1 < n {
                    s += self.upper[i];
                }
                s
            })
            .collect()
    }

    /// Adds a concentrated load to the right-hand side.
    pub fn add_point_load(&mut self, node: usize, value: T) {
        self.rhs[node] += value;
    }

    /// Imposes `x[node] = value` at a boundary node.
    ///
    /// The constrained row becomes an identity row and the coupled column is
    /// moved to the neighbour's right-hand side, so the matrix stays symmetric.
    pub fn apply_dirichlet(&mut self, node: usize, value: T) -> Result<()> {
        let n = self.len();
        if n == 0 || (node != 0 && node != n - 1) {
            return Err(Error::InteriorDirichlet { node, n_nodes: n });
        }
        if node == 0 {
            if n > 1 {
                self.rhs[1] -= self.lower[1] * value;
                self.lower[1] = T::zero();
            }
            self.upper[0] = T::zero();
        } else {
            self.rhs[n - 2] -= self.upper[n - 2] * value;
            self.upper[n - 2] = T::zero();
            self.lower[n - 1] = T::zero();
        }
        self.diag[node] = T::one();
        self.rhs[node] = value;
        Ok(())
    }

    /// Thomas elimination without pivoting.
    pub fn solve(&self) -> Result<Vec<T>> {
        solve_tridiagonal(self)
    }
}

impl<T: Real> std::ops::Add for LinearSystem<T> {
    type Output = LinearSystem<T>;

    fn add(mut self, other: Self) -> Self {
        assert_eq!(self.len(), other.len(), "system size mismatch");
        let zip_add = |a: &mut Vec<T>, b: &[T]| a.iter_mut().zip(b).for_each(|(x, &y)| *x += y);
        zip_add(&mut self.lower, &other.lower);
        zip_add(&mut self.diag, &other.diag);
        zip_add(&mut self.upper, &other.upper);
        zip_add(&mut self.rhs, &other.rhs);
        self
    }
}

/// Solves a tridiagonal system by forward elimination and back substitution.
///
/// A pivot that vanishes relative to its row magnitude is reported as
/// singular.
pub fn solve_tridiagonal<T: Real>(sys: &LinearSystem<T>) -> Result<Vec<T>> {
    let n = sys.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    for v in [&sys.lower, &sys.upper, &sys.rhs] {
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: v.len(),
            });
        }
    }
    let tiny = T::epsilon() * T::lit(4.0);
    let row_scale = |i: usize| {
        let mut s = sys.diag[i].abs();
        if i > 0 {
            s += sys.lower[i].abs();
        }
        if i + 1 < n {
            s += sys.upper[i].abs();
        }
        s
    };

    let mut c = vec![T::zero(); n];
    let mut d = vec![T::zero(); n];
    let mut pivot = sys.diag[0];
    if !(pivot.abs() > tiny * row_scale(0)) || !pivot.is_finite() {
        return Err(Error::SingularSystem { pivot: 0 });
    }
    c[0] = sys.upper[0] / pivot;
    d[0] = sys.rhs[0] / pivot;
    for i in 1..n {
        pivot = sys.diag[i] - sys.lower[i] * c[i - 1];
        if !(pivot.abs() > tiny * row_scale(i)) || !pivot.is_finite() {
            return Err(Error::SingularSystem { pivot: i });
        }
        if i + 1 < n {
            c[i] = sys.upper[i] / pivot;
        }
        d[i] = (sys.rhs[i] - sys.lower[i] * d[i - 1]) / pivot;
    }
    for i in (0..n - 1).rev() {
        let next = d[i + 1];
        d[i] -= c[i] * next;
    }
    Ok(d)
}
