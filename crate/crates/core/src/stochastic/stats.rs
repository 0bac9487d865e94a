//! Moments, first-order Sobol indices and failure probabilities by
//! quadrature over a design.

use super::design::{CollocationGrid, Design};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Variances below this are treated as zero when normalizing indices.
pub const MIN_VARIANCE: f64 = 1e-20;
/// Roundoff allowance for negative variances.
const NEGATIVE_VARIANCE_TOL: f64 = 1e-14;

fn check_len<T: Real, D: Design<T> + ?Sized>(design: &D, len: usize) -> Result<()> {
    if len != design.len() {
        return Err(Error::IncompleteEnsemble {
            expected: design.len(),
            found: len,
        });
    }
    Ok(())
}

/// `E[Q] = Σ_r w_r Q_r`.
pub fn expectation<T: Real, D: Design<T> + ?Sized>(design: &D, q: &[T]) -> Result<T> {
    check_len(design, q.len())?;
    Ok(design.integrate(q))
}

/// `Var[Q]` about a given mean; roundoff-negative values are clamped to 0.
pub fn variance<T: Real, D: Design<T> + ?Sized>(design: &D, q: &[T], mean: T) -> Result<T> {
    check_len(design, q.len())?;
    let sq: Vec<T> = q.iter().map(|&x| (x - mean) * (x - mean)).collect();
    let v = design.integrate(&sq);
    if v < T::zero() {
        if v < -T::lit(NEGATIVE_VARIANCE_TOL) {
            log::warn!("negative variance {v} clamped to zero");
        }
        return Ok(T::zero());
    }
    Ok(v)
}

pub fn std_dev<T: Real, D: Design<T> + ?Sized>(design: &D, q: &[T], mean: T) -> Result<T> {
    Ok(variance(design, q, mean)?.sqrt())
}

/// Transposes per-realization series into per-time columns.
fn columns<T: Copy>(series: &[Vec<T>]) -> Result<Vec<Vec<T>>> {
    let n_t = series.first().map_or(0, Vec::len);
    if let Some((r, s)) = series.iter().enumerate().find(|(_, s)| s.len() != n_t) {
        return Err(Error::RaggedSeries {
            realization: r,
            len: s.len(),
            expected: n_t,
        });
    }
    Ok((0..n_t).map(|t| series.iter().map(|s| s[t]).collect()).collect())
}

/// Pointwise mean and standard deviation of equal-length series.
pub fn moments_series<T: Real, D: Design<T> + ?Sized>(
    design: &D,
    series: &[Vec<T>],
) -> Result<(Vec<T>, Vec<T>)> {
    check_len(design, series.len())?;
    let mut mean = Vec::new();
    let mut std = Vec::new();
    for col in columns(series)? {
        let m = expectation(design, &col)?;
        std.push(std_dev(design, &col, m)?);
        mean.push(m);
    }
    Ok((mean, std))
}

/// First-order Sobol index of every dimension, `None` when the total
/// variance is below [`MIN_VARIANCE`].
///
/// Conditional expectations reuse the grid realizations: fixing node `i`
/// of dimension `j` leaves a tensor grid over the remaining dimensions.
pub fn sobol_first_order<T: Real>(grid: &CollocationGrid<T>, q: &[T]) -> Result<Vec<Option<T>>> {
    let mean = expectation(grid, q)?;
    let var = variance(grid, q, mean)?;
    if var < T::lit(MIN_VARIANCE) {
        return Ok(vec![None; grid.n_dims()]);
    }
    let n = grid.n_per_dim();
    let mut out = Vec::with_capacity(grid.n_dims());
    for j in 0..grid.n_dims() {
        let mut cond = vec![T::zero(); n];
        for (r, &v) in q.iter().enumerate() {
            let i = grid.multi_index(r)[j];
            cond[i] += grid.weight(r) / grid.node_mass(i) * v;
        }
        let vj = cond.iter().enumerate().fold(T::zero(), |acc, (i, &m)| {
            let d = m - mean;
            acc + grid.node_mass(i) * d * d
        });
        out.push(Some(vj / var));
    }
    Ok(out)
}

/// Sobol indices over time: `result[dim][t]`.
pub fn sobol_series<T: Real>(grid: &CollocationGrid<T>, series: &[Vec<T>]) -> Result<Vec<Vec<Option<T>>>> {
    check_len(grid, series.len())?;
    let cols = columns(series)?;
    let mut out = vec![Vec::with_capacity(cols.len()); grid.n_dims()];
    for col in cols {
        for (j, s) in sobol_first_order(grid, &col)?.into_iter().enumerate() {
            out[j].push(s);
        }
    }
    Ok(out)
}

/// `p_f(t) = E[h(t)]`, clamped to `[0, 1]`.
pub fn probability_of_failure<T: Real, D: Design<T> + ?Sized>(design: &D, h: &[Vec<u8>]) -> Result<Vec<T>> {
    check_len(design, h.len())?;
    columns(h)?
        .into_iter()
        .map(|col| {
            let q: Vec<T> = col.into_iter().map(|b| T::from_count(usize::from(b))).collect();
            Ok(expectation(design, &q)?.max(T::zero()).min(T::one()))
        })
        .collect()
}

/// `‖x - x_ref‖₂ / ‖x_ref‖₂`.
pub fn relative_error<T: Real>(field: &[T], reference: &[T]) -> Result<T> {
    if field.len() != reference.len() {
        return Err(Error::DimensionMismatch {
            expected: reference.len(),
            got: field.len(),
        });
    }
    let norm = reference.iter().map(|&r| r * r).sum::<T>().sqrt();
    if !(norm > T::zero()) {
        return Err(Error::ZeroReferenceNorm);
    }
    let diff = field
        .iter()
        .zip(reference)
        .map(|(&a, &b)| (a - b) * (a - b))
        .sum::<T>()
        .sqrt();
    Ok(diff / norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stochastic::design::MonteCarlo;
    use crate::stochastic::params::{ParamId, RandomParam};
    use approx::assert_abs_diff_eq;

    fn grid(k: usize, n: usize) -> CollocationGrid<f64> {
        let dims = (0..k)
            .map(|j| RandomParam::new(ParamId::ALL[j], 1.0 + j as f64, 0.2).unwrap())
            .collect();
        CollocationGrid::new(dims, n).unwrap()
    }

    fn eval(g: &CollocationGrid<f64>, f: impl Fn(&[f64]) -> f64) -> Vec<f64> {
        (0..g.len()).map(|r| f(&g.point(r))).collect()
    }

    #[test]
    fn constant_and_uniform_moments() {
        let g = grid(1, 5);
        let (a, b) = g.dims()[0].bounds();
        let c = eval(&g, |_| 3.5);
        assert_abs_diff_eq!(expectation(&g, &c).unwrap(), 3.5, epsilon = 1e-14);
        assert_eq!(std_dev(&g, &c, 3.5).unwrap(), 0.0);
        let x = eval(&g, |p| p[0]);
        assert_abs_diff_eq!(expectation(&g, &x).unwrap(), (a + b) / 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(std_dev(&g, &x, (a + b) / 2.0).unwrap(), (b - a) / 12f64.sqrt(), epsilon = 1e-14);
        let x2 = eval(&g, |p| p[0] * p[0]);
        assert_abs_diff_eq!(expectation(&g, &x2).unwrap(), (a * a + a * b + b * b) / 3.0, epsilon = 1e-14);
    }

    #[test]
    fn independent_variances_add() {
        let g = grid(2, 3);
        let (a0, b0) = g.dims()[0].bounds();
        let (a1, b1) = g.dims()[1].bounds();
        let q = eval(&g, |p| 2.0 * p[0] - 3.0 * p[1]);
        let m = expectation(&g, &q).unwrap();
        let exact = 4.0 * (b0 - a0).powi(2) / 12.0 + 9.0 * (b1 - a1).powi(2) / 12.0;
        assert_abs_diff_eq!(variance(&g, &q, m).unwrap(), exact, epsilon = 1e-14);
    }

    #[test]
    fn incomplete_ensemble() {
        let g = grid(2, 3);
        assert!(matches!(expectation(&g, &[1.0; 8]), Err(Error::IncompleteEnsemble { .. })));
        assert!(moments_series(&g, &vec![vec![1.0, 2.0]; 8]).is_err());
        let mut ragged = vec![vec![1.0, 2.0]; 9];
        ragged[4].pop();
        assert!(moments_series(&g, &ragged).is_err());
    }

    #[test]
    fn sobol_cases() {
        let g = grid(2, 5);
        let s = sobol_first_order(&g, &eval(&g, |p| p[0].powi(3))).unwrap();
        assert_abs_diff_eq!(s[0].unwrap(), 1.0, epsilon = 1e-10);
        assert!(s[1].unwrap().abs() <= 1e-10);
        let s = sobol_first_order(&g, &eval(&g, |p| p[0] * p[0] + (p[1] - 1.0).powi(3))).unwrap();
        assert_abs_diff_eq!(s[0].unwrap() + s[1].unwrap(), 1.0, epsilon = 1e-10);
        let (m0, m1) = (g.dims()[0].mean, g.dims()[1].mean);
        let s = sobol_first_order(&g, &eval(&g, |p| (p[0] - m0) * (p[1] - m1))).unwrap();
        assert!(s.iter().all(|x| x.unwrap().abs() <= 1e-10));
        assert_eq!(sobol_first_order(&g, &eval(&g, |_| 4.0)).unwrap(), vec![None, None]);
    }

    #[test]
    fn pf_half_grid() {
        let g = grid(1, 5);
        let m = g.dims()[0].mean;
        let h: Vec<Vec<u8>> = (0..5).map(|r| vec![0, u8::from(g.point(r)[0] > m)]).collect();
        let pf = probability_of_failure::<f64, _>(&g, &h).unwrap();
        assert_eq!(pf[0], 0.0);
        assert_abs_diff_eq!(pf[1], (g.weights[3] + g.weights[4]) / 2.0, epsilon = 1e-15);
        let all: Vec<Vec<u8>> = vec![vec![0, 1, 1]; 5];
        let pf = probability_of_failure::<f64, _>(&g, &all).unwrap();
        assert_abs_diff_eq!(pf[1], 1.0, epsilon = 1e-14);
        assert!(pf[1] <= 1.0);
    }

    #[test]
    fn relative_error_values() {
        let r = [1.0, -2.0, 3.0];
        assert_eq!(relative_error(&r, &r).unwrap(), 0.0);
        let s: Vec<f64> = r.iter().map(|x| 1.01 * x).collect();
        assert_abs_diff_eq!(relative_error(&s, &r).unwrap(), 0.01, epsilon = 1e-14);
        assert!(matches!(relative_error(&[1.0], &[0.0]), Err(Error::ZeroReferenceNorm)));
        assert!(relative_error(&[1.0], &r).is_err());
    }

    #[test]
    fn mc_constant_and_linear() {
        let dims = vec![RandomParam::new(ParamId::CurrentBase, 10.0, 0.5).unwrap()];
        let mc = MonteCarlo::new(dims.clone(), 7, 3).unwrap();
        let c = vec![2.0; 7];
        assert_abs_diff_eq!(expectation(&mc, &c).unwrap(), 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(std_dev(&mc, &c, 2.0).unwrap(), 0.0, epsilon = 1e-15);
        let mc = MonteCarlo::new(dims, 40_000, 11).unwrap();
        let x: Vec<f64> = (0..mc.len()).map(|r| mc.point(r)[0]).collect();
        let se = (10.0f64 / 12f64.sqrt()) / 200.0;
        assert!((expectation(&mc, &x).unwrap() - 10.0).abs() < 4.0 * se);
    }
}
