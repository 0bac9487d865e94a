//! Gauss-Legendre rules on `[-1, 1]`.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Largest supported rule.
pub const MAX_POINTS: usize = 100;

/// Nodes (ascending) and weights of the `n`-point Gauss-Legendre rule.
///
/// Roots of `P_n` are polished by Newton iteration in `f64` and then cast,
/// so `f32` rules are correctly rounded.
pub fn gauss_legendre<T: Real>(n: usize) -> Result<(Vec<T>, Vec<T>)> {
    if n == 0 || n > MAX_POINTS {
        return Err(Error::InvalidParameter(format!(
            "Gauss-Legendre rule needs 1..={MAX_POINTS} points, got {n}"
        )));
    }
    let mut nodes = vec![0.0f64; n];
    let mut weights = vec![0.0f64; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-15 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    // remove the few-ulp bias of the weight formula
    let scale = 2.0 / pairwise_sum(&weights);
    weights.iter_mut().for_each(|w| *w *= scale);
    Ok((
        nodes.into_iter().map(T::lit).collect(),
        weights.into_iter().map(T::lit).collect(),
    ))
}

fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 4 {
        return v.iter().sum();
    }
    let (a, b) = v.split_at(v.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
