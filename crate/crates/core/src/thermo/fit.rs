//! Weighted least-squares fits of S(T) to a sum of powers of T.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone, PartialEq)]
pub struct PowerFit {
    pub powers: Vec<i32>,
    pub coefficients: Vec<f64>,
    /// Standard errors from the residual scatter.
    pub standard_errors: Vec<f64>,
    /// ∂c_k/∂y_i, for propagating per-sample uncertainties.
    pub sensitivities: Vec<Vec<f64>>,
}

impl PowerFit {
    pub fn coefficient(&self, power: i32) -> Option<f64> {
        self.powers.iter().position(|&p| p == power).map(|k| self.coefficients[k])
    }

    pub fn evaluate(&self, t: f64) -> f64 {
        self.powers.iter().zip(&self.coefficients).map(|(&p, c)| c * t.powi(p)).sum()
    }

    /// Σ_i (∂c_k/∂y_i · σ_i)² under the k-th coefficient.
    pub fn propagated_error(&self, k: usize, sigma: &[f64]) -> f64 {
        self.sensitivities[k].iter().zip(sigma).map(|(g, s)| (g * s).powi(2)).sum::<f64>().sqrt()
    }
}

/// Fits y(t) = Σ c_k t^{p_k} with relative weights 1/|y_i|, so every sample
/// counts equally however small it is.
pub fn fit_powers(t: &[f64], y: &[f64], powers: &[i32]) -> Result<PowerFit> {
    let scale = y.iter().fold(0.0f64, |s, v| s.max(v.abs()));
    if scale == 0.0 {
        let (n, m) = (t.len(), powers.len());
        if n != y.len() || n <= m {
            return Err(Error::IllConditioned(format!("{n} samples for {m} fit parameters")));
        }
        return Ok(PowerFit {
            powers: powers.to_vec(),
            coefficients: vec![0.0; m],
            standard_errors: vec![0.0; m],
            sensitivities: vec![vec![0.0; n]; m],
        });
    }
    let weight: Vec<f64> = y.iter().map(|v| 1.0 / if *v == 0.0 { scale } else { v.abs() }).collect();
    fit_powers_weighted(t, y, &weight, powers)
}

/// Fits with fixed weights; the sensitivities are then exact.
pub fn fit_powers_weighted(t: &[f64], y: &[f64], weight: &[f64], powers: &[i32]) -> Result<PowerFit> {
    let (n, m) = (t.len(), powers.len());
    if n != y.len() || n != weight.len() || n <= m {
        return Err(Error::IllConditioned(format!("{n} samples for {m} fit parameters")));
    }
    // Columns are normalised to unit maximum before the solve.
    let column_scale: Vec<f64> = powers
        .iter()
        .map(|&p| t.iter().fold(0.0f64, |s, ti| s.max(ti.powi(p).abs())))
        .collect();
    let x = DMatrix::from_fn(n, m, |i, k| weight[i] * t[i].powi(powers[k]) / column_scale[k]);
    let rhs = DVector::from_fn(n, |i, _| weight[i] * y[i]);
    let svd = x.clone().svd(true, true);
    let (smax, smin) = (svd.singular_values.max(), svd.singular_values.min());
    if !(smin > 1e-13 * smax) {
        return Err(Error::IllConditioned(format!("singular value ratio {:e}", smin / smax)));
    }
    let pinv = svd
        .pseudo_inverse(0.0)
        .map_err(|e| Error::IllConditioned(e.to_string()))?;
    let beta = &pinv * &rhs;
    let residual = &x * &beta - &rhs;
    let dof = (n - m) as f64;
    let s2 = residual.norm_squared() / dof;
    let gram_inv = (x.transpose() * &x)
        .try_inverse()
        .ok_or_else(|| Error::IllConditioned("normal matrix is singular".into()))?;
    Ok(PowerFit {
        powers: powers.to_vec(),
        coefficients: (0..m).map(|k| beta[k] / column_scale[k]).collect(),
        standard_errors: (0..m).map(|k| (s2 * gram_inv[(k, k)]).sqrt() / column_scale[k]).collect(),
        sensitivities: (0..m)
            .map(|k| (0..n).map(|i| pinv[(k, i)] * weight[i] / column_scale[k]).collect())
            .collect(),
    })
}
