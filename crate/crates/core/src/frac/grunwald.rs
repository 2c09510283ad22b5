use super::{riesz_constant, Side};
use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Grünwald–Letnikov weights w_k = (−1)^k binom(order, k), k = 0..count.
pub fn gl_weights(order: f64, count: usize) -> Vec<f64> {
    let mut w = Vec::with_capacity(count);
    if count == 0 {
        return w;
    }
    w.push(1.0);
    for k in 1..count {
        let prev = w[k - 1];
        w.push(prev * (1.0 - (order + 1.0) / k as f64));
    }
    w
}

/// Shifted (shift 1) Grünwald–Letnikov approximation of the Riemann–Liouville
/// derivative of the sampled function, first-order accurate in `step`.
///
/// `samples[i]` is u(x_0 + i·step). The function is taken to vanish outside
/// the sampled interval, so the left sum starts from `samples[0]` and the right
/// sum from the last sample.
pub fn gl_frac_deriv(samples: &[f64], order: f64, step: f64, side: Side) -> Result<Vec<f64>> {
    let m = samples.len();
    if m < 3 {
        return Err(Error::param(format!(
            "Grünwald–Letnikov needs at least 3 samples, got {m}"
        )));
    }
    if !(step > 0.0) {
        return Err(Error::param(format!("step = {step} must be positive")));
    }
    if !(order > 0.0 && order <= 2.0) {
        return Err(Error::param(format!("order = {order} must lie in (0, 2]")));
    }
    let w = gl_weights(order, m + 1);
    let scale = step.powf(-order);
    let at = |idx: isize| -> f64 {
        if idx < 0 || idx as usize >= m {
            0.0
        } else {
            samples[idx as usize]
        }
    };
    let out = (0..m)
        .map(|i| {
            let i = i as isize;
            let s: f64 = match side {
                Side::Left => (0..=i + 1).map(|k| w[k as usize] * at(i - k + 1)).sum(),
                Side::Right => (0..=(m as isize - i))
                    .map(|k| w[k as usize] * at(i + k - 1))
                    .sum(),
            };
            scale * s
        })
        .collect();
    Ok(out)
}

/// Riesz derivative −(₀D^order + ₓD₁^order)u / (2cos(order·π/2)) of sampled data.
pub fn riesz_of_samples(samples: &[f64], order: f64, step: f64) -> Result<Vec<f64>> {
    let left = gl_frac_deriv(samples, order, step, Side::Left)?;
    let right = gl_frac_deriv(samples, order, step, Side::Right)?;
    let c = -riesz_constant(order);
    Ok(left.iter().zip(&right).map(|(l, r)| c * (l + r)).collect())
}

fn trapezoid(f: impl Iterator<Item = f64>, n: usize, step: f64) -> f64 {
    let vals: Vec<f64> = f.collect();
    debug_assert_eq!(vals.len(), n);
    step * (vals.iter().sum::<f64>() - 0.5 * (vals[0] + vals[n - 1]))
}

/// The three quantities equated by the fractional integration-by-parts identity.
#[derive(Debug, Clone, Copy)]
pub struct AdjointPairing {
    /// (₀D^{2μ}u, v)
    pub strong: f64,
    /// (₀D^μ u, ₓD₁^μ v)
    pub weak: f64,
    /// cos(μπ)‖₀D^μ u‖²; equals `weak` when u = v.
    pub coercive: f64,
}

/// All pairings evaluated with Grünwald–Letnikov derivatives and trapezoid sums.
pub fn adjoint_pairing(u: &[f64], v: &[f64], mu: f64, step: f64) -> Result<AdjointPairing> {
    if u.len() != v.len() {
        return Err(Error::param("u and v must have the same number of samples"));
    }
    if !(mu > 0.5 && mu < 1.0) {
        return Err(Error::param(format!("half-order mu = {mu} must lie in (1/2, 1)")));
    }
    let n = u.len();
    let d2u = gl_frac_deriv(u, 2.0 * mu, step, Side::Left)?;
    let du = gl_frac_deriv(u, mu, step, Side::Left)?;
    let dv = gl_frac_deriv(v, mu, step, Side::Right)?;
    let strong = trapezoid(d2u.iter().zip(v).map(|(a, b)| a * b), n, step);
    let weak = trapezoid(du.iter().zip(&dv).map(|(a, b)| a * b), n, step);
    let norm2 = trapezoid(du.iter().map(|a| a * a), n, step);
    Ok(AdjointPairing {
        strong,
        weak,
        coercive: (mu * PI).cos() * norm2,
    })
}

/// |(₀D^{2μ}u, v) − (₀D^μ u, ₓD₁^μ v)|, which vanishes as `step` → 0.
pub fn adjoint_identity_residual(u: &[f64], v: &[f64], mu: f64, step: f64) -> Result<f64> {
    let p = adjoint_pairing(u, v, mu, step)?;
    Ok((p.strong - p.weak).abs())
}
