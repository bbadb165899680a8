use serde::Serialize;

use super::AnalysisError;

/// Largest activity for which the cluster certificate is guaranteed on
/// graphs of maximum degree `delta`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HardcoreThreshold {
    pub delta: u32,
    /// Maximiser of `p (1-p)^(delta-1) (1 - delta p^2)^delta` on `[0, 1/sqrt(delta))`.
    pub maximizer: f64,
    /// The maximum value.
    pub p_delta: f64,
    /// `p_delta / (1 - p_delta)`.
    pub lambda: f64,
}

/// Critical activity of the crude contraction argument.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CrudeThreshold {
    pub delta: u32,
    pub z_c: f64,
    pub lambda_c: f64,
    /// `delta z^2 + delta (delta-1) z - 1` evaluated at `z_c`.
    pub residual: f64,
}

const GOLDEN_TOLERANCE: f64 = 1e-10;

fn log_objective(delta: f64, p: f64) -> f64 {
    p.ln() + (delta - 1.0) * (-p).ln_1p() + delta * (-delta * p * p).ln_1p()
}

/// Maximises the cluster bound by golden-section search on its logarithm,
/// which is concave on the open interval.
pub fn hardcore_lambda(delta: u32) -> Result<HardcoreThreshold, AnalysisError> {
    if delta < 1 {
        return Err(AnalysisError::InvalidDegree { min: 1, got: delta });
    }
    let d = f64::from(delta);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (0.0, 1.0 / d.sqrt());
    let mut a = hi - inv_phi * (hi - lo);
    let mut b = lo + inv_phi * (hi - lo);
    let (mut fa, mut fb) = (log_objective(d, a), log_objective(d, b));
    while hi - lo > GOLDEN_TOLERANCE {
        if fa < fb {
            lo = a;
            a = b;
            fa = fb;
            b = lo + inv_phi * (hi - lo);
            fb = log_objective(d, b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - inv_phi * (hi - lo);
            fa = log_objective(d, a);
        }
    }
    let maximizer = 0.5 * (lo + hi);
    let p_delta = log_objective(d, maximizer).exp();
    Ok(HardcoreThreshold {
        delta,
        maximizer,
        p_delta,
        lambda: p_delta / (1.0 - p_delta),
    })
}

/// Positive root of `delta z^2 + delta (delta-1) z - 1`, in the cancellation-free
/// form of the closed expression, with its residual.
pub fn crude_critical_activity(delta: u32) -> Result<CrudeThreshold, AnalysisError> {
    if delta < 2 {
        return Err(AnalysisError::InvalidDegree { min: 2, got: delta });
    }
    let d = f64::from(delta);
    let s = (1.0 + 4.0 / (d * (d - 1.0) * (d - 1.0))).sqrt();
    // (d-1)/2 * (s - 1) rewritten as (d-1)/2 * (s^2 - 1)/(s + 1).
    let z_c = 0.5 * (d - 1.0) * (4.0 / (d * (d - 1.0) * (d - 1.0))) / (s + 1.0);
    let residual = d * z_c * z_c + d * (d - 1.0) * z_c - 1.0;
    Ok(CrudeThreshold {
        delta,
        z_c,
        lambda_c: z_c / (1.0 - z_c),
        residual,
    })
}
