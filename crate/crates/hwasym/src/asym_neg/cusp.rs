//! Quartic-exponent layer at the cusp point where the two caustics meet and
//! three saddles coalesce.

use crate::error::{Error, Result};
use crate::numeric::adaptive_simpson;
use crate::params::ModelParams;
use std::f64::consts::PI;

/// Quartic coefficient c(X0) of the layer integral.
pub fn quartic_coefficient(x0: f64) -> f64 {
    2.0 * (x0 + 3.0).powf(5.5) / (3.0 * x0.powf(2.5))
}

/// Layer integral J(xi, eta) = Int exp(-eta w + b xi w^2 - c w^4) dw with
/// b = [(X0+4)(X0+3)/X0]^{3/2}; converges absolutely (quartic decay).
pub fn j_integral(xi: f64, eta: f64, x0: f64) -> Result<f64> {
    let b = ((x0 + 4.0) * (x0 + 3.0) / x0).powf(1.5);
    let c = quartic_coefficient(x0);
    // window: c w^4 - |b xi| w^2 - |eta| w > 50 outside
    let mut w_max = (55.0 / c).powf(0.25) + 1.0;
    for _ in 0..40 {
        let v = c * w_max.powi(4) - b.abs() * xi.abs() * w_max * w_max - eta.abs() * w_max;
        if v > 50.0 {
            break;
        }
        w_max *= 1.3;
    }
    let f = |w: f64| (-eta * w + b * xi * w * w - c * w.powi(4)).exp();
    adaptive_simpson(&f, -w_max, w_max, 1e-12)
}

/// ln of the cusp-layer density at scaled coordinates (xi, eta):
/// X = X_cusp + sqrt(eps) xi, t = t_cusp + slope sqrt(eps) xi + eps^{3/4} eta.
pub fn ln_cusp_density(xi: f64, eta: f64, params: &ModelParams) -> Result<f64> {
    let x0 = params.x0_scaled;
    let eps = params.eps;
    let j = j_integral(xi, eta, x0)?;
    if !(j > 0.0) {
        return Err(Error::Domain("cusp layer integral not positive".into()));
    }
    let s3 = (x0 + 3.0).sqrt();
    let s0 = x0.sqrt();
    let ln_pref = -0.25 * eps.ln() - (2.0 * PI).ln() + 0.5 * ((x0 + 3.0) / x0).ln()
        + 0.5 * (s0 * s3 + x0 + 2.0).ln();
    let gauss = -xi * xi * (s0 + 2.0 * s3) / (4.0 * s0);
    let bulk = s0 / (4.0 * (x0 + 4.0)) * (-2.0 * (x0 + 3.0).powf(1.5) + s0 * (2.0 * x0 + 9.0));
    let linear = -xi / eps.sqrt() * (s0 + 2.0 * s3) * (s0 + 2.0 * s3)
        / (4.0 * (x0 * (x0 + 3.0) * (x0 + 4.0)).sqrt())
        - eta / eps.powf(0.25) * 3.0 / (4.0 * (x0 + 3.0));
    Ok(ln_pref + gauss + bulk / eps + linear + j.ln())
}

/// Cusp-layer density value (may underflow; prefer the ln form).
pub fn cusp_density(xi: f64, eta: f64, params: &ModelParams) -> Result<f64> {
    Ok(ln_cusp_density(xi, eta, params)?.exp())
}
