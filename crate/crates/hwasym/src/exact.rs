//! Exact closed-form objects: the Laplace transforms of the transient
//! density, the logarithmic-derivative ratio R_beta, the steady state, the
//! free-space Brownian density, and the fluid approximation.

use crate::error::{Error, Result};
use crate::numeric::gamma::normal_cdf;
use crate::numeric::ScaledComplex;
use crate::params::ModelParams;
use crate::specfun::pcf::{pcf_pair, PcfPair};
use num_complex::Complex64;
use std::f64::consts::PI;

/// sqrt(theta + beta^2/4), principal branch, cut along theta <= -beta^2/4.
pub fn sqrt_shifted(theta: Complex64, beta: f64) -> Complex64 {
    (theta + beta * beta / 4.0).sqrt()
}

/// D and D' at (theta, -beta) with routing suitable for any Re(theta).
pub fn pcf_at_minus_beta(theta: Complex64, beta: f64) -> Result<PcfPair> {
    pcf_pair(theta, Complex64::new(-beta, 0.0))
}

/// R_beta(theta) = D'_{-theta}(-beta) / D_{-theta}(-beta).
pub fn r_beta(theta: Complex64, params: &ModelParams) -> Result<Complex64> {
    let pair = pcf_at_minus_beta(theta, params.beta)?;
    let d_ln = pair.d.ln_abs();
    if !d_ln.is_finite() {
        return Err(Error::Domain(
            "R_beta: denominator D_{-theta}(-beta) vanished".into(),
        ));
    }
    let ratio = pair.dz.div(&pair.d);
    if ratio.ln_abs() > 700.0 {
        return Err(Error::NearPole {
            nearest: theta.re.round(),
        });
    }
    Ok(ratio.to_complex())
}

/// Laplace transform p-hat(x, theta) of the density, x0 > 0 (Theorem 1).
/// Scaled form for use inside contour quadratures.
pub fn phat_scaled(x: f64, theta: Complex64, params: &ModelParams) -> Result<ScaledComplex> {
    let beta = params.beta;
    let x0 = params.x0;
    let s = sqrt_shifted(theta, beta);
    let pair_beta = pcf_at_minus_beta(theta, beta)?;
    let r = pair_beta.dz.div(&pair_beta.d).to_complex();
    let denom = s - r;
    if denom.norm() < 1e-290 {
        return Err(Error::NearPole {
            nearest: theta.re.round(),
        });
    }
    let drift = beta * (x0 - x) / 2.0;
    if x >= 0.0 {
        // free-space part + interface part
        let a = ScaledComplex::from_exp(Complex64::new(drift, 0.0) - (x - x0).abs() * s)
            .mul_c(1.0 / (2.0 * s));
        let b = ScaledComplex::from_exp(Complex64::new(drift, 0.0) - (x + x0) * s)
            .mul_c(-1.0 / (2.0 * s));
        let c = ScaledComplex::from_exp(Complex64::new(drift, 0.0) - (x + x0) * s)
            .mul_c(1.0 / denom);
        Ok(a.add(&b).add(&c))
    } else {
        let pair_x = pcf_pair(theta, Complex64::new(-beta - x, 0.0))?;
        let ratio = pair_x.d.div(&pair_beta.d);
        let front =
            ScaledComplex::from_exp(Complex64::new(-x * x / 4.0 + drift, 0.0) - x0 * s)
                .mul_c(1.0 / denom);
        Ok(front.mul(&ratio))
    }
}

/// Laplace transform as a plain complex number (moderate parameters).
pub fn phat(x: f64, theta: Complex64, params: &ModelParams) -> Result<Complex64> {
    Ok(phat_scaled(x, theta, params)?.to_complex())
}

/// ln C(beta) for the steady-state normalization
/// 1/C = 1 + beta e^{beta^2/2} Int_{-inf}^{beta} e^{-u^2/2} du.
pub fn ln_steady_norm(beta: f64) -> f64 {
    let ln_int = (beta * (2.0 * PI).sqrt() * normal_cdf(beta)).ln() + beta * beta / 2.0;
    // ln(1 + e^{ln_int})
    -(ln_int + (-ln_int).exp().ln_1p())
}

/// Steady-state density p(x, infinity) (Eq. for beta > 0).
pub fn steady_density(x: f64, params: &ModelParams) -> f64 {
    ln_steady_density(x, params).exp()
}

pub fn ln_steady_density(x: f64, params: &ModelParams) -> f64 {
    let beta = params.beta;
    let tail = if x > 0.0 { -beta * x } else { -beta * x - x * x / 2.0 };
    ln_steady_norm(beta) + beta.ln() + tail
}

/// Free-space Brownian density with unit negative drift, as a density in x
/// (X = x sqrt(eps) is the scaled coordinate).
pub fn p_bm(x_scaled: f64, t: f64, params: &ModelParams) -> Result<f64> {
    Ok(ln_p_bm(x_scaled, t, params)?.exp())
}

pub fn ln_p_bm(x_scaled: f64, t: f64, params: &ModelParams) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("p_bm requires t > 0, got {t}")));
    }
    let eps = params.eps;
    let dx = t + x_scaled - params.x0_scaled;
    Ok(-(4.0 * PI * t).ln() / 2.0 - dx * dx / (4.0 * eps * t))
}

/// Fluid (zero-noise) trajectory in scaled coordinates.
pub fn fluid(t: f64, params: &ModelParams) -> f64 {
    let x0 = params.x0_scaled;
    if t <= x0 {
        x0 - t
    } else {
        (x0 - t).exp() - 1.0
    }
}
