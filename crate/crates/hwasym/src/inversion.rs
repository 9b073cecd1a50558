//! Reference (non-asymptotic) density values by numerical inversion of the
//! Laplace transform on a vertical Bromwich contour, and the equivalent
//! shifted representations combining a residue sum with a shifted contour
//! integral.

use crate::error::{Error, Result};
use crate::exact::{phat_scaled, sqrt_shifted};
use crate::numeric::ScaledComplex;
use crate::params::{DensityEstimate, Method, ModelParams};
use crate::spectrum::{find_poles, Pole};
use crate::specfun::pcf::pcf_pair_tol;
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Vertical contour description.
#[derive(Clone, Copy, Debug)]
pub struct ContourSpec {
    /// real part of the line
    pub abscissa: f64,
    /// truncation height (grown dynamically up to this cap)
    pub half_height: f64,
    /// initial node count on [0, half_height]
    pub nodes: usize,
}

impl ContourSpec {
    /// Reasonable defaults: abscissa ~ 1/t to keep e^{theta t} tame, height
    /// from the root-exponential decay of the interface part of the
    /// transform, e^{-(x + x0) sqrt(theta)} for x >= 0 and
    /// e^{-(x0 + |x|) sqrt(theta)} for x < 0.
    pub fn auto(params: &ModelParams, x: f64, t: f64) -> Self {
        let decay = if x >= 0.0 {
            (x + params.x0).max(0.2)
        } else {
            (params.x0 + x.abs()).max(0.2)
        };
        // e^{-decay sqrt(v/2)} < 1e-13 at the cap
        let vmax = 2.0 * (30.0 / decay).powi(2) + 50.0;
        ContourSpec {
            abscissa: (1.0 / t).clamp(0.05, 2.0),
            half_height: vmax,
            nodes: 0, // 0 = derive from spacing rule
        }
    }

    /// Contour for the free-space part alone, whose decay scale is
    /// |x - x0| (slow near the starting point).
    pub fn auto_bm(params: &ModelParams, x: f64, t: f64) -> Self {
        let decay = (x - params.x0).abs().max(0.25);
        let vmax = 2.0 * (30.0 / decay).powi(2) + 50.0;
        ContourSpec {
            abscissa: (1.0 / t).clamp(0.05, 2.0),
            half_height: vmax,
            nodes: 0,
        }
    }

    fn validate(&self, params: &ModelParams, poles: &[Pole]) -> Result<()> {
        if self.abscissa <= -params.beta * params.beta / 4.0 {
            return Err(Error::Config(format!(
                "contour abscissa {} is left of the branch point",
                self.abscissa
            )));
        }
        for p in poles {
            if (self.abscissa - p.theta).abs() < 0.02 {
                return Err(Error::NearPole { nearest: p.theta });
            }
        }
        Ok(())
    }
}

/// Trapezoid quadrature of (1/2 pi) Int e^{theta t} f(theta) dv on the line
/// theta = a + iv, using conjugate symmetry in v. The returned error
/// indicator compares the full grid against its even-index subgrid.
fn contour_quadrature<F>(a: f64, t: f64, spec: &ContourSpec, f: F) -> Result<(f64, f64)>
where
    F: Fn(Complex64) -> Result<ScaledComplex> + Sync,
{
    // spacing: the integrand is analytic in a strip whose width is set by
    // the distance from the line to the poles/branch cut (>= |a| here);
    // oscillation e^{i v t} demands t h << 1 as well.
    let d = 0.9 * a.abs().max(0.02).min(1.0);
    let h = (2.0 * PI * d / (t * d + 40.0)).min(0.05);
    let h = h / 2.0; // fine grid; the coarse estimate uses every other node
    let kmax_cap = (spec.half_height / h) as usize + 1;
    let kmax = if spec.nodes > 0 {
        (2 * spec.nodes).min(kmax_cap)
    } else {
        kmax_cap
    };

    // evaluate in parallel, deterministically reduced in index order
    let vals: Vec<(f64, f64)> = (0..=kmax)
        .into_par_iter()
        .map(|k| {
            let theta = Complex64::new(a, k as f64 * h);
            match f(theta) {
                Ok(sc) => {
                    let e = sc.mul(&ScaledComplex::from_exp(theta * t));
                    (e.m.re * e.e.exp(), e.m.im * e.e.exp())
                }
                Err(_) => (f64::NAN, f64::NAN),
            }
        })
        .collect();
    if vals.iter().any(|(r, i)| r.is_nan() || i.is_nan()) {
        return Err(Error::Oscillatory(
            "transform evaluation failed on the contour".into(),
        ));
    }
    // dynamic truncation: find the last index that still matters
    let peak = vals
        .iter()
        .map(|(r, i)| (r * r + i * i).sqrt())
        .fold(0.0f64, f64::max);
    let cutoff = peak * 1e-13;
    let mut last = vals.len() - 1;
    let mut quiet = 0;
    let mut decayed = false;
    for (k, (r, i)) in vals.iter().enumerate().skip(1) {
        if (r * r + i * i).sqrt() < cutoff {
            quiet += 1;
            if quiet > 16 {
                last = k;
                decayed = true;
                break;
            }
        } else {
            quiet = 0;
        }
    }
    if !decayed && (vals[last].0.powi(2) + vals[last].1.powi(2)).sqrt() > cutoff {
        return Err(Error::Oscillatory(format!(
            "contour tail not decayed at half-height {:.1}; raise half_height \
             or use the residue representation",
            spec.half_height
        )));
    }
    // trapezoid with conjugate symmetry: (h / pi) [ f(0)/2 + sum Re f(k h) ]
    let sum_grid = |step: usize| -> f64 {
        let mut s = 0.5 * vals[0].0;
        let mut k = step;
        while k <= last {
            s += vals[k].0;
            k += step;
        }
        s * (h * step as f64) / PI
    };
    let fine = sum_grid(1);
    let coarse = sum_grid(2);
    Ok((fine, (fine - coarse).abs()))
}

/// Transient density by Bromwich inversion.
///
/// For x >= 0 the free-space piece of the transform decays only like
/// e^{-|x - x0| sqrt(theta)} along the contour, which is hopeless near
/// x = x0; since that piece inverts in closed form to the Brownian density,
/// it is added analytically and only the interface part (decay scale
/// x + x0) is integrated numerically. For x < 0 the full transform already
/// decays on the x0 + |x| scale.
pub fn invert_bromwich(
    x: f64,
    t: f64,
    params: &ModelParams,
    spec: &ContourSpec,
) -> Result<DensityEstimate> {
    if !(t > 0.0) {
        return Err(Error::Domain("inversion requires t > 0".into()));
    }
    if spec.abscissa <= 0.0 {
        return Err(Error::Config(
            "Bromwich abscissa must be positive (right of theta = 0)".into(),
        ));
    }
    spec.validate(params, &[])?;
    let beta = params.beta;
    let x0 = params.x0;
    if x >= 0.0 {
        let (p2, err) = contour_quadrature(spec.abscissa, t, spec, |theta| {
            let s = sqrt_shifted(theta, beta);
            let h = h_fn(theta, params)?;
            Ok(ScaledComplex::from_exp(
                Complex64::new(beta * (x0 - x) / 2.0, 0.0) - (x + x0) * s,
            )
            .mul_c(h))
        })?;
        let value = crate::exact::p_bm(params.to_scaled(x), t, params)? + p2;
        return Ok(DensityEstimate {
            value,
            ln_value: value.abs().ln(),
            method: Method::Inversion,
            error: Some(err),
        });
    }
    let (value, err) =
        contour_quadrature(spec.abscissa, t, spec, |theta| phat_scaled(x, theta, params))?;
    Ok(DensityEstimate {
        value,
        ln_value: value.abs().ln(),
        method: Method::Inversion,
        error: Some(err),
    })
}

/// Inversion of only the free-space part p1 of the transform (x >= 0); its
/// closed form is the Brownian density.
pub fn invert_bm_part(
    x: f64,
    t: f64,
    params: &ModelParams,
    spec: &ContourSpec,
) -> Result<DensityEstimate> {
    let beta = params.beta;
    let x0 = params.x0;
    let spec = &ContourSpec {
        abscissa: spec.abscissa,
        half_height: spec.half_height.max(ContourSpec::auto_bm(params, x, t).half_height),
        nodes: spec.nodes,
    };
    let (value, err) = contour_quadrature(spec.abscissa, t, spec, |theta| {
        let s = sqrt_shifted(theta, beta);
        let drift = beta * (x0 - x) / 2.0;
        Ok(
            ScaledComplex::from_exp(Complex64::new(drift, 0.0) - (x - x0).abs() * s)
                .mul_c(1.0 / (2.0 * s)),
        )
    })?;
    Ok(DensityEstimate {
        value,
        ln_value: value.abs().ln(),
        method: Method::Inversion,
        error: Some(err),
    })
}

/// Result of a shifted representation: residue sum plus shifted contour.
#[derive(Clone, Debug)]
pub struct SumInt {
    pub sum_part: f64,
    pub int_part: f64,
    /// per-pole contributions (index, value)
    pub terms: Vec<(u32, f64)>,
}

impl SumInt {
    pub fn total(&self) -> f64 {
        self.sum_part + self.int_part
    }
}

/// H(theta) = -1/sqrt(beta^2 + 4 theta) + 1/(sqrt(theta + beta^2/4) - R).
fn h_fn(theta: Complex64, params: &ModelParams) -> Result<Complex64> {
    let s = sqrt_shifted(theta, params.beta);
    let pair = pcf_pair_tol(theta, Complex64::new(-params.beta, 0.0), 1e-11)?;
    let r = pair.dz.div(&pair.d).to_complex();
    Ok(-1.0 / (2.0 * s) + 1.0 / (s - r))
}

/// Shifted representation of p2 = p - p_BM for x >= 0: residue sum over the
/// poles right of the shifted line plus the shifted contour integral.
pub fn repr_sum_int_pos(x: f64, t: f64, params: &ModelParams, theta_sa: f64) -> Result<SumInt> {
    if x < 0.0 {
        return Err(Error::Domain("repr_sum_int_pos requires x >= 0".into()));
    }
    let beta = params.beta;
    let x0 = params.x0;
    check_theta_sa(theta_sa, params)?;
    let max_n = (-theta_sa).floor() as u32;
    let poles = find_poles(params, max_n)?;
    let mut terms = Vec::new();
    let mut sum_part = 0.0;
    for p in &poles {
        if p.theta <= theta_sa {
            continue;
        }
        let s = (p.theta + beta * beta / 4.0).sqrt();
        let term = (p.theta * t + beta * (x0 - x) / 2.0 - (x + x0) * s).exp() * p.residue;
        terms.push((p.index, term));
        sum_part += term;
    }
    let spec = ContourSpec::auto(params, x, t);
    let (int_part, _err) = contour_quadrature(theta_sa, t, &spec, |theta| {
        let s = sqrt_shifted(theta, beta);
        let h = h_fn(theta, params)?;
        Ok(
            ScaledComplex::from_exp(Complex64::new(beta * (x0 - x) / 2.0, 0.0) - (x + x0) * s)
                .mul_c(h),
        )
    })?;
    Ok(SumInt {
        sum_part,
        int_part,
        terms,
    })
}

/// Shifted representation of the full density for x < 0 (the transform has
/// the D-ratio factor in both the residue terms and the integral).
pub fn repr_sum_int_neg(x: f64, t: f64, params: &ModelParams, theta_sa: f64) -> Result<SumInt> {
    if x >= 0.0 {
        return Err(Error::Domain("repr_sum_int_neg requires x < 0".into()));
    }
    let beta = params.beta;
    let x0 = params.x0;
    check_theta_sa(theta_sa, params)?;
    let max_n = (-theta_sa).floor() as u32;
    let poles = find_poles(params, max_n)?;
    let mut terms = Vec::new();
    let mut sum_part = 0.0;
    for p in &poles {
        if p.theta <= theta_sa {
            continue;
        }
        let s = (p.theta + beta * beta / 4.0).sqrt();
        let th = Complex64::new(p.theta, 0.0);
        let num = pcf_pair_tol(th, Complex64::new(-beta - x, 0.0), 1e-11)?;
        let den = pcf_pair_tol(th, Complex64::new(-beta, 0.0), 1e-11)?;
        let ratio = num.d.div(&den.d);
        let term = ScaledComplex::from_exp(Complex64::new(
            p.theta * t - x * x / 4.0 + beta * (x0 - x) / 2.0 - x0 * s,
            0.0,
        ))
        .mul(&ratio)
        .to_complex()
        .re
            * p.residue;
        terms.push((p.index, term));
        sum_part += term;
    }
    let spec = ContourSpec::auto(params, x, t);
    let (int_part, _err) = contour_quadrature(theta_sa, t, &spec, |theta| {
        let s = sqrt_shifted(theta, beta);
        let num = pcf_pair_tol(theta, Complex64::new(-beta - x, 0.0), 1e-11)?;
        let den = pcf_pair_tol(theta, Complex64::new(-beta, 0.0), 1e-11)?;
        let r = den.dz.div(&den.d).to_complex();
        let front = ScaledComplex::from_exp(
            Complex64::new(-x * x / 4.0 + beta * (x0 - x) / 2.0, 0.0) - x0 * s,
        )
        .mul_c(1.0 / (s - r));
        Ok(front.mul(&num.d.div(&den.d)))
    })?;
    Ok(SumInt {
        sum_part,
        int_part,
        terms,
    })
}

fn check_theta_sa(theta_sa: f64, params: &ModelParams) -> Result<()> {
    let b2 = params.beta * params.beta / 4.0;
    if !(theta_sa > -b2 && theta_sa < 0.0) {
        return Err(Error::Domain(format!(
            "theta_sa must lie in (-beta^2/4, 0) = ({}, 0), got {theta_sa}",
            -b2
        )));
    }
    // poles sit within e^{-beta^2/2} of the non-positive integers, plus
    // possibly low-lying ones; a coarse margin around integers covers the
    // near-integer family
    if (theta_sa - theta_sa.round()).abs() < 0.02 {
        return Err(Error::NearPole {
            nearest: theta_sa.round(),
        });
    }
    Ok(())
}
