//! Large-drift asymptotics of the density for X < 0: the saddle and
//! residue-sum solvers, the seven-region dispatch over the strip
//! -1 < X < 0, the Airy layer bridging the slope-reversal curve t*, and the
//! quartic-exponent cusp layer.

pub mod curves;
pub mod cusp;

pub use curves::{caustics_at, t_star_at, Caustics, NegCurves};
pub use cusp::{cusp_density, j_integral, ln_cusp_density};

use crate::error::{Error, Result};
use crate::numeric::{bisect, bisect_log, grow_bracket};
use crate::params::{AsymptoticDensity, Branch, ModelParams, Regime};
use std::f64::consts::PI;

/// Left side of the saddle equation for phi (the outgoing-ray family).
/// Stable for both signs of phi; the log factor is computed from the
/// cancellation-free quotient.
fn saddle_eq(phi: f64, x: f64, t: f64, x0: f64) -> f64 {
    let opx = 1.0 + x;
    let s1 = (1.0 + 4.0 * phi).sqrt();
    let sx = (opx * opx + 4.0 * phi).sqrt();
    let log_term = if opx > 0.0 {
        // (s1 - 1)/(sx - opx) = (sx + opx)/(s1 + 1)
        ((sx + opx) / (s1 + 1.0)).ln()
    } else {
        // 1 + X <= 0: the denominator sx - opx = sx + |opx| has no
        // cancellation; the numerator uses the conjugate form
        (4.0 * phi / (s1 + 1.0)).ln() - (sx - opx).ln()
    };
    t - x0 / s1 + log_term
}

/// Unique saddle phi_s(X, t) of the contour integrand, when it exists
/// (regions reached by an outgoing ray); None once t exceeds t*(X).
///
/// As t approaches t* the root approaches the domain edge -(1+X)^2/4 like
/// (t* - t)^2, so for -1 < X < 0 the equation is solved in the shifted
/// variable u = phi + (1+X)^2/4, where sqrt((1+X)^2 + 4 phi) = 2 sqrt(u)
/// exactly; for X <= -1 the root is positive and possibly exponentially
/// small, handled by bisection in log phi.
pub fn solve_phis(x: f64, t: f64, x0: f64) -> Result<Option<f64>> {
    if !(x < 0.0) {
        return Err(Error::Domain("solve_phis is for X < 0".into()));
    }
    if !(t > 0.0) {
        return Err(Error::Domain("solve_phis needs t > 0".into()));
    }
    let opx = 1.0 + x;
    if opx > 0.0 {
        let ts = t_star_at(x, x0)?;
        if t >= ts {
            return Ok(None);
        }
        let phi_min = -opx * opx / 4.0;
        let s_u = |u: f64| {
            let s1 = (1.0 + 4.0 * (phi_min + u)).sqrt();
            t - x0 / s1 + ((2.0 * u.sqrt() + opx) / (s1 + 1.0)).ln()
        };
        // S(0+) = t - t* < 0 and S grows without bound
        let (a, b) = grow_bracket(&s_u, 1e-30, opx * opx / 4.0 + 0.5, 2.0, 200)?;
        let u = bisect_log(s_u, a.max(1e-300).ln(), b.ln(), 1e-13, 400)?;
        return Ok(Some(phi_min + u));
    }
    // X <= -1: S(0+) = -infinity, root strictly positive
    let f = |phi: f64| saddle_eq(phi, x, t, x0);
    let (a, b) = grow_bracket(&f, 1e-300, 1.0, 2.0, 300)?;
    let root = bisect_log(f, a.max(1e-300).ln(), b.ln(), 1e-13, 500)?;
    Ok(Some(root))
}

/// d(f-tilde)/dz: derivative of the residue-sum exponent. Roots are the
/// interior saddles z1 < z2 < z3 of the sum.
pub fn ftilde_prime(z: f64, x: f64, t: f64, x0: f64) -> f64 {
    let opx = 1.0 + x;
    let u = (1.0 - 4.0 * z).sqrt();
    let sx = (opx * opx - 4.0 * z).sqrt();
    // log[(1+X+sqrt((1+X)^2-4z))/(1-sqrt(1-4z))]; 1 - u = 4z/(1+u)
    -t + x0 / u + ((opx + sx) * (1.0 + u) / (4.0 * z)).ln()
}

/// Second derivative of the residue-sum exponent.
pub fn ftilde_second(z: f64, x: f64, x0: f64) -> f64 {
    let opx = 1.0 + x;
    let u = (1.0 - 4.0 * z).sqrt();
    let sx = (opx * opx - 4.0 * z).sqrt();
    2.0 * x0 / (u * u * u) - 1.0 / (2.0 * z * u) - opx / (2.0 * z * sx)
}

/// f-tilde(z; X, t): eps-scaled exponent of the residue-sum terms.
pub fn ftilde(z: f64, x: f64, t: f64, x0: f64) -> f64 {
    let opx = 1.0 + x;
    let u = (1.0 - 4.0 * z).sqrt();
    let sx = (opx * opx - 4.0 * z).sqrt();
    -x * x / 4.0 - x / 2.0 + x0 / 2.0 - z * t - (x0 / 2.0 + 0.25) * u - opx / 4.0 * sx
        + z * ((opx + sx) * (1.0 + u) / (4.0 * z)).ln()
}

/// Algebraic prefactor of a residue-sum saddle (Laplace method), requiring
/// the saddle to be a local maximum. Returns None on a caustic
/// (ftilde'' >= 0 means the Laplace prefactor is singular there).
pub fn gtilde_prefactor(z: f64, x: f64, x0: f64) -> Option<f64> {
    let fpp = ftilde_second(z, x, x0);
    if fpp >= 0.0 {
        return None;
    }
    let opx = 1.0 + x;
    let u = (1.0 - 4.0 * z).sqrt();
    let sx = (opx * opx - 4.0 * z).sqrt();
    // 1 + X - sx = 4z/(1 + X + sx)
    let g_small = 1.0 / (2.0 * PI) * (1.0 - 4.0 * z).powf(-0.25)
        * (opx * opx - 4.0 * z).powf(-0.25)
        * ((1.0 + u) * (opx + sx) / (4.0 * z)).sqrt();
    Some((2.0 * PI).sqrt() * g_small / (-fpp).sqrt())
}

/// Inflection abscissas z-+ of the residue-sum exponent (real only for
/// X > X_cusp).
pub fn z_inflections(x: f64, x0: f64) -> Option<(f64, f64)> {
    let opx = 1.0 + x;
    let disc = (x0 + 4.0) * opx * opx - 4.0;
    if disc < 0.0 {
        return None;
    }
    let num_base = (x0 + 1.0) * (x0 + 1.0) * opx * opx + 2.0 * (x0 + 1.0) - 3.0 * opx * opx;
    let num_root = x0.powf(1.5) * opx * disc.sqrt();
    let den = 8.0 * (x0 + x + 2.0) * (x0 - x);
    Some(((num_base - num_root) / den, (num_base + num_root) / den))
}

/// All roots of ftilde'(z) = 0 on (0, (1+X)^2/4), in increasing order.
/// The count is 0 in Regions I/III, 1 in II/VI/VII, 2 in IV, 3 in V.
pub fn solve_zroots(x: f64, t: f64, x0: f64) -> Result<Vec<f64>> {
    if !(x > -1.0 && x < 0.0) {
        return Err(Error::Domain("solve_zroots is for X in (-1, 0)".into()));
    }
    let opx = 1.0 + x;
    let top = opx * opx / 4.0;
    let fp = |z: f64| ftilde_prime(z, x, t, x0);
    // breakpoints: monotonicity changes only at the inflections; the
    // smallest root decays like e^{X0 - t}, so the left endpoint tracks it
    let lo = (top * 1e-14).min((x0 - t - 8.0).exp());
    let hi = top * (1.0 - 1e-12);
    let mut pts = vec![lo, hi];
    if let Some((zm, zp)) = z_inflections(x, x0) {
        for z in [zm, zp] {
            if z > lo && z < hi {
                pts.push(z);
            }
        }
    }
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut roots = Vec::new();
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (fa, fb) = (fp(a), fp(b));
        if fa == 0.0 {
            continue;
        }
        if fa.signum() != fb.signum() {
            // the smallest root can be exponentially small: bisect in log z
            let r = if fa > 0.0 && a < 1e-3 {
                bisect_log(fp, a.ln(), b.ln(), 1e-13, 300)?
            } else {
                bisect(fp, a, b, 1e-15, 300)?
            };
            roots.push(r);
        }
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(roots)
}

/// Eps-scaled exponent F(X, t) of the saddle branch.
pub fn exponent_f(x: f64, phis: f64, x0: f64) -> f64 {
    let opx = 1.0 + x;
    let s1 = (1.0 + 4.0 * phis).sqrt();
    let sx = (opx * opx + 4.0 * phis).sqrt();
    -x * x / 4.0 - x / 2.0 + x0 / 2.0 + x0 * phis / s1 - (x0 / 2.0 + 0.25) * s1
        + opx / 4.0 * sx
}

/// Saddle-branch prefactor G(X, t).
pub fn prefactor_g(x: f64, phis: f64, x0: f64) -> Result<f64> {
    let opx = 1.0 + x;
    let q1 = 1.0 + 4.0 * phis;
    let qx = opx * opx + 4.0 * phis;
    if qx <= 0.0 {
        return Err(Error::Domain(
            "prefactor: (1+X)^2 + 4 phi_s must be positive".into(),
        ));
    }
    let s1 = q1.sqrt();
    let sx = qx.sqrt();
    // bracket ratio, stable for 1 + X of either sign
    let ratio = if opx > 0.0 {
        (s1 + 1.0) / (sx + opx)
    } else {
        (s1 + 1.0) * (sx - opx) / (4.0 * phis)
    };
    // (1/(2 phi))(1/s1 - (1+X)/sx) without the phi -> 0 cancellation:
    // equals 2 [1 - (1+X)^2] / (q1 qx (1/s1 + (1+X)/sx))^... use the
    // conjugate-quotient form when 1/s1 + (1+X)/sx is safely positive
    let a = 1.0 / s1;
    let b = opx / sx;
    let curv = if a + b > 0.1 * a {
        2.0 * (1.0 - opx * opx) / (q1 * qx * (a + b))
    } else {
        (a - b) / (2.0 * phis)
    };
    let inner = 2.0 * x0 / (q1 * s1) + curv;
    Ok(1.0 / (2.0 * PI).sqrt() * q1.powf(-0.25) * qx.powf(-0.25) * ratio.sqrt()
        / inner.abs().sqrt())
}

/// F and G for the saddle branch at a point where phi_s exists.
pub fn f_and_g(x: f64, t: f64, phis: f64, x0: f64) -> Result<(f64, f64)> {
    let _ = t;
    Ok((exponent_f(x, phis, x0), prefactor_g(x, phis, x0)?))
}

/// Critical exponent F_c(X) on the slope-reversal curve t*.
pub fn critical_exponent(x: f64, x0: f64) -> f64 {
    let s = (-x * x - 2.0 * x).sqrt();
    -x * x / 4.0 - x / 2.0 + x0 / 2.0 - x0 / (4.0 * s) - (x0 / 4.0 + 0.25) * s
}

/// Airy-layer value bridging the crossing of t* (log form), with
/// Lambda = (t - t*) / eps^{1/3}.
pub fn ln_airy_layer(x: f64, t: f64, params: &ModelParams) -> Result<f64> {
    let x0 = params.x0_scaled;
    let eps = params.eps;
    let opx = 1.0 + x;
    let ts = t_star_at(x, x0)?;
    let lambda = (t - ts) / eps.powf(1.0 / 3.0);
    let q = 1.0 - opx * opx;
    let pref = (1.0 + q.sqrt()).sqrt() / (2.0 * PI.sqrt() * q.powf(0.25));
    Ok(pref.ln() + critical_exponent(x, x0) / eps
        - opx * opx / (4.0 * eps.powf(2.0 / 3.0)) * lambda
        - opx * opx / 12.0 * lambda * lambda * lambda)
}

/// Gaussian layer around the fluid trajectory (X = -1 + e^{X0 - t} +
/// sqrt(eps) Delta); used as a cross-check of the saddle branch.
pub fn ln_gaussian_layer(delta: f64, t: f64, params: &ModelParams) -> f64 {
    let x0 = params.x0_scaled;
    let e2 = (2.0 * (t - x0)).exp();
    let pref = (t - x0).exp() / ((2.0 * PI).sqrt() * (2.0 * x0 + e2 - 1.0).sqrt());
    pref.ln() - e2 / (e2 - 1.0 + 2.0 * x0) * delta * delta / 2.0
}

/// Explicit density law on the t = log(1/eps) + T scale for X < 0.
pub fn ln_density_t_scale_neg(x: f64, t_cap: f64, params: &ModelParams) -> f64 {
    let eps = params.eps;
    let x0 = params.x0_scaled;
    let opx = 1.0 + x;
    -opx * opx / (2.0 * eps) + (x0 - t_cap).exp() * opx - 0.5 * (2.0 * PI).ln()
}

/// Width constant of the t*-layer window in units of eps^{1/3}.
pub const TSTAR_WINDOW: f64 = 3.0;
/// Radius of the cusp-layer window in the scaled (xi, eta) coordinates.
pub const CUSP_WINDOW: f64 = 4.0;

/// Density asymptotics for X < 0 (scaled coordinate): region dispatch with
/// Airy and cusp layers replacing the transitioning branch near t* and near
/// the cusp point.
pub fn density_asym_neg(x: f64, t: f64, params: &ModelParams) -> Result<AsymptoticDensity> {
    if !(x < 0.0) {
        return Err(Error::Domain("density_asym_neg requires X < 0".into()));
    }
    if !(t > 0.0) {
        return Err(Error::Domain("density_asym_neg requires t > 0".into()));
    }
    let x0 = params.x0_scaled;
    let eps = params.eps;
    let curves = NegCurves::new(x0)?;

    // cusp layer first: it sits above t* where both competing descriptions
    // degenerate together. The window is used only when it geometrically
    // fits inside the strip (otherwise the drift is not yet large enough
    // for the layer scaling and the region formulas apply).
    let window_fits = CUSP_WINDOW * eps.sqrt() <= 0.5 * curves.x_cusp.abs();
    if x > -1.0 && window_fits {
        let xi = (x - curves.x_cusp) / eps.sqrt();
        let eta =
            (t - curves.t_cusp - curves.cusp_slope() * (x - curves.x_cusp)) / eps.powf(0.75);
        if (xi * xi + eta * eta).sqrt() <= CUSP_WINDOW {
            let ln = ln_cusp_density(xi, eta, params)?;
            let b = Branch {
                label: "cusp-layer",
                exponent: eps * ln,
                ln_prefactor: 0.0,
                ln_value: ln,
            };
            return Ok(AsymptoticDensity::assemble(
                Regime::CuspLayer,
                vec![b],
                eps,
                true,
            ));
        }
    }
    // Airy layer across t*: the branch that continues from the saddle to
    // the top residue root is replaced by its uniform bridge. Where it is
    // the only branch (regions I/II/III/VII) the point is labeled as layer;
    // in the caustic wedge (IV/V) the persistent z1 branch still
    // contributes and the region label is kept with a boundary flag.
    if x > -1.0 {
        let ts = curves.t_star(x)?;
        if (t - ts).abs() <= TSTAR_WINDOW * eps.powf(1.0 / 3.0) {
            let ln = ln_airy_layer(x, t, params)?;
            let mut branches = vec![Branch {
                label: "t*-layer",
                exponent: eps * ln,
                ln_prefactor: 0.0,
                ln_value: ln,
            }];
            let roots = solve_zroots(x, t, x0)?;
            let mut regime = Regime::TStarLayer;
            if roots.len() >= 2 {
                if let Some(b) = zroot_branch(roots[0], "residue-z1", x, t, params) {
                    branches.push(b);
                    regime = curves.classify(x, t)?;
                }
            }
            return Ok(AsymptoticDensity::assemble(regime, branches, eps, true));
        }
    }

    let regime = if x <= -1.0 {
        Regime::NegI
    } else {
        curves.classify(x, t)?
    };
    let mut branches = Vec::new();
    match regime {
        Regime::NegI | Regime::NegIII => {
            let phis = solve_phis(x, t, x0)?.ok_or_else(|| {
                Error::Domain(format!("saddle absent at (X={x}, t={t}) in {regime}"))
            })?;
            branches.push(saddle_branch(x, t, phis, params)?);
        }
        Regime::NegII | Regime::NegVI => {
            let roots = solve_zroots(x, t, x0)?;
            expect_roots(&roots, 1, x, t)?;
            branches.extend(zroot_branch(roots[0], "residue-z1", x, t, params));
        }
        Regime::NegVII => {
            let roots = solve_zroots(x, t, x0)?;
            expect_roots(&roots, 1, x, t)?;
            branches.extend(zroot_branch(roots[0], "residue-z3", x, t, params));
        }
        Regime::NegV => {
            let roots = solve_zroots(x, t, x0)?;
            expect_roots(&roots, 3, x, t)?;
            branches.extend(zroot_branch(roots[0], "residue-z1", x, t, params));
            branches.extend(zroot_branch(roots[2], "residue-z3", x, t, params));
        }
        Regime::NegIV => {
            let phis = solve_phis(x, t, x0)?.ok_or_else(|| {
                Error::Domain(format!("saddle absent at (X={x}, t={t}) in region IV"))
            })?;
            branches.push(saddle_branch(x, t, phis, params)?);
            let roots = solve_zroots(x, t, x0)?;
            expect_roots(&roots, 2, x, t)?;
            branches.extend(zroot_branch(roots[0], "residue-z1", x, t, params));
        }
        _ => unreachable!("classify returns strip regions only"),
    }
    if branches.is_empty() {
        return Err(Error::Domain(format!(
            "no finite branch at (X={x}, t={t}): caustic contact; use the layer formulas"
        )));
    }
    Ok(AsymptoticDensity::assemble(regime, branches, eps, false))
}

fn expect_roots(roots: &[f64], expected: usize, x: f64, t: f64) -> Result<()> {
    if roots.len() != expected {
        return Err(Error::RootCount {
            expected,
            found: roots.len(),
            where_: format!("residue-sum saddles at (X={x}, t={t})"),
        });
    }
    Ok(())
}

fn saddle_branch(x: f64, t: f64, phis: f64, params: &ModelParams) -> Result<Branch> {
    let x0 = params.x0_scaled;
    let (f, g) = f_and_g(x, t, phis, x0)?;
    Ok(Branch::new("saddle", f, g.ln(), params.eps))
}

fn zroot_branch(z: f64, label: &'static str, x: f64, t: f64, params: &ModelParams) -> Option<Branch> {
    let x0 = params.x0_scaled;
    let g = gtilde_prefactor(z, x, x0)?;
    Some(Branch::new(label, ftilde(z, x, t, x0), g.ln(), params.eps))
}
