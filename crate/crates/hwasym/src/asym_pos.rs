//! Large-drift asymptotics of the density for X >= 0: the implicit saddle
//! z*, the transition curves t1/t2 and the returned-ray caustic t+, the
//! three-regime density dispatch, the residue-sum asymptotics, and the
//! log(1/eps) + T time-scale law.

use crate::error::{Error, Result};
use crate::numeric::{bisect, bisect_log, grow_bracket};
use crate::params::{AsymptoticDensity, Branch, ModelParams, Regime};
use std::f64::consts::PI;

/// Saddle structure of the residue-sum exponent f(z) on (0, 1/4).
#[derive(Clone, Copy, Debug)]
pub struct ZStar {
    /// smaller root of f'(z) = 0: the local maximum used by the density
    pub z_star: f64,
    /// larger root (local minimum; the caustic-tangent returned ray)
    pub z_star2: f64,
    /// abscissa of the minimum of f': 1/(2(X + X0) + 4)
    pub z_tilde: f64,
    /// endpoint saddle phi** = (X + X0)^2/(4 t^2) - 1/4
    pub phi_ss: f64,
}

/// f(z; X, t): eps-scaled exponent of the residue-sum terms.
pub fn f_exponent(z: f64, x: f64, t: f64, x0: f64) -> f64 {
    let u = (1.0 - 4.0 * z).sqrt();
    -z * t - (x + x0) / 2.0 * u + (x0 - x) / 2.0 - 0.5 * u
        + 2.0 * z * ((1.0 + u) / (2.0 * z.sqrt())).ln()
}

/// f'(z; X, t).
pub fn f_prime(z: f64, x: f64, t: f64, x0: f64) -> f64 {
    let u = (1.0 - 4.0 * z).sqrt();
    -t + (x + x0) / u + 2.0 * ((1.0 + u) / (2.0 * z.sqrt())).ln()
}

/// f''(z; X).
pub fn f_second(z: f64, x: f64, x0: f64) -> f64 {
    let u = (1.0 - 4.0 * z).sqrt();
    2.0 * (x + x0) / (u * u * u) - 1.0 / (z * u)
}

/// prefactor g(z) of the residue-sum terms.
pub fn g_prefactor(z: f64) -> f64 {
    let u = (1.0 - 4.0 * z).sqrt();
    (1.0 + u) / (4.0 * PI * u * z.sqrt())
}

/// Caustic of the returned-ray family for X >= 0 (closed form).
pub fn curve_t_plus(x: f64, x0: f64) -> f64 {
    let s = x + x0;
    (s * (s + 2.0)).sqrt() + 2.0 * (((s + 2.0).sqrt() + s.sqrt()) / 2.0_f64.sqrt()).ln()
}

/// Both roots of f'(z) = 0 for t > t+(X; X0).
pub fn solve_zstar(x: f64, t: f64, x0: f64) -> Result<ZStar> {
    if x < 0.0 {
        return Err(Error::Domain("solve_zstar requires X >= 0".into()));
    }
    let tp = curve_t_plus(x, x0);
    let z_tilde = 1.0 / (2.0 * (x + x0) + 4.0);
    let phi_ss = (x + x0) * (x + x0) / (4.0 * t * t) - 0.25;
    if t <= tp {
        if (t - tp).abs() < 1e-12 {
            return Ok(ZStar {
                z_star: z_tilde,
                z_star2: z_tilde,
                z_tilde,
                phi_ss,
            });
        }
        return Err(Error::Domain(format!(
            "no saddle roots: t = {t} <= t+ = {tp}"
        )));
    }
    // f' is +inf at 0+, minimal (negative for t > t+) at z_tilde, and
    // positive again at -phi**: one root on each side
    let fp = |z: f64| f_prime(z, x, t, x0);
    let z_star = bisect_log(fp, -740.0, z_tilde.ln(), 1e-13, 300)?;
    let upper = (-phi_ss).min(0.25 - 1e-15);
    let z_star2 = bisect(fp, z_tilde, upper, 1e-15, 200)?;
    Ok(ZStar {
        z_star,
        z_star2,
        z_tilde,
        phi_ss,
    })
}

/// Transition curve t1: the reflected-ray correction and the z* term trade
/// dominance where -X - (t - X - X0)^2/(4 t) = f(z*).
pub fn curve_t1(x: f64, x0: f64) -> Result<f64> {
    solve_matching(x, x0, |x, t, x0, fz| {
        -x - (t - x - x0) * (t - x - x0) / (4.0 * t) - fz
    })
}

/// Transition curve t2: the Brownian density and the z* term trade
/// dominance where -(t + X - X0)^2/(4 t) = f(z*).
pub fn curve_t2(x: f64, x0: f64) -> Result<f64> {
    solve_matching(x, x0, |x, t, x0, fz| {
        -(t + x - x0) * (t + x - x0) / (4.0 * t) - fz
    })
}

fn solve_matching<M>(x: f64, x0: f64, m: M) -> Result<f64>
where
    M: Fn(f64, f64, f64, f64) -> f64,
{
    if x < 0.0 {
        return Err(Error::Domain("transition curves require X >= 0".into()));
    }
    let tp = curve_t_plus(x, x0);
    let diff = |t: f64| {
        let zs = solve_zstar(x, t, x0).expect("t > t+ inside bracket");
        m(x, t, x0, f_exponent(zs.z_star, x, t, x0))
    };
    let a = tp + 1e-6;
    let (lo, hi) = grow_bracket(diff, a, tp + 0.5, 1.6, 80)?;
    bisect(diff, lo, hi, 1e-11, 200)
}

/// Residual of the closed-form (U-form) implicit equation for t1/t2; used to
/// cross-check the matching-condition solution.
pub fn transition_curve_residual(t: f64, x: f64, x0: f64, first_curve: bool) -> f64 {
    let d = if first_curve {
        (x + x0) * (x + x0)
    } else {
        (x - x0) * (x - x0)
    };
    let q = t + d / t;
    let disc = q * q - 4.0 * (x + x0) * (x + x0 + 2.0);
    if disc < 0.0 {
        return f64::NAN;
    }
    let s = disc.sqrt();
    let num = 2.0 * (x + x0 + 2.0) + q + s;
    let den = 2.0 * (x + x0 + 2.0) - q - s;
    if den <= 0.0 || num <= 0.0 {
        return f64::NAN;
    }
    t - (d / t - s + 2.0 * (num / den).ln())
}

/// Returned-ray (z*) branch of the density, as a Branch.
fn z_star_branch(x: f64, t: f64, params: &ModelParams) -> Result<Branch> {
    let x0 = params.x0_scaled;
    let zs = solve_zstar(x, t, x0)?;
    let z = zs.z_star;
    let u = (1.0 - 4.0 * z).sqrt();
    let pref = (1.0 / (2.0 * (2.0 * PI).sqrt())) * u.sqrt() * (1.0 + u)
        / (1.0 - 4.0 * z - 2.0 * (x + x0) * z).sqrt();
    Ok(Branch::new(
        "returned-ray",
        f_exponent(z, x, t, x0),
        pref.ln(),
        params.eps,
    ))
}

fn bm_branch(x: f64, t: f64, params: &ModelParams) -> Branch {
    let dx = t + x - params.x0_scaled;
    Branch::new(
        "free-space",
        -dx * dx / (4.0 * t),
        -(2.0 * (PI * t).sqrt()).ln(),
        params.eps,
    )
}

fn reflected_branch(x: f64, t: f64, params: &ModelParams) -> Branch {
    let x0 = params.x0_scaled;
    let eps = params.eps;
    let s = x + x0;
    let pref = eps / (4.0 * PI.sqrt()) * t.powf(1.5) * (s + t) / (s * s * s);
    Branch::new(
        "reflected-ray",
        -x - (t - s) * (t - s) / (4.0 * t),
        pref.ln(),
        eps,
    )
}

/// Half-width of the blending window around the transition curves.
pub const TRANSITION_WINDOW: f64 = 0.05;

/// Density asymptotics for X >= 0 (scaled coordinate), dispatching on the
/// transition curves; near a curve both competing branches are summed and
/// the result flagged as a boundary value.
pub fn density_asym_pos(x: f64, t: f64, params: &ModelParams) -> Result<AsymptoticDensity> {
    if x < 0.0 {
        return Err(Error::Domain("density_asym_pos requires X >= 0".into()));
    }
    if !(t > 0.0) {
        return Err(Error::Domain("density_asym_pos requires t > 0".into()));
    }
    let x0 = params.x0_scaled;
    let eps = params.eps;
    let t1 = curve_t1(x, x0)?;
    let t2 = curve_t2(x, x0)?;
    let near_t1 = (t - t1).abs() < TRANSITION_WINDOW;
    let near_t2 = (t - t2).abs() < TRANSITION_WINDOW;
    if t < t1 && !near_t1 {
        let branches = vec![bm_branch(x, t, params), reflected_branch(x, t, params)];
        return Ok(AsymptoticDensity::assemble(
            Regime::PosI,
            branches,
            eps,
            false,
        ));
    }
    if near_t1 {
        let branches = vec![
            bm_branch(x, t, params),
            reflected_branch(x, t, params),
            z_star_branch(x, t, params)?,
        ];
        return Ok(AsymptoticDensity::assemble(
            Regime::PosII,
            branches,
            eps,
            true,
        ));
    }
    if t < t2 && !near_t2 {
        let branches = vec![bm_branch(x, t, params), z_star_branch(x, t, params)?];
        return Ok(AsymptoticDensity::assemble(
            Regime::PosII,
            branches,
            eps,
            false,
        ));
    }
    if near_t2 {
        let branches = vec![bm_branch(x, t, params), z_star_branch(x, t, params)?];
        return Ok(AsymptoticDensity::assemble(
            Regime::PosIII,
            branches,
            eps,
            true,
        ));
    }
    let branches = vec![z_star_branch(x, t, params)?];
    Ok(AsymptoticDensity::assemble(
        Regime::PosIII,
        branches,
        eps,
        false,
    ))
}

/// Asymptotic value of the residue sum alone (the SUM part of the shifted
/// representation): endpoint (geometric-tail) term plus, for t > t+, the
/// interior-maximum term. For t - (X + X0) = O(eps) the few-terms form
/// applies instead. Returns ln(SUM).
pub fn sum_residue_asym(x: f64, t: f64, params: &ModelParams) -> Result<f64> {
    let x0 = params.x0_scaled;
    let eps = params.eps;
    let s = x + x0;
    if t <= s {
        return Err(Error::Domain(format!(
            "residue-sum asymptotics need t > X + X0 = {s}"
        )));
    }
    let t_tilde = (t - s) / eps;
    if t_tilde < 4.0 * s {
        // t - (X + X0) = O(eps): only M + 1 poles contribute and the last
        // dominates
        let m = (t_tilde / (2.0 * s)).floor();
        let ln = -m * eps.ln() - 0.5 * (2.0 * PI).ln()
            - crate::numeric::gamma::ln_factorial(m as u64)
            - (x + 0.5) / eps;
        return Ok(ln);
    }
    // endpoint term
    let n_tilde = ((t * t - s * s) / (4.0 * eps * t * t)).floor();
    let zn = eps * n_tilde;
    let f_end = f_exponent(zn, x, t, x0);
    let ln_end = eps.sqrt().ln() + (t / (4.0 * PI)).ln() + 1.5 * (t + s).ln()
        - 0.5 * (t - s).ln()
        - 2.0 * s.ln()
        + f_end / eps;
    let tp = curve_t_plus(x, x0);
    if t <= tp {
        return Ok(ln_end);
    }
    let zs = solve_zstar(x, t, x0)?;
    let ln_star = (2.0 * PI).sqrt().ln() + g_prefactor(zs.z_star).ln()
        - 0.5 * (-f_second(zs.z_star, x, x0)).ln()
        + f_exponent(zs.z_star, x, t, x0) / eps;
    // ln(e^a + e^b)
    let m = ln_end.max(ln_star);
    Ok(m + ((ln_end - m).exp() + (ln_star - m).exp()).ln())
}

/// eps-scaled exponent of the shifted-contour integral term (the
/// reflected-ray correction).
pub fn int_term_exponent(x: f64, t: f64, x0: f64) -> f64 {
    -x - (t - x - x0) * (t - x - x0) / (4.0 * t)
}

/// Explicit density law on the t = log(1/eps) + T time scale.
pub fn density_t_scale_pos(x: f64, t_cap: f64, params: &ModelParams) -> f64 {
    ln_density_t_scale_pos(x, t_cap, params).exp()
}

pub fn ln_density_t_scale_pos(x: f64, t_cap: f64, params: &ModelParams) -> f64 {
    let eps = params.eps;
    let x0 = params.x0_scaled;
    -(x + 0.5) / eps + (-(t_cap - x - x0)).exp() - 0.5 * (2.0 * PI).ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(beta: f64, x0s: f64) -> ModelParams {
        ModelParams::from_scaled(beta, x0s).unwrap()
    }

    #[test]
    fn t_plus_closed_form() {
        // X=0, X0=1: sqrt(3) + 2 log((sqrt3 + 1)/sqrt2)
        let v = curve_t_plus(0.0, 1.0);
        let expect = 3.0f64.sqrt() + 2.0 * ((3.0f64.sqrt() + 1.0) / 2.0f64.sqrt()).ln();
        assert!((v - expect).abs() < 1e-14);
        assert!((v - 3.049_009).abs() < 1e-5);
        // increasing in X
        let mut prev = 0.0;
        for k in 0..30 {
            let x = 0.1 * k as f64;
            let v = curve_t_plus(x, 1.0);
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn zstar_double_root_at_t_plus() {
        let (x, x0) = (0.5, 1.0);
        let tp = curve_t_plus(x, x0);
        let zs = solve_zstar(x, tp, x0).unwrap();
        let zt = 1.0 / (2.0 * (x + x0) + 4.0);
        assert!((zs.z_star - zt).abs() < 1e-10);
        assert!((zs.z_star2 - zt).abs() < 1e-10);
        assert!(solve_zstar(x, tp - 0.01, x0).is_err());
    }

    #[test]
    fn zstar_large_t_law() {
        // z* ~ e^{-t} e^{X+X0}
        let (x, x0, t) = (0.5, 1.0, 20.0);
        let zs = solve_zstar(x, t, x0).unwrap();
        let law = (-t + x + x0).exp();
        assert!(
            (zs.z_star / law - 1.0).abs() < 0.1,
            "z* {} vs law {law}",
            zs.z_star
        );
        // f(z*) -> -1/2 - X
        let f25 = f_exponent(solve_zstar(x, 25.0, x0).unwrap().z_star, x, 25.0, x0);
        assert!((f25 - (-0.5 - x)).abs() < 1e-3, "f(z*) at t=25: {f25}");
    }

    #[test]
    fn zstar_residual_and_ordering() {
        for &(x, t) in &[(0.2, 4.0), (1.0, 6.0), (0.0, 3.2)] {
            let x0 = 1.0;
            let zs = solve_zstar(x, t, x0).unwrap();
            assert!(zs.z_star < zs.z_tilde && zs.z_tilde < zs.z_star2);
            assert!(zs.z_star2 < -zs.phi_ss + 1e-12);
            // defining-equation residual
            let r = t
                - ((x + x0) / (1.0 - 4.0 * zs.z_star).sqrt()
                    + 2.0
                        * ((1.0 + (1.0 - 4.0 * zs.z_star).sqrt()) / (2.0 * zs.z_star.sqrt()))
                            .ln());
            assert!(r.abs() < 1e-11, "residual {r}");
            // z* is a local max
            assert!(f_second(zs.z_star, x, x0) < 0.0);
        }
    }

    #[test]
    fn f_prime_at_endpoint_saddle() {
        // f'(-phi**) = 2 log((t + X + X0)/sqrt(t^2 - (X+X0)^2)) > 0
        let (x, x0, t): (f64, f64, f64) = (0.3, 1.0, 2.5);
        let phi = (x + x0) * (x + x0) / (4.0 * t * t) - 0.25;
        let expect = 2.0 * ((t + x + x0) / (t * t - (x + x0) * (x + x0)).sqrt()).ln();
        let got = f_prime(-phi, x, t, x0);
        assert!((got - expect).abs() < 1e-12, "{got} vs {expect}");
        assert!(got > 0.0);
    }

    #[test]
    fn transition_curves_coincide_at_x_zero() {
        for &x0 in &[0.2, 1.0, 5.0] {
            let t1 = curve_t1(0.0, x0).unwrap();
            let t2 = curve_t2(0.0, x0).unwrap();
            assert!((t1 - t2).abs() < 1e-8, "X0={x0}: t1 {t1} vs t2 {t2}");
        }
    }

    #[test]
    fn transition_curves_ordering_and_residuals() {
        let (x, x0) = (0.7, 1.0);
        let t1 = curve_t1(x, x0).unwrap();
        let t2 = curve_t2(x, x0).unwrap();
        let tp = curve_t_plus(x, x0);
        assert!(tp < t1 && t1 < t2, "tp {tp} t1 {t1} t2 {t2}");
        // U-form residuals vanish on the solved curves
        let r1 = transition_curve_residual(t1, x, x0, true);
        let r2 = transition_curve_residual(t2, x, x0, false);
        assert!(r1.abs() < 1e-8, "t1 U-form residual {r1}");
        assert!(r2.abs() < 1e-8, "t2 U-form residual {r2}");
        // matching-condition residual at (0.7, 1.0)
        let zs = solve_zstar(x, t2, x0).unwrap();
        let m2 =
            -(t2 + x - x0) * (t2 + x - x0) / (4.0 * t2) - f_exponent(zs.z_star, x, t2, x0);
        assert!(m2.abs() < 1e-9, "t2 matching residual {m2}");
    }

    #[test]
    fn curve_structure_on_grid() {
        // t+(X) < t1(X) < t2(X) except X = 0 where t1 = t2
        for &x0 in &[0.2, 1.0, 5.0] {
            for k in 1..=10 {
                let x = 0.2 * k as f64;
                let tp = curve_t_plus(x, x0);
                let t1 = curve_t1(x, x0).unwrap();
                let t2 = curve_t2(x, x0).unwrap();
                assert!(tp < t1 && t1 < t2, "x={x} x0={x0}");
            }
        }
    }

    #[test]
    fn regime_i_correction_is_subdominant() {
        let p = params(6.0, 1.0);
        let d = density_asym_pos(0.5, 0.8, &p).unwrap();
        assert_eq!(d.regime, Regime::PosI);
        assert_eq!(d.branches[d.dominant].label, "free-space");
        let ratio = d.branches[1].ln_value - d.branches[0].ln_value;
        assert!(ratio < 0.0, "reflected ray not subdominant: {ratio}");
    }

    #[test]
    fn dominance_inequality_in_regime_ii() {
        // the endpoint term never beats the free-space density in regime ii
        let x0 = 1.0;
        for i in 0..20 {
            let x = 0.05 + 0.1 * i as f64;
            let t1 = curve_t1(x, x0).unwrap();
            let t2 = curve_t2(x, x0).unwrap();
            for j in 1..=20 {
                let t = t1 + (t2 - t1) * j as f64 / 21.0;
                let lhs = x + (x + x0) / (2.0 * t);
                let ratio = (t + x + x0) / (t * t - (x + x0) * (x + x0)).sqrt();
                let rhs = 0.5 * (1.0 - (x + x0) * (x + x0) / (t * t)) * ratio.ln();
                assert!(lhs > rhs, "inequality fails at x={x} t={t}");
            }
        }
    }

    #[test]
    fn continuity_across_transitions() {
        // summed two-term value is continuous in t across t1 and t2
        let p = params(8.0, 1.0);
        let x = 0.5;
        let x0 = 1.0;
        for tc in [curve_t1(x, x0).unwrap(), curve_t2(x, x0).unwrap()] {
            let below = density_asym_pos(x, tc - 1e-4, &p).unwrap();
            let above = density_asym_pos(x, tc + 1e-4, &p).unwrap();
            let rel = (below.ln_value - above.ln_value).abs();
            assert!(rel < 1e-2, "jump {rel} across t = {tc}");
        }
    }

    #[test]
    fn t_scale_limits() {
        let p = params(8.0, 1.0);
        let x = 0.3;
        // T -> infinity: steady-state x > 0 form e^{-(X + 1/2)/eps}/sqrt(2 pi)
        let big = ln_density_t_scale_pos(x, 30.0, &p);
        let steady = -(x + 0.5) / p.eps - 0.5 * (2.0 * PI).ln();
        assert!((big - steady).abs() < 1e-10);
        // partial sums of the exponential series converge to the law
        let t_cap = 1.0;
        let arg = -(t_cap - x - p.x0_scaled);
        let series: f64 = (0..40)
            .map(|n| (n as f64 * arg - crate::numeric::gamma::ln_factorial(n)).exp())
            .sum();
        let expect = density_t_scale_pos(x, t_cap, &p);
        let direct = series * (-(x + 0.5) / p.eps).exp() / (2.0 * PI).sqrt();
        assert!((direct / expect - 1.0).abs() < 1e-12, "{direct} vs {expect}");
        // regime-iii formula at t = log(1/eps) + T approaches the law
        let t = (1.0 / p.eps).ln() + t_cap;
        let d = density_asym_pos(x, t, &p).unwrap();
        let rel = (d.ln_value - ln_density_t_scale_pos(x, t_cap, &p)) / d.ln_value.abs();
        assert!(rel.abs() < 1e-2, "rel {rel}");
    }

    #[test]
    fn sum_residue_floor_form() {
        // t = X + X0 + 2 eps (X+X0) * 1.5 -> M = 1
        let p = params(5.0, 1.0);
        let x = 0.3;
        let s = x + p.x0_scaled;
        let t = s + 2.0 * p.eps * s * 1.5;
        let ln = sum_residue_asym(x, t, &p).unwrap();
        let expect = -p.eps.ln() - 0.5 * (2.0 * PI).ln() - (x + 0.5) / p.eps;
        assert!((ln - expect).abs() < 1e-10, "{ln} vs {expect}");
    }

    #[test]
    fn endpoint_dominated_by_integral_term() {
        // ENDPOINT < saddle-integral term for X + X0 < t < t+
        let (x, x0) = (0.3, 1.0);
        let t = 1.8;
        assert!(t > x + x0 && t < curve_t_plus(x, x0));
        let p = params(6.0, x0);
        let ln_sum = sum_residue_asym(x, t, &p).unwrap();
        let ln_int = int_term_exponent(x, t, x0) / p.eps;
        assert!(
            ln_sum < ln_int,
            "endpoint {ln_sum} should lie below integral exponent {ln_int}"
        );
    }

    #[test]
    fn sum_asym_matches_exact_sum() {
        // against the exact residue sum of the shifted representation at
        // beta = 4, improving at beta = 6
        let (x_s, t) = (0.3, 2.6);
        let mut errs = Vec::new();
        for &beta in &[4.0f64, 6.0] {
            let p = params(beta, 1.0);
            let x = p.from_scaled_x(x_s);
            let mut theta_sa =
                -(0.25 - (x_s + 1.0) * (x_s + 1.0) / (4.0 * t * t)) / p.eps;
            if (theta_sa - theta_sa.round()).abs() < 0.05 {
                theta_sa += 0.3;
            }
            let si = crate::inversion::repr_sum_int_pos(x, t, &p, theta_sa).unwrap();
            let ln_asym = sum_residue_asym(x_s, t, &p).unwrap();
            let err = (ln_asym - si.sum_part.ln()).abs() / si.sum_part.ln().abs();
            errs.push(err);
            assert!(err < 0.3, "beta={beta}: rel log err {err}");
        }
        assert!(errs[1] < errs[0], "no improvement: {errs:?}");
    }
}
