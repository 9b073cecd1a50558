//! Geometry of the strip -1 < X < 0: the slope-reversal curve t*, the
//! caustics t_c/t_d with their cusp point, the numeric intersection X* of
//! t* and t_d, the dominance-exchange curve t_Gamma, and the region
//! classification.

use crate::error::{Error, Result};
use crate::numeric::bisect;
use crate::params::Regime;

/// Per-X0 curve data; construction solves for the intersection X* once.
#[derive(Clone, Copy, Debug)]
pub struct NegCurves {
    pub x0: f64,
    pub x_cusp: f64,
    pub t_cusp: f64,
    pub alpha_cusp: f64,
    /// abscissa where t* and t_d intersect
    pub x_star: f64,
    /// common value t*(X*) = t_d(X*)
    pub t_starstar: f64,
}

/// Caustic data at one abscissa.
#[derive(Clone, Copy, Debug)]
pub struct Caustics {
    pub t_c: f64,
    pub t_d: f64,
    pub alpha_c: f64,
    pub alpha_d: f64,
}

impl NegCurves {
    pub fn new(x0: f64) -> Result<Self> {
        if !(x0 > 0.0) {
            return Err(Error::Domain("curves need X0 > 0".into()));
        }
        let x_cusp = -1.0 + 2.0 / (x0 + 4.0).sqrt();
        let alpha_cusp = (x0 * (x0 + 3.0)).sqrt();
        let t_cusp = alpha_cusp + ((x0 + 2.0 + alpha_cusp) / (x0 + 4.0).sqrt()).ln();
        // X*: t*(X) - t_d(X) changes sign on (x_cusp, 0)
        let f = |x: f64| {
            let ts = t_star_at(x, x0).unwrap_or(f64::NAN);
            let td = caustics_at(x, x0).map(|c| c.t_d).unwrap_or(f64::NAN);
            ts - td
        };
        let lo = x_cusp + 1e-9 * (1.0 + x_cusp.abs());
        let hi = -1e-12;
        // t* < t_cusp = t_d at the cusp; t* -> inf while t_d stays finite
        // toward 0, so exactly one crossing
        let x_star = bisect(f, lo, hi, 1e-12, 200)?;
        let t_starstar = t_star_at(x_star, x0)?;
        Ok(NegCurves {
            x0,
            x_cusp,
            t_cusp,
            alpha_cusp,
            x_star,
            t_starstar,
        })
    }

    pub fn t_star(&self, x: f64) -> Result<f64> {
        t_star_at(x, self.x0)
    }

    pub fn caustics(&self, x: f64) -> Result<Caustics> {
        caustics_at(x, self.x0)
    }

    /// Limit of the lower caustic at X -> 0-.
    pub fn t_d_zero(&self) -> f64 {
        let x0 = self.x0;
        (x0 * (x0 + 2.0)).sqrt()
            + (((x0 + 2.0).sqrt() + x0.sqrt()) / ((x0 + 2.0).sqrt() - x0.sqrt())).ln()
    }

    /// Common slope of the caustics at the cusp point.
    pub fn cusp_slope(&self) -> f64 {
        ((self.x0 + 3.0) * (self.x0 + 4.0) / self.x0).sqrt()
    }

    /// Open-set region classification; exact boundary points are assigned to
    /// the region above (larger t side).
    pub fn classify(&self, x: f64, t: f64) -> Result<Regime> {
        if !(t > 0.0) {
            return Err(Error::Domain("classification needs t > 0".into()));
        }
        if !(x < 0.0) {
            return Err(Error::Domain("classification is for X < 0".into()));
        }
        if x <= -1.0 {
            return Ok(Regime::NegI);
        }
        if x <= self.x_cusp {
            let ts = self.t_star(x)?;
            return Ok(if t < ts { Regime::NegI } else { Regime::NegII });
        }
        let ts = self.t_star(x)?;
        let c = self.caustics(x)?;
        if t < ts.min(c.t_d) {
            return Ok(Regime::NegIII);
        }
        if t >= c.t_c {
            return Ok(Regime::NegVI);
        }
        if x <= self.x_star {
            // here t* <= t_d
            if t < c.t_d {
                Ok(Regime::NegVII)
            } else {
                Ok(Regime::NegV)
            }
        } else {
            // here t_d <= t*
            if t < ts {
                Ok(Regime::NegIV)
            } else {
                Ok(Regime::NegV)
            }
        }
    }

    /// Dominance-exchange curve within the caustic wedge: the exponent of
    /// the z1 branch equals that of the competing branch (the saddle branch
    /// below t*, the z3 branch above).
    pub fn t_gamma(&self, x: f64) -> Result<f64> {
        let x0 = self.x0;
        if !(x > self.x_cusp && x < 0.0) {
            return Err(Error::Domain(format!(
                "t_gamma defined on (x_cusp, 0) = ({}, 0), got {x}",
                self.x_cusp
            )));
        }
        let c = self.caustics(x)?;
        let ts = self.t_star(x)?;
        let diff = |t: f64| -> f64 {
            let roots = super::solve_zroots(x, t, x0).unwrap_or_default();
            if roots.is_empty() {
                return f64::NAN;
            }
            let z1 = roots[0];
            let own = super::ftilde(z1, x, t, x0);
            let other = if t < ts {
                match super::solve_phis(x, t, x0) {
                    Ok(Some(phis)) => super::exponent_f(x, phis, x0),
                    _ => f64::NAN,
                }
            } else {
                let z3 = *roots.last().unwrap();
                super::ftilde(z3, x, t, x0)
            };
            own - other
        };
        let margin = 1e-7 * (1.0 + c.t_c.abs());
        bisect(diff, c.t_d + margin, c.t_c - margin, 1e-10, 200)
    }
}

/// t*(X; X0): locus where rays reverse slope; diverges at both strip edges.
pub fn t_star_at(x: f64, x0: f64) -> Result<f64> {
    if !(x > -1.0 && x < 0.0) {
        return Err(Error::Domain(format!(
            "t* is defined for X in (-1, 0), got {x}"
        )));
    }
    let q = -2.0 * x - x * x; // 1 - (1+X)^2 in (0, 1)
    let s = q.sqrt();
    Ok(x0 / s + ((1.0 + x) / (1.0 - s)).ln())
}

/// Closed-form caustic pair at X in (X_cusp, 0).
pub fn caustics_at(x: f64, x0: f64) -> Result<Caustics> {
    let disc = (x * x + 2.0 * x) * (x0 + 4.0) + x0;
    if disc < 0.0 {
        return Err(Error::Domain(format!(
            "caustics exist only for X > X_cusp (discriminant {disc} < 0)"
        )));
    }
    if !(x < 0.0) {
        return Err(Error::Domain("caustics are defined for X < 0".into()));
    }
    let root = x0.sqrt() * (x + 1.0) * disc.sqrt();
    let base = -x * (x0 + 2.0) * (x + 2.0) + x0;
    let scale = (x0 / (-2.0 * x * (x + 2.0))).sqrt();
    let alpha_c = (base + root).sqrt() * scale;
    let alpha_d = (base - root).sqrt() * scale;
    let t_of_alpha = |a: f64| -> f64 {
        a + ((x + 1.0 + ((x + 1.0) * (x + 1.0) + x0 * x0 / (a * a) - 1.0).sqrt())
            / (1.0 - x0 / a))
            .ln()
    };
    Ok(Caustics {
        t_c: t_of_alpha(alpha_c),
        t_d: t_of_alpha(alpha_d),
        alpha_c,
        alpha_d,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t_star_closed_form_value() {
        // X0=1, X=-0.5: 1/sqrt(0.75) + log(0.5/(1 - sqrt(0.75)))
        let v = t_star_at(-0.5, 1.0).unwrap();
        let expect = 1.0 / 0.75f64.sqrt() + (0.5 / (1.0 - 0.75f64.sqrt())).ln();
        assert!((v - expect).abs() < 1e-14);
        assert!((v - 2.4717).abs() < 1e-4);
        assert!(t_star_at(-1.0, 1.0).is_err());
        assert!(t_star_at(0.0, 1.0).is_err());
    }

    #[test]
    fn t_star_asymptotes() {
        // X -> 0-: t* ~ X0 / sqrt(-2X)
        let x = -1e-4;
        let v = t_star_at(x, 1.0).unwrap();
        let law = 1.0 / (-2.0 * x).sqrt();
        assert!((v * (-2.0 * x).sqrt() - 1.0).abs() < 0.01, "{v} vs {law}");
        // X -> -1+: t* = -log(1+X) + log 2 + X0 + o(1)
        let x = -1.0 + 1e-5;
        let v = t_star_at(x, 1.0).unwrap();
        let law = -(1.0 + x).ln() + 2.0f64.ln() + 1.0;
        assert!((v - law).abs() < 0.01 * v.abs(), "{v} vs {law}");
    }

    #[test]
    fn cusp_point_and_coincidence() {
        let c = NegCurves::new(1.0).unwrap();
        assert!((c.x_cusp - (-1.0 + 2.0 / 5.0f64.sqrt())).abs() < 1e-14);
        assert!((c.x_cusp + 0.105_573).abs() < 1e-6);
        assert!((c.t_cusp - (2.0 + 5.0f64.sqrt().ln())).abs() < 1e-12);
        assert!((c.t_cusp - 2.804_72).abs() < 1e-5);
        // caustics coincide at the cusp with alpha = sqrt(X0 (X0+3)) = 2
        let just = c.caustics(c.x_cusp + 1e-9).unwrap();
        assert!((just.alpha_c - 2.0).abs() < 1e-4);
        assert!((just.alpha_d - 2.0).abs() < 1e-4);
        assert!((just.t_c - c.t_cusp).abs() < 1e-4);
        assert!((just.t_d - c.t_cusp).abs() < 1e-4);
        // t_cusp > t*(x_cusp)
        assert!(c.t_cusp > c.t_star(c.x_cusp + 1e-12).unwrap());
    }

    #[test]
    fn caustic_limits_at_zero() {
        let c = NegCurves::new(1.0).unwrap();
        // t_d -> sqrt(3) + log((sqrt3+1)/(sqrt3-1)) ~ 3.049009 as X -> 0-
        let v = c.caustics(-1e-7).unwrap();
        assert!((v.t_d - c.t_d_zero()).abs() < 1e-3, "{} vs {}", v.t_d, c.t_d_zero());
        assert!((c.t_d_zero() - 3.049_009).abs() < 1e-5);
        // alpha_d -> sqrt(X0 (X0+2)) = sqrt(3)
        assert!((v.alpha_d - 3.0f64.sqrt()).abs() < 1e-4);
        // equals the positive-side caustic at X = 0
        let tp = crate::asym_pos::curve_t_plus(0.0, 1.0);
        assert!((c.t_d_zero() - tp).abs() < 1e-12);
    }

    #[test]
    fn cusp_tangency_common_slope() {
        let c = NegCurves::new(1.0).unwrap();
        let slope = c.cusp_slope();
        assert!((slope - (4.0f64 * 5.0).sqrt()).abs() < 1e-12);
        // finite-difference slopes of t_c and t_d approach the common value
        let h1 = 1e-4;
        let h2 = 2e-4;
        let c1 = c.caustics(c.x_cusp + h1).unwrap();
        let c2 = c.caustics(c.x_cusp + h2).unwrap();
        let sc = (c2.t_c - c1.t_c) / (h2 - h1);
        let sd = (c2.t_d - c1.t_d) / (h2 - h1);
        // one-sided slopes converge like sqrt(h); loose check plus trend
        assert!((sc - slope).abs() < 1.0, "t_c slope {sc} vs {slope}");
        assert!((sd - slope).abs() < 1.0, "t_d slope {sd} vs {slope}");
        let c3 = c.caustics(c.x_cusp + h1 / 4.0).unwrap();
        let c4 = c.caustics(c.x_cusp + h1 / 2.0).unwrap();
        let sc2 = (c4.t_c - c3.t_c) / (h1 / 4.0);
        assert!((sc2 - slope).abs() < (sc - slope).abs());
    }

    #[test]
    fn x_star_intersection() {
        let c = NegCurves::new(1.0).unwrap();
        assert!(c.x_star > c.x_cusp && c.x_star < 0.0);
        let ts = c.t_star(c.x_star).unwrap();
        let td = c.caustics(c.x_star).unwrap().t_d;
        assert!((ts - td).abs() < 1e-9, "t* {ts} vs t_d {td}");
        assert!((ts - c.t_starstar).abs() < 1e-12);
    }

    #[test]
    fn fluid_lies_below_all_curves() {
        let c = NegCurves::new(1.0).unwrap();
        for k in 1..40 {
            let x = -0.975 + 0.025 * k as f64;
            if x >= 0.0 {
                break;
            }
            let t_fluid = 1.0 - (1.0 + x).ln();
            let ts = c.t_star(x).unwrap();
            assert!(t_fluid < ts, "fluid above t* at {x}");
            if x > c.x_cusp {
                let ca = c.caustics(x).unwrap();
                assert!(t_fluid < ca.t_d && t_fluid < ca.t_c, "fluid above caustic at {x}");
            }
        }
    }

    #[test]
    fn region_classification_examples() {
        let c = NegCurves::new(1.0).unwrap();
        assert_eq!(c.classify(-0.5, 1.0).unwrap(), Regime::NegI);
        assert_eq!(c.classify(-0.5, 3.0).unwrap(), Regime::NegII);
        assert_eq!(c.classify(-1.7, 9.0).unwrap(), Regime::NegI);
        assert_eq!(c.classify(-3.0, 0.2).unwrap(), Regime::NegI);
        // region III below both curves, X in (x_cusp, 0)
        assert_eq!(c.classify(-0.05, 1.0).unwrap(), Regime::NegIII);
        // region VI above t_c
        let ca = c.caustics(-0.05).unwrap();
        assert_eq!(c.classify(-0.05, ca.t_c + 0.5).unwrap(), Regime::NegVI);
        // region V between
        let ts = c.t_star(-0.05).unwrap();
        let tv = 0.5 * (ts.max(ca.t_d) + ca.t_c);
        assert_eq!(c.classify(-0.05, tv).unwrap(), Regime::NegV);
        // region IV: X > X*, t_d < t < t*
        let x = 0.5 * c.x_star;
        let ca = c.caustics(x).unwrap();
        let ts = c.t_star(x).unwrap();
        assert!(ca.t_d < ts);
        assert_eq!(
            c.classify(x, 0.5 * (ca.t_d + ts.min(ca.t_c))).unwrap(),
            Regime::NegIV
        );
        // region VII: X < X*, t* < t < t_d
        let x = c.x_cusp + 0.25 * (c.x_star - c.x_cusp);
        let ca = c.caustics(x).unwrap();
        let ts = c.t_star(x).unwrap();
        assert!(ts < ca.t_d);
        assert_eq!(c.classify(x, 0.5 * (ts + ca.t_d)).unwrap(), Regime::NegVII);
    }

    #[test]
    fn t_gamma_ordering_and_limits() {
        let c = NegCurves::new(1.0).unwrap();
        // t_d < t_gamma < t_c at X = -0.05
        let x = -0.05;
        let tg = c.t_gamma(x).unwrap();
        let ca = c.caustics(x).unwrap();
        assert!(ca.t_d < tg && tg < ca.t_c, "{} {tg} {}", ca.t_d, ca.t_c);
        // X -> x_cusp+: t_gamma -> t_cusp
        let tg = c.t_gamma(c.x_cusp + 2e-4).unwrap();
        assert!((tg - c.t_cusp).abs() < 1e-3, "{tg} vs {}", c.t_cusp);
        // X -> 0-: t_gamma -> t1(0; X0)
        let tg = c.t_gamma(-2e-4).unwrap();
        let t1 = crate::asym_pos::curve_t1(0.0, 1.0).unwrap();
        assert!((tg - t1).abs() < 1e-3, "{tg} vs {t1}");
    }

    #[test]
    fn dominance_along_caustics() {
        // at t = t_d the z3 branch dominates; at t = t_c the z1 branch does
        let c = NegCurves::new(1.0).unwrap();
        let x = -0.05;
        let ca = c.caustics(x).unwrap();
        let x0 = 1.0;
        let just_above_td = ca.t_d + 1e-4;
        let roots = super::super::solve_zroots(x, just_above_td, x0).unwrap();
        if roots.len() == 3 {
            let f1 = super::super::ftilde(roots[0], x, just_above_td, x0);
            let f3 = super::super::ftilde(roots[2], x, just_above_td, x0);
            assert!(f3 > f1, "z3 should dominate just above t_d");
        }
        let just_below_tc = ca.t_c - 1e-4;
        let roots = super::super::solve_zroots(x, just_below_tc, x0).unwrap();
        assert_eq!(roots.len(), 3);
        let f1 = super::super::ftilde(roots[0], x, just_below_tc, x0);
        let f3 = super::super::ftilde(roots[2], x, just_below_tc, x0);
        assert!(f1 > f3, "z1 should dominate just below t_c");
    }
}
