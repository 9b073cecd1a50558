//! Airy functions Ai, Bi.
//!
//! Strategy: for x >= 9 use the standard asymptotic series (fully converged
//! there); otherwise integrate the Airy ODE y'' = x y by local Taylor series
//! from an anchor, choosing the integration direction in which the target
//! solution is non-decaying (Ai marches down from +9, Bi marches up from 0,
//! both march down from 0 on the negative axis where the ODE is oscillatory).

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Ai(0), Ai'(0), Bi(0), Bi'(0).
const AI0: f64 = 0.355_028_053_887_817_24;
const AIP0: f64 = -0.258_819_403_792_806_80;
const BI0: f64 = 0.614_926_627_446_000_74;
const BIP0: f64 = 0.448_288_357_353_826_36;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AiryKind {
    Ai,
    Bi,
}

/// One Taylor step of y'' = x y from center `a`: returns (y, y') at a + h.
fn taylor_step(a: f64, y: f64, yp: f64, h: f64) -> (f64, f64) {
    const N: usize = 30;
    let mut c = [0.0f64; N];
    c[0] = y;
    c[1] = yp;
    c[2] = a * y / 2.0;
    for k in 1..N - 2 {
        c[k + 2] = (a * c[k] + c[k - 1]) / ((k + 1) as f64 * (k + 2) as f64);
    }
    let mut v = 0.0;
    let mut d = 0.0;
    for k in (1..N).rev() {
        v = v * h + c[k];
        d = d * h + c[k] * k as f64;
    }
    v = v * h + c[0];
    (v, d)
}

/// March (y, y') from `from` to `to`.
fn march(mut x: f64, mut y: f64, mut yp: f64, to: f64) -> (f64, f64) {
    while x != to {
        let scale = (1.0 + x.abs()).sqrt();
        let h_max = (0.5 / scale).min(0.45);
        let h = (to - x).clamp(-h_max, h_max);
        let (ny, nyp) = taylor_step(x, y, yp, h);
        y = ny;
        yp = nyp;
        x += h;
        if (to - x).abs() < 1e-15 {
            x = to;
        }
    }
    (y, yp)
}

/// Asymptotic values of (Ai, Ai', Bi, Bi') for x >= 9.
fn airy_asym_pos(x: f64) -> (f64, f64, f64, f64) {
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    // u_k, v_k expansion coefficients
    let mut su_a = 0.0; // sum (-1)^k u_k zeta^-k
    let mut sv_a = 0.0;
    let mut su_b = 0.0; // sum u_k zeta^-k
    let mut sv_b = 0.0;
    let mut u = 1.0f64;
    let mut sign = 1.0;
    let mut pow = 1.0;
    for k in 0..40u32 {
        if k > 0 {
            let kf = k as f64;
            u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
                / ((2.0 * kf - 1.0) * 216.0 * kf);
            pow /= zeta;
            sign = -sign;
        }
        let v = if k == 0 {
            1.0
        } else {
            u * (6.0 * k as f64 + 1.0) / (1.0 - 6.0 * k as f64)
        };
        let tu = u * pow;
        su_a += sign * tu;
        su_b += tu;
        sv_a += sign * v * pow;
        sv_b += v * pow;
        if tu.abs() < 1e-18 {
            break;
        }
    }
    let q = x.powf(0.25);
    let ai = (-zeta).exp() / (2.0 * PI.sqrt() * q) * su_a;
    let aip = -q * (-zeta).exp() / (2.0 * PI.sqrt()) * sv_a;
    let bi = zeta.exp() / (PI.sqrt() * q) * su_b;
    let bip = q * zeta.exp() / PI.sqrt() * sv_b;
    (ai, aip, bi, bip)
}

/// (Ai, Ai', Bi, Bi') at x; |x| <= 200.
pub fn airy_all(x: f64) -> Result<(f64, f64, f64, f64)> {
    if !x.is_finite() || x.abs() > 200.0 {
        return Err(Error::Domain(format!("airy: |x| <= 200 required, got {x}")));
    }
    if x >= 9.0 {
        return Ok(airy_asym_pos(x));
    }
    if x >= 0.0 {
        // Ai decays: march down from the asymptotic anchor at 9.
        let (a9, ap9, _, _) = airy_asym_pos(9.0);
        let (ai, aip) = march(9.0, a9, ap9, x);
        // Bi grows: march up from 0.
        let (bi, bip) = march(0.0, BI0, BIP0, x);
        return Ok((ai, aip, bi, bip));
    }
    let (ai, aip) = march(0.0, AI0, AIP0, x);
    let (bi, bip) = march(0.0, BI0, BIP0, x);
    Ok((ai, aip, bi, bip))
}

/// Airy function of the requested kind.
pub fn airy(kind: AiryKind, x: f64) -> Result<f64> {
    let (ai, _, bi, _) = airy_all(x)?;
    Ok(match kind {
        AiryKind::Ai => ai,
        AiryKind::Bi => bi,
    })
}
