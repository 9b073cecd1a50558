//! Probabilists' Hermite polynomials He_N and their large-N asymptotics.

use crate::error::{Error, Result};
use crate::numeric::gamma::ln_factorial;
use crate::numeric::LnVal;
use crate::specfun::airy::{airy, AiryKind};

/// He_N(z) by the three-term recurrence, carried in log space so that huge
/// N * log|z| does not overflow.
pub fn hermite_he(n: u32, z: f64) -> LnVal {
    if n == 0 {
        return LnVal::from_f64(1.0);
    }
    // recurrence on plain doubles with periodic rescaling
    let mut prev = 1.0f64; // He_0
    let mut cur = z; // He_1
    let mut ln_scale = 0.0f64;
    for k in 1..n {
        let next = z * cur - k as f64 * prev;
        prev = cur;
        cur = next;
        let m = cur.abs().max(prev.abs());
        if m > 1e250 {
            prev /= m;
            cur /= m;
            ln_scale += m.ln();
        }
    }
    if cur == 0.0 {
        return LnVal::ZERO;
    }
    LnVal::new(if cur > 0.0 { 1 } else { -1 }, cur.abs().ln() + ln_scale)
}

/// He_N(z) as f64 (may overflow for large N).
pub fn hermite_he_f64(n: u32, z: f64) -> f64 {
    hermite_he(n, z).to_f64()
}

/// Result of the Hermite large-N approximation.
#[derive(Clone, Copy, Debug)]
pub enum HermiteAsym {
    /// bulk regime: value = prefactor * exp(log_exponent)
    Bulk { log_exponent: f64, prefactor: f64 },
    /// turning-point regime: Airy form, ln of the value
    AiryForm { ln_value: f64, w: f64 },
}

impl HermiteAsym {
    pub fn ln_value(&self) -> f64 {
        match *self {
            HermiteAsym::Bulk {
                log_exponent,
                prefactor,
            } => log_exponent + prefactor.ln(),
            HermiteAsym::AiryForm { ln_value, .. } => ln_value,
        }
    }
}

/// Large-N approximation of He_N((1+X)/sqrt(eps)) for X in (-1, 0].
///
/// Dispatches on the ratio (1+X)^2/(4 eps N): well above 1 uses the saddle
/// (bulk) form; near 1 uses the Airy turning-point form. In the gap between
/// the two validity windows an error directs the caller to the exact
/// recurrence.
pub fn hermite_asym(n: u32, x_scaled: f64, eps: f64) -> Result<HermiteAsym> {
    if !(x_scaled > -1.0 && x_scaled <= 0.0) {
        return Err(Error::Domain(format!(
            "hermite_asym requires X in (-1, 0], got {x_scaled}"
        )));
    }
    if n == 0 {
        return Err(Error::Domain("hermite_asym requires N >= 1".into()));
    }
    let y = (1.0 + x_scaled) / eps.sqrt();
    let nf = n as f64;
    let ratio = y * y / (4.0 * nf);
    // Airy window: |(1+X)^2/4 - eps N| = O(eps^{2/3}) in scaled variables,
    // i.e. |y^2/4 - N| = O(N^{1/3}) unscaled.
    let w = (y * y / 4.0 - nf) / (y / 2.0).powf(2.0 / 3.0);
    if ratio > 1.02 {
        // bulk saddle form
        let q = y * y / 4.0 - nf;
        let sq = q.sqrt();
        let v = y / 2.0 + sq;
        let log_exponent = nf * v.ln() + y * y / 4.0 - nf / 2.0 - y * sq / 2.0;
        let prefactor = v.sqrt() / (4.0 * q).powf(0.25);
        Ok(HermiteAsym::Bulk {
            log_exponent,
            prefactor,
        })
    } else if w.abs() <= 6.0 {
        // Airy turning-point form
        let ai = airy(AiryKind::Ai, w)?;
        if ai <= 0.0 {
            return Err(Error::Domain(format!(
                "Airy form at a zero of Ai (W = {w})"
            )));
        }
        let ln_value = (1.0 / 6.0 - nf) * std::f64::consts::LN_2
            + 0.5 * std::f64::consts::PI.ln()
            + (nf + 1.0 / 3.0) * y.ln()
            + y * y / 8.0
            + ai.ln();
        Ok(HermiteAsym::AiryForm { ln_value, w })
    } else {
        Err(Error::Domain(format!(
            "hermite_asym gap regime (ratio {ratio:.4}, W {w:.2}); use the exact recurrence"
        )))
    }
}

/// ln|He_N(y)| for the residue-sum asymptotics: convenience wrapper choosing
/// the exact recurrence (cheap for the N used in sums).
pub fn ln_hermite(n: u32, y: f64) -> LnVal {
    hermite_he(n, y)
}

/// Stirling form of ln N!.
pub fn ln_fact(n: u32) -> f64 {
    ln_factorial(n as u64)
}
