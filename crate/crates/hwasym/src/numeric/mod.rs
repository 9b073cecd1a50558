//! Shared numerical machinery: root bracketing, bisection, quadrature.

pub mod gamma;
pub mod scaled;

pub use scaled::{LnVal, ScaledComplex};

use crate::error::{Error, Result};

/// Bisection on [a, b]; requires a sign change. Returns the midpoint of the
/// final bracket. `xtol` is absolute in x.
pub fn bisect<F: FnMut(f64) -> f64>(
    mut f: F,
    mut a: f64,
    mut b: f64,
    xtol: f64,
    max_iter: usize,
) -> Result<f64> {
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Bracket {
            a,
            b,
            what: format!("f(a)={fa:.3e}, f(b)={fb:.3e}"),
        });
    }
    for _ in 0..max_iter {
        let m = 0.5 * (a + b);
        if (b - a).abs() <= xtol || m == a || m == b {
            return Ok(m);
        }
        let fm = f(m);
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Bisection in log space for a root known to be strictly positive; the
/// bracket is [exp(la), exp(lb)]. Useful for roots spanning many decades.
pub fn bisect_log<F: FnMut(f64) -> f64>(
    mut f: F,
    la: f64,
    lb: f64,
    ltol: f64,
    max_iter: usize,
) -> Result<f64> {
    let g = |u: f64| f(u.exp());
    let r = bisect(g, la, lb, ltol, max_iter)?;
    Ok(r.exp())
}

/// Scan [a, b] on `n` points and return all sign-change brackets.
pub fn scan_sign_changes<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    n: usize,
) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut xp = a;
    let mut fp = f(a);
    for k in 1..=n {
        let x = a + (b - a) * k as f64 / n as f64;
        let fx = f(x);
        if fp == 0.0 {
            out.push((xp, xp));
        } else if fx != 0.0 && fp.signum() != fx.signum() {
            out.push((xp, x));
        }
        xp = x;
        fp = fx;
    }
    out
}

/// Adaptive Simpson quadrature for real integrands on a finite interval.
/// `tol` is treated as an absolute tolerance with a floor tied to the
/// magnitude of the running estimate, so deep tail refinement cannot demand
/// accuracy below roundoff.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64> {
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        ((b - a) / 6.0 * (fa + 4.0 * fm + fb), m, fm)
    }
    #[allow(clippy::too_many_arguments)]
    fn rec<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        m: f64,
        fm: f64,
        tol: f64,
        floor: f64,
        depth: u32,
    ) -> Result<f64> {
        let (left, lm, flm) = simpson(f, a, fa, m, fm);
        let (right, rm, frm) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        let goal = tol.max(floor);
        if delta.abs() <= 15.0 * goal {
            return Ok(left + right + delta / 15.0);
        }
        if depth == 0 {
            return Err(Error::Quadrature {
                achieved: delta.abs(),
                requested: goal,
            });
        }
        let l = rec(f, a, fa, m, fm, left, lm, flm, 0.5 * tol, floor, depth - 1)?;
        let r = rec(f, m, fm, b, fb, right, rm, frm, 0.5 * tol, floor, depth - 1)?;
        Ok(l + r)
    }
    let fa = f(a);
    let fb = f(b);
    let (whole, m, fm) = simpson(f, a, fa, b, fb);
    let floor = 1e-15 * whole.abs();
    rec(f, a, fa, b, fb, whole, m, fm, tol, floor, 44)
}

/// Central finite difference of `f` at `x` with step `h`.
pub fn central_diff<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Expand an initial bracket geometrically until `f` changes sign.
/// Direction: grows `b` away from `a`. Returns the bracket.
pub fn grow_bracket<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    mut b: f64,
    factor: f64,
    max_steps: usize,
) -> Result<(f64, f64)> {
    let fa = f(a);
    let mut prev = a;
    for _ in 0..max_steps {
        let fb = f(b);
        if fa.signum() != fb.signum() || fb == 0.0 {
            return Ok((prev, b));
        }
        prev = b;
        b = a + (b - a) * factor;
    }
    Err(Error::Bracket {
        a,
        b,
        what: "bracket growth exhausted".into(),
    })
}
