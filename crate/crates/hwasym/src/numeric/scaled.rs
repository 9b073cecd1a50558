//! Scaled-number types.
//!
//! Much of the analysis produces quantities like `eps^(phi/(2 eps))` or
//! `exp(F/eps)` that overflow or underflow `f64` long before the math becomes
//! ill-conditioned. Magnitudes are therefore carried as a mantissa plus a
//! separate natural-log scale and only collapsed to `f64` on demand.

use num_complex::Complex64;

/// Real number stored as `sign * exp(ln_abs)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LnVal {
    pub sign: i8,
    pub ln_abs: f64,
}

impl LnVal {
    pub const ZERO: LnVal = LnVal {
        sign: 0,
        ln_abs: f64::NEG_INFINITY,
    };

    pub fn new(sign: i8, ln_abs: f64) -> Self {
        if sign == 0 || ln_abs == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            LnVal { sign, ln_abs }
        }
    }

    pub fn from_f64(v: f64) -> Self {
        if v == 0.0 {
            Self::ZERO
        } else {
            LnVal {
                sign: if v > 0.0 { 1 } else { -1 },
                ln_abs: v.abs().ln(),
            }
        }
    }

    /// exp(x) as a LnVal, exact in the exponent.
    pub fn from_ln(ln: f64) -> Self {
        LnVal { sign: 1, ln_abs: ln }
    }

    pub fn to_f64(self) -> f64 {
        self.sign as f64 * self.ln_abs.exp()
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    pub fn abs(self) -> Self {
        LnVal::new(self.sign.abs(), self.ln_abs)
    }

    pub fn neg(self) -> Self {
        LnVal::new(-self.sign, self.ln_abs)
    }

    pub fn mul(self, o: LnVal) -> Self {
        LnVal::new(self.sign * o.sign, self.ln_abs + o.ln_abs)
    }

    pub fn div(self, o: LnVal) -> Self {
        LnVal::new(self.sign * o.sign, self.ln_abs - o.ln_abs)
    }

    pub fn scale(self, v: f64) -> Self {
        self.mul(LnVal::from_f64(v))
    }

    /// Signed addition in log space.
    pub fn add(self, o: LnVal) -> Self {
        if self.is_zero() {
            return o;
        }
        if o.is_zero() {
            return self;
        }
        let (hi, lo) = if self.ln_abs >= o.ln_abs {
            (self, o)
        } else {
            (o, self)
        };
        let r = (lo.ln_abs - hi.ln_abs).exp() * (lo.sign * hi.sign) as f64;
        let m = 1.0 + r;
        if m <= 0.0 {
            // exact cancellation (or sign flip below log resolution)
            if m == 0.0 {
                return Self::ZERO;
            }
            return LnVal::new(-hi.sign, hi.ln_abs + m.abs().ln());
        }
        LnVal::new(hi.sign, hi.ln_abs + m.ln())
    }

    pub fn sub(self, o: LnVal) -> Self {
        self.add(o.neg())
    }
}

/// Complex number stored as `m * exp(e)` with `m` kept near unit magnitude.
#[derive(Clone, Copy, Debug)]
pub struct ScaledComplex {
    pub m: Complex64,
    pub e: f64,
}

impl ScaledComplex {
    pub const ZERO: ScaledComplex = ScaledComplex {
        m: Complex64::new(0.0, 0.0),
        e: f64::NEG_INFINITY,
    };

    pub fn new(m: Complex64, e: f64) -> Self {
        ScaledComplex { m, e }.normalized()
    }

    pub fn from_complex(v: Complex64) -> Self {
        Self::new(v, 0.0)
    }

    pub fn from_f64(v: f64) -> Self {
        Self::from_complex(Complex64::new(v, 0.0))
    }

    /// `exp(z)` for complex `z`, kept in scaled form.
    pub fn from_exp(z: Complex64) -> Self {
        ScaledComplex {
            m: Complex64::from_polar(1.0, z.im),
            e: z.re,
        }
    }

    pub fn normalized(self) -> Self {
        let n = self.m.norm();
        if n == 0.0 || !n.is_finite() {
            if n == 0.0 {
                return Self::ZERO;
            }
            return self;
        }
        ScaledComplex {
            m: self.m / n,
            e: self.e + n.ln(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.m.norm() == 0.0
    }

    pub fn to_complex(&self) -> Complex64 {
        self.m * self.e.exp()
    }

    pub fn ln_abs(&self) -> f64 {
        self.e + self.m.norm().ln()
    }

    pub fn mul(&self, o: &ScaledComplex) -> Self {
        Self::new(self.m * o.m, self.e + o.e)
    }

    pub fn div(&self, o: &ScaledComplex) -> Self {
        Self::new(self.m / o.m, self.e - o.e)
    }

    pub fn mul_c(&self, c: Complex64) -> Self {
        Self::new(self.m * c, self.e)
    }

    pub fn neg(&self) -> Self {
        ScaledComplex {
            m: -self.m,
            e: self.e,
        }
    }

    pub fn add(&self, o: &ScaledComplex) -> Self {
        if self.is_zero() {
            return *o;
        }
        if o.is_zero() {
            return *self;
        }
        let (hi, lo) = if self.e >= o.e { (self, o) } else { (o, self) };
        let r = (lo.e - hi.e).exp();
        Self::new(hi.m + lo.m * r, hi.e)
    }

    pub fn sub(&self, o: &ScaledComplex) -> Self {
        self.add(&o.neg())
    }

    /// Real part as a LnVal.
    pub fn re_lnval(&self) -> LnVal {
        if self.m.re == 0.0 {
            return LnVal::ZERO;
        }
        LnVal::new(
            if self.m.re > 0.0 { 1 } else { -1 },
            self.e + self.m.re.abs().ln(),
        )
    }
}
