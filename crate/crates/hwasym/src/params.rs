//! Global problem instance and shared result types.

use crate::error::{Error, Result};
use serde::Serialize;

/// Problem parameters: drift `beta`, the small parameter `eps = beta^-2`,
/// and the initial state in both the original (`x0`) and drift-scaled (`x0
/// / beta`) coordinates. Positions are always densities in the original `x`
/// variable; the scaled coordinate is `X = x * sqrt(eps) = x / beta`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ModelParams {
    pub beta: f64,
    pub eps: f64,
    pub x0: f64,
    pub x0_scaled: f64,
}

impl ModelParams {
    pub fn new(beta: f64, x0: f64) -> Result<Self> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::Domain(format!("beta must be positive, got {beta}")));
        }
        if !(x0 >= 0.0) || !x0.is_finite() {
            return Err(Error::Domain(format!("x0 must be >= 0, got {x0}")));
        }
        let eps = 1.0 / (beta * beta);
        Ok(ModelParams {
            beta,
            eps,
            x0,
            x0_scaled: x0 / beta,
        })
    }

    /// Construct from the scaled initial condition `X0 = x0 / beta`.
    pub fn from_scaled(beta: f64, x0_scaled: f64) -> Result<Self> {
        Self::new(beta, x0_scaled * beta)
    }

    /// Scaled space coordinate of a point x.
    pub fn to_scaled(&self, x: f64) -> f64 {
        x / self.beta
    }

    pub fn from_scaled_x(&self, x_scaled: f64) -> f64 {
        x_scaled * self.beta
    }
}

/// Asymptotic regime labels used by the density dispatch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Regime {
    /// X > 0, t < t1
    PosI,
    /// X > 0, t1 < t < t2
    PosII,
    /// X > 0, t > t2
    PosIII,
    /// X < 0 regions of the strip decomposition
    NegI,
    NegII,
    NegIII,
    NegIV,
    NegV,
    NegVI,
    NegVII,
    /// |t - t*| = O(eps^{1/3}) Airy transition layer
    TStarLayer,
    /// neighborhood of the cusp point
    CuspLayer,
    /// t = log(1/eps) + O(1)
    TScale,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Regime::PosI => "pos-i",
            Regime::PosII => "pos-ii",
            Regime::PosIII => "pos-iii",
            Regime::NegI => "I",
            Regime::NegII => "II",
            Regime::NegIII => "III",
            Regime::NegIV => "IV",
            Regime::NegV => "V",
            Regime::NegVI => "VI",
            Regime::NegVII => "VII",
            Regime::TStarLayer => "t*-layer",
            Regime::CuspLayer => "cusp-layer",
            Regime::TScale => "T-scale",
        };
        write!(f, "{s}")
    }
}

/// One contributing branch of an asymptotic approximation.
#[derive(Clone, Debug, Serialize)]
pub struct Branch {
    pub label: &'static str,
    /// eps-scaled exponent (the function multiplying 1/eps)
    pub exponent: f64,
    /// natural log of the algebraic prefactor
    pub ln_prefactor: f64,
    /// ln of the branch value, exponent/eps + ln_prefactor
    pub ln_value: f64,
}

impl Branch {
    pub fn new(label: &'static str, exponent: f64, ln_prefactor: f64, eps: f64) -> Self {
        Branch {
            label,
            exponent,
            ln_prefactor,
            ln_value: exponent / eps + ln_prefactor,
        }
    }
}

/// Assembled asymptotic density value.
#[derive(Clone, Debug, Serialize)]
pub struct AsymptoticDensity {
    pub regime: Regime,
    pub branches: Vec<Branch>,
    /// ln of the assembled (summed) value
    pub ln_value: f64,
    /// eps * ln_value, the exponent on the eps-scale
    pub eps_log: f64,
    /// index into branches of the dominant contribution
    pub dominant: usize,
    /// set when the point sits within a blending window of a transition curve
    pub boundary: bool,
}

impl AsymptoticDensity {
    pub fn assemble(regime: Regime, branches: Vec<Branch>, eps: f64, boundary: bool) -> Self {
        assert!(!branches.is_empty());
        let mut dominant = 0;
        for (i, b) in branches.iter().enumerate() {
            if b.ln_value > branches[dominant].ln_value {
                dominant = i;
            }
        }
        // log-sum-exp over branches
        let m = branches[dominant].ln_value;
        let sum: f64 = branches.iter().map(|b| (b.ln_value - m).exp()).sum();
        let ln_value = m + sum.ln();
        AsymptoticDensity {
            regime,
            branches,
            ln_value,
            eps_log: eps * ln_value,
            dominant,
            boundary,
        }
    }

    pub fn value(&self) -> f64 {
        self.ln_value.exp()
    }
}

/// A density value tagged with the method that produced it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Method {
    Asymptotic,
    Inversion,
    MonteCarlo,
    Pde,
    Rays,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Method::Asymptotic => "asymptotic",
            Method::Inversion => "inversion",
            Method::MonteCarlo => "mc",
            Method::Pde => "pde",
            Method::Rays => "rays",
        };
        write!(f, "{s}")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DensityEstimate {
    pub value: f64,
    pub ln_value: f64,
    pub method: Method,
    /// method-specific error indicator (quadrature difference, MC standard
    /// error, ...); None when not available
    pub error: Option<f64>,
}
