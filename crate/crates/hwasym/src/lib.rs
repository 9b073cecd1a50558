//! Transient probability density of the Halfin-Whitt diffusion.
//!
//! The diffusion has drift -beta for x > 0 and -x - beta for x < 0, with unit
//! p_xx coefficient in the forward equation, and starts at x0 > 0. This crate
//! computes its density p(x, t) by independent routes:
//!
//! * exact Laplace-transform inversion on a Bromwich contour ([`inversion`]),
//!   built on Laplace transforms involving parabolic cylinder functions
//!   ([`exact`], [`specfun`]) and the discrete spectrum ([`spectrum`]);
//! * large-drift asymptotic formulas across the full space-time plane,
//!   including all transition and caustic curves ([`asym_pos`], [`asym_neg`]);
//! * a geometrical-optics solver tracing rays of the eikonal equation and
//!   extracting caustic envelopes ([`rays`]);
//! * Monte Carlo simulation and a conservative finite-difference solver of
//!   the forward equation as ground truth ([`oracle`]).

pub mod error;
pub mod numeric;
pub mod params;

pub mod specfun;

pub mod asym_neg;
pub mod asym_pos;
pub mod exact;
pub mod inversion;
pub mod oracle;
pub mod output;
pub mod rays;
pub mod spectrum;
pub mod validate;

pub use error::{Error, Result};
pub use params::{AsymptoticDensity, Branch, DensityEstimate, Method, ModelParams, Regime};

/// Initialize the global rayon pool honoring the HWASYM_THREADS cap.
/// Safe to call more than once; later calls are no-ops.
pub fn init_threads() {
    if let Ok(v) = std::env::var("HWASYM_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}
