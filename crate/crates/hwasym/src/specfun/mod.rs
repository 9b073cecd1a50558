//! Special functions: parabolic cylinder D_p, Hermite polynomials He_N, Airy
//! Ai/Bi, and their large-parameter asymptotic regimes.

pub mod airy;
pub mod hermite;
pub mod pcf;
pub mod pcf_asym;

pub use airy::{airy, airy_all, AiryKind};
pub use hermite::{hermite_asym, hermite_he, hermite_he_f64, HermiteAsym};
pub use pcf::{pcf_d, pcf_d_symmetry, pcf_pair, pcf_pair_symmetry, PcfPair, PcfRegime};
pub use pcf_asym::{
    d_reflected_saddle, d_saddle, pcf_airy_layer, pcf_ratio_asym, select_regime,
};
