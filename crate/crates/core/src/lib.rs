//! Pointwise regularity analysis with p-exponents and wavelet p-leaders.
//!
//! The crate generates reference singular signals (cusps, chirps, lacunary
//! combs, self-similar singularities, white noise), computes L1-normalized
//! wavelet coefficients and their p-leader aggregations, estimates
//! p-exponent profiles at a point by log-log regression, and classifies the
//! singularity type (canonical / oscillating balanced / oscillating
//! lacunary) from the profiles' response to fractional integration.
//!
//! Typical flow:
//!
//! ```
//! use pleaders::{gen_cusp, pexp_profile, AnalysisConfig};
//!
//! let signal = gen_cusp(0.6, 0.5, 12).unwrap();
//! let profile = pexp_profile(&signal, 0.5, 0.0, &AnalysisConfig::default()).unwrap();
//! let h2 = profile.entry(2.0).unwrap().h_hat.unwrap();
//! assert!((h2 - 0.6).abs() < 0.1);
//! ```

pub mod classify;
pub mod config;
pub mod dwt;
pub mod error;
pub mod fit;
pub mod io;
pub mod leaders;
pub mod pexp;
pub mod scaling;
pub mod serde_util;
pub mod signal;
pub mod wavelet;

pub use classify::{
    check_canonical, check_p_invariant, classify_singularity, oscillation_exponent,
    ClassifyConfig, SingularityLabel, SingularityReport,
};
pub use config::{AnalysisConfig, ResolvedConfig, DEFAULT_P_GRID};
pub use dwt::{forward_dwt, fractional_integrate_fourier, inverse_dwt, Alignment, WaveletCoeffs};
pub use error::{Error, Result};
pub use fit::{fit_log2, FitPoint, RegressionFit};
pub use leaders::{compute_leaders_inf, compute_pleaders, compute_ps_leaders, LeaderField};
pub use pexp::{
    direct_tp, dyadic_radii, pexp_from_leaders, pexp_profile, pexp_ps, PExponentProfile,
    PolyMode, ProfileEntry,
};
pub use scaling::{hmin, scaling_function, structure_function, ScalingFunction};
pub use signal::{
    gen_chirp, gen_cusp, gen_cusp_plus_chirp, gen_general_comb, gen_lacunary_comb,
    gen_selfsimilar, gen_wgn, theoretical_profile, AffineFamily, CombSpec, Generator, SelfSimilarSpec,
    Signal, SignalMeta, TheoreticalProfile,
};
pub use wavelet::WaveletSpec;
