//! Pointwise p-exponent estimation at a location x0.
//!
//! Two estimators: the direct T^p route (local L^p averages of the signal)
//! and the p-leader route (log-log regression of the leader at the cube
//! containing x0). Profiles assemble the leader estimates over a p grid,
//! gating every entry on the local-L^p admissibility check.

use crate::config::{AnalysisConfig, ResolvedConfig};
use crate::dwt::{forward_dwt, WaveletCoeffs};
use crate::error::{Error, Result};
use crate::fit::{fit_log2, FitPoint, RegressionFit};
use crate::leaders::{compute_ps_leaders, LeaderField};
use crate::scaling::{hmin, scaling_function_with_margin};
use crate::signal::Signal;
use crate::wavelet::WaveletSpec;
use serde::{Deserialize, Serialize};

/// Taylor-polynomial choice for the direct estimator. All reference
/// singular signals have P = 0 as optimal polynomial; `Constant` subtracts
/// the sample mean over the smallest radius as a surrogate for X(x0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolyMode {
    Zero,
    Constant,
}

/// Direct T^p estimator: Riemann sums of |X - P|^p over windows
/// [x0 - a, x0 + a] intersected with the domain (samples beyond the edge
/// contribute zero), normalized by 1/(2a).
///
/// Returns the per-radius values (a, T(a)) and the log-log fit. Radii with
/// T = 0 are excluded from the fit; if every radius gives zero, the fit
/// carries a +inf slope sentinel.
pub fn direct_tp(
    signal: &Signal,
    x0: f64,
    p: f64,
    radii: &[f64],
    poly_mode: PolyMode,
) -> Result<(Vec<(f64, f64)>, RegressionFit)> {
    if p < 1.0 {
        return Err(Error::InvalidParameter(format!(
            "the direct estimator requires p >= 1, got {p}"
        )));
    }
    if radii.is_empty() {
        return Err(Error::InvalidParameter("no radii".to_string()));
    }
    if radii.iter().any(|&a| !(a > 0.0) || a >= 1.0) {
        return Err(Error::InvalidParameter(
            "radii must lie strictly inside (0, 1)".to_string(),
        ));
    }
    let n = signal.len();
    let nf = n as f64;
    let smallest = radii.iter().cloned().fold(f64::INFINITY, f64::min);

    let window = |a: f64| -> (usize, usize) {
        let lo = ((x0 - a) * nf - 0.5).ceil().max(0.0) as usize;
        let hi = ((x0 + a) * nf - 0.5).floor().min(nf - 1.0).max(0.0) as usize;
        (lo, hi)
    };

    let poly = match poly_mode {
        PolyMode::Zero => 0.0,
        PolyMode::Constant => {
            let (lo, hi) = window(smallest);
            if hi < lo {
                return Err(Error::InvalidInput(
                    "smallest radius contains no samples".to_string(),
                ));
            }
            signal.samples[lo..=hi].iter().sum::<f64>() / (hi - lo + 1) as f64
        }
    };

    let mut values = Vec::with_capacity(radii.len());
    for &a in radii {
        let (lo, hi) = window(a);
        let mut sum = 0.0;
        if hi >= lo {
            for &v in &signal.samples[lo..=hi] {
                sum += (v - poly).abs().powf(p);
            }
        }
        let t = (sum / nf / (2.0 * a)).powf(1.0 / p);
        values.push((a, t));
    }

    let levels = signal.levels() as f64;
    let mut points = Vec::new();
    let mut excluded = 0usize;
    for &(a, t) in &values {
        if t > 0.0 && t.is_finite() {
            points.push(FitPoint {
                level: (levels + a.log2()).round().max(1.0) as u32,
                log2_scale: a.log2(),
                log2_value: t.log2(),
            });
        } else {
            excluded += 1;
        }
    }
    if points.is_empty() {
        // degenerate window (e.g. constant signal under Constant mode):
        // +inf sentinel per contract
        let fit = RegressionFit {
            slope: f64::INFINITY,
            intercept: f64::NAN,
            stderr: 0.0,
            r2: 1.0,
            j1: 0,
            j2: 0,
            points,
            n_excluded: excluded,
        };
        return Ok((values, fit));
    }
    let j1 = points.iter().map(|pt| pt.level).min().unwrap();
    let j2 = points.iter().map(|pt| pt.level).max().unwrap();
    let fit = fit_log2(points, j1.min(j2.saturating_sub(1)), j2, excluded)?;
    Ok((values, fit))
}

/// Dyadic radii 2^{j-L} for levels j1..=j2.
pub fn dyadic_radii(signal_levels: u32, j1: u32, j2: u32) -> Vec<f64> {
    (j1..=j2)
        .map(|j| 2f64.powi(j as i32 - signal_levels as i32))
        .collect()
}

/// Leader-based estimate: regress log2 of the leader at the cube containing
/// x0 against log2 scale over `fit_range`. Clipped windows are excluded
/// unless `include_clipped`; zero leaders are always excluded and counted.
pub fn pexp_from_leaders(
    field: &LeaderField,
    x0: f64,
    fit_range: (u32, u32),
    include_clipped: bool,
) -> Result<RegressionFit> {
    if !(0.0..1.0).contains(&x0) {
        return Err(Error::InvalidParameter(format!(
            "x0 must lie in [0, 1), got {x0}"
        )));
    }
    let (j1, j2) = fit_range;
    let j2 = j2.min(field.j_max());
    let mut points = Vec::new();
    let mut excluded = 0usize;
    for j in j1..=j2 {
        let k = field.cube_index(x0, j);
        let clipped = field.clipped(j)[k];
        let value = field.values(j)[k];
        if (clipped && !include_clipped) || !(value > 0.0) || !value.is_finite() {
            excluded += 1;
            continue;
        }
        points.push(FitPoint {
            level: j,
            log2_scale: field.log2_scale(j),
            log2_value: value.log2(),
        });
    }
    fit_log2(points, j1, j2, excluded)
}

/// (p,s)-leader estimate with the admissibility precondition
/// eta(p) > -s p checked on the coefficients themselves; violations carry
/// the eta evidence in the error.
pub fn pexp_ps(
    coeffs: &WaveletCoeffs,
    x0: f64,
    p: f64,
    s: f64,
    fit_range: (u32, u32),
) -> Result<RegressionFit> {
    let global = (3u32, coeffs.j_max().saturating_sub(2).max(4));
    let sf = scaling_function_with_margin(coeffs, &[p], global, 0.0)?;
    let eta = sf.eta[0];
    let stderr = sf.fits[0].stderr;
    if eta <= -s * p {
        return Err(Error::NotAdmissible {
            p,
            eta,
            stderr,
            required: -s * p,
        });
    }
    let field = compute_ps_leaders(coeffs, p, s)?;
    pexp_from_leaders(&field, x0, fit_range, false)
}

/// One grid entry of a profile.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProfileEntry {
    #[serde(with = "crate::serde_util::float_or_inf")]
    pub p: f64,
    pub h_hat: Option<f64>,
    pub fit: Option<RegressionFit>,
    /// eta(p) estimate backing the admissibility decision (finite p only).
    pub eta: Option<f64>,
    pub eta_stderr: Option<f64>,
    /// Local L^p membership of the (fractionally integrated) signal:
    /// eta(p) + s p must clear the significance margin. For p = inf the
    /// condition is hmin + s > 0.
    pub admissible: bool,
    /// Entry is usable for reporting: admissible with a successful fit.
    pub valid: bool,
    /// Estimate approaches the wavelet's vanishing-moment order.
    pub regularity_warning: bool,
    pub error: Option<String>,
}

/// Estimated p-exponent profile at x0.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PExponentProfile {
    pub x0: f64,
    /// Fractional-integration order applied in the wavelet domain.
    pub s: f64,
    pub entries: Vec<ProfileEntry>,
    /// Zero crossing of eta(p); `None` flags +inf (admissible everywhere).
    pub p0: Option<f64>,
    pub hmin: Option<RegressionFit>,
    pub config: ResolvedConfig,
}

impl PExponentProfile {
    pub fn entry(&self, p: f64) -> Option<&ProfileEntry> {
        self.entries
            .iter()
            .find(|e| e.p == p || (e.p.is_infinite() && p.is_infinite()))
    }

    pub fn valid_entries(&self) -> impl Iterator<Item = &ProfileEntry> {
        self.entries.iter().filter(|e| e.valid)
    }
}

/// Full profile pipeline: transform, admissibility, per-p leader fits.
pub fn pexp_profile(
    signal: &Signal,
    x0: f64,
    s: f64,
    config: &AnalysisConfig,
) -> Result<PExponentProfile> {
    if s < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "integration order must be nonnegative, got {s}"
        )));
    }
    let resolved = config.resolve(&signal.meta)?;
    let wavelet = WaveletSpec::daubechies(resolved.wavelet_order)?;
    let coeffs = forward_dwt(signal, &wavelet, resolved.j_max, resolved.alignment)?;
    profile_from_coeffs(&coeffs, x0, s, &resolved)
}

/// Profile from an existing decomposition (lets callers share the DWT
/// across s values).
pub fn profile_from_coeffs(
    coeffs: &WaveletCoeffs,
    x0: f64,
    s: f64,
    resolved: &ResolvedConfig,
) -> Result<PExponentProfile> {
    let finite_ps: Vec<f64> = resolved
        .p_grid
        .iter()
        .copied()
        .filter(|p| p.is_finite())
        .collect();
    let sf = if finite_ps.is_empty() {
        None
    } else {
        Some(scaling_function_with_margin(
            coeffs,
            &finite_ps,
            resolved.global_fit,
            resolved.admissibility_margin,
        )?)
    };
    let hmin_fit = hmin(coeffs, resolved.global_fit).ok();

    let n_psi = coeffs.wavelet().n_vanishing() as f64;
    let mut entries = Vec::with_capacity(resolved.p_grid.len());
    for &p in &resolved.p_grid {
        let entry = if p.is_finite() {
            let (eta, eta_stderr, margin_ok) = match &sf {
                Some(sf) => {
                    let i = sf.p_grid.iter().position(|&q| q == p).unwrap();
                    let fit = &sf.fits[i];
                    let ok = sf.eta[i] + s * p > resolved.admissibility_margin * fit.stderr;
                    (Some(sf.eta[i]), Some(fit.stderr), ok)
                }
                None => (None, None, false),
            };
            match compute_ps_leaders(coeffs, p, s)
                .and_then(|f| pexp_from_leaders(&f, x0, resolved.pointwise_fit, resolved.include_clipped))
            {
                Ok(fit) => {
                    let h = fit.slope;
                    ProfileEntry {
                        p,
                        h_hat: Some(h),
                        regularity_warning: h + 0.5 >= n_psi,
                        fit: Some(fit),
                        eta,
                        eta_stderr,
                        admissible: margin_ok,
                        valid: margin_ok,
                        error: None,
                    }
                }
                Err(e) => ProfileEntry {
                    p,
                    h_hat: None,
                    fit: None,
                    eta,
                    eta_stderr,
                    admissible: margin_ok,
                    valid: false,
                    regularity_warning: false,
                    error: Some(e.to_string()),
                },
            }
        } else {
            // p = inf: sup-leaders; admissible when the (integrated) signal
            // is locally bounded
            let adm = hmin_fit
                .as_ref()
                .map(|f| f.slope + s > resolved.admissibility_margin * f.stderr)
                .unwrap_or(false);
            match pexp_from_leaders(
                &compute_ps_leaders_inf(coeffs, s),
                x0,
                resolved.pointwise_fit,
                resolved.include_clipped,
            ) {
                Ok(fit) => {
                    let h = fit.slope;
                    ProfileEntry {
                        p,
                        h_hat: Some(h),
                        regularity_warning: h + 0.5 >= n_psi,
                        fit: Some(fit),
                        eta: None,
                        eta_stderr: None,
                        admissible: adm,
                        valid: adm,
                        error: None,
                    }
                }
                Err(e) => ProfileEntry {
                    p,
                    h_hat: None,
                    fit: None,
                    eta: None,
                    eta_stderr: None,
                    admissible: adm,
                    valid: false,
                    regularity_warning: false,
                    error: Some(e.to_string()),
                },
            }
        };
        entries.push(entry);
    }

    Ok(PExponentProfile {
        x0,
        s,
        entries,
        p0: sf.as_ref().and_then(|sf| sf.p0_estimate),
        hmin: hmin_fit,
        config: resolved.clone(),
    })
}

/// Sup-leaders of the fractionally integrated coefficients (p = inf limit
/// of the (p,s)-leaders).
pub fn compute_ps_leaders_inf(coeffs: &WaveletCoeffs, s: f64) -> LeaderField {
    if s == 0.0 {
        return crate::leaders::compute_leaders_inf(coeffs);
    }
    // scale-by-2^{s(j-L)} then take sup: fold the factor into a copy
    let mut scaled = coeffs.clone();
    scaled.scale_details(s);
    let mut field = crate::leaders::compute_leaders_inf(&scaled);
    field.s = s;
    field
}
