//! Singularity classification from p-exponent profiles with and without
//! fractional integration.
//!
//! Pipeline: admissibility gate, then profiles at s = 0 and each tested
//! s > 0. Canonical singularities shift by exactly s; oscillating ones
//! split into balanced (p-invariant) and lacunary (p-dependent) per the
//! taxonomy. Degenerate measurements map to `Indeterminate` with reasons.

use crate::config::AnalysisConfig;
use crate::dwt::forward_dwt;
use crate::error::{Error, Result};
use crate::pexp::{profile_from_coeffs, PExponentProfile};
use crate::signal::Signal;
use crate::wavelet::WaveletSpec;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SingularityLabel {
    Canonical,
    OscillatingBalanced,
    OscillatingLacunary,
    Inadmissible,
    Indeterminate,
}

/// Decision thresholds: finite-sample surrogates for the exact defining
/// conditions, calibrated on the reference families.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassifyConfig {
    /// Integration orders tested against the s = 0 profile.
    pub s_list: Vec<f64>,
    /// Max spread of h_hat over valid p for p-invariance.
    pub tol_invariance: f64,
    /// Max |h_{p,s} - h_p - s| for the canonical test.
    pub tol_canonical: f64,
    /// Smallest oscillation exponent considered significant.
    pub beta_significance: f64,
    pub analysis: AnalysisConfig,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        Self {
            s_list: vec![0.5, 1.0],
            tol_invariance: 0.1,
            tol_canonical: 0.15,
            beta_significance: 0.1,
            analysis: AnalysisConfig::default(),
        }
    }
}

/// Classification outcome with the evidence that produced it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SingularityReport {
    pub schema_version: u32,
    pub label: SingularityLabel,
    pub p_invariant: Option<bool>,
    /// Oscillation exponent estimate (0 when canonical).
    pub beta_hat: f64,
    /// Profiles at s = 0 followed by each tested s.
    pub evidence: Vec<PExponentProfile>,
    pub reasons: Vec<String>,
    pub config: ClassifyConfig,
}

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// True iff the valid finite-p entries of the profile are constant in p up
/// to tol plus twice the largest fit standard error. The test covers the
/// open interval (0, p0) of the invariance definition, so the Holder
/// endpoint entry does not participate.
pub fn check_p_invariant(profile: &PExponentProfile, tol: f64) -> Result<bool> {
    let values: Vec<(f64, f64)> = profile
        .valid_entries()
        .filter(|e| e.p.is_finite())
        .filter_map(|e| e.fit.as_ref().map(|f| (e.h_hat.unwrap(), f.stderr)))
        .collect();
    if values.len() < 3 {
        return Err(Error::InsufficientData {
            what: "valid profile entries for the p-invariance test".to_string(),
            needed: 3,
            got: values.len(),
        });
    }
    let min = values.iter().map(|v| v.0).fold(f64::INFINITY, f64::min);
    let max = values.iter().map(|v| v.0).fold(f64::NEG_INFINITY, f64::max);
    let worst_err = values.iter().map(|v| v.1).fold(0.0f64, f64::max);
    Ok(max - min <= tol + 2.0 * worst_err)
}

fn joint_valid_ps(a: &PExponentProfile, b: &PExponentProfile) -> Vec<f64> {
    a.valid_entries()
        .filter(|ea| {
            b.entry(ea.p).map(|eb| eb.valid).unwrap_or(false)
        })
        .map(|e| e.p)
        .collect()
}

/// True iff every tested s shifts every jointly-valid p by s within tol.
pub fn check_canonical(
    profile_s0: &PExponentProfile,
    profiles_s: &[PExponentProfile],
    tol: f64,
) -> Result<bool> {
    if profiles_s.is_empty() {
        return Err(Error::InvalidParameter(
            "canonical test needs at least one integrated profile".to_string(),
        ));
    }
    let mut tested_any = false;
    for prof in profiles_s {
        let joint = joint_valid_ps(profile_s0, prof);
        for p in joint {
            tested_any = true;
            let h0 = profile_s0.entry(p).unwrap().h_hat.unwrap();
            let hs = prof.entry(p).unwrap().h_hat.unwrap();
            if (hs - h0 - prof.s).abs() > tol {
                return Ok(false);
            }
        }
    }
    if !tested_any {
        return Err(Error::InsufficientData {
            what: "jointly valid p entries for the canonical test".to_string(),
            needed: 1,
            got: 0,
        });
    }
    Ok(true)
}

/// Median over jointly-valid p of (h_{p,s} - h_p)/s - 1, floored at 0.
pub fn oscillation_exponent(
    profile_s0: &PExponentProfile,
    profile_s: &PExponentProfile,
    s: f64,
) -> Result<f64> {
    if !(s > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "oscillation exponent needs s > 0, got {s}"
        )));
    }
    let joint = joint_valid_ps(profile_s0, profile_s);
    if joint.is_empty() {
        return Err(Error::InsufficientData {
            what: "jointly valid p entries".to_string(),
            needed: 1,
            got: 0,
        });
    }
    let mut shifts: Vec<f64> = joint
        .iter()
        .map(|&p| {
            let h0 = profile_s0.entry(p).unwrap().h_hat.unwrap();
            let hs = profile_s.entry(p).unwrap().h_hat.unwrap();
            (hs - h0) / s - 1.0
        })
        .collect();
    shifts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mid = shifts.len() / 2;
    let median = if shifts.len() % 2 == 1 {
        shifts[mid]
    } else {
        0.5 * (shifts[mid - 1] + shifts[mid])
    };
    Ok(median.max(0.0))
}

/// Full classification pipeline.
pub fn classify_singularity(
    signal: &Signal,
    x0: f64,
    config: &ClassifyConfig,
) -> Result<SingularityReport> {
    let resolved = config.analysis.resolve(&signal.meta)?;
    let wavelet = WaveletSpec::daubechies(resolved.wavelet_order)?;
    let coeffs = forward_dwt(signal, &wavelet, resolved.j_max, resolved.alignment)?;

    let base = profile_from_coeffs(&coeffs, x0, 0.0, &resolved)?;
    let mut reasons = Vec::new();

    if base.entries.iter().all(|e| !e.admissible) {
        reasons.push("eta(p) fails the significance margin at every grid p".to_string());
        return Ok(SingularityReport {
            schema_version: REPORT_SCHEMA_VERSION,
            label: SingularityLabel::Inadmissible,
            p_invariant: None,
            beta_hat: 0.0,
            evidence: vec![base],
            reasons,
            config: config.clone(),
        });
    }

    let mut evidence = vec![base];
    for &s in &config.s_list {
        let prof = profile_from_coeffs(&coeffs, x0, s, &resolved)?;
        evidence.push(prof);
    }
    let (base, integrated) = evidence.split_first().unwrap();

    let p_invariant = match check_p_invariant(base, config.tol_invariance) {
        Ok(v) => v,
        Err(e) => {
            reasons.push(format!("p-invariance test degenerate: {e}"));
            return Ok(SingularityReport {
                schema_version: REPORT_SCHEMA_VERSION,
                label: SingularityLabel::Indeterminate,
                p_invariant: None,
                beta_hat: 0.0,
                evidence,
                reasons,
                config: config.clone(),
            });
        }
    };

    let canonical_shift = match check_canonical(base, integrated, config.tol_canonical) {
        Ok(v) => v,
        Err(e) => {
            reasons.push(format!("canonical test degenerate: {e}"));
            return Ok(SingularityReport {
                schema_version: REPORT_SCHEMA_VERSION,
                label: SingularityLabel::Indeterminate,
                p_invariant: Some(p_invariant),
                beta_hat: 0.0,
                evidence,
                reasons,
                config: config.clone(),
            });
        }
    };

    let mut betas = Vec::new();
    for prof in integrated {
        if let Ok(b) = oscillation_exponent(base, prof, prof.s) {
            betas.push(b);
        }
    }
    betas.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let beta_hat = if betas.is_empty() {
        0.0
    } else {
        let mid = betas.len() / 2;
        if betas.len() % 2 == 1 {
            betas[mid]
        } else {
            0.5 * (betas[mid - 1] + betas[mid])
        }
    };

    let label = if canonical_shift && p_invariant {
        SingularityLabel::Canonical
    } else if canonical_shift {
        // Theorem: canonical implies p-invariant; measuring one without the
        // other means the evidence is inconsistent
        reasons.push("shift test canonical but profile not p-invariant".to_string());
        SingularityLabel::Indeterminate
    } else if !p_invariant {
        SingularityLabel::OscillatingLacunary
    } else if beta_hat > config.beta_significance {
        SingularityLabel::OscillatingBalanced
    } else {
        reasons.push(format!(
            "non-canonical shift but oscillation exponent {beta_hat:.3} below significance"
        ));
        SingularityLabel::Indeterminate
    };

    let beta_hat = if label == SingularityLabel::Canonical {
        0.0
    } else {
        beta_hat
    };

    Ok(SingularityReport {
        schema_version: REPORT_SCHEMA_VERSION,
        label,
        p_invariant: Some(p_invariant),
        beta_hat,
        evidence,
        reasons,
        config: config.clone(),
    })
}
