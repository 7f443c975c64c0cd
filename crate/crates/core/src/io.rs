//! Plot-ready CSV tables and JSON sidecars.
//!
//! Fixed column orders, header rows, shortest-round-trip float formatting:
//! rerunning with the same inputs reproduces every file byte for byte.
//! Non-finite p (the sup-leader column) prints as `inf`; +inf p0 serializes
//! as JSON null.

use crate::dwt::WaveletCoeffs;
use crate::error::Result;
use crate::leaders::LeaderField;
use crate::pexp::PExponentProfile;
use crate::scaling::ScalingFunction;
use crate::signal::{theoretical_profile, Signal};
use std::fmt::Write as _;

fn fmt_p(p: f64) -> String {
    if p.is_infinite() {
        "inf".to_string()
    } else {
        format!("{p}")
    }
}

/// `index,x,value` rows.
pub fn signal_csv(signal: &Signal) -> String {
    let mut out = String::with_capacity(signal.len() * 24);
    out.push_str("index,x,value\n");
    for (i, &v) in signal.samples.iter().enumerate() {
        let _ = writeln!(out, "{i},{},{v}", signal.x_at(i));
    }
    out
}

/// JSON sidecar with the generator metadata and, where defined, the
/// theoretical profile sampled over a p grid.
pub fn signal_meta_json(signal: &Signal, p_grid: &[f64]) -> Result<String> {
    let theory = theoretical_profile(&signal.meta).ok().map(|prof| {
        let samples: Vec<serde_json::Value> = prof
            .sample(p_grid)
            .into_iter()
            .map(|(p, h)| serde_json::json!({ "p": fmt_p(p), "h": h }))
            .collect();
        serde_json::json!({
            "p0": if prof.p0.is_finite() { serde_json::json!(prof.p0) } else { serde_json::Value::Null },
            "beta_osc": prof.beta_osc,
            "h_of_p": samples,
        })
    });
    let doc = serde_json::json!({
        "meta": signal.meta,
        "n": signal.len(),
        "theoretical_profile": theory,
    });
    Ok(serde_json::to_string_pretty(&doc)?)
}

/// `j,k,value,boundary_flag` rows for every level.
pub fn coeffs_csv(coeffs: &WaveletCoeffs) -> String {
    let mut out = String::new();
    out.push_str("j,k,value,boundary_flag\n");
    for j in 1..=coeffs.j_max() {
        let flags = coeffs.boundary(j);
        for (k, &c) in coeffs.detail(j).iter().enumerate() {
            let _ = writeln!(out, "{j},{k},{c},{}", u8::from(flags[k]));
        }
    }
    out
}

/// `j,k,value,clipped_flag` rows.
pub fn leaders_csv(field: &LeaderField) -> String {
    let mut out = String::new();
    out.push_str("j,k,value,clipped_flag\n");
    for j in 1..=field.j_max() {
        let flags = field.clipped(j);
        for (k, &v) in field.values(j).iter().enumerate() {
            let _ = writeln!(out, "{j},{k},{v},{}", u8::from(flags[k]));
        }
    }
    out
}

/// Leader metadata sidecar (p, s, wavelet order, truncation level).
pub fn leaders_meta_json(field: &LeaderField, wavelet_order: u32) -> Result<String> {
    let doc = serde_json::json!({
        "p": fmt_p(field.p),
        "s": field.s,
        "wavelet_order": wavelet_order,
        "truncation_level": field.truncation_level,
        "signal_levels": field.signal_levels,
    });
    Ok(serde_json::to_string_pretty(&doc)?)
}

/// `p,eta,stderr,admissible` rows.
pub fn scaling_csv(sf: &ScalingFunction) -> String {
    let mut out = String::new();
    out.push_str("p,eta,stderr,admissible\n");
    for (i, &p) in sf.p_grid.iter().enumerate() {
        let _ = writeln!(
            out,
            "{p},{},{},{}",
            sf.eta[i],
            sf.fits[i].stderr,
            u8::from(sf.admissible[i])
        );
    }
    out
}

/// Per-p structure-function table: `j,log2_scale,log2_S`.
pub fn structure_table_csv(points: &[(u32, f64, f64)]) -> String {
    let mut out = String::new();
    out.push_str("j,log2_scale,log2_S\n");
    for &(j, x, y) in points {
        let _ = writeln!(out, "{j},{x},{y}");
    }
    out
}

/// Profile summary: `p,h_hat,stderr,r2,j1,j2,admissible,n_excluded`.
pub fn profile_csv(profile: &PExponentProfile) -> String {
    let mut out = String::new();
    out.push_str("p,h_hat,stderr,r2,j1,j2,admissible,n_excluded\n");
    for e in &profile.entries {
        let (h, se, r2, j1, j2, nex) = match (&e.h_hat, &e.fit) {
            (Some(h), Some(f)) => (
                format!("{h}"),
                format!("{}", f.stderr),
                format!("{}", f.r2),
                f.j1.to_string(),
                f.j2.to_string(),
                f.n_excluded.to_string(),
            ),
            _ => (
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
            ),
        };
        let _ = writeln!(
            out,
            "{},{h},{se},{r2},{j1},{j2},{},{nex}",
            fmt_p(e.p),
            u8::from(e.admissible)
        );
    }
    out
}

/// Per-p leader scaling table (the reproduction data for the log-log
/// figures): `j,log2_scale,log2_leader`.
pub fn leader_table_csv(profile: &PExponentProfile, p: f64) -> Option<String> {
    let entry = profile.entry(p)?;
    let fit = entry.fit.as_ref()?;
    let mut out = String::new();
    out.push_str("j,log2_scale,log2_leader\n");
    for pt in &fit.points {
        let _ = writeln!(out, "{},{},{}", pt.level, pt.log2_scale, pt.log2_value);
    }
    Some(out)
}

/// Global regularity summary JSON (p0, hmin, per-p eta).
pub fn summary_json(sf: &ScalingFunction, hmin_slope: Option<f64>) -> Result<String> {
    let doc = serde_json::json!({
        "p0_estimate": sf.p0_estimate,
        "hmin": hmin_slope,
        "p_grid": sf.p_grid,
        "eta": sf.eta,
        "admissible": sf.admissible,
    });
    Ok(serde_json::to_string_pretty(&doc)?)
}
