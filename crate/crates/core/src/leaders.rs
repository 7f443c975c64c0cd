//! p-leaders, sup-leaders and fractionally integrated (p,s)-leaders.
//!
//! The leader of cube (j, k) aggregates |c_{j',k'}| over all finer-or-equal
//! levels j' <= j and cubes inside the window 3λ (the cube and its two
//! neighbours), with weight 2^{-(j-j')}:
//!
//!   l^(p)(j,k)^p = sum_{j' <= j, λ' in 3λ} (2^{s(j'-L)} |c_{j',k'}|)^p 2^{-(j-j')}
//!
//! Computed by a per-level recursion over within-cube partial sums, so the
//! whole field costs O(N) per (p, s). Accumulation order is fixed
//! (fine-to-coarse, ascending k) with compensated summation; outputs are
//! bit-deterministic. The sum is truncated at level 1 (the data
//! resolution).

use crate::dwt::WaveletCoeffs;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// A computed leader field over levels 1..=j_max.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LeaderField {
    /// Aggregation exponent; `f64::INFINITY` marks sup-leaders.
    #[serde(with = "crate::serde_util::float_or_inf")]
    pub p: f64,
    /// Fractional-integration order folded into the coefficients (0 = none).
    pub s: f64,
    /// log2 sample count of the originating signal.
    pub signal_levels: u32,
    /// Finest level included in the sums (always 1, recorded for metadata).
    pub truncation_level: u32,
    levels: Vec<Vec<f64>>,
    clipped: Vec<Vec<bool>>,
}

impl LeaderField {
    pub fn j_max(&self) -> u32 {
        self.levels.len() as u32
    }

    pub fn values(&self, j: u32) -> &[f64] {
        &self.levels[(j - 1) as usize]
    }

    pub fn clipped(&self, j: u32) -> &[bool] {
        &self.clipped[(j - 1) as usize]
    }

    pub fn log2_scale(&self, j: u32) -> f64 {
        j as f64 - self.signal_levels as f64
    }

    /// Index of the dyadic cube [2^j k, 2^j (k+1)) containing x0 at level j.
    pub fn cube_index(&self, x0: f64, j: u32) -> usize {
        let n_j = 1usize << (self.signal_levels - j);
        ((x0 * n_j as f64).floor() as usize).min(n_j - 1)
    }
}

#[inline]
fn kahan_add(sum: &mut f64, comp: &mut f64, value: f64) {
    let y = value - *comp;
    let t = *sum + y;
    *comp = (t - *sum) - y;
    *sum = t;
}

/// p-leaders (0 < p < inf).
pub fn compute_pleaders(coeffs: &WaveletCoeffs, p: f64) -> Result<LeaderField> {
    compute_ps_leaders(coeffs, p, 0.0)
}

/// (p,s)-leaders: each coefficient at level j' is scaled by 2^{s (j'-L)}
/// before aggregation, realizing fractional integration of order s in the
/// wavelet domain. s = 0 reproduces `compute_pleaders` exactly.
pub fn compute_ps_leaders(coeffs: &WaveletCoeffs, p: f64, s: f64) -> Result<LeaderField> {
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "p must be positive and finite, got {p}"
        )));
    }
    if s < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "integration order must be nonnegative, got {s}"
        )));
    }
    let j_max = coeffs.j_max();
    let big_l = coeffs.signal_levels() as f64;
    let mut partial: Vec<f64> = Vec::new();
    let mut levels = Vec::with_capacity(j_max as usize);
    let mut clipped = Vec::with_capacity(j_max as usize);

    for j in 1..=j_max {
        let detail = coeffs.detail(j);
        let scale = 2f64.powf(s * (j as f64 - big_l));
        let mut next = vec![0.0f64; detail.len()];
        for (k, slot) in next.iter_mut().enumerate() {
            let own = (scale * detail[k].abs()).powf(p);
            if partial.is_empty() {
                *slot = own;
            } else {
                let mut sum = 0.0;
                let mut comp = 0.0;
                kahan_add(&mut sum, &mut comp, own);
                kahan_add(&mut sum, &mut comp, 0.5 * partial[2 * k]);
                kahan_add(&mut sum, &mut comp, 0.5 * partial[2 * k + 1]);
                *slot = sum;
            }
        }
        let n_j = next.len();
        let mut row = vec![0.0f64; n_j];
        let mut flags = vec![false; n_j];
        let inv_p = 1.0 / p;
        for k in 0..n_j {
            let mut sum = 0.0;
            let mut comp = 0.0;
            if k > 0 {
                kahan_add(&mut sum, &mut comp, next[k - 1]);
            }
            kahan_add(&mut sum, &mut comp, next[k]);
            if k + 1 < n_j {
                kahan_add(&mut sum, &mut comp, next[k + 1]);
            }
            row[k] = sum.powf(inv_p);
            flags[k] = k == 0 || k + 1 == n_j;
        }
        levels.push(row);
        clipped.push(flags);
        partial = next;
    }

    Ok(LeaderField {
        p,
        s,
        signal_levels: coeffs.signal_levels(),
        truncation_level: 1,
        levels,
        clipped,
    })
}

/// Classical wavelet leaders: sup of |c| over the same index set (p = inf).
pub fn compute_leaders_inf(coeffs: &WaveletCoeffs) -> LeaderField {
    let j_max = coeffs.j_max();
    let mut partial: Vec<f64> = Vec::new();
    let mut levels = Vec::with_capacity(j_max as usize);
    let mut clipped = Vec::with_capacity(j_max as usize);
    for j in 1..=j_max {
        let detail = coeffs.detail(j);
        let mut next = vec![0.0f64; detail.len()];
        for (k, slot) in next.iter_mut().enumerate() {
            let own = detail[k].abs();
            *slot = if partial.is_empty() {
                own
            } else {
                own.max(partial[2 * k]).max(partial[2 * k + 1])
            };
        }
        let n_j = next.len();
        let mut row = vec![0.0f64; n_j];
        let mut flags = vec![false; n_j];
        for k in 0..n_j {
            let mut m = next[k];
            if k > 0 {
                m = m.max(next[k - 1]);
            }
            if k + 1 < n_j {
                m = m.max(next[k + 1]);
            }
            row[k] = m;
            flags[k] = k == 0 || k + 1 == n_j;
        }
        levels.push(row);
        clipped.push(flags);
        partial = next;
    }
    LeaderField {
        p: f64::INFINITY,
        s: 0.0,
        signal_levels: coeffs.signal_levels(),
        truncation_level: 1,
        levels,
        clipped,
    }
}
