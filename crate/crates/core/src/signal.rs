//! Reference singular signals with known p-exponent profiles.
//!
//! All generators sample on the offset grid x_i = (i + 1/2)/N over [0, 1),
//! which keeps divergent cusps and chirps finite at dyadic singularity
//! locations. Generators are pure: identical inputs give bit-identical
//! output.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

pub const MIN_LEVELS: u32 = 8;

/// Which generator produced a signal, with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Generator {
    Cusp { alpha: f64 },
    Chirp { alpha: f64, beta: f64 },
    LacunaryComb { alpha: f64, gamma: f64 },
    GeneralComb { family: AffineFamily },
    SelfSimilar { spec: SelfSimilarSpec },
    CuspPlusChirp { gamma: f64, alpha: f64, beta: f64 },
    Wgn { seed: u64 },
    /// Signal loaded from disk without generator metadata.
    External,
}

impl Generator {
    pub fn name(&self) -> &'static str {
        match self {
            Generator::Cusp { .. } => "cusp",
            Generator::Chirp { .. } => "chirp",
            Generator::LacunaryComb { .. } => "lacunary_comb",
            Generator::GeneralComb { .. } => "general_comb",
            Generator::SelfSimilar { .. } => "selfsimilar",
            Generator::CuspPlusChirp { .. } => "cusp_plus_chirp",
            Generator::Wgn { .. } => "wgn",
            Generator::External => "external",
        }
    }
}

/// Tooth bookkeeping for comb generators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CombResolution {
    /// Deepest generated tooth index.
    pub l_max: u32,
    /// Set when the finest generated tooth spans fewer than 8 samples.
    pub resolution_warning: bool,
    /// Finest analysis level at which the x0 = 0 window still contains
    /// comb content; pointwise regressions should not go below it.
    pub finest_useful_level: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignalMeta {
    pub generator: Generator,
    pub x0: f64,
    /// log2 of the sample count.
    pub levels: u32,
    /// Order of fractional integration applied after generation (0 = none).
    pub fractional_s: f64,
    pub comb: Option<CombResolution>,
}

/// Uniformly sampled real signal on [0, 1).
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    pub samples: Vec<f64>,
    pub meta: SignalMeta,
}

impl Signal {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn x0(&self) -> f64 {
        self.meta.x0
    }

    pub fn levels(&self) -> u32 {
        self.meta.levels
    }

    /// Grid abscissa of sample i.
    pub fn x_at(&self, i: usize) -> f64 {
        (i as f64 + 0.5) / self.samples.len() as f64
    }
}

fn check_levels(levels: u32) -> Result<usize> {
    if !(MIN_LEVELS..=30).contains(&levels) {
        return Err(Error::InvalidParameter(format!(
            "levels must be in {MIN_LEVELS}..=30, got {levels}"
        )));
    }
    Ok(1usize << levels)
}

fn check_x0(x0: f64) -> Result<()> {
    if !(0.0..1.0).contains(&x0) {
        return Err(Error::InvalidParameter(format!(
            "x0 must lie in [0, 1), got {x0}"
        )));
    }
    Ok(())
}

fn grid(n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| (i as f64 + 0.5) / n as f64)
}

/// Cusp C_alpha(x) = |x - x0|^alpha.
pub fn gen_cusp(alpha: f64, x0: f64, levels: u32) -> Result<Signal> {
    let n = check_levels(levels)?;
    check_x0(x0)?;
    if alpha >= 0.0 && alpha % 2.0 == 0.0 {
        return Err(Error::InvalidParameter(format!(
            "cusp exponent must not be an even nonnegative integer, got {alpha}"
        )));
    }
    if alpha <= -1.0 {
        return Err(Error::InvalidParameter(format!(
            "cusp exponent must exceed -1 for local integrability, got {alpha}"
        )));
    }
    let samples = grid(n).map(|x| (x - x0).abs().powf(alpha)).collect();
    Ok(Signal {
        samples,
        meta: SignalMeta {
            generator: Generator::Cusp { alpha },
            x0,
            levels,
            fractional_s: 0.0,
            comb: None,
        },
    })
}

/// Chirp |x - x0|^alpha sin(1/|x - x0|^beta).
pub fn gen_chirp(alpha: f64, beta: f64, x0: f64, levels: u32) -> Result<Signal> {
    let n = check_levels(levels)?;
    check_x0(x0)?;
    if beta <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "chirp oscillation exponent must be positive, got {beta}"
        )));
    }
    if alpha <= -1.0 {
        return Err(Error::InvalidParameter(format!(
            "chirp amplitude exponent must exceed -1, got {alpha}"
        )));
    }
    let samples = grid(n)
        .map(|x| {
            let r = (x - x0).abs();
            r.powf(alpha) * (1.0 / r.powf(beta)).sin()
        })
        .collect();
    Ok(Signal {
        samples,
        meta: SignalMeta {
            generator: Generator::Chirp { alpha, beta },
            x0,
            levels,
            fractional_s: 0.0,
            comb: None,
        },
    })
}

/// Lacunary comb tooth parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CombSpec {
    pub alpha: f64,
    pub gamma: f64,
}

impl CombSpec {
    pub fn validate(&self) -> Result<()> {
        if self.gamma <= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "comb gamma must exceed 1, got {}",
                self.gamma
            )));
        }
        if self.alpha <= -self.gamma {
            return Err(Error::InvalidParameter(format!(
                "comb requires alpha > -gamma for integrability, got alpha {} gamma {}",
                self.alpha, self.gamma
            )));
        }
        Ok(())
    }
}

/// F_{alpha,gamma}: value 2^{-alpha l} on [2^-l, 2^-l + 2^{-gamma l}], zero
/// elsewhere; teeth narrower than one sample are dropped.
pub fn gen_lacunary_comb(spec: CombSpec, levels: u32) -> Result<Signal> {
    spec.validate()?;
    let n = check_levels(levels)?;
    let l_max = (levels as f64 / spec.gamma).floor() as u32;
    if l_max < 1 {
        return Err(Error::InvalidParameter(
            "no comb tooth is resolvable at this resolution".to_string(),
        ));
    }
    let mut samples = vec![0.0f64; n];
    for l in 1..=l_max {
        let lo = 2f64.powi(-(l as i32));
        let hi = lo + 2f64.powf(-spec.gamma * l as f64);
        let value = 2f64.powf(-spec.alpha * l as f64);
        fill_interval(&mut samples, lo, hi, value);
    }
    let finest_width = 2f64.powf(-spec.gamma * l_max as f64);
    let resolution_warning = finest_width < 8.0 / n as f64;
    Ok(Signal {
        samples,
        meta: SignalMeta {
            generator: Generator::LacunaryComb {
                alpha: spec.alpha,
                gamma: spec.gamma,
            },
            x0: 0.0,
            levels,
            fractional_s: 0.0,
            comb: Some(CombResolution {
                l_max,
                resolution_warning,
                finest_useful_level: levels - l_max,
            }),
        },
    })
}

fn fill_interval(samples: &mut [f64], lo: f64, hi: f64, value: f64) {
    let n = samples.len() as f64;
    // samples at (i + 1/2)/n inside the closed interval [lo, hi]
    let first = (lo * n - 0.5).ceil().max(0.0) as usize;
    let last = (hi * n - 0.5).floor().min(n - 1.0);
    if last < 0.0 {
        return;
    }
    for s in samples.iter_mut().take(last as usize + 1).skip(first) {
        *s = value;
    }
}

/// Finite family of affine pieces rho_n(s) = a_n s + b_n parametrizing a
/// prescribed concave profile rho(s) = min_n rho_n(s).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffineFamily {
    /// (a_n, b_n) slopes and intercepts.
    pub pieces: Vec<(f64, f64)>,
    #[serde(with = "crate::serde_util::float_or_inf")]
    pub p0: f64,
    /// Apply the 1/l^2 tooth damping. The damping only matters for infinite
    /// families (L^1 summability); it adds a log correction to finite-scale
    /// slopes, so estimation-oriented callers usually disable it.
    pub damping: bool,
}

impl AffineFamily {
    pub fn new(pieces: Vec<(f64, f64)>, p0: f64) -> Self {
        Self {
            pieces,
            p0,
            damping: true,
        }
    }

    pub fn rho(&self, s: f64) -> f64 {
        self.pieces
            .iter()
            .map(|&(a, b)| a * s + b)
            .fold(f64::INFINITY, f64::min)
    }

    /// Exponent of the coarse-scale mass route, min_n (a_n + b_n);
    /// this is where the leader-definition profile flattens for p < 1.
    pub fn mass_exponent(&self) -> f64 {
        self.pieces
            .iter()
            .map(|&(a, b)| a + b)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn validate(&self) -> Result<()> {
        if self.pieces.is_empty() {
            return Err(Error::InvalidParameter(
                "affine family needs at least one piece".to_string(),
            ));
        }
        if !(self.p0 > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "affine family p0 must be positive, got {}",
                self.p0
            )));
        }
        if self
            .pieces
            .iter()
            .any(|&(a, b)| !a.is_finite() || !b.is_finite())
        {
            return Err(Error::InvalidParameter(
                "affine pieces must be finite".to_string(),
            ));
        }
        // rho must be nondecreasing on (1/p0, 1] and >= -1/p0 there;
        // sample the interval since min-of-affines is piecewise linear.
        let s_lo = (1.0 / self.p0).min(1.0);
        let steps = 64;
        let mut prev = f64::NEG_INFINITY;
        for k in 0..=steps {
            let s = s_lo + (1.0 - s_lo) * k as f64 / steps as f64;
            let r = self.rho(s);
            if r < -1.0 / self.p0 - 1e-12 {
                return Err(Error::InvalidParameter(format!(
                    "rho({s:.4}) = {r:.4} falls below -1/p0"
                )));
            }
            if r < prev - 1e-12 {
                return Err(Error::InvalidParameter(
                    "rho must be nondecreasing on (1/p0, 1]".to_string(),
                ));
            }
            prev = r;
        }
        Ok(())
    }
}

/// Dyadic valuation: l = 2^n (2k + 1) gives n.
pub fn dyadic_valuation(l: u32) -> u32 {
    l.trailing_zeros()
}

/// Comb with a prescribed concave profile: tooth l sits on
/// [2^-l, 2^-l + 2^{-omega(l)}] with height 2^{-theta(l)} (times 1/l^2 when
/// damping is on), where the piece n = v2(l) mod M gives
/// omega(l) = (a_n + 1) l and theta(l) = b_n l.
pub fn gen_general_comb(family: &AffineFamily, levels: u32) -> Result<Signal> {
    family.validate()?;
    let n = check_levels(levels)?;
    let m = family.pieces.len() as u32;
    let mut samples = vec![0.0f64; n];
    let mut deepest_per_piece = vec![0u32; family.pieces.len()];
    for l in 1..=levels {
        let piece = (dyadic_valuation(l) % m) as usize;
        let (a, b) = family.pieces[piece];
        let omega = (a + 1.0) * l as f64;
        if omega > levels as f64 {
            continue; // tooth narrower than one sample
        }
        deepest_per_piece[piece] = deepest_per_piece[piece].max(l);
        let theta = b * l as f64;
        let lo = 2f64.powi(-(l as i32));
        let hi = lo + 2f64.powf(-omega);
        let damp = if family.damping {
            1.0 / (l as f64 * l as f64)
        } else {
            1.0
        };
        fill_interval(&mut samples, lo, hi, damp * 2f64.powf(-theta));
    }
    let usable = deepest_per_piece.iter().copied().filter(|&l| l > 0);
    let l_use = usable.clone().min().unwrap_or(0);
    let l_max = deepest_per_piece.iter().copied().max().unwrap_or(0);
    if l_use == 0 {
        return Err(Error::InvalidParameter(
            "an affine piece has no resolvable tooth at this resolution".to_string(),
        ));
    }
    let some_piece_unresolved = deepest_per_piece.contains(&0);
    Ok(Signal {
        samples,
        meta: SignalMeta {
            generator: Generator::GeneralComb {
                family: family.clone(),
            },
            x0: 0.0,
            levels,
            fractional_s: 0.0,
            comb: Some(CombResolution {
                l_max,
                resolution_warning: some_piece_unresolved,
                finest_useful_level: levels - l_use,
            }),
        },
    })
}

/// Self-similar singularity |x-x0|^alpha omega_pm(log|x-x0|) with
/// log(a)-periodic profiles given as sampled single periods.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelfSimilarSpec {
    pub alpha: f64,
    /// Scaling ratio a > 1.
    pub ratio: f64,
    /// One period of omega_+ sampled uniformly on [0, ln a).
    pub omega_plus: Vec<f64>,
    /// One period of omega_- sampled uniformly on [0, ln a).
    pub omega_minus: Vec<f64>,
}

impl SelfSimilarSpec {
    pub fn validate(&self) -> Result<()> {
        if self.alpha <= -1.0 {
            return Err(Error::InvalidParameter(format!(
                "self-similar exponent must exceed -1, got {}",
                self.alpha
            )));
        }
        if !(self.ratio > 1.0) {
            return Err(Error::InvalidParameter(format!(
                "scaling ratio must exceed 1, got {}",
                self.ratio
            )));
        }
        for (name, w) in [("omega_plus", &self.omega_plus), ("omega_minus", &self.omega_minus)] {
            if w.is_empty() || w.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be a non-empty finite sample vector"
                )));
            }
        }
        Ok(())
    }

    fn interp(period: &[f64], log_ratio: f64, u: f64) -> f64 {
        let phase = u.rem_euclid(log_ratio) / log_ratio; // [0, 1)
        let n = period.len();
        let t = phase * n as f64;
        let i = t.floor() as usize % n;
        let frac = t - t.floor();
        let next = period[(i + 1) % n];
        period[i] * (1.0 - frac) + next * frac
    }
}

pub fn gen_selfsimilar(spec: &SelfSimilarSpec, x0: f64, levels: u32) -> Result<Signal> {
    spec.validate()?;
    let n = check_levels(levels)?;
    check_x0(x0)?;
    let log_ratio = spec.ratio.ln();
    let samples = grid(n)
        .map(|x| {
            let d = x - x0;
            let r = d.abs();
            let period = if d >= 0.0 {
                &spec.omega_plus
            } else {
                &spec.omega_minus
            };
            r.powf(spec.alpha) * SelfSimilarSpec::interp(period, log_ratio, r.ln())
        })
        .collect();
    Ok(Signal {
        samples,
        meta: SignalMeta {
            generator: Generator::SelfSimilar { spec: spec.clone() },
            x0,
            levels,
            fractional_s: 0.0,
            comb: None,
        },
    })
}

/// Sum |x-x0|^gamma + |x-x0|^alpha sin(1/|x-x0|^beta) with
/// alpha < gamma < alpha/(1+beta) < 0, so the chirp dominates at x0 but is
/// masked after fractional integration.
pub fn gen_cusp_plus_chirp(
    gamma: f64,
    alpha: f64,
    beta: f64,
    x0: f64,
    levels: u32,
) -> Result<Signal> {
    let n = check_levels(levels)?;
    check_x0(x0)?;
    if beta <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "oscillation exponent must be positive, got {beta}"
        )));
    }
    let ratio = alpha / (1.0 + beta);
    if !(alpha < gamma && gamma < ratio && ratio < 0.0) {
        return Err(Error::InvalidParameter(format!(
            "parameters must satisfy alpha < gamma < alpha/(1+beta) < 0; \
             got alpha {alpha}, gamma {gamma}, alpha/(1+beta) {ratio:.4}"
        )));
    }
    if alpha <= -1.0 {
        return Err(Error::InvalidParameter(format!(
            "chirp exponent must exceed -1, got {alpha}"
        )));
    }
    let samples = grid(n)
        .map(|x| {
            let r = (x - x0).abs();
            r.powf(gamma) + r.powf(alpha) * (1.0 / r.powf(beta)).sin()
        })
        .collect();
    Ok(Signal {
        samples,
        meta: SignalMeta {
            generator: Generator::CuspPlusChirp { gamma, alpha, beta },
            x0,
            levels,
            fractional_s: 0.0,
            comb: None,
        },
    })
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E3779B97F4A7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

fn unit_open(bits: u64) -> f64 {
    // (0, 1]: never returns 0 so the Box-Muller log is finite
    ((bits >> 11) + 1) as f64 / (1u64 << 53) as f64
}

/// Standard normal deviate for (seed, index), independent of call order.
fn normal_at(seed: u64, index: u64) -> f64 {
    let z1 = splitmix64(seed ^ index.wrapping_mul(0xD1B54A32D192ED03));
    let z2 = splitmix64(z1 ^ 0x2545F4914F6CDD1D);
    let u1 = unit_open(z1);
    let u2 = unit_open(z2);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// White Gaussian noise: IID standard normal samples, counter-based so the
/// output is deterministic per seed.
pub fn gen_wgn(levels: u32, seed: u64) -> Result<Signal> {
    let n = check_levels(levels)?;
    let samples = (0..n as u64).map(|i| normal_at(seed, i)).collect();
    Ok(Signal {
        samples,
        meta: SignalMeta {
            generator: Generator::Wgn { seed },
            x0: 0.5,
            levels,
            fractional_s: 0.0,
            comb: None,
        },
    })
}

/// Closed-form profile family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProfileShape {
    Cusp { alpha: f64 },
    Chirp { alpha: f64, beta: f64 },
    Comb { alpha: f64, gamma: f64 },
    GeneralComb { family: AffineFamily },
    SelfSimilar { alpha: f64 },
    CuspPlusChirp { gamma: f64, alpha: f64, beta: f64 },
}

/// Closed-form map p -> h_p together with the admissibility endpoint p0 and
/// the oscillation exponent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoreticalProfile {
    pub shape: ProfileShape,
    /// Largest p with local L^p membership; +inf when unrestricted.
    #[serde(with = "crate::serde_util::float_or_inf")]
    pub p0: f64,
    /// Oscillation exponent (0 for canonical profiles; gamma - 1 for the
    /// lacunary comb, where it is the Holder-endpoint value).
    pub beta_osc: f64,
}

impl TheoreticalProfile {
    /// h_p at a grid point. For p < 1 the comb families follow the leader
    /// definition, which flattens at the coarse-scale mass exponent.
    pub fn h_of_p(&self, p: f64) -> f64 {
        match &self.shape {
            ProfileShape::Cusp { alpha } | ProfileShape::SelfSimilar { alpha } => *alpha,
            ProfileShape::Chirp { alpha, .. } => *alpha,
            ProfileShape::CuspPlusChirp { alpha, .. } => *alpha,
            ProfileShape::Comb { alpha, gamma } => {
                let law = alpha + (gamma - 1.0) / p;
                if p >= 1.0 {
                    law
                } else {
                    law.min(alpha + gamma - 1.0)
                }
            }
            ProfileShape::GeneralComb { family } => {
                let law = family.rho(1.0 / p);
                if p >= 1.0 {
                    law
                } else {
                    law.min(family.mass_exponent())
                }
            }
        }
    }

    /// Sample h over a p grid (entries may include +inf).
    pub fn sample(&self, p_grid: &[f64]) -> Vec<(f64, f64)> {
        p_grid
            .iter()
            .map(|&p| {
                let h = if p.is_infinite() {
                    match &self.shape {
                        ProfileShape::Comb { alpha, .. } => *alpha,
                        ProfileShape::GeneralComb { family } => family.rho(0.0),
                        _ => self.h_of_p(1.0),
                    }
                } else {
                    self.h_of_p(p)
                };
                (p, h)
            })
            .collect()
    }
}

/// Closed-form profile for a generated signal's metadata.
pub fn theoretical_profile(meta: &SignalMeta) -> Result<TheoreticalProfile> {
    let profile = match &meta.generator {
        Generator::Cusp { alpha } => TheoreticalProfile {
            shape: ProfileShape::Cusp { alpha: *alpha },
            p0: if *alpha >= 0.0 { f64::INFINITY } else { -1.0 / alpha },
            beta_osc: 0.0,
        },
        Generator::Chirp { alpha, beta } => TheoreticalProfile {
            shape: ProfileShape::Chirp {
                alpha: *alpha,
                beta: *beta,
            },
            p0: if *alpha >= 0.0 { f64::INFINITY } else { -1.0 / alpha },
            beta_osc: *beta,
        },
        Generator::LacunaryComb { alpha, gamma } => TheoreticalProfile {
            shape: ProfileShape::Comb {
                alpha: *alpha,
                gamma: *gamma,
            },
            p0: if *alpha >= 0.0 {
                f64::INFINITY
            } else {
                -gamma / alpha
            },
            beta_osc: gamma - 1.0,
        },
        Generator::GeneralComb { family } => TheoreticalProfile {
            shape: ProfileShape::GeneralComb {
                family: family.clone(),
            },
            p0: family.p0,
            beta_osc: 0.0,
        },
        Generator::SelfSimilar { spec } => TheoreticalProfile {
            shape: ProfileShape::SelfSimilar { alpha: spec.alpha },
            p0: if spec.alpha >= 0.0 {
                f64::INFINITY
            } else {
                -1.0 / spec.alpha
            },
            beta_osc: 0.0,
        },
        Generator::CuspPlusChirp { gamma, alpha, beta } => TheoreticalProfile {
            shape: ProfileShape::CuspPlusChirp {
                gamma: *gamma,
                alpha: *alpha,
                beta: *beta,
            },
            p0: -1.0 / alpha,
            beta_osc: *beta,
        },
        Generator::Wgn { .. } => {
            return Err(Error::UnsupportedGenerator(
                "white Gaussian noise has no p-exponent profile (not an admissible distribution)"
                    .to_string(),
            ))
        }
        Generator::External => {
            return Err(Error::UnsupportedGenerator(
                "externally loaded signals carry no closed-form profile".to_string(),
            ))
        }
    };
    Ok(profile)
}

#[cfg(test)]
mod tests {
    use super::*;

    const L: u32 = 12;

    #[test]
    fn cusp_sample_value_at_quarter_distance() {
        // 0.25^0.5 = 0.5 at the grid point nearest distance 0.25
        let sig = gen_cusp(0.5, 0.5, 16).unwrap();
        let n = sig.len();
        let i = (0.75 * n as f64 - 0.5).round() as usize;
        let r = (sig.x_at(i) - 0.5).abs();
        assert!((sig.samples[i] - r.sqrt()).abs() < 1e-15);
        assert!((sig.samples[i] - 0.5).abs() < 1e-4);
    }

    #[test]
    fn cusp_rejects_even_integers_and_deep_negatives() {
        assert!(gen_cusp(2.0, 0.5, L).is_err());
        assert!(gen_cusp(0.0, 0.5, L).is_err());
        assert!(gen_cusp(-1.0, 0.5, L).is_err());
        assert!(gen_cusp(-1.3, 0.5, L).is_err());
        assert!(gen_cusp(0.6, 0.5, L).is_ok());
        assert!(gen_cusp(-0.4, 0.5, L).is_ok());
    }

    #[test]
    fn cusp_theoretical_profile() {
        let sig = gen_cusp(0.6, 0.5, L).unwrap();
        let prof = theoretical_profile(&sig.meta).unwrap();
        assert_eq!(prof.p0, f64::INFINITY);
        for p in [0.5, 1.0, 4.0, 64.0] {
            assert_eq!(prof.h_of_p(p), 0.6);
        }
        let neg = theoretical_profile(&gen_cusp(-0.4, 0.5, L).unwrap().meta).unwrap();
        assert!((neg.p0 - 2.5).abs() < 1e-12);
    }

    #[test]
    fn chirp_sample_value_is_r_sin_inv_r() {
        let sig = gen_chirp(1.0, 1.0, 0.5, L).unwrap();
        let i = 3 * (1 << L) / 4;
        let r = (sig.x_at(i) - 0.5).abs();
        assert!((sig.samples[i] - r * (1.0 / r).sin()).abs() < 1e-15);
    }

    #[test]
    fn chirp_profile_and_preconditions() {
        assert!(gen_chirp(0.5, 0.0, 0.5, L).is_err());
        assert!(gen_chirp(0.5, -1.0, 0.5, L).is_err());
        let prof = theoretical_profile(&gen_chirp(-0.3, 1.0, 0.5, L).unwrap().meta).unwrap();
        assert!((prof.p0 - 10.0 / 3.0).abs() < 1e-12);
        assert_eq!(prof.h_of_p(2.0), -0.3);
        assert_eq!(prof.beta_osc, 1.0);
        // primitive exponent shift for s = 1 is beta + 1
        assert!((prof.h_of_p(2.0) + (prof.beta_osc + 1.0) - 1.7).abs() < 1e-12);
    }

    #[test]
    fn comb_tooth_value_at_eighth() {
        // (alpha=1, gamma=2): tooth 3 covers [1/8, 1/8 + 2^-6] with value 2^-3
        let sig = gen_lacunary_comb(CombSpec { alpha: 1.0, gamma: 2.0 }, 16).unwrap();
        let n = sig.len() as f64;
        let i = (0.125f64 * n - 0.5).ceil() as usize; // first sample >= 1/8
        assert_eq!(sig.samples[i], 0.125);
        // just left of the tooth the signal vanishes
        assert_eq!(sig.samples[i - 1], 0.0);
    }

    #[test]
    fn comb_meta_and_profile() {
        let sig = gen_lacunary_comb(CombSpec { alpha: -0.2, gamma: 3.0 }, 16).unwrap();
        let comb = sig.meta.comb.as_ref().unwrap();
        assert_eq!(comb.l_max, 5);
        assert!(comb.resolution_warning); // 2^-15 width is 2 samples < 8
        assert_eq!(comb.finest_useful_level, 11);
        let prof = theoretical_profile(&sig.meta).unwrap();
        assert!((prof.h_of_p(2.0) - 0.8).abs() < 1e-12);
        assert!((prof.p0 - 15.0).abs() < 1e-12);
        assert!(gen_lacunary_comb(CombSpec { alpha: 0.2, gamma: 1.0 }, L).is_err());
        assert!(gen_lacunary_comb(CombSpec { alpha: -3.2, gamma: 3.0 }, L).is_err());
    }

    #[test]
    fn comb_support_measure_matches_geometric_sum() {
        // lacunarity check: sum of resolved tooth widths below scale 2^-J
        let gamma = 2.0;
        let sig = gen_lacunary_comb(CombSpec { alpha: 0.3, gamma }, 16).unwrap();
        let l_max = sig.meta.comb.as_ref().unwrap().l_max;
        for j in 1..=l_max {
            let direct: f64 = (j..=l_max).map(|l| 2f64.powf(-gamma * l as f64)).sum();
            let q = 2f64.powf(-gamma);
            let closed = (q.powi(j as i32) - q.powi(l_max as i32 + 1)) / (1.0 - q);
            assert!((direct - closed).abs() < 1e-12);
        }
    }

    #[test]
    fn general_comb_piece_selection() {
        // l = 12 = 2^2 * 3 selects piece 2 mod M
        assert_eq!(dyadic_valuation(12), 2);
        assert_eq!(dyadic_valuation(12) % 2, 0);
        assert_eq!(dyadic_valuation(8), 3);
    }

    #[test]
    fn general_comb_single_piece_equals_lacunary_comb() {
        // one piece (a, b) = (gamma-1, alpha), damping off
        let alpha = 0.3;
        let gamma = 2.0;
        let family = AffineFamily {
            pieces: vec![(gamma - 1.0, alpha)],
            p0: f64::INFINITY,
            damping: false,
        };
        let a = gen_general_comb(&family, 14).unwrap();
        let b = gen_lacunary_comb(CombSpec { alpha, gamma }, 14).unwrap();
        assert_eq!(a.samples, b.samples);
    }

    #[test]
    fn general_comb_two_piece_profile_has_kink_at_two() {
        let family = AffineFamily {
            pieces: vec![(0.0, 0.5), (1.0, 0.0)],
            p0: f64::INFINITY,
            damping: false,
        };
        let sig = gen_general_comb(&family, 16).unwrap();
        let prof = theoretical_profile(&sig.meta).unwrap();
        for (p, want) in [(1.0, 0.5), (2.0, 0.5), (4.0, 0.25), (8.0, 0.125)] {
            assert!(
                (prof.h_of_p(p) - want).abs() < 1e-12,
                "h({p}) = {} want {want}",
                prof.h_of_p(p)
            );
        }
        // family-1 teeth stop at l = 8 (omega = 2l <= 16)
        assert_eq!(sig.meta.comb.as_ref().unwrap().finest_useful_level, 8);
    }

    #[test]
    fn general_comb_rejects_decreasing_rho() {
        let family = AffineFamily {
            pieces: vec![(-1.0, 0.0)],
            p0: 2.0,
            damping: true,
        };
        assert!(family.validate().is_err());
    }

    #[test]
    fn selfsimilar_value_at_quarter() {
        // omega_+(u) = 2 + cos(2 pi u / ln 2), a = 2, alpha = 0.5:
        // at distance 0.25, ln(0.25)/ln(2) = -2 so omega = 3, value 1.5
        let m = 512;
        let log2 = std::f64::consts::LN_2;
        let period: Vec<f64> = (0..m)
            .map(|k| 2.0 + (2.0 * std::f64::consts::PI * k as f64 / m as f64).cos())
            .collect();
        let spec = SelfSimilarSpec {
            alpha: 0.5,
            ratio: 2.0,
            omega_plus: period.clone(),
            omega_minus: period,
        };
        let sig = gen_selfsimilar(&spec, 0.5, 16).unwrap();
        let n = sig.len() as f64;
        // sample nearest x = 0.75 from above keeps r close to 0.25
        let i = (0.75 * n - 0.5).round() as usize;
        let r: f64 = (sig.x_at(i) - 0.5).abs();
        let want = r.sqrt() * (2.0 + (2.0 * std::f64::consts::PI * (r.ln() / log2)).cos());
        // linear interpolation over 512 period nodes costs ~(2 pi / 512)^2
        assert!((sig.samples[i] - want).abs() < 1e-4);
        assert!((sig.samples[i] - 1.5).abs() < 2e-3);
    }

    #[test]
    fn selfsimilar_complex_exponent_form() {
        // |x-x0|^alpha cos(beta log|x-x0|) realized with omega(u) = cos(beta u);
        // log(a)-periodicity requires beta = 2 pi / ln a
        let ratio: f64 = 2.0;
        let beta = 2.0 * std::f64::consts::PI / ratio.ln();
        let m = 1024;
        let period: Vec<f64> = (0..m)
            .map(|k| (beta * (k as f64 / m as f64) * ratio.ln()).cos())
            .collect();
        let spec = SelfSimilarSpec {
            alpha: 0.4,
            ratio,
            omega_plus: period.clone(),
            omega_minus: period,
        };
        let sig = gen_selfsimilar(&spec, 0.25, 14).unwrap();
        let i = 3 * (1 << 14) / 4;
        let r: f64 = (sig.x_at(i) - 0.25).abs();
        let want = r.powf(0.4) * (beta * r.ln()).cos();
        assert!((sig.samples[i] - want).abs() < 1e-3, "{} vs {want}", sig.samples[i]);
        let prof = theoretical_profile(&sig.meta).unwrap();
        assert_eq!(prof.h_of_p(2.0), 0.4);
    }

    #[test]
    fn selfsimilar_constant_profile_reduces_to_cusp() {
        let spec = SelfSimilarSpec {
            alpha: 0.6,
            ratio: 2.0,
            omega_plus: vec![1.0],
            omega_minus: vec![1.0],
        };
        let a = gen_selfsimilar(&spec, 0.5, L).unwrap();
        let b = gen_cusp(0.6, 0.5, L).unwrap();
        for (u, v) in a.samples.iter().zip(&b.samples) {
            assert!((u - v).abs() < 1e-12);
        }
    }

    #[test]
    fn cusp_plus_chirp_parameter_chain() {
        assert!(gen_cusp_plus_chirp(-0.2, -0.3, 1.0, 0.5, L).is_ok());
        // gamma = -0.25 fails: alpha/(1+beta) = -0.2727 is below gamma
        assert!(gen_cusp_plus_chirp(-0.25, -0.3, 0.1, 0.5, L).is_err());
        assert!(gen_cusp_plus_chirp(-0.4, -0.3, 1.0, 0.5, L).is_err());
    }

    #[test]
    fn wgn_is_deterministic_with_bounded_mean() {
        let a = gen_wgn(16, 7).unwrap();
        let b = gen_wgn(16, 7).unwrap();
        assert_eq!(a.samples, b.samples);
        let c = gen_wgn(16, 8).unwrap();
        assert_ne!(a.samples, c.samples);
        let n = a.len() as f64;
        let mean = a.samples.iter().sum::<f64>() / n;
        assert!(mean.abs() < 4.0 / n.sqrt(), "mean {mean}");
        let var = a.samples.iter().map(|v| v * v).sum::<f64>() / n;
        assert!((var - 1.0).abs() < 0.05, "variance {var}");
        assert!(theoretical_profile(&a.meta).is_err());
    }

    #[test]
    fn theorem_one_invariants_on_theoretical_profiles() {
        // nonincreasing in p; r -> h(1/r) concave on a uniform r grid
        let metas = vec![
            gen_cusp(0.6, 0.5, L).unwrap().meta,
            gen_cusp(-0.4, 0.5, L).unwrap().meta,
            gen_chirp(-0.3, 1.0, 0.5, L).unwrap().meta,
            gen_lacunary_comb(CombSpec { alpha: -0.2, gamma: 3.0 }, L).unwrap().meta,
            gen_lacunary_comb(CombSpec { alpha: 0.3, gamma: 2.0 }, L).unwrap().meta,
            gen_general_comb(
                &AffineFamily {
                    pieces: vec![(0.0, 0.5), (1.0, 0.0)],
                    p0: f64::INFINITY,
                    damping: false,
                },
                L,
            )
            .unwrap()
            .meta,
        ];
        for meta in metas {
            let prof = theoretical_profile(&meta).unwrap();
            let p_max = if prof.p0.is_finite() { prof.p0 } else { 64.0 };
            // monotone in p on [0.25, p_max)
            let mut prev = f64::INFINITY;
            let mut p = 0.25;
            while p < p_max {
                let h = prof.h_of_p(p);
                assert!(h <= prev + 1e-12, "{meta:?} not nonincreasing at p = {p}");
                prev = h;
                p *= 1.25;
            }
            // concavity in r on a uniform grid within [1/p_max.., 4]
            let r_lo = (1.0 / p_max).max(1e-3);
            let steps = 128usize;
            let dr = (4.0 - r_lo) / steps as f64;
            for k in 1..steps {
                let r = r_lo + k as f64 * dr;
                let second =
                    prof.h_of_p(1.0 / (r - dr)) - 2.0 * prof.h_of_p(1.0 / r) + prof.h_of_p(1.0 / (r + dr));
                assert!(second <= 1e-12, "{meta:?} not concave at r = {r}: {second}");
            }
        }
    }

    #[test]
    fn generators_are_pure() {
        let a = gen_lacunary_comb(CombSpec { alpha: -0.2, gamma: 3.0 }, L).unwrap();
        let b = gen_lacunary_comb(CombSpec { alpha: -0.2, gamma: 3.0 }, L).unwrap();
        assert_eq!(a, b);
        let c = gen_chirp(-0.3, 1.0, 0.5, L).unwrap();
        let d = gen_chirp(-0.3, 1.0, 0.5, L).unwrap();
        assert_eq!(c, d);
    }

    #[test]
    fn all_samples_finite() {
        for sig in [
            gen_cusp(-0.9, 0.5, L).unwrap(),
            gen_chirp(-0.9, 2.0, 0.25, L).unwrap(),
            gen_cusp_plus_chirp(-0.2, -0.3, 1.0, 0.5, L).unwrap(),
        ] {
            assert!(sig.samples.iter().all(|v| v.is_finite()));
        }
    }
}
