//! Analysis configuration and its per-signal resolution.
//!
//! Every knob has a documented default; unset fields are derived from the
//! signal metadata. The derivations encode scale-validity facts about the
//! reference families:
//!
//! * pointwise fits default to [ceil(L/2), J-1]: finer levels carry the
//!   resolution-truncation bias of negative exponents (the leader sum stops
//!   at the data resolution while the definition extends below it);
//! * chirps push the fit floor to ceil(L*beta/(1+beta)), the level below
//!   which the oscillation ridge at distance r ~ a is finer than the grid;
//! * combs anchored at x0 = 0 switch to a short filter (db2), raw (left)
//!   alignment and clipped-window inclusion, and restrict fits to
//!   [L - l_use, J] where l_use is the deepest resolvable tooth: below
//!   that scale the x0 window holds no comb content at all.

use crate::dwt::Alignment;
use crate::error::{Error, Result};
use crate::signal::{Generator, SignalMeta};
use serde::{Deserialize, Serialize};

pub const DEFAULT_P_GRID: [f64; 7] = [0.25, 0.5, 1.0, 2.0, 4.0, 8.0, f64::INFINITY];
pub const DEFAULT_WAVELET_ORDER: u32 = 3;

/// User-facing knobs; `None` means "derive from the signal".
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnalysisConfig {
    pub wavelet_order: Option<u32>,
    pub j_max: Option<u32>,
    /// Pointwise (leader/direct) regression range.
    pub pointwise_fit: Option<(u32, u32)>,
    /// Structure-function / hmin regression range.
    pub global_fit: Option<(u32, u32)>,
    pub alignment: Option<Alignment>,
    pub include_clipped: Option<bool>,
    #[serde(with = "crate::serde_util::vec_float_or_inf")]
    pub p_grid: Vec<f64>,
    /// Admissibility margin in multiples of the eta slope stderr.
    pub admissibility_margin: f64,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            wavelet_order: None,
            j_max: None,
            pointwise_fit: None,
            global_fit: None,
            alignment: None,
            include_clipped: None,
            p_grid: DEFAULT_P_GRID.to_vec(),
            admissibility_margin: crate::scaling::DEFAULT_ADMISSIBILITY_MARGIN,
        }
    }
}

/// Fully determined analysis parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResolvedConfig {
    pub wavelet_order: u32,
    pub j_max: u32,
    pub pointwise_fit: (u32, u32),
    pub global_fit: (u32, u32),
    pub alignment: Alignment,
    pub include_clipped: bool,
    #[serde(with = "crate::serde_util::vec_float_or_inf")]
    pub p_grid: Vec<f64>,
    pub admissibility_margin: f64,
}

impl AnalysisConfig {
    /// Resolve against a signal's metadata.
    pub fn resolve(&self, meta: &SignalMeta) -> Result<ResolvedConfig> {
        let levels = meta.levels;
        if levels < 8 {
            return Err(Error::InvalidParameter(format!(
                "signal too short for analysis: {levels} levels"
            )));
        }
        let j_max = self.j_max.unwrap_or(levels - 2);
        if j_max < 4 || j_max > levels - 2 {
            return Err(Error::InvalidParameter(format!(
                "j_max {j_max} outside 4..={}",
                levels - 2
            )));
        }

        let is_comb = matches!(
            meta.generator,
            Generator::LacunaryComb { .. } | Generator::GeneralComb { .. }
        );
        let ridge_floor = |beta: f64| -> u32 {
            let half = (levels as f64 / 2.0).ceil() as u32;
            let ridge = (levels as f64 * beta / (1.0 + beta)).ceil() as u32;
            half.max(ridge)
        };

        let wavelet_order = self
            .wavelet_order
            .unwrap_or(if is_comb { 2 } else { DEFAULT_WAVELET_ORDER });

        let alignment = self.alignment.unwrap_or({
            // singularities in the first finest cube need raw indexing so
            // the analysis window stays clear of the periodic seam
            if meta.x0 * ((1u64 << levels) as f64) < 2.0 {
                Alignment::Left
            } else {
                Alignment::Center
            }
        });

        let include_clipped = self.include_clipped.unwrap_or(is_comb || meta.x0 == 0.0);

        let pointwise_fit = self.pointwise_fit.unwrap_or_else(|| {
            let default_floor = (levels as f64 / 2.0).ceil() as u32;
            match &meta.generator {
                Generator::LacunaryComb { .. } | Generator::GeneralComb { .. } => {
                    let floor = meta
                        .comb
                        .as_ref()
                        .map(|c| c.finest_useful_level)
                        .unwrap_or(default_floor);
                    (floor.max(1), j_max)
                }
                Generator::Chirp { beta, .. } => {
                    // steep ridges push the floor up; keep at least 4 levels
                    let floor = ridge_floor(*beta);
                    (floor, j_max.saturating_sub(2).max(floor + 3).min(j_max))
                }
                Generator::CuspPlusChirp { beta, .. } => {
                    let floor = ridge_floor(*beta) + 1;
                    (floor, j_max.saturating_sub(1).max(floor + 3).min(j_max))
                }
                _ => (default_floor, j_max.saturating_sub(1)),
            }
        });

        let global_fit = self.global_fit.unwrap_or((3, j_max.saturating_sub(2)));

        let check = |name: &str, (a, b): (u32, u32)| -> Result<()> {
            if a < 1 || b > j_max || a >= b {
                return Err(Error::InvalidParameter(format!(
                    "{name} fit range [{a}, {b}] invalid for j_max {j_max}"
                )));
            }
            Ok(())
        };
        check("pointwise", pointwise_fit)?;
        check("global", global_fit)?;

        if self.p_grid.is_empty() {
            return Err(Error::InvalidParameter("empty p grid".to_string()));
        }
        let finite_ascending = self
            .p_grid
            .windows(2)
            .all(|w| w[0] < w[1])
            && self.p_grid.iter().all(|&p| p > 0.0);
        if !finite_ascending {
            return Err(Error::InvalidParameter(
                "p grid must be ascending and positive".to_string(),
            ));
        }

        Ok(ResolvedConfig {
            wavelet_order,
            j_max,
            pointwise_fit,
            global_fit,
            alignment,
            include_clipped,
            p_grid: self.p_grid.clone(),
            admissibility_margin: self.admissibility_margin,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::{gen_chirp, gen_cusp, gen_lacunary_comb, CombSpec};

    #[test]
    fn cusp_defaults() {
        let meta = gen_cusp(0.6, 0.5, 16).unwrap().meta;
        let r = AnalysisConfig::default().resolve(&meta).unwrap();
        assert_eq!(r.wavelet_order, 3);
        assert_eq!(r.j_max, 14);
        assert_eq!(r.pointwise_fit, (8, 13));
        assert_eq!(r.global_fit, (3, 12));
        assert_eq!(r.alignment, Alignment::Center);
        assert!(!r.include_clipped);
    }

    #[test]
    fn comb_defaults_follow_tooth_resolution() {
        let meta = gen_lacunary_comb(CombSpec { alpha: -0.2, gamma: 3.0 }, 16)
            .unwrap()
            .meta;
        let r = AnalysisConfig::default().resolve(&meta).unwrap();
        assert_eq!(r.wavelet_order, 2);
        assert_eq!(r.pointwise_fit, (11, 14));
        assert_eq!(r.alignment, Alignment::Left);
        assert!(r.include_clipped);
    }

    #[test]
    fn chirp_floor_tracks_the_ridge() {
        let meta = gen_chirp(-0.3, 1.0, 0.5, 16).unwrap().meta;
        let r = AnalysisConfig::default().resolve(&meta).unwrap();
        assert_eq!(r.pointwise_fit, (8, 12));
        let meta = gen_chirp(0.5, 2.0, 0.5, 16).unwrap().meta;
        let r = AnalysisConfig::default().resolve(&meta).unwrap();
        assert_eq!(r.pointwise_fit.0, 11);
    }

    #[test]
    fn explicit_values_win() {
        let meta = gen_cusp(0.6, 0.5, 16).unwrap().meta;
        let cfg = AnalysisConfig {
            wavelet_order: Some(5),
            pointwise_fit: Some((4, 9)),
            ..AnalysisConfig::default()
        };
        let r = cfg.resolve(&meta).unwrap();
        assert_eq!(r.wavelet_order, 5);
        assert_eq!(r.pointwise_fit, (4, 9));
    }

    #[test]
    fn bad_ranges_rejected() {
        let meta = gen_cusp(0.6, 0.5, 16).unwrap().meta;
        let cfg = AnalysisConfig {
            pointwise_fit: Some((9, 9)),
            ..AnalysisConfig::default()
        };
        assert!(cfg.resolve(&meta).is_err());
        let cfg = AnalysisConfig {
            j_max: Some(15),
            ..AnalysisConfig::default()
        };
        assert!(cfg.resolve(&meta).is_err());
    }
}
