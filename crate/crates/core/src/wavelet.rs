//! Daubechies analysis filters.
//!
//! The low-pass taps `h` are the standard Daubechies sequences with
//! `sum h = sqrt(2)`; the high-pass is the quadrature mirror
//! `g[m] = (-1)^m h[F-1-m]`. Analysis is by correlation,
//! `a[k] = sum_m h[m] x[2k+m]`, so coefficient `k` covers samples starting
//! at `2k` (left-aligned support).

use crate::error::{Error, Result};

/// Orthonormal Daubechies wavelet with `n_vanishing` vanishing moments.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletSpec {
    n_vanishing: u32,
    lowpass: Vec<f64>,
    highpass: Vec<f64>,
}

impl WaveletSpec {
    /// Daubechies wavelet of order `n` (dbN, N_psi = n vanishing moments),
    /// supported for n = 1..=10.
    pub fn daubechies(n: u32) -> Result<Self> {
        let lowpass: Vec<f64> = match n {
            1 => vec![
                0.7071067811865475,
                0.7071067811865475,
            ],
            2 => vec![
                0.48296291314453427,
                0.836516303737808,
                0.2241438680420133,
                -0.12940952255126045,
            ],
            3 => vec![
                0.3326705529500827,
                0.8068915093110927,
                0.45987750211849154,
                -0.1350110200102546,
                -0.08544127388202664,
                0.03522629188570957,
            ],
            4 => vec![
                0.23037781330889645,
                0.7148465705529156,
                0.6308807679298591,
                -0.02798376941685969,
                -0.18703481171909303,
                0.030841381835560643,
                0.032883011666885176,
                -0.010597401785069018,
            ],
            5 => vec![
                0.16010239797419296,
                0.6038292697971899,
                0.7243085284377732,
                0.13842814590132077,
                -0.2422948870663823,
                -0.03224486958463849,
                0.07757149384004572,
                -0.006241490212798265,
                -0.012580751999081997,
                0.0033357252854737717,
            ],
            6 => vec![
                0.11154074335010943,
                0.49462389039845295,
                0.7511339080210955,
                0.3152503517091978,
                -0.2262646939654393,
                -0.12976686756726202,
                0.09750160558732293,
                0.027522865530305637,
                -0.03158203931748603,
                0.0005538422011614953,
                0.004777257510945506,
                -0.0010773010853084796,
            ],
            7 => vec![
                0.07785205408500924,
                0.39653931948191756,
                0.7291320908462356,
                0.4697822874051932,
                -0.1439060039285656,
                -0.22403618499387515,
                0.07130921926683054,
                0.08061260915108302,
                -0.03802993693501447,
                -0.01657454163066698,
                0.012550998556099835,
                0.0004295779729213629,
                -0.0018016407040474926,
                0.00035371379997452073,
            ],
            8 => vec![
                0.05441584224310401,
                0.3128715909143,
                0.6756307362972901,
                0.5853546836542075,
                -0.0158291052563483,
                -0.28401554296154596,
                0.00047248457391266073,
                0.12874742662047672,
                -0.017369301001807794,
                -0.04408825393079513,
                0.013981027917398258,
                0.008746094047405754,
                -0.004870352993451575,
                -0.0003917403733769459,
                0.0006754494064505692,
                -0.00011747678412476947,
            ],
            9 => vec![
                0.038077947363878366,
                0.24383467461259045,
                0.6048231236901113,
                0.6572880780513007,
                0.13319738582500756,
                -0.29327378327917436,
                -0.09684078322297585,
                0.148540749338106,
                0.030725681479334493,
                -0.0676328290613324,
                0.00025094711483195797,
                0.022361662123679016,
                -0.004723204757751422,
                -0.00428150368246345,
                0.00184764688305623,
                0.00023038576352319592,
                -0.00025196318894271067,
                3.9347320316271664e-05,
            ],
            10 => vec![
                0.026670057900555676,
                0.18817680007769236,
                0.5272011889317282,
                0.6884590394536074,
                0.28117234366058014,
                -0.24984642432731433,
                -0.19594627437737563,
                0.12736934033579111,
                0.09305736460356585,
                -0.07139414716639811,
                -0.029457536821877173,
                0.03321267405934122,
                0.003606553566954734,
                -0.010733175483330634,
                0.0013953517470529245,
                0.001992405295185085,
                -0.0006858566949597138,
                -0.00011646685512928564,
                9.35886703200701e-05,
                -1.3264202894521305e-05,
            ],
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "Daubechies order must be in 1..=10, got {n}"
                )))
            }
        };
        let len = lowpass.len();
        let highpass: Vec<f64> = (0..len)
            .map(|m| {
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                sign * lowpass[len - 1 - m]
            })
            .collect();
        Ok(Self {
            n_vanishing: n,
            lowpass,
            highpass,
        })
    }

    pub fn n_vanishing(&self) -> u32 {
        self.n_vanishing
    }

    pub fn lowpass(&self) -> &[f64] {
        &self.lowpass
    }

    pub fn highpass(&self) -> &[f64] {
        &self.highpass
    }

    pub fn filter_len(&self) -> usize {
        self.lowpass.len()
    }

    /// Largest deviation from orthonormality: |sum h^2 - 1| and the
    /// even-shift autocorrelations.
    pub fn orthonormality_defect(&self) -> f64 {
        let h = &self.lowpass;
        let mut worst = (h.iter().map(|v| v * v).sum::<f64>() - 1.0).abs();
        let mut shift = 2;
        while shift < h.len() {
            let dot: f64 = (0..h.len() - shift).map(|m| h[m] * h[m + shift]).sum();
            worst = worst.max(dot.abs());
            shift += 2;
        }
        worst
    }

    /// Largest absolute moment of the high-pass taps against the
    /// normalized monomials (m/(F-1))^q, over degrees q < N_psi.
    pub fn vanishing_moment_defect(&self) -> f64 {
        let g = &self.highpass;
        let scale = (g.len() - 1) as f64;
        let mut worst: f64 = 0.0;
        for q in 0..self.n_vanishing {
            let s: f64 = g
                .iter()
                .enumerate()
                .map(|(m, gm)| gm * (m as f64 / scale).powi(q as i32))
                .sum();
            worst = worst.max(s.abs());
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orthonormality_within_1e12_for_all_orders() {
        for n in 1..=10 {
            let w = WaveletSpec::daubechies(n).unwrap();
            assert!(
                w.orthonormality_defect() < 1e-12,
                "db{n} orthonormality defect {}",
                w.orthonormality_defect()
            );
        }
    }

    #[test]
    fn vanishing_moments_within_1e10() {
        for n in 1..=10 {
            let w = WaveletSpec::daubechies(n).unwrap();
            assert!(
                w.vanishing_moment_defect() < 1e-10,
                "db{n} moment defect {}",
                w.vanishing_moment_defect()
            );
        }
    }

    #[test]
    fn rejects_unsupported_order() {
        assert!(WaveletSpec::daubechies(0).is_err());
        assert!(WaveletSpec::daubechies(11).is_err());
    }

    #[test]
    fn highpass_is_quadrature_mirror() {
        let w = WaveletSpec::daubechies(2).unwrap();
        // g sums to zero (one vanishing moment at least)
        let s: f64 = w.highpass().iter().sum();
        assert!(s.abs() < 1e-14);
        assert_eq!(w.filter_len(), 4);
    }
}
