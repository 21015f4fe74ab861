//! Seeded additive white Gaussian noise and SNR conventions.
//!
//! Samples come from ChaCha8 (seeded through `SeedableRng::seed_from_u64`)
//! pushed through the ziggurat standard-normal transform of `rand_distr`.
//! Both are platform independent, so a given seed reproduces bit-identical
//! noise everywhere.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::spectrum::{synthesize, DetectorModel, GroundTruth, Sampling, Spectrum};

/// How an SNR value maps to a noise standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SnrConvention {
    /// Brillouin peak amplitude over σ.
    #[default]
    PeakBased,
    /// Average signal per detector pixel over σ, `I_∞ Δ / (X σ)`.
    PerPixelAverage,
}

impl SnrConvention {
    pub fn as_str(&self) -> &'static str {
        match self {
            SnrConvention::PeakBased => "peak-based",
            SnrConvention::PerPixelAverage => "per-pixel-average",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "peak-based" | "peak" => Some(SnrConvention::PeakBased),
            "per-pixel-average" | "per-pixel" => Some(SnrConvention::PerPixelAverage),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub sigma: f64,
    pub snr_convention: SnrConvention,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn new(sigma: f64, seed: u64) -> Self {
        NoiseSpec {
            sigma,
            snr_convention: SnrConvention::PeakBased,
            seed,
        }
    }
}

/// One splitmix64 output step.
#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Folds a path of indices into a base seed: `s ← splitmix64(s ⊕ index)`
/// for each index in turn. Distinct paths give decorrelated streams and the
/// result does not depend on evaluation order.
pub fn derive_seed(base: u64, path: &[u64]) -> u64 {
    path.iter().fold(splitmix64(base), |s, &i| splitmix64(s ^ i))
}

/// Noise σ that realises `target_snr` on the spectrum described by `truth`.
pub fn sigma_for_snr(
    target_snr: f64,
    truth: &GroundTruth,
    detector: &DetectorModel,
    convention: SnrConvention,
) -> Result<f64> {
    if !(target_snr > 0.0) {
        return Err(Error::invalid(format!("SNR must be positive, got {target_snr}")));
    }
    if truth.brillouin_amplitude() <= 0.0 {
        return Err(Error::UndefinedSnr);
    }
    match convention {
        SnrConvention::PeakBased => Ok(truth.brillouin_amplitude() / target_snr),
        SnrConvention::PerPixelAverage => {
            let clean = synthesize(truth, detector, Sampling::CenterSample)?;
            let integrated = clean.integrated_intensity();
            Ok(integrated * detector.pixel_size_m / (detector.detector_width_m * target_snr))
        }
    }
}

/// Re-expresses a peak-based SNR in the per-pixel-average convention.
pub fn peak_to_per_pixel_snr(peak_snr: f64, truth: &GroundTruth, detector: &DetectorModel) -> Result<f64> {
    let sigma = sigma_for_snr(peak_snr, truth, detector, SnrConvention::PeakBased)?;
    let clean = synthesize(truth, detector, Sampling::CenterSample)?;
    Ok(clean.integrated_intensity() * detector.pixel_size_m / (detector.detector_width_m * sigma))
}

/// `n_i ~ N(0, σ²)` i.i.d. for each pixel.
pub fn gaussian_noise(len: usize, sigma: f64, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len)
        .map(|_| {
            let z: f64 = StandardNormal.sample(&mut rng);
            sigma * z
        })
        .collect()
}

/// Adds seeded white Gaussian noise to every pixel of `clean`.
pub fn add_noise(clean: &Spectrum, spec: &NoiseSpec) -> Spectrum {
    let noise = gaussian_noise(clean.len(), spec.sigma, spec.seed);
    let noisy: Vec<f64> = clean.intensities().iter().zip(noise).map(|(c, n)| c + n).collect();
    clean
        .with_intensities(noisy)
        .expect("noise vector has the spectrum's length")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn standard_clean() -> Spectrum {
        synthesize(&GroundTruth::standard(), &DetectorModel::standard(), Sampling::CenterSample).unwrap()
    }

    #[test]
    fn peak_based_sigma() {
        let det = DetectorModel::standard();
        let truth = GroundTruth::standard();
        assert_eq!(sigma_for_snr(10.0, &truth, &det, SnrConvention::PeakBased).unwrap(), 100.0);
        assert_eq!(sigma_for_snr(1.0, &truth, &det, SnrConvention::PeakBased).unwrap(), 1000.0);
    }

    #[test]
    fn per_pixel_sigma_matches_trapezoid_oracle() {
        let det = DetectorModel::standard();
        let truth = GroundTruth::standard();
        // Independent trapezoid over the pixel index of the synthesized vector.
        let axis = det.frequency_axis();
        let v: Vec<f64> = axis.iter().map(|&f| truth.peaks.iter().map(|p| p.value(f)).sum()).collect();
        let mut trap = 0.0;
        for w in v.windows(2) {
            trap += 0.5 * (w[0] + w[1]);
        }
        let expect = trap * 6.5e-6 / (16.6e-3 * 5.0);
        let got = sigma_for_snr(5.0, &truth, &det, SnrConvention::PerPixelAverage).unwrap();
        assert_relative_eq!(got, expect, max_relative = 1e-12);
    }

    #[test]
    fn zero_amplitude_is_undefined() {
        let truth = GroundTruth::brillouin(1e4, 1e9, 0.0, 10e9, 1e9);
        let err = sigma_for_snr(5.0, &truth, &DetectorModel::standard(), SnrConvention::PeakBased);
        assert!(matches!(err, Err(Error::UndefinedSnr)));
    }

    #[test]
    fn vanishing_sigma_leaves_input() {
        let clean = standard_clean();
        let noisy = add_noise(&clean, &NoiseSpec::new(1e-30, 7));
        for (a, b) in clean.intensities().iter().zip(noisy.intensities()) {
            assert!(((a - b) / a.abs().max(1e-300)).abs() < 1e-20);
        }
    }

    #[test]
    fn fixed_seed_is_bit_identical() {
        let clean = standard_clean();
        let spec = NoiseSpec::new(100.0, 42);
        let a = add_noise(&clean, &spec);
        let b = add_noise(&clean, &spec);
        assert_eq!(a.to_csv_string(), b.to_csv_string());
        let c = add_noise(&clean, &NoiseSpec::new(100.0, 43));
        assert_ne!(a, c);
    }

    #[test]
    fn law_of_large_numbers() {
        let n = 120usize;
        let reps = 100_000u64;
        let sigma = 100.0;
        let (mut sum, mut sum2) = (0.0f64, 0.0f64);
        for k in 0..reps {
            for z in gaussian_noise(n, sigma, derive_seed(9, &[k])) {
                sum += z;
                sum2 += z * z;
            }
        }
        let m = (n as u64 * reps) as f64;
        let mean = sum / m;
        let std = (sum2 / m - mean * mean).sqrt();
        assert!(mean.abs() < sigma * 3.3 / m.sqrt(), "mean {mean}");
        assert!((std - sigma).abs() < 0.01 * sigma, "std {std}");
    }

    #[test]
    fn averaging_converges_to_clean() {
        let clean = standard_clean();
        let m = 10_000u64;
        let sigma = 100.0;
        let mut acc = vec![0.0; clean.len()];
        for k in 0..m {
            let noisy = add_noise(&clean, &NoiseSpec::new(sigma, derive_seed(1, &[k])));
            for (a, v) in acc.iter_mut().zip(noisy.intensities()) {
                *a += v;
            }
        }
        let n = clean.len() as f64;
        let rms = (acc
            .iter()
            .zip(clean.intensities())
            .map(|(a, c)| (a / m as f64 - c).powi(2))
            .sum::<f64>()
            / n)
            .sqrt();
        let expected = sigma / (m as f64).sqrt();
        // RMS of N averaged residuals has relative standard error 1/√(2N).
        let se = expected / (2.0 * n).sqrt();
        assert!((rms - expected).abs() < 3.0 * se, "rms {rms} vs {expected}");
    }

    #[test]
    fn noise_is_white() {
        let sigma = 100.0;
        let n = 4096;
        let z = gaussian_noise(n, sigma, 2024);
        for lag in 1..5 {
            let r: f64 = z.iter().zip(&z[lag..]).map(|(a, b)| a * b).sum::<f64>() / (n - lag) as f64;
            assert!(r.abs() < 4.0 / (n as f64).sqrt() * sigma * sigma, "lag {lag}: {r}");
        }
    }

    #[test]
    fn derived_seeds_are_distinct() {
        let a = derive_seed(5, &[0, 1]);
        let b = derive_seed(5, &[1, 0]);
        let c = derive_seed(5, &[0, 2]);
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_eq!(a, derive_seed(5, &[0, 1]));
    }
}
