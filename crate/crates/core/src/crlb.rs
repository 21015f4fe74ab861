//! Cramér–Rao lower bound on the variance of Brillouin-shift estimates for
//! a dispersion-limited spectrometer with a pixelated detector and white
//! Gaussian noise.
//!
//! ```text
//! var(Ω̂) ≥ (πΔ / 4X²) · (αΓ + γ)³ / SNR² · (1 + 2I)² / (α² I²)
//! ```
//!
//! Δ is the pixel size and X the detector width (m), α the dispersion
//! (m/Hz), Γ the Brillouin FWHM (Hz), γ the response FWHM expressed on the
//! detector (m, converted here from Hz through α), I the Brillouin/Rayleigh
//! amplitude ratio and SNR the average signal per pixel over σ. Units:
//! m · m³ / (m²·m²/Hz²) = Hz².

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::spectrum::DetectorModel;

#[derive(Debug, Clone, PartialEq)]
pub struct CrlbInputs {
    pub detector: DetectorModel,
    pub brillouin_fwhm_hz: f64,
    pub relative_intensity: f64,
    pub snr_per_pixel: f64,
    /// Optional provenance of `snr_per_pixel`; checked for consistency when
    /// both are present.
    pub integrated_intensity: Option<f64>,
    pub noise_sigma: Option<f64>,
}

impl CrlbInputs {
    pub fn new(detector: DetectorModel, brillouin_fwhm_hz: f64, relative_intensity: f64, snr_per_pixel: f64) -> Self {
        CrlbInputs {
            detector,
            brillouin_fwhm_hz,
            relative_intensity,
            snr_per_pixel,
            integrated_intensity: None,
            noise_sigma: None,
        }
    }

    /// Inputs whose SNR is derived from the integrated intensity and σ.
    pub fn from_noise(
        detector: DetectorModel,
        brillouin_fwhm_hz: f64,
        relative_intensity: f64,
        integrated_intensity: f64,
        noise_sigma: f64,
    ) -> Result<Self> {
        let snr = snr_per_pixel(integrated_intensity, &detector, noise_sigma)?;
        Ok(CrlbInputs {
            detector,
            brillouin_fwhm_hz,
            relative_intensity,
            snr_per_pixel: snr,
            integrated_intensity: Some(integrated_intensity),
            noise_sigma: Some(noise_sigma),
        })
    }

    pub fn validate(&self) -> Result<()> {
        self.detector.validate()?;
        if !(self.brillouin_fwhm_hz > 0.0) {
            return Err(Error::invalid("Brillouin FWHM must be positive"));
        }
        if !(self.snr_per_pixel > 0.0 && self.snr_per_pixel.is_finite()) {
            return Err(Error::invalid("SNR must be positive"));
        }
        if self.relative_intensity == 0.0 {
            return Err(Error::DivergentBound);
        }
        if !(self.relative_intensity > 0.0) {
            return Err(Error::invalid("relative intensity must be positive"));
        }
        if let (Some(i), Some(s)) = (self.integrated_intensity, self.noise_sigma) {
            let expect = snr_per_pixel(i, &self.detector, s)?;
            if ((expect - self.snr_per_pixel) / expect).abs() > 1e-9 {
                return Err(Error::invalid(format!(
                    "SNR {} is inconsistent with I∞ = {i} and σ = {s} (expected {expect})",
                    self.snr_per_pixel
                )));
            }
        }
        Ok(())
    }
}

/// Average per-pixel SNR, `I∞ Δ / (X σ)`.
pub fn snr_per_pixel(integrated_intensity: f64, detector: &DetectorModel, sigma: f64) -> Result<f64> {
    if !(integrated_intensity > 0.0 && sigma > 0.0) {
        return Err(Error::invalid("integrated intensity and σ must be positive"));
    }
    Ok(integrated_intensity * detector.pixel_size_m / (detector.detector_width_m * sigma))
}

fn variance_at(inputs: &CrlbInputs, snr: f64) -> f64 {
    let det = &inputs.detector;
    let alpha = det.dispersion_scale;
    let gamma_m = alpha * det.response_fwhm_hz;
    let i = inputs.relative_intensity;
    let lead = std::f64::consts::PI * det.pixel_size_m / (4.0 * det.detector_width_m.powi(2));
    let width = alpha * inputs.brillouin_fwhm_hz + gamma_m;
    let contrast = (1.0 + 2.0 * i).powi(2) / (alpha * alpha * i * i);
    lead * width.powi(3) / (snr * snr) * contrast
}

/// Lower bound on `var(Ω̂)` in Hz².
pub fn crlb_variance(inputs: &CrlbInputs) -> Result<f64> {
    inputs.validate()?;
    Ok(variance_at(inputs, inputs.snr_per_pixel))
}

/// `√crlb_variance` in Hz for each SNR of `snr_grid` (ascending).
pub fn crlb_curve(inputs: &CrlbInputs, snr_grid: &[f64]) -> Result<Vec<f64>> {
    let base = CrlbInputs {
        integrated_intensity: None,
        noise_sigma: None,
        ..inputs.clone()
    };
    base.validate()?;
    if snr_grid.iter().any(|s| !(*s > 0.0)) {
        return Err(Error::invalid("SNR grid must be positive"));
    }
    if snr_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::invalid("SNR grid must be strictly ascending"));
    }
    Ok(snr_grid.iter().map(|&s| variance_at(&base, s).sqrt()).collect())
}

/// `snr,crlb_std_ghz` rows.
pub fn curve_csv(snr_grid: &[f64], std_hz: &[f64]) -> String {
    let mut s = String::from("snr,crlb_std_ghz\n");
    for (snr, v) in snr_grid.iter().zip(std_hz) {
        let _ = writeln!(s, "{snr},{}", v / 1e9);
    }
    s
}
