use crate::error::{Error, Result};
use crate::spectrum::{DetectorModel, LorentzianPeak};

/// Default model carrying approximate peak knowledge: a flat background
/// plus Lorentzian profiles, rescaled so that its sum equals `target_sum`
/// (normally `Σd`). A non-positive `target_sum` leaves the profile at its
/// own scale.
pub fn build_prior(
    peaks: &[LorentzianPeak],
    detector: &DetectorModel,
    background_fraction: f64,
    target_sum: f64,
) -> Result<Vec<f64>> {
    if !(background_fraction > 0.0 && background_fraction <= 1.0) {
        return Err(Error::invalid(format!(
            "background fraction must lie in (0, 1], got {background_fraction}"
        )));
    }
    let axis = detector.frequency_axis();
    let (lo, hi) = (axis[0], axis[axis.len() - 1]);
    for p in peaks {
        p.validate()?;
        if p.center_hz < lo || p.center_hz > hi {
            return Err(Error::PeakOutsideAxis {
                center_hz: p.center_hz,
                lo_hz: lo,
                hi_hz: hi,
            });
        }
    }
    let n = axis.len() as f64;
    let flat = if target_sum > 0.0 {
        target_sum / n
    } else {
        peaks.iter().map(|p| p.amplitude.abs()).fold(1.0, f64::max) / n
    };
    let mut m: Vec<f64> = axis
        .iter()
        .map(|&x| background_fraction * flat + peaks.iter().map(|p| p.value(x).max(0.0)).sum::<f64>())
        .collect();
    if target_sum > 0.0 {
        let scale = target_sum / m.iter().sum::<f64>();
        m.iter_mut().for_each(|v| *v *= scale);
    }
    Ok(m)
}
