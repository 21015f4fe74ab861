//! Wavelet shrinkage: perfect reconstruction, then denoising under the two
//! universal-threshold conventions.

use brillouin::fit::{fit, initial_guess, FitOptions};
use brillouin::noise::{add_noise, NoiseSpec};
use brillouin::spectrum::{synthesize, DetectorModel, GroundTruth, Sampling};
use brillouin::wavelet::{self, ThresholdRule, WaveletConfig};

fn main() -> brillouin::Result<()> {
    let truth = GroundTruth::standard();
    let det = DetectorModel::standard();
    let clean = synthesize(&truth, &det, Sampling::CenterSample)?;

    let cfg = WaveletConfig::default();
    let back = wavelet::idwt(&wavelet::dwt(&clean, &cfg)?)?;
    let err = back
        .iter()
        .zip(clean.intensities())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    println!("db8, {} levels: max reconstruction error {err:.2e}", cfg.levels_for(clean.len()));

    let noisy = add_noise(&clean, &NoiseSpec::new(200.0, 7));
    for rule in [ThresholdRule::DonohoUniversal, ThresholdRule::PaperUniversal] {
        for levels in [Some(2), None] {
            let cfg = WaveletConfig {
                threshold_rule: rule,
                levels,
                ..WaveletConfig::default()
            };
            let d = wavelet::denoise(&noisy, &cfg)?;
            let rms = (d
                .intensities()
                .iter()
                .zip(clean.intensities())
                .map(|(a, b)| (a - b).powi(2))
                .sum::<f64>()
                / d.len() as f64)
                .sqrt();
            let fitted = initial_guess(&d, 3, None).and_then(|m| fit(&d, &m, &FitOptions::default()));
            let summary = match fitted {
                Ok(f) => format!("shift {:.3} GHz, width {:.3} GHz", f.shift_hz / 1e9, f.fwhm_hz / 1e9),
                Err(e) => format!("fit failed: {e}"),
            };
            println!(
                "{:>16}, {} levels: rms error {rms:7.1}, {summary}",
                rule.as_str(),
                cfg.levels_for(d.len())
            );
        }
    }
    Ok(())
}
