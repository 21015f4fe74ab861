//! Synthesizes the default three-line spectrum and a noisy copy at SNR 5.

use brillouin::noise::{add_noise, sigma_for_snr, NoiseSpec, SnrConvention};
use brillouin::spectrum::{synthesize, DetectorModel, GroundTruth, Sampling};

fn main() -> brillouin::Result<()> {
    let truth = GroundTruth::standard();
    let det = DetectorModel::standard();
    let clean = synthesize(&truth, &det, Sampling::CenterSample)?;
    let sigma = sigma_for_snr(5.0, &truth, &det, SnrConvention::PeakBased)?;
    let noisy = add_noise(&clean, &NoiseSpec::new(sigma, 42));

    println!("{} pixels, {} GHz per pixel, sigma = {sigma}", clean.len(), det.frequency_step_hz() / 1e9);
    println!("frequency_ghz,clean,noisy");
    for i in (0..clean.len()).step_by(4) {
        println!(
            "{:7.2},{:10.2},{:10.2}",
            clean.frequencies_hz()[i] / 1e9,
            clean.intensities()[i],
            noisy.intensities()[i]
        );
    }
    Ok(())
}
