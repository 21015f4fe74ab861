//! Maximum-entropy reconstruction of a noisy spectrum with a default model
//! built from the expected line positions, followed by a Lorentzian fit.

use brillouin::bench::default_lambda_schedule;
use brillouin::fit::{fit, initial_guess, FitOptions};
use brillouin::mer::{self, build_prior, MerConfig};
use brillouin::noise::{add_noise, NoiseSpec};
use brillouin::spectrum::{synthesize, DetectorModel, GroundTruth, Sampling};

fn main() -> brillouin::Result<()> {
    let snr = 3.0;
    let truth = GroundTruth::standard();
    let det = DetectorModel::standard();
    let clean = synthesize(&truth, &det, Sampling::CenterSample)?;
    let sigma = truth.brillouin_amplitude() / snr;

    for seed in 0..5u64 {
        let noisy = add_noise(&clean, &NoiseSpec::new(sigma, seed));
        let total: f64 = noisy.intensities().iter().sum();
        let config = MerConfig {
            lambda: default_lambda_schedule().lambda_for(snr),
            prior_model: Some(build_prior(&truth.peaks, &det, 0.1, total)?),
            ..MerConfig::default()
        };
        let sig = mer::uniform_sigma(noisy.len(), sigma);
        let res = mer::reconstruct(&noisy, &det.response, &sig, &config)?;
        print!(
            "seed {seed}: {} after {} iterations, chi2 = {:.3}, metric = {:.2e}",
            res.status.as_str(),
            res.iterations,
            res.final_chi_sq,
            res.final_termination_metric
        );
        match res.status {
            mer::MerStatus::InfeasibleData => println!(" (redraw)"),
            _ => {
                let r = &res.reconstruction;
                let f = fit(r, &initial_guess(r, 3, None)?, &FitOptions::default())?;
                println!(", shift {:.4} GHz, width {:.3} GHz", f.shift_hz / 1e9, f.fwhm_hz / 1e9);
            }
        }
    }
    Ok(())
}
