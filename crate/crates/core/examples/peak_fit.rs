//! Lorentzian fitting of a noiseless spectrum, with and without the
//! Rayleigh line masked out.

use brillouin::fit::{fit, initial_guess, FitOptions};
use brillouin::spectrum::{synthesize, DetectorModel, GroundTruth, Sampling};

fn main() -> brillouin::Result<()> {
    let truth = GroundTruth::standard();
    let det = DetectorModel::standard();
    let mut s = synthesize(&truth, &det, Sampling::CenterSample)?;

    let full = fit(&s, &initial_guess(&s, 3, None)?, &FitOptions::default())?;
    print!("{}", full.to_key_value());

    s.mask_range(-3e9, 3e9);
    let masked = fit(&s, &initial_guess(&s, 2, None)?, &FitOptions::default())?;
    println!(
        "\nRayleigh masked ({} active pixels): shift {} GHz, width {} GHz",
        s.active_count(),
        masked.shift_hz / 1e9,
        masked.fwhm_hz / 1e9
    );
    Ok(())
}
