//! Lower bound on the shift standard deviation for the default detector,
//! against per-pixel and peak SNR.

use brillouin::crlb::{crlb_curve, crlb_variance, CrlbInputs};
use brillouin::noise::peak_to_per_pixel_snr;
use brillouin::spectrum::{DetectorModel, GroundTruth};

fn main() -> brillouin::Result<()> {
    let truth = GroundTruth::standard();
    let det = DetectorModel::standard();
    let inputs = CrlbInputs::new(det.clone(), truth.brillouin_fwhm_hz, truth.relative_intensity(), 1.0);
    println!("per-pixel SNR 1: var = {:e} Hz^2", crlb_variance(&inputs)?);

    let peak: Vec<f64> = (1..=10).map(f64::from).collect();
    let per_pixel: Vec<f64> = peak
        .iter()
        .map(|&s| peak_to_per_pixel_snr(s, &truth, &det))
        .collect::<brillouin::Result<_>>()?;
    let std = crlb_curve(&inputs, &per_pixel)?;
    println!("peak_snr,per_pixel_snr,crlb_std_ghz,crlb_std_pct");
    for ((p, q), s) in peak.iter().zip(&per_pixel).zip(&std) {
        println!("{p},{q:.5},{:.5},{:.3}", s / 1e9, 100.0 * s / truth.brillouin_shift_hz);
    }
    Ok(())
}
