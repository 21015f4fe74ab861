#![allow(dead_code)]

use std::time::Instant;

use brillouin::bench::{default_lambda_schedule, BenchConfig};
use brillouin::crlb::{crlb_variance, CrlbInputs};
use brillouin::fit::{brillouin_shift, fit, initial_guess, lorentzian_jacobian, speed_of_sound, FitOptions};
use brillouin::mer::{self, build_prior, MerConfig, EntropyForm};
use brillouin::noise::{add_noise, NoiseSpec};
use brillouin::spectrum::{lorentzian_value, synthesize, DetectorModel, GroundTruth, LorentzianPeak, Response, Sampling, Spectrum};
use brillouin::wavelet::{self, dwt_values, idwt, Boundary, WaveletConfig, WaveletFamily};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Bound at the default configuration and unit per-pixel SNR, from
/// scripts/crlb_golden.py (50-digit arithmetic).
pub const GOLDEN_VARIANCE_HZ2: f64 = 34681103397518.3300602531614601;

/// `Ok(detail)` when the check passes, `Err(detail)` otherwise.
pub type Check = Result<String, String>;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

pub fn dwt_perfect_reconstruction() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for &n in &[64usize, 120, 128] {
        for _ in 0..100 {
            let x: Vec<f64> = (0..n).map(|_| rng.random_range(-1e3..1e3)).collect();
            for family in WaveletFamily::all() {
                for boundary in Boundary::all() {
                    let cfg = WaveletConfig {
                        family,
                        boundary,
                        ..WaveletConfig::default()
                    };
                    let c = dwt_values(&x, &cfg).map_err(|e| e.to_string())?;
                    let back = idwt(&c).map_err(|e| e.to_string())?;
                    let err = back.iter().zip(&x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                    worst = worst.max(err);
                    cases += 1;
                }
            }
        }
    }
    let msg = format!("{cases} round trips, max abs error {worst:.2e}");
    if worst <= 1e-9 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn vector_rel_err(analytic: &[f64], fd: &[f64]) -> f64 {
    let scale = analytic.iter().map(|v| v.abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    analytic.iter().zip(fd).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / scale
}

pub fn gradient_oracles() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let n = 24;
    let axis: Vec<f64> = (0..n).map(|i| i as f64).collect();
    let (mut ws, mut wc, mut wj) = (0.0f64, 0.0f64, 0.0f64);
    for point in 0..50 {
        let f: Vec<f64> = (0..n).map(|_| rng.random_range(1.0..500.0)).collect();
        let m: Vec<f64> = (0..n).map(|_| rng.random_range(1.0..500.0)).collect();
        let d: Vec<f64> = (0..n).map(|_| rng.random_range(-50.0..600.0)).collect();
        let sigma: Vec<f64> = (0..n).map(|_| rng.random_range(5.0..50.0)).collect();
        let mut spec = Spectrum::new(axis.clone(), d).unwrap();
        if point % 2 == 1 {
            spec.mask_range(3.0, 6.0);
        }
        let response = if point % 3 == 0 { Response::box_blur(n, 3) } else { Response::Identity };
        let form = if point % 4 == 0 { EntropyForm::PaperShannon } else { EntropyForm::SkillingGull };
        let config = MerConfig {
            prior_model: Some(m.clone()),
            entropy_form: form,
            ..MerConfig::default()
        };
        let (gs, gc) = mer::gradients(&f, &spec, &response, &sigma, &config).map_err(|e| e.to_string())?;
        let mut fs = vec![0.0; n];
        let mut fc = vec![0.0; n];
        for i in 0..n {
            let h = 1e-4 * f[i];
            let mut up = f.clone();
            let mut dn = f.clone();
            up[i] += h;
            dn[i] -= h;
            fs[i] = (mer::entropy(&up, &m, &config).unwrap() - mer::entropy(&dn, &m, &config).unwrap()) / (2.0 * h);
            fc[i] = (mer::chi_square(&up, &spec, &response, &sigma).unwrap()
                - mer::chi_square(&dn, &spec, &response, &sigma).unwrap())
                / (2.0 * h);
        }
        ws = ws.max(vector_rel_err(&gs, &fs));
        wc = wc.max(vector_rel_err(&gc, &fc));

        let p = LorentzianPeak::new(
            rng.random_range(-20e9..20e9),
            rng.random_range(0.3e9..5e9),
            rng.random_range(10.0..1e4),
        );
        let x = p.center_hz + rng.random_range(-3.0..3.0) * p.fwhm_hz;
        let j = lorentzian_jacobian(&p, x);
        let hs = [1e-6 * p.fwhm_hz, 1e-6 * p.fwhm_hz, 1e-6 * p.amplitude];
        let mut fd = [0.0; 3];
        for k in 0..3 {
            let shifted = |s: f64| {
                let mut q = p;
                match k {
                    0 => q.center_hz += s,
                    1 => q.fwhm_hz += s,
                    _ => q.amplitude += s,
                }
                lorentzian_value(&q, x)
            };
            fd[k] = (shifted(hs[k]) - shifted(-hs[k])) / (2.0 * hs[k]);
        }
        for k in 0..3 {
            let scale = j[k].abs().max(1e-300);
            wj = wj.max((j[k] - fd[k]).abs() / scale.max(1e-9 * j.iter().map(|v| v.abs()).fold(0.0, f64::max)));
        }
    }
    let msg = format!("max relative error: grad S {ws:.1e}, grad chi2 {wc:.1e}, Lorentzian Jacobian {wj:.1e}");
    if ws <= 1e-5 && wc <= 1e-5 && wj <= 1e-5 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

pub fn noiseless_fit() -> Check {
    let truth = GroundTruth::standard();
    let det = DetectorModel::standard();
    let clean = synthesize(&truth, &det, Sampling::CenterSample).map_err(|e| e.to_string())?;
    let model = initial_guess(&clean, 3, None).map_err(|e| e.to_string())?;
    let r = fit(&clean, &model, &FitOptions::default()).map_err(|e| e.to_string())?;
    let es = rel(r.shift_hz, truth.brillouin_shift_hz);
    let ew = rel(r.fwhm_hz, truth.brillouin_fwhm_hz);
    let msg = format!(
        "shift {:.6} GHz (rel err {es:.1e}), FWHM {:.6} GHz (rel err {ew:.1e})",
        r.shift_hz / 1e9,
        r.fwhm_hz / 1e9
    );
    if r.converged && es <= 1e-4 && ew <= 1e-4 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn standard_inputs(snr: f64) -> CrlbInputs {
    let truth = GroundTruth::standard();
    CrlbInputs::new(DetectorModel::standard(), truth.brillouin_fwhm_hz, truth.relative_intensity(), snr)
}

pub fn crlb_correctness() -> Check {
    let v = |i: &CrlbInputs| crlb_variance(i).map_err(|e| e.to_string());
    let base = v(&standard_inputs(1.0))?;
    let golden = rel(base, GOLDEN_VARIANCE_HZ2);

    let snr = rel(v(&standard_inputs(3.7))? / base, 1.0 / (3.7f64 * 3.7));

    let mut wide = standard_inputs(1.0);
    wide.brillouin_fwhm_hz *= 1.9;
    let width = rel(v(&wide)? / base, 1.9f64.powi(3));

    let mut blurred = standard_inputs(1.0);
    blurred.detector.response = Response::box_blur(blurred.detector.num_pixels, 3);
    blurred.detector.response_fwhm_hz = 1.5e9;
    let a = blurred.detector.dispersion_scale;
    let expect = ((a * 1e9 + a * 1.5e9) / (a * 1e9)).powi(3);
    let response = rel(v(&blurred)? / base, expect);

    let mut pixel = standard_inputs(1.0);
    pixel.detector.pixel_size_m *= 2.5;
    let delta = rel(v(&pixel)? / base, 2.5);

    let worst = golden.max(snr).max(width).max(response).max(delta);
    let msg = format!(
        "var {base:.6e} Hz^2, golden rel err {golden:.1e}; scaling errors SNR {snr:.1e}, width {width:.1e}, response {response:.1e}, pixel {delta:.1e}"
    );
    if worst <= 1e-12 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

pub fn throughput() -> Check {
    let truth = GroundTruth::standard();
    let det = DetectorModel::standard();
    let clean = synthesize(&truth, &det, Sampling::CenterSample).unwrap();
    let snr = 5.0;
    let sigma = truth.brillouin_amplitude() / snr;
    let mut mer_times = Vec::new();
    let mut wa_times = Vec::new();
    let wcfg = brillouin::bench::default_bench_wavelet();
    for seed in 0..20 {
        let noisy = add_noise(&clean, &NoiseSpec::new(sigma, seed));
        let t = Instant::now();
        let total: f64 = noisy.intensities().iter().sum();
        let config = MerConfig {
            lambda: default_lambda_schedule().lambda_for(snr),
            prior_model: Some(build_prior(&truth.peaks, &det, 0.1, total).unwrap()),
            ..MerConfig::default()
        };
        mer::reconstruct(&noisy, &det.response, &mer::uniform_sigma(noisy.len(), sigma), &config).unwrap();
        mer_times.push(t.elapsed().as_secs_f64());
        let t = Instant::now();
        wavelet::denoise(&noisy, &wcfg).unwrap();
        wavelet::denoise(&noisy, &WaveletConfig::default()).unwrap();
        wa_times.push(0.5 * t.elapsed().as_secs_f64());
    }
    let mer_max = mer_times.iter().cloned().fold(0.0, f64::max);
    let wa_max = wa_times.iter().cloned().fold(0.0, f64::max);
    let msg = format!("slowest of 20: MER {:.2} ms, WA {:.3} ms", 1e3 * mer_max, 1e3 * wa_max);
    if mer_max <= 1.0 && wa_max <= 0.01 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

pub fn sound_round_trip() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let v = rng.random_range(300.0..8000.0);
        let lambda = rng.random_range(300e-9..1100e-9);
        let n = rng.random_range(1.0..2.5);
        let theta = rng.random_range(0.05..std::f64::consts::PI);
        let omega = brillouin_shift(v, lambda, n, theta).map_err(|e| e.to_string())?;
        let back = speed_of_sound(omega, lambda, n, theta).map_err(|e| e.to_string())?;
        worst = worst.max(rel(back, v));
    }
    let water = speed_of_sound(7.081e9, 561e-9, 1.333, std::f64::consts::PI).map_err(|e| e.to_string())?;
    let msg = format!("round trip max rel err {worst:.1e}; 7.081 GHz backscatter -> {water:.1} m/s");
    if worst <= 1e-12 && (water - 1490.0).abs() <= 5.0 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

/// Configuration of the desk-scale Monte Carlo run.
pub fn desk_config() -> BenchConfig {
    BenchConfig {
        snr_grid: vec![1.0, 2.0, 3.0, 5.0, 7.0, 10.0],
        realizations: 500,
        ..BenchConfig::default()
    }
}
