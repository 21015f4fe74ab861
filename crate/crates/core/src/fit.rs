//! Multi-Lorentzian least-squares fitting and Brillouin parameter extraction.

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::spectrum::{lorentzian_value, LorentzianPeak, Spectrum};

/// Parameters per Lorentzian: centre, FWHM, amplitude.
const PEAK_PARAMS: usize = 3;

/// What a fitted line represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeakRole {
    Rayleigh,
    Stokes,
    AntiStokes,
    Other,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitModel {
    pub peaks: Vec<LorentzianPeak>,
    pub roles: Vec<PeakRole>,
    pub baseline: f64,
    /// One flag per parameter (`[c, Γ, A]` per peak, then the baseline);
    /// `true` holds that parameter at its initial value.
    pub fixed: Vec<bool>,
    /// Extra pixels to leave out, same convention as `Spectrum::mask`.
    pub fit_region: Option<Vec<bool>>,
}

impl FitModel {
    /// Assigns roles from the sorted centres: three lines are
    /// Stokes/Rayleigh/anti-Stokes, two are a Stokes/anti-Stokes pair.
    pub fn new(mut peaks: Vec<LorentzianPeak>, baseline: f64) -> Self {
        peaks.sort_by(|a, b| a.center_hz.total_cmp(&b.center_hz));
        let roles = match peaks.len() {
            3 => vec![PeakRole::Stokes, PeakRole::Rayleigh, PeakRole::AntiStokes],
            2 => vec![PeakRole::Stokes, PeakRole::AntiStokes],
            n => vec![PeakRole::Other; n],
        };
        Self::with_roles(peaks, roles, baseline)
    }

    pub fn with_roles(peaks: Vec<LorentzianPeak>, roles: Vec<PeakRole>, baseline: f64) -> Self {
        let n = peaks.len() * PEAK_PARAMS + 1;
        FitModel {
            peaks,
            roles,
            baseline,
            fixed: vec![false; n],
            fit_region: None,
        }
    }

    pub fn num_params(&self) -> usize {
        self.peaks.len() * PEAK_PARAMS + 1
    }

    pub fn free_params(&self) -> usize {
        self.fixed.iter().filter(|f| !**f).count()
    }

    pub fn validate(&self) -> Result<()> {
        if self.peaks.is_empty() {
            return Err(Error::invalid("fit model needs at least one peak"));
        }
        if self.roles.len() != self.peaks.len() {
            return Err(Error::DimensionMismatch {
                expected: self.peaks.len(),
                actual: self.roles.len(),
            });
        }
        if self.fixed.len() != self.num_params() {
            return Err(Error::DimensionMismatch {
                expected: self.num_params(),
                actual: self.fixed.len(),
            });
        }
        for p in &self.peaks {
            if !(p.fwhm_hz > 0.0) {
                return Err(Error::invalid("initial FWHMs must be positive"));
            }
        }
        Ok(())
    }

    fn params(&self) -> Vec<f64> {
        let mut p = Vec::with_capacity(self.num_params());
        for pk in &self.peaks {
            p.extend([pk.center_hz, pk.fwhm_hz, pk.amplitude]);
        }
        p.push(self.baseline);
        p
    }
}

/// Value of the full model (all peaks plus baseline) for a parameter vector.
fn model_value(params: &[f64], x: f64) -> f64 {
    let n_peaks = (params.len() - 1) / PEAK_PARAMS;
    let mut v = params[params.len() - 1];
    for k in 0..n_peaks {
        let p = LorentzianPeak::new(params[3 * k], params[3 * k + 1], params[3 * k + 2]);
        v += lorentzian_value(&p, x);
    }
    v
}

/// Partial derivatives of a Lorentzian with respect to
/// `(centre, FWHM, amplitude)` at `x`.
pub fn lorentzian_jacobian(peak: &LorentzianPeak, x: f64) -> [f64; 3] {
    let h = 0.5 * peak.fwhm_hz;
    let u = x - peak.center_hz;
    let den = u * u + h * h;
    let den2 = den * den;
    [
        peak.amplitude * h * h * 2.0 * u / den2,
        peak.amplitude * h * u * u / den2,
        h * h / den,
    ]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub max_iter: usize,
    /// Relative change in the residual sum of squares that counts as converged.
    pub tol: f64,
    /// Initial damping relative to `diag(JᵀJ)`.
    pub initial_damping: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            max_iter: 200,
            tol: 1e-10,
            initial_damping: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub peaks: Vec<LorentzianPeak>,
    pub roles: Vec<PeakRole>,
    pub baseline: f64,
    /// Ω̂.
    pub shift_hz: f64,
    /// Γ̂, mean FWHM of the Brillouin lines.
    pub fwhm_hz: f64,
    /// 100 · RMS residual over the fit region / fitted Brillouin amplitude.
    pub rms_error_pct: f64,
    pub converged: bool,
    pub iterations: usize,
    /// Residual sum of squares after every accepted step (first entry is
    /// the initial guess).
    pub ssr_trace: Vec<f64>,
}

impl FitResult {
    pub const CSV_HEADER: &'static str = "shift_ghz,fwhm_ghz,rms_error_pct,converged,iterations";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.shift_hz / 1e9,
            self.fwhm_hz / 1e9,
            self.rms_error_pct,
            self.converged,
            self.iterations
        )
    }

    /// Flat `key = value` listing; `rms_error_pct` is normalised by the
    /// fitted Brillouin amplitude.
    pub fn to_key_value(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "shift_ghz = {}", self.shift_hz / 1e9);
        let _ = writeln!(out, "fwhm_ghz = {}", self.fwhm_hz / 1e9);
        let _ = writeln!(out, "rms_error_pct = {}", self.rms_error_pct);
        let _ = writeln!(out, "rms_error_normalisation = brillouin-amplitude");
        let _ = writeln!(out, "baseline = {}", self.baseline);
        let _ = writeln!(out, "converged = {}", self.converged);
        let _ = writeln!(out, "iterations = {}", self.iterations);
        for (i, (p, r)) in self.peaks.iter().zip(&self.roles).enumerate() {
            let _ = writeln!(out, "peak{i}.role = {}", role_name(*r));
            let _ = writeln!(out, "peak{i}.center_ghz = {}", p.center_hz / 1e9);
            let _ = writeln!(out, "peak{i}.fwhm_ghz = {}", p.fwhm_hz / 1e9);
            let _ = writeln!(out, "peak{i}.amplitude = {}", p.amplitude);
        }
        out
    }

    pub fn brillouin_amplitude(&self) -> f64 {
        brillouin_stats(&self.peaks, &self.roles).2
    }
}

fn role_name(r: PeakRole) -> &'static str {
    match r {
        PeakRole::Rayleigh => "rayleigh",
        PeakRole::Stokes => "stokes",
        PeakRole::AntiStokes => "anti-stokes",
        PeakRole::Other => "other",
    }
}

/// `(shift, mean Brillouin FWHM, mean Brillouin amplitude)`.
fn brillouin_stats(peaks: &[LorentzianPeak], roles: &[PeakRole]) -> (f64, f64, f64) {
    let find = |role| peaks.iter().zip(roles).find(|(_, r)| **r == role).map(|(p, _)| *p);
    let stokes = find(PeakRole::Stokes);
    let anti = find(PeakRole::AntiStokes);
    let rayleigh = find(PeakRole::Rayleigh);
    match (stokes, anti, rayleigh) {
        (Some(s), Some(a), _) => (
            0.5 * (a.center_hz - s.center_hz).abs(),
            0.5 * (s.fwhm_hz + a.fwhm_hz),
            0.5 * (s.amplitude + a.amplitude),
        ),
        (Some(b), None, Some(r)) | (None, Some(b), Some(r)) => {
            ((b.center_hz - r.center_hz).abs(), b.fwhm_hz, b.amplitude)
        }
        _ => {
            // No role information: report the line farthest from 0 Hz.
            let b = peaks
                .iter()
                .max_by(|x, y| x.center_hz.abs().total_cmp(&y.center_hz.abs()))
                .copied()
                .unwrap_or(LorentzianPeak::new(0.0, 0.0, 0.0));
            (b.center_hz.abs(), b.fwhm_hz, b.amplitude)
        }
    }
}

/// Damped Gauss-Newton (Levenberg-Marquardt) fit of `model` to `spectrum`.
///
/// The damping grows ×10 on a rejected step and shrinks ÷10 on an accepted
/// one. FWHMs are projected to stay positive and amplitudes non-negative.
/// Hitting `max_iter` returns `converged = false` rather than an error.
pub fn fit(spectrum: &Spectrum, model: &FitModel, options: &FitOptions) -> Result<FitResult> {
    model.validate()?;
    if let Some(r) = &model.fit_region {
        if r.len() != spectrum.len() {
            return Err(Error::DimensionMismatch {
                expected: spectrum.len(),
                actual: r.len(),
            });
        }
    }
    let xs: Vec<f64> = (0..spectrum.len())
        .filter(|&i| !spectrum.is_masked(i) && !model.fit_region.as_ref().is_some_and(|r| r[i]))
        .collect::<Vec<_>>()
        .into_iter()
        .map(|i| spectrum.frequencies_hz()[i])
        .collect();
    let ys: Vec<f64> = (0..spectrum.len())
        .filter(|&i| !spectrum.is_masked(i) && !model.fit_region.as_ref().is_some_and(|r| r[i]))
        .map(|i| spectrum.intensities()[i])
        .collect();
    let n_free = model.free_params();
    if xs.len() < 3 * n_free {
        return Err(Error::DegenerateRegion {
            pixels: xs.len(),
            params: n_free,
            needed: 3 * n_free,
        });
    }
    let free: Vec<usize> = (0..model.num_params()).filter(|&j| !model.fixed[j]).collect();
    let min_fwhm = 1e-3 * spectrum.frequency_step_hz();

    let ssr_of = |p: &[f64]| -> f64 {
        xs.iter()
            .zip(&ys)
            .map(|(&x, &y)| {
                let r = y - model_value(p, x);
                r * r
            })
            .sum()
    };
    let project = |p: &mut [f64]| {
        let n_peaks = (p.len() - 1) / PEAK_PARAMS;
        for k in 0..n_peaks {
            p[3 * k + 1] = p[3 * k + 1].abs().max(min_fwhm);
            p[3 * k + 2] = p[3 * k + 2].max(0.0);
        }
    };

    let mut params = model.params();
    project(&mut params);
    let mut ssr = ssr_of(&params);
    let mut trace = vec![ssr];
    let mut damping = options.initial_damping;
    let mut converged = false;
    let mut iterations = 0;
    let m = xs.len();
    let nf = free.len();

    while iterations < options.max_iter {
        iterations += 1;
        // Jacobian of the model (not the residual) over free parameters.
        let mut jac = DMatrix::<f64>::zeros(m, nf);
        let mut resid = DVector::<f64>::zeros(m);
        for (i, (&x, &y)) in xs.iter().zip(&ys).enumerate() {
            resid[i] = y - model_value(&params, x);
            let mut full = vec![0.0; params.len()];
            for k in 0..(params.len() - 1) / PEAK_PARAMS {
                let pk = LorentzianPeak::new(params[3 * k], params[3 * k + 1], params[3 * k + 2]);
                let g = lorentzian_jacobian(&pk, x);
                full[3 * k..3 * k + 3].copy_from_slice(&g);
            }
            full[params.len() - 1] = 1.0;
            for (c, &j) in free.iter().enumerate() {
                jac[(i, c)] = full[j];
            }
        }
        let jtj = jac.transpose() * &jac;
        let jtr = jac.transpose() * &resid;
        if jtr.amax() == 0.0 {
            converged = true;
            break;
        }
        let diag: Vec<f64> = (0..nf).map(|c| jtj[(c, c)].max(f64::MIN_POSITIVE)).collect();

        let mut accepted = false;
        while damping < 1e16 {
            let mut a = jtj.clone();
            for c in 0..nf {
                a[(c, c)] += damping * diag[c];
            }
            let step = match a.clone().cholesky() {
                Some(ch) => Some(ch.solve(&jtr)),
                None => a.lu().solve(&jtr),
            };
            let Some(step) = step else {
                damping *= 10.0;
                continue;
            };
            let mut trial = params.clone();
            for (c, &j) in free.iter().enumerate() {
                trial[j] += step[c];
            }
            project(&mut trial);
            let trial_ssr = ssr_of(&trial);
            if trial_ssr.is_finite() && trial_ssr <= ssr {
                let rel = (ssr - trial_ssr) / ssr.max(f64::MIN_POSITIVE);
                params = trial;
                ssr = trial_ssr;
                trace.push(ssr);
                damping = (damping / 10.0).max(1e-12);
                accepted = true;
                if rel < options.tol {
                    converged = true;
                }
                break;
            }
            damping *= 10.0;
        }
        if converged {
            break;
        }
        if !accepted {
            // No damping level improves the fit: a (possibly degenerate)
            // stationary point.
            converged = ssr.is_finite();
            break;
        }
    }

    let n_peaks = model.peaks.len();
    let peaks: Vec<LorentzianPeak> = (0..n_peaks)
        .map(|k| LorentzianPeak::new(params[3 * k], params[3 * k + 1], params[3 * k + 2]))
        .collect();
    let baseline = params[params.len() - 1];
    let (shift_hz, fwhm_hz, amp) = brillouin_stats(&peaks, &model.roles);
    let rms = (ssr / m as f64).sqrt();
    let rms_error_pct = if amp > 0.0 { 100.0 * rms / amp } else { f64::INFINITY };
    Ok(FitResult {
        peaks,
        roles: model.roles.clone(),
        baseline,
        shift_hz,
        fwhm_hz,
        rms_error_pct,
        converged,
        iterations,
        ssr_trace: trace,
    })
}

/// Centred moving average over unmasked pixels.
fn moving_average(spectrum: &Spectrum, width: usize) -> Vec<f64> {
    let v = spectrum.intensities();
    let n = v.len();
    let half = width / 2;
    (0..n)
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half).min(n - 1);
            let (s, c) = (lo..=hi)
                .filter(|&j| !spectrum.is_masked(j))
                .fold((0.0, 0usize), |(s, c), j| (s + v[j], c + 1));
            if c == 0 {
                f64::NAN
            } else {
                s / c as f64
            }
        })
        .collect()
}

/// Starting model for [`fit`].
///
/// With `hints`, the hinted lines are used as-is. Otherwise the spectrum is
/// smoothed with a 5-pixel moving average, the `n_peaks` highest local
/// maxima outside masked pixels become centres, and half-prominence widths
/// become FWHM guesses. The smoothed minimum seeds the baseline.
pub fn initial_guess(spectrum: &Spectrum, n_peaks: usize, hints: Option<&[LorentzianPeak]>) -> Result<FitModel> {
    if n_peaks == 0 {
        return Err(Error::invalid("at least one peak is required"));
    }
    let smooth = moving_average(spectrum, 5);
    let baseline = (0..spectrum.len())
        .filter(|&i| !spectrum.is_masked(i))
        .map(|i| smooth[i])
        .fold(f64::INFINITY, f64::min);
    let baseline = if baseline.is_finite() { baseline } else { 0.0 };

    if let Some(h) = hints {
        if h.len() != n_peaks {
            return Err(Error::NotEnoughPeaks {
                found: h.len(),
                wanted: n_peaks,
            });
        }
        return Ok(FitModel::new(h.to_vec(), baseline));
    }

    let n = spectrum.len();
    let freqs = spectrum.frequencies_hz();
    let step = spectrum.frequency_step_hz();
    let mut maxima: Vec<usize> = (1..n - 1)
        .filter(|&i| {
            !spectrum.is_masked(i)
                && !spectrum.is_masked(i - 1)
                && !spectrum.is_masked(i + 1)
                && smooth[i] > smooth[i - 1]
                && smooth[i] >= smooth[i + 1]
        })
        .collect();
    maxima.sort_by(|&a, &b| smooth[b].total_cmp(&smooth[a]));
    if maxima.len() < n_peaks {
        return Err(Error::NotEnoughPeaks {
            found: maxima.len(),
            wanted: n_peaks,
        });
    }
    let peaks = maxima[..n_peaks]
        .iter()
        .map(|&i| {
            let half = 0.5 * (smooth[i] + baseline);
            let mut lo = i;
            while lo > 0 && !spectrum.is_masked(lo - 1) && smooth[lo - 1] > half {
                lo -= 1;
            }
            let mut hi = i;
            while hi + 1 < n && !spectrum.is_masked(hi + 1) && smooth[hi + 1] > half {
                hi += 1;
            }
            let fwhm = ((hi - lo) as f64 * step).max(step);
            let amp = (spectrum.intensities()[i] - baseline).max(smooth[i] - baseline).max(0.0);
            LorentzianPeak::new(freqs[i], fwhm, amp)
        })
        .collect();
    Ok(FitModel::new(peaks, baseline))
}

/// Masks pixels at or above `fraction · max_count` (detector saturation).
pub fn mask_saturated(spectrum: &mut Spectrum, max_count: f64, fraction: f64) {
    let limit = fraction * max_count;
    let mut mask: Vec<bool> = spectrum
        .mask()
        .map(<[bool]>::to_vec)
        .unwrap_or_else(|| vec![false; spectrum.len()]);
    for (m, v) in mask.iter_mut().zip(spectrum.intensities()) {
        if *v >= limit {
            *m = true;
        }
    }
    spectrum.set_mask(Some(mask)).expect("mask has spectrum length");
}

/// Acoustic velocity from a Brillouin shift:
/// `v = Ω·λ / (2 n sin(θ/2))`.
pub fn speed_of_sound(shift_hz: f64, wavelength_m: f64, refractive_index: f64, scattering_angle_rad: f64) -> Result<f64> {
    check_geometry(refractive_index, scattering_angle_rad)?;
    Ok(shift_hz * wavelength_m / (2.0 * refractive_index * (0.5 * scattering_angle_rad).sin()))
}

/// Inverse of [`speed_of_sound`]: `Ω = 2 n v sin(θ/2) / λ`.
pub fn brillouin_shift(speed_m_s: f64, wavelength_m: f64, refractive_index: f64, scattering_angle_rad: f64) -> Result<f64> {
    check_geometry(refractive_index, scattering_angle_rad)?;
    Ok(2.0 * refractive_index * speed_m_s * (0.5 * scattering_angle_rad).sin() / wavelength_m)
}

fn check_geometry(refractive_index: f64, angle: f64) -> Result<()> {
    if !(angle > 0.0 && angle <= std::f64::consts::PI) {
        return Err(Error::invalid(format!("scattering angle must lie in (0, π], got {angle}")));
    }
    if !(refractive_index >= 1.0) {
        return Err(Error::invalid(format!("refractive index must be ≥ 1, got {refractive_index}")));
    }
    Ok(())
}
