//! `key = value` configuration shared by the command line and the harness.
//!
//! Every tunable of the pipeline has a dotted key. Values use SI units
//! (hertz, metres) so that echoing a configuration and reading it back is
//! lossless. `#` starts a comment; blank lines are ignored; unknown keys are
//! errors.

use std::fmt::Write as _;
use std::path::Path;

use crate::bench::{BenchConfig, LambdaMode, Method};
use crate::error::{Error, Result};
use crate::mer::{EntropyForm, LambdaSchedule};
use crate::noise::SnrConvention;
use crate::spectrum::{DetectorModel, GroundTruth, Response, Sampling};
use crate::wavelet::{Boundary, ThresholdMode, ThresholdRule, WaveletFamily};

/// Every recognised key, in echo order.
pub const KEYS: &[&str] = &[
    "seed",
    "truth.rayleigh_amplitude",
    "truth.rayleigh_fwhm_hz",
    "truth.brillouin_amplitude",
    "truth.shift_hz",
    "truth.brillouin_fwhm_hz",
    "truth.background",
    "detector.pixel_size_m",
    "detector.width_m",
    "detector.num_pixels",
    "detector.bandwidth_hz",
    "detector.response_box_pixels",
    "sampling",
    "noise.snr",
    "noise.sigma",
    "noise.snr_convention",
    "mer.lambda",
    "mer.chi0_sq",
    "mer.termination_threshold",
    "mer.max_iterations",
    "mer.num_conjugate_dirs",
    "mer.positivity_floor",
    "mer.wolfe_c1",
    "mer.wolfe_c2",
    "mer.entropy",
    "mer.lambda_mode",
    "mer.lambda_schedule",
    "mer.prior",
    "mer.prior_background_fraction",
    "mer.prior_width_factor",
    "mer.prior_offset_hz",
    "wavelet.family",
    "wavelet.levels",
    "wavelet.threshold_mode",
    "wavelet.threshold_rule",
    "wavelet.noise_level",
    "wavelet.boundary",
    "wavelet.threshold_scale",
    "fit.max_iter",
    "fit.tol",
    "fit.initial_damping",
    "fit.peaks",
    "bench.snr_grid",
    "bench.realizations",
    "bench.methods",
    "bench.regenerate_infeasible",
    "bench.max_regenerations",
];

/// Resolved settings for one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    /// Harness configuration; also the home of the truth, detector, MER,
    /// wavelet and fit settings used by the single-spectrum commands.
    pub bench: BenchConfig,
    /// Target SNR for `simulate` and for λ lookup in `denoise`.
    pub noise_snr: Option<f64>,
    /// Explicit noise σ; wins over `noise_snr` when both are set.
    pub noise_sigma: Option<f64>,
    pub fit_peaks: usize,
    bandwidth_hz: f64,
    response_box: usize,
}

impl Default for Settings {
    fn default() -> Self {
        let bench = BenchConfig::default();
        let bandwidth_hz = bench.detector.bandwidth_hz();
        Settings {
            bench,
            noise_snr: None,
            noise_sigma: None,
            fit_peaks: 3,
            bandwidth_hz,
            response_box: 1,
        }
    }
}

fn bad(key: &str, value: &str, expected: &str) -> Error {
    Error::parse(key.to_string(), format!("`{value}` is not {expected}"))
}

fn num(key: &str, v: &str) -> Result<f64> {
    v.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| bad(key, v, "a finite number"))
}

fn count(key: &str, v: &str) -> Result<usize> {
    v.parse().map_err(|_| bad(key, v, "a non-negative integer"))
}

fn flag(key: &str, v: &str) -> Result<bool> {
    match v {
        "true" | "on" | "yes" | "1" => Ok(true),
        "false" | "off" | "no" | "0" => Ok(false),
        _ => Err(bad(key, v, "a boolean")),
    }
}

fn optional(v: &str, word: &str) -> Option<String> {
    (v != word).then(|| v.to_string())
}

fn list(values: impl IntoIterator<Item = String>) -> String {
    values.into_iter().collect::<Vec<_>>().join(",")
}

impl Settings {
    /// Parses a configuration text on top of the defaults.
    pub fn from_config_str(text: &str) -> Result<Self> {
        let mut s = Settings::default();
        s.apply_str(text, "config")?;
        Ok(s)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let mut s = Settings::default();
        s.apply_file(path)?;
        Ok(s)
    }

    pub fn apply_file(&mut self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        self.apply_str(&text, &path.display().to_string())
    }

    /// Applies `key = value` lines; `source` names the origin in errors.
    pub fn apply_str(&mut self, text: &str, source: &str) -> Result<()> {
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(Error::parse(format!("{source}:{}", no + 1), "expected `key = value`"));
            };
            self.set(k.trim(), v.trim())?;
        }
        Ok(())
    }

    /// Applies a `key=value` override.
    pub fn apply_override(&mut self, kv: &str) -> Result<()> {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Error::parse(kv.to_string(), "override must be `key=value`"))?;
        self.set(k.trim(), v.trim())
    }

    pub fn set(&mut self, key: &str, v: &str) -> Result<()> {
        let b = &mut self.bench;
        match key {
            "seed" => b.base_seed = v.parse().map_err(|_| bad(key, v, "a 64-bit unsigned integer"))?,
            "truth.rayleigh_amplitude"
            | "truth.rayleigh_fwhm_hz"
            | "truth.brillouin_amplitude"
            | "truth.shift_hz"
            | "truth.brillouin_fwhm_hz" => {
                let x = num(key, v)?;
                let t = &b.truth;
                let mut p = [
                    t.peaks[0].amplitude,
                    t.peaks[0].fwhm_hz,
                    t.brillouin_amplitude(),
                    t.brillouin_shift_hz,
                    t.brillouin_fwhm_hz,
                ];
                let idx = ["rayleigh_amplitude", "rayleigh_fwhm_hz", "brillouin_amplitude", "shift_hz", "brillouin_fwhm_hz"]
                    .iter()
                    .position(|n| key.ends_with(n))
                    .expect("matched above");
                p[idx] = x;
                let background = t.background;
                b.truth = GroundTruth::brillouin(p[0], p[1], p[2], p[3], p[4]);
                b.truth.background = background;
            }
            "truth.background" => b.truth.background = num(key, v)?,
            "detector.pixel_size_m" => {
                b.detector.pixel_size_m = num(key, v)?;
                self.rebuild_detector();
            }
            "detector.width_m" => {
                b.detector.detector_width_m = num(key, v)?;
                self.rebuild_detector();
            }
            "detector.num_pixels" => {
                b.detector.num_pixels = count(key, v)?;
                self.rebuild_detector();
            }
            "detector.bandwidth_hz" => {
                self.bandwidth_hz = num(key, v)?;
                self.rebuild_detector();
            }
            "detector.response_box_pixels" => {
                let w = count(key, v)?;
                if w == 0 || w % 2 == 0 {
                    return Err(bad(key, v, "an odd positive width"));
                }
                self.response_box = w;
                self.rebuild_detector();
            }
            "sampling" => {
                b.sampling = match v {
                    "center" => Sampling::CenterSample,
                    _ => match v.strip_prefix("subpixel:").map(str::parse::<usize>) {
                        Some(Ok(k)) if k > 0 => Sampling::SubpixelIntegrate(k),
                        _ => return Err(bad(key, v, "`center` or `subpixel:<k>`")),
                    },
                }
            }
            "noise.snr" => self.noise_snr = optional(v, "none").map(|s| num(key, &s)).transpose()?,
            "noise.sigma" => self.noise_sigma = optional(v, "none").map(|s| num(key, &s)).transpose()?,
            "noise.snr_convention" => {
                b.snr_convention = SnrConvention::parse(v).ok_or_else(|| bad(key, v, "peak-based or per-pixel-average"))?
            }
            "mer.lambda" => b.mer_config.lambda = num(key, v)?,
            "mer.chi0_sq" => b.mer_config.chi0_sq = num(key, v)?,
            "mer.termination_threshold" => b.mer_config.termination_threshold = num(key, v)?,
            "mer.max_iterations" => b.mer_config.max_iterations = count(key, v)?,
            "mer.num_conjugate_dirs" => b.mer_config.num_conjugate_dirs = count(key, v)?,
            "mer.positivity_floor" => b.mer_config.positivity_floor = num(key, v)?,
            "mer.wolfe_c1" => b.mer_config.wolfe_c1 = num(key, v)?,
            "mer.wolfe_c2" => b.mer_config.wolfe_c2 = num(key, v)?,
            "mer.entropy" => {
                b.mer_config.entropy_form =
                    EntropyForm::parse(v).ok_or_else(|| bad(key, v, "skilling-gull or paper-shannon"))?
            }
            "mer.lambda_mode" => {
                b.lambda_mode = LambdaMode::parse(v).ok_or_else(|| bad(key, v, "fixed, schedule or search"))?
            }
            "mer.lambda_schedule" => {
                let mut pts = Vec::new();
                for item in v.split(',').filter(|s| !s.trim().is_empty()) {
                    let (s, l) = item
                        .split_once(':')
                        .ok_or_else(|| bad(key, v, "a list of snr:lambda pairs"))?;
                    pts.push((num(key, s.trim())?, num(key, l.trim())?));
                }
                b.lambda_schedule = LambdaSchedule::new(pts)?;
            }
            "mer.prior" => b.prior.enabled = flag(key, v)?,
            "mer.prior_background_fraction" => b.prior.background_fraction = num(key, v)?,
            "mer.prior_width_factor" => b.prior.width_factor = num(key, v)?,
            "mer.prior_offset_hz" => b.prior.offset_hz = num(key, v)?,
            "wavelet.family" => {
                b.wavelet_config.family = WaveletFamily::parse(v).ok_or_else(|| bad(key, v, "db1..db10 or sym2..sym10"))?
            }
            "wavelet.levels" => b.wavelet_config.levels = optional(v, "auto").map(|s| count(key, &s)).transpose()?,
            "wavelet.threshold_mode" => {
                b.wavelet_config.threshold_mode = ThresholdMode::parse(v).ok_or_else(|| bad(key, v, "soft or hard"))?
            }
            "wavelet.threshold_rule" => {
                b.wavelet_config.threshold_rule = ThresholdRule::parse(v)
                    .ok_or_else(|| bad(key, v, "paper-universal, donoho-universal or level-dependent"))?
            }
            "wavelet.noise_level" => {
                b.wavelet_config.noise_level = optional(v, "auto").map(|s| num(key, &s)).transpose()?
            }
            "wavelet.boundary" => {
                b.wavelet_config.boundary =
                    Boundary::parse(v).ok_or_else(|| bad(key, v, "symmetric, periodic or zero"))?
            }
            "wavelet.threshold_scale" => b.wavelet_config.threshold_scale = num(key, v)?,
            "fit.max_iter" => b.fit_options.max_iter = count(key, v)?,
            "fit.tol" => b.fit_options.tol = num(key, v)?,
            "fit.initial_damping" => b.fit_options.initial_damping = num(key, v)?,
            "fit.peaks" => self.fit_peaks = count(key, v)?,
            "bench.snr_grid" => {
                b.snr_grid = v
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| num(key, s.trim()))
                    .collect::<Result<_>>()?
            }
            "bench.realizations" => b.realizations = count(key, v)?,
            "bench.methods" => {
                b.methods = v
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| Method::parse(s.trim()).ok_or_else(|| bad(key, s, "none, wa or mer")))
                    .collect::<Result<_>>()?
            }
            "bench.regenerate_infeasible" => b.regenerate_infeasible = flag(key, v)?,
            "bench.max_regenerations" => b.max_regenerations = count(key, v)?,
            _ => return Err(Error::UnknownKey(key.to_string())),
        }
        Ok(())
    }

    /// Canonical text of one key's current value.
    pub fn get(&self, key: &str) -> Option<String> {
        let b = &self.bench;
        let t = &b.truth;
        let d = &b.detector;
        let m = &b.mer_config;
        let w = &b.wavelet_config;
        let f = &b.fit_options;
        Some(match key {
            "seed" => b.base_seed.to_string(),
            "truth.rayleigh_amplitude" => t.rayleigh_amplitude().to_string(),
            "truth.rayleigh_fwhm_hz" => t.peaks[0].fwhm_hz.to_string(),
            "truth.brillouin_amplitude" => t.brillouin_amplitude().to_string(),
            "truth.shift_hz" => t.brillouin_shift_hz.to_string(),
            "truth.brillouin_fwhm_hz" => t.brillouin_fwhm_hz.to_string(),
            "truth.background" => t.background.to_string(),
            "detector.pixel_size_m" => d.pixel_size_m.to_string(),
            "detector.width_m" => d.detector_width_m.to_string(),
            "detector.num_pixels" => d.num_pixels.to_string(),
            "detector.bandwidth_hz" => self.bandwidth_hz.to_string(),
            "detector.response_box_pixels" => self.response_box.to_string(),
            "sampling" => match b.sampling {
                Sampling::CenterSample => "center".into(),
                Sampling::SubpixelIntegrate(k) => format!("subpixel:{k}"),
            },
            "noise.snr" => self.noise_snr.map_or("none".into(), |x| x.to_string()),
            "noise.sigma" => self.noise_sigma.map_or("none".into(), |x| x.to_string()),
            "noise.snr_convention" => b.snr_convention.as_str().into(),
            "mer.lambda" => m.lambda.to_string(),
            "mer.chi0_sq" => m.chi0_sq.to_string(),
            "mer.termination_threshold" => m.termination_threshold.to_string(),
            "mer.max_iterations" => m.max_iterations.to_string(),
            "mer.num_conjugate_dirs" => m.num_conjugate_dirs.to_string(),
            "mer.positivity_floor" => m.positivity_floor.to_string(),
            "mer.wolfe_c1" => m.wolfe_c1.to_string(),
            "mer.wolfe_c2" => m.wolfe_c2.to_string(),
            "mer.entropy" => m.entropy_form.as_str().into(),
            "mer.lambda_mode" => b.lambda_mode.as_str().into(),
            "mer.lambda_schedule" => list(b.lambda_schedule.points().iter().map(|(s, l)| format!("{s}:{l}"))),
            "mer.prior" => b.prior.enabled.to_string(),
            "mer.prior_background_fraction" => b.prior.background_fraction.to_string(),
            "mer.prior_width_factor" => b.prior.width_factor.to_string(),
            "mer.prior_offset_hz" => b.prior.offset_hz.to_string(),
            "wavelet.family" => w.family.to_string(),
            "wavelet.levels" => w.levels.map_or("auto".into(), |l| l.to_string()),
            "wavelet.threshold_mode" => w.threshold_mode.as_str().into(),
            "wavelet.threshold_rule" => w.threshold_rule.as_str().into(),
            "wavelet.noise_level" => w.noise_level.map_or("auto".into(), |x| x.to_string()),
            "wavelet.boundary" => w.boundary.as_str().into(),
            "wavelet.threshold_scale" => w.threshold_scale.to_string(),
            "fit.max_iter" => f.max_iter.to_string(),
            "fit.tol" => f.tol.to_string(),
            "fit.initial_damping" => f.initial_damping.to_string(),
            "fit.peaks" => self.fit_peaks.to_string(),
            "bench.snr_grid" => list(b.snr_grid.iter().map(f64::to_string)),
            "bench.realizations" => b.realizations.to_string(),
            "bench.methods" => list(b.methods.iter().map(|m| m.as_str().to_string())),
            "bench.regenerate_infeasible" => b.regenerate_infeasible.to_string(),
            "bench.max_regenerations" => b.max_regenerations.to_string(),
            _ => return None,
        })
    }

    /// Full configuration as `key = value` lines; parsing it back yields
    /// equal settings.
    pub fn to_config_string(&self) -> String {
        let mut s = String::new();
        for k in KEYS {
            let _ = writeln!(s, "{k} = {}", self.get(k).expect("every listed key has a value"));
        }
        s
    }

    fn rebuild_detector(&mut self) {
        let d = &self.bench.detector;
        let mut det = DetectorModel::with_bandwidth(d.pixel_size_m, d.detector_width_m, d.num_pixels, self.bandwidth_hz);
        if self.response_box > 1 {
            det.response = Response::box_blur(det.num_pixels, self.response_box);
            det.response_fwhm_hz = self.response_box as f64 * det.frequency_step_hz();
        }
        self.bench.detector = det;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_echo_and_reparse() {
        let s = Settings::default();
        let text = s.to_config_string();
        assert_eq!(text.lines().count(), KEYS.len());
        assert_eq!(Settings::from_config_str(&text).unwrap(), s);
    }

    #[test]
    fn comments_and_blank_lines() {
        let s = Settings::from_config_str("# header\n\nseed = 7  # trailing\nbench.methods = mer, wa\n").unwrap();
        assert_eq!(s.bench.base_seed, 7);
        assert_eq!(s.bench.methods, vec![Method::Mer, Method::Wa]);
    }

    #[test]
    fn unknown_key_is_an_error() {
        assert!(matches!(
            Settings::from_config_str("mer.lamda = 3"),
            Err(Error::UnknownKey(k)) if k == "mer.lamda"
        ));
        assert!(Settings::from_config_str("seed 3").is_err());
        assert!(Settings::from_config_str("mer.lambda = abc").is_err());
    }

    #[test]
    fn detector_keys_rebuild_dispersion() {
        let mut s = Settings::default();
        s.set("detector.bandwidth_hz", "30000000000").unwrap();
        assert!((s.bench.detector.frequency_step_hz() - 0.25e9).abs() < 1.0);
        s.set("detector.response_box_pixels", "3").unwrap();
        assert!(!s.bench.detector.response.is_identity());
        s.bench.detector.validate().unwrap();
        assert!(s.set("detector.response_box_pixels", "2").is_err());
    }

    #[test]
    fn truth_keys_keep_symmetry() {
        let mut s = Settings::default();
        s.set("truth.shift_hz", "7081000000").unwrap();
        let p = &s.bench.truth.peaks;
        assert_eq!(p[1].center_hz, -7.081e9);
        assert_eq!(p[2].center_hz, 7.081e9);
        assert_eq!(s.bench.truth.rayleigh_amplitude(), 1e4);
    }
}
