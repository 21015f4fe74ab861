//! Monte Carlo harness: sweep SNR, denoise each noisy realization with
//! every method, fit, and collect bias/precision of the Brillouin shift and
//! linewidth next to the Cramér–Rao bound.

mod plot;

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;

use crate::crlb::CrlbInputs;
use crate::error::{Error, Result};
use crate::fit::{fit, initial_guess, FitOptions, FitResult};
use crate::io::write_atomic;
use crate::mer::{self, build_prior, LambdaSchedule, MerConfig, MerResult, MerStatus};
use crate::noise::{add_noise, derive_seed, sigma_for_snr, NoiseSpec, SnrConvention};
use crate::spectrum::{DetectorModel, GroundTruth, LorentzianPeak, Sampling, Spectrum};
use crate::wavelet::{self, WaveletConfig};

pub use plot::render_plots;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    None,
    Wa,
    Mer,
}

impl Method {
    pub fn all() -> [Method; 3] {
        [Method::None, Method::Wa, Method::Mer]
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Method::None => "none",
            Method::Wa => "wa",
            Method::Mer => "mer",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "none" | "raw" => Some(Method::None),
            "wa" | "wavelet" => Some(Method::Wa),
            "mer" => Some(Method::Mer),
            _ => None,
        }
    }
}

/// How λ is chosen for each reconstruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaMode {
    /// `mer_config.lambda` everywhere.
    Fixed,
    /// Looked up from the SNR schedule.
    Schedule,
    /// Bisection on λ until χ² = χ₀².
    Search,
}

impl LambdaMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            LambdaMode::Fixed => "fixed",
            LambdaMode::Schedule => "schedule",
            LambdaMode::Search => "search",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "fixed" => Some(LambdaMode::Fixed),
            "schedule" => Some(LambdaMode::Schedule),
            "search" => Some(LambdaMode::Search),
            _ => None,
        }
    }
}

/// Default model built from the ground-truth lines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PriorSettings {
    pub enabled: bool,
    pub background_fraction: f64,
    /// Multiplies every true FWHM.
    pub width_factor: f64,
    /// Moves the Brillouin lines outward by this amount.
    pub offset_hz: f64,
}

impl Default for PriorSettings {
    fn default() -> Self {
        PriorSettings {
            enabled: true,
            background_fraction: 0.1,
            width_factor: 1.0,
            offset_hz: 0.0,
        }
    }
}

impl PriorSettings {
    pub fn peaks(&self, truth: &GroundTruth) -> Vec<LorentzianPeak> {
        truth
            .peaks
            .iter()
            .map(|p| {
                let c = if p.center_hz > 0.0 {
                    p.center_hz + self.offset_hz
                } else if p.center_hz < 0.0 {
                    p.center_hz - self.offset_hz
                } else {
                    p.center_hz
                };
                LorentzianPeak::new(c, p.fwhm_hz * self.width_factor, p.amplitude)
            })
            .collect()
    }
}

/// λ calibrated on the default spectrum with the true-position prior so
/// that the median χ² of the reconstruction sits at χ₀² = 1 (peak-based SNR).
pub fn default_lambda_schedule() -> LambdaSchedule {
    LambdaSchedule::new(vec![
        (1.0, 11500.0),
        (2.0, 2760.0),
        (3.0, 1100.0),
        (5.0, 540.0),
        (7.0, 360.0),
        (10.0, 270.0),
    ])
    .expect("static schedule is valid")
}

/// Wavelet settings used by the harness: two decomposition levels keep the
/// 1 GHz lines (two pixels wide) out of the coarse bands that the universal
/// threshold wipes.
pub fn default_bench_wavelet() -> WaveletConfig {
    WaveletConfig {
        levels: Some(2),
        ..WaveletConfig::default()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub truth: GroundTruth,
    pub detector: DetectorModel,
    pub sampling: Sampling,
    pub snr_grid: Vec<f64>,
    pub snr_convention: SnrConvention,
    pub realizations: usize,
    pub methods: Vec<Method>,
    pub regenerate_infeasible: bool,
    /// Cap on fresh draws per realization when regenerating.
    pub max_regenerations: usize,
    pub base_seed: u64,
    pub mer_config: MerConfig,
    pub lambda_mode: LambdaMode,
    pub lambda_schedule: LambdaSchedule,
    pub prior: PriorSettings,
    pub wavelet_config: WaveletConfig,
    pub fit_options: FitOptions,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            truth: GroundTruth::standard(),
            detector: DetectorModel::standard(),
            sampling: Sampling::CenterSample,
            snr_grid: (1..=10).map(f64::from).collect(),
            snr_convention: SnrConvention::PeakBased,
            realizations: 500,
            methods: Method::all().to_vec(),
            regenerate_infeasible: true,
            max_regenerations: 1000,
            base_seed: 0x5EED,
            mer_config: MerConfig::default(),
            lambda_mode: LambdaMode::Schedule,
            lambda_schedule: default_lambda_schedule(),
            prior: PriorSettings::default(),
            wavelet_config: default_bench_wavelet(),
            fit_options: FitOptions::default(),
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        self.detector.validate()?;
        self.truth.validate()?;
        self.mer_config.validate()?;
        if self.realizations < 50 {
            return Err(Error::invalid(format!(
                "at least 50 realizations are needed, got {}",
                self.realizations
            )));
        }
        if self.snr_grid.is_empty() || self.snr_grid.iter().any(|s| !(*s > 0.0 && s.is_finite())) {
            return Err(Error::invalid("SNR grid must be non-empty and positive"));
        }
        if self.methods.is_empty() {
            return Err(Error::invalid("no methods selected"));
        }
        if self.prior.enabled && !(self.prior.width_factor > 0.0) {
            return Err(Error::invalid("prior width factor must be positive"));
        }
        Ok(())
    }

    fn lambda_for(&self, snr: f64) -> f64 {
        match self.lambda_mode {
            LambdaMode::Fixed | LambdaMode::Search => self.mer_config.lambda,
            LambdaMode::Schedule => self.lambda_schedule.lambda_for(snr),
        }
    }
}

/// Result of running one method on one spectrum.
#[derive(Debug, Clone)]
pub enum Outcome {
    Fitted(FitResult),
    /// The MER data were infeasible.
    Infeasible,
    /// Fit did not converge, found no peaks, or landed outside
    /// `[0, bandwidth/2]`.
    FitFailed,
}

/// Denoised spectrum for one method, plus the MER diagnostics when used.
pub fn denoise_with(
    method: Method,
    noisy: &Spectrum,
    sigma: f64,
    snr: f64,
    config: &BenchConfig,
) -> Result<(Spectrum, Option<MerResult>)> {
    match method {
        Method::None => Ok((noisy.clone(), None)),
        Method::Wa => Ok((wavelet::denoise(noisy, &config.wavelet_config)?, None)),
        Method::Mer => {
            let mut mc = config.mer_config.clone();
            mc.lambda = config.lambda_for(snr);
            if config.prior.enabled {
                let total: f64 = noisy.intensities().iter().sum();
                mc.prior_model = Some(build_prior(
                    &config.prior.peaks(&config.truth),
                    &config.detector,
                    config.prior.background_fraction,
                    total,
                )?);
            }
            let sig = mer::uniform_sigma(noisy.len(), sigma);
            let response = &config.detector.response;
            let res = match config.lambda_mode {
                LambdaMode::Search => {
                    mer::reconstruct_with_lambda_search(noisy, response, &sig, &mc, 1e-3 * mc.lambda, 1e3 * mc.lambda, 1e-3)?
                }
                _ => mer::reconstruct(noisy, response, &sig, &mc)?,
            };
            Ok((res.reconstruction.clone(), Some(res)))
        }
    }
}

/// Fits three lines and applies the harness acceptance rule.
pub fn fit_outcome(spectrum: &Spectrum, config: &BenchConfig) -> Outcome {
    let Ok(model) = initial_guess(spectrum, 3, None) else {
        return Outcome::FitFailed;
    };
    match fit(spectrum, &model, &config.fit_options) {
        Ok(r) if r.converged && r.shift_hz >= 0.0 && r.shift_hz <= 0.5 * config.detector.bandwidth_hz() => {
            Outcome::Fitted(r)
        }
        _ => Outcome::FitFailed,
    }
}

/// Per-(SNR, method) statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodStats {
    pub snr: f64,
    pub method: Method,
    pub bias_hz: f64,
    pub std_hz: f64,
    pub bias_pct: f64,
    pub std_pct: f64,
    pub linewidth_mean_hz: f64,
    pub linewidth_std_hz: f64,
    /// Realizations that produced a denoised spectrum.
    pub n_success: usize,
    /// Infeasible MER draws replaced by fresh noise (or dropped when
    /// regeneration is off).
    pub n_regenerated: usize,
    /// Successful realizations whose fit was rejected.
    pub n_fit_failures: usize,
    /// MER runs that stopped on the iteration cap.
    pub n_max_iterations: usize,
    pub crlb_std_hz: f64,
}

impl MethodStats {
    /// Infeasible fraction of all MER draws.
    pub fn regeneration_fraction(&self) -> f64 {
        let total = self.n_regenerated + self.n_success;
        if total == 0 {
            0.0
        } else {
            self.n_regenerated as f64 / total as f64
        }
    }

    /// Standard error of `std_hz`, `std/√(2(n−1))`.
    pub fn std_standard_error(&self) -> f64 {
        let n = self.n_success.saturating_sub(self.n_fit_failures);
        if n < 2 {
            f64::NAN
        } else {
            self.std_hz / (2.0 * (n - 1) as f64).sqrt()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<MethodStats>,
    /// `(snr, crlb_std_hz)` for every SNR that ran.
    pub crlb: Vec<(f64, f64)>,
    /// False when the run was stopped early.
    pub complete: bool,
    pub config: BenchConfig,
}

impl BenchReport {
    pub const CSV_HEADER: &'static str = "snr,method,bias_ghz,std_ghz,bias_pct,std_pct,linewidth_mean_ghz,linewidth_std_ghz,n_success,n_regenerated,n_fit_failures,crlb_std_ghz";

    pub fn row(&self, snr: f64, method: Method) -> Option<&MethodStats> {
        self.rows.iter().find(|r| r.snr == snr && r.method == method)
    }

    pub fn to_csv_string(&self) -> String {
        let mut s = String::from(Self::CSV_HEADER);
        s.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{},{},{},{},{}",
                r.snr,
                r.method.as_str(),
                r.bias_hz / 1e9,
                r.std_hz / 1e9,
                r.bias_pct,
                r.std_pct,
                r.linewidth_mean_hz / 1e9,
                r.linewidth_std_hz / 1e9,
                r.n_success,
                r.n_regenerated,
                r.n_fit_failures,
                r.crlb_std_hz / 1e9
            );
        }
        s
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        write_atomic(path.as_ref(), self.to_csv_string().as_bytes())
    }
}

/// `(mean, std)` of the fitted linewidth for each method at `snr`.
pub fn linewidth_stats(report: &BenchReport, snr: f64) -> Result<Vec<(Method, f64, f64)>> {
    let rows: Vec<_> = report
        .rows
        .iter()
        .filter(|r| r.snr == snr)
        .map(|r| (r.method, r.linewidth_mean_hz, r.linewidth_std_hz))
        .collect();
    if rows.is_empty() {
        return Err(Error::MissingSnr(snr));
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchProgress {
    pub snr: f64,
    pub snr_done: usize,
    pub snr_total: usize,
}

/// Per-realization work unit result: one entry per configured method.
struct Unit {
    outcomes: Vec<(Outcome, usize, bool)>,
}

fn run_unit(config: &BenchConfig, clean: &Spectrum, snr_idx: usize, k: usize, snr: f64, sigma: f64) -> Result<Unit> {
    let noisy_for = |attempt: u64| {
        let seed = derive_seed(config.base_seed, &[snr_idx as u64, k as u64, attempt]);
        add_noise(clean, &NoiseSpec::new(sigma, seed))
    };
    let first = noisy_for(0);
    let mut outcomes = Vec::with_capacity(config.methods.len());
    for &method in &config.methods {
        if method != Method::Mer {
            let (den, _) = denoise_with(method, &first, sigma, snr, config)?;
            outcomes.push((fit_outcome(&den, config), 0, false));
            continue;
        }
        let mut regenerated = 0usize;
        let mut attempt = 0u64;
        loop {
            let noisy = if attempt == 0 { first.clone() } else { noisy_for(attempt) };
            let (den, res) = denoise_with(method, &noisy, sigma, snr, config)?;
            let res = res.expect("MER returns diagnostics");
            if res.status == MerStatus::InfeasibleData {
                regenerated += 1;
                if config.regenerate_infeasible && regenerated < config.max_regenerations {
                    attempt += 1;
                    continue;
                }
                outcomes.push((Outcome::Infeasible, regenerated, false));
                break;
            }
            let hit_cap = res.status == MerStatus::MaxIterations;
            outcomes.push((fit_outcome(&den, config), regenerated, hit_cap));
            break;
        }
    }
    Ok(Unit { outcomes })
}

fn sample_stats(v: &[f64]) -> (f64, f64) {
    let n = v.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = v.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, var.sqrt())
}

/// Runs the whole sweep. `progress` is called after each SNR and may return
/// `false` to stop; the report is then flagged incomplete.
pub fn run_bench(config: &BenchConfig, progress: Option<&(dyn Fn(&BenchProgress) -> bool + Sync)>) -> Result<BenchReport> {
    config.validate()?;
    let clean = crate::spectrum::synthesize(&config.truth, &config.detector, config.sampling)?;
    let integrated = clean.integrated_intensity();
    let shift = config.truth.brillouin_shift_hz;
    let mut rows = Vec::new();
    let mut crlb_rows = Vec::new();
    let mut complete = true;

    for (snr_idx, &snr) in config.snr_grid.iter().enumerate() {
        let sigma = sigma_for_snr(snr, &config.truth, &config.detector, config.snr_convention)?;
        let crlb_std = CrlbInputs::from_noise(
            config.detector.clone(),
            config.truth.brillouin_fwhm_hz,
            config.truth.relative_intensity(),
            integrated,
            sigma,
        )
        .and_then(|i| crate::crlb::crlb_variance(&i))
        .map(f64::sqrt)
        .unwrap_or(f64::NAN);
        crlb_rows.push((snr, crlb_std));

        let units: Vec<Unit> = (0..config.realizations)
            .into_par_iter()
            .map(|k| run_unit(config, &clean, snr_idx, k, snr, sigma))
            .collect::<Result<_>>()?;

        for (m_idx, &method) in config.methods.iter().enumerate() {
            let (mut shifts, mut widths) = (Vec::new(), Vec::new());
            let (mut n_success, mut n_regen, mut n_fail, mut n_cap) = (0, 0, 0, 0);
            for u in &units {
                let (outcome, regen, cap) = &u.outcomes[m_idx];
                n_regen += regen;
                n_cap += usize::from(*cap);
                match outcome {
                    Outcome::Infeasible => {}
                    Outcome::FitFailed => {
                        n_success += 1;
                        n_fail += 1;
                    }
                    Outcome::Fitted(r) => {
                        n_success += 1;
                        shifts.push(r.shift_hz);
                        widths.push(r.fwhm_hz);
                    }
                }
            }
            let (mean, std) = sample_stats(&shifts);
            let (lw_mean, lw_std) = sample_stats(&widths);
            rows.push(MethodStats {
                snr,
                method,
                bias_hz: mean - shift,
                std_hz: std,
                bias_pct: 100.0 * (mean - shift) / shift,
                std_pct: 100.0 * std / shift,
                linewidth_mean_hz: lw_mean,
                linewidth_std_hz: lw_std,
                n_success,
                n_regenerated: n_regen,
                n_fit_failures: n_fail,
                n_max_iterations: n_cap,
                crlb_std_hz: crlb_std,
            });
        }

        if let Some(cb) = progress {
            let keep_going = cb(&BenchProgress {
                snr,
                snr_done: snr_idx + 1,
                snr_total: config.snr_grid.len(),
            });
            if !keep_going && snr_idx + 1 < config.snr_grid.len() {
                complete = false;
                break;
            }
        }
    }

    Ok(BenchReport {
        rows,
        crlb: crlb_rows,
        complete,
        config: config.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(methods: Vec<Method>) -> BenchConfig {
        BenchConfig {
            snr_grid: vec![10.0],
            realizations: 50,
            methods,
            ..BenchConfig::default()
        }
    }

    #[test]
    fn rejects_small_runs() {
        let c = BenchConfig {
            realizations: 10,
            ..BenchConfig::default()
        };
        assert!(run_bench(&c, None).is_err());
    }

    #[test]
    fn noiseless_limit_is_exact() {
        let mut c = small(Method::all().to_vec());
        // Huge SNR: σ = 1e-9 counts.
        c.snr_grid = vec![1e12];
        c.lambda_mode = LambdaMode::Fixed;
        c.mer_config.lambda = 1e-3;
        let rep = run_bench(&c, None).unwrap();
        for r in &rep.rows {
            assert!(r.bias_pct.abs() < 1e-4, "{:?}", r);
            assert!(r.std_pct < 1e-4, "{:?}", r);
        }
    }

    #[test]
    fn csv_layout() {
        let rep = run_bench(&small(vec![Method::None]), None).unwrap();
        let csv = rep.to_csv_string();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), BenchReport::CSV_HEADER);
        let fields: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(fields.len(), 12);
        assert_eq!(fields[1], "none");
        assert_eq!(fields[8], "50");
        assert!(linewidth_stats(&rep, 10.0).is_ok());
        assert!(matches!(linewidth_stats(&rep, 3.0), Err(Error::MissingSnr(_))));
    }

    #[test]
    fn stop_flags_incomplete() {
        let mut c = small(vec![Method::None]);
        c.snr_grid = vec![5.0, 10.0];
        let rep = run_bench(&c, Some(&|_: &BenchProgress| false)).unwrap();
        assert!(!rep.complete);
        assert_eq!(rep.rows.len(), 1);
    }

    #[test]
    fn prior_offset_moves_brillouin_lines_outward() {
        let p = PriorSettings {
            offset_hz: 5e9,
            width_factor: 2.0,
            ..PriorSettings::default()
        };
        let peaks = p.peaks(&GroundTruth::standard());
        let centres: Vec<f64> = peaks.iter().map(|p| p.center_hz).collect();
        assert_eq!(centres, vec![0.0, -15e9, 15e9]);
        assert!(peaks.iter().all(|p| p.fwhm_hz == 2e9));
    }
}
