//! Command-line front end. [`run`] parses arguments, executes one
//! subcommand and returns the process exit code.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 data error,
//! 3 algorithmic non-convergence (partial diagnostics are still written).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;

use crate::bench::{self, BenchProgress, LambdaMode, Method};
use crate::config::Settings;
use crate::crlb::{self, CrlbInputs};
use crate::error::Error;
use crate::fit::{self, initial_guess};
use crate::io::write_atomic;
use crate::mer::{self, build_prior, MerStatus};
use crate::noise::{add_noise, peak_to_per_pixel_snr, sigma_for_snr, NoiseSpec};
use crate::spectrum::{synthesize, Spectrum};
use crate::wavelet;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_NO_CONVERGENCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "brillouin", version, about = "Denoise, fit and benchmark Brillouin spectra")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// `key = value` configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Override one configuration key (repeatable); applied after --config.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    pub overrides: Vec<String>,
    /// Base seed; same as `--set seed=N`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Increase log output (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the clean synthetic spectrum and optionally a noisy copy.
    Simulate {
        #[arg(long, short)]
        output: PathBuf,
        /// Noisy spectrum path; needs --snr or --sigma (or the noise.* keys).
        #[arg(long)]
        noisy: Option<PathBuf>,
        #[arg(long)]
        snr: Option<f64>,
        #[arg(long)]
        sigma: Option<f64>,
    },
    /// Denoise a spectrum CSV with maximum entropy or wavelet shrinkage.
    Denoise {
        #[arg(long, short)]
        input: PathBuf,
        #[arg(long, short)]
        output: PathBuf,
        #[arg(long, value_enum, default_value_t = DenoiseMethod::Mer)]
        method: DenoiseMethod,
        /// Noise σ of the data; estimated from the finest wavelet details when absent.
        #[arg(long)]
        sigma: Option<f64>,
        /// Peak SNR of the data, used for the λ schedule and to derive σ.
        #[arg(long)]
        snr: Option<f64>,
        /// Exclude `lo:hi` (GHz) from the data term, e.g. the Rayleigh line.
        #[arg(long = "mask-ghz", value_name = "LO:HI", allow_hyphen_values = true)]
        mask_ghz: Vec<String>,
        /// Diagnostics file (`key = value`); defaults to `<output>.diag`.
        #[arg(long)]
        diagnostics: Option<PathBuf>,
        /// Per-iteration MER trace CSV.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Fit Lorentzian lines and report shift and linewidth.
    Fit {
        #[arg(long, short)]
        input: PathBuf,
        /// Result file (`key = value`); printed to stdout as well.
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[arg(long)]
        peaks: Option<usize>,
        #[arg(long = "mask-ghz", value_name = "LO:HI", allow_hyphen_values = true)]
        mask_ghz: Vec<String>,
    },
    /// Cramér–Rao bound on the shift standard deviation versus SNR.
    Crlb {
        #[arg(long, short)]
        output: PathBuf,
        /// Comma-separated SNR values; defaults to `bench.snr_grid`.
        #[arg(long)]
        grid: Option<String>,
        /// Interpret the grid as peak SNR and convert to per-pixel SNR.
        #[arg(long)]
        peak_snr: bool,
    },
    /// Monte Carlo benchmark: report CSV, plots and a config sidecar.
    Bench {
        #[arg(long, short = 'o')]
        out_dir: PathBuf,
        #[arg(long)]
        realizations: Option<usize>,
        #[arg(long)]
        no_plots: bool,
    },
    /// Convert a Brillouin shift to a speed of sound.
    Sound {
        #[arg(long)]
        shift_ghz: f64,
        #[arg(long)]
        wavelength_nm: f64,
        #[arg(long)]
        index: f64,
        #[arg(long, default_value_t = 180.0)]
        angle_deg: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DenoiseMethod {
    Mer,
    Wa,
}

/// Error carrying its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(e: impl std::fmt::Display) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: e.to_string(),
        }
    }

    fn data(e: impl std::fmt::Display) -> Self {
        CliError {
            code: EXIT_DATA,
            message: e.to_string(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::UnknownKey(_) | Error::InvalidParameter(_) => EXIT_USAGE,
            _ => EXIT_DATA,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `args` (including the program name), runs the command and
/// returns the exit code. Errors go to stderr as `ERROR <code>: ...`.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) {
                print!("{e}");
                return EXIT_OK;
            }
            let text = e.to_string();
            eprintln!("ERROR {EXIT_USAGE}: {}", text.trim_start_matches("error: ").trim_end());
            return EXIT_USAGE;
        }
    };
    let level = match cli.global.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    let _ = env_logger::Builder::new().filter_level(level).format_timestamp(None).try_init();
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("ERROR {}: {}", e.code, e.message);
            e.code
        }
    }
}

/// Settings after defaults, the config file and the overrides, in that order.
pub fn resolve_settings(global: &GlobalOpts) -> crate::Result<Settings> {
    let mut s = Settings::default();
    if let Some(p) = &global.config {
        s.apply_file(p)?;
    }
    for kv in &global.overrides {
        s.apply_override(kv)?;
    }
    if let Some(seed) = global.seed {
        s.bench.base_seed = seed;
    }
    Ok(s)
}

fn execute(cli: &Cli) -> CliResult<i32> {
    let settings = resolve_settings(&cli.global).map_err(|e| match e {
        Error::Io { .. } => CliError::data(e),
        _ => CliError::usage(e),
    })?;
    match &cli.command {
        Command::Simulate { output, noisy, snr, sigma } => simulate(&settings, output, noisy.as_deref(), *snr, *sigma),
        Command::Denoise {
            input,
            output,
            method,
            sigma,
            snr,
            mask_ghz,
            diagnostics,
            trace,
        } => {
            let diag = diagnostics.clone().unwrap_or_else(|| with_suffix(output, ".diag"));
            denoise(
                &settings,
                &DenoiseArgs {
                    input,
                    output,
                    method: *method,
                    sigma: *sigma,
                    snr: *snr,
                    mask_ghz,
                    diagnostics: &diag,
                    trace: trace.as_deref(),
                },
            )
        }
        Command::Fit {
            input,
            output,
            peaks,
            mask_ghz,
        } => fit_cmd(&settings, input, output.as_deref(), peaks.unwrap_or(settings.fit_peaks), mask_ghz),
        Command::Crlb { output, grid, peak_snr } => crlb_cmd(&settings, output, grid.as_deref(), *peak_snr),
        Command::Bench {
            out_dir,
            realizations,
            no_plots,
        } => bench_cmd(settings, out_dir, *realizations, !*no_plots),
        Command::Sound {
            shift_ghz,
            wavelength_nm,
            index,
            angle_deg,
        } => {
            let v = fit::speed_of_sound(shift_ghz * 1e9, wavelength_nm * 1e-9, *index, angle_deg.to_radians())
                .map_err(CliError::usage)?;
            println!("speed_of_sound_m_s = {v}");
            Ok(EXIT_OK)
        }
    }
}

fn with_suffix(p: &Path, suffix: &str) -> PathBuf {
    let mut s = p.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    write_atomic(path, text.as_bytes()).map_err(CliError::data)
}

fn parse_masks(spectrum: &mut Spectrum, ranges: &[String]) -> CliResult<()> {
    for r in ranges {
        let (lo, hi) = r
            .split_once(':')
            .and_then(|(a, b)| Some((a.trim().parse::<f64>().ok()?, b.trim().parse::<f64>().ok()?)))
            .filter(|(a, b)| a < b)
            .ok_or_else(|| CliError::usage(format!("--mask-ghz expects LO:HI with LO < HI, got `{r}`")))?;
        spectrum.mask_range(lo * 1e9, hi * 1e9);
    }
    Ok(())
}

fn noise_sigma(settings: &Settings, snr: Option<f64>, sigma: Option<f64>) -> CliResult<Option<f64>> {
    if let Some(s) = sigma.or(settings.noise_sigma) {
        if !(s > 0.0) {
            return Err(CliError::usage(format!("sigma must be positive, got {s}")));
        }
        return Ok(Some(s));
    }
    match snr.or(settings.noise_snr) {
        Some(snr) => Ok(Some(sigma_for_snr(
            snr,
            &settings.bench.truth,
            &settings.bench.detector,
            settings.bench.snr_convention,
        )?)),
        None => Ok(None),
    }
}

fn simulate(settings: &Settings, output: &Path, noisy: Option<&Path>, snr: Option<f64>, sigma: Option<f64>) -> CliResult<i32> {
    let b = &settings.bench;
    let clean = synthesize(&b.truth, &b.detector, b.sampling).map_err(CliError::usage)?;
    clean.write_csv(output).map_err(CliError::data)?;
    println!("clean = {}", output.display());
    if let Some(path) = noisy {
        let sigma = noise_sigma(settings, snr, sigma)?
            .ok_or_else(|| CliError::usage("a noisy spectrum needs --snr or --sigma"))?;
        let spec = NoiseSpec {
            sigma,
            snr_convention: b.snr_convention,
            seed: b.base_seed,
        };
        add_noise(&clean, &spec).write_csv(path).map_err(CliError::data)?;
        println!("noisy = {}", path.display());
        println!("sigma = {sigma}");
        println!("seed = {}", b.base_seed);
    }
    Ok(EXIT_OK)
}

struct DenoiseArgs<'a> {
    input: &'a Path,
    output: &'a Path,
    method: DenoiseMethod,
    sigma: Option<f64>,
    snr: Option<f64>,
    mask_ghz: &'a [String],
    diagnostics: &'a Path,
    trace: Option<&'a Path>,
}

fn denoise(settings: &Settings, a: &DenoiseArgs) -> CliResult<i32> {
    let b = &settings.bench;
    let mut data = Spectrum::read_csv(a.input).map_err(CliError::data)?;
    parse_masks(&mut data, a.mask_ghz)?;
    let mut diag = String::new();
    let _ = writeln!(diag, "input = {}", a.input.display());

    if a.method == DenoiseMethod::Wa {
        let mut cfg = b.wavelet_config.clone();
        if let Some(s) = a.sigma.or(settings.noise_sigma) {
            cfg.noise_level = Some(s);
        }
        let out = wavelet::denoise(&data, &cfg)?;
        out.write_csv(a.output).map_err(CliError::data)?;
        let _ = writeln!(diag, "method = wa");
        let _ = writeln!(diag, "input_energy = {}", data.energy());
        let _ = writeln!(diag, "output_energy = {}", out.energy());
        write_text(a.diagnostics, &diag)?;
        println!("method = wa");
        println!("output = {}", a.output.display());
        return Ok(EXIT_OK);
    }

    let snr = a.snr.or(settings.noise_snr);
    let sigma = match noise_sigma(settings, a.snr, a.sigma)? {
        Some(s) => s,
        None => {
            let mut cfg = b.wavelet_config.clone();
            cfg.levels = Some(1);
            let s = wavelet::estimate_noise_level(&wavelet::dwt(&data, &cfg)?)?;
            info!("estimated noise sigma {s}");
            s
        }
    };
    if !(sigma > 0.0) {
        return Err(CliError::data("noise level is zero; nothing to reconstruct against"));
    }
    let mut mc = b.mer_config.clone();
    if b.prior.enabled {
        let total: f64 = data.intensities().iter().sum();
        mc.prior_model = Some(build_prior(
            &b.prior.peaks(&b.truth),
            &b.detector,
            b.prior.background_fraction,
            total,
        )?);
    }
    let sig = mer::uniform_sigma(data.len(), sigma);
    let response = &b.detector.response;
    if !response.is_identity() && b.detector.num_pixels != data.len() {
        return Err(CliError::data(format!(
            "response is {} pixels wide but the spectrum has {}",
            b.detector.num_pixels,
            data.len()
        )));
    }
    let search = match (b.lambda_mode, snr) {
        (LambdaMode::Search, _) | (LambdaMode::Schedule, None) => true,
        (LambdaMode::Schedule, Some(s)) => {
            mc.lambda = b.lambda_schedule.lambda_for(s);
            false
        }
        (LambdaMode::Fixed, _) => false,
    };

    let feas = mer::feasibility_check(&data, response, &sig, &mc)?;
    println!("feasible = {}", feas.feasible);
    println!("chi_sq_at_entropy_max = {}", feas.chi_sq_at_max);
    let _ = writeln!(diag, "method = mer");
    let _ = writeln!(diag, "sigma = {sigma}");
    let _ = writeln!(diag, "feasible = {}", feas.feasible);
    let _ = writeln!(diag, "chi_sq_at_entropy_max = {}", feas.chi_sq_at_max);

    let res = if search {
        mer::reconstruct_with_lambda_search(&data, response, &sig, &mc, 1e-3 * mc.lambda, 1e4 * mc.lambda, 1e-3)?
    } else {
        mer::reconstruct(&data, response, &sig, &mc)?
    };
    let _ = writeln!(diag, "status = {}", res.status.as_str());
    let _ = writeln!(diag, "lambda = {}", res.lambda);
    let _ = writeln!(diag, "iterations = {}", res.iterations);
    let _ = writeln!(diag, "final_chi_sq = {}", res.final_chi_sq);
    let _ = writeln!(diag, "final_entropy = {}", res.final_entropy);
    let _ = writeln!(diag, "termination_metric = {}", res.final_termination_metric);
    write_text(a.diagnostics, &diag)?;
    if let Some(t) = a.trace {
        write_text(t, &res.trace_csv())?;
    }
    println!("status = {}", res.status.as_str());
    println!("termination_metric = {}", res.final_termination_metric);
    println!("final_chi_sq = {}", res.final_chi_sq);

    match res.status {
        MerStatus::InfeasibleData => Err(CliError::data(
            "data admit no maximum-entropy solution (chi-square at the entropy maximum is already below the target)",
        )),
        MerStatus::MaxIterations => {
            res.reconstruction.write_csv(a.output).map_err(CliError::data)?;
            Err(CliError {
                code: EXIT_NO_CONVERGENCE,
                message: format!("MER stopped after {} iterations without converging", res.iterations),
            })
        }
        MerStatus::Converged => {
            res.reconstruction.write_csv(a.output).map_err(CliError::data)?;
            println!("output = {}", a.output.display());
            Ok(EXIT_OK)
        }
    }
}

fn fit_cmd(settings: &Settings, input: &Path, output: Option<&Path>, peaks: usize, masks: &[String]) -> CliResult<i32> {
    let mut data = Spectrum::read_csv(input).map_err(CliError::data)?;
    parse_masks(&mut data, masks)?;
    let model = initial_guess(&data, peaks, None).map_err(CliError::data)?;
    let r = fit::fit(&data, &model, &settings.bench.fit_options).map_err(CliError::data)?;
    let text = r.to_key_value();
    print!("{text}");
    if let Some(p) = output {
        write_text(p, &text)?;
    }
    if r.converged {
        Ok(EXIT_OK)
    } else {
        Err(CliError {
            code: EXIT_NO_CONVERGENCE,
            message: format!("fit did not converge in {} iterations", r.iterations),
        })
    }
}

fn crlb_cmd(settings: &Settings, output: &Path, grid: Option<&str>, peak: bool) -> CliResult<i32> {
    let b = &settings.bench;
    let mut snrs: Vec<f64> = match grid {
        Some(g) => g
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| s.trim().parse::<f64>().map_err(|_| CliError::usage(format!("bad SNR `{s}`"))))
            .collect::<CliResult<_>>()?,
        None => b.snr_grid.clone(),
    };
    if peak {
        snrs = snrs
            .iter()
            .map(|&s| peak_to_per_pixel_snr(s, &b.truth, &b.detector))
            .collect::<crate::Result<_>>()?;
    }
    let inputs = CrlbInputs::new(b.detector.clone(), b.truth.brillouin_fwhm_hz, b.truth.relative_intensity(), 1.0);
    let curve = crlb::crlb_curve(&inputs, &snrs)?;
    write_text(output, &crlb::curve_csv(&snrs, &curve))?;
    println!("output = {}", output.display());
    Ok(EXIT_OK)
}

fn bench_cmd(mut settings: Settings, out_dir: &Path, realizations: Option<usize>, plots: bool) -> CliResult<i32> {
    if let Some(r) = realizations {
        settings.bench.realizations = r;
    }
    settings.bench.validate()?;
    std::fs::create_dir_all(out_dir).map_err(|e| CliError::data(Error::io(out_dir, e)))?;
    let progress = |p: &BenchProgress| {
        info!("snr {}: {}/{}", p.snr, p.snr_done, p.snr_total);
        true
    };
    let report = bench::run_bench(&settings.bench, Some(&progress))?;
    let csv = out_dir.join("report.csv");
    report.write_csv(&csv).map_err(CliError::data)?;
    write_text(&out_dir.join("config.txt"), &settings.to_config_string())?;
    if plots {
        bench::render_plots(&report, out_dir).map_err(CliError::data)?;
    }
    println!("report = {}", csv.display());
    for r in &report.rows {
        println!(
            "snr={} method={} bias_pct={:.4} std_pct={:.4} linewidth_ghz={:.4}",
            r.snr,
            r.method.as_str(),
            r.bias_pct,
            r.std_pct,
            r.linewidth_mean_hz / 1e9
        );
    }
    let fails: usize = report.rows.iter().filter(|r| r.method == Method::Mer).map(|r| r.n_max_iterations).sum();
    if fails > 0 {
        info!("{fails} MER reconstructions hit the iteration cap");
    }
    if !report.complete {
        return Err(CliError {
            code: EXIT_NO_CONVERGENCE,
            message: "benchmark incomplete: regeneration cap reached before the target count".into(),
        });
    }
    Ok(EXIT_OK)
}
