//! Wavelet-shrinkage denoising: multi-level DWT, noise estimation,
//! universal or level-dependent thresholds, soft/hard shrinkage and the
//! inverse transform.

mod filters;
mod transform;

use std::fmt::{self, Write as _};

use crate::error::{Error, Result};
use crate::spectrum::Spectrum;
use transform::FilterBank;

/// MAD-to-σ factor for Gaussian data.
const MAD_TO_SIGMA: f64 = 0.6745;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WaveletFamily {
    /// Orders 1 (Haar) through 10.
    Daubechies(usize),
    /// Orders 2 through 10.
    Symlet(usize),
}

impl WaveletFamily {
    /// Every family shipped with the crate.
    pub fn all() -> Vec<WaveletFamily> {
        (1..=10)
            .map(WaveletFamily::Daubechies)
            .chain((2..=10).map(WaveletFamily::Symlet))
            .collect()
    }

    pub(crate) fn lowpass(&self) -> Result<&'static [f64]> {
        let filt = match *self {
            WaveletFamily::Daubechies(p) => filters::daubechies(p),
            WaveletFamily::Symlet(p) => filters::symlet(p),
        };
        filt.ok_or_else(|| Error::invalid(format!("unsupported wavelet {self}")))
    }

    pub fn filter_len(&self) -> Result<usize> {
        self.lowpass().map(<[f64]>::len)
    }

    pub fn parse(s: &str) -> Option<Self> {
        let (kind, order) = if let Some(o) = s.strip_prefix("db") {
            (0, o)
        } else if let Some(o) = s.strip_prefix("sym") {
            (1, o)
        } else {
            return None;
        };
        let order: usize = order.parse().ok()?;
        let fam = if kind == 0 {
            WaveletFamily::Daubechies(order)
        } else {
            WaveletFamily::Symlet(order)
        };
        fam.lowpass().ok().map(|_| fam)
    }
}

impl fmt::Display for WaveletFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WaveletFamily::Daubechies(p) => write!(f, "db{p}"),
            WaveletFamily::Symlet(p) => write!(f, "sym{p}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ThresholdMode {
    #[default]
    Soft,
    Hard,
}

impl ThresholdMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            ThresholdMode::Soft => "soft",
            ThresholdMode::Hard => "hard",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "soft" => Some(ThresholdMode::Soft),
            "hard" => Some(ThresholdMode::Hard),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ThresholdRule {
    /// `n·√(2 ln N / N)`.
    PaperUniversal,
    /// `n·√(2 ln N)`.
    #[default]
    DonohoUniversal,
    /// `n_l·√(2 ln N)` with `n_l` estimated from each level's own details.
    LevelDependent,
}

impl ThresholdRule {
    pub fn as_str(&self) -> &'static str {
        match self {
            ThresholdRule::PaperUniversal => "paper-universal",
            ThresholdRule::DonohoUniversal => "donoho-universal",
            ThresholdRule::LevelDependent => "level-dependent",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "paper-universal" => Some(ThresholdRule::PaperUniversal),
            "donoho-universal" => Some(ThresholdRule::DonohoUniversal),
            "level-dependent" => Some(ThresholdRule::LevelDependent),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Boundary {
    #[default]
    Symmetric,
    Periodic,
    Zero,
}

impl Boundary {
    pub fn all() -> [Boundary; 3] {
        [Boundary::Symmetric, Boundary::Periodic, Boundary::Zero]
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Boundary::Symmetric => "symmetric",
            Boundary::Periodic => "periodic",
            Boundary::Zero => "zero",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "symmetric" => Some(Boundary::Symmetric),
            "periodic" => Some(Boundary::Periodic),
            "zero" => Some(Boundary::Zero),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WaveletConfig {
    pub family: WaveletFamily,
    /// Decomposition depth; `None` picks `⌊log₂N⌋ − 2` (at least 1).
    pub levels: Option<usize>,
    pub threshold_mode: ThresholdMode,
    pub threshold_rule: ThresholdRule,
    /// Known noise σ; estimated from the finest details when absent.
    pub noise_level: Option<f64>,
    pub boundary: Boundary,
    /// Multiplier applied to every threshold.
    pub threshold_scale: f64,
}

impl Default for WaveletConfig {
    fn default() -> Self {
        WaveletConfig {
            family: WaveletFamily::Daubechies(8),
            levels: None,
            threshold_mode: ThresholdMode::Soft,
            threshold_rule: ThresholdRule::DonohoUniversal,
            noise_level: None,
            boundary: Boundary::Symmetric,
            threshold_scale: 1.0,
        }
    }
}

impl WaveletConfig {
    pub fn default_levels(n: usize) -> usize {
        (floor_log2(n).saturating_sub(2)).max(1)
    }

    pub fn levels_for(&self, n: usize) -> usize {
        self.levels.unwrap_or_else(|| Self::default_levels(n))
    }
}

fn floor_log2(n: usize) -> usize {
    if n == 0 {
        0
    } else {
        (usize::BITS - 1 - n.leading_zeros()) as usize
    }
}

/// Multi-level decomposition of a length-`len` signal.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletCoefficients {
    /// `detail[0]` is the finest level.
    pub detail: Vec<Vec<f64>>,
    /// Coarsest approximation band.
    pub approximation: Vec<f64>,
    /// Original signal length.
    pub len: usize,
    pub family: WaveletFamily,
    pub boundary: Boundary,
    /// Input length at each level, finest first.
    level_lens: Vec<usize>,
}

impl WaveletCoefficients {
    pub fn levels(&self) -> usize {
        self.detail.len()
    }

    /// Total coefficient count M.
    pub fn total_len(&self) -> usize {
        self.approximation.len() + self.detail.iter().map(Vec::len).sum::<usize>()
    }

    pub fn energy(&self) -> f64 {
        self.approximation
            .iter()
            .chain(self.detail.iter().flatten())
            .map(|c| c * c)
            .sum()
    }

    /// CSV dump with header `level,index,value`. Details use levels `1..=L`
    /// (1 finest); the approximation band is written as level 0.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("level,index,value\n");
        for (i, c) in self.approximation.iter().enumerate() {
            let _ = writeln!(out, "0,{i},{c}");
        }
        for (l, band) in self.detail.iter().enumerate() {
            for (i, c) in band.iter().enumerate() {
                let _ = writeln!(out, "{},{i},{c}", l + 1);
            }
        }
        out
    }
}

/// Forward multi-level DWT over the intensities of `signal`.
pub fn dwt(signal: &Spectrum, config: &WaveletConfig) -> Result<WaveletCoefficients> {
    dwt_values(signal.intensities(), config)
}

pub fn dwt_values(x: &[f64], config: &WaveletConfig) -> Result<WaveletCoefficients> {
    let n = x.len();
    let bank = FilterBank::from_lowpass(config.family.lowpass()?);
    if n < 2 || n < bank.len() {
        return Err(Error::SignalTooShort {
            len: n,
            support: bank.len().max(2),
        });
    }
    let levels = config.levels_for(n);
    if levels == 0 || levels > floor_log2(n) {
        return Err(Error::invalid(format!(
            "levels must lie in 1..={} for a length-{n} signal, got {levels}",
            floor_log2(n)
        )));
    }
    let mut approx = x.to_vec();
    let mut detail = Vec::with_capacity(levels);
    let mut level_lens = Vec::with_capacity(levels);
    for _ in 0..levels {
        level_lens.push(approx.len());
        let (a, d) = transform::analyze(&approx, &bank, config.boundary);
        detail.push(d);
        approx = a;
    }
    Ok(WaveletCoefficients {
        detail,
        approximation: approx,
        len: n,
        family: config.family,
        boundary: config.boundary,
        level_lens,
    })
}

/// Inverse multi-level DWT.
pub fn idwt(coeffs: &WaveletCoefficients) -> Result<Vec<f64>> {
    let bank = FilterBank::from_lowpass(coeffs.family.lowpass()?);
    let mut approx = coeffs.approximation.clone();
    for (band, &out_len) in coeffs.detail.iter().zip(&coeffs.level_lens).rev() {
        if band.len() != approx.len() {
            return Err(Error::DimensionMismatch {
                expected: approx.len(),
                actual: band.len(),
            });
        }
        approx = transform::synthesize(&approx, band, &bank, coeffs.boundary, out_len);
    }
    Ok(approx)
}

fn median(values: &mut [f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.sort_by(f64::total_cmp);
    let m = values.len() / 2;
    if values.len() % 2 == 1 {
        values[m]
    } else {
        0.5 * (values[m - 1] + values[m])
    }
}

/// Robust σ estimate from one band of coefficients, `median(|c|)/0.6745`.
pub fn mad_sigma(band: &[f64]) -> f64 {
    let mut abs: Vec<f64> = band.iter().map(|c| c.abs()).collect();
    median(&mut abs) / MAD_TO_SIGMA
}

/// Noise level from the finest detail band.
pub fn estimate_noise_level(coeffs: &WaveletCoefficients) -> Result<f64> {
    let finest = coeffs
        .detail
        .first()
        .filter(|b| !b.is_empty())
        .ok_or_else(|| Error::invalid("finest detail level is empty"))?;
    Ok(mad_sigma(finest))
}

/// Threshold for noise level `n` on a length-`len` signal. For the
/// level-dependent rule, pass that level's own noise estimate as `n`.
pub fn threshold_value(n: f64, len: usize, rule: ThresholdRule) -> f64 {
    let ln = (len as f64).ln();
    match rule {
        ThresholdRule::PaperUniversal => n * (2.0 * ln / len as f64).sqrt(),
        ThresholdRule::DonohoUniversal | ThresholdRule::LevelDependent => n * (2.0 * ln).sqrt(),
    }
}

#[inline]
pub fn shrink_value(c: f64, q: f64, mode: ThresholdMode) -> f64 {
    match mode {
        ThresholdMode::Soft => c.signum() * (c.abs() - q).max(0.0),
        ThresholdMode::Hard => {
            if c.abs() > q {
                c
            } else {
                0.0
            }
        }
    }
}

/// Shrinks every detail band with its own threshold; the approximation is
/// left untouched.
pub fn shrink(coeffs: &WaveletCoefficients, thresholds: &[f64], mode: ThresholdMode) -> Result<WaveletCoefficients> {
    if thresholds.len() != coeffs.levels() {
        return Err(Error::DimensionMismatch {
            expected: coeffs.levels(),
            actual: thresholds.len(),
        });
    }
    if thresholds.iter().any(|q| !(*q >= 0.0)) {
        return Err(Error::invalid("thresholds must be non-negative"));
    }
    let mut out = coeffs.clone();
    for (band, &q) in out.detail.iter_mut().zip(thresholds) {
        for c in band.iter_mut() {
            *c = shrink_value(*c, q, mode);
        }
    }
    Ok(out)
}

/// Per-level thresholds (finest first) that [`denoise`] would apply.
pub fn level_thresholds(coeffs: &WaveletCoefficients, config: &WaveletConfig) -> Result<Vec<f64>> {
    let n = coeffs.len;
    let scale = config.threshold_scale;
    let thresholds = match (config.threshold_rule, config.noise_level) {
        (ThresholdRule::LevelDependent, None) => coeffs
            .detail
            .iter()
            .map(|band| scale * threshold_value(mad_sigma(band), n, ThresholdRule::LevelDependent))
            .collect(),
        (rule, known) => {
            let noise = match known {
                Some(v) => v,
                None => estimate_noise_level(coeffs)?,
            };
            vec![scale * threshold_value(noise, n, rule); coeffs.levels()]
        }
    };
    Ok(thresholds)
}

/// DWT → thresholds → shrinkage → inverse DWT.
pub fn denoise(d: &Spectrum, config: &WaveletConfig) -> Result<Spectrum> {
    let coeffs = dwt(d, config)?;
    let thresholds = level_thresholds(&coeffs, config)?;
    let shrunk = shrink(&coeffs, &thresholds, config.threshold_mode)?;
    d.with_intensities(idwt(&shrunk)?)
}
