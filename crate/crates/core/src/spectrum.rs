//! Spectra, detector geometry and Lorentzian line shapes.
//!
//! Frequencies are stored in Hz relative to the Rayleigh line, so the elastic
//! peak sits at 0 Hz and the Stokes/anti-Stokes lines at `∓Ω`.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::io::write_atomic;

/// Relative tolerance for the uniform-spacing check on frequency axes.
const SPACING_TOL: f64 = 1e-9;

/// Linear response of the spectrometer, `g = R · f`.
#[derive(Debug, Clone, PartialEq)]
pub enum Response {
    /// Ideal response, `R_ij = δ_ij`.
    Identity,
    /// Dense `N × N` matrix with non-negative entries.
    Matrix(DMatrix<f64>),
}

impl Response {
    pub fn is_identity(&self) -> bool {
        matches!(self, Response::Identity)
    }

    /// Response that convolves with a normalised box of `width` pixels
    /// (odd), truncated at the edges.
    pub fn box_blur(n: usize, width: usize) -> Self {
        let half = (width / 2) as isize;
        let w = 1.0 / width as f64;
        let m = DMatrix::from_fn(n, n, |i, j| {
            if (i as isize - j as isize).abs() <= half {
                w
            } else {
                0.0
            }
        });
        Response::Matrix(m)
    }

    /// `R · x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        match self {
            Response::Identity => x.to_vec(),
            Response::Matrix(m) => {
                let mut out = vec![0.0; m.nrows()];
                for (i, o) in out.iter_mut().enumerate() {
                    *o = m.row(i).iter().zip(x).map(|(a, b)| a * b).sum();
                }
                out
            }
        }
    }

    /// `Rᵀ · x`.
    pub fn apply_transpose(&self, x: &[f64]) -> Vec<f64> {
        match self {
            Response::Identity => x.to_vec(),
            Response::Matrix(m) => {
                let mut out = vec![0.0; m.ncols()];
                for (i, xi) in x.iter().enumerate() {
                    for (j, o) in out.iter_mut().enumerate() {
                        *o += m[(i, j)] * xi;
                    }
                }
                out
            }
        }
    }

    pub(crate) fn check_dim(&self, n: usize) -> Result<()> {
        match self {
            Response::Identity => Ok(()),
            Response::Matrix(m) if m.nrows() == n && m.ncols() == n => Ok(()),
            Response::Matrix(m) => Err(Error::DimensionMismatch {
                expected: n,
                actual: m.nrows().max(m.ncols()),
            }),
        }
    }
}

/// Pixelated detector behind a dispersive spectrometer.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorModel {
    /// Pixel pitch Δ in metres.
    pub pixel_size_m: f64,
    /// Total detector width X in metres.
    pub detector_width_m: f64,
    /// Number of pixels used for the spectrum.
    pub num_pixels: usize,
    /// Linear scale α between detector position and optical frequency (m/Hz).
    pub dispersion_scale: f64,
    pub response: Response,
    /// FWHM γ of the spectrometer response, in Hz.
    pub response_fwhm_hz: f64,
}

impl DetectorModel {
    /// 6.5 µm pixels on a 16.6 mm detector, 120 pixels spanning 60 GHz,
    /// ideal response.
    pub fn standard() -> Self {
        Self::with_bandwidth(6.5e-6, 16.6e-3, 120, 60e9)
    }

    /// Builds a detector whose `num_pixels` active pixels cover
    /// `bandwidth_hz`, which fixes α = N·Δ / bandwidth.
    pub fn with_bandwidth(
        pixel_size_m: f64,
        detector_width_m: f64,
        num_pixels: usize,
        bandwidth_hz: f64,
    ) -> Self {
        DetectorModel {
            pixel_size_m,
            detector_width_m,
            num_pixels,
            dispersion_scale: num_pixels as f64 * pixel_size_m / bandwidth_hz,
            response: Response::Identity,
            response_fwhm_hz: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_pixels < 4 {
            return Err(Error::invalid("detector needs at least 4 pixels"));
        }
        if !(self.pixel_size_m > 0.0 && self.detector_width_m > 0.0) {
            return Err(Error::invalid("pixel size and detector width must be positive"));
        }
        if !(self.dispersion_scale > 0.0) {
            return Err(Error::invalid("dispersion scale must be positive"));
        }
        if !(self.response_fwhm_hz >= 0.0) {
            return Err(Error::invalid("response FWHM must be non-negative"));
        }
        match &self.response {
            Response::Identity => {
                if self.response_fwhm_hz != 0.0 {
                    return Err(Error::invalid("identity response implies zero response FWHM"));
                }
            }
            Response::Matrix(m) => {
                self.response.check_dim(self.num_pixels)?;
                if m.iter().any(|v| *v < 0.0) {
                    return Err(Error::invalid("response matrix must be non-negative"));
                }
            }
        }
        Ok(())
    }

    /// Frequency spacing between adjacent pixel centres, Δ/α.
    pub fn frequency_step_hz(&self) -> f64 {
        self.pixel_size_m / self.dispersion_scale
    }

    pub fn bandwidth_hz(&self) -> f64 {
        self.num_pixels as f64 * self.frequency_step_hz()
    }

    /// Index of the pixel that sits at 0 Hz.
    pub fn center_pixel(&self) -> usize {
        self.num_pixels / 2
    }

    /// Pixel-centre frequencies `(i − i_c)·Δf`.
    pub fn frequency_axis(&self) -> Vec<f64> {
        let step = self.frequency_step_hz();
        let c = self.center_pixel() as f64;
        (0..self.num_pixels).map(|i| (i as f64 - c) * step).collect()
    }
}

/// Peak-height normalised Lorentzian line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzianPeak {
    pub center_hz: f64,
    pub fwhm_hz: f64,
    pub amplitude: f64,
}

impl LorentzianPeak {
    pub fn new(center_hz: f64, fwhm_hz: f64, amplitude: f64) -> Self {
        LorentzianPeak {
            center_hz,
            fwhm_hz,
            amplitude,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.fwhm_hz > 0.0) || !self.fwhm_hz.is_finite() {
            return Err(Error::invalid(format!("FWHM must be positive, got {}", self.fwhm_hz)));
        }
        if !(self.amplitude >= 0.0) {
            return Err(Error::invalid(format!(
                "amplitude must be non-negative, got {}",
                self.amplitude
            )));
        }
        Ok(())
    }

    #[inline]
    pub fn value(&self, freq_hz: f64) -> f64 {
        lorentzian_value(self, freq_hz)
    }
}

/// `A · (Γ/2)² / ((ν − ν₀)² + (Γ/2)²)`.
#[inline]
pub fn lorentzian_value(peak: &LorentzianPeak, freq_hz: f64) -> f64 {
    let hw = 0.5 * peak.fwhm_hz;
    let dx = freq_hz - peak.center_hz;
    peak.amplitude * hw * hw / (dx * dx + hw * hw)
}

/// A frequency axis bound to per-pixel intensities.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    frequencies_hz: Vec<f64>,
    intensities: Vec<f64>,
    /// `true` marks a pixel excluded from fitting and from the data term.
    mask: Option<Vec<bool>>,
}

impl Spectrum {
    pub fn new(frequencies_hz: Vec<f64>, intensities: Vec<f64>) -> Result<Self> {
        Self::with_mask(frequencies_hz, intensities, None)
    }

    pub fn with_mask(
        frequencies_hz: Vec<f64>,
        intensities: Vec<f64>,
        mask: Option<Vec<bool>>,
    ) -> Result<Self> {
        if intensities.len() != frequencies_hz.len() {
            return Err(Error::DimensionMismatch {
                expected: frequencies_hz.len(),
                actual: intensities.len(),
            });
        }
        if let Some(m) = &mask {
            if m.len() != frequencies_hz.len() {
                return Err(Error::DimensionMismatch {
                    expected: frequencies_hz.len(),
                    actual: m.len(),
                });
            }
        }
        if frequencies_hz.len() < 2 {
            return Err(Error::invalid("a spectrum needs at least two pixels"));
        }
        let step = frequencies_hz[1] - frequencies_hz[0];
        if !(step > 0.0) {
            return Err(Error::invalid("frequencies must be strictly increasing"));
        }
        for w in frequencies_hz.windows(2) {
            let d = w[1] - w[0];
            if !(d > 0.0) {
                return Err(Error::invalid("frequencies must be strictly increasing"));
            }
            if ((d - step) / step).abs() > SPACING_TOL {
                return Err(Error::invalid("frequency axis is not uniformly spaced"));
            }
        }
        let span = frequencies_hz[frequencies_hz.len() - 1] - frequencies_hz[0];
        let expected = step * (frequencies_hz.len() - 1) as f64;
        if ((span - expected) / expected).abs() > SPACING_TOL {
            return Err(Error::invalid("frequency axis is not uniformly spaced"));
        }
        if intensities.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("intensities must be finite"));
        }
        Ok(Spectrum {
            frequencies_hz,
            intensities,
            mask,
        })
    }

    /// Shares the axis and mask of `self` with new intensities.
    pub fn with_intensities(&self, intensities: Vec<f64>) -> Result<Self> {
        if intensities.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                actual: intensities.len(),
            });
        }
        Ok(Spectrum {
            frequencies_hz: self.frequencies_hz.clone(),
            intensities,
            mask: self.mask.clone(),
        })
    }

    pub fn len(&self) -> usize {
        self.intensities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intensities.is_empty()
    }

    pub fn frequencies_hz(&self) -> &[f64] {
        &self.frequencies_hz
    }

    pub fn intensities(&self) -> &[f64] {
        &self.intensities
    }

    pub fn intensities_mut(&mut self) -> &mut [f64] {
        &mut self.intensities
    }

    pub fn into_intensities(self) -> Vec<f64> {
        self.intensities
    }

    pub fn mask(&self) -> Option<&[bool]> {
        self.mask.as_deref()
    }

    pub fn set_mask(&mut self, mask: Option<Vec<bool>>) -> Result<()> {
        if let Some(m) = &mask {
            if m.len() != self.len() {
                return Err(Error::DimensionMismatch {
                    expected: self.len(),
                    actual: m.len(),
                });
            }
        }
        self.mask = mask;
        Ok(())
    }

    /// Masks every pixel whose centre lies in `[lo_hz, hi_hz]`, on top of any
    /// existing mask.
    pub fn mask_range(&mut self, lo_hz: f64, hi_hz: f64) {
        let n = self.len();
        let mask = self.mask.get_or_insert_with(|| vec![false; n]);
        for (m, f) in mask.iter_mut().zip(&self.frequencies_hz) {
            if *f >= lo_hz && *f <= hi_hz {
                *m = true;
            }
        }
    }

    #[inline]
    pub fn is_masked(&self, i: usize) -> bool {
        self.mask.as_ref().is_some_and(|m| m[i])
    }

    pub fn active_count(&self) -> usize {
        (0..self.len()).filter(|&i| !self.is_masked(i)).count()
    }

    pub fn frequency_step_hz(&self) -> f64 {
        let n = self.len();
        (self.frequencies_hz[n - 1] - self.frequencies_hz[0]) / (n - 1) as f64
    }

    /// Trapezoidal integral of the intensities over the pixel index, in
    /// counts (pixel spacing 1).
    pub fn integrated_intensity(&self) -> f64 {
        let v = &self.intensities;
        let inner: f64 = v.iter().sum();
        inner - 0.5 * (v[0] + v[v.len() - 1])
    }

    pub fn energy(&self) -> f64 {
        self.intensities.iter().map(|v| v * v).sum()
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::with_capacity(self.len() * 32);
        match &self.mask {
            Some(mask) => {
                out.push_str("frequency_ghz,intensity,mask\n");
                for ((f, v), m) in self.frequencies_hz.iter().zip(&self.intensities).zip(mask) {
                    let _ = writeln!(out, "{},{},{}", f / 1e9, v, u8::from(*m));
                }
            }
            None => {
                out.push_str("frequency_ghz,intensity\n");
                for (f, v) in self.frequencies_hz.iter().zip(&self.intensities) {
                    let _ = writeln!(out, "{},{}", f / 1e9, v);
                }
            }
        }
        out
    }

    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::parse("line 1", "empty spectrum file"))?;
        let cols: Vec<&str> = header.split(',').map(str::trim).collect();
        let has_mask = match cols.as_slice() {
            ["frequency_ghz", "intensity"] => false,
            ["frequency_ghz", "intensity", "mask"] => true,
            _ => {
                return Err(Error::parse(
                    "line 1",
                    format!("expected header `frequency_ghz,intensity[,mask]`, got `{header}`"),
                ))
            }
        };
        let mut freqs = Vec::new();
        let mut values = Vec::new();
        let mut mask = Vec::new();
        for (idx, line) in lines {
            let loc = || format!("line {}", idx + 1);
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let want = if has_mask { 3 } else { 2 };
            if fields.len() != want {
                return Err(Error::parse(loc(), format!("expected {want} fields, got {}", fields.len())));
            }
            let f: f64 = fields[0]
                .parse()
                .map_err(|_| Error::parse(loc(), format!("bad frequency `{}`", fields[0])))?;
            let v: f64 = fields[1]
                .parse()
                .map_err(|_| Error::parse(loc(), format!("bad intensity `{}`", fields[1])))?;
            freqs.push(f * 1e9);
            values.push(v);
            if has_mask {
                mask.push(match fields[2] {
                    "0" | "false" => false,
                    "1" | "true" => true,
                    other => return Err(Error::parse(loc(), format!("bad mask value `{other}`"))),
                });
            }
        }
        Spectrum::with_mask(freqs, values, has_mask.then_some(mask))
    }

    pub fn read_csv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_csv_str(&text)
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        write_atomic(path.as_ref(), self.to_csv_string().as_bytes())
    }
}

/// Known Rayleigh + Stokes + anti-Stokes content of a synthetic spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth {
    /// Rayleigh, Stokes, anti-Stokes (in that order for the three-line form).
    pub peaks: Vec<LorentzianPeak>,
    pub brillouin_shift_hz: f64,
    pub brillouin_fwhm_hz: f64,
    /// Constant offset added to every pixel.
    pub background: f64,
}

impl GroundTruth {
    /// Rayleigh line at 0 Hz flanked by symmetric Brillouin lines at `∓shift`.
    pub fn brillouin(
        rayleigh_amplitude: f64,
        rayleigh_fwhm_hz: f64,
        brillouin_amplitude: f64,
        shift_hz: f64,
        brillouin_fwhm_hz: f64,
    ) -> Self {
        GroundTruth {
            peaks: vec![
                LorentzianPeak::new(0.0, rayleigh_fwhm_hz, rayleigh_amplitude),
                LorentzianPeak::new(-shift_hz, brillouin_fwhm_hz, brillouin_amplitude),
                LorentzianPeak::new(shift_hz, brillouin_fwhm_hz, brillouin_amplitude),
            ],
            brillouin_shift_hz: shift_hz,
            brillouin_fwhm_hz,
            background: 0.0,
        }
    }

    /// Rayleigh 10⁴ counts, Brillouin 10³ counts at ±10 GHz, all 1 GHz wide.
    pub fn standard() -> Self {
        Self::brillouin(1e4, 1e9, 1e3, 10e9, 1e9)
    }

    /// Height of the Brillouin lines (mean of Stokes and anti-Stokes).
    pub fn brillouin_amplitude(&self) -> f64 {
        match self.peaks.as_slice() {
            [_, s, a, ..] => 0.5 * (s.amplitude + a.amplitude),
            [p] => p.amplitude,
            _ => 0.0,
        }
    }

    pub fn rayleigh_amplitude(&self) -> f64 {
        self.peaks.first().map_or(0.0, |p| p.amplitude)
    }

    /// Brillouin-to-Rayleigh amplitude ratio I±.
    pub fn relative_intensity(&self) -> f64 {
        self.brillouin_amplitude() / self.rayleigh_amplitude()
    }

    pub fn validate(&self) -> Result<()> {
        for p in &self.peaks {
            p.validate()?;
        }
        if let [r, s, a] = self.peaks.as_slice() {
            let left = r.center_hz - s.center_hz;
            let right = a.center_hz - r.center_hz;
            let scale = left.abs().max(right.abs()).max(f64::MIN_POSITIVE);
            if ((left - right) / scale).abs() > 1e-9 {
                return Err(Error::invalid(
                    "Stokes and anti-Stokes lines must be symmetric about the Rayleigh line",
                ));
            }
        }
        Ok(())
    }
}

/// Pixelation rule used by [`synthesize`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Sampling {
    #[default]
    CenterSample,
    /// Mean over `k` evenly spaced sub-samples across each pixel.
    SubpixelIntegrate(usize),
}

/// Pixelated sum of all peak profiles (plus background), passed through the
/// detector response.
pub fn synthesize(truth: &GroundTruth, detector: &DetectorModel, sampling: Sampling) -> Result<Spectrum> {
    detector.validate()?;
    truth.validate()?;
    let axis = detector.frequency_axis();
    let step = detector.frequency_step_hz();
    let (lo, hi) = (axis[0], axis[axis.len() - 1]);
    for p in &truth.peaks {
        if p.center_hz < lo || p.center_hz > hi {
            return Err(Error::PeakOutsideAxis {
                center_hz: p.center_hz,
                lo_hz: lo,
                hi_hz: hi,
            });
        }
    }
    let profile = |f: f64| -> f64 { truth.peaks.iter().map(|p| p.value(f)).sum::<f64>() };
    let raw: Vec<f64> = match sampling {
        Sampling::CenterSample => axis.iter().map(|&f| profile(f)).collect(),
        Sampling::SubpixelIntegrate(k) => {
            let k = k.max(1);
            axis.iter()
                .map(|&f| {
                    (0..k)
                        .map(|j| profile(f + step * ((j as f64 + 0.5) / k as f64 - 0.5)))
                        .sum::<f64>()
                        / k as f64
                })
                .collect()
        }
    };
    let raw: Vec<f64> = raw.into_iter().map(|v| v + truth.background).collect();
    let raw = Spectrum::new(axis, raw)?;
    apply_response(detector, &raw)
}

/// `R · intensities`; the axis and mask are carried over.
pub fn apply_response(detector: &DetectorModel, raw: &Spectrum) -> Result<Spectrum> {
    detector.response.check_dim(raw.len())?;
    if detector.response.is_identity() {
        return Ok(raw.clone());
    }
    raw.with_intensities(detector.response.apply(raw.intensities()))
}
