//! Maximum-entropy reconstruction.
//!
//! Maximises `Q(f) = S(f) − λ(χ²(f) − χ₀²)` over strictly positive `f` with
//! conjugate-direction ascent and a strong Wolfe line search.

mod line_search;
mod prior;

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::spectrum::{Response, Spectrum};

use line_search::{strong_wolfe, Outcome, Probe, WolfeParams};

pub use prior::build_prior;

/// Functional form of the entropy term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EntropyForm {
    /// `−Σ p log p` with `p = f/Σf`.
    PaperShannon,
    /// `Σ (f − m − f log(f/m))` against a default model `m`.
    #[default]
    SkillingGull,
}

impl EntropyForm {
    pub fn as_str(&self) -> &'static str {
        match self {
            EntropyForm::PaperShannon => "paper-shannon",
            EntropyForm::SkillingGull => "skilling-gull",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "paper-shannon" | "shannon" => Some(EntropyForm::PaperShannon),
            "skilling-gull" | "skilling" => Some(EntropyForm::SkillingGull),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MerConfig {
    pub lambda: f64,
    pub chi0_sq: f64,
    pub termination_threshold: f64,
    pub max_iterations: usize,
    pub num_conjugate_dirs: usize,
    pub positivity_floor: f64,
    /// Default model `m`; a flat model at the mean data level when absent.
    pub prior_model: Option<Vec<f64>>,
    pub wolfe_c1: f64,
    pub wolfe_c2: f64,
    pub entropy_form: EntropyForm,
}

impl Default for MerConfig {
    fn default() -> Self {
        MerConfig {
            lambda: 1e3,
            chi0_sq: 1.0,
            termination_threshold: 0.01,
            max_iterations: 2000,
            num_conjugate_dirs: 2,
            positivity_floor: 1e-12,
            prior_model: None,
            wolfe_c1: 1e-4,
            wolfe_c2: 0.9,
            entropy_form: EntropyForm::SkillingGull,
        }
    }
}

impl MerConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::invalid(format!("lambda must be positive, got {}", self.lambda)));
        }
        if !(self.chi0_sq > 0.0) {
            return Err(Error::invalid("chi0_sq must be positive"));
        }
        if !(self.termination_threshold > 0.0) {
            return Err(Error::invalid("termination_threshold must be positive"));
        }
        if !(0.0 < self.wolfe_c1 && self.wolfe_c1 < self.wolfe_c2 && self.wolfe_c2 < 1.0) {
            return Err(Error::invalid("Wolfe constants must satisfy 0 < c1 < c2 < 1"));
        }
        if !(self.positivity_floor > 0.0) {
            return Err(Error::invalid("positivity_floor must be positive"));
        }
        if self.num_conjugate_dirs == 0 {
            return Err(Error::invalid("num_conjugate_dirs must be at least 1"));
        }
        if let Some(m) = &self.prior_model {
            if m.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
                return Err(Error::invalid("prior model must be strictly positive"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MerStatus {
    Converged,
    MaxIterations,
    InfeasibleData,
}

impl MerStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            MerStatus::Converged => "converged",
            MerStatus::MaxIterations => "max-iterations",
            MerStatus::InfeasibleData => "infeasible-data",
        }
    }
}

/// One row of the iteration trace. `mu` is the step that produced this
/// iterate (0 for the starting point).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub iter: usize,
    pub q: f64,
    pub s: f64,
    pub chi_sq: f64,
    pub termination_metric: f64,
    pub mu: f64,
}

#[derive(Debug, Clone)]
pub struct MerResult {
    pub reconstruction: Spectrum,
    pub iterations: usize,
    pub final_chi_sq: f64,
    pub final_entropy: f64,
    pub final_termination_metric: f64,
    pub status: MerStatus,
    pub lambda: f64,
    pub trace: Vec<TraceRow>,
}

impl MerResult {
    pub fn trace_csv(&self) -> String {
        let mut s = String::from("iter,Q,S,chi_sq,termination_metric,mu\n");
        for r in &self.trace {
            let _ = writeln!(s, "{},{},{},{},{},{}", r.iter, r.q, r.s, r.chi_sq, r.termination_metric, r.mu);
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Feasibility {
    pub feasible: bool,
    /// χ² at the unconstrained entropy maximum.
    pub chi_sq_at_max: f64,
}

/// Per-pixel σ vector with the same value everywhere.
pub fn uniform_sigma(n: usize, sigma: f64) -> Vec<f64> {
    vec![sigma; n]
}

/// Mean of the unmasked data, floored to stay positive.
fn flat_level(d: &Spectrum, floor: f64) -> f64 {
    let (sum, n) = d
        .intensities()
        .iter()
        .enumerate()
        .filter(|(i, _)| !d.is_masked(*i))
        .fold((0.0, 0usize), |(s, n), (_, v)| (s + v, n + 1));
    if n == 0 {
        return floor.max(1.0);
    }
    (sum / n as f64).max(floor)
}

/// Default model used by the Skilling–Gull entropy: the configured prior or
/// a flat level at the mean data value.
pub fn default_model(d: &Spectrum, config: &MerConfig) -> Vec<f64> {
    match &config.prior_model {
        Some(m) => m.clone(),
        None => vec![flat_level(d, config.positivity_floor); d.len()],
    }
}

fn check_floor(f: &[f64], floor: f64) -> Result<()> {
    if let Some(v) = f.iter().find(|v| !(**v >= floor) || !v.is_finite()) {
        return Err(Error::invalid(format!("intensity {v} is below the positivity floor {floor}")));
    }
    Ok(())
}

/// Entropy of `f`. `model` is only used by the Skilling–Gull form.
pub fn entropy(f: &[f64], model: &[f64], config: &MerConfig) -> Result<f64> {
    check_floor(f, config.positivity_floor)?;
    if config.entropy_form == EntropyForm::SkillingGull && model.len() != f.len() {
        return Err(Error::DimensionMismatch {
            expected: f.len(),
            actual: model.len(),
        });
    }
    Ok(entropy_unchecked(f, model, config.entropy_form))
}

fn entropy_unchecked(f: &[f64], model: &[f64], form: EntropyForm) -> f64 {
    match form {
        EntropyForm::PaperShannon => {
            let total: f64 = f.iter().sum();
            -f.iter()
                .map(|&v| {
                    let p = v / total;
                    if p > 0.0 {
                        p * p.ln()
                    } else {
                        0.0
                    }
                })
                .sum::<f64>()
        }
        EntropyForm::SkillingGull => f
            .iter()
            .zip(model)
            .map(|(&v, &m)| v - m - v * (v / m).ln())
            .sum(),
    }
}

fn entropy_gradient(f: &[f64], model: &[f64], form: EntropyForm) -> Vec<f64> {
    match form {
        EntropyForm::PaperShannon => {
            let total: f64 = f.iter().sum();
            let s = entropy_unchecked(f, model, form);
            f.iter().map(|&v| -((v / total).ln() + s) / total).collect()
        }
        EntropyForm::SkillingGull => f.iter().zip(model).map(|(&v, &m)| -(v / m).ln()).collect(),
    }
}

/// Data term shared by χ² and its gradient.
struct DataTerm<'a> {
    d: &'a [f64],
    inv_var: Vec<f64>,
    active: Vec<bool>,
    n_active: f64,
    response: &'a Response,
}

impl<'a> DataTerm<'a> {
    fn new(d: &'a Spectrum, response: &'a Response, sigma: &[f64]) -> Result<Self> {
        let n = d.len();
        if sigma.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: sigma.len(),
            });
        }
        response.check_dim(n)?;
        if let Some(s) = sigma.iter().find(|s| !(**s > 0.0) || !s.is_finite()) {
            return Err(Error::invalid(format!("noise σ must be positive, got {s}")));
        }
        let active: Vec<bool> = (0..n).map(|i| !d.is_masked(i)).collect();
        let n_active = active.iter().filter(|a| **a).count();
        if n_active == 0 {
            return Err(Error::AllMasked);
        }
        Ok(DataTerm {
            d: d.intensities(),
            inv_var: sigma.iter().map(|s| 1.0 / (s * s)).collect(),
            active,
            n_active: n_active as f64,
            response,
        })
    }

    /// Weighted residual `diag(1/σ²)(R f − d)` on active pixels, zero on
    /// masked ones, plus χ².
    fn residual(&self, f: &[f64]) -> (Vec<f64>, f64) {
        let g = self.response.apply(f);
        let mut chi = 0.0;
        let w: Vec<f64> = (0..g.len())
            .map(|j| {
                if !self.active[j] {
                    return 0.0;
                }
                let r = g[j] - self.d[j];
                chi += r * r * self.inv_var[j];
                r * self.inv_var[j]
            })
            .collect();
        (w, chi / self.n_active)
    }

    /// Diagonal of the χ² Hessian, `(2/N) Σ_j R_ji² / σ_j²`.
    fn curvature_diag(&self) -> Vec<f64> {
        let scale = 2.0 / self.n_active;
        let w: Vec<f64> = (0..self.d.len())
            .map(|j| if self.active[j] { self.inv_var[j] } else { 0.0 })
            .collect();
        match self.response {
            Response::Identity => w.iter().map(|v| v * scale).collect(),
            Response::Matrix(m) => (0..m.ncols())
                .map(|i| scale * (0..m.nrows()).map(|j| m[(j, i)] * m[(j, i)] * w[j]).sum::<f64>())
                .collect(),
        }
    }

    fn chi_sq(&self, f: &[f64]) -> f64 {
        self.residual(f).1
    }

    fn chi_sq_and_gradient(&self, f: &[f64]) -> (f64, Vec<f64>) {
        let (w, chi) = self.residual(f);
        let scale = 2.0 / self.n_active;
        let grad = self.response.apply_transpose(&w).into_iter().map(|v| v * scale).collect();
        (chi, grad)
    }
}

/// `(1/N_active) Σ (R f − d)² / σ²` over unmasked pixels.
pub fn chi_square(f: &[f64], d: &Spectrum, response: &Response, sigma: &[f64]) -> Result<f64> {
    if f.len() != d.len() {
        return Err(Error::DimensionMismatch {
            expected: d.len(),
            actual: f.len(),
        });
    }
    Ok(DataTerm::new(d, response, sigma)?.chi_sq(f))
}

/// Analytic `(∇S, ∇χ²)`.
pub fn gradients(
    f: &[f64],
    d: &Spectrum,
    response: &Response,
    sigma: &[f64],
    config: &MerConfig,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if f.len() != d.len() {
        return Err(Error::DimensionMismatch {
            expected: d.len(),
            actual: f.len(),
        });
    }
    check_floor(f, config.positivity_floor)?;
    let data = DataTerm::new(d, response, sigma)?;
    let model = default_model(d, config);
    if model.len() != f.len() {
        return Err(Error::DimensionMismatch {
            expected: f.len(),
            actual: model.len(),
        });
    }
    let gs = entropy_gradient(f, &model, config.entropy_form);
    let (_, gc) = data.chi_sq_and_gradient(f);
    Ok((gs, gc))
}

/// `½ |a/|a| − b/|b||²`, treating a zero vector as having zero direction.
pub fn termination_metric(grad_s: &[f64], grad_chi: &[f64]) -> f64 {
    let na = norm(grad_s);
    let nb = norm(grad_chi);
    let ia = if na > 0.0 { 1.0 / na } else { 0.0 };
    let ib = if nb > 0.0 { 1.0 / nb } else { 0.0 };
    0.5 * grad_s
        .iter()
        .zip(grad_chi)
        .map(|(a, b)| (a * ia - b * ib).powi(2))
        .sum::<f64>()
}

fn norm(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Starting point and unconstrained maximiser of the entropy.
fn entropy_maximiser(d: &Spectrum, config: &MerConfig, model: &[f64]) -> Vec<f64> {
    match config.entropy_form {
        EntropyForm::SkillingGull => model.iter().map(|v| v.max(config.positivity_floor)).collect(),
        EntropyForm::PaperShannon => vec![flat_level(d, config.positivity_floor); d.len()],
    }
}

/// Checks whether the entropy maximum already satisfies the data
/// constraint, in which case the constrained problem is degenerate.
pub fn feasibility_check(d: &Spectrum, response: &Response, sigma: &[f64], config: &MerConfig) -> Result<Feasibility> {
    config.validate()?;
    let data = DataTerm::new(d, response, sigma)?;
    let model = default_model(d, config);
    let f0 = entropy_maximiser(d, config, &model);
    let chi = data.chi_sq(&f0);
    Ok(Feasibility {
        feasible: chi > config.chi0_sq,
        chi_sq_at_max: chi,
    })
}

struct Objective<'a> {
    data: DataTerm<'a>,
    model: Vec<f64>,
    form: EntropyForm,
    lambda: f64,
    chi0_sq: f64,
}

struct Eval {
    q: f64,
    s: f64,
    chi: f64,
    grad_s: Vec<f64>,
    grad_chi: Vec<f64>,
}

impl Eval {
    fn grad_q(&self, lambda: f64) -> Vec<f64> {
        self.grad_s.iter().zip(&self.grad_chi).map(|(s, c)| s - lambda * c).collect()
    }
}

impl Objective<'_> {
    fn eval(&self, f: &[f64]) -> Eval {
        let s = entropy_unchecked(f, &self.model, self.form);
        let (chi, grad_chi) = self.data.chi_sq_and_gradient(f);
        Eval {
            q: s - self.lambda * (chi - self.chi0_sq),
            s,
            chi,
            grad_s: entropy_gradient(f, &self.model, self.form),
            grad_chi,
        }
    }
}

/// Maximum-entropy reconstruction of `d` through `response`.
pub fn reconstruct(d: &Spectrum, response: &Response, sigma: &[f64], config: &MerConfig) -> Result<MerResult> {
    config.validate()?;
    let data = DataTerm::new(d, response, sigma)?;
    let model = default_model(d, config);
    if model.len() != d.len() {
        return Err(Error::DimensionMismatch {
            expected: d.len(),
            actual: model.len(),
        });
    }
    let floor = config.positivity_floor;
    let n = d.len();
    let mut f = entropy_maximiser(d, config, &model);
    let obj = Objective {
        data,
        model,
        form: config.entropy_form,
        lambda: config.lambda,
        chi0_sq: config.chi0_sq,
    };
    let mut cur = obj.eval(&f);
    let mut metric = termination_metric(&cur.grad_s, &cur.grad_chi);
    let mut trace = vec![TraceRow {
        iter: 0,
        q: cur.q,
        s: cur.s,
        chi_sq: cur.chi,
        termination_metric: metric,
        mu: 0.0,
    }];

    let finish = |f: Vec<f64>, cur: &Eval, metric: f64, iterations: usize, status: MerStatus, trace: Vec<TraceRow>| {
        Ok(MerResult {
            reconstruction: d.with_intensities(f)?,
            iterations,
            final_chi_sq: cur.chi,
            final_entropy: cur.s,
            final_termination_metric: metric,
            status,
            lambda: config.lambda,
            trace,
        })
    };

    if cur.chi <= config.chi0_sq {
        return finish(f, &cur, metric, 0, MerStatus::InfeasibleData, trace);
    }

    let wolfe = WolfeParams {
        c1: config.wolfe_c1,
        c2: config.wolfe_c2,
        max_evals: 40,
    };
    let r = config.num_conjugate_dirs;
    let mut g = cur.grad_q(config.lambda);
    let data_curv: Vec<f64> = obj.data.curvature_diag().into_iter().map(|c| c * config.lambda).collect();
    // Diagonal preconditioner from the Hessian of −Q at the current iterate.
    let precondition = |g: &[f64], f: &[f64]| -> Vec<f64> {
        g.iter().zip(f).zip(&data_curv).map(|((gi, fi), ci)| gi / (1.0 / fi + ci)).collect()
    };
    let mut z = precondition(&g, &f);
    let mut prev_zg = 0.0;
    let mut stalled = 0usize;
    // Previous directions and the gradient changes along them, newest last.
    let mut dirs: Vec<Vec<f64>> = Vec::with_capacity(r);
    let mut changes: Vec<Vec<f64>> = Vec::with_capacity(r);
    let mut since_restart = 0usize;
    let mut prev_step: Option<(f64, f64)> = None;

    for iter in 1..=config.max_iterations {
        let bound = active_bound(&f, floor);
        if is_converged(&cur, &g, &f, bound, metric, config) {
            return finish(f, &cur, metric, iter - 1, MerStatus::Converged, trace);
        }

        let mut p = if dirs.is_empty() || since_restart >= n {
            dirs.clear();
            changes.clear();
            since_restart = 0;
            z.clone()
        } else {
            conjugate_direction(&z, &g, &dirs, &changes, prev_zg)
        };
        project_at_floor(&mut p, &f, bound);
        let mut slope = dot(&g, &p);
        if !(slope > 0.0) {
            dirs.clear();
            changes.clear();
            since_restart = 0;
            p = z.clone();
            project_at_floor(&mut p, &f, bound);
            slope = dot(&g, &p);
            if !(slope > 0.0) {
                break;
            }
        }

        let max_step = step_to_floor(&f, &p, floor);
        let first = match prev_step {
            Some((mu, prev_slope)) if mu > 0.0 => mu * prev_slope / slope,
            _ => {
                let pmax = p.iter().fold(0.0f64, |a, v| a.max(v.abs()));
                let fmean = f.iter().sum::<f64>() / n as f64;
                0.1 * fmean.max(floor) / pmax
            }
        };
        let first = if first.is_finite() && first > 0.0 { first } else { 1.0 };

        let mut trial = vec![0.0; n];
        let outcome = strong_wolfe(
            |mu| {
                for ((t, fi), pi) in trial.iter_mut().zip(&f).zip(&p) {
                    *t = fi + mu * pi;
                }
                if trial.iter().any(|v| !(*v > 0.0)) {
                    return (f64::INFINITY, f64::NAN);
                }
                let e = obj.eval(&trial);
                (-e.q, -dot(&e.grad_q(obj.lambda), &p))
            },
            Probe {
                step: 0.0,
                value: -cur.q,
                slope: -slope,
            },
            first,
            max_step,
            wolfe,
        );
        let mu = match outcome {
            Outcome::Wolfe(pr) | Outcome::SufficientDecrease(pr) => pr.step,
            Outcome::Failed => {
                if since_restart == 0 {
                    // Steepest ascent made no progress: numerically stationary.
                    break;
                }
                dirs.clear();
                changes.clear();
                since_restart = 0;
                prev_step = None;
                continue;
            }
        };

        for (fi, pi) in f.iter_mut().zip(&p) {
            *fi = (*fi + mu * pi).max(floor);
        }
        let next = obj.eval(&f);
        let g_next = next.grad_q(config.lambda);
        let y: Vec<f64> = g_next.iter().zip(&g).map(|(a, b)| a - b).collect();
        dirs.push(p);
        changes.push(y);
        if dirs.len() > r {
            dirs.remove(0);
            changes.remove(0);
        }
        since_restart += 1;
        prev_step = Some((mu, slope));
        // Steps that no longer move Q mean the iterate is stuck at roundoff.
        if next.q - cur.q <= 1e-15 * cur.q.abs() {
            stalled += 1;
        } else {
            stalled = 0;
        }
        prev_zg = dot(&z, &g);
        g = g_next;
        z = precondition(&g, &f);
        cur = next;
        metric = termination_metric(&cur.grad_s, &cur.grad_chi);
        trace.push(TraceRow {
            iter,
            q: cur.q,
            s: cur.s,
            chi_sq: cur.chi,
            termination_metric: metric,
            mu,
        });
        if stalled >= 5 {
            break;
        }
    }

    let iterations = trace.len() - 1;
    let status = if is_converged(&cur, &g, &f, active_bound(&f, floor), metric, config) {
        MerStatus::Converged
    } else {
        MerStatus::MaxIterations
    };
    finish(f, &cur, metric, iterations, status, trace)
}

/// The alignment metric alone is satisfied anywhere on the segment between
/// the default model and the data, so stationarity of `Q` is also required:
/// `|∇Q| ≤ threshold · (|∇S| + λ|∇χ²|)`, with `∇Q` projected onto the
/// feasible directions at pixels sitting on the floor.
fn is_converged(cur: &Eval, grad_q: &[f64], f: &[f64], bound: f64, metric: f64, config: &MerConfig) -> bool {
    let mut projected = grad_q.to_vec();
    project_at_floor(&mut projected, f, bound);
    let scale = norm(&cur.grad_s) + config.lambda * norm(&cur.grad_chi);
    metric < config.termination_threshold && norm(&projected) <= config.termination_threshold * scale
}

/// Pixels at or below this level count as resting on the positivity floor.
fn active_bound(f: &[f64], floor: f64) -> f64 {
    let mean = f.iter().sum::<f64>() / f.len() as f64;
    floor.max(1e-9 * mean)
}

/// Ascent direction conjugate to the stored directions, built from the
/// preconditioned gradient `z`: a Polak–Ribière+ coefficient on the newest
/// direction and Hestenes–Stiefel-style coefficients on the older ones, all
/// clipped at zero. `prev_zg` is `z·g` at the previous iterate.
fn conjugate_direction(z: &[f64], g: &[f64], dirs: &[Vec<f64>], changes: &[Vec<f64>], prev_zg: f64) -> Vec<f64> {
    debug_assert_eq!(z.len(), g.len());
    let mut p = z.to_vec();
    let newest = dirs.len() - 1;
    for (j, (dj, yj)) in dirs.iter().zip(changes).enumerate() {
        let beta = if j == newest {
            if prev_zg > 0.0 {
                dot(z, yj) / prev_zg
            } else {
                0.0
            }
        } else {
            let denom = dot(dj, yj);
            if denom != 0.0 {
                -dot(z, yj) / denom
            } else {
                0.0
            }
        };
        let beta = beta.max(0.0);
        if beta > 0.0 && beta.is_finite() {
            for (pi, di) in p.iter_mut().zip(dj) {
                *pi += beta * di;
            }
        }
    }
    p
}

/// Zeroes components that would push a pixel already at the bound lower.
fn project_at_floor(p: &mut [f64], f: &[f64], bound: f64) {
    for (pi, fi) in p.iter_mut().zip(f) {
        if *fi <= bound && *pi < 0.0 {
            *pi = 0.0;
        }
    }
}

/// Largest step that moves every decreasing component at most 90% of the
/// way to the floor.
fn step_to_floor(f: &[f64], p: &[f64], floor: f64) -> f64 {
    f.iter()
        .zip(p)
        .filter(|(_, pi)| **pi < 0.0)
        .map(|(fi, pi)| 0.9 * (fi - floor) / -pi)
        .fold(f64::INFINITY, f64::min)
}

/// Runs [`reconstruct`] while bisecting `ln λ` inside `[lo, hi]` until the
/// final χ² matches χ₀² to `rel_tol`.
pub fn reconstruct_with_lambda_search(
    d: &Spectrum,
    response: &Response,
    sigma: &[f64],
    config: &MerConfig,
    lo: f64,
    hi: f64,
    rel_tol: f64,
) -> Result<MerResult> {
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::invalid(format!("invalid λ bracket [{lo}, {hi}]")));
    }
    let run = |lambda: f64| {
        let mut c = config.clone();
        c.lambda = lambda;
        reconstruct(d, response, sigma, &c)
    };
    let (mut a, mut b) = (lo.ln(), hi.ln());
    let at_lo = run(lo)?;
    if at_lo.status == MerStatus::InfeasibleData || at_lo.final_chi_sq <= config.chi0_sq {
        return Ok(at_lo);
    }
    let at_hi = run(hi)?;
    if at_hi.final_chi_sq >= config.chi0_sq {
        return Ok(at_hi);
    }
    // χ² decreases as λ grows.
    let mut best = at_hi;
    for _ in 0..60 {
        let mid = 0.5 * (a + b);
        let res = run(mid.exp())?;
        let err = (res.final_chi_sq - config.chi0_sq) / config.chi0_sq;
        let done = err.abs() <= rel_tol;
        if res.final_chi_sq > config.chi0_sq {
            a = mid;
        } else {
            b = mid;
        }
        if (res.final_chi_sq - config.chi0_sq).abs() < (best.final_chi_sq - config.chi0_sq).abs() {
            best = res;
        }
        if done || b - a < 1e-9 {
            break;
        }
    }
    Ok(best)
}

/// Piecewise log–log interpolation of λ against SNR, clamped at the ends.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaSchedule {
    points: Vec<(f64, f64)>,
}

impl LambdaSchedule {
    pub fn new(mut points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::invalid("λ schedule needs at least one point"));
        }
        if points.iter().any(|(s, l)| !(*s > 0.0) || !(*l > 0.0)) {
            return Err(Error::invalid("λ schedule entries must be positive"));
        }
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(LambdaSchedule { points })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn lambda_for(&self, snr: f64) -> f64 {
        let p = &self.points;
        if snr <= p[0].0 {
            return p[0].1;
        }
        if snr >= p[p.len() - 1].0 {
            return p[p.len() - 1].1;
        }
        let k = p.iter().position(|(s, _)| *s >= snr).expect("inside range");
        let (s0, l0) = p[k - 1];
        let (s1, l1) = p[k];
        let t = (snr.ln() - s0.ln()) / (s1.ln() - s0.ln());
        (l0.ln() + t * (l1.ln() - l0.ln())).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn spectrum(values: &[f64]) -> Spectrum {
        let f = (0..values.len()).map(|i| i as f64).collect();
        Spectrum::new(f, values.to_vec()).unwrap()
    }

    fn shannon() -> MerConfig {
        MerConfig {
            entropy_form: EntropyForm::PaperShannon,
            ..MerConfig::default()
        }
    }

    #[test]
    fn shannon_entropy_limits() {
        let c = shannon();
        let uniform = vec![3.0; 120];
        assert_relative_eq!(entropy(&uniform, &[], &c).unwrap(), 120f64.ln(), max_relative = 1e-14);
        let mut spike = vec![1e-12; 120];
        spike[5] = 1.0;
        assert!(entropy(&spike, &[], &c).unwrap() < 1e-8);
    }

    #[test]
    fn skilling_maximum_at_model() {
        let c = MerConfig::default();
        let m = vec![1.0, 2.0, 3.0, 4.0];
        assert_eq!(entropy(&m, &m, &c).unwrap(), 0.0);
        let g = entropy_gradient(&m, &m, EntropyForm::SkillingGull);
        assert!(g.iter().all(|v| *v == 0.0));
        let nearby = [1.1, 1.9, 3.0, 4.2];
        assert!(entropy(&nearby, &m, &c).unwrap() < 0.0);
    }

    #[test]
    fn entropy_rejects_below_floor() {
        assert!(entropy(&[1.0, 0.0], &[1.0, 1.0], &MerConfig::default()).is_err());
    }

    #[test]
    fn chi_square_hand_values() {
        let d = spectrum(&[1.0, 2.0, 3.0, 4.0]);
        let s = uniform_sigma(4, 1.0);
        let r = Response::Identity;
        assert_eq!(chi_square(&[1.0, 2.0, 3.0, 6.0], &d, &r, &s).unwrap(), 1.0);
        assert_eq!(chi_square(&[1.0, 2.0, 3.0, 4.0], &d, &r, &s).unwrap(), 0.0);
        let s2 = uniform_sigma(4, 0.5);
        assert_relative_eq!(chi_square(&[1.5, 2.5, 3.5, 4.5], &d, &r, &s2).unwrap(), 1.0);
    }

    #[test]
    fn masked_pixels_leave_chi_square() {
        let mut d = spectrum(&[1.0, 2.0, 3.0, 4.0]);
        d.set_mask(Some(vec![false, false, false, true])).unwrap();
        let s = uniform_sigma(4, 1.0);
        assert_eq!(chi_square(&[1.0, 2.0, 3.0, 100.0], &d, &Response::Identity, &s).unwrap(), 0.0);
        let (_, gc) = gradients(&[1.0, 2.0, 4.0, 100.0], &d, &Response::Identity, &s, &MerConfig::default()).unwrap();
        assert_eq!(gc[3], 0.0);
        assert_relative_eq!(gc[2], 2.0 / 3.0);
        d.set_mask(Some(vec![true; 4])).unwrap();
        assert!(matches!(chi_square(&[1.0; 4], &d, &Response::Identity, &s), Err(Error::AllMasked)));
    }

    #[test]
    fn metric_is_zero_for_parallel_gradients() {
        assert_eq!(termination_metric(&[1.0, 2.0], &[2.0, 4.0]), 0.0);
        assert_relative_eq!(termination_metric(&[1.0, 0.0], &[-1.0, 0.0]), 2.0);
    }

    #[test]
    fn noiseless_identity_reproduces_data() {
        let values: Vec<f64> = (0..40).map(|i| 10.0 + 100.0 * (-((i as f64 - 20.0) / 3.0).powi(2)).exp()).collect();
        let d = spectrum(&values);
        let sigma = uniform_sigma(40, 1e-3);
        let config = MerConfig {
            lambda: 1e3,
            ..MerConfig::default()
        };
        let res = reconstruct(&d, &Response::Identity, &sigma, &config).unwrap();
        assert_eq!(res.status, MerStatus::Converged, "{:?}", res.final_termination_metric);
        let rms = (res
            .reconstruction
            .intensities()
            .iter()
            .zip(&values)
            .map(|(a, b)| ((a - b) / b).powi(2))
            .sum::<f64>()
            / 40.0)
            .sqrt();
        assert!(rms < 1e-3, "rms {rms}");
    }

    #[test]
    fn ascent_is_monotone_and_positive() {
        let values: Vec<f64> = (0..32).map(|i| 5.0 + ((i * 7919) % 13) as f64).collect();
        let d = spectrum(&values);
        let res = reconstruct(&d, &Response::box_blur(32, 3), &uniform_sigma(32, 0.5), &MerConfig::default()).unwrap();
        for w in res.trace.windows(2) {
            assert!(w[1].q >= w[0].q, "{} < {}", w[1].q, w[0].q);
        }
        assert!(res.reconstruction.intensities().iter().all(|v| *v >= 1e-12));
    }

    #[test]
    fn uniform_data_is_infeasible() {
        let values: Vec<f64> = (0..64).map(|i| 100.0 + if i % 2 == 0 { 0.5 } else { -0.5 }).collect();
        let d = spectrum(&values);
        let s = uniform_sigma(64, 1.0);
        for form in [EntropyForm::PaperShannon, EntropyForm::SkillingGull] {
            let c = MerConfig {
                entropy_form: form,
                ..MerConfig::default()
            };
            assert!(!feasibility_check(&d, &Response::Identity, &s, &c).unwrap().feasible);
            let res = reconstruct(&d, &Response::Identity, &s, &c).unwrap();
            assert_eq!(res.status, MerStatus::InfeasibleData);
            assert_eq!(res.iterations, 0);
        }
    }

    #[test]
    fn trace_csv_header() {
        let d = spectrum(&[1.0, 5.0, 1.0, 1.0]);
        let res = reconstruct(&d, &Response::Identity, &uniform_sigma(4, 0.1), &MerConfig::default()).unwrap();
        let csv = res.trace_csv();
        assert!(csv.starts_with("iter,Q,S,chi_sq,termination_metric,mu\n"));
        assert_eq!(csv.lines().count(), res.trace.len() + 1);
    }

    #[test]
    fn schedule_interpolates_in_log_space() {
        let s = LambdaSchedule::new(vec![(10.0, 100.0), (1.0, 1.0)]).unwrap();
        assert_eq!(s.lambda_for(0.5), 1.0);
        assert_eq!(s.lambda_for(20.0), 100.0);
        assert_relative_eq!(s.lambda_for(10f64.sqrt()), 10.0, max_relative = 1e-12);
    }

    #[test]
    fn invalid_config_rejected() {
        let bad = MerConfig {
            wolfe_c1: 0.95,
            ..MerConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = MerConfig {
            lambda: 0.0,
            ..MerConfig::default()
        };
        assert!(bad.validate().is_err());
    }
}
