//! Bracketing + zoom line search for the strong Wolfe conditions, written
//! for minimisation of `ψ(μ)` (the solver passes `ψ = −Q` along the
//! search direction).

/// Value and slope of the one-dimensional objective at a step.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Probe {
    pub step: f64,
    pub value: f64,
    pub slope: f64,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct WolfeParams {
    pub c1: f64,
    pub c2: f64,
    pub max_evals: usize,
}

#[derive(Debug, Clone, Copy)]
pub(crate) enum Outcome {
    /// Both Wolfe conditions hold.
    Wolfe(Probe),
    /// Sufficient decrease holds at the step cap or when the evaluation
    /// budget ran out.
    SufficientDecrease(Probe),
    Failed,
}

/// `eval(μ)` returns `(ψ(μ), ψ'(μ))`. `start` is the probe at `μ = 0`
/// (slope must be negative), `first` the initial trial step and `max_step`
/// an upper bound on `μ`.
pub(crate) fn strong_wolfe<F>(mut eval: F, start: Probe, first: f64, max_step: f64, p: WolfeParams) -> Outcome
where
    F: FnMut(f64) -> (f64, f64),
{
    debug_assert!(start.slope < 0.0);
    let mut evals = 0usize;
    let mut probe = |mu: f64, evals: &mut usize| {
        *evals += 1;
        let (value, slope) = eval(mu);
        Probe { step: mu, value, slope }
    };
    let armijo = |q: &Probe| q.value <= start.value + p.c1 * q.step * start.slope && q.value.is_finite();
    let curvature = |q: &Probe| q.slope.abs() <= -p.c2 * start.slope;

    let mut best: Option<Probe> = None;
    let keep_best = |q: Probe, best: &mut Option<Probe>| {
        if armijo(&q) && best.is_none_or(|b| q.value < b.value) {
            *best = Some(q);
        }
    };

    let mut prev = start;
    let mut mu = first.min(max_step);
    let mut iteration = 0;
    loop {
        if evals >= p.max_evals {
            return best.map_or(Outcome::Failed, Outcome::SufficientDecrease);
        }
        let cur = probe(mu, &mut evals);
        keep_best(cur, &mut best);
        if !armijo(&cur) || (iteration > 0 && cur.value >= prev.value) {
            return zoom(&mut |m, e: &mut usize| probe(m, e), &mut evals, prev, cur, start, p, &mut best);
        }
        if curvature(&cur) {
            return Outcome::Wolfe(cur);
        }
        if cur.slope >= 0.0 {
            return zoom(&mut |m, e: &mut usize| probe(m, e), &mut evals, cur, prev, start, p, &mut best);
        }
        if mu >= max_step {
            return Outcome::SufficientDecrease(cur);
        }
        prev = cur;
        mu = (2.0 * mu).min(max_step);
        iteration += 1;
    }
}

/// Minimiser of the cubic through two probes, or `None` when it does not
/// exist.
fn cubic_min(a: &Probe, b: &Probe) -> Option<f64> {
    let d1 = a.slope + b.slope - 3.0 * (a.value - b.value) / (a.step - b.step);
    let disc = d1 * d1 - a.slope * b.slope;
    if disc < 0.0 {
        return None;
    }
    let d2 = disc.sqrt().copysign(b.step - a.step);
    let t = b.step - (b.step - a.step) * ((b.slope + d2 - d1) / (b.slope - a.slope + 2.0 * d2));
    t.is_finite().then_some(t)
}

#[allow(clippy::too_many_arguments)]
fn zoom<P>(
    probe: &mut P,
    evals: &mut usize,
    mut lo: Probe,
    mut hi: Probe,
    start: Probe,
    p: WolfeParams,
    best: &mut Option<Probe>,
) -> Outcome
where
    P: FnMut(f64, &mut usize) -> Probe,
{
    let armijo = |q: &Probe| q.value <= start.value + p.c1 * q.step * start.slope && q.value.is_finite();
    while *evals < p.max_evals {
        let (a, b) = if lo.step < hi.step { (lo.step, hi.step) } else { (hi.step, lo.step) };
        let width = b - a;
        if width <= f64::EPSILON * b.abs().max(1e-300) {
            break;
        }
        // Cubic interpolation, kept away from the interval ends.
        let mut mu = if hi.value.is_finite() && hi.slope.is_finite() {
            cubic_min(&lo, &hi).unwrap_or(0.5 * (a + b))
        } else {
            0.5 * (a + b)
        };
        if !(mu > a + 0.1 * width && mu < b - 0.1 * width) {
            mu = 0.5 * (a + b);
        }
        let cur = probe(mu, evals);
        if armijo(&cur) && best.is_none_or(|b| cur.value < b.value) {
            *best = Some(cur);
        }
        if !armijo(&cur) || cur.value >= lo.value {
            hi = cur;
        } else {
            if cur.slope.abs() <= -p.c2 * start.slope {
                return Outcome::Wolfe(cur);
            }
            if cur.slope * (hi.step - lo.step) >= 0.0 {
                hi = lo;
            }
            lo = cur;
        }
    }
    best.map_or(Outcome::Failed, Outcome::SufficientDecrease)
}
