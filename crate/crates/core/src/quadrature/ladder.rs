//! Classification of a ladder of partial results as convergent or divergent.
//!
//! Each candidate family is `a + b g_1(t) + c g_2(t)` with a single nonlinear
//! parameter; the linear part is solved by least squares and the parameter by
//! a grid scan plus golden-section refinement. Families are grouped into three
//! models (limit, power growth, logarithmic growth) and a model is accepted
//! only when its residual beats every competitor by the configured factor.

use serde::Serialize;

use crate::num::golden_max;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Const,
    Power,
    Log,
}

impl Model {
    pub fn as_str(&self) -> &'static str {
        match self {
            Model::Const => "const",
            Model::Power => "power",
            Model::Log => "log",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Growth {
    /// Growth like `2^(gamma t)`, i.e. `(1-r)^(-gamma)` on a radius ladder.
    Power { gamma: f64 },
    /// Polylogarithmic growth in `1/(1-r)`.
    Log,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Classification {
    Converges { estimate: f64 },
    Diverges(Growth),
    Inconclusive,
}

impl Classification {
    pub fn as_str(&self) -> &'static str {
        match self {
            Classification::Converges { .. } => "converges",
            Classification::Diverges(_) => "diverges",
            Classification::Inconclusive => "inconclusive",
        }
    }

    pub fn converges(&self) -> bool {
        matches!(self, Classification::Converges { .. })
    }

    pub fn diverges(&self) -> bool {
        matches!(self, Classification::Diverges(_))
    }

    pub fn estimate(&self) -> Option<f64> {
        match self {
            Classification::Converges { estimate } => Some(*estimate),
            _ => None,
        }
    }
}

/// Regression diagnostics behind a classification.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FitDiagnostics {
    pub model: Option<Model>,
    pub family: &'static str,
    pub parameter: f64,
    /// RMS residual of the winning fit, relative to the range of the window.
    pub residual: f64,
    /// The same for the best competing model.
    pub runner_up: f64,
}

impl FitDiagnostics {
    fn empty() -> Self {
        FitDiagnostics {
            model: None,
            family: "none",
            parameter: f64::NAN,
            residual: f64::NAN,
            runner_up: f64::NAN,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LadderOptions {
    pub tolerance: f64,
    pub residual_factor: f64,
    /// Smallest power-growth exponent accepted as divergence.
    pub gamma_min: f64,
    /// Exponents `e` of correction terms `2^(-e t)` known to be present, such
    /// as the contribution of a radial weight. Added to every family.
    pub known_rates: Vec<f64>,
}

impl Default for LadderOptions {
    fn default() -> Self {
        LadderOptions {
            tolerance: 1e-3,
            residual_factor: 10.0,
            gamma_min: 0.01,
            known_rates: Vec::new(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Family {
    Geometric,
    GeometricShift,
    Algebraic,
    Power,
    PowerShift,
    Log,
    LogPower,
}

const FAMILIES: [Family; 7] = [
    Family::Geometric,
    Family::GeometricShift,
    Family::Algebraic,
    Family::Power,
    Family::PowerShift,
    Family::Log,
    Family::LogPower,
];

impl Family {
    fn model(self) -> Model {
        match self {
            Family::Geometric | Family::GeometricShift | Family::Algebraic => Model::Const,
            Family::Power | Family::PowerShift => Model::Power,
            Family::Log | Family::LogPower => Model::Log,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Family::Geometric => "a+b*2^(-lt)+c*2^(-2lt)",
            Family::GeometricShift => "a+b*2^(-lt)+c*2^(-(l+1)t)",
            Family::Algebraic => "a+b*t^(-d)",
            Family::Power => "a+b*2^(gt)/t",
            Family::PowerShift => "a+b*2^(gt)+c*2^((g-1)t)",
            Family::Log => "a+b*ln(t+c)",
            Family::LogPower => "a+b*t^k",
        }
    }

    fn range(self, gamma_min: f64) -> (f64, f64) {
        match self {
            Family::Geometric | Family::GeometricShift => (0.02, 6.0),
            Family::Algebraic => (0.2, 4.0),
            Family::Power | Family::PowerShift => (gamma_min, 6.0),
            Family::Log => (0.05, 8.0),
            Family::LogPower => (0.2, 3.0),
        }
    }

    /// The two non-constant basis functions; `t0`/`t1` are the window ends,
    /// used to keep exponentials inside the floating-point range.
    fn basis(self, theta: f64, t: f64, t0: f64, t1: f64) -> [f64; 2] {
        match self {
            Family::Geometric => {
                let g = (-theta * (t - t0)).exp2();
                [g, g * g]
            }
            Family::GeometricShift => {
                let g = (-theta * (t - t0)).exp2();
                [g, g * (t0 - t).exp2()]
            }
            Family::Algebraic => {
                let g = t.powf(-theta);
                [g, g / t]
            }
            Family::Power => {
                let g = (theta * (t - t1)).exp2();
                [g, g / t]
            }
            Family::PowerShift => {
                let g = (theta * (t - t1)).exp2();
                [g, g * (t1 - t).exp2()]
            }
            Family::Log => [(t + theta).ln(), 1.0 / (t + theta)],
            Family::LogPower => [t.powf(theta), 1.0 / t],
        }
    }
}

struct Fit {
    theta: f64,
    coeffs: Vec<f64>,
    rss: f64,
}

/// Least squares for `y ~ X c` by modified Gram–Schmidt with
/// reorthogonalization. Columns that are numerically dependent on earlier
/// ones get coefficient zero.
fn least_squares(cols: &[Vec<f64>], y: &[f64]) -> Option<(Vec<f64>, f64)> {
    let n = y.len();
    let m = cols.len();
    let mut q: Vec<Vec<f64>> = Vec::new();
    let mut kept: Vec<usize> = Vec::new();
    let mut r = vec![vec![0.0; m]; m];
    let mut scales = vec![1.0; m];
    for (j, col) in cols.iter().enumerate() {
        if col.iter().any(|v| !v.is_finite()) {
            return None;
        }
        let s = col.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if s == 0.0 {
            continue;
        }
        scales[j] = s;
        let mut v: Vec<f64> = col.iter().map(|x| x / s).collect();
        let norm0 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let mut coef = vec![0.0; kept.len()];
        for _ in 0..2 {
            for (i, qi) in q.iter().enumerate() {
                let d: f64 = qi.iter().zip(&v).map(|(a, b)| a * b).sum();
                coef[i] += d;
                for (x, qv) in v.iter_mut().zip(qi) {
                    *x -= d * qv;
                }
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm <= 1e-10 * norm0 {
            continue;
        }
        let col_idx = kept.len();
        for (i, &c) in coef.iter().enumerate() {
            r[i][col_idx] = c;
        }
        r[col_idx][col_idx] = norm;
        q.push(v.iter().map(|x| x / norm).collect());
        kept.push(j);
    }
    let k = kept.len();
    let mut qty = vec![0.0; k];
    let mut resid = y.to_vec();
    for i in 0..k {
        let d: f64 = q[i].iter().zip(&resid).map(|(a, b)| a * b).sum();
        qty[i] = d;
        for (x, qv) in resid.iter_mut().zip(&q[i]) {
            *x -= d * qv;
        }
    }
    let mut sol = vec![0.0; k];
    for i in (0..k).rev() {
        let mut s = qty[i];
        for j in i + 1..k {
            s -= r[i][j] * sol[j];
        }
        sol[i] = s / r[i][i];
    }
    let mut coeffs = vec![0.0; m];
    for (i, &j) in kept.iter().enumerate() {
        coeffs[j] = sol[i] / scales[j];
    }
    // recompute the residual from the coefficients for an honest figure
    let rss = (0..n)
        .map(|i| {
            let fit: f64 = (0..m).map(|j| coeffs[j] * cols[j][i]).sum();
            (y[i] - fit).powi(2)
        })
        .sum();
    Some((coeffs, rss))
}

fn columns(family: Family, theta: f64, t: &[f64], known: &[f64]) -> Vec<Vec<f64>> {
    let (t0, t1) = (t[0], t[t.len() - 1]);
    let mut cols = vec![vec![1.0; t.len()], Vec::with_capacity(t.len()), Vec::with_capacity(t.len())];
    for &ti in t {
        let [a, b] = family.basis(theta, ti, t0, t1);
        cols[1].push(a);
        cols[2].push(b);
    }
    for &e in known {
        cols.push(t.iter().map(|&ti| (-e * (ti - t0)).exp2()).collect());
    }
    cols
}

fn fit_at(family: Family, theta: f64, t: &[f64], y: &[f64], known: &[f64]) -> Option<Fit> {
    let (coeffs, rss) = least_squares(&columns(family, theta, t, known), y)?;
    Some(Fit { theta, coeffs, rss })
}

fn best_fit(family: Family, t: &[f64], y: &[f64], opts: &LadderOptions) -> Option<Fit> {
    let (lo, hi) = family.range(opts.gamma_min);
    let known = &opts.known_rates;
    let grid = 48;
    let step = (hi - lo) / grid as f64;
    let mut best: Option<Fit> = None;
    for i in 0..=grid {
        if let Some(f) = fit_at(family, lo + step * i as f64, t, y, known) {
            if best.as_ref().is_none_or(|b| f.rss < b.rss) {
                best = Some(f);
            }
        }
    }
    let b = best?;
    let a = (b.theta - step).max(lo);
    let c = (b.theta + step).min(hi);
    let score = |th: f64| fit_at(family, th, t, y, known).map_or(f64::NEG_INFINITY, |f| -f.rss);
    let (th, _) = golden_max(score, a, c, 60);
    match fit_at(family, th, t, y, known) {
        Some(f) if f.rss < b.rss => Some(f),
        _ => Some(b),
    }
}

fn model_value(family: Family, fit: &Fit, t: f64, tw: &[f64], known: &[f64]) -> f64 {
    let (t0, t1) = (tw[0], tw[tw.len() - 1]);
    let [g1, g2] = family.basis(fit.theta, t, t0, t1);
    let mut v = fit.coeffs[0] + fit.coeffs[1] * g1 + fit.coeffs[2] * g2;
    for (c, &e) in fit.coeffs[3..].iter().zip(known) {
        v += c * (-e * (t - t0)).exp2();
    }
    v
}

/// Growth exponent from the last two increments, `d_j ~ 2^(gamma t_j)`,
/// when the final rungs are equally spaced. Corrections to a pure power law
/// cancel in the ratio up to relative order `2^-t`.
fn increment_rate(t: &[f64], v: &[f64]) -> Option<f64> {
    let n = v.len();
    if n < 3 {
        return None;
    }
    let (h1, h2) = (t[n - 2] - t[n - 3], t[n - 1] - t[n - 2]);
    let (d1, d2) = (v[n - 2] - v[n - 3], v[n - 1] - v[n - 2]);
    if (h1 - h2).abs() > 1e-9 * h2 || !(d1 > 0.0 && d2 > 0.0) {
        return None;
    }
    Some((d2 / d1).log2() / h2)
}

/// Exponent of the larger power term of a fitted power family at the end of
/// the window.
fn dominant_rate(family: Family, fit: &Fit) -> f64 {
    match family {
        Family::PowerShift if fit.coeffs[1].abs() < fit.coeffs[2].abs() => fit.theta - 1.0,
        _ => fit.theta,
    }
}

/// True when a growth family explains the window mostly through its decaying
/// terms; such a fit is a convergent sequence in disguise.
fn degenerate_growth(family: Family, fit: &Fit, tw: &[f64], range: f64) -> bool {
    let (t0, t1) = (tw[0], tw[tw.len() - 1]);
    let growth = match family {
        Family::Log => fit.coeffs[1] * ((t1 + fit.theta).ln() - (t0 + fit.theta).ln()),
        Family::LogPower => fit.coeffs[1] * (t1.powf(fit.theta) - t0.powf(fit.theta)),
        Family::Power | Family::PowerShift => {
            let ([a0, b0], [a1, b1]) = (family.basis(fit.theta, t0, t0, t1), family.basis(fit.theta, t1, t0, t1));
            let mut g = fit.coeffs[1] * (a1 - a0);
            if family == Family::PowerShift && fit.theta > 1.0 {
                g += fit.coeffs[2] * (b1 - b0);
            }
            g
        }
        _ => return false,
    };
    growth < 0.5 * range
}

/// First index of the fitting window: the last three quarters of the ladder,
/// or all of it when the ladder is short.
fn window_start(n: usize) -> usize {
    if n <= 8 {
        0
    } else {
        n / 4
    }
}

/// Classifies the sequence `values` sampled at abscissae `t` (the rung index
/// `log2(1/(1-r))` for radius ladders, the term count for criterion sums).
pub fn classify_ladder(t: &[f64], values: &[f64], opts: &LadderOptions) -> (Classification, FitDiagnostics) {
    let n = values.len().min(t.len());
    if n < 4 || values[..n].iter().any(|v| !v.is_finite()) {
        return (Classification::Inconclusive, FitDiagnostics::empty());
    }
    let start = window_start(n);
    let (tw, yw) = (&t[start..n], &values[start..n]);
    let scale = yw.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let lo = yw.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = yw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let range = hi - lo;
    if scale == 0.0 || range <= 1e-12 * scale {
        let diag = FitDiagnostics {
            model: Some(Model::Const),
            family: "flat",
            parameter: 0.0,
            residual: 0.0,
            runner_up: f64::INFINITY,
        };
        return (Classification::Converges { estimate: values[n - 1] }, diag);
    }

    let m = yw.len() as f64;
    let mut per_model: Vec<(Model, Family, Fit, f64)> = Vec::new();
    for family in FAMILIES {
        let Some(fit) = best_fit(family, tw, yw, opts) else {
            continue;
        };
        if degenerate_growth(family, &fit, tw, range) {
            continue;
        }
        let resid = (fit.rss / m).sqrt() / range;
        match per_model.iter_mut().find(|e| e.0 == family.model()) {
            Some(e) if resid < e.3 => *e = (family.model(), family, fit, resid),
            Some(_) => {}
            None => per_model.push((family.model(), family, fit, resid)),
        }
    }
    per_model.sort_by(|a, b| a.3.total_cmp(&b.3));
    let Some((model, family, fit, resid)) = per_model.first() else {
        return (Classification::Inconclusive, FitDiagnostics::empty());
    };
    let runner_up = per_model.get(1).map_or(f64::INFINITY, |e| e.3);
    let diag = FitDiagnostics {
        model: Some(*model),
        family: family.name(),
        parameter: fit.theta,
        residual: *resid,
        runner_up,
    };
    if runner_up < opts.residual_factor * resid {
        return (Classification::Inconclusive, diag);
    }

    let t1 = tw[tw.len() - 1];
    let known = &opts.known_rates;
    let increasing_at_end = model_value(*family, fit, t1, tw, known) > model_value(*family, fit, tw[tw.len() - 2], tw, known);
    let monotone = yw.windows(2).all(|w| w[1] >= w[0] - 1e-12 * scale);
    let class = match model {
        Model::Const => {
            let limit = fit.coeffs[0];
            let prev = if n - 1 - start >= 4 {
                best_fit(*family, &t[start..n - 1], &values[start..n - 1], opts).map(|f| f.coeffs[0])
            } else {
                None
            };
            let stable = prev.is_some_and(|p| (limit - p).abs() <= opts.tolerance * limit.abs());
            let last_step = (values[n - 1] - values[n - 2]).abs() <= opts.tolerance * values[n - 1].abs();
            if stable {
                Classification::Converges { estimate: limit }
            } else if last_step {
                Classification::Converges { estimate: values[n - 1] }
            } else {
                Classification::Inconclusive
            }
        }
        Model::Power if monotone && increasing_at_end => {
            let gamma = increment_rate(&t[..n], &values[..n]).unwrap_or_else(|| dominant_rate(*family, fit));
            if gamma >= opts.gamma_min {
                Classification::Diverges(Growth::Power { gamma })
            } else {
                Classification::Inconclusive
            }
        }
        Model::Log if monotone && increasing_at_end => Classification::Diverges(Growth::Log),
        _ => Classification::Inconclusive,
    };
    (class, diag)
}
