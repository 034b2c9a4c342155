//! Integral means over circles.

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};
use std::sync::{Arc, OnceLock, RwLock};

use super::rules::{gauss_legendre, gauss_on};
use super::QuadratureConfig;
use crate::error::Result;
use crate::num::golden_max;
use crate::series::{AnalyticFunction, C64};

/// Relative agreement between a trapezoid sum and its doubling that ends
/// the refinement.
const ANGULAR_TOL: f64 = 1e-11;
const GRADED_ORDER: usize = 16;

fn roots_of_unity(n: usize) -> Arc<Vec<C64>> {
    static CACHE: OnceLock<RwLock<HashMap<usize, Arc<Vec<C64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(t) = cache.read().unwrap_or_else(|e| e.into_inner()).get(&n) {
        return t.clone();
    }
    let table: Arc<Vec<C64>> = Arc::new((0..n).map(|j| C64::from_polar(1.0, TAU * j as f64 / n as f64)).collect());
    cache.write().unwrap_or_else(|e| e.into_inner()).insert(n, table.clone());
    table
}

/// True when the function is a finite trigonometric polynomial on circles
/// (up to negligible tails), so the trapezoid rule is exact once the sample
/// count exceeds the bandwidth.
fn band_limited(f: &AnalyticFunction) -> bool {
    match f {
        AnalyticFunction::Power(_) | AnalyticFunction::Lacunary(_) => true,
        AnalyticFunction::Binomial(_) | AnalyticFunction::Composition(_) => false,
        AnalyticFunction::Affine(a) => band_limited(&a.base),
        AnalyticFunction::Product(a, b) | AnalyticFunction::Sum(a, b) => band_limited(a) && band_limited(b),
    }
}

/// Gauss–Legendre nodes on the circle, graded geometrically towards each
/// `(angle, width)` centre. Weights sum to `2 pi`.
pub(crate) fn graded_nodes(centers: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut cuts: Vec<f64> = Vec::new();
    for &(c, width) in centers {
        let c = c.rem_euclid(TAU);
        cuts.push(c);
        let mut d = 0.5 * width.clamp(1e-15, PI);
        while d < PI {
            cuts.push((c + d).rem_euclid(TAU));
            cuts.push((c - d).rem_euclid(TAU));
            d *= 2.0;
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    let rule = gauss_legendre(GRADED_ORDER);
    let mut out = Vec::with_capacity(cuts.len() * GRADED_ORDER);
    for i in 0..cuts.len() {
        let a = cuts[i];
        let b = if i + 1 < cuts.len() { cuts[i + 1] } else { cuts[0] + TAU };
        if b - a > 0.0 {
            out.extend(gauss_on(a, b, &rule));
        }
    }
    out
}

fn initial_samples(cfg: &QuadratureConfig, bandwidth: Option<f64>, p: f64, stretch: f64) -> usize {
    let mult = if p.is_finite() { p.max(2.0) + 1.0 } else { 4.0 };
    let need = bandwidth.map_or(0.0, |b| mult * (b + 1.0) * stretch).max(64.0 * stretch);
    let need = need.min(1e15) as usize;
    need.max(cfg.angular_samples).next_power_of_two()
}

fn power_mean(vals: &[C64], weights: Option<&[f64]>, p: f64) -> f64 {
    match weights {
        None => vals.iter().map(|v| v.norm().powf(p)).sum::<f64>() / vals.len() as f64,
        Some(w) => vals.iter().zip(w).map(|(v, w)| w * v.norm().powf(p)).sum::<f64>() / TAU,
    }
}

fn refine_max(sample: impl Fn(f64) -> Result<C64>, angles: &[f64], vals: &[C64], spacing: impl Fn(usize) -> f64) -> f64 {
    let (i, best) = vals
        .iter()
        .enumerate()
        .map(|(i, v)| (i, v.norm()))
        .fold((0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
    let h = spacing(i);
    let g = |t: f64| sample(t).map_or(f64::NEG_INFINITY, |v| v.norm());
    let (_, refined) = golden_max(g, angles[i] - h, angles[i] + h, 60);
    best.max(refined)
}

/// `M_p(r, f)^p` for finite `p`, or `M_inf(r, f)` when `p` is infinite.
pub(crate) fn mean_power(f: &AnalyticFunction, r: f64, p: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if r == 0.0 {
        let v = f.eval(C64::new(0.0, 0.0))?.norm();
        return Ok(if p.is_finite() { v.powf(p) } else { v });
    }
    if f.has_boundary_singularity() {
        let nodes = graded_nodes(&[(0.0, 1.0 - r)]);
        let angles: Vec<f64> = nodes.iter().map(|n| n.0).collect();
        let weights: Vec<f64> = nodes.iter().map(|n| n.1).collect();
        let vals = angles.iter().map(|&t| f.eval_polar(r, t)).collect::<Result<Vec<_>>>()?;
        if p.is_finite() {
            return Ok(power_mean(&vals, Some(&weights), p));
        }
        return Ok(refine_max(|t| f.eval_polar(r, t), &angles, &vals, |i| weights[i]));
    }
    // even integer powers of a trigonometric polynomial are again one, and its
    // maximum is pinned down by the golden refinement
    let exact = band_limited(f) && (p.is_infinite() || (p.fract() == 0.0 && (p as u64).is_multiple_of(2)));
    let mut n = initial_samples(cfg, f.bandwidth(r), p, 1.0).min(cfg.max_angular_samples);
    let uniform = |n: usize| -> Result<Vec<C64>> { f.sample_circle(r, &roots_of_unity(n)) };
    let summarize = |vals: &[C64], n: usize| -> f64 {
        if p.is_finite() {
            power_mean(vals, None, p)
        } else {
            let angles: Vec<f64> = (0..n).map(|j| TAU * j as f64 / n as f64).collect();
            refine_max(|t| f.eval_polar(r, t), &angles, vals, |_| TAU / n as f64)
        }
    };
    let mut value = summarize(&uniform(n)?, n);
    if exact {
        return Ok(value);
    }
    while 2 * n <= cfg.max_angular_samples {
        let next = summarize(&uniform(2 * n)?, 2 * n);
        n *= 2;
        let done = (next - value).abs() <= ANGULAR_TOL * next.abs().max(f64::MIN_POSITIVE);
        value = next;
        if done {
            break;
        }
    }
    Ok(value)
}

/// `sigma_a(w) = (a - w) / (1 - conj(a) w)`, the involutive disc automorphism.
pub(crate) fn mobius(a: C64, w: C64) -> C64 {
    (a - w) / (C64::new(1.0, 0.0) - a.conj() * w)
}

/// `|sigma_a'(w)| = (1 - |a|^2) / |1 - conj(a) w|^2`.
fn mobius_jacobian(a: C64, w: C64) -> f64 {
    (1.0 - a.norm_sqr()) / (C64::new(1.0, 0.0) - a.conj() * w).norm_sqr()
}

/// Number of uniform samples needed on `|w| = rho` for `g o sigma_a`, or
/// `None` when it exceeds the configured cap.
pub(crate) fn mobius_samples(g: &AnalyticFunction, a: C64, rho: f64, cfg: &QuadratureConfig) -> Option<usize> {
    if g.has_boundary_singularity() {
        return Some(0);
    }
    let m = a.norm();
    let stretch = (1.0 + m) / (1.0 - m);
    let big_r = (m + rho) / (1.0 + m * rho);
    let n = initial_samples(cfg, g.bandwidth(big_r), 2.0, stretch);
    (n <= cfg.max_angular_samples).then_some(n)
}

/// `(1/2 pi) int |g(sigma_a(w))|^2 |sigma_a'(w)|^2 dtheta` over `|w| = rho`.
/// Returns `None` when the required angular resolution exceeds the cap.
pub(crate) fn mobius_mean(g: &AnalyticFunction, a: C64, rho: f64, cfg: &QuadratureConfig) -> Result<Option<f64>> {
    let point = |t: f64| -> Result<f64> {
        let w = C64::from_polar(rho, t);
        let j = mobius_jacobian(a, w);
        Ok(g.eval(mobius(a, w))?.norm_sqr() * j * j)
    };
    if g.has_boundary_singularity() {
        let star = mobius(a, C64::new(1.0, 0.0)).arg();
        let centers = [(star, 1.0 - rho), (a.arg(), 1.0 - a.norm()), (a.arg() + PI, 1.0 - rho)];
        let mut acc = 0.0;
        for (t, w) in graded_nodes(&centers) {
            acc += w * point(t)?;
        }
        return Ok(Some(acc / TAU));
    }
    let Some(mut n) = mobius_samples(g, a, rho, cfg) else {
        return Ok(None);
    };
    let trap = |n: usize| -> Result<f64> {
        let mut acc = 0.0;
        for j in 0..n {
            acc += point(TAU * j as f64 / n as f64)?;
        }
        Ok(acc / n as f64)
    };
    let mut value = trap(n)?;
    while 2 * n <= cfg.max_angular_samples {
        let next = trap(2 * n)?;
        n *= 2;
        let done = (next - value).abs() <= ANGULAR_TOL * next.abs().max(f64::MIN_POSITIVE);
        value = next;
        if done {
            break;
        }
    }
    Ok(Some(value))
}
