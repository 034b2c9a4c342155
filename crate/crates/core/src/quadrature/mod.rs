//! Integral means, norms and seminorms evaluated on a ladder of radii
//! approaching the boundary, with convergence classification.

mod circle;
pub mod ladder;
pub mod rules;

use rayon::prelude::*;
use serde::ser::{Serialize, SerializeMap, Serializer};

use crate::error::{Error, Result};
use crate::series::{AnalyticFunction, C64};
pub use ladder::{classify_ladder, Classification, FitDiagnostics, Growth, LadderOptions, Model};
use rules::{gauss_legendre, gauss_on, tanh_sinh};

/// Radial rule applied on each ladder interval.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RadialRule {
    CompositeGauss { panels: usize, order: usize },
    TanhSinh { level: u32 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureConfig {
    /// Minimum number of equispaced samples per circle.
    pub angular_samples: usize,
    /// Refinement stops here; Möbius-stretched circles needing more are skipped.
    pub max_angular_samples: usize,
    pub radial_rule: RadialRule,
    pub radius_ladder: Vec<f64>,
    pub a_grid: Vec<C64>,
    /// Relative change below which a ladder counts as converged.
    pub tolerance: f64,
    /// How much better the winning growth model must fit than the runner-up.
    pub residual_factor: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            angular_samples: 512,
            max_angular_samples: 1 << 20,
            radial_rule: RadialRule::CompositeGauss { panels: 2, order: 12 },
            radius_ladder: dyadic_ladder(16),
            a_grid: default_a_grid(),
            tolerance: 1e-3,
            residual_factor: 10.0,
        }
    }
}

/// `1 - 2^-j` for `j = 1..=depth`.
pub fn dyadic_ladder(depth: u32) -> Vec<f64> {
    (1..=depth).map(|j| 1.0 - (-(j as f64)).exp2()).collect()
}

/// Eight rays at moduli 0, 0.5, 0.9 and 0.99; the origin appears once.
pub fn default_a_grid() -> Vec<C64> {
    let mut grid = vec![C64::new(0.0, 0.0)];
    for m in [0.5, 0.9, 0.99] {
        for k in 0..8 {
            grid.push(C64::from_polar(m, std::f64::consts::TAU * k as f64 / 8.0));
        }
    }
    grid
}

impl QuadratureConfig {
    pub fn with_ladder_depth(mut self, depth: u32) -> Self {
        self.radius_ladder = dyadic_ladder(depth);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.angular_samples == 0 || self.max_angular_samples < self.angular_samples {
            return Err(Error::param("angular sample counts must be positive and ordered"));
        }
        if self.radius_ladder.len() < 4 {
            return Err(Error::param("the radius ladder needs at least 4 rungs"));
        }
        let inside = self.radius_ladder.iter().all(|&r| r > 0.0 && r < 1.0);
        let increasing = self.radius_ladder.windows(2).all(|w| w[1] > w[0]);
        if !inside || !increasing {
            return Err(Error::param("the radius ladder must increase strictly inside (0, 1)"));
        }
        if self.a_grid.is_empty() || self.a_grid.iter().any(|a| !(a.norm() < 1.0)) {
            return Err(Error::param("a_grid must be a nonempty set inside the open disc"));
        }
        match self.radial_rule {
            RadialRule::CompositeGauss { panels, order } if panels == 0 || order == 0 => {
                return Err(Error::param("radial rule needs at least one panel and node"))
            }
            _ => {}
        }
        if !(self.tolerance > 0.0) || !(self.residual_factor >= 1.0) {
            return Err(Error::param("tolerance must be positive and residual factor at least 1"));
        }
        Ok(())
    }

    pub fn ladder_options(&self) -> LadderOptions {
        LadderOptions {
            tolerance: self.tolerance,
            residual_factor: self.residual_factor,
            ..LadderOptions::default()
        }
    }
}

/// Ladder abscissa `log2(1/(1-r))`.
fn rung_index(r: f64) -> f64 {
    -(1.0 - r).log2()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    /// `(r_j, value_j)` for each rung.
    pub ladder: Vec<(f64, f64)>,
    pub classification: Classification,
    pub fit: FitDiagnostics,
    /// Points of the Q_s supremum actually evaluated.
    pub a_grid: Option<Vec<C64>>,
    pub notes: Vec<String>,
}

impl ConvergenceReport {
    /// Classifies a radius ladder of values.
    pub fn from_ladder(ladder: Vec<(f64, f64)>, opts: &LadderOptions) -> Self {
        let t: Vec<f64> = ladder.iter().map(|e| rung_index(e.0)).collect();
        let v: Vec<f64> = ladder.iter().map(|e| e.1).collect();
        let (classification, fit) = classify_ladder(&t, &v, opts);
        ConvergenceReport {
            ladder,
            classification,
            fit,
            a_grid: None,
            notes: Vec::new(),
        }
    }

    pub fn estimate(&self) -> Option<f64> {
        self.classification.estimate()
    }

    pub fn gamma(&self) -> Option<f64> {
        match self.classification {
            Classification::Diverges(Growth::Power { gamma }) => Some(gamma),
            _ => None,
        }
    }

    /// The fitted model behind a definite classification.
    pub fn model(&self) -> Option<Model> {
        match self.classification {
            Classification::Inconclusive => None,
            Classification::Converges { .. } => Some(Model::Const),
            Classification::Diverges(Growth::Power { .. }) => Some(Model::Power),
            Classification::Diverges(Growth::Log) => Some(Model::Log),
        }
    }

    /// Applies a monotone map to the values and the limit; power-growth
    /// exponents are multiplied by `gamma_factor`.
    fn map_values(mut self, f: impl Fn(f64) -> f64, gamma_factor: f64) -> Self {
        for e in &mut self.ladder {
            e.1 = f(e.1);
        }
        self.classification = match self.classification {
            Classification::Converges { estimate } => Classification::Converges { estimate: f(estimate) },
            Classification::Diverges(Growth::Power { gamma }) => Classification::Diverges(Growth::Power {
                gamma: gamma * gamma_factor,
            }),
            other => other,
        };
        self
    }
}

impl Serialize for ConvergenceReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let len = if self.notes.is_empty() { 6 } else { 7 };
        let mut m = s.serialize_map(Some(len))?;
        m.serialize_entry("classification", self.classification.as_str())?;
        m.serialize_entry("estimate", &self.estimate())?;
        m.serialize_entry("model", &self.model().map(|m| m.as_str()))?;
        m.serialize_entry("gamma", &self.gamma())?;
        let ladder: Vec<[f64; 2]> = self.ladder.iter().map(|e| [e.0, e.1]).collect();
        m.serialize_entry("ladder", &ladder)?;
        let grid = self.a_grid.as_ref().map(|g| g.iter().map(|a| [a.re, a.im]).collect::<Vec<_>>());
        m.serialize_entry("a_grid", &grid)?;
        if !self.notes.is_empty() {
            m.serialize_entry("notes", &self.notes)?;
        }
        m.end()
    }
}

/// Integral mean `M_p(r, f)`; `p = f64::INFINITY` gives the maximum modulus.
pub fn mean_p(f: &AnalyticFunction, r: f64, p: f64, cfg: &QuadratureConfig) -> Result<f64> {
    check_radius(r)?;
    check_exponent(p)?;
    let v = circle::mean_power(f, r, p, cfg)?;
    Ok(if p.is_finite() { v.powf(1.0 / p) } else { v })
}

fn check_radius(r: f64) -> Result<()> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::param(format!("radius {r} outside [0, 1)")));
    }
    Ok(())
}

fn check_exponent(p: f64) -> Result<()> {
    if !(p > 0.0) {
        return Err(Error::param(format!("exponent p = {p} must be positive")));
    }
    Ok(())
}

/// Quadrature nodes `(rung, r, weight)` covering `[0, r_last]`.
fn radial_nodes(cfg: &QuadratureConfig, log_origin: bool) -> Vec<(usize, f64, f64)> {
    let mut out = Vec::new();
    let mut lo = 0.0;
    for (j, &hi) in cfg.radius_ladder.iter().enumerate() {
        match cfg.radial_rule {
            RadialRule::TanhSinh { level } => {
                out.extend(tanh_sinh(lo, hi, level).into_iter().map(|(r, w)| (j, r, w)));
            }
            RadialRule::CompositeGauss { .. } if j == 0 && log_origin => {
                out.extend(tanh_sinh(lo, hi, 5).into_iter().map(|(r, w)| (j, r, w)));
            }
            RadialRule::CompositeGauss { panels, order } => {
                let rule = gauss_legendre(order);
                let step = (hi - lo) / panels as f64;
                for k in 0..panels {
                    let a = lo + step * k as f64;
                    let b = if k + 1 == panels { hi } else { a + step };
                    out.extend(gauss_on(a, b, &rule).map(|(r, w)| (j, r, w)));
                }
            }
        }
        lo = hi;
    }
    out
}

/// Cumulative integrals `int_0^{r_j} integrand(r) dr` over the ladder. Nodes
/// are evaluated in parallel and summed in a fixed order.
fn radial_ladder<F>(cfg: &QuadratureConfig, log_origin: bool, integrand: F) -> Result<Vec<(f64, f64)>>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let nodes = radial_nodes(cfg, log_origin);
    let vals: Vec<f64> = nodes
        .par_iter()
        .map(|&(_, r, w)| integrand(r).map(|v| w * v))
        .collect::<Result<Vec<_>>>()?;
    let mut rungs = vec![0.0; cfg.radius_ladder.len()];
    for (&(j, _, _), v) in nodes.iter().zip(&vals) {
        rungs[j] += v;
    }
    let mut acc = 0.0;
    Ok(cfg
        .radius_ladder
        .iter()
        .zip(rungs)
        .map(|(&r, v)| {
            acc += v;
            (r, acc)
        })
        .collect())
}

/// Ladder of `2 int_0^{r_j} weight(r) M_p(r, f)^p r dr`, i.e. the area
/// integral of `weight(|z|) |f|^p` over `|z| < r_j` with normalized area.
pub fn area_ladder<W>(f: &AnalyticFunction, p: f64, weight: W, cfg: &QuadratureConfig) -> Result<Vec<(f64, f64)>>
where
    W: Fn(f64) -> f64 + Sync,
{
    check_exponent(p)?;
    cfg.validate()?;
    radial_ladder(cfg, false, |r| {
        let w = weight(r);
        if w == 0.0 {
            return Ok(0.0);
        }
        Ok(2.0 * r * w * circle::mean_power(f, r, p, cfg)?)
    })
}

pub fn hardy_norm(f: &AnalyticFunction, p: f64, cfg: &QuadratureConfig) -> Result<ConvergenceReport> {
    check_exponent(p)?;
    cfg.validate()?;
    let ladder = cfg
        .radius_ladder
        .par_iter()
        .map(|&r| mean_p(f, r, p, cfg).map(|v| (r, v)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceReport::from_ladder(ladder, &cfg.ladder_options()))
}

/// Weighted Bergman norm with the `(alpha + 1)` normalization, so constants
/// have norm `|c|`. The `p`-th power is classified and the root reported.
pub fn bergman_norm(f: &AnalyticFunction, p: f64, alpha: f64, cfg: &QuadratureConfig) -> Result<ConvergenceReport> {
    check_exponent(p)?;
    if !(alpha > -1.0) {
        return Err(Error::param(format!("alpha = {alpha} must exceed -1")));
    }
    let ladder = area_ladder(f, p, |r| (alpha + 1.0) * (1.0 - r * r).powf(alpha), cfg)?;
    // the bounded part of M_p^p contributes a (1-r)^(alpha+1) tail
    let opts = LadderOptions {
        known_rates: vec![alpha + 1.0],
        ..cfg.ladder_options()
    };
    Ok(ConvergenceReport::from_ladder(ladder, &opts).map_values(|v| v.powf(1.0 / p), 1.0 / p))
}

/// `|f(0)| + ||f'||_{A^p_alpha}`.
pub fn dirichlet_type_norm(f: &AnalyticFunction, p: f64, alpha: f64, cfg: &QuadratureConfig) -> Result<ConvergenceReport> {
    let f0 = f.eval(C64::new(0.0, 0.0))?.norm();
    Ok(bergman_norm(&f.derivative(), p, alpha, cfg)?.map_values(|v| v + f0, 1.0))
}

const BLOCH_SUBSAMPLES: usize = 8;

/// Running supremum of `(1 - r^2) M_inf(r, f')` along the ladder.
pub fn bloch_seminorm(f: &AnalyticFunction, cfg: &QuadratureConfig) -> Result<ConvergenceReport> {
    cfg.validate()?;
    let fp = f.derivative();
    let g = |t: f64| -> Result<f64> {
        let r = 1.0 - (-t).exp2();
        Ok((1.0 - r * r) * circle::mean_power(&fp, r, f64::INFINITY, cfg)?)
    };
    let t_of: Vec<f64> = cfg.radius_ladder.iter().map(|&r| rung_index(r)).collect();
    let rung_sup = (0..t_of.len())
        .into_par_iter()
        .map(|j| -> Result<f64> {
            let lo = if j == 0 { 0.0 } else { t_of[j - 1] };
            let h = (t_of[j] - lo) / BLOCH_SUBSAMPLES as f64;
            let mut best = (lo, g(lo)?);
            for i in 1..=BLOCH_SUBSAMPLES {
                let t = lo + h * i as f64;
                let v = g(t)?;
                if v > best.1 {
                    best = (t, v);
                }
            }
            let a = (best.0 - h).max(lo);
            let b = (best.0 + h).min(t_of[j]);
            let (_, refined) = crate::num::golden_max(|t| g(t).unwrap_or(f64::NEG_INFINITY), a, b, 30);
            Ok(best.1.max(refined))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut sup = 0.0f64;
    let ladder = cfg
        .radius_ladder
        .iter()
        .zip(rung_sup)
        .map(|(&r, v)| {
            sup = sup.max(v);
            (r, sup)
        })
        .collect();
    Ok(ConvergenceReport::from_ladder(ladder, &cfg.ladder_options()))
}

/// The disc Green's function `log |(1 - conj(a) z) / (z - a)|`.
pub fn green(z: C64, a: C64) -> Result<f64> {
    if !(z.norm() < 1.0) || !(a.norm() < 1.0) {
        return Err(Error::Domain(format!("green({z}, {a})")));
    }
    let d = z - a;
    if d.norm() == 0.0 {
        return Err(Error::Singularity);
    }
    let num = C64::new(1.0, 0.0) - a.conj() * z;
    Ok((num.norm() / d.norm()).ln().max(0.0))
}

/// Ladder of `max_a int_{|w|<r_j} |(f o sigma_a)'(w)|^2 log(1/|w|)^s dA(w)`
/// over the configured `a_grid`. Points whose Möbius image needs more than
/// `max_angular_samples` samples at the deepest rung are skipped and noted.
pub fn qs_seminorm(f: &AnalyticFunction, s: f64, cfg: &QuadratureConfig) -> Result<ConvergenceReport> {
    if !(s >= 0.0) {
        return Err(Error::param(format!("s = {s} must be nonnegative")));
    }
    cfg.validate()?;
    let fp = f.derivative();
    let deepest = *cfg.radius_ladder.last().unwrap_or(&0.0);
    let mut grid: Vec<C64> = Vec::new();
    for &a in &cfg.a_grid {
        if !grid.iter().any(|b| (a - *b).norm() < 1e-15) {
            grid.push(a);
        }
    }
    let mut notes = Vec::new();
    let mut used = Vec::new();
    let mut best: Vec<f64> = vec![0.0; cfg.radius_ladder.len()];
    for a in grid {
        if a.norm() > 0.0 && circle::mobius_samples(&fp, a, deepest, cfg).is_none() {
            notes.push(format!(
                "a = ({:.6}, {:.6}) skipped: angular resolution above {}",
                a.re, a.im, cfg.max_angular_samples
            ));
            continue;
        }
        let weight = |r: f64| if s == 0.0 { 1.0 } else { (1.0 / r).ln().powf(s) };
        let ladder = radial_ladder(cfg, s > 0.0, |r| {
            let mean = if a.norm() == 0.0 {
                circle::mean_power(&fp, r, 2.0, cfg)?
            } else {
                circle::mobius_mean(&fp, a, r, cfg)?.ok_or_else(|| Error::Inconclusive("angular resolution cap reached".into()))?
            };
            Ok(2.0 * r * weight(r) * mean)
        })?;
        for (b, (_, v)) in best.iter_mut().zip(ladder) {
            *b = b.max(v);
        }
        used.push(a);
    }
    if used.is_empty() {
        return Err(Error::Inconclusive("every a_grid point exceeded the angular resolution cap".into()));
    }
    let ladder = cfg.radius_ladder.iter().copied().zip(best).collect();
    let opts = LadderOptions {
        known_rates: vec![s + 1.0],
        ..cfg.ladder_options()
    };
    let mut report = ConvergenceReport::from_ladder(ladder, &opts);
    report.a_grid = Some(used);
    report.notes = notes;
    Ok(report)
}
