//! Entire symbols: evaluation, maximum modulus, order and type estimates.

use std::f64::consts::TAU;
use std::fmt;
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::{golden_max, linear_fit, ln_factorial, LogComplex};
use crate::series::C64;

/// The growth classes named by the superposition verdicts, smallest first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SymbolClass {
    Constant,
    Linear,
    #[serde(rename = "order1type0")]
    Order1Type0,
    #[serde(rename = "order2finite")]
    Order2Finite,
    #[serde(rename = "all")]
    AllEntire,
}

impl SymbolClass {
    pub const ALL: [SymbolClass; 5] = [
        SymbolClass::Constant,
        SymbolClass::Linear,
        SymbolClass::Order1Type0,
        SymbolClass::Order2Finite,
        SymbolClass::AllEntire,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            SymbolClass::Constant => "constant",
            SymbolClass::Linear => "linear",
            SymbolClass::Order1Type0 => "order1type0",
            SymbolClass::Order2Finite => "order2finite",
            SymbolClass::AllEntire => "all",
        }
    }

    pub fn parse(s: &str) -> Option<SymbolClass> {
        SymbolClass::ALL.into_iter().find(|c| c.as_str() == s)
    }
}

impl fmt::Display for SymbolClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which exact evaluator backs a symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosedForm {
    Exp,
    ExpOfSquare,
    Polynomial,
    Linear,
    Constant,
    CustomSeries,
}

type CoeffFn = dyn Fn(usize) -> LogComplex + Send + Sync;

#[derive(Clone)]
enum Repr {
    /// `shift + P(z) * exp(rate * z^power)`.
    ExpPoly { shift: C64, poly: Vec<C64>, rate: C64, power: u32 },
    /// `shift + scale * g^(deriv)(z)` for `g = sum c_n z^n` given by log-coefficients.
    Series {
        coeff: Arc<CoeffFn>,
        cache: Arc<RwLock<Vec<LogComplex>>>,
        scale: C64,
        shift: C64,
        deriv: usize,
    },
}

#[derive(Clone)]
pub struct EntireSymbol {
    repr: Repr,
    custom: bool,
}

impl fmt::Debug for EntireSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::ExpPoly { shift, poly, rate, power } => f
                .debug_struct("EntireSymbol")
                .field("shift", shift)
                .field("poly", poly)
                .field("rate", rate)
                .field("power", power)
                .finish(),
            Repr::Series { scale, shift, deriv, .. } => f
                .debug_struct("EntireSymbol")
                .field("series_scale", scale)
                .field("shift", shift)
                .field("deriv", deriv)
                .finish(),
        }
    }
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn is_zero(z: C64) -> bool {
    z.re == 0.0 && z.im == 0.0
}

impl EntireSymbol {
    fn exp_poly(shift: C64, poly: Vec<C64>, rate: C64, power: u32) -> Self {
        EntireSymbol {
            repr: Repr::ExpPoly { shift, poly, rate, power },
            custom: false,
        }
    }

    pub fn constant(value: C64) -> Self {
        Self::exp_poly(value, vec![], c(0.0), 1)
    }

    pub fn linear(a: C64, b: C64) -> Self {
        Self::exp_poly(c(0.0), vec![b, a], c(0.0), 1)
    }

    pub fn polynomial(coeffs: Vec<C64>) -> Self {
        Self::exp_poly(c(0.0), coeffs, c(0.0), 1)
    }

    /// A series symbol from finitely many Taylor coefficients.
    pub fn custom_series(coeffs: Vec<C64>) -> Self {
        EntireSymbol {
            custom: true,
            ..Self::polynomial(coeffs)
        }
    }

    pub fn exp() -> Self {
        Self::exp_rate(c(1.0))
    }

    /// `exp(rate * z)`.
    pub fn exp_rate(rate: C64) -> Self {
        Self::exp_poly(c(0.0), vec![c(1.0)], rate, 1)
    }

    /// `exp(z^2)`.
    pub fn exp_of_square() -> Self {
        Self::exp_poly(c(0.0), vec![c(1.0)], c(1.0), 2)
    }

    /// `P(z) exp(rate z^power)`.
    pub fn poly_times_exp(poly: Vec<C64>, rate: C64, power: u32) -> Result<Self> {
        if power == 0 {
            return Err(Error::param("exponential power must be at least 1"));
        }
        Ok(Self::exp_poly(c(0.0), poly, rate, power))
    }

    /// An infinite series whose `n`-th coefficient is `exp(ln_abs + i phase)`
    /// as returned by `coeff(n)`; the generator must be deterministic.
    pub fn from_log_coefficients<F>(coeff: F) -> Self
    where
        F: Fn(usize) -> LogComplex + Send + Sync + 'static,
    {
        EntireSymbol {
            repr: Repr::Series {
                coeff: Arc::new(coeff),
                cache: Arc::new(RwLock::new(Vec::new())),
                scale: c(1.0),
                shift: c(0.0),
                deriv: 0,
            },
            custom: true,
        }
    }

    pub fn closed_form(&self) -> ClosedForm {
        match &self.repr {
            _ if self.custom => ClosedForm::CustomSeries,
            Repr::ExpPoly { rate, power, .. } if !is_zero(*rate) => {
                if *power == 1 {
                    ClosedForm::Exp
                } else {
                    ClosedForm::ExpOfSquare
                }
            }
            Repr::ExpPoly { .. } => match self.polynomial_degree() {
                Some(0) => ClosedForm::Constant,
                Some(1) => ClosedForm::Linear,
                _ => ClosedForm::Polynomial,
            },
            Repr::Series { .. } => ClosedForm::CustomSeries,
        }
    }

    /// Degree when the symbol is known to be a polynomial.
    pub fn polynomial_degree(&self) -> Option<usize> {
        match &self.repr {
            Repr::ExpPoly { poly, rate, .. } => {
                if !is_zero(*rate) && poly.iter().any(|p| !is_zero(*p)) {
                    return None;
                }
                let deg = if is_zero(*rate) {
                    poly.iter().rposition(|p| !is_zero(*p)).unwrap_or(0)
                } else {
                    0
                };
                Some(deg)
            }
            Repr::Series { .. } => None,
        }
    }

    fn series_log_coeff(&self, n: usize) -> LogComplex {
        let Repr::Series {
            coeff,
            cache,
            scale,
            shift,
            deriv,
        } = &self.repr
        else {
            unreachable!("series_log_coeff on a closed form");
        };
        let m = n + deriv;
        let base = {
            let cached = cache.read().unwrap_or_else(|e| e.into_inner()).get(m).copied();
            match cached {
                Some(v) => v,
                None => {
                    let mut w = cache.write().unwrap_or_else(|e| e.into_inner());
                    while w.len() <= m {
                        let j = w.len();
                        w.push(coeff(j));
                    }
                    w[m]
                }
            }
        };
        let mut v = base;
        if !v.is_zero() {
            v.ln_abs += ln_factorial(m) - ln_factorial(n);
        }
        v = v * LogComplex::from_complex(*scale);
        if n == 0 {
            v = v + LogComplex::from_complex(*shift);
        }
        v
    }

    /// Taylor coefficient `c_n` in log-polar form.
    pub fn log_coefficient(&self, n: usize) -> LogComplex {
        match &self.repr {
            Repr::ExpPoly { shift, poly, rate, power } => {
                let q = *power as usize;
                let mut acc = if n == 0 {
                    LogComplex::from_complex(*shift)
                } else {
                    LogComplex::ZERO
                };
                for (i, &p) in poly.iter().enumerate() {
                    if i > n || is_zero(p) {
                        continue;
                    }
                    let rest = n - i;
                    let e = if is_zero(*rate) {
                        if rest == 0 {
                            LogComplex::from_complex(c(1.0))
                        } else {
                            continue;
                        }
                    } else if rest.is_multiple_of(q) {
                        let j = rest / q;
                        LogComplex {
                            ln_abs: j as f64 * rate.norm().ln() - ln_factorial(j),
                            phase: j as f64 * rate.arg(),
                        }
                    } else {
                        continue;
                    };
                    acc = acc + LogComplex::from_complex(p) * e;
                }
                acc
            }
            Repr::Series { .. } => self.series_log_coeff(n),
        }
    }

    pub fn coefficient(&self, n: usize) -> C64 {
        self.log_coefficient(n).to_complex()
    }

    /// `c_0 ..= c_degree`.
    pub fn coefficients(&self, degree: usize) -> Vec<C64> {
        (0..=degree).map(|n| self.coefficient(n)).collect()
    }

    /// `ln phi(z)` in log-polar form; never overflows.
    pub fn eval_log(&self, z: C64) -> LogComplex {
        match &self.repr {
            Repr::ExpPoly { shift, poly, rate, power } => {
                let p = poly.iter().rev().fold(c(0.0), |acc, &a| acc * z + a);
                let mut v = LogComplex::from_complex(p);
                if !is_zero(*rate) {
                    let e = rate * z.powu(*power);
                    v = v * LogComplex { ln_abs: e.re, phase: e.im };
                }
                v + LogComplex::from_complex(*shift)
            }
            Repr::Series { .. } => self.eval_series_log(z),
        }
    }

    fn eval_series_log(&self, z: C64) -> LogComplex {
        if is_zero(z) {
            return self.log_coefficient(0);
        }
        let ln_r = z.norm().ln();
        let arg = z.arg();
        let mut acc = LogComplex::ZERO;
        let mut best = f64::NEG_INFINITY;
        let mut best_n = 0usize;
        for n in 0..(1usize << 22) {
            let cn = self.log_coefficient(n);
            let term = LogComplex {
                ln_abs: cn.ln_abs + n as f64 * ln_r,
                phase: cn.phase + n as f64 * arg,
            };
            if term.ln_abs > best {
                best = term.ln_abs;
                best_n = n;
            }
            acc = acc + term;
            if n > 16 && n > 2 * best_n + 16 && term.ln_abs < best - 50.0 {
                break;
            }
        }
        acc
    }

    pub fn eval(&self, z: C64) -> C64 {
        match &self.repr {
            Repr::ExpPoly { shift, poly, rate, power } => {
                let p = poly.iter().rev().fold(c(0.0), |acc, &a| acc * z + a);
                if is_zero(*rate) {
                    shift + p
                } else {
                    shift + p * (rate * z.powu(*power)).exp()
                }
            }
            Repr::Series { .. } => self.eval_series_log(z).to_complex(),
        }
    }

    /// Evaluation by summing the Taylor series until the tail drops below
    /// `tol` relative to the partial sum. Used to cross-check closed forms.
    pub fn eval_series(&self, z: C64, tol: f64) -> C64 {
        let mut sum = c(0.0);
        let mut zn = c(1.0);
        let mut quiet = 0;
        for n in 0..4096 {
            let term = self.coefficient(n) * zn;
            sum += term;
            if term.norm() <= tol * sum.norm().max(f64::MIN_POSITIVE) {
                quiet += 1;
                if quiet >= 8 && n > 8 {
                    break;
                }
            } else {
                quiet = 0;
            }
            zn *= z;
        }
        sum
    }

    pub fn derivative(&self) -> EntireSymbol {
        let repr = match &self.repr {
            Repr::ExpPoly { poly, rate, power, .. } => {
                let q = *power as usize;
                let mut out = vec![c(0.0); poly.len().max(1) + q];
                for (i, &p) in poly.iter().enumerate().skip(1) {
                    out[i - 1] += p * i as f64;
                }
                if !is_zero(*rate) {
                    for (i, &p) in poly.iter().enumerate() {
                        out[i + q - 1] += p * *rate * q as f64;
                    }
                }
                while out.len() > 1 && is_zero(*out.last().unwrap()) {
                    out.pop();
                }
                Repr::ExpPoly {
                    shift: c(0.0),
                    poly: out,
                    rate: *rate,
                    power: *power,
                }
            }
            Repr::Series {
                coeff,
                cache,
                scale,
                deriv,
                ..
            } => Repr::Series {
                coeff: coeff.clone(),
                cache: cache.clone(),
                scale: *scale,
                shift: c(0.0),
                deriv: deriv + 1,
            },
        };
        EntireSymbol { repr, custom: self.custom }
    }

    /// `scale * phi + shift`.
    pub fn affine(&self, scale: C64, shift: C64) -> EntireSymbol {
        let repr = match &self.repr {
            Repr::ExpPoly {
                shift: s,
                poly,
                rate,
                power,
            } => Repr::ExpPoly {
                shift: scale * s + shift,
                poly: poly.iter().map(|p| p * scale).collect(),
                rate: *rate,
                power: *power,
            },
            Repr::Series {
                coeff,
                cache,
                scale: a,
                shift: s,
                deriv,
            } => Repr::Series {
                coeff: coeff.clone(),
                cache: cache.clone(),
                scale: scale * a,
                shift: scale * s + shift,
                deriv: *deriv,
            },
        };
        EntireSymbol { repr, custom: self.custom }
    }

    /// `ln M(r)`, where `M(r)` is the maximum of `|phi|` on `|z| = r`, sampled at
    /// `samples` equispaced points and refined by golden section at the argmax.
    pub fn ln_max_modulus(&self, r: f64, samples: usize) -> f64 {
        self.argmax_modulus(r, samples).1
    }

    /// Angle and `ln |phi|` of the sampled maximum on `|z| = r`.
    fn argmax_modulus(&self, r: f64, samples: usize) -> (f64, f64) {
        if r == 0.0 {
            return (0.0, self.eval_log(c(0.0)).ln_abs);
        }
        let samples = samples.max(1);
        let f = |t: f64| self.eval_log(C64::from_polar(r, t)).ln_abs;
        let step = TAU / samples as f64;
        let (mut arg, mut best) = (0.0, f64::NEG_INFINITY);
        for j in 0..samples {
            let t = j as f64 * step;
            let v = f(t);
            if v > best {
                best = v;
                arg = t;
            }
        }
        let (t, refined) = golden_max(f, arg - step, arg + step, 80);
        if refined > best {
            (t, refined)
        } else {
            (arg, best)
        }
    }

    pub fn max_modulus(&self, r: f64, samples: usize) -> f64 {
        let (t, l) = self.argmax_modulus(r, samples);
        if l < 700.0 {
            self.eval(C64::from_polar(r, t)).norm()
        } else {
            l.exp()
        }
    }

    pub fn estimate_order(&self, radii: &[f64]) -> Result<OrderEstimate> {
        check_ladder(radii)?;
        if self.polynomial_degree().is_some() {
            return Ok(OrderEstimate {
                value: 0.0,
                stderr: 0.0,
                degenerate: true,
            });
        }
        let mut x = Vec::new();
        let mut y = Vec::new();
        for &r in &radii[radii.len() / 2..] {
            let l = self.ln_max_modulus(r, MAX_MODULUS_SAMPLES);
            if l.is_finite() && l > 0.0 {
                x.push(r.ln());
                y.push(l.ln());
            }
        }
        if x.len() < 4 {
            return Err(Error::OverflowGuard(format!(
                "only {} usable radii in the upper half of the ladder",
                x.len()
            )));
        }
        let (slope, _, stderr) = linear_fit(&x, &y);
        Ok(OrderEstimate {
            value: slope,
            stderr,
            degenerate: false,
        })
    }

    pub fn estimate_type(&self, rho: f64, radii: &[f64]) -> Result<TypeEstimate> {
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(Error::param(format!("order {rho} must be positive and finite")));
        }
        check_ladder(radii)?;
        let mut lr = Vec::new();
        let mut q = Vec::new();
        for &r in &radii[radii.len() / 2..] {
            let l = self.ln_max_modulus(r, MAX_MODULUS_SAMPLES);
            if l.is_finite() {
                lr.push(r.ln());
                q.push(l / r.powf(rho));
            }
        }
        if q.len() < 4 {
            return Err(Error::OverflowGuard(format!(
                "only {} usable radii in the upper half of the ladder",
                q.len()
            )));
        }
        let value = q.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let tail = &q[q.len() - 3..];
        let last = tail[2];
        let halfwidth = tail.iter().map(|v| (v - last).abs()).fold(0.0, f64::max);
        let trend = if q.iter().all(|&v| v > 0.0) {
            let ln_q: Vec<f64> = q.iter().map(|v| v.ln()).collect();
            let (slope, _, _) = linear_fit(&lr, &ln_q);
            if slope > TREND_SLOPE {
                Trend::Increasing
            } else if slope < -TREND_SLOPE {
                Trend::Decreasing
            } else {
                Trend::Stable
            }
        } else {
            Trend::Stable
        };
        Ok(TypeEstimate { value, halfwidth, trend })
    }

    pub fn classify(&self, tol: &SymbolTolerances) -> Result<Classification> {
        let coeffs: Vec<f64> = (0..=tol.inspection_degree).map(|n| self.coefficient(n).norm()).collect();
        let vanish_from = |k: usize| coeffs.iter().skip(k).all(|&a| a <= tol.zero);
        let mut out = Classification {
            class: SymbolClass::Constant,
            boundary: false,
            order: None,
            type_estimate: None,
        };
        if vanish_from(1) {
            return Ok(out);
        }
        if vanish_from(2) {
            out.class = SymbolClass::Linear;
            return Ok(out);
        }
        let radii = default_radii();
        let order = self.estimate_order(&radii)?;
        out.order = Some(order);
        if order.degenerate {
            out.class = SymbolClass::Order1Type0;
            return Ok(out);
        }
        if order.stderr > tol.max_order_stderr {
            return Err(Error::Inconclusive(format!(
                "order estimate {} has standard error {}",
                order.value, order.stderr
            )));
        }
        let h = tol.order_halfwidth.max(2.0 * order.stderr);
        let rho = order.value;
        out.class = if rho + h < 1.0 {
            SymbolClass::Order1Type0
        } else if (rho - 1.0).abs() <= h {
            let t = self.estimate_type(1.0, &radii)?;
            out.type_estimate = Some(t);
            if t.value <= tol.type_zero {
                out.boundary = true;
            }
            SymbolClass::Order2Finite
        } else if rho + h < 2.0 {
            SymbolClass::Order2Finite
        } else if (rho - 2.0).abs() <= h {
            let t = self.estimate_type(2.0, &radii)?;
            out.type_estimate = Some(t);
            if t.trend == Trend::Increasing {
                SymbolClass::AllEntire
            } else {
                SymbolClass::Order2Finite
            }
        } else {
            SymbolClass::AllEntire
        };
        Ok(out)
    }
}

const MAX_MODULUS_SAMPLES: usize = 256;
const TREND_SLOPE: f64 = 0.05;

/// The default radius ladder `2^j`, `j = 3..=20`.
pub fn default_radii() -> Vec<f64> {
    (3..=20).map(|j| f64::powi(2.0, j)).collect()
}

fn check_ladder(radii: &[f64]) -> Result<()> {
    if radii.len() < 4 {
        return Err(Error::param("the radius ladder needs at least 4 radii"));
    }
    if radii.iter().any(|&r| !(r > 1.0)) || radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::param("radii must be increasing and greater than 1"));
    }
    if radii[radii.len() - 1] / radii[0] < 100.0 {
        return Err(Error::param("the radius ladder must span at least two decades"));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OrderEstimate {
    pub value: f64,
    pub stderr: f64,
    /// Set for polynomials, whose order is 0 by definition.
    pub degenerate: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Trend {
    Increasing,
    Stable,
    Decreasing,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TypeEstimate {
    pub value: f64,
    pub halfwidth: f64,
    pub trend: Trend,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Classification {
    pub class: SymbolClass,
    /// The estimate could not be separated from a class boundary; `class` is
    /// the larger of the two candidates.
    pub boundary: bool,
    pub order: Option<OrderEstimate>,
    #[serde(rename = "type")]
    pub type_estimate: Option<TypeEstimate>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymbolTolerances {
    pub inspection_degree: usize,
    pub zero: f64,
    pub order_halfwidth: f64,
    pub max_order_stderr: f64,
    pub type_zero: f64,
}

impl Default for SymbolTolerances {
    fn default() -> Self {
        SymbolTolerances {
            inspection_degree: 64,
            zero: 1e-14,
            order_halfwidth: 0.05,
            max_order_stderr: 0.25,
            type_zero: 0.02,
        }
    }
}
