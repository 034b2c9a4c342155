//! Representations of functions analytic on the unit disc.

use std::f64::consts::{LN_2, TAU};
use std::fmt;
use std::sync::{Arc, RwLock};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::num::cpow_u64;
use crate::symbols::EntireSymbol;

pub type C64 = Complex64;

/// Terms whose natural log falls below this are treated as zero.
pub(crate) const LN_UNDERFLOW: f64 = -745.0;

fn czero() -> C64 {
    C64::new(0.0, 0.0)
}

/// A finite Taylor polynomial `c_0 + c_1 z + ... + c_N z^N`.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerSeries {
    pub coeffs: Vec<C64>,
    pub entire_hint: bool,
}

impl PowerSeries {
    pub fn new(coeffs: Vec<C64>) -> Self {
        PowerSeries {
            coeffs,
            entire_hint: false,
        }
    }

    /// A polynomial that may be evaluated anywhere in the plane.
    pub fn entire(coeffs: Vec<C64>) -> Self {
        PowerSeries { coeffs, entire_hint: true }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| C64::new(c, 0.0)).collect())
    }

    pub fn monomial(n: usize, c: C64) -> Self {
        let mut coeffs = vec![czero(); n + 1];
        coeffs[n] = c;
        Self::new(coeffs)
    }

    /// Index of the last nonzero coefficient (0 for the zero polynomial).
    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|c| c.norm_sqr() > 0.0).unwrap_or(0)
    }

    pub fn horner(&self, z: C64) -> C64 {
        self.coeffs.iter().rev().fold(czero(), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> PowerSeries {
        let coeffs: Vec<C64> = if self.coeffs.len() <= 1 {
            vec![czero()]
        } else {
            self.coeffs.iter().enumerate().skip(1).map(|(n, &c)| c * n as f64).collect()
        };
        PowerSeries {
            coeffs,
            entire_hint: self.entire_hint,
        }
    }
}

/// One term `a_k z^{n_k}` of a gap series.
///
/// The modulus is split as `|a_k| = exp(ln_mag) * 2^log2_mag` so that the
/// coefficient criteria, which mix powers of two with powers of `k`, can be
/// summed without cancellation error. Exponents past `u64` keep only `log2_n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GapTerm {
    pub log2_n: f64,
    pub n: Option<u64>,
    pub ln_mag: f64,
    pub log2_mag: f64,
    pub phase: f64,
}

impl GapTerm {
    pub fn new(n: u64, a: C64) -> Self {
        let norm = a.norm();
        GapTerm {
            log2_n: (n as f64).log2(),
            n: Some(n),
            ln_mag: if norm > 0.0 { norm.ln() } else { f64::NEG_INFINITY },
            log2_mag: 0.0,
            phase: if norm > 0.0 { a.arg() } else { 0.0 },
        }
    }

    /// A positive coefficient `exp(ln_mag) * 2^log2_mag` at exponent `2^k`.
    pub fn dyadic(k: u32, ln_mag: f64, log2_mag: f64) -> Self {
        GapTerm {
            log2_n: k as f64,
            n: if k < 64 { Some(1u64 << k) } else { None },
            ln_mag,
            log2_mag,
            phase: 0.0,
        }
    }

    pub fn ln_abs(&self) -> f64 {
        self.ln_mag + self.log2_mag * LN_2
    }

    pub fn is_zero(&self) -> bool {
        self.ln_mag == f64::NEG_INFINITY
    }

    pub fn coefficient(&self) -> C64 {
        if self.is_zero() {
            return czero();
        }
        C64::from_polar(self.ln_abs().exp(), self.phase)
    }

    pub fn exponent(&self) -> f64 {
        match self.n {
            Some(n) => n as f64,
            None => self.log2_n.exp2(),
        }
    }

    /// Index `k` of the dyadic block `2^k <= n < 2^(k+1)` holding this exponent.
    pub fn block(&self) -> u32 {
        match self.n {
            Some(n) => 63 - n.leading_zeros(),
            None => self.log2_n.floor() as u32,
        }
    }
}

type TermFn = dyn Fn(usize) -> GapTerm + Send + Sync;

#[derive(Clone)]
enum TermSource {
    Explicit(Arc<[GapTerm]>),
    Generated {
        generator: Arc<TermFn>,
        cache: Arc<RwLock<Vec<GapTerm>>>,
    },
}

/// A Hadamard gap series `sum a_k z^{n_k}` with `n_{k+1}/n_k >= gap_lambda`,
/// optionally differentiated `derivative_order` times.
#[derive(Clone)]
pub struct LacunarySeries {
    source: TermSource,
    len: usize,
    gap_lambda: f64,
    derivative_order: u32,
}

impl fmt::Debug for LacunarySeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.source {
            TermSource::Explicit(_) => "explicit",
            TermSource::Generated { .. } => "generated",
        };
        f.debug_struct("LacunarySeries")
            .field("source", &kind)
            .field("len", &self.len)
            .field("gap_lambda", &self.gap_lambda)
            .field("derivative_order", &self.derivative_order)
            .finish()
    }
}

impl LacunarySeries {
    /// Builds a gap series from explicit exponents and coefficients. When
    /// `gap_lambda` is omitted the smallest consecutive ratio is used.
    pub fn from_terms(exponents: &[u64], coeffs: &[C64], gap_lambda: Option<f64>) -> Result<Self> {
        if exponents.len() != coeffs.len() {
            return Err(Error::param(format!(
                "{} exponents but {} coefficients",
                exponents.len(),
                coeffs.len()
            )));
        }
        if exponents.first() == Some(&0) {
            return Err(Error::param("gap series exponents must be positive"));
        }
        if exponents.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::param("gap series exponents must be strictly increasing"));
        }
        let min_ratio = exponents
            .windows(2)
            .map(|w| w[1] as f64 / w[0] as f64)
            .fold(f64::INFINITY, f64::min);
        let lambda = match gap_lambda {
            Some(l) => l,
            None if min_ratio.is_finite() => min_ratio,
            None => 2.0,
        };
        if !(lambda > 1.0) {
            return Err(Error::param(format!("gap lambda {lambda} must exceed 1")));
        }
        if min_ratio < lambda {
            return Err(Error::param(format!(
                "consecutive exponent ratio {min_ratio} is below the declared gap {lambda}"
            )));
        }
        let terms: Vec<GapTerm> = exponents.iter().zip(coeffs).map(|(&n, &a)| GapTerm::new(n, a)).collect();
        Ok(LacunarySeries {
            len: terms.len(),
            source: TermSource::Explicit(terms.into()),
            gap_lambda: lambda,
            derivative_order: 0,
        })
    }

    /// A lazily generated gap series; `generator(j)` yields term `j` (0-based).
    /// The generator must be deterministic and respect the declared gap.
    pub fn generated<F>(len: usize, gap_lambda: f64, generator: F) -> Self
    where
        F: Fn(usize) -> GapTerm + Send + Sync + 'static,
    {
        LacunarySeries {
            source: TermSource::Generated {
                generator: Arc::new(generator),
                cache: Arc::new(RwLock::new(Vec::new())),
            },
            len,
            gap_lambda,
            derivative_order: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn gap_lambda(&self) -> f64 {
        self.gap_lambda
    }

    pub fn derivative_order(&self) -> u32 {
        self.derivative_order
    }

    pub fn is_generated(&self) -> bool {
        matches!(self.source, TermSource::Generated { .. })
    }

    /// The same series cut (or, for generated series, extended) to `len` terms.
    pub fn with_len(&self, len: usize) -> Self {
        let len = match &self.source {
            TermSource::Explicit(t) => len.min(t.len()),
            TermSource::Generated { .. } => len,
        };
        LacunarySeries { len, ..self.clone() }
    }

    /// The series with every coefficient multiplied by `c`.
    pub fn scaled(&self, c: C64) -> Self {
        let (ln_c, arg_c) = if c.norm() > 0.0 {
            (c.norm().ln(), c.arg())
        } else {
            (f64::NEG_INFINITY, 0.0)
        };
        let rescale = move |mut t: GapTerm| {
            t.ln_mag += ln_c;
            t.phase += arg_c;
            t
        };
        let source = match &self.source {
            TermSource::Explicit(terms) => TermSource::Explicit(terms.iter().map(|&t| rescale(t)).collect::<Vec<_>>().into()),
            TermSource::Generated { generator, .. } => {
                let g = generator.clone();
                TermSource::Generated {
                    generator: Arc::new(move |j| rescale(g(j))),
                    cache: Arc::new(RwLock::new(Vec::new())),
                }
            }
        };
        LacunarySeries { source, ..self.clone() }
    }

    /// The first `len` terms, materializing and caching generated ones.
    pub fn terms(&self) -> Vec<GapTerm> {
        match &self.source {
            TermSource::Explicit(t) => t[..self.len].to_vec(),
            TermSource::Generated { generator, cache } => {
                {
                    let c = cache.read().unwrap_or_else(|e| e.into_inner());
                    if c.len() >= self.len {
                        return c[..self.len].to_vec();
                    }
                }
                let mut c = cache.write().unwrap_or_else(|e| e.into_inner());
                while c.len() < self.len {
                    let j = c.len();
                    c.push(generator(j));
                }
                c[..self.len].to_vec()
            }
        }
    }

    pub fn gap_ratio(&self) -> Result<f64> {
        let terms = self.terms();
        if terms.len() < 2 {
            return Err(Error::TooFewTerms);
        }
        Ok(terms
            .windows(2)
            .map(|w| match (w[0].n, w[1].n) {
                (Some(a), Some(b)) => b as f64 / a as f64,
                _ => (w[1].log2_n - w[0].log2_n).exp2(),
            })
            .fold(f64::INFINITY, f64::min))
    }

    /// `ln` of the falling factorial `n (n-1) ... (n-m+1)`, or `None` when it vanishes.
    fn ln_falling(&self, t: &GapTerm) -> Option<f64> {
        let m = self.derivative_order;
        match t.n {
            Some(n) if n < m as u64 => None,
            Some(n) => Some((0..m as u64).map(|i| ((n - i) as f64).ln()).sum()),
            None => Some(m as f64 * t.log2_n * LN_2),
        }
    }

    /// Coefficient of `z^{n_k - m}` and its exponent after differentiation.
    fn shifted_terms(&self) -> Vec<(Option<u64>, f64, f64, GapTerm)> {
        let m = self.derivative_order as u64;
        self.terms()
            .into_iter()
            .filter(|t| !t.is_zero())
            .filter_map(|t| {
                let lf = self.ln_falling(&t)?;
                let e = t.n.map(|n| n - m);
                let e_f = match e {
                    Some(e) => e as f64,
                    None => t.log2_n.exp2(),
                };
                Some((e, e_f, t.ln_abs() + lf, t))
            })
            .collect()
    }

    pub fn eval(&self, z: C64) -> Result<C64> {
        let r = z.norm();
        if r >= 1.0 {
            return Err(Error::Domain(format!("z = {z}")));
        }
        let mut sum = czero();
        if r == 0.0 {
            for (e, _, ln_c, t) in self.shifted_terms() {
                if e == Some(0) {
                    sum += C64::from_polar(ln_c.exp(), t.phase);
                }
            }
            return Ok(sum);
        }
        let ln_r = r.ln();
        let unit = z / r;
        for (e, e_f, ln_c, t) in self.shifted_terms() {
            let ln_val = ln_c + e_f * ln_r;
            if ln_val < LN_UNDERFLOW {
                continue;
            }
            let e = e.ok_or_else(|| huge_exponent(t.log2_n))?;
            sum += C64::from_polar(ln_val.exp(), t.phase) * unit_pow(unit, e);
        }
        Ok(sum)
    }

    /// Values at `r * roots[j]`, where `roots` are the `N`-th roots of unity.
    pub fn sample_circle(&self, r: f64, roots: &[C64]) -> Result<Vec<C64>> {
        let n = roots.len();
        let mut out = vec![czero(); n];
        let ln_r = if r > 0.0 { r.ln() } else { f64::NEG_INFINITY };
        for (e, e_f, ln_c, t) in self.shifted_terms() {
            let ln_val = if e == Some(0) { ln_c } else { ln_c + e_f * ln_r };
            if ln_val < LN_UNDERFLOW {
                continue;
            }
            let e = e.ok_or_else(|| huge_exponent(t.log2_n))?;
            let c = C64::from_polar(ln_val.exp(), t.phase);
            let step = (e % n as u64) as usize;
            let mut idx = 0usize;
            for slot in out.iter_mut() {
                *slot += c * roots[idx];
                idx += step;
                if idx >= n {
                    idx -= n;
                }
            }
        }
        Ok(out)
    }

    /// Largest exponent whose term at radius `r` is within `e^-40` of the
    /// largest term; the angular bandwidth needed to resolve the series there.
    pub fn effective_degree(&self, r: f64) -> f64 {
        let ln_r = if r > 0.0 { r.ln() } else { f64::NEG_INFINITY };
        let vals: Vec<(f64, f64)> = self
            .shifted_terms()
            .into_iter()
            .map(|(e, e_f, ln_c, _)| {
                let v = if e == Some(0) { ln_c } else { ln_c + e_f * ln_r };
                (e_f, v)
            })
            .collect();
        let top = vals.iter().map(|v| v.1).fold(f64::NEG_INFINITY, f64::max);
        vals.iter()
            .filter(|v| v.1 > top - 40.0 && v.1 > LN_UNDERFLOW)
            .map(|v| v.0)
            .fold(0.0, f64::max)
    }

    pub fn derivative(&self) -> Self {
        LacunarySeries {
            derivative_order: self.derivative_order + 1,
            ..self.clone()
        }
    }

    pub fn truncate(&self, degree: usize) -> PowerSeries {
        let mut coeffs = vec![czero(); degree + 1];
        for (e, _, ln_c, t) in self.shifted_terms() {
            if let Some(e) = e {
                if e as u128 <= degree as u128 {
                    coeffs[e as usize] += C64::from_polar(ln_c.exp(), t.phase);
                }
            }
        }
        PowerSeries::new(coeffs)
    }
}

fn huge_exponent(log2_n: f64) -> Error {
    Error::UnsupportedRepresentation(format!("term with exponent 2^{log2_n} is not negligible at this radius"))
}

/// `u^e` for |u| = 1, renormalized so the result stays on the circle.
fn unit_pow(u: C64, e: u64) -> C64 {
    let v = cpow_u64(u, e);
    let m = v.norm();
    if m > 0.0 {
        v / m
    } else {
        v
    }
}

/// `(1 - z)^(-beta)` on the principal branch.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BinomialSingular {
    beta: f64,
}

impl BinomialSingular {
    pub fn new(beta: f64) -> Result<Self> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::param(format!("binomial exponent {beta} must be positive")));
        }
        Ok(BinomialSingular { beta })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn eval(&self, z: C64) -> Result<C64> {
        if z == C64::new(1.0, 0.0) {
            return Err(Error::Branch);
        }
        if z.im == 0.0 && z.re > 1.0 {
            return Err(Error::Domain(format!("z = {z} lies on the branch cut")));
        }
        Ok(self.pow_of(C64::new(1.0, 0.0) - z))
    }

    /// Evaluation at `r e^{i theta}` computing `1 - z` without cancellation.
    pub fn eval_polar(&self, r: f64, theta: f64) -> Result<C64> {
        let (s, c) = theta.sin_cos();
        if r == 1.0 && c == 1.0 {
            return Err(Error::Branch);
        }
        let half = (0.5 * theta).sin();
        let w = C64::new((1.0 - r) + 2.0 * r * half * half, -r * s);
        if w.re < 0.0 && w.im == 0.0 {
            return Err(Error::Domain(format!("r = {r} lies on the branch cut")));
        }
        Ok(self.pow_of(w))
    }

    fn pow_of(&self, w: C64) -> C64 {
        (-self.beta * w.ln()).exp()
    }

    pub fn taylor(&self, degree: usize) -> PowerSeries {
        let mut coeffs = Vec::with_capacity(degree + 1);
        let mut c = 1.0;
        for n in 0..=degree {
            coeffs.push(C64::new(c, 0.0));
            c *= (self.beta + n as f64) / (n as f64 + 1.0);
        }
        PowerSeries::new(coeffs)
    }
}

/// `shift + scale * base`.
#[derive(Clone, Debug)]
pub struct AffineImage {
    pub base: Arc<AnalyticFunction>,
    pub scale: C64,
    pub shift: C64,
}

/// The superposition `symbol(inner(z))`.
#[derive(Clone, Debug)]
pub struct Composition {
    pub symbol: EntireSymbol,
    pub inner: Arc<AnalyticFunction>,
}

#[derive(Clone, Debug)]
pub enum AnalyticFunction {
    Power(PowerSeries),
    Lacunary(LacunarySeries),
    Binomial(BinomialSingular),
    Affine(AffineImage),
    Composition(Composition),
    /// Pointwise product; produced by the chain rule.
    Product(Arc<AnalyticFunction>, Arc<AnalyticFunction>),
    /// Pointwise sum; produced by the product rule.
    Sum(Arc<AnalyticFunction>, Arc<AnalyticFunction>),
}

impl From<PowerSeries> for AnalyticFunction {
    fn from(p: PowerSeries) -> Self {
        AnalyticFunction::Power(p)
    }
}

impl From<LacunarySeries> for AnalyticFunction {
    fn from(l: LacunarySeries) -> Self {
        AnalyticFunction::Lacunary(l)
    }
}

impl From<BinomialSingular> for AnalyticFunction {
    fn from(b: BinomialSingular) -> Self {
        AnalyticFunction::Binomial(b)
    }
}

impl From<AffineImage> for AnalyticFunction {
    fn from(a: AffineImage) -> Self {
        AnalyticFunction::Affine(a)
    }
}

impl From<Composition> for AnalyticFunction {
    fn from(c: Composition) -> Self {
        AnalyticFunction::Composition(c)
    }
}

const FFT_MIN_DEGREE: usize = 64;

/// `sum c_k r^k w_j^k` at all `N`-th roots of unity `w_j = e^(2 pi i j/N)`:
/// coefficients are folded modulo `N` and transformed in one pass.
fn sample_by_fft(p: &PowerSeries, r: f64, n: usize) -> Vec<C64> {
    use rustfft::{FftDirection, FftPlanner};
    thread_local! {
        static PLANNER: std::cell::RefCell<FftPlanner<f64>> = std::cell::RefCell::new(FftPlanner::new());
    }
    let mut buf = vec![C64::new(0.0, 0.0); n];
    let mut rk = 1.0;
    for (k, c) in p.coeffs.iter().enumerate() {
        buf[k % n] += c * rk;
        rk *= r;
    }
    let fft = PLANNER.with(|pl| pl.borrow_mut().plan_fft(n, FftDirection::Inverse));
    fft.process(&mut buf);
    buf
}

impl AnalyticFunction {
    pub fn constant(c: f64) -> Self {
        PowerSeries::from_real(&[c]).into()
    }

    pub fn monomial(n: usize) -> Self {
        PowerSeries::monomial(n, C64::new(1.0, 0.0)).into()
    }

    pub fn binomial(beta: f64) -> Result<Self> {
        Ok(BinomialSingular::new(beta)?.into())
    }

    pub fn affine(base: AnalyticFunction, scale: C64, shift: C64) -> Self {
        AffineImage {
            base: Arc::new(base),
            scale,
            shift,
        }
        .into()
    }

    pub fn compose(symbol: EntireSymbol, inner: AnalyticFunction) -> Self {
        Composition {
            symbol,
            inner: Arc::new(inner),
        }
        .into()
    }

    /// True when evaluation is allowed on and outside the unit circle.
    pub fn is_entire(&self) -> bool {
        match self {
            AnalyticFunction::Power(p) => p.entire_hint,
            AnalyticFunction::Lacunary(_) | AnalyticFunction::Binomial(_) => false,
            AnalyticFunction::Affine(a) => a.base.is_entire(),
            AnalyticFunction::Composition(c) => c.inner.is_entire(),
            AnalyticFunction::Product(a, b) | AnalyticFunction::Sum(a, b) => a.is_entire() && b.is_entire(),
        }
    }

    pub fn eval(&self, z: C64) -> Result<C64> {
        match self {
            AnalyticFunction::Power(p) => {
                if z.norm() >= 1.0 && !p.entire_hint {
                    return Err(Error::Domain(format!("z = {z}")));
                }
                Ok(p.horner(z))
            }
            AnalyticFunction::Lacunary(l) => l.eval(z),
            AnalyticFunction::Binomial(b) => b.eval(z),
            AnalyticFunction::Affine(a) => Ok(a.shift + a.scale * a.base.eval(z)?),
            AnalyticFunction::Composition(c) => Ok(c.symbol.eval(c.inner.eval(z)?)),
            AnalyticFunction::Product(a, b) => Ok(a.eval(z)? * b.eval(z)?),
            AnalyticFunction::Sum(a, b) => Ok(a.eval(z)? + b.eval(z)?),
        }
    }

    /// Evaluation at `r e^{i theta}`; avoids cancellation near `z = 1`.
    pub fn eval_polar(&self, r: f64, theta: f64) -> Result<C64> {
        match self {
            AnalyticFunction::Binomial(b) => b.eval_polar(r, theta),
            AnalyticFunction::Affine(a) => Ok(a.shift + a.scale * a.base.eval_polar(r, theta)?),
            AnalyticFunction::Composition(c) => Ok(c.symbol.eval(c.inner.eval_polar(r, theta)?)),
            AnalyticFunction::Product(a, b) => Ok(a.eval_polar(r, theta)? * b.eval_polar(r, theta)?),
            AnalyticFunction::Sum(a, b) => Ok(a.eval_polar(r, theta)? + b.eval_polar(r, theta)?),
            _ => self.eval(C64::from_polar(r, theta)),
        }
    }

    /// Values at `r * roots[j]` for the `N`-th roots of unity `roots`.
    pub fn sample_circle(&self, r: f64, roots: &[C64]) -> Result<Vec<C64>> {
        match self {
            AnalyticFunction::Power(p) => {
                if r >= 1.0 && !p.entire_hint {
                    return Err(Error::Domain(format!("|z| = {r}")));
                }
                if p.degree() < FFT_MIN_DEGREE {
                    return Ok(roots.iter().map(|&w| p.horner(w * r)).collect());
                }
                Ok(sample_by_fft(p, r, roots.len()))
            }
            AnalyticFunction::Lacunary(l) => {
                if r >= 1.0 {
                    return Err(Error::Domain(format!("|z| = {r}")));
                }
                l.sample_circle(r, roots)
            }
            AnalyticFunction::Binomial(b) => {
                let n = roots.len() as f64;
                (0..roots.len()).map(|j| b.eval_polar(r, TAU * j as f64 / n)).collect()
            }
            AnalyticFunction::Affine(a) => Ok(a.base.sample_circle(r, roots)?.into_iter().map(|v| a.shift + a.scale * v).collect()),
            AnalyticFunction::Composition(c) => Ok(c.inner.sample_circle(r, roots)?.into_iter().map(|w| c.symbol.eval(w)).collect()),
            AnalyticFunction::Product(a, b) => {
                let x = a.sample_circle(r, roots)?;
                let y = b.sample_circle(r, roots)?;
                Ok(x.into_iter().zip(y).map(|(u, v)| u * v).collect())
            }
            AnalyticFunction::Sum(a, b) => {
                let x = a.sample_circle(r, roots)?;
                let y = b.sample_circle(r, roots)?;
                Ok(x.into_iter().zip(y).map(|(u, v)| u + v).collect())
            }
        }
    }

    /// True when some part of the function is the `(1-z)^(-beta)` family, whose
    /// peak at `z = 1` needs a graded angular mesh rather than uniform samples.
    pub fn has_boundary_singularity(&self) -> bool {
        match self {
            AnalyticFunction::Binomial(_) => true,
            AnalyticFunction::Power(_) | AnalyticFunction::Lacunary(_) => false,
            AnalyticFunction::Affine(a) => a.base.has_boundary_singularity(),
            AnalyticFunction::Composition(c) => c.inner.has_boundary_singularity(),
            AnalyticFunction::Product(a, b) | AnalyticFunction::Sum(a, b) => a.has_boundary_singularity() || b.has_boundary_singularity(),
        }
    }

    /// A lower estimate of the angular frequency content on `|z| = r`, or
    /// `None` when the function is not band limited there.
    pub fn bandwidth(&self, r: f64) -> Option<f64> {
        match self {
            AnalyticFunction::Power(p) => Some(p.degree() as f64),
            AnalyticFunction::Lacunary(l) => Some(l.effective_degree(r)),
            AnalyticFunction::Binomial(_) => None,
            AnalyticFunction::Affine(a) => a.base.bandwidth(r),
            AnalyticFunction::Composition(c) => c.inner.bandwidth(r).map(|b| 4.0 * b + 16.0),
            AnalyticFunction::Product(a, b) => Some(a.bandwidth(r)? + b.bandwidth(r)?),
            AnalyticFunction::Sum(a, b) => Some(a.bandwidth(r)?.max(b.bandwidth(r)?)),
        }
    }

    pub fn derivative(&self) -> AnalyticFunction {
        match self {
            AnalyticFunction::Power(p) => p.derivative().into(),
            AnalyticFunction::Lacunary(l) => l.derivative().into(),
            AnalyticFunction::Binomial(b) => {
                let next = BinomialSingular { beta: b.beta + 1.0 };
                AnalyticFunction::affine(next.into(), C64::new(b.beta, 0.0), czero())
            }
            AnalyticFunction::Affine(a) => AnalyticFunction::affine(a.base.derivative(), a.scale, czero()),
            AnalyticFunction::Composition(c) => {
                let outer = Composition {
                    symbol: c.symbol.derivative(),
                    inner: c.inner.clone(),
                };
                AnalyticFunction::Product(Arc::new(outer.into()), Arc::new(c.inner.derivative()))
            }
            AnalyticFunction::Product(a, b) => AnalyticFunction::Sum(
                Arc::new(AnalyticFunction::Product(Arc::new(a.derivative()), b.clone())),
                Arc::new(AnalyticFunction::Product(a.clone(), Arc::new(b.derivative()))),
            ),
            AnalyticFunction::Sum(a, b) => AnalyticFunction::Sum(Arc::new(a.derivative()), Arc::new(b.derivative())),
        }
    }

    /// Taylor polynomial of degree at most `degree`.
    pub fn truncate(&self, degree: usize) -> Result<PowerSeries> {
        match self {
            AnalyticFunction::Power(p) => Ok(PowerSeries {
                coeffs: p.coeffs.iter().take(degree + 1).copied().collect(),
                entire_hint: p.entire_hint,
            }),
            AnalyticFunction::Lacunary(l) => Ok(l.truncate(degree)),
            AnalyticFunction::Binomial(b) => Ok(b.taylor(degree)),
            AnalyticFunction::Affine(a) => {
                let mut base = a.base.truncate(degree)?;
                for c in base.coeffs.iter_mut() {
                    *c *= a.scale;
                }
                if base.coeffs.is_empty() {
                    base.coeffs.push(czero());
                }
                base.coeffs[0] += a.shift;
                Ok(base)
            }
            AnalyticFunction::Composition(_) => Err(Error::UnsupportedRepresentation("compositions are evaluation-only".into())),
            AnalyticFunction::Product(a, b) => {
                let x = a.truncate(degree)?;
                let y = b.truncate(degree)?;
                let len = (x.coeffs.len() + y.coeffs.len()).saturating_sub(1).clamp(1, degree + 1);
                let mut out = vec![czero(); len];
                for (i, &u) in x.coeffs.iter().enumerate() {
                    for (j, &v) in y.coeffs.iter().enumerate() {
                        if i + j < out.len() {
                            out[i + j] += u * v;
                        }
                    }
                }
                Ok(PowerSeries {
                    coeffs: out,
                    entire_hint: x.entire_hint && y.entire_hint,
                })
            }
            AnalyticFunction::Sum(a, b) => {
                let x = a.truncate(degree)?;
                let y = b.truncate(degree)?;
                let mut out = vec![czero(); x.coeffs.len().max(y.coeffs.len())];
                for (i, &u) in x.coeffs.iter().enumerate() {
                    out[i] += u;
                }
                for (i, &v) in y.coeffs.iter().enumerate() {
                    out[i] += v;
                }
                Ok(PowerSeries {
                    coeffs: out,
                    entire_hint: x.entire_hint && y.entire_hint,
                })
            }
        }
    }

    pub fn as_lacunary(&self) -> Option<&LacunarySeries> {
        match self {
            AnalyticFunction::Lacunary(l) => Some(l),
            _ => None,
        }
    }
}
