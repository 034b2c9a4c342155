//! Coefficient criteria for Hadamard gap series, with the partial sums
//! classified by the same ladder machinery as the integrals.

use std::collections::BTreeMap;

use serde::ser::{Serialize, SerializeMap, Serializer};

use crate::decision::space::Space;
use crate::error::{Error, Result};
use crate::quadrature::{classify_ladder, ConvergenceReport, LadderOptions};
use crate::series::{GapTerm, LacunarySeries};

pub const DEFAULT_K_MAX: usize = 200;

/// Partial sums beyond this are treated as having left the float range and
/// the ladder is cut there.
const SUM_CEILING: f64 = 1e300;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TriState {
    In,
    Out,
    Unknown,
}

impl Serialize for TriState {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl TriState {
    pub fn as_str(&self) -> &'static str {
        match self {
            TriState::In => "in",
            TriState::Out => "out",
            TriState::Unknown => "unknown",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Criterion {
    /// `sum n_k |a_k|^p`
    Besov,
    /// `sum_k 2^(k(1-s)) sum_{n_j in I_k} |a_j|^2`
    Qs,
    /// `sum |a_k|^p / n_k^(alpha+1-p)`
    DirichletType,
    /// `sum |a_k|`, sufficient for boundedness only
    AbsSum,
    ClosedForm,
}

impl Criterion {
    pub fn as_str(&self) -> &'static str {
        match self {
            Criterion::Besov => "4.2",
            Criterion::Qs => "4.3",
            Criterion::DirichletType => "7.1",
            Criterion::AbsSum => "abs-sum",
            Criterion::ClosedForm => "closed-form",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Membership {
    pub verdict: TriState,
    pub criterion: Criterion,
    /// Partial sums `(K, S_K)` and their classification; absent for closed forms.
    pub report: Option<ConvergenceReport>,
}

impl Membership {
    fn from_report(report: ConvergenceReport, criterion: Criterion) -> Self {
        let verdict = if report.classification.converges() {
            TriState::In
        } else if report.classification.diverges() {
            TriState::Out
        } else {
            TriState::Unknown
        };
        Membership {
            verdict,
            criterion,
            report: Some(report),
        }
    }

    /// Partial sums of the criterion, in ladder order.
    pub fn partial_sums(&self) -> Vec<f64> {
        self.report
            .as_ref()
            .map(|r| r.ladder.iter().map(|e| e.1).collect())
            .unwrap_or_default()
    }
}

impl Serialize for Membership {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(3))?;
        m.serialize_entry("verdict", self.verdict.as_str())?;
        m.serialize_entry("criterion", self.criterion.as_str())?;
        m.serialize_entry("report", &self.report)?;
        m.end()
    }
}

/// Indices of the terms whose exponents fall in each dyadic block
/// `I_k = [2^k, 2^(k+1))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DyadicBlocks {
    pub blocks: BTreeMap<u32, Vec<usize>>,
}

impl DyadicBlocks {
    pub fn new(terms: &[GapTerm]) -> Self {
        let mut blocks: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for (j, t) in terms.iter().enumerate() {
            blocks.entry(t.block()).or_default().push(j);
        }
        DyadicBlocks { blocks }
    }
}

fn criterion_terms(f: &LacunarySeries, k_max: usize) -> Result<Vec<GapTerm>> {
    if f.derivative_order() > 0 {
        return Err(Error::UnsupportedRepresentation(
            "coefficient criteria apply to the gap series itself, not its derivatives".into(),
        ));
    }
    Ok(f.with_len(f.len().min(k_max)).terms())
}

/// `exp(ln) * 2^log2`, evaluated so that an exactly cancelling power of two
/// contributes no rounding.
fn term_value(ln: f64, log2: f64) -> f64 {
    if ln == f64::NEG_INFINITY {
        return 0.0;
    }
    ln.exp() * log2.exp2()
}

/// Classifies the partial sums of `terms` indexed by `index`.
/// Terms after the last one above `NEGLIGIBLE` times the total cannot move
/// the float sum; they are left off the ladder, where they would only show
/// as a flat stretch of rounding noise.
const NEGLIGIBLE: f64 = 1e-14;

/// Shortest ladder kept when trailing terms are dropped.
const MIN_RUNGS: usize = 16;

fn classify_sums(index: &[f64], terms: &[f64], opts: &LadderOptions) -> ConvergenceReport {
    let total: f64 = terms.iter().sum();
    let mut len = terms.len();
    if total.is_finite() && total > 0.0 {
        let last = terms.iter().rposition(|&v| v > NEGLIGIBLE * total).unwrap_or(0);
        len = (last + 1).max(MIN_RUNGS).min(terms.len());
    }
    let mut ladder = Vec::with_capacity(len);
    let mut acc = 0.0;
    for (&k, &v) in index.iter().zip(&terms[..len]) {
        acc += v;
        if !(acc <= SUM_CEILING) {
            break;
        }
        ladder.push((k, acc));
    }
    let t: Vec<f64> = ladder.iter().map(|e| e.0).collect();
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

fn term_index(n: usize) -> Vec<f64> {
    (1..=n).map(|k| k as f64).collect()
}

/// Criterion `sum n_k |a_k|^p < inf` for the Besov space `B^p`, `p > 1`.
pub fn besov_member(f: &LacunarySeries, p: f64, k_max: usize, opts: &LadderOptions) -> Result<Membership> {
    if !(p > 1.0) {
        return Err(Error::param(format!("Besov criterion needs p > 1, got {p}")));
    }
    let terms = criterion_terms(f, k_max)?;
    let vals: Vec<f64> = terms
        .iter()
        .map(|t| {
            if t.is_zero() {
                0.0
            } else {
                term_value(p * t.ln_mag, t.log2_n + p * t.log2_mag)
            }
        })
        .collect();
    Ok(Membership::from_report(
        classify_sums(&term_index(vals.len()), &vals, opts),
        Criterion::Besov,
    ))
}

/// Block sums `2^(k(1-s)) sum_{n_j in I_k} |a_j|^2` in block order, with the
/// block indices.
pub fn qs_block_terms(terms: &[GapTerm], s: f64) -> (Vec<f64>, Vec<f64>) {
    let blocks = DyadicBlocks::new(terms);
    let mut index = Vec::new();
    let mut vals = Vec::new();
    let (Some(&first), Some(&last)) = (blocks.blocks.keys().next(), blocks.blocks.keys().next_back()) else {
        return (index, vals);
    };
    for k in first..=last {
        index.push(k as f64);
        let Some(members) = blocks.blocks.get(&k) else {
            vals.push(0.0);
            continue;
        };
        let live: Vec<&GapTerm> = members.iter().map(|&j| &terms[j]).filter(|t| !t.is_zero()).collect();
        let v = match live.as_slice() {
            [] => 0.0,
            // a single term keeps the exact split between powers of two and the rest
            [t] => term_value(2.0 * t.ln_mag, k as f64 * (1.0 - s) + 2.0 * t.log2_mag),
            many => {
                let lns: Vec<f64> = many.iter().map(|t| 2.0 * t.ln_abs()).collect();
                let top = lns.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let sum: f64 = lns.iter().map(|l| (l - top).exp()).sum();
                term_value(top + sum.ln(), k as f64 * (1.0 - s))
            }
        };
        vals.push(v);
    }
    (index, vals)
}

/// Dyadic-block criterion for `Q_s`, `0 <= s < 1`. At `s = 0` the criterion
/// is applied to every gap series and the report says so.
pub fn qs_member(f: &LacunarySeries, s: f64, k_max: usize, opts: &LadderOptions) -> Result<Membership> {
    if !(s >= 0.0) || s >= 1.0 {
        return Err(Error::param(format!(
            "the block criterion needs 0 <= s < 1, got {s}; Q_1 and Q_s for s > 1 go through the decision engine"
        )));
    }
    let terms = criterion_terms(f, k_max)?;
    let (index, vals) = qs_block_terms(&terms, s);
    let mut report = classify_sums(&index, &vals, opts);
    if s == 0.0 {
        report
            .notes
            .push("s = 0: the block criterion is extended from the stated range 0 < s < 1".into());
    }
    Ok(Membership::from_report(report, Criterion::Qs))
}

/// Criterion `sum |a_k|^p / n_k^(alpha+1-p) < inf` for `D^p_alpha`.
pub fn dirichlet_type_member(f: &LacunarySeries, p: f64, alpha: f64, k_max: usize, opts: &LadderOptions) -> Result<Membership> {
    if !(p > 0.0) || !(alpha > -1.0) {
        return Err(Error::param(format!("need p > 0 and alpha > -1, got p = {p}, alpha = {alpha}")));
    }
    let terms = criterion_terms(f, k_max)?;
    let e = alpha + 1.0 - p;
    let vals: Vec<f64> = terms
        .iter()
        .map(|t| {
            if t.is_zero() {
                0.0
            } else {
                term_value(p * t.ln_mag, p * t.log2_mag - e * t.log2_n)
            }
        })
        .collect();
    Ok(Membership::from_report(
        classify_sums(&term_index(vals.len()), &vals, opts),
        Criterion::DirichletType,
    ))
}

/// `sum |a_k| < inf` implies boundedness; divergence decides nothing.
pub fn hinf_sufficient(f: &LacunarySeries, k_max: usize, opts: &LadderOptions) -> Result<Membership> {
    let terms = criterion_terms(f, k_max)?;
    let vals: Vec<f64> = terms.iter().map(|t| term_value(t.ln_mag, t.log2_mag)).collect();
    let mut m = Membership::from_report(classify_sums(&term_index(vals.len()), &vals, opts), Criterion::AbsSum);
    if m.verdict == TriState::Out {
        m.verdict = TriState::Unknown;
    }
    Ok(m)
}

/// Exact membership of `(1-z)^(-beta)`.
pub fn binomial_member(beta: f64, space: &Space) -> Result<Membership> {
    if !(beta > 0.0) {
        return Err(Error::param(format!("beta = {beta} must be positive")));
    }
    let inside = match space.normalize()? {
        Space::Bergman { p, alpha } => beta < (2.0 + alpha) / p,
        Space::DirichletType { p, alpha } => beta + 1.0 < (2.0 + alpha) / p,
        // B^p = D^p_{p-2} and D = D^2_0 would need beta + 1 < 1
        Space::Besov { p } if p > 1.0 => false,
        Space::Dirichlet => false,
        Space::Hardy { p } => beta * p < 1.0,
        Space::Bloch | Space::Hinf => false,
        other => return Err(Error::UnsupportedSpace(other.to_string())),
    };
    Ok(Membership {
        verdict: if inside { TriState::In } else { TriState::Out },
        criterion: Criterion::ClosedForm,
        report: None,
    })
}
