//! Space normalization, the inclusion lattice and superposition verdicts.

pub mod inclusion;
pub mod space;
pub mod table;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

pub use inclusion::{includes, Inclusion};
pub use space::{Space, PARAM_EPS};
pub use table::{VerdictClass, VerdictTable};

use crate::error::{Error, Result};
use crate::lacunary::TriState;
use crate::symbols::{Classification, EntireSymbol, SymbolClass, SymbolTolerances};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub class: VerdictClass,
    pub citation: String,
    /// Normalization steps taken before the lookup.
    pub route: Vec<String>,
    /// For OPEN verdicts, the region predicate that fired.
    pub region: Option<String>,
    #[serde(skip)]
    pub normalized: (Space, Space),
}

/// Look up `S_phi(X) ⊂ Y` in the shipped table.
pub fn superposition_class(x: &Space, y: &Space) -> Result<Verdict> {
    superposition_class_in(VerdictTable::shipped(), x, y)
}

pub fn superposition_class_in(table: &VerdictTable, x: &Space, y: &Space) -> Result<Verdict> {
    let nx = x.normalize()?;
    let ny = y.normalize()?;
    let mut route = Vec::new();
    for (from, to) in [(x, nx), (y, ny)] {
        if *from != to {
            route.push(format!("{from} = {to}"));
        }
    }
    let rows = table.matching(&nx, &ny)?;
    let row = match rows.first() {
        Some(r) => *r,
        None => return unclaimed_boundary(table, nx, ny, route),
    };
    if let Some(other) = rows.iter().find(|r| r.class != row.class) {
        return Err(Error::Table(format!(
            "lines {} and {} both cover {nx} -> {ny} with different classes",
            row.line, other.line
        )));
    }
    let region = (row.class == VerdictClass::Open).then(|| format!("{} at X = {nx}, Y = {ny}", row.predicate));
    Ok(Verdict {
        class: row.class,
        citation: row.citation.clone(),
        route,
        region,
        normalized: (nx, ny),
    })
}

/// A pair no row claims but which lies on the edge of some row's region is
/// open; anything else is outside the table.
fn unclaimed_boundary(table: &VerdictTable, nx: Space, ny: Space, route: Vec<String>) -> Result<Verdict> {
    let bordering = table.bordering(&nx, &ny)?;
    if bordering.is_empty() {
        return Err(Error::UnsupportedPair(format!("{nx} -> {ny}")));
    }
    let edges: Vec<String> = bordering.iter().map(|r| format!("{} ({})", r.predicate, r.citation)).collect();
    Ok(Verdict {
        class: VerdictClass::Open,
        citation: "unclaimed boundary".into(),
        route,
        region: Some(format!("boundary of {} at X = {nx}, Y = {ny}", edges.join(", "))),
        normalized: (nx, ny),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Answer {
    Yes,
    No,
    PaperOpen,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Decision {
    pub answer: Answer,
    pub verdict: Verdict,
    pub symbol: Classification,
}

/// Whether `S_phi(X) ⊂ Y` for this particular symbol.
pub fn decide(x: &Space, y: &Space, phi: &EntireSymbol, tol: &SymbolTolerances) -> Result<Decision> {
    let verdict = superposition_class(x, y)?;
    let symbol = phi.classify(tol)?;
    let answer = match verdict.class {
        VerdictClass::Open => Answer::PaperOpen,
        VerdictClass::Known(limit) => {
            // A boundary estimate may belong to the class just below.
            if symbol.boundary && symbol.class > limit && below(symbol.class) == Some(limit) {
                return Err(Error::Inconclusive(format!(
                    "symbol sits on the {}/{} boundary, which decides {} -> {}",
                    limit, symbol.class, verdict.normalized.0, verdict.normalized.1
                )));
            }
            if symbol.class <= limit {
                Answer::Yes
            } else {
                Answer::No
            }
        }
    };
    Ok(Decision { answer, verdict, symbol })
}

fn below(c: SymbolClass) -> Option<SymbolClass> {
    let i = SymbolClass::ALL.iter().position(|&x| x == c)?;
    i.checked_sub(1).map(|j| SymbolClass::ALL[j])
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub kind: &'static str,
    pub detail: String,
}

pub const SWEEP_POINTS: usize = 600;
const SWEEP_SEED: u64 = 0x5eed_7ab1e;

/// A pool of related spaces sharing a few parameters, so that inclusions
/// between pool members are common.
pub fn sweep_pool(rng: &mut StdRng) -> Vec<Space> {
    let p: f64 = match rng.gen_range(0..4) {
        0 => 2.0,
        1 => [1.5, 3.0, 4.0][rng.gen_range(0..3)],
        _ => rng.gen_range(0.6..6.0),
    };
    let s: f64 = if rng.gen_bool(0.2) { 0.5 } else { rng.gen_range(0.02..0.98) };
    let alpha = |rng: &mut StdRng| -> f64 {
        match rng.gen_range(0..5) {
            0 => p - 1.0,
            1 => p * (s + 1.0) / 2.0 - 1.0,
            2 => p - 2.0 + s,
            _ => rng.gen_range((p - 3.0).max(-0.95)..p),
        }
    };
    let mut pool = vec![
        Space::Hardy { p },
        Space::DirichletType { p, alpha: p - 1.0 },
        Space::Qs { s },
        Space::Bloch,
        Space::Bmoa,
        Space::Dirichlet,
        Space::Hinf,
        Space::Besov { p: 1.0 },
    ];
    for _ in 0..3 {
        let a = alpha(rng);
        if a > -1.0 {
            pool.push(Space::DirichletType { p, alpha: a });
        }
    }
    let q = rng.gen_range(1.05..6.0);
    pool.push(Space::Besov { p: q });
    pool.push(Space::Besov { p: p.max(1.0) });
    pool.push(Space::Qs {
        s: rng.gen_range(0.02..0.98),
    });
    pool.push(Space::Bergman {
        p,
        alpha: rng.gen_range(-0.9..2.0),
    });
    pool.push(Space::Hardy {
        p: rng.gen_range(0.6..6.0),
    });
    pool.retain(|s| s.validate().is_ok());
    pool
}

/// Meta-check of the shipped table over a seeded random sweep.
pub fn table_consistency() -> Vec<Violation> {
    table_consistency_of(VerdictTable::shipped(), SWEEP_POINTS, SWEEP_SEED)
}

/// Checks, over `points` random pools: rows never overlap with different
/// classes; monotonicity under inclusion of either side; and identity
/// coherence, meaning a class containing the linear symbols needs `X ⊂ Y`
/// possible while a constant-only class needs `X ⊂ Y` not derivable.
pub fn table_consistency_of(table: &VerdictTable, points: usize, seed: u64) -> Vec<Violation> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out: Vec<Violation> = Vec::new();
    let mut report = |kind: &'static str, detail: String| {
        if !out.iter().any(|v| v.detail == detail) {
            out.push(Violation { kind, detail });
        }
    };
    for _ in 0..points {
        let pool: Vec<Space> = sweep_pool(&mut rng).iter().filter_map(|s| s.normalize().ok()).collect();
        let n = pool.len();
        let mut class = vec![vec![None; n]; n];
        let mut inc = vec![vec![TriState::Unknown; n]; n];
        for i in 0..n {
            for j in 0..n {
                inc[i][j] = includes(&pool[i], &pool[j]).map(|r| r.verdict).unwrap_or(TriState::Unknown);
                match superposition_class_in(table, &pool[i], &pool[j]) {
                    Ok(v) => class[i][j] = Some(v),
                    Err(Error::UnsupportedPair(_)) => {}
                    Err(e) => report("overlap", e.to_string()),
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let Some(v) = &class[i][j] else { continue };
                let Some(c) = v.class.known() else { continue };
                let (x, y) = (&pool[i], &pool[j]);
                if c >= SymbolClass::Linear && inc[i][j] == TriState::Out {
                    report("identity", format!("{x} -> {y} is {c} by {} but {x} ⊄ {y} by includes", v.citation));
                }
                if c == SymbolClass::Constant && inc[i][j] == TriState::In {
                    report(
                        "identity",
                        format!("{x} -> {y} is constant by {} but {x} ⊂ {y} by includes", v.citation),
                    );
                }
                // X' ⊂ X and Y ⊂ Y' give class(X -> Y) ⊆ class(X' -> Y').
                for i2 in 0..n {
                    if inc[i2][i] != TriState::In {
                        continue;
                    }
                    for j2 in 0..n {
                        if inc[j][j2] != TriState::In || (i2 == i && j2 == j) {
                            continue;
                        }
                        let Some(w) = &class[i2][j2] else { continue };
                        let Some(c2) = w.class.known() else { continue };
                        if c > c2 {
                            report(
                                "monotonicity",
                                format!(
                                    "{x} -> {y} is {c} by {} but {} -> {} is only {c2} by {}",
                                    v.citation, pool[i2], pool[j2], w.citation
                                ),
                            );
                        }
                    }
                }
            }
        }
    }
    out
}
