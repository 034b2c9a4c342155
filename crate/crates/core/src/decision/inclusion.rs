//! Inclusions between spaces, derived by chaining a finite list of known
//! inclusions and strict non-inclusions over a small set of nodes.

use std::collections::VecDeque;

use serde::Serialize;

use super::space::{Space, PARAM_EPS};
use crate::error::Result;
use crate::lacunary::TriState;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Inclusion {
    pub verdict: TriState,
    pub citation: String,
    /// The facts used, in order.
    pub route: Vec<String>,
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= PARAM_EPS * (1.0 + a.abs().max(b.abs()))
}

fn lt(a: f64, b: f64) -> bool {
    a < b && !close(a, b)
}

fn le(a: f64, b: f64) -> bool {
    a < b || close(a, b)
}

/// `(p, alpha)` with `f` in the space iff `f'` lies in `A^p_alpha`.
fn dt_form(x: &Space) -> Option<(f64, f64)> {
    match *x {
        Space::DirichletType { p, alpha } => Some((p, alpha)),
        Space::Bergman { p, alpha } => Some((p, alpha + p)),
        Space::Besov { p } if p > 1.0 => Some((p, p - 2.0)),
        Space::Hardy { p } if close(p, 2.0) => Some((2.0, 1.0)),
        Space::Dirichlet => Some((2.0, 0.0)),
        _ => None,
    }
}

fn besov_index(x: &Space) -> Option<f64> {
    match *x {
        Space::Besov { p } => Some(p),
        Space::Dirichlet => Some(2.0),
        _ => None,
    }
}

/// The `s` of the Q_s scale, `Q_0 = D` to `Q_1 = BMOA`.
fn q_index(x: &Space) -> Option<f64> {
    match *x {
        Space::Dirichlet => Some(0.0),
        Space::Qs { s } => Some(s),
        Space::Bmoa => Some(1.0),
        _ => None,
    }
}

/// Q_s for any s >= 0, the Bloch space included.
fn q_family(x: &Space) -> bool {
    q_index(x).is_some() || *x == Space::Bloch
}

fn hardy_p(x: &Space) -> Option<f64> {
    match *x {
        Space::Hardy { p } => Some(p),
        _ => None,
    }
}

fn on_diagonal(f: (f64, f64)) -> bool {
    close(f.1, f.0 - 1.0)
}

fn between(f: (f64, f64)) -> bool {
    lt(f.0 - 2.0, f.1) && lt(f.1, f.0 - 1.0)
}

/// A known inclusion `a ⊂ b` between canonical spaces, with its source.
fn direct(a: &Space, b: &Space) -> Option<&'static str> {
    if let (Some((p, al)), Some((q, be))) = (dt_form(a), dt_form(b)) {
        if close(p, q) && lt(al, be) {
            return Some("(1.2)");
        }
        if close(al, be) && lt(q, p) {
            return Some("(1.1)");
        }
        let grows = if le(p, q) {
            le((2.0 + al) / p, (2.0 + be) / q)
        } else {
            lt((1.0 + al) / p, (1.0 + be) / q)
        };
        if grows && !(close(p, q) && close(al, be)) {
            return Some("Thm G");
        }
    }
    if let (Some(p), Some(q)) = (hardy_p(a), hardy_p(b)) {
        if lt(q, p) {
            return Some("H^p ⊂ H^q, q < p");
        }
    }
    if let (Some(p), Some(f)) = (hardy_p(a), dt_form(b)) {
        if p > 2.0 && close(f.0, p) && on_diagonal(f) {
            return Some("(1.3)");
        }
    }
    if let (Some(f), Some(p)) = (dt_form(a), hardy_p(b)) {
        if p < 2.0 && close(f.0, p) && on_diagonal(f) {
            return Some("(1.4)");
        }
    }
    match (a, b) {
        (Space::Hinf, Space::Bmoa) => return Some("H∞ ⊂ BMOA"),
        (Space::Bmoa, Space::Hardy { .. }) => return Some("BMOA ⊂ ∩ H^p"),
        (Space::Bmoa, Space::Bloch) => return Some("BMOA ⊂ B"),
        (Space::Besov { p }, Space::Hinf) if close(*p, 1.0) => return Some("B^1 ⊂ H∞"),
        _ => {}
    }
    if let (Some(s1), Some(s2)) = (q_index(a), q_index(b)) {
        if lt(s1, s2) {
            return Some("D ⊂ Q_s1 ⊂ Q_s2 ⊂ BMOA");
        }
    }
    if let (Some(p), Some(q)) = (besov_index(a), besov_index(b)) {
        if close(p, 1.0) && q > 1.0 {
            return Some("B^1 ⊂ B^p");
        }
    }
    if let (Some(p), Space::Bmoa) = (besov_index(a), b) {
        if p > 1.0 {
            return Some("B^p ⊂ BMOA");
        }
    }
    if let (Space::Besov { p }, Space::Qs { s }) = (a, b) {
        if *p > 1.0 && *s < 1.0 && 1.0 / p > (1.0 - s) / 2.0 && !close(1.0 / p, (1.0 - s) / 2.0) {
            return Some("Prop 1");
        }
    }
    if let Some((p, al)) = dt_form(a) {
        if p > al + 2.0 && !close(p, al + 2.0) {
            if let Some(s) = q_index(b).filter(|&s| s < 1.0) {
                if lt((al + 1.0) / p, (1.0 + s) / 2.0) {
                    return Some("Prop 3");
                }
            }
            if *b == Space::Hinf {
                return Some("D^p_α ⊂ H∞, p > α+2");
            }
        }
    }
    None
}

/// A known strict non-inclusion `a ⊄ b`, with its source. Several come from
/// the constant-only verdicts through the identity symbol.
fn excluded(a: &Space, b: &Space) -> Option<&'static str> {
    let fa = dt_form(a);
    let fb = dt_form(b);
    match (a, b) {
        (Space::Bloch, Space::Bmoa) => return Some("BMOA ⊊ B"),
        (Space::Bloch, Space::Hardy { .. }) => return Some("Thm A(b)"),
        (Space::Hardy { .. }, Space::Bmoa) => return Some("Thm A(c)"),
        (Space::Hardy { .. }, Space::Bloch) => return Some("Thm A(d)"),
        _ => {}
    }
    if let Some(f) = fb {
        if *a == Space::Bloch && on_diagonal(f) {
            return Some("Thm 1(b)");
        }
        if *a == Space::Bmoa && on_diagonal(f) && f.0 < 2.0 {
            return Some("Thm 1(a)");
        }
        if *a == Space::Hinf && on_diagonal(f) && f.0 < 2.0 {
            return Some("H∞ ⊄ D^p_{p-1}, p < 2");
        }
        if *a == Space::Bloch && between(f) {
            return Some("Thm 9(a)");
        }
        if q_family(a) && lt(f.1, f.0 - 2.0) {
            return Some("Thm 6(a)");
        }
        if let (Some(s), Space::DirichletType { p, alpha }) = (q_index(a), b) {
            let edge = p * (s + 1.0) / 2.0 - 1.0;
            if between(f) && lt(*alpha, edge) {
                return Some("Thm 8(a)");
            }
            if between(f) && *p < 2.0 && close(*alpha, edge) {
                return Some("Thm 8(b)");
            }
        }
        if let Some(p) = hardy_p(a) {
            if p < 2.0 && close(f.0, p) && on_diagonal(f) {
                return Some("(1.4)");
            }
        }
    }
    if let Some(f) = fa {
        if *b == Space::Bloch && on_diagonal(f) {
            return Some("Thm 1(d)");
        }
        if *b == Space::Bloch && between(f) {
            return Some("Thm 7");
        }
        if let Some(p) = hardy_p(b) {
            if p > 2.0 && close(f.0, p) && on_diagonal(f) {
                return Some("(1.3)");
            }
        }
        if let Some(s) = q_index(b).filter(|&s| s < 1.0) {
            let (p, al) = f;
            if p > al + 2.0 && !close(p, al + 2.0) && le((1.0 + s) / 2.0, (al + 1.0) / p) {
                return Some("Prop 3");
            }
        }
    }
    if let (Space::Besov { p }, Space::Qs { s }) = (a, b) {
        if *p > 1.0 && *s < 1.0 && le(1.0 / p, (1.0 - s) / 2.0) {
            return Some("Prop 1");
        }
    }
    if q_family(a) && *b == Space::Hinf {
        return Some("Thm F");
    }
    if q_family(a) && !matches!(a, Space::Dirichlet) && besov_index(b).is_some() {
        return Some("Thm 4(c)");
    }
    if let (Some(p), Some(q)) = (besov_index(a), besov_index(b)) {
        if le(1.0, q) && lt(q, p) {
            return Some("Cor D(b)");
        }
    }
    if matches!(a, Space::Bergman { .. }) && q_family(b) {
        return Some("Thm 5(c)");
    }
    None
}

fn push(nodes: &mut Vec<Space>, s: Space) {
    if let Ok(s) = s.normalize() {
        if !nodes.contains(&s) {
            nodes.push(s);
        }
    }
}

/// The finite node set the closure runs over: both spaces and the standard
/// spaces at their parameters.
fn nodes_for(x: &Space, y: &Space) -> Vec<Space> {
    let mut nodes = Vec::new();
    push(&mut nodes, *x);
    push(&mut nodes, *y);
    for s in [Space::Hinf, Space::Bmoa, Space::Bloch, Space::Dirichlet, Space::Besov { p: 1.0 }] {
        push(&mut nodes, s);
    }
    for space in [*x, *y] {
        let p = match space {
            Space::Hardy { p } | Space::Besov { p } | Space::Bergman { p, .. } | Space::DirichletType { p, .. } => Some(p),
            _ => None,
        };
        if let Some(p) = p {
            push(&mut nodes, Space::Hardy { p });
            push(&mut nodes, Space::DirichletType { p, alpha: p - 1.0 });
            if p > 1.0 {
                push(&mut nodes, Space::Besov { p });
            }
        }
        if let Space::Qs { s } = space {
            push(&mut nodes, Space::Qs { s });
        }
    }
    nodes
}

/// Shortest chain of known inclusions from node `from`; `prev[j]` is the
/// predecessor of `j` and its fact.
fn reach(nodes: &[Space], from: usize) -> Vec<Option<(usize, &'static str)>> {
    let n = nodes.len();
    let mut prev = vec![None; n];
    let mut seen = vec![false; n];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(i) = queue.pop_front() {
        for j in 0..n {
            if !seen[j] {
                if let Some(fact) = direct(&nodes[i], &nodes[j]) {
                    seen[j] = true;
                    prev[j] = Some((i, fact));
                    queue.push_back(j);
                }
            }
        }
    }
    prev[from] = Some((from, "identity"));
    prev
}

fn chain(nodes: &[Space], prev: &[Option<(usize, &'static str)>], from: usize, to: usize) -> Vec<String> {
    let mut steps = Vec::new();
    let mut j = to;
    while j != from {
        let (i, fact) = prev[j].expect("reachable");
        steps.push(format!("{} ⊂ {}: {fact}", nodes[i], nodes[j]));
        j = i;
    }
    steps.reverse();
    steps
}

/// Whether `x ⊂ y`: IN through a chain of known inclusions, OUT when some
/// `a ⊂ x` and `y ⊂ b` with `a ⊄ b` listed, UNKNOWN otherwise.
pub fn includes(x: &Space, y: &Space) -> Result<Inclusion> {
    let x = x.normalize()?;
    let y = y.normalize()?;
    let nodes = nodes_for(&x, &y);
    let (ix, iy) = (0, nodes.iter().position(|s| *s == y).unwrap_or(0));
    let reaches: Vec<_> = (0..nodes.len()).map(|i| reach(&nodes, i)).collect();

    let inside = (reaches[ix][iy].is_some()).then(|| chain(&nodes, &reaches[ix], ix, iy));
    let mut outside = None;
    'search: for a in 0..nodes.len() {
        if reaches[a][ix].is_none() {
            continue;
        }
        for b in 0..nodes.len() {
            if reaches[iy][b].is_none() {
                continue;
            }
            if let Some(fact) = excluded(&nodes[a], &nodes[b]) {
                let mut route = chain(&nodes, &reaches[a], a, ix);
                route.push(format!("{} ⊄ {}: {fact}", nodes[a], nodes[b]));
                route.extend(chain(&nodes, &reaches[iy], iy, b));
                outside = Some(route);
                break 'search;
            }
        }
    }
    let cite = |route: &[String]| {
        let facts: Vec<&str> = route.iter().filter_map(|s| s.rsplit_once(": ").map(|(_, f)| f)).collect();
        if facts.is_empty() {
            "identity".to_string()
        } else {
            facts.join(", then ")
        }
    };
    Ok(match (inside, outside) {
        (Some(route), None) => Inclusion {
            verdict: TriState::In,
            citation: cite(&route),
            route,
        },
        (None, Some(route)) => Inclusion {
            verdict: TriState::Out,
            citation: cite(&route),
            route,
        },
        (None, None) => Inclusion {
            verdict: TriState::Unknown,
            citation: String::new(),
            route: Vec::new(),
        },
        (Some(mut route), Some(out)) => {
            route.push("conflicts with".to_string());
            route.extend(out);
            Inclusion {
                verdict: TriState::Unknown,
                citation: "conflicting facts".to_string(),
                route,
            }
        }
    })
}
