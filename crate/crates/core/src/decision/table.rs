//! The superposition verdict table: a data file of rows, each a region
//! predicate over a canonical space pair with the class it implies.

use std::fmt;
use std::sync::OnceLock;

use serde::{Serialize, Serializer};

use super::space::{Space, PARAM_EPS};
use crate::error::{Error, Result};
use crate::symbols::SymbolClass;

/// The table shipped with the crate.
pub const SHIPPED_TABLE: &str = include_str!("../../data/verdict_table.txt");

pub const KINDS: [&str; 9] = ["hardy", "bergman", "dt", "besov", "qs", "bloch", "bmoa", "dirichlet", "hinf"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VerdictClass {
    Known(SymbolClass),
    Open,
}

impl VerdictClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            VerdictClass::Known(c) => c.as_str(),
            VerdictClass::Open => "open",
        }
    }

    pub fn parse(s: &str) -> Option<VerdictClass> {
        if s == "open" {
            Some(VerdictClass::Open)
        } else {
            SymbolClass::parse(s).map(VerdictClass::Known)
        }
    }

    pub fn known(&self) -> Option<SymbolClass> {
        match self {
            VerdictClass::Known(c) => Some(*c),
            VerdictClass::Open => None,
        }
    }
}

impl fmt::Display for VerdictClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for VerdictClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    Xp,
    Xa,
    Xs,
    Yp,
    Ya,
    Ys,
}

impl Var {
    fn parse(s: &str) -> Option<Var> {
        Some(match s {
            "xp" => Var::Xp,
            "xa" => Var::Xa,
            "xs" => Var::Xs,
            "yp" => Var::Yp,
            "ya" => Var::Ya,
            "ys" => Var::Ys,
            _ => return None,
        })
    }

    fn on_y(self) -> bool {
        matches!(self, Var::Yp | Var::Ya | Var::Ys)
    }

    /// Which parameter of a space kind the variable reads: 0 for p, 1 for alpha, 2 for s.
    fn slot(self) -> usize {
        match self {
            Var::Xp | Var::Yp => 0,
            Var::Xa | Var::Ya => 1,
            Var::Xs | Var::Ys => 2,
        }
    }
}

fn kind_has(kind: &str, slot: usize) -> bool {
    match slot {
        0 => matches!(kind, "hardy" | "bergman" | "dt" | "besov"),
        1 => matches!(kind, "bergman" | "dt"),
        _ => kind == "qs",
    }
}

fn params(space: &Space) -> [f64; 3] {
    match *space {
        Space::Hardy { p } | Space::Besov { p } => [p, f64::NAN, f64::NAN],
        Space::Bergman { p, alpha } | Space::DirichletType { p, alpha } => [p, alpha, f64::NAN],
        Space::Qs { s } => [f64::NAN, f64::NAN, s],
        _ => [f64::NAN; 3],
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(Var),
    True,
    Not(Box<Expr>),
    /// Operator token and its two operands.
    Bin(&'static str, Box<Expr>, Box<Expr>),
}

const BINARY: [&str; 11] = ["and", "or", "lt", "le", "gt", "ge", "eq", "+", "-", "*", "/"];

fn precedence(op: &str) -> u8 {
    match op {
        "or" => 1,
        "and" => 2,
        "lt" | "le" | "gt" | "ge" | "eq" => 3,
        "+" | "-" => 4,
        _ => 5,
    }
}

fn infix(op: &str) -> &str {
    match op {
        "lt" => "<",
        "le" => "<=",
        "gt" => ">",
        "ge" => ">=",
        "eq" => "==",
        other => other,
    }
}

impl Expr {
    fn fmt_in(&self, f: &mut fmt::Formatter<'_>, outer: u8) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::Var(v) => {
                let side = if v.on_y() { "Y" } else { "X" };
                write!(f, "{side}.{}", ["p", "alpha", "s"][v.slot()])
            }
            Expr::True => write!(f, "true"),
            Expr::Not(e) => {
                write!(f, "not ")?;
                e.fmt_in(f, 6)
            }
            Expr::Bin(op, a, b) => {
                let prec = precedence(op);
                let wrap = prec < outer;
                if wrap {
                    write!(f, "(")?;
                }
                a.fmt_in(f, prec)?;
                write!(f, " {} ", infix(op))?;
                // the right operand of - and / groups tighter
                b.fmt_in(f, if matches!(*op, "-" | "/") { prec + 1 } else { prec })?;
                if wrap {
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

/// Infix form with `X.p`, `Y.alpha` and so on for the variables.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_in(f, 0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Value {
    Num(f64),
    Bool(bool),
}

fn tol(a: f64, b: f64) -> f64 {
    PARAM_EPS * (1.0 + a.abs().max(b.abs()))
}

impl Expr {
    pub fn parse(text: &str) -> Result<Expr> {
        let mut tokens = text.split_whitespace();
        let e = Expr::parse_tokens(&mut tokens)?;
        if let Some(extra) = tokens.next() {
            return Err(Error::Table(format!("trailing token {extra:?} in {text:?}")));
        }
        Ok(e)
    }

    fn parse_tokens<'a>(tokens: &mut impl Iterator<Item = &'a str>) -> Result<Expr> {
        let tok = tokens.next().ok_or_else(|| Error::Table("predicate ended early".into()))?;
        if let Some(op) = BINARY.iter().find(|&&op| op == tok) {
            let a = Expr::parse_tokens(tokens)?;
            let b = Expr::parse_tokens(tokens)?;
            return Ok(Expr::Bin(op, Box::new(a), Box::new(b)));
        }
        match tok {
            "not" => Ok(Expr::Not(Box::new(Expr::parse_tokens(tokens)?))),
            "true" => Ok(Expr::True),
            _ => {
                if let Some(v) = Var::parse(tok) {
                    Ok(Expr::Var(v))
                } else {
                    tok.parse::<f64>()
                        .ok()
                        .filter(|x| x.is_finite())
                        .map(Expr::Num)
                        .ok_or_else(|| Error::Table(format!("unknown token {tok:?}")))
                }
            }
        }
    }

    /// Static check that every operand has the type its operator expects.
    fn check(&self, want_condition: bool) -> Result<()> {
        let is_condition = match self {
            Expr::Num(_) | Expr::Var(_) => false,
            Expr::True => true,
            Expr::Not(a) => {
                a.check(true)?;
                true
            }
            Expr::Bin(op, a, b) => {
                let logical = matches!(*op, "and" | "or");
                a.check(logical)?;
                b.check(logical)?;
                !matches!(*op, "+" | "-" | "*" | "/")
            }
        };
        if is_condition != want_condition {
            let want = if want_condition { "a condition" } else { "a number" };
            return Err(Error::Table(format!("expected {want} at {self:?}")));
        }
        Ok(())
    }

    fn vars(&self, out: &mut Vec<Var>) {
        match self {
            Expr::Var(v) => out.push(*v),
            Expr::Not(a) => a.vars(out),
            Expr::Bin(_, a, b) => {
                a.vars(out);
                b.vars(out);
            }
            Expr::Num(_) | Expr::True => {}
        }
    }

    fn value(&self, x: &[f64; 3], y: &[f64; 3], mode: Mode) -> Result<Value> {
        let num = |e: &Expr| match e.value(x, y, mode)? {
            Value::Num(v) => Ok(v),
            Value::Bool(_) => Err(Error::Table("expected a number, found a condition".into())),
        };
        let cond = |e: &Expr| match e.value(x, y, mode)? {
            Value::Bool(b) => Ok(b),
            Value::Num(_) => Err(Error::Table("expected a condition, found a number".into())),
        };
        Ok(match self {
            Expr::Num(v) => Value::Num(*v),
            Expr::Var(v) => Value::Num(if v.on_y() { y[v.slot()] } else { x[v.slot()] }),
            Expr::True => Value::Bool(true),
            // the closure of a complement is the complement of the interior
            Expr::Not(a) => match a.value(x, y, mode.flip())? {
                Value::Bool(b) => Value::Bool(!b),
                Value::Num(_) => return Err(Error::Table("expected a condition, found a number".into())),
            },
            Expr::Bin(op, a, b) => match *op {
                "and" => Value::Bool(cond(a)? && cond(b)?),
                "or" => Value::Bool(cond(a)? || cond(b)?),
                "+" => Value::Num(num(a)? + num(b)?),
                "-" => Value::Num(num(a)? - num(b)?),
                "*" => Value::Num(num(a)? * num(b)?),
                "/" => Value::Num(num(a)? / num(b)?),
                cmp => {
                    let (a, b) = (num(a)?, num(b)?);
                    let t = tol(a, b);
                    // Comparisons are tolerant so that eq and lt never both hold.
                    let (lt, eq) = (a < b - t, (a - b).abs() <= t);
                    let gt = !lt && !eq && a > b;
                    Value::Bool(match (mode, cmp) {
                        (Mode::Closure, "lt" | "le") | (Mode::Exact, "le") => lt || eq,
                        (Mode::Closure, "gt" | "ge") | (Mode::Exact, "ge") => gt || eq,
                        (_, "lt") | (Mode::Interior, "le") => lt,
                        (_, "gt") | (Mode::Interior, "ge") => gt,
                        (Mode::Interior, _) => false,
                        _ => eq,
                    })
                }
            },
        })
    }

    pub fn holds(&self, x: &Space, y: &Space) -> Result<bool> {
        self.holds_in(x, y, Mode::Exact)
    }

    /// True when the pair lies in the closure of the region: strict
    /// inequalities are relaxed.
    pub fn holds_on_closure(&self, x: &Space, y: &Space) -> Result<bool> {
        self.holds_in(x, y, Mode::Closure)
    }

    fn holds_in(&self, x: &Space, y: &Space, mode: Mode) -> Result<bool> {
        match self.value(&params(x), &params(y), mode)? {
            Value::Bool(b) => Ok(b),
            Value::Num(_) => Err(Error::Table("a predicate must be a condition".into())),
        }
    }
}

/// Which set a predicate is read as: the region itself, its closure or its interior.
#[derive(Clone, Copy, Debug, PartialEq)]
enum Mode {
    Exact,
    Closure,
    Interior,
}

impl Mode {
    fn flip(self) -> Mode {
        match self {
            Mode::Exact => Mode::Exact,
            Mode::Closure => Mode::Interior,
            Mode::Interior => Mode::Closure,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub x_kind: &'static str,
    pub y_kind: &'static str,
    pub class: VerdictClass,
    pub citation: String,
    pub predicate: Expr,
    /// The predicate as written in the file.
    pub source: String,
    pub line: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerdictTable {
    pub version: u32,
    pub rows: Vec<Row>,
}

fn kind(tok: &str) -> Option<&'static str> {
    KINDS.iter().copied().find(|&k| k == tok)
}

impl VerdictTable {
    pub fn parse(text: &str) -> Result<VerdictTable> {
        let mut version = None;
        let mut rows = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let at = |msg: String| Error::Table(format!("line {}: {msg}", i + 1));
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(v) = line.strip_prefix("version ") {
                version = Some(v.trim().parse().map_err(|_| at(format!("bad version {v:?}")))?);
                continue;
            }
            if version.is_none() {
                return Err(at("rows must follow a version line".into()));
            }
            let fields: Vec<&str> = line.split('|').map(str::trim).collect();
            if fields.len() != 4 {
                return Err(at("expected `X Y | class | citation | predicate`".into()));
            }
            let pair: Vec<&str> = fields[0].split_whitespace().collect();
            let (x_kind, y_kind) = match pair[..] {
                [x, y] => (
                    kind(x).ok_or_else(|| at(format!("unknown space kind {x:?}")))?,
                    kind(y).ok_or_else(|| at(format!("unknown space kind {y:?}")))?,
                ),
                _ => return Err(at("expected two space kinds".into())),
            };
            let class = VerdictClass::parse(fields[1]).ok_or_else(|| at(format!("unknown class {:?}", fields[1])))?;
            if fields[2].is_empty() {
                return Err(at("missing citation".into()));
            }
            let predicate = Expr::parse(fields[3]).map_err(|e| at(e.to_string()))?;
            predicate.check(true).map_err(|e| at(e.to_string()))?;
            let mut used = Vec::new();
            predicate.vars(&mut used);
            for v in used {
                let k = if v.on_y() { y_kind } else { x_kind };
                if !kind_has(k, v.slot()) {
                    return Err(at(format!("{v:?} is not a parameter of {k}")));
                }
            }
            rows.push(Row {
                x_kind,
                y_kind,
                class,
                citation: fields[2].to_string(),
                predicate,
                source: fields[3].to_string(),
                line: i + 1,
            });
        }
        let version = version.ok_or_else(|| Error::Table("missing version line".into()))?;
        Ok(VerdictTable { version, rows })
    }

    pub fn shipped() -> &'static VerdictTable {
        static TABLE: OnceLock<VerdictTable> = OnceLock::new();
        TABLE.get_or_init(|| VerdictTable::parse(SHIPPED_TABLE).expect("the shipped verdict table parses"))
    }

    /// The rows whose region contains the canonical pair.
    pub fn matching(&self, x: &Space, y: &Space) -> Result<Vec<&Row>> {
        let mut out = Vec::new();
        for row in &self.rows {
            if row.x_kind == x.kind() && row.y_kind == y.kind() && row.predicate.holds(x, y)? {
                out.push(row);
            }
        }
        Ok(out)
    }

    /// Rows of the same kinds whose region has the pair on its boundary.
    pub fn bordering(&self, x: &Space, y: &Space) -> Result<Vec<&Row>> {
        let mut out = Vec::new();
        for row in &self.rows {
            if row.x_kind == x.kind() && row.y_kind == y.kind() && row.predicate.holds_on_closure(x, y)? {
                out.push(row);
            }
        }
        Ok(out)
    }

    /// Replace the class of every row with the given pair of kinds and citation.
    pub fn with_class(mut self, x_kind: &str, y_kind: &str, citation: &str, class: VerdictClass) -> Self {
        for row in &mut self.rows {
            if row.x_kind == x_kind && row.y_kind == y_kind && row.citation == citation {
                row.class = class;
            }
        }
        self
    }
}
