//! JSON descriptors for functions on the disc and for entire symbols.
//!
//! Functions: `{"type": "power", "coeffs": [[re, im], ...]}`,
//! `{"type": "lacunary", "exponents": [...], "coeffs": [...]}` or
//! `{"type": "lacunary", "family": "besov_witness", "params": {"p": 6}}`,
//! `{"type": "binomial", "beta": x}`,
//! `{"type": "affine", "base": <function>, "scale": [re, im], "shift": [re, im]}`,
//! `{"type": "compose", "symbol": <symbol>, "inner": <function>}`.
//!
//! Symbols: `{"type": "exp" | "exp_sq" | "poly" | "series", "coeffs": [...]}`,
//! where `exp` also takes an optional `"rate": [re, im]` for `exp(rate z)`.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::lacunary::DEFAULT_K_MAX;
use crate::series::{AnalyticFunction, LacunarySeries, PowerSeries, C64};
use crate::symbols::{ClosedForm, EntireSymbol};
use crate::witnesses::WitnessFamily;

fn bad(msg: impl Into<String>) -> Error {
    Error::Descriptor(msg.into())
}

fn object(v: &Value) -> Result<&Map<String, Value>> {
    v.as_object().ok_or_else(|| bad(format!("expected an object, got {v}")))
}

fn field<'a>(m: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    m.get(key).ok_or_else(|| bad(format!("missing field {key:?}")))
}

fn number(v: &Value, what: &str) -> Result<f64> {
    v.as_f64().ok_or_else(|| bad(format!("{what} must be a number, got {v}")))
}

fn complex(v: &Value, what: &str) -> Result<C64> {
    match v {
        Value::Array(a) if a.len() == 2 => Ok(C64::new(number(&a[0], what)?, number(&a[1], what)?)),
        // a bare number is accepted as a real value
        Value::Number(_) => Ok(C64::new(number(v, what)?, 0.0)),
        _ => Err(bad(format!("{what} must be [re, im], got {v}"))),
    }
}

fn complex_list(v: &Value, what: &str) -> Result<Vec<C64>> {
    v.as_array()
        .ok_or_else(|| bad(format!("{what} must be a list")))?
        .iter()
        .map(|c| complex(c, what))
        .collect()
}

fn kind(m: &Map<String, Value>) -> Result<&str> {
    field(m, "type")?.as_str().ok_or_else(|| bad("\"type\" must be a string"))
}

pub fn parse_function(v: &Value) -> Result<AnalyticFunction> {
    let m = object(v)?;
    match kind(m)? {
        "power" => Ok(PowerSeries::new(complex_list(field(m, "coeffs")?, "coeffs")?).into()),
        "lacunary" if m.contains_key("family") => {
            let len = match m.get("len") {
                Some(l) => l.as_u64().ok_or_else(|| bad("len must be a positive integer"))? as usize,
                None => DEFAULT_K_MAX,
            };
            parse_family(m)?.build(len)
        }
        "lacunary" => {
            let exps = field(m, "exponents")?
                .as_array()
                .ok_or_else(|| bad("exponents must be a list"))?
                .iter()
                .map(|e| e.as_u64().ok_or_else(|| bad(format!("exponent {e} is not a positive integer"))))
                .collect::<Result<Vec<u64>>>()?;
            let coeffs = complex_list(field(m, "coeffs")?, "coeffs")?;
            Ok(LacunarySeries::from_terms(&exps, &coeffs, None)?.into())
        }
        "binomial" => AnalyticFunction::binomial(number(field(m, "beta")?, "beta")?),
        "affine" => Ok(AnalyticFunction::affine(
            parse_function(field(m, "base")?)?,
            complex(field(m, "scale")?, "scale")?,
            complex(field(m, "shift")?, "shift")?,
        )),
        "compose" => Ok(AnalyticFunction::compose(
            parse_symbol(field(m, "symbol")?)?,
            parse_function(field(m, "inner")?)?,
        )),
        other => Err(bad(format!("unknown function type {other:?}"))),
    }
}

fn parse_family(m: &Map<String, Value>) -> Result<WitnessFamily> {
    let name = field(m, "family")?.as_str().ok_or_else(|| bad("family must be a string"))?;
    let params = object(field(m, "params")?)?;
    let p = |key: &str| number(field(params, key)?, key);
    Ok(match name {
        "besov_witness" => WitnessFamily::Besov { p: p("p")? },
        "case1_witness" => WitnessFamily::Case1 { s: p("s")? },
        "thm8_witness" => WitnessFamily::Thm8 {
            s: p("s")?,
            a_exp: p("A")?,
        },
        "girela" | "nowak" => {
            return Err(Error::NotConstructible(format!("{name} is known only to exist")));
        }
        other => return Err(bad(format!("unknown witness family {other:?}"))),
    })
}

pub fn parse_symbol(v: &Value) -> Result<EntireSymbol> {
    let m = object(v)?;
    let coeffs = || complex_list(field(m, "coeffs")?, "coeffs");
    match kind(m)? {
        "exp" => match m.get("rate") {
            Some(r) => Ok(EntireSymbol::exp_rate(complex(r, "rate")?)),
            None => Ok(EntireSymbol::exp()),
        },
        "exp_sq" => Ok(EntireSymbol::exp_of_square()),
        "poly" => Ok(EntireSymbol::polynomial(coeffs()?)),
        "series" => Ok(EntireSymbol::custom_series(coeffs()?)),
        other => Err(bad(format!("unknown symbol type {other:?}"))),
    }
}

pub fn parse_function_str(text: &str) -> Result<AnalyticFunction> {
    parse_function(&serde_json::from_str(text).map_err(|e| bad(e.to_string()))?)
}

pub fn parse_symbol_str(text: &str) -> Result<EntireSymbol> {
    parse_symbol(&serde_json::from_str(text).map_err(|e| bad(e.to_string()))?)
}

fn pair(c: C64) -> Value {
    json!([c.re, c.im])
}

/// The family form of a witness function.
pub fn family_descriptor(family: &WitnessFamily, len: usize) -> Value {
    let params: Map<String, Value> = family.params().into_iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
    match family {
        WitnessFamily::Binomial { beta } => json!({"type": "binomial", "beta": beta}),
        _ => json!({"type": "lacunary", "family": family.name(), "params": params, "len": len}),
    }
}

const SERIES_DESCRIPTOR_TERMS: usize = 64;

fn matches_taylor(phi: &EntireSymbol, expected: impl Fn(usize) -> C64) -> bool {
    (0..8).all(|n| (phi.coefficient(n) - expected(n)).norm() <= 1e-15 * (1.0 + expected(n).norm()))
}

pub fn symbol_descriptor(phi: &EntireSymbol) -> Value {
    let factorial = |n: usize| (1..=n).map(|k| k as f64).product::<f64>();
    match phi.closed_form() {
        ClosedForm::Exp => {
            let rate = phi.coefficient(1);
            if matches_taylor(phi, |n| rate.powu(n as u32) / factorial(n)) {
                return if rate == C64::new(1.0, 0.0) {
                    json!({"type": "exp"})
                } else {
                    json!({"type": "exp", "rate": pair(rate)})
                };
            }
        }
        ClosedForm::ExpOfSquare => {
            let odd_free = |n: usize| {
                if n.is_multiple_of(2) {
                    C64::new(1.0 / factorial(n / 2), 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            };
            if matches_taylor(phi, odd_free) {
                return json!({"type": "exp_sq"});
            }
        }
        ClosedForm::Polynomial | ClosedForm::Linear | ClosedForm::Constant => {
            let deg = phi.polynomial_degree().unwrap_or(0);
            return json!({"type": "poly", "coeffs": phi.coefficients(deg).into_iter().map(pair).collect::<Vec<_>>()});
        }
        ClosedForm::CustomSeries => {}
    }
    let cs = phi.coefficients(SERIES_DESCRIPTOR_TERMS);
    json!({"type": "series", "coeffs": cs.into_iter().map(pair).collect::<Vec<_>>()})
}

/// The explicit form of a function. Gap series list the terms whose
/// exponents fit in 64 bits.
pub fn function_descriptor(f: &AnalyticFunction) -> Result<Value> {
    Ok(match f {
        AnalyticFunction::Power(p) => json!({"type": "power", "coeffs": p.coeffs.iter().map(|&c| pair(c)).collect::<Vec<_>>()}),
        AnalyticFunction::Lacunary(l) => {
            let terms: Vec<_> = l.terms().into_iter().filter(|t| t.n.is_some()).collect();
            json!({
                "type": "lacunary",
                "exponents": terms.iter().map(|t| t.n).collect::<Vec<_>>(),
                "coeffs": terms.iter().map(|t| pair(t.coefficient())).collect::<Vec<_>>(),
            })
        }
        AnalyticFunction::Binomial(b) => json!({"type": "binomial", "beta": b.beta()}),
        AnalyticFunction::Affine(a) => json!({
            "type": "affine",
            "base": function_descriptor(&a.base)?,
            "scale": pair(a.scale),
            "shift": pair(a.shift),
        }),
        AnalyticFunction::Composition(c) => json!({
            "type": "compose",
            "symbol": symbol_descriptor(&c.symbol),
            "inner": function_descriptor(&c.inner)?,
        }),
        AnalyticFunction::Product(..) | AnalyticFunction::Sum(..) => {
            return Err(Error::UnsupportedRepresentation("products and sums have no descriptor".into()))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descriptors_round_trip() {
        let src = r#"{"type":"affine","base":{"type":"compose","symbol":{"type":"exp"},
            "inner":{"type":"lacunary","exponents":[2,4,8],"coeffs":[[1,0],[0.5,0],[0.25,0]]}},
            "scale":[2,0],"shift":[0,1]}"#;
        let f = parse_function_str(src).unwrap();
        let g = parse_function(&function_descriptor(&f).unwrap()).unwrap();
        let z = C64::new(0.3, -0.4);
        assert!((f.eval(z).unwrap() - g.eval(z).unwrap()).norm() < 1e-14);
    }

    #[test]
    fn families_and_refusals() {
        let f = parse_function_str(r#"{"type":"lacunary","family":"besov_witness","params":{"p":6}}"#).unwrap();
        assert_eq!(f.as_lacunary().unwrap().len(), DEFAULT_K_MAX);
        let e = parse_function_str(r#"{"type":"lacunary","family":"girela","params":{}}"#).unwrap_err();
        assert!(matches!(e, Error::NotConstructible(_)));
        assert!(parse_function_str(r#"{"type":"spline"}"#).is_err());
        assert!(parse_function_str(r#"{"type":"power"}"#).is_err());
        assert!(parse_function_str(r#"{"type":"lacunary","exponents":[4,2],"coeffs":[1,1]}"#).is_err());
        let d = family_descriptor(&WitnessFamily::Thm8 { s: 0.8, a_exp: 2.0 }, 40);
        let g = parse_function(&d).unwrap();
        assert_eq!(g.as_lacunary().unwrap().len(), 40);
    }

    #[test]
    fn symbols() {
        let phi = parse_symbol_str(r#"{"type":"exp","rate":[0.5,0]}"#).unwrap();
        assert!((phi.eval(C64::new(2.0, 0.0)).re - 1f64.exp()).abs() < 1e-12);
        assert!(parse_symbol_str(r#"{"type":"poly"}"#).is_err());
        let p = parse_symbol_str(r#"{"type":"poly","coeffs":[[1,0],[2,0]]}"#).unwrap();
        assert_eq!(symbol_descriptor(&p), json!({"type":"poly","coeffs":[[1.0,0.0],[2.0,0.0]]}));
        assert_eq!(symbol_descriptor(&EntireSymbol::exp_of_square()), json!({"type":"exp_sq"}));
    }
}
