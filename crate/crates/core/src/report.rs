//! Deterministic report output: JSON with every float written to 17
//! significant digits, `key = value` configuration, and plot data files.

use std::io;
use std::path::Path;

use serde::Serialize;
use serde_json::ser::{Formatter, Serializer};

use crate::error::{Error, Result};
use crate::quadrature::{dyadic_ladder, QuadratureConfig, RadialRule};
use crate::symbols::SymbolTolerances;

struct SigDigits;

impl Formatter for SigDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }
}

/// Compact JSON; floats as `d.dddddddddddddddde±x`, non-finite floats as `null`.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = Serializer::with_formatter(&mut out, SigDigits);
    value.serialize(&mut ser).expect("serializing to memory cannot fail");
    String::from_utf8(out).expect("JSON output is UTF-8")
}

/// Two-column `r value` text, one rung per line.
pub fn plot_data(ladder: &[(f64, f64)]) -> String {
    ladder.iter().map(|(r, v)| format!("{r:.16e} {v:.16e}\n")).collect()
}

pub fn write_plot(path: &Path, ladder: &[(f64, f64)]) -> Result<()> {
    std::fs::write(path, plot_data(ladder)).map_err(|e| Error::param(format!("writing {}: {e}", path.display())))
}

/// Numerical settings shared by the subcommands.
#[derive(Clone, Debug, PartialEq)]
pub struct Settings {
    pub quadrature: QuadratureConfig,
    pub k_max: usize,
    pub symbol: SymbolTolerances,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            quadrature: QuadratureConfig::default(),
            k_max: crate::lacunary::DEFAULT_K_MAX,
            symbol: SymbolTolerances::default(),
        }
    }
}

impl Settings {
    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = || Error::param(format!("bad value {value:?} for {key}"));
        let float = || value.parse::<f64>().map_err(|_| bad());
        let count = || value.parse::<usize>().map_err(|_| bad());
        let q = &mut self.quadrature;
        match key {
            "angular_samples" => q.angular_samples = count()?,
            "max_angular_samples" => q.max_angular_samples = count()?,
            "ladder_depth" => q.radius_ladder = dyadic_ladder(value.parse::<u32>().map_err(|_| bad())?),
            "tolerance" => q.tolerance = float()?,
            "residual_factor" => q.residual_factor = float()?,
            "radial_rule" => {
                q.radial_rule = match value {
                    "gauss" => RadialRule::CompositeGauss { panels: 2, order: 12 },
                    "tanh_sinh" => RadialRule::TanhSinh { level: 6 },
                    _ => return Err(bad()),
                }
            }
            "a_grid" => {
                q.a_grid = match value {
                    "default" => crate::quadrature::default_a_grid(),
                    "origin" => vec![crate::C64::new(0.0, 0.0)],
                    _ => return Err(bad()),
                }
            }
            "k_max" => self.k_max = count()?,
            "inspection_degree" => self.symbol.inspection_degree = count()?,
            "zero_tolerance" => self.symbol.zero = float()?,
            "order_halfwidth" => self.symbol.order_halfwidth = float()?,
            "max_order_stderr" => self.symbol.max_order_stderr = float()?,
            "type_zero" => self.symbol.type_zero = float()?,
            _ => return Err(Error::param(format!("unknown setting {key:?}"))),
        }
        Ok(())
    }

    /// Reads `key = value` lines; `#` starts a comment.
    pub fn apply_config(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::param(format!("config line {}: expected key = value", i + 1)))?;
            self.set(k.trim(), v.trim())?;
        }
        self.quadrature.validate()?;
        if self.k_max < 2 {
            return Err(Error::param("k_max must be at least 2"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_have_seventeen_digits() {
        let s = to_json(&serde_json::json!({"a": 0.1, "b": [1.0, f64::NAN], "c": 3}));
        assert_eq!(s, r#"{"a":1.0000000000000001e-1,"b":[1.0000000000000000e0,null],"c":3}"#);
        let back: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["a"].as_f64(), Some(0.1));
    }

    #[test]
    fn config_lines() {
        let mut s = Settings::default();
        s.apply_config("# comment\nladder_depth = 10\nk_max=50 # trailing\n\na_grid = origin")
            .unwrap();
        assert_eq!(s.quadrature.radius_ladder.len(), 10);
        assert_eq!(s.k_max, 50);
        assert_eq!(s.quadrature.a_grid.len(), 1);
        assert!(s.clone().apply_config("colour = blue").is_err());
        assert!(s.clone().apply_config("k_max").is_err());
        assert!(s.apply_config("ladder_depth = 2").is_err());
    }

    #[test]
    fn plot_rows() {
        assert_eq!(plot_data(&[(0.5, 2.0)]), "5.0000000000000000e-1 2.0000000000000000e0\n");
    }
}
