//! Space descriptors, their canonical forms and the CLI token syntax.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Tolerance for the parameter identities used by normalization, such as
/// `alpha = p - 2`.
pub const PARAM_EPS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Space {
    Hardy { p: f64 },
    Bergman { p: f64, alpha: f64 },
    DirichletType { p: f64, alpha: f64 },
    Besov { p: f64 },
    Qs { s: f64 },
    Bloch,
    Bmoa,
    Dirichlet,
    Hinf,
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= PARAM_EPS * (1.0 + a.abs().max(b.abs()))
}

impl Space {
    pub fn validate(&self) -> Result<()> {
        let ok = |c: bool, what: &str| {
            if c {
                Ok(())
            } else {
                Err(Error::param(format!("{what} in {self}")))
            }
        };
        match *self {
            Space::Hardy { p } | Space::Besov { p } if !p.is_finite() => ok(false, "p must be finite"),
            Space::Hardy { p } => ok(p > 0.0, "p must be positive"),
            Space::Besov { p } => ok(p >= 1.0, "Besov spaces need p >= 1"),
            Space::Bergman { p, alpha } | Space::DirichletType { p, alpha } => {
                ok(p > 0.0 && p.is_finite(), "p must be positive")?;
                ok(alpha > -1.0 && alpha.is_finite(), "alpha must exceed -1")
            }
            Space::Qs { s } => ok(s >= 0.0 && s.is_finite(), "s must be nonnegative"),
            Space::Bloch | Space::Bmoa | Space::Dirichlet | Space::Hinf => Ok(()),
        }
    }

    /// Canonical form under the standard identifications; a projection.
    pub fn normalize(&self) -> Result<Space> {
        self.validate()?;
        let mut cur = *self;
        loop {
            let next = cur.normalize_step();
            if next == cur {
                return Ok(cur);
            }
            cur = next;
        }
    }

    fn normalize_step(self) -> Space {
        match self {
            Space::Qs { s } if close(s, 0.0) => Space::Dirichlet,
            Space::Qs { s } if close(s, 1.0) => Space::Bmoa,
            Space::Qs { s } if s > 1.0 => Space::Bloch,
            Space::Besov { p } if close(p, 2.0) => Space::Dirichlet,
            Space::DirichletType { p, alpha } if close(p, 2.0) && close(alpha, 1.0) => Space::Hardy { p: 2.0 },
            Space::DirichletType { p, alpha } if alpha > p - 1.0 && !close(alpha, p - 1.0) => Space::Bergman { p, alpha: alpha - p },
            Space::DirichletType { p, alpha } if p > 1.0 && close(alpha, p - 2.0) => Space::Besov { p },
            other => other,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Space::Hardy { .. } => "hardy",
            Space::Bergman { .. } => "bergman",
            Space::DirichletType { .. } => "dt",
            Space::Besov { .. } => "besov",
            Space::Qs { .. } => "qs",
            Space::Bloch => "bloch",
            Space::Bmoa => "bmoa",
            Space::Dirichlet => "dirichlet",
            Space::Hinf => "hinf",
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Space::Hardy { p } => write!(f, "hardy:{p}"),
            Space::Bergman { p, alpha } => write!(f, "bergman:{p},{alpha}"),
            Space::DirichletType { p, alpha } => write!(f, "dt:{p},{alpha}"),
            Space::Besov { p } => write!(f, "besov:{p}"),
            Space::Qs { s } => write!(f, "qs:{s}"),
            other => f.write_str(other.kind()),
        }
    }
}

impl FromStr for Space {
    type Err = Error;

    fn from_str(token: &str) -> Result<Space> {
        let token = token.trim();
        let (kind, args) = token.split_once(':').unwrap_or((token, ""));
        let nums: Vec<f64> = if args.is_empty() {
            Vec::new()
        } else {
            args.split(',')
                .map(|a| {
                    let a = a.trim();
                    match a {
                        "inf" | "infinity" => Ok(f64::INFINITY),
                        _ => a.parse::<f64>().map_err(|_| Error::param(format!("bad number {a:?} in {token:?}"))),
                    }
                })
                .collect::<Result<_>>()?
        };
        let arity = |n: usize| {
            if nums.len() == n {
                Ok(())
            } else {
                Err(Error::param(format!("{kind} takes {n} parameter(s), got {:?}", token)))
            }
        };
        let space = match kind.to_ascii_lowercase().as_str() {
            "hardy" => {
                arity(1)?;
                if nums[0].is_infinite() {
                    Space::Hinf
                } else {
                    Space::Hardy { p: nums[0] }
                }
            }
            "bergman" => {
                arity(2)?;
                Space::Bergman {
                    p: nums[0],
                    alpha: nums[1],
                }
            }
            "dt" => {
                arity(2)?;
                Space::DirichletType {
                    p: nums[0],
                    alpha: nums[1],
                }
            }
            "besov" => {
                arity(1)?;
                Space::Besov { p: nums[0] }
            }
            "qs" => {
                arity(1)?;
                Space::Qs { s: nums[0] }
            }
            "bloch" => {
                arity(0)?;
                Space::Bloch
            }
            "bmoa" => {
                arity(0)?;
                Space::Bmoa
            }
            "dirichlet" => {
                arity(0)?;
                Space::Dirichlet
            }
            "hinf" => {
                arity(0)?;
                Space::Hinf
            }
            _ => return Err(Error::UnsupportedSpace(token.to_string())),
        };
        space.validate()?;
        Ok(space)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_round_trip() {
        for t in [
            "hardy:2",
            "bergman:3,-0.5",
            "dt:4,2.2",
            "besov:3",
            "qs:0.5",
            "bloch",
            "bmoa",
            "dirichlet",
            "hinf",
        ] {
            let s: Space = t.parse().unwrap();
            assert_eq!(s.to_string(), t);
        }
        assert!("qs:-1".parse::<Space>().is_err());
        assert!("bergman:2".parse::<Space>().is_err());
        assert!("sobolev:2".parse::<Space>().is_err());
    }

    #[test]
    fn canonical_forms() {
        let n = |t: &str| t.parse::<Space>().unwrap().normalize().unwrap();
        assert_eq!(n("qs:1.7"), Space::Bloch);
        assert_eq!(n("qs:1"), Space::Bmoa);
        assert_eq!(n("qs:0"), Space::Dirichlet);
        assert_eq!(n("besov:2"), Space::Dirichlet);
        assert_eq!(n("dt:2,1"), Space::Hardy { p: 2.0 });
        assert_eq!(n("dt:3,2.5"), Space::Bergman { p: 3.0, alpha: -0.5 });
        assert_eq!(n("dt:3,1"), Space::Besov { p: 3.0 });
        assert_eq!(n("dt:2,0"), Space::Dirichlet);
    }
}
