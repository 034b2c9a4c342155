//! Norms, memberships, inclusions and superposition verdicts for analytic
//! function spaces on the unit disc.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod decision;
pub mod descriptor;
pub mod error;
pub mod lacunary;
pub mod num;
pub mod quadrature;
pub mod report;
pub mod series;
pub mod suite;
pub mod symbols;
pub mod witnesses;

pub use error::{Error, Result};
pub use series::{AnalyticFunction, BinomialSingular, GapTerm, LacunarySeries, PowerSeries, C64};
pub use symbols::{EntireSymbol, SymbolClass};
