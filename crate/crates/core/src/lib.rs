//! A small formal-power-series laboratory for partitions with distinct even
//! parts, ped(n).
//!
//! - [`series`]: truncated power series over exact integers or residues.
//! - [`eta`] / [`theta`]: Pochhammer products, eta quotients, theta series.
//! - [`partitions`]: knapsack-DP oracle for ped(n) and congruence claims.
//! - [`dissection`]: the mod-24 congruences replayed as checkable identities.
//!
//! Data-parallel loops go through [`Execution`]; disable the default
//! `parallel` feature for a purely sequential build.

pub mod dissection;
pub mod eta;
pub mod exec;
pub mod partitions;
pub mod series;
pub mod theta;

pub use exec::Execution;
pub use series::{Coeff, Domain, ModInt, Series, SeriesError};
