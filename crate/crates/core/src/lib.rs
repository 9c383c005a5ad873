//! Relative divergence and subgroup distortion over Cayley graphs.

pub mod asymptotics;
pub mod atlas;
pub mod config;
pub mod divergence;
pub mod error;
pub mod group;
pub mod invariants;
pub mod recipes;
pub mod report;
pub mod rewrite;
pub mod scalar;
pub mod subgroup;

pub use error::{Error, Result};

pub type Heisenberg = group::heisenberg::HeisenbergGroup<num_bigint::BigInt>;
pub type HeisenbergI64 = group::heisenberg::HeisenbergGroup<i64>;
pub type Zd = group::zd::ZdGroup<i64>;
pub type ZdBig = group::zd::ZdGroup<num_bigint::BigInt>;
pub type Profile = asymptotics::SampledFunction<f64>;
pub type GrowthReport = asymptotics::GrowthClassReport<f64>;
