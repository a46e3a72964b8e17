//! naesat: analytic and experimental toolkit for the solution-space
//! geometry of random k-NAESAT.
//!
//! The crate has two halves that check each other:
//!
//! * an **analytic engine** ([`rate`], [`occupancy`]) evaluating the
//!   closed-form rate functions, thresholds, local-limit estimates and the
//!   second-moment pair machinery, and
//! * an **experimental engine** ([`gen`], [`enumerate`], [`space`])
//!   generating random instances and exhaustively analyzing their solution
//!   sets at desk scale: clusters, rigidity, beta-heavy counts and
//!   pair-overlap statistics.
//!
//! All randomness is pinned (see [`rng`]) so every experiment is
//! reproducible from a 64-bit seed.

pub mod cli;
pub mod enumerate;
pub mod error;
pub mod formula;
pub mod gen;
pub mod occupancy;
pub mod params;
pub mod rate;
pub mod report;
pub mod rng;
pub mod space;

pub use error::{Error, Result};
pub use formula::{Assignment, Formula, Lit, SupportProfile};
pub use params::RateParams;
