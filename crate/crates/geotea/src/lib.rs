//! Techno-economic and environmental assessment of geothermal energy pathways.
//!
//! The crate models three deployment routes for hot sedimentary basins:
//! enhanced geothermal systems (EGS), repurposed oil and gas wells, and
//! district-scale ground-source heat pumps. For each it builds lifetime cash
//! flow series, computes levelized cost, NPV, IRR and payback, estimates
//! avoided grid emissions, and quantifies how automation-driven cost
//! reductions move those numbers. A deterministic Monte Carlo layer
//! propagates parameter uncertainty with reproducible, seed-addressed
//! substreams, and a tornado routine ranks one-at-a-time sensitivities.
//!
//! Everything is pure computation over explicit inputs: no clocks, no
//! ambient randomness, no network. Two runs with the same inputs and seed
//! produce bit-identical output regardless of thread count.

pub mod config;
pub mod distribution;
pub mod emissions;
pub mod error;
pub mod finance;
pub mod model;
pub mod pipeline;
pub mod report;
pub mod scenarios;
pub mod uncertainty;

pub use error::{Error, Result, Warning};
