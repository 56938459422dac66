//! Search for John–Strömberg pairs `(τ, s)` on grid couples.
//!
//! A couple is two disjoint unions of grid cells `F+`, `F-` in `[0,1]^d`.
//! For a cube `W`, `f(W) = min(|W ∩ F+|, |W ∩ F-|) / |W|`. The crate computes
//! certified enclosures of `sup_W f(W)`, explores families of couples, and
//! assembles brackets for `σ(τ, d)`, the best `s` that every couple meeting the
//! volume condition for `τ` must achieve.
//!
//! All arithmetic that feeds a reported bound is exact.

pub mod error;
pub mod rational;
pub mod surd;
pub mod geometry;
pub mod objective;
pub mod builtin;
pub mod optimizer;
pub mod bounds;
pub mod explorer;
pub mod manifest;
pub mod cli;

pub use error::{Error, Result};
pub use geometry::{CoupleConfig, Cube, GridSet, GridSpec};
pub use objective::ConditionMode;
pub use optimizer::{optimize_certified, CertifiedValue};
pub use rational::Rational;
pub use surd::QuadSurd;
