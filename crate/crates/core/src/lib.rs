//! Exact bijections and identity checks for four-color partitions.
//!
//! The crate is organized bottom-up:
//!
//! * [`color`], [`part`], [`order`] – the eleven colors, colored parts, the
//!   order relations `≻`, `⊳`, `≫` and the upper/lower halves of secondary parts;
//! * [`partition`] – the families `O`, `E`, `E1`, `E2`, forbidden patterns and
//!   color-product statistics;
//! * [`bressoud`] – the machines between `O` and `E1`;
//! * [`quaternary`] – the bijection between `E1` and partitions with
//!   quaternary `abcd` parts;
//! * [`enumerate`], [`corollary`] – exhaustive generators and counters;
//! * [`qseries`] – exact truncated series in `a, b, c, d, q`;
//! * [`registry`] – named checks and encoders, looked up at runtime.

pub mod bressoud;
pub mod color;
pub mod corollary;
pub mod enumerate;
pub mod error;
pub mod order;
pub mod part;
pub mod partition;
pub mod qseries;
pub mod quaternary;
pub mod registry;

pub use color::Color;
pub use error::{Error, ParseError};
pub use part::ColoredPart;
pub use partition::{CountKey, Family};
