//! Exact q-series, continued fractions and identity verification.

pub mod catalog;
pub mod cfrac;
pub mod euler;
pub mod qseries;
pub mod rational;

pub use rational::Rational;
