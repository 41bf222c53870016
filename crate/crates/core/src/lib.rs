//! Exact-arithmetic laboratory for b_v(s)-metric spaces.
//!
//! A b_v(s)-metric relaxes the triangle inequality to a polygon inequality
//! through any v distinct interior points with a stretch factor s >= 1
//! (v = 1, s = 1 recovers ordinary metrics, v = 1 recovers b-metrics, v = 2
//! with s = 1 rectangular metrics). This crate verifies the axioms on
//! finite distance tables, computes exact minimal stretch constants, checks
//! the classical strict contractive conditions (plain, Reich, Ciric-max,
//! Kannan), runs Picard iteration with its standard step-distance diagnostics including a
//! Suzuki-type asymptotic-uniformity probe, and constructs the fixed-point-
//! free escape map that witnesses incompleteness from a non-convergent
//! Cauchy sequence.
//!
//! Everything is exact rational arithmetic; there is no floating point and
//! no tolerance anywhere.

pub mod axiom;
pub mod cli;
pub mod completeness;
pub mod contraction;
pub mod corpus;
pub mod dsl;
pub mod picard;
pub mod scalar;
pub mod space;

pub use scalar::Scalar;
pub use space::{FiniteSpace, GeneratedSpace, Point, Selector, SelfMap, Space, SpaceError};
