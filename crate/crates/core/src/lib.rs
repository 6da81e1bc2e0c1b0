//! Joints of lines over prime fields and the rationals.
//!
//! A joint of a collection of lines in `F^n` is a point where some `n` of the
//! lines meet with linearly independent directions. This crate computes joints
//! and their multiplicities exactly, builds the standard extremal
//! configurations, and runs the polynomial-method procedures (vanishing
//! polynomials, peeling, choosing, random sampling) with every bound checked.

pub mod algorithms;
pub mod field;
pub mod generators;
pub mod geometry;
pub mod interpolation;
pub mod io;
pub mod linalg;
pub mod polynomial;

pub use algorithms::{
    choose, extract_light_line, peel, run_greedy_choice, sample_survival, slope_partition_choice,
    theorem1_bound, theorem2_bound, AlgorithmError,
};
pub use field::{FieldElement, FieldSpec};
pub use generators::{ConfigSpec, Family};
pub use geometry::{is_generic, joints, multiplicity, JointRecord, Line, LineCollection, Point};
pub use interpolation::{dstar, minimal_vanishing_polynomial, vanishing_polynomial};
pub use polynomial::{MultivariatePolynomial, UnivariatePolynomial};
