//! Non-Diophantine arithmetic, calculus and kinematics.
//!
//! Every arithmetic here is the ordinary field of real numbers transported
//! through a strictly increasing bijection `f`: the modules build upward from
//! the conjugated operations ([`arithmetic`]) to derivatives and integrals
//! ([`calculus`]), Minkowski geometry and light cones ([`spacetime`]), the
//! point-charge potential and its apparent velocity ([`fields`]) and the
//! matter-dominated scale factor ([`cosmology`]).

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arithmetic;
pub mod calculus;
pub mod cosmology;
pub mod error;
pub mod exec;
pub mod fields;
pub mod selftest;
pub mod spacetime;
pub mod table;

pub use arithmetic::{Bijection, BijectionKind, ContextId, CustomBijection, UpperReal};
pub use error::{Error, Result};
pub use exec::Execution;
pub use table::SeriesTable;
