//! Exact analysis of discrete-time linear systems `x_{t+1} = A x_t` viewed
//! as representations of time groups acting on vector spaces.
//!
//! The crate provides exact arithmetic over prime fields, extension fields,
//! and the rationals; polynomial factorization; Smith normal form of
//! `xI - A`; primary and invariant-factor decompositions of the state
//! space; periods and complete orbit censuses over finite fields; and a
//! deterministic JSON reporting layer shared by the CLI and the C API.

pub mod canonical;
pub mod decomp;
pub mod document;
pub mod dynamics;
pub mod error;
pub mod factor;
pub mod field;
pub mod intnum;
pub mod matrix;
pub mod poly;
pub mod prng;
pub mod rep;
pub mod report;
pub mod smith;

pub use error::{Error, ErrorCategory, Result};
pub use field::{Field, FieldElement};
pub use matrix::Matrix;
pub use poly::Polynomial;
pub use rep::{Representation, TimeGroup};
