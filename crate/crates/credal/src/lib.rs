//! A calculus engine for sublinear expectations over finite outcome spaces.
//!
//! The engine represents sublinear expectations by finitely generated credal
//! sets (polytopes of probability measures), evaluates them as maxima of
//! linear expectations, forms nested product laws in both orders, and
//! certifies or refutes independence and maximality through exact polytope
//! geometry. A randomized harness verifies at desk scale that mutual
//! independence of two non-trivial random variables forces both to be
//! maximally distributed.
//!
//! Certifying operations run on exact rationals ([`scalar::Rat`]); probes may
//! run on `f64` with absolute tolerances. The `parallel` feature (default)
//! fans data-parallel loops out over rayon with a sequential fallback; both
//! paths produce identical output.

pub mod error;
pub mod harness;
pub mod hull;
pub mod independence;
pub mod json;
pub mod maximality;
pub mod measure;
pub mod par;
pub mod polytope;
pub mod rng;
pub mod scalar;
pub mod space;

pub use error::{Error, Result};
pub use scalar::{Mode, Rat, Scalar};
