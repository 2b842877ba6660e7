//! Numerical kernels for counting flux vacua.
//!
//! The crate has two halves that meet in the `models` module:
//!
//! * **Lattice side** — integer points of quadratic forms and convex norm
//!   bodies ([`lattice`]), and radial-projection equidistribution
//!   experiments with measured van der Corput remainders ([`equidist`]).
//! * **Geometry side** — special-geometry kernels seeded by a Yukawa
//!   tensor ([`geometry`]) and Monte-Carlo / closed-form critical-point
//!   and index densities ([`density`]).
//!
//! [`models`] wires both halves to the two exactly solvable cases: the
//! rigid model (orbit counting by divisor sums, hyperbolic
//! equidistribution) and the one-modulus model (closed-form density).
//!
//! The crate is `no_std`-compatible (`alloc` required): disable the
//! default `std` feature for embedded or wasm use. All transcendental
//! math goes through `libm` so results are bit-identical across the two
//! configurations. The optional `parallel` feature adds work-stealing
//! execution of Monte-Carlo slabs and lattice slabs; every estimator is
//! defined slab-wise with an ordered reduction, so enabling it never
//! changes results.

#![cfg_attr(not(feature = "std"), no_std)]
#![warn(missing_docs)]

extern crate alloc;

pub mod density;
pub mod equidist;
mod error;
pub mod geometry;
mod grassmann;
mod kahan;
pub mod lattice;
mod linalg;
pub mod models;
mod rng;
pub mod stats;

pub use error::{Error, Result};

/// Complex double, the scalar type of the geometry side.
pub type Complex = num_complex::Complex<f64>;
