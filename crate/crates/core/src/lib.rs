//! Finite-field plane geometry, fair colorings, and rainbow unit-triangle search.
//!
//! The crate is organised bottom-up:
//!
//! - [`field`]: exact arithmetic in F_{p^k}, quadratic character and square roots.
//! - [`geometry`]: points of F_q^2, the distance form, unit circle, apexes and
//!   triangle enumeration.
//! - [`coloring`]: colorings of a ground set, fairness, refinement, and the two
//!   coarsening procedures.
//! - [`rainbow`]: rainbow search, monochromatic pair counts, and the end-to-end
//!   fairify/coarsen/search pipeline.
//! - [`harness`]: coloring generators, the coloring file format, and seeded
//!   experiment sweeps.

pub mod coloring;
pub mod field;
pub mod geometry;
pub mod harness;
pub mod rainbow;
