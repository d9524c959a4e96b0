//! Exact Fourier transforms of convex polytopes, covariograms, rational
//! sphere parameterizations, Ewald-sphere diffraction intensities and
//! strong-congruence tests.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, parallel
//! drivers and the command-line tool live in the `polyft` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod congruence;
pub mod covariogram;
pub mod dd;
pub mod diffraction;
pub mod fourier;
pub mod geometry;
pub mod hypersurface;
pub mod math;

pub use geometry::{Facet, GeometryError, Halfspace, Point, Polytope, Sign, Simplex};
pub use math::Complex64;
