//! Symmetric multivariate wavelet frame constructions: digit sets and
//! orbits under a symmetry group, dual mask solving, framelike extensions,
//! lifting, mixed extension principle frames and unitary symmetrization.

pub mod bank;
pub mod cyclotomic;
pub mod dualmask;
pub mod examples;
pub mod framelike;
pub mod io;
pub mod frames;
pub mod error;
pub mod lattice;
pub mod lifting;
pub mod mat;
pub mod pipeline;
pub mod scalar;
pub mod solve;
pub mod symmetrize;
pub mod symmetry;
pub mod trigpoly;
pub mod verify;

pub use error::{Error, Result};
