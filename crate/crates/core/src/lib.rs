//! Bending maps of finite measured geodesic laminations from H² into H³,
//! together with quasi-isometry certificates, punctured-torus approximations
//! and grafting models.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bending;
pub mod cli;
pub mod error;
pub mod grafting;
pub mod hyperbolic;
pub mod lamination;
pub mod precision;
pub mod surface;

pub use error::{Error, Result};
