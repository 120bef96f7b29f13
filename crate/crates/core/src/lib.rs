#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod params;
pub mod runner;
pub mod simulation;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
