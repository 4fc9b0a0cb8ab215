//! Optimal compactly supported radial bump functions for wide shallow ReLU
//! networks: minimax nodes, moment-cancelling measures, radial profiles,
//! their norms and the bounds that govern them.

pub mod analysis;
pub mod cli;
mod dd;
pub mod error;
pub mod fmt;
mod linalg;
pub mod moments;
pub mod plot;
pub mod polyapprox;
pub mod profile;
pub mod quad;
pub mod verify;

pub use error::{Error, Result};
pub use moments::{gamma_norm, solve_moment_system, verify_moments, DiscreteMeasure};
pub use polyapprox::{remez_sqrt, MinimaxPoly, NodeScheme, NodeSet};
pub use profile::{build_f, build_g, ProfileG, RadialBump};
pub use quad::QuadConfig;
