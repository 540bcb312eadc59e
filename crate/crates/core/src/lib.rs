//! Rank-metric coding toolkit built around λ-Gabidulin codes and their
//! `F_q`-linear subcodes.
//!
//! The crate provides exact arithmetic in the tower `F_p ⊆ F_q ⊆ F_{q^m}`,
//! dense linear algebra over `F_q`, linearized-polynomial (q-polynomial)
//! arithmetic, Gabidulin and λ-Gabidulin encoders/decoders, subcode
//! constructions, stabilizer/annihilator algebra computations, the
//! LGS-McEliece and LGS-Niederreiter encryption schemes, a MinRank
//! attack-cost estimator, and executable structural experiments
//! (stabilizer census, generator completion, Overbeck-like statistic).

pub mod error;
pub mod estimator;
pub mod experiments;
pub mod extmat;
pub mod field;
pub mod fq;
pub mod gabidulin;
pub mod linalg;
pub mod qpoly;
pub mod registry;
pub mod rng;
pub mod schemes;
pub mod stab;
pub mod subcodes;

pub use error::{Error, Result};
