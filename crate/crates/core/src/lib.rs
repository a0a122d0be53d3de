//! Separating Fourier and Schur multipliers at desk scale.
//!
//! Finite groups are realized through their left regular representation, so
//! the group von Neumann algebra `VN(G)` becomes a concrete `|G| x |G|`
//! matrix algebra with the normalized trace, and the Schatten classes
//! `S^p_n` are the full matrix algebras with the usual trace. On top of that
//! the crate builds Fourier multipliers `lambda(s) -> phi(s) lambda(s)`,
//! Schur multipliers `[x_ij] -> [m_ij x_ij]`, and decides whether they are
//! separating (preserve `a*b = ab* = 0`) through algebraic certificates
//! backed by randomized witness search.

pub mod classify;
pub mod cli;
pub mod error;
pub mod groups;
pub mod linalg;
pub mod sample;
pub mod schur;
pub mod suite;
pub mod vna;
pub mod wire;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, C64, DEFAULT_TOL};
