//! Quantization of rigid-motion groups into finite alphabets.
//!
//! Rotations, planar and spatial motions are partitioned into cells of a
//! double-coset decomposition `Γ\G/Δ`; each cell is named by a two-letter
//! word `(γ, δ)`. The crate builds the groups and fundamental domains,
//! decodes poses into words with brute-force and coarse-to-fine searches,
//! and turns trajectories into sentences.

pub mod bench;
pub mod codec;
pub mod crystal;
pub mod decode;
pub mod domains;
pub mod error;
pub mod export;
pub mod groups;
pub mod lie;
pub mod tol;

pub use error::{Error, Result};
