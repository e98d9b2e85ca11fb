//! Classification of derived-natural involutions on Hilbert schemes of
//! points `S^[n]` of generic polarized K3 surfaces of degree `2t`.
//!
//! All arithmetic is exact (big integers and rationals). Searches are
//! bounded and report the bound they certify.

pub mod classify;
pub mod error;
pub mod isometry;
pub mod known;
pub mod lattice;
pub mod matrix;
pub mod pell;
pub mod report;
pub(crate) mod serde_big;
pub mod stability;
pub mod walls;

pub use classify::{batch_sweep, classify, ClassificationReport, ClassifyOptions, Verdict};
pub use error::{Error, Result};
pub use lattice::{MukaiVector, Surface};
pub use pell::{solve_neg_pell, solve_pos_pell, NegPellOutcome, PellPair, PellSign};
pub use report::{render, Format};
