//! Constructions and verifiers for integer relative Heffter arrays, signed
//! magic arrays and magic rectangles.
//!
//! The entry points are [`construct_heffter`], [`construct_sma`] and
//! [`construct_mr`]; every result can be checked with the exact verifiers
//! in [`verify`]. Small instances can also be searched for directly with
//! the backtracking routines in [`oracle`].

pub mod assembly;
pub mod blocks;
pub mod dispatch;
pub mod error;
pub mod grid;
pub mod io;
pub mod nice_pairs;
pub mod oracle;
pub mod params;
pub mod s0k0;
pub mod verify;

pub use dispatch::{construct_heffter, construct_mr, construct_sma, mr_from_sma};
pub use error::{Error, Result};
pub use grid::Grid;
pub use oracle::{SearchBudget, SearchOutcome};
pub use params::HeffterParams;
