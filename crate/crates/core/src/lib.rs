//! Exact computations for hypersurfaces in products of weighted projective
//! spaces: classification of Mori dream space status, cones and Cox rings,
//! the explicit small modifications over finite fields, and the lattice
//! action on the movable cone of Calabi-Yau hypersurfaces.

pub mod classify;
pub mod cy;
pub mod error;
pub mod ff;
pub mod fflab;
pub mod lattice;
pub mod par;
pub mod sqm;
pub mod verify;
pub mod wps;

pub use error::{Error, Result};
