//! Exact double-bracket calculus on free associative algebras and their
//! Laurent localisations.

pub mod axioms;
pub mod bracket;
pub mod classify;
pub mod error;
pub mod freealg;
pub mod localize;
pub mod repspace;
pub mod scalar;
pub mod speclang;

pub use bracket::{BracketSpec, MixedType, WeightVector};
pub use error::{Error, Result};
pub use scalar::Q;
