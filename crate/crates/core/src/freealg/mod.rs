//! Exact arithmetic in `K<v_1, …, v_d>`, its Laurent localisations, the tensor
//! square and cube, and reduction modulo commutators.
//!
//! Coefficients live in `Q`; every structure constant we need is rational, so this is the
//! field used throughout.

mod algebra;
mod cyclic;
mod lin;
mod word;

pub use algebra::Algebra;
pub use cyclic::{cyclic_normal_form, reduce_mod_commutators};
pub use lin::{Element, Lin, Tensor2, Tensor3};
pub use word::{GenId, Letter, Word, WordBuilder};

/// Reduced product of two words.
pub fn word_concat(a: &Word, b: &Word) -> Word {
    a.concat(b)
}
