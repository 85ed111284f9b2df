//! Normal forms in `H_0(A) = A/[A,A]`.
//!
//! Two monomials agree modulo commutators exactly when they are cyclic
//! rotations of each other. For Laurent words a rotation can expose a
//! cancelable pair at the seam (`x u x^-1 ~ u`), so words are first cyclically
//! reduced and then rotated to the least representative.

use super::lin::Element;
use super::word::{LetterBuf, Word};

/// Least rotation (in word order) of the cyclic reduction of `w`.
pub fn cyclic_normal_form(w: &Word) -> Word {
    let letters = w.letters();
    let (mut lo, mut hi) = (0usize, letters.len());
    while hi - lo >= 2 && letters[lo] == letters[hi - 1].inverse() {
        lo += 1;
        hi -= 1;
    }
    let core = &letters[lo..hi];
    let n = core.len();
    if n <= 1 {
        return Word::from_reduced_buf(core.iter().copied().collect());
    }
    let mut best = 0usize;
    for k in 1..n {
        if rotation_less(core, k, best) {
            best = k;
        }
    }
    let mut out = LetterBuf::with_capacity(n);
    out.extend_from_slice(&core[best..]);
    out.extend_from_slice(&core[..best]);
    Word::from_reduced_buf(out)
}

fn rotation_less(s: &[crate::freealg::Letter], a: usize, b: usize) -> bool {
    let n = s.len();
    for i in 0..n {
        let x = s[(a + i) % n];
        let y = s[(b + i) % n];
        if x != y {
            return x < y;
        }
    }
    false
}

/// Canonical representative of the class of `x` in `H_0(A)`; zero exactly
/// when `x ∈ [A,A]`.
pub fn reduce_mod_commutators(x: &Element) -> Element {
    x.map_keys(cyclic_normal_form)
}
