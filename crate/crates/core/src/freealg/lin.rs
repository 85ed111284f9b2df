use std::collections::hash_map::Entry;
use std::fmt;
use std::hash::Hash;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use rustc_hash::FxHashMap;

use super::word::{Word, WordBuilder};
use crate::scalar::Q;

/// A finite linear combination of basis keys with exact coefficients.
///
/// Zero coefficients are never stored, so the empty map is the canonical zero
/// and structural equality is numeric equality. Iteration through
/// [`Lin::sorted`] follows the key order.
#[derive(Clone, PartialEq, Eq)]
pub struct Lin<K: Eq + Hash> {
    terms: FxHashMap<K, Q>,
}

/// An element of the (possibly localised) free algebra.
pub type Element = Lin<Word>;
/// An element of `A ⊗ A`.
pub type Tensor2 = Lin<(Word, Word)>;
/// An element of `A ⊗ A ⊗ A`.
pub type Tensor3 = Lin<(Word, Word, Word)>;

impl<K: Clone + Eq + Hash + Ord> Lin<K> {
    pub fn zero() -> Self {
        Lin { terms: FxHashMap::default() }
    }

    pub fn term(key: K, c: Q) -> Self {
        let mut out = Self::zero();
        out.add_term(key, c);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, key: &K) -> Q {
        self.terms.get(key).cloned().unwrap_or_default()
    }

    #[inline]
    pub fn add_term(&mut self, key: K, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
            Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Self, c: &Q) {
        if c.is_zero() {
            return;
        }
        for (k, v) in &other.terms {
            self.add_term(k.clone(), v * c);
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Lin { terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect() }
    }

    /// Unordered iteration; use [`Lin::sorted`] where order is observable.
    pub fn iter(&self) -> impl Iterator<Item = (&K, &Q)> {
        self.terms.iter()
    }

    /// Terms in canonical key order.
    pub fn sorted(&self) -> Vec<(&K, &Q)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_unstable_by(|a, b| a.0.cmp(b.0));
        v
    }

    /// Maps every key through `f`, re-collecting equal images.
    pub fn map_keys<K2, F>(&self, mut f: F) -> Lin<K2>
    where
        K2: Clone + Eq + Hash + Ord,
        F: FnMut(&K) -> K2,
    {
        let mut out = Lin::zero();
        for (k, v) in &self.terms {
            out.add_term(f(k), v.clone());
        }
        out
    }

    /// Bilinear product driven by a key-level product.
    pub fn bilinear<K2, K3, F>(&self, other: &Lin<K2>, mut f: F) -> Lin<K3>
    where
        K2: Clone + Eq + Hash + Ord,
        K3: Clone + Eq + Hash + Ord,
        F: FnMut(&K, &K2) -> K3,
    {
        let mut out = Lin::zero();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                out.add_term(f(k1, k2), c1 * c2);
            }
        }
        out
    }
}

impl<K: Clone + Eq + Hash + Ord> Default for Lin<K> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<K: Clone + Eq + Hash + Ord> FromIterator<(K, Q)> for Lin<K> {
    fn from_iter<I: IntoIterator<Item = (K, Q)>>(iter: I) -> Self {
        let mut out = Self::zero();
        for (k, c) in iter {
            out.add_term(k, c);
        }
        out
    }
}

impl<K: Clone + Eq + Hash + Ord> AddAssign<&Lin<K>> for Lin<K> {
    fn add_assign(&mut self, rhs: &Lin<K>) {
        for (k, v) in &rhs.terms {
            self.add_term(k.clone(), v.clone());
        }
    }
}

impl<K: Clone + Eq + Hash + Ord> SubAssign<&Lin<K>> for Lin<K> {
    fn sub_assign(&mut self, rhs: &Lin<K>) {
        for (k, v) in &rhs.terms {
            self.add_term(k.clone(), -v);
        }
    }
}

impl<K: Clone + Eq + Hash + Ord> Add for &Lin<K> {
    type Output = Lin<K>;
    fn add(self, rhs: &Lin<K>) -> Lin<K> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<K: Clone + Eq + Hash + Ord> Sub for &Lin<K> {
    type Output = Lin<K>;
    fn sub(self, rhs: &Lin<K>) -> Lin<K> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<K: Clone + Eq + Hash + Ord> Add for Lin<K> {
    type Output = Lin<K>;
    fn add(mut self, rhs: Lin<K>) -> Lin<K> {
        self += &rhs;
        self
    }
}

impl<K: Clone + Eq + Hash + Ord> Sub for Lin<K> {
    type Output = Lin<K>;
    fn sub(mut self, rhs: Lin<K>) -> Lin<K> {
        self -= &rhs;
        self
    }
}

impl<K: Clone + Eq + Hash + Ord> Neg for &Lin<K> {
    type Output = Lin<K>;
    fn neg(self) -> Lin<K> {
        Lin { terms: self.terms.iter().map(|(k, v)| (k.clone(), -v)).collect() }
    }
}

impl<K: Clone + Eq + Hash + Ord> Neg for Lin<K> {
    type Output = Lin<K>;
    fn neg(self) -> Lin<K> {
        -&self
    }
}

impl<K: Clone + Eq + Hash + Ord + fmt::Debug> fmt::Debug for Lin<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.sorted() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}*{k:?}")?;
        }
        Ok(())
    }
}

#[inline]
fn cat(parts: &[&Word]) -> Word {
    let mut b = WordBuilder::with_capacity(parts.iter().map(|w| w.degree()).sum());
    for w in parts {
        b.extend(w.letters());
    }
    b.finish()
}

impl Element {
    pub fn one() -> Self {
        Element::term(Word::one(), Q::one())
    }

    pub fn scalar(c: Q) -> Self {
        Element::term(Word::one(), c)
    }

    pub fn word(w: Word) -> Self {
        Element::term(w, Q::one())
    }

    pub fn mul(&self, other: &Element) -> Element {
        self.bilinear(other, |a, b| a.concat(b))
    }

    /// Largest word degree, `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.iter().map(|(w, _)| w.degree()).max()
    }

    /// `c ⊗ 1`-style embeddings used by the bimodule actions.
    pub fn tensor(&self, other: &Element) -> Tensor2 {
        self.bilinear(other, |a, b| (a.clone(), b.clone()))
    }
}

impl Tensor2 {
    pub fn pure(a: Word, b: Word, c: Q) -> Self {
        Tensor2::term((a, b), c)
    }

    /// Factorwise product `(a'⊗a'')(b'⊗b'') = a'b' ⊗ a''b''`.
    pub fn t2_mul(&self, other: &Tensor2) -> Tensor2 {
        self.bilinear(other, |(a1, a2), (b1, b2)| (a1.concat(b1), a2.concat(b2)))
    }

    /// Outer bimodule action `c1 · u · c2 = (c1⊗1) u (1⊗c2)`.
    pub fn outer_act(c1: &Element, u: &Tensor2, c2: &Element) -> Tensor2 {
        let mut out = Tensor2::zero();
        for (w1, k1) in c1.iter() {
            for ((x, y), k) in u.iter() {
                let k1k = k1 * k;
                for (w2, k2) in c2.iter() {
                    out.add_term((w1.concat(x), y.concat(w2)), &k1k * k2);
                }
            }
        }
        out
    }

    /// Inner bimodule action `c1 ∗ u ∗ c2 = (1⊗c1) u (c2⊗1)`.
    pub fn inner_act(c1: &Element, u: &Tensor2, c2: &Element) -> Tensor2 {
        let mut out = Tensor2::zero();
        for (w1, k1) in c1.iter() {
            for ((x, y), k) in u.iter() {
                let k1k = k1 * k;
                for (w2, k2) in c2.iter() {
                    out.add_term((x.concat(w2), w1.concat(y)), &k1k * k2);
                }
            }
        }
        out
    }

    /// Swap of tensor factors, written `(−)°`.
    pub fn flip(&self) -> Tensor2 {
        self.map_keys(|(a, b)| (b.clone(), a.clone()))
    }

    /// `(a⊗b) ⊗₁ c = a⊗c⊗b`.
    pub fn otimes1_left(&self, c: &Element) -> Tensor3 {
        let mut out = Tensor3::zero();
        for ((a, b), k) in self.iter() {
            for (w, kc) in c.iter() {
                out.add_term((a.clone(), w.clone(), b.clone()), k * kc);
            }
        }
        out
    }

    /// `c ⊗₁ (a⊗b) = a⊗c⊗b`.
    pub fn otimes1_right(c: &Element, u: &Tensor2) -> Tensor3 {
        u.otimes1_left(c)
    }

    /// Multiplication map `a'⊗a'' ↦ a'a''`.
    pub fn m2(&self) -> Element {
        self.map_keys(|(a, b)| a.concat(b))
    }

    /// `u ⊗ c` as an element of `A^{⊗3}`.
    pub fn tensor_right(&self, c: &Element) -> Tensor3 {
        self.bilinear(c, |(a, b), w| (a.clone(), b.clone(), w.clone()))
    }

    /// `c ⊗ u` as an element of `A^{⊗3}`.
    pub fn tensor_left(c: &Element, u: &Tensor2) -> Tensor3 {
        c.bilinear(u, |w, (a, b)| (w.clone(), a.clone(), b.clone()))
    }
}

impl Tensor3 {
    /// Factorwise product in `A^{⊗3}`.
    pub fn t3_mul(&self, other: &Tensor3) -> Tensor3 {
        self.bilinear(other, |(a1, a2, a3), (b1, b2, b3)| {
            (a1.concat(b1), a2.concat(b2), a3.concat(b3))
        })
    }

    /// `a1⊗a2⊗a3 ↦ a1 a2 a3`.
    pub fn m3(&self) -> Element {
        self.map_keys(|(a, b, c)| cat(&[a, b, c]))
    }

    /// Embeds three elements as `x⊗y⊗z`, used for the one-sided factors of
    /// the derivation laws.
    pub fn pure3(x: &Element, y: &Element, z: &Element) -> Tensor3 {
        let mut out = Tensor3::zero();
        for (a, ka) in x.iter() {
            for (b, kb) in y.iter() {
                let kab = ka * kb;
                for (c, kc) in z.iter() {
                    out.add_term((a.clone(), b.clone(), c.clone()), &kab * kc);
                }
            }
        }
        out
    }
}
