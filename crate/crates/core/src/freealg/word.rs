use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Zero-based generator index. Generator `v_k` of the algebra has `GenId(k - 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenId(pub u16);

impl GenId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A signed generator: `v` or `v^-1`.
///
/// Packed as `2 * gen + inverse_bit`, so the derived order is
/// (generator index, exponent) with `+1 < -1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(u16);

impl Letter {
    pub fn pos(g: GenId) -> Self {
        Letter(g.0 * 2)
    }

    pub fn neg(g: GenId) -> Self {
        Letter(g.0 * 2 + 1)
    }

    pub fn new(g: GenId, exponent: i8) -> Self {
        match exponent {
            1 => Letter::pos(g),
            -1 => Letter::neg(g),
            e => panic!("letter exponent must be +1 or -1, got {e}"),
        }
    }

    pub fn from_code(code: usize) -> Self {
        Letter(code as u16)
    }

    pub fn gen(self) -> GenId {
        GenId(self.0 >> 1)
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn exponent(self) -> i8 {
        if self.is_inverse() {
            -1
        } else {
            1
        }
    }

    /// The letter that cancels this one.
    pub fn inverse(self) -> Letter {
        Letter(self.0 ^ 1)
    }

    /// Dense index usable for lookup tables of size `2 * d`.
    pub fn code(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_inverse() {
            write!(f, "v{}^-1", self.gen().0 + 1)
        } else {
            write!(f, "v{}", self.gen().0 + 1)
        }
    }
}

pub(crate) type LetterBuf = SmallVec<[Letter; 12]>;

/// A reduced monomial. The empty word is the unit `1`.
///
/// Words are ordered by degree first, then lexicographically by letter.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(LetterBuf);

impl Word {
    pub fn one() -> Self {
        Word(LetterBuf::new())
    }

    pub fn letter(l: Letter) -> Self {
        let mut buf = LetterBuf::new();
        buf.push(l);
        Word(buf)
    }

    pub fn gen(g: GenId) -> Self {
        Word::letter(Letter::pos(g))
    }

    /// Builds a word from an arbitrary letter sequence, cancelling `x x^-1` pairs.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut b = WordBuilder::new();
        for l in letters {
            b.push(l);
        }
        b.finish()
    }

    /// Shorthand for positive words: `Word::gens(&[0, 1])` is `v1 v2`.
    pub fn gens(indices: &[u16]) -> Self {
        Word::from_letters(indices.iter().map(|&i| Letter::pos(GenId(i))))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn has_inverse_letters(&self) -> bool {
        self.0.iter().any(|l| l.is_inverse())
    }

    /// Reduced product `self * other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut b = WordBuilder::with_capacity(self.degree() + other.degree());
        b.extend(self.letters());
        b.extend(other.letters());
        b.finish()
    }

    /// Splits at the 1-based position `alpha` into `(a^-, letter, a^+)`.
    pub fn split(&self, alpha: usize) -> Result<(Word, Letter, Word)> {
        if alpha == 0 || alpha > self.degree() {
            return Err(Error::PositionOutOfRange { position: alpha, degree: self.degree() });
        }
        let i = alpha - 1;
        Ok((
            Word(self.0[..i].iter().copied().collect()),
            self.0[i],
            Word(self.0[i + 1..].iter().copied().collect()),
        ))
    }

    /// The subword from position `alpha` to `gamma` (1-based, inclusive);
    /// the unit when `alpha > gamma`.
    pub fn segment(&self, alpha: usize, gamma: usize) -> Result<Word> {
        let r = self.degree();
        for p in [alpha, gamma] {
            if p == 0 || p > r {
                return Err(Error::PositionOutOfRange { position: p, degree: r });
            }
        }
        if alpha > gamma {
            return Ok(Word::one());
        }
        Ok(Word(self.0[alpha - 1..gamma].iter().copied().collect()))
    }

    /// Rotation moving the first `k` letters to the end. Not re-reduced.
    pub(crate) fn rotate_raw(&self, k: usize) -> LetterBuf {
        let n = self.0.len();
        let mut out = LetterBuf::with_capacity(n);
        out.extend_from_slice(&self.0[k..]);
        out.extend_from_slice(&self.0[..k]);
        out
    }

    pub(crate) fn from_reduced_buf(buf: LetterBuf) -> Self {
        debug_assert!(buf.windows(2).all(|w| w[0] != w[1].inverse()));
        Word(buf)
    }

    /// Cyclic rotation by `k` followed by re-reduction.
    pub fn rotate(&self, k: usize) -> Word {
        if self.0.is_empty() {
            return Word::one();
        }
        Word::from_letters(self.rotate_raw(k % self.0.len()))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.as_slice().cmp(other.0.as_slice()))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "{l:?}")?;
        }
        Ok(())
    }
}

/// Accumulates letters into a reduced word; a pushed letter cancels against
/// the current last letter when they are mutually inverse.
pub struct WordBuilder(LetterBuf);

impl WordBuilder {
    pub fn new() -> Self {
        WordBuilder(LetterBuf::new())
    }

    pub fn with_capacity(n: usize) -> Self {
        WordBuilder(LetterBuf::with_capacity(n))
    }

    #[inline]
    pub fn push(&mut self, l: Letter) {
        if self.0.last() == Some(&l.inverse()) {
            self.0.pop();
        } else {
            self.0.push(l);
        }
    }

    #[inline]
    pub fn extend(&mut self, letters: &[Letter]) {
        for &l in letters {
            self.push(l);
        }
    }

    pub fn finish(self) -> Word {
        Word(self.0)
    }
}

impl Default for WordBuilder {
    fn default() -> Self {
        Self::new()
    }
}
