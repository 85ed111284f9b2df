//! Double brackets given on generators and extended by the Leibniz rules.
//!
//! A [`BracketSpec`] stores `⟪v_i, v_j⟫` for positive generators only. On
//! construction it derives the brackets of every pair of letters (inverse
//! letters included) once, so evaluation is a table lookup and the spec is
//! read-only afterwards.
//!
//! On monomials the extension is the closed double sum
//!
//! ```text
//! ⟪a,b⟫ = Σ_{α,β} (b_β⁻ ⊗ a_α⁻) ⟪a_α, b_β⟫ (a_α⁺ ⊗ b_β⁺)
//! ```
//!
//! over letter positions of `a` and `b`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::freealg::{Algebra, Element, GenId, Letter, Tensor2, Tensor3, Word, WordBuilder};
use crate::scalar::Q;

/// Weights `(λ_1, …, λ_d)` of the positive generators. An inverse letter
/// `v_i^-1` carries weight `-λ_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightVector(Vec<Q>);

impl WeightVector {
    pub fn new(lambda: Vec<Q>) -> Self {
        WeightVector(lambda)
    }

    pub fn from_ints(lambda: &[i64]) -> Self {
        WeightVector(lambda.iter().map(|&x| Q::from_int(x)).collect())
    }

    pub fn zeros(d: usize) -> Self {
        WeightVector(vec![Q::zero(); d])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Q] {
        &self.0
    }

    pub fn get(&self, g: GenId) -> &Q {
        &self.0[g.index()]
    }

    pub fn letter_weight(&self, l: Letter) -> Q {
        let w = self.get(l.gen()).clone();
        if l.is_inverse() {
            -w
        } else {
            w
        }
    }

    /// `(λ_1, …, λ_d, -λ_{i_1}, …, -λ_{i_r})` in the order of
    /// [`Algebra::letters`].
    pub fn extended(&self, algebra: &Algebra) -> Vec<Q> {
        algebra.letters().into_iter().map(|l| self.letter_weight(l)).collect()
    }

    pub fn scale(&self, c: &Q) -> WeightVector {
        WeightVector(self.0.iter().map(|x| x * c).collect())
    }
}

/// Type `(Λ, M)` of a mixed double algebra: `Λ` symmetric, `M` skew with zero
/// diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedType {
    pub lambda: Vec<Vec<Q>>,
    pub mu: Vec<Vec<Q>>,
}

impl MixedType {
    pub fn zero(d: usize) -> Self {
        MixedType { lambda: vec![vec![Q::zero(); d]; d], mu: vec![vec![Q::zero(); d]; d] }
    }

    pub fn dim(&self) -> usize {
        self.lambda.len()
    }

    /// The type determined by a weight: `λ_ij = (λ_i+λ_j)/2`, `μ_ij = (λ_i-λ_j)/2`.
    pub fn from_weight(w: &WeightVector) -> Self {
        let l = w.as_slice();
        let d = l.len();
        let mut t = MixedType::zero(d);
        for i in 0..d {
            for j in 0..d {
                t.lambda[i][j] = (&l[i] + &l[j]).half();
                t.mu[i][j] = (&l[i] - &l[j]).half();
            }
        }
        t
    }

    /// Symmetry of `Λ`, skewness of `M`, zero diagonal of `M`.
    pub fn satisfies_cond_lm(&self) -> bool {
        let d = self.dim();
        (0..d).all(|i| {
            self.mu[i][i].is_zero()
                && (0..d).all(|j| self.lambda[i][j] == self.lambda[j][i] && self.mu[i][j] == -&self.mu[j][i])
        })
    }

    /// First quadruple `(i,j,k,l)` violating `λ_ij - λ_kl = μ_il - μ_kj`.
    pub fn wskm_violation(&self) -> Option<(usize, usize, usize, usize)> {
        let d = self.dim();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let lhs = &self.lambda[i][j] - &self.lambda[k][l];
                        let rhs = &self.mu[i][l] - &self.mu[k][j];
                        if lhs != rhs {
                            return Some((i, j, k, l));
                        }
                    }
                }
            }
        }
        None
    }

    /// The skew defect prescribed for the pair `(v_i, v_j)`.
    pub fn defect(&self, i: GenId, j: GenId) -> Tensor2 {
        let (a, b) = (i.index(), j.index());
        let vi = Word::gen(i);
        let vj = Word::gen(j);
        let mut out = Tensor2::zero();
        out.add_term((vi.clone(), vj.clone()), self.lambda[a][b].clone());
        out.add_term((vj.clone(), vi.clone()), -&self.lambda[a][b]);
        out.add_term((Word::one(), vi.concat(&vj)), self.mu[a][b].clone());
        out.add_term((vj.concat(&vi), Word::one()), self.mu[b][a].clone());
        out
    }
}

type LetterTerms = Vec<(Word, Word, Q)>;

/// Bracket table on generators plus the derived letter-pair table.
#[derive(Clone, Debug)]
pub struct BracketSpec {
    algebra: Algebra,
    table: BTreeMap<(GenId, GenId), Tensor2>,
    weight: Option<WeightVector>,
    // indexed by `x.code() * 2d + y.code()`
    letters: Vec<LetterTerms>,
}

impl PartialEq for BracketSpec {
    fn eq(&self, other: &Self) -> bool {
        self.algebra == other.algebra && self.table == other.table && self.weight == other.weight
    }
}

impl BracketSpec {
    /// Builds a spec from entries `((i, j), ⟪v_i, v_j⟫)`. Missing pairs are zero.
    pub fn new(
        algebra: Algebra,
        entries: impl IntoIterator<Item = ((GenId, GenId), Tensor2)>,
    ) -> Result<Self> {
        let mut table = BTreeMap::new();
        for ((i, j), t) in entries {
            for g in [i, j] {
                if g.index() >= algebra.ngens() {
                    return Err(Error::UnknownGenerator(format!("index {}", g.index() + 1)));
                }
            }
            algebra.check_tensor2(&t)?;
            if table.contains_key(&(i, j)) {
                return Err(Error::InvalidTable(format!(
                    "pair ({}, {}) given twice",
                    algebra.name(i),
                    algebra.name(j)
                )));
            }
            if !t.is_zero() {
                table.insert((i, j), t);
            } else {
                table.remove(&(i, j));
            }
        }
        Ok(Self::from_parts(algebra, table, None))
    }

    pub fn zero(algebra: Algebra) -> Self {
        Self::from_parts(algebra, BTreeMap::new(), None)
    }

    fn from_parts(
        algebra: Algebra,
        table: BTreeMap<(GenId, GenId), Tensor2>,
        weight: Option<WeightVector>,
    ) -> Self {
        let letters = letter_table(&algebra, &table);
        BracketSpec { algebra, table, weight, letters }
    }

    pub fn with_weight(mut self, weight: WeightVector) -> Result<Self> {
        if weight.len() != self.algebra.ngens() {
            return Err(Error::WeightLength { got: weight.len(), expected: self.algebra.ngens() });
        }
        self.weight = Some(weight);
        Ok(self)
    }

    pub fn without_weight(mut self) -> Self {
        self.weight = None;
        self
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn weight(&self) -> Option<&WeightVector> {
        self.weight.as_ref()
    }

    /// Nonzero table entries in pair order.
    pub fn table(&self) -> &BTreeMap<(GenId, GenId), Tensor2> {
        &self.table
    }

    pub fn entry(&self, i: GenId, j: GenId) -> Tensor2 {
        self.table.get(&(i, j)).cloned().unwrap_or_default()
    }

    /// The same table over another algebra with the same generator count
    /// (e.g. a localisation of this one).
    pub fn rehost(&self, algebra: Algebra) -> Result<Self> {
        if algebra.ngens() != self.algebra.ngens() {
            return Err(Error::AlgebraMismatch(format!(
                "{} generators vs {}",
                algebra.ngens(),
                self.algebra.ngens()
            )));
        }
        for t in self.table.values() {
            algebra.check_tensor2(t)?;
        }
        Ok(Self::from_parts(algebra, self.table.clone(), self.weight.clone()))
    }

    /// Multiplies every entry by `c`; a stored weight scales along.
    pub fn scaled(&self, c: &Q) -> Self {
        let table = self
            .table
            .iter()
            .map(|(k, t)| (*k, t.scale(c)))
            .filter(|(_, t)| !t.is_zero())
            .collect();
        let weight = self.weight.as_ref().map(|w| w.scale(c));
        Self::from_parts(self.algebra.clone(), table, weight)
    }

    /// Renames generators: generator `g` of `self` becomes `perm[g]` of the
    /// result. The weight is carried along.
    pub fn relabeled(&self, perm: &[GenId]) -> Result<Self> {
        let d = self.algebra.ngens();
        let mut seen = vec![false; d];
        if perm.len() != d || perm.iter().any(|g| g.index() >= d) {
            return Err(Error::InvalidTable("relabelling must be a permutation".into()));
        }
        for g in perm {
            if std::mem::replace(&mut seen[g.index()], true) {
                return Err(Error::InvalidTable("relabelling must be a permutation".into()));
            }
        }
        let map_word = |w: &Word| {
            Word::from_letters(w.letters().iter().map(|l| Letter::new(perm[l.gen().index()], l.exponent())))
        };
        let table = self
            .table
            .iter()
            .map(|(&(i, j), t)| {
                ((perm[i.index()], perm[j.index()]), t.map_keys(|(a, b)| (map_word(a), map_word(b))))
            })
            .collect();
        let mut names = vec![String::new(); d];
        let mut lambda = vec![Q::zero(); d];
        for g in self.algebra.gens() {
            names[perm[g.index()].index()] = self.algebra.name(g).to_string();
            if let Some(w) = &self.weight {
                lambda[perm[g.index()].index()] = w.get(g).clone();
            }
        }
        let inverted: Vec<GenId> = self.algebra.inverted().iter().map(|g| perm[g.index()]).collect();
        let algebra = Algebra::new(names)?.localized(&inverted)?;
        let weight = self.weight.as_ref().map(|_| WeightVector::new(lambda));
        Ok(Self::from_parts(algebra, table, weight))
    }

    /// Whether every generator bracket lies in `V ⊗ V`.
    pub fn is_linear_tensor_valued(&self) -> bool {
        self.table
            .values()
            .all(|t| t.iter().all(|((a, b), _)| a.degree() == 1 && b.degree() == 1))
    }

    /// Whether every generator bracket has total degree two.
    pub fn is_quadratic(&self) -> bool {
        self.table.values().all(|t| t.iter().all(|((a, b), _)| a.degree() + b.degree() == 2))
    }

    #[inline]
    fn letter_terms(&self, x: Letter, y: Letter) -> &LetterTerms {
        &self.letters[x.code() * 2 * self.algebra.ngens() + y.code()]
    }

    /// `⟪x, y⟫` for letters, inverse letters included.
    pub fn letter_bracket(&self, x: Letter, y: Letter) -> Result<Tensor2> {
        self.algebra.check_letter(x)?;
        self.algebra.check_letter(y)?;
        Ok(self.letter_terms(x, y).iter().map(|(a, b, c)| ((a.clone(), b.clone()), c.clone())).collect())
    }

    fn check_element(&self, x: &Element) -> Result<()> {
        self.algebra.check_element(x).map_err(mismatch)
    }

    fn check_tensor(&self, u: &Tensor2) -> Result<()> {
        self.algebra.check_tensor2(u).map_err(mismatch)
    }

    /// Adds `coef * ⟪a, b⟫` to `out`. Letters must already be valid.
    pub(crate) fn dbracket_words_into(&self, a: &Word, b: &Word, coef: &Q, out: &mut Tensor2) {
        let (al, bl) = (a.letters(), b.letters());
        for (i, &x) in al.iter().enumerate() {
            for (j, &y) in bl.iter().enumerate() {
                for (u1, u2, c) in self.letter_terms(x, y) {
                    let mut left = WordBuilder::with_capacity(j + u1.degree() + al.len() - i);
                    left.extend(&bl[..j]);
                    left.extend(u1.letters());
                    left.extend(&al[i + 1..]);
                    let mut right = WordBuilder::with_capacity(i + u2.degree() + bl.len() - j);
                    right.extend(&al[..i]);
                    right.extend(u2.letters());
                    right.extend(&bl[j + 1..]);
                    out.add_term((left.finish(), right.finish()), c * coef);
                }
            }
        }
    }

    /// Adds `coef * {a, b}` to `out`, skipping the intermediate tensor.
    pub(crate) fn mbracket_words_into(&self, a: &Word, b: &Word, coef: &Q, out: &mut Element) {
        let (al, bl) = (a.letters(), b.letters());
        for (i, &x) in al.iter().enumerate() {
            for (j, &y) in bl.iter().enumerate() {
                for (u1, u2, c) in self.letter_terms(x, y) {
                    let mut w = WordBuilder::with_capacity(al.len() + bl.len() + u1.degree() + u2.degree());
                    w.extend(&bl[..j]);
                    w.extend(u1.letters());
                    w.extend(&al[i + 1..]);
                    w.extend(&al[..i]);
                    w.extend(u2.letters());
                    w.extend(&bl[j + 1..]);
                    out.add_term(w.finish(), c * coef);
                }
            }
        }
    }

    pub(crate) fn dbracket_unchecked(&self, a: &Element, b: &Element) -> Tensor2 {
        let mut out = Tensor2::zero();
        for (wa, ca) in a.iter() {
            for (wb, cb) in b.iter() {
                self.dbracket_words_into(wa, wb, &(ca * cb), &mut out);
            }
        }
        out
    }

    pub(crate) fn mbracket_unchecked(&self, a: &Element, b: &Element) -> Element {
        let mut out = Element::zero();
        for (wa, ca) in a.iter() {
            for (wb, cb) in b.iter() {
                self.mbracket_words_into(wa, wb, &(ca * cb), &mut out);
            }
        }
        out
    }

    /// `⟪a, b⟫`.
    pub fn dbracket(&self, a: &Element, b: &Element) -> Result<Tensor2> {
        self.check_element(a)?;
        self.check_element(b)?;
        Ok(self.dbracket_unchecked(a, b))
    }

    /// `{a, b} = m(⟪a, b⟫)`.
    pub fn mbracket(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check_element(a)?;
        self.check_element(b)?;
        Ok(self.mbracket_unchecked(a, b))
    }

    pub(crate) fn tbracket_l_unchecked(&self, a: &Element, u: &Tensor2) -> Tensor3 {
        let mut out = Tensor3::zero();
        for (wa, ca) in a.iter() {
            for ((b, c), k) in u.iter() {
                let mut tmp = Tensor2::zero();
                self.dbracket_words_into(wa, b, &(ca * k), &mut tmp);
                for ((x, y), kk) in tmp.iter() {
                    out.add_term((x.clone(), y.clone(), c.clone()), kk.clone());
                }
            }
        }
        out
    }

    pub(crate) fn tbracket_r_unchecked(&self, a: &Element, u: &Tensor2) -> Tensor3 {
        let mut out = Tensor3::zero();
        for (wa, ca) in a.iter() {
            for ((b, c), k) in u.iter() {
                let mut tmp = Tensor2::zero();
                self.dbracket_words_into(wa, c, &(ca * k), &mut tmp);
                for ((x, y), kk) in tmp.iter() {
                    out.add_term((b.clone(), x.clone(), y.clone()), kk.clone());
                }
            }
        }
        out
    }

    pub(crate) fn tbracket_swap_l_unchecked(&self, u: &Tensor2, a: &Element) -> Tensor3 {
        let mut out = Tensor3::zero();
        for ((b, c), k) in u.iter() {
            for (wa, ca) in a.iter() {
                let mut tmp = Tensor2::zero();
                self.dbracket_words_into(b, wa, &(ca * k), &mut tmp);
                for ((x, y), kk) in tmp.iter() {
                    out.add_term((x.clone(), c.clone(), y.clone()), kk.clone());
                }
            }
        }
        out
    }

    /// `⟪a, b⊗c⟫_L = ⟪a, b⟫ ⊗ c`.
    pub fn tbracket_l(&self, a: &Element, u: &Tensor2) -> Result<Tensor3> {
        self.check_element(a)?;
        self.check_tensor(u)?;
        Ok(self.tbracket_l_unchecked(a, u))
    }

    /// `⟪a, b⊗c⟫_R = b ⊗ ⟪a, c⟫`.
    pub fn tbracket_r(&self, a: &Element, u: &Tensor2) -> Result<Tensor3> {
        self.check_element(a)?;
        self.check_tensor(u)?;
        Ok(self.tbracket_r_unchecked(a, u))
    }

    /// `⟪b⊗c, a⟫_L = ⟪b, a⟫ ⊗₁ c`.
    pub fn tbracket_swap_l(&self, u: &Tensor2, a: &Element) -> Result<Tensor3> {
        self.check_tensor(u)?;
        self.check_element(a)?;
        Ok(self.tbracket_swap_l_unchecked(u, a))
    }

    pub(crate) fn djac_unchecked(&self, a: &Element, b: &Element, c: &Element) -> Tensor3 {
        let mut out = self.tbracket_l_unchecked(a, &self.dbracket_unchecked(b, c));
        out -= &self.tbracket_r_unchecked(b, &self.dbracket_unchecked(a, c));
        out -= &self.tbracket_swap_l_unchecked(&self.dbracket_unchecked(a, b), c);
        out
    }

    /// Double Jacobiator `⟪a,⟪b,c⟫⟫_L - ⟪b,⟪a,c⟫⟫_R - ⟪⟪a,b⟫,c⟫_L`.
    pub fn djac(&self, a: &Element, b: &Element, c: &Element) -> Result<Tensor3> {
        for x in [a, b, c] {
            self.check_element(x)?;
        }
        Ok(self.djac_unchecked(a, b, c))
    }

    pub(crate) fn jacobiator_unchecked(&self, a: &Element, b: &Element, c: &Element) -> Element {
        let mut out = self.mbracket_unchecked(a, &self.mbracket_unchecked(b, c));
        out -= &self.mbracket_unchecked(b, &self.mbracket_unchecked(a, c));
        out -= &self.mbracket_unchecked(&self.mbracket_unchecked(a, b), c);
        out
    }

    /// `{a,{b,c}} - {b,{a,c}} - {{a,b},c}`.
    pub fn jacobiator(&self, a: &Element, b: &Element, c: &Element) -> Result<Element> {
        for x in [a, b, c] {
            self.check_element(x)?;
        }
        Ok(self.jacobiator_unchecked(a, b, c))
    }
}

fn mismatch(e: Error) -> Error {
    match e {
        Error::NotInvertible(_) | Error::UnknownGenerator(_) => Error::AlgebraMismatch(e.to_string()),
        e => e,
    }
}

/// `(a^-, letter, a^+)` at the 1-based position `alpha`.
pub fn split_word(a: &Word, alpha: usize) -> Result<(Word, Letter, Word)> {
    a.split(alpha)
}

/// Letters `alpha..=gamma` of `a` (1-based), or `1` when `alpha > gamma`.
pub fn segment(a: &Word, alpha: usize, gamma: usize) -> Result<Word> {
    a.segment(alpha, gamma)
}

fn letter_table(algebra: &Algebra, table: &BTreeMap<(GenId, GenId), Tensor2>) -> Vec<LetterTerms> {
    let n = 2 * algebra.ngens();
    let mut out = vec![Vec::new(); n * n];
    let letters = algebra.letters();
    for &x in &letters {
        for &y in &letters {
            let t = derive_letter_bracket(table, x, y);
            out[x.code() * n + y.code()] =
                t.sorted().into_iter().map(|((a, b), c)| (a.clone(), b.clone(), c.clone())).collect();
        }
    }
    out
}

/// `⟪a, b^-1⟫ = -(b^-1 ⊗ 1) ⟪a, b⟫ (1 ⊗ b^-1)` and
/// `⟪b^-1, a⟫ = -(1 ⊗ b^-1) ⟪b, a⟫ (b^-1 ⊗ 1)`.
fn derive_letter_bracket(table: &BTreeMap<(GenId, GenId), Tensor2>, x: Letter, y: Letter) -> Tensor2 {
    if x.is_inverse() {
        let inner = derive_letter_bracket(table, x.inverse(), y);
        let xi = Element::word(Word::letter(x));
        return -Tensor2::inner_act(&xi, &inner, &xi);
    }
    if y.is_inverse() {
        let inner = derive_letter_bracket(table, x, y.inverse());
        let yi = Element::word(Word::letter(y));
        return -Tensor2::outer_act(&yi, &inner, &yi);
    }
    table.get(&(x.gen(), y.gen())).cloned().unwrap_or_default()
}
