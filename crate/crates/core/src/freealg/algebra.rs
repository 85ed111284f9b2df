use std::fmt::Write as _;

use super::lin::{Element, Tensor2, Tensor3};
use super::word::{GenId, Letter, Word, WordBuilder};
use crate::error::{Error, Result};
use crate::scalar::Q;

/// Generator names plus the ordered list of inverted generators.
///
/// With no inverted generators this is the free algebra `K<v_1..v_d>`;
/// otherwise the Laurent localisation at the listed generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    names: Vec<String>,
    inverted: Vec<GenId>,
}

impl Algebra {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::InvalidAlgebra("at least one generator is required".into()));
        }
        if names.len() > (u16::MAX / 2) as usize {
            return Err(Error::InvalidAlgebra("too many generators".into()));
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::InvalidAlgebra(format!("duplicate generator `{n}`")));
            }
        }
        Ok(Algebra { names, inverted: Vec::new() })
    }

    /// `K<v1, …, vd>`.
    pub fn free(d: usize) -> Self {
        Algebra::new((1..=d).map(|i| format!("v{i}"))).expect("d >= 1")
    }

    /// Localisation at the given generators (in the given order).
    pub fn localized(&self, invert: &[GenId]) -> Result<Self> {
        let mut out = self.clone();
        for &g in invert {
            if g.index() >= self.ngens() {
                return Err(Error::UnknownGenerator(format!("index {}", g.index() + 1)));
            }
            if out.inverted.contains(&g) {
                return Err(Error::InvalidAlgebra(format!(
                    "generator `{}` listed twice for inversion",
                    self.name(g)
                )));
            }
            out.inverted.push(g);
        }
        Ok(out)
    }

    pub fn ngens(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, g: GenId) -> &str {
        &self.names[g.index()]
    }

    pub fn gens(&self) -> impl Iterator<Item = GenId> {
        (0..self.ngens() as u16).map(GenId)
    }

    pub fn gen_by_name(&self, name: &str) -> Option<GenId> {
        self.names.iter().position(|n| n == name).map(|i| GenId(i as u16))
    }

    pub fn inverted(&self) -> &[GenId] {
        &self.inverted
    }

    pub fn is_invertible(&self, g: GenId) -> bool {
        self.inverted.contains(&g)
    }

    pub fn is_free(&self) -> bool {
        self.inverted.is_empty()
    }

    /// Generators of the presentation: `v_1..v_d` followed by the inverse
    /// letters in inversion order.
    pub fn letters(&self) -> Vec<Letter> {
        let mut out: Vec<Letter> = self.gens().map(Letter::pos).collect();
        out.extend(self.inverted.iter().map(|&g| Letter::neg(g)));
        out
    }

    pub fn check_letter(&self, l: Letter) -> Result<()> {
        let g = l.gen();
        if g.index() >= self.ngens() {
            return Err(Error::UnknownGenerator(format!("index {}", g.index() + 1)));
        }
        if l.is_inverse() && !self.is_invertible(g) {
            return Err(Error::NotInvertible(self.name(g).to_string()));
        }
        Ok(())
    }

    pub fn check_word(&self, w: &Word) -> Result<()> {
        w.letters().iter().try_for_each(|&l| self.check_letter(l))
    }

    pub fn check_element(&self, x: &Element) -> Result<()> {
        x.iter().try_for_each(|(w, _)| self.check_word(w))
    }

    pub fn check_tensor2(&self, u: &Tensor2) -> Result<()> {
        u.iter().try_for_each(|((a, b), _)| {
            self.check_word(a)?;
            self.check_word(b)
        })
    }

    /// All reduced nonconstant words of degree at most `maxdeg`, in word order.
    pub fn monomials(&self, maxdeg: usize) -> Vec<Word> {
        let mut letters = self.letters();
        letters.sort();
        let mut out = Vec::new();
        let mut layer = vec![Word::one()];
        for _ in 0..maxdeg {
            let mut next = Vec::with_capacity(layer.len() * letters.len());
            for w in &layer {
                for &l in &letters {
                    if w.letters().last() == Some(&l.inverse()) {
                        continue;
                    }
                    let mut b = WordBuilder::with_capacity(w.degree() + 1);
                    b.extend(w.letters());
                    b.push(l);
                    next.push(b.finish());
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    pub fn render_letter(&self, l: Letter) -> String {
        let name = self.names.get(l.gen().index()).map(String::as_str).unwrap_or("?");
        if l.is_inverse() {
            format!("{name}^-1")
        } else {
            name.to_string()
        }
    }

    pub fn render_word(&self, w: &Word) -> String {
        if w.is_one() {
            return "1".into();
        }
        w.letters().iter().map(|&l| self.render_letter(l)).collect::<Vec<_>>().join("*")
    }

    pub fn render_element(&self, x: &Element) -> String {
        render_terms(x.sorted().into_iter().map(|(w, c)| (c, vec![self.render_word(w)])))
    }

    pub fn render_tensor2(&self, u: &Tensor2) -> String {
        render_terms(
            u.sorted()
                .into_iter()
                .map(|((a, b), c)| (c, vec![self.render_word(a), self.render_word(b)])),
        )
    }

    pub fn render_tensor3(&self, u: &Tensor3) -> String {
        render_terms(u.sorted().into_iter().map(|((a, b, d), c)| {
            (c, vec![self.render_word(a), self.render_word(b), self.render_word(d)])
        }))
    }
}

/// Renders `Σ c * f1 (x) f2 …`; a lone `1` factor absorbs into the coefficient.
fn render_terms<'a>(terms: impl Iterator<Item = (&'a Q, Vec<String>)>) -> String {
    let mut out = String::new();
    for (c, factors) in terms {
        let body = factors.join(" (x) ");
        let single_unit = factors.len() == 1 && factors[0] == "1";
        let term = if single_unit {
            c.to_string()
        } else if c.is_one() {
            body
        } else if c.is_minus_one() {
            format!("-{body}")
        } else {
            format!("{c}*{body}")
        };
        if out.is_empty() {
            out = term;
        } else if let Some(rest) = term.strip_prefix('-') {
            let _ = write!(out, " - {rest}");
        } else {
            let _ = write!(out, " + {term}");
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_empty() {
        assert!(Algebra::new(["x", "x"]).is_err());
        assert!(Algebra::new(Vec::<String>::new()).is_err());
    }

    #[test]
    fn monomial_counts() {
        let a = Algebra::free(3);
        assert_eq!(a.monomials(3).len(), 3 + 9 + 27);
        let m = a.monomials(2);
        assert!(m.windows(2).all(|w| w[0] < w[1]));
        let l = Algebra::free(2).localized(&[GenId(0), GenId(1)]).unwrap();
        // 4 letters, each extension avoids the cancelling letter
        assert_eq!(l.monomials(3).len(), 4 + 12 + 36);
    }

    #[test]
    fn letters_follow_inversion_order() {
        let a = Algebra::free(3).localized(&[GenId(2), GenId(0)]).unwrap();
        let ls = a.letters();
        assert_eq!(ls.len(), 5);
        assert_eq!(ls[3], Letter::neg(GenId(2)));
        assert_eq!(ls[4], Letter::neg(GenId(0)));
    }

    #[test]
    fn renders_canonically() {
        let a = Algebra::new(["x1", "x2", "x3"]).unwrap().localized(&[GenId(1)]).unwrap();
        let w = Word::from_letters([Letter::pos(GenId(0)), Letter::neg(GenId(1))]);
        let u = Tensor2::pure(w, Word::gens(&[2]), Q::new(-2, 3));
        assert_eq!(a.render_tensor2(&u), "-2/3*x1*x2^-1 (x) x3");
        let x = &Element::scalar(Q::from_int(-1)) + &Element::word(Word::gens(&[0]));
        assert_eq!(a.render_element(&x), "-1 + x1");
        assert_eq!(a.render_element(&Element::zero()), "0");
        let t = &Tensor2::pure(Word::gens(&[1, 0]), Word::one(), Q::from_int(-1))
            + &Tensor2::pure(Word::one(), Word::gens(&[0, 1]), Q::one());
        assert_eq!(a.render_tensor2(&t), "1 (x) x1*x2 - x2*x1 (x) 1");
    }

    #[test]
    fn letter_validation() {
        let a = Algebra::free(2);
        assert!(matches!(a.check_letter(Letter::neg(GenId(0))), Err(Error::NotInvertible(_))));
        assert!(a.check_letter(Letter::pos(GenId(5))).is_err());
    }
}
