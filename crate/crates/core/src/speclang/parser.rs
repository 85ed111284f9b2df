use std::collections::BTreeMap;

use super::lexer::{lex, Spanned, Tok};
use super::{Generator, ParseError, SpecDocument, KEYWORDS};
use crate::freealg::{Algebra, GenId, Letter, Tensor2, Word, WordBuilder};
use crate::scalar::Q;

type PResult<T> = Result<T, ParseError>;

/// Parses a spec document.
pub fn parse(text: &str) -> PResult<SpecDocument> {
    let lexed = lex(text)?;
    let mut p = Parser { toks: lexed.tokens, pos: 0, algebra: None };
    let mut doc = SpecDocument { comments: lexed.comments, ..Default::default() };
    p.document(&mut doc)?;
    Ok(doc)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    algebra: Option<Algebra>,
}

fn describe(tok: &Tok) -> String {
    tok.to_string()
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: impl Into<String>) -> ParseError {
        let t = self.peek();
        ParseError::new(t.line, t.col, message)
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        let t = self.peek();
        ParseError {
            line: t.line,
            col: t.col,
            message: format!("expected {}, found {}", expected.join(" or "), describe(&t.tok)),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn expect(&mut self, tok: Tok) -> PResult<Spanned> {
        if self.peek().tok == tok {
            Ok(self.bump())
        } else {
            Err(self.unexpected(&[&describe(&tok)]))
        }
    }

    fn document(&mut self, doc: &mut SpecDocument) -> PResult<()> {
        let mut seen = [false; 4];
        loop {
            let t = self.peek().clone();
            let idx = match &t.tok {
                Tok::Eof => break,
                Tok::Semi => {
                    self.bump();
                    continue;
                }
                Tok::Ident(s) => match s.as_str() {
                    "name" => 0,
                    "algebra" => 1,
                    "weight" => 2,
                    "bracket" => 3,
                    _ => return Err(self.unexpected(&["`name`", "`algebra`", "`weight`", "`bracket`"])),
                },
                _ => return Err(self.unexpected(&["`name`", "`algebra`", "`weight`", "`bracket`"])),
            };
            if std::mem::replace(&mut seen[idx], true) {
                return Err(ParseError::new(t.line, t.col, format!("duplicate {} block", describe(&t.tok))));
            }
            if idx >= 2 && self.algebra.is_none() {
                return Err(ParseError::new(t.line, t.col, "the algebra block must come first"));
            }
            self.bump();
            match idx {
                0 => doc.name = Some(self.name_block()?),
                1 => doc.generators = self.algebra_block()?,
                2 => doc.weight = Some(self.weight_block()?),
                _ => doc.entries = self.bracket_block()?,
            }
        }
        if self.algebra.is_none() {
            return Err(self.error_here("missing algebra block"));
        }
        Ok(())
    }

    fn name_block(&mut self) -> PResult<String> {
        let s = match &self.peek().tok {
            Tok::Str(s) => s.clone(),
            _ => return Err(self.unexpected(&["string"])),
        };
        self.bump();
        self.expect(Tok::Semi)?;
        Ok(s)
    }

    fn algebra_block(&mut self) -> PResult<Vec<Generator>> {
        let mut gens: Vec<Generator> = Vec::new();
        loop {
            let t = self.peek().clone();
            match &t.tok {
                Tok::Semi if !gens.is_empty() => {
                    self.bump();
                    break;
                }
                Tok::Ident(s) if s == "inv" => {
                    let Some(last) = gens.last_mut() else {
                        return Err(self.error_here("`inv` must follow a generator name"));
                    };
                    if last.invertible {
                        return Err(self.error_here(format!("`{}` already marked `inv`", last.name)));
                    }
                    last.invertible = true;
                    self.bump();
                }
                Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                    if gens.iter().any(|g| &g.name == s) {
                        return Err(self.error_here(format!("duplicate generator `{s}`")));
                    }
                    gens.push(Generator { name: s.clone(), invertible: false });
                    self.bump();
                }
                _ if gens.is_empty() => return Err(self.unexpected(&["generator name"])),
                _ => return Err(self.unexpected(&["generator name", "`inv`", "`;`"])),
            }
        }
        let base = Algebra::new(gens.iter().map(|g| g.name.clone())).map_err(|e| self.error_here(e.to_string()))?;
        let inv: Vec<GenId> =
            gens.iter().enumerate().filter(|(_, g)| g.invertible).map(|(i, _)| GenId(i as u16)).collect();
        self.algebra = Some(base.localized(&inv).map_err(|e| self.error_here(e.to_string()))?);
        Ok(gens)
    }

    fn weight_block(&mut self) -> PResult<Vec<Q>> {
        let d = self.algebra.as_ref().map_or(0, Algebra::ngens);
        let mut out = Vec::new();
        while self.peek().tok != Tok::Semi {
            let neg = if self.peek().tok == Tok::Minus {
                self.bump();
                true
            } else {
                false
            };
            let q = self.rational()?;
            out.push(if neg { -q } else { q });
        }
        if out.len() != d {
            return Err(self.error_here(format!("weight has {} entries, the algebra has {d} generators", out.len())));
        }
        self.bump();
        Ok(out)
    }

    fn bracket_block(&mut self) -> PResult<BTreeMap<(GenId, GenId), Tensor2>> {
        let mut entries = BTreeMap::new();
        if self.peek().tok == Tok::Semi {
            self.bump();
            return Ok(entries);
        }
        if self.peek().tok != Tok::LBrace {
            return Err(self.unexpected(&["`{`", "`;`"]));
        }
        while self.peek().tok == Tok::LBrace {
            let open = self.bump();
            let i = self.generator()?;
            self.expect(Tok::Comma)?;
            let j = self.generator()?;
            self.expect(Tok::RBrace)?;
            self.expect(Tok::Eq)?;
            let t = self.tensor_expr()?;
            self.expect(Tok::Semi)?;
            if entries.insert((i, j), t).is_some() {
                let a = self.algebra.as_ref().expect("algebra parsed");
                return Err(ParseError::new(
                    open.line,
                    open.col,
                    format!("duplicate entry {{{},{}}}", a.name(i), a.name(j)),
                ));
            }
        }
        Ok(entries)
    }

    fn generator(&mut self) -> PResult<GenId> {
        let a = self.algebra.as_ref().expect("algebra parsed");
        match &self.peek().tok {
            Tok::Ident(s) => {
                let g = a.gen_by_name(s).ok_or_else(|| self.error_here(format!("undeclared generator `{s}`")))?;
                self.bump();
                Ok(g)
            }
            _ => Err(self.unexpected(&["generator name"])),
        }
    }

    fn rational(&mut self) -> PResult<Q> {
        let t = self.peek().clone();
        let Tok::Int(p) = &t.tok else { return Err(self.unexpected(&["number"])) };
        self.bump();
        let mut text = p.clone();
        if self.peek().tok == Tok::Slash {
            self.bump();
            let Tok::Int(q) = &self.peek().tok else { return Err(self.unexpected(&["number"])) };
            if q.bytes().all(|b| b == b'0') {
                return Err(self.error_here("zero denominator"));
            }
            text = format!("{p}/{q}");
            self.bump();
        }
        text.parse().map_err(|_| ParseError::new(t.line, t.col, format!("bad number `{text}`")))
    }

    /// `["+"|"-"] term {("+"|"-") term}` or a scalar that evaluates to 0.
    fn tensor_expr(&mut self) -> PResult<Tensor2> {
        let mut out = Tensor2::zero();
        let mut first = true;
        loop {
            let sign = match self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    Q::one()
                }
                Tok::Minus => {
                    self.bump();
                    -Q::one()
                }
                _ if first => Q::one(),
                _ => break,
            };
            first = false;
            let (c1, w1) = self.product()?;
            if self.peek().tok != Tok::Tensor {
                if c1.is_zero() && w1.is_one() {
                    continue;
                }
                return Err(self.unexpected(&["`(x)`"]));
            }
            self.bump();
            let (c2, w2) = self.product()?;
            let c = &(&sign * &c1) * &c2;
            out.add_term((w1, w2), c);
        }
        Ok(out)
    }

    fn product(&mut self) -> PResult<(Q, Word)> {
        let mut c = Q::one();
        let mut w = WordBuilder::new();
        loop {
            match &self.peek().tok {
                Tok::Int(_) => c = &c * &self.rational()?,
                Tok::Ident(_) => {
                    let g = self.generator()?;
                    let mut letter = Letter::pos(g);
                    if self.peek().tok == Tok::Caret {
                        self.bump();
                        self.expect(Tok::Minus)?;
                        match &self.peek().tok {
                            Tok::Int(s) if s == "1" => {
                                self.bump();
                            }
                            _ => return Err(self.unexpected(&["`1`"])),
                        }
                        let a = self.algebra.as_ref().expect("algebra parsed");
                        if !a.is_invertible(g) {
                            let t = &self.toks[self.pos - 4];
                            return Err(ParseError::new(
                                t.line,
                                t.col,
                                format!("`{}` is not declared `inv`", a.name(g)),
                            ));
                        }
                        letter = Letter::neg(g);
                    }
                    w.push(letter);
                }
                _ => return Err(self.unexpected(&["number", "generator name"])),
            }
            if self.peek().tok != Tok::Star {
                break;
            }
            self.bump();
        }
        Ok((c, w.finish()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mdb_first_entry() {
        let d = parse("algebra x1 x2 x3; bracket {x1,x2} = -1 * x2*x1 (x) 1;").unwrap();
        let t = &d.entries[&(GenId(0), GenId(1))];
        let x = |i| Letter::pos(GenId(i));
        assert_eq!(*t, Tensor2::pure(Word::from_letters([x(1), x(0)]), Word::one(), -Q::one()));
        assert_eq!(d.entries.len(), 1);
    }

    #[test]
    fn empty_bracket_is_zero() {
        let d = parse("algebra a b; bracket;").unwrap();
        assert!(d.to_spec().unwrap().table().is_empty());
        let d = parse("algebra a b;").unwrap();
        assert!(d.entries.is_empty());
    }

    #[test]
    fn inverse_letters() {
        let d = parse("algebra x1 inv x2; bracket {x1,x2} = x1^-1 ⊗ x2;").unwrap();
        let t = &d.entries[&(GenId(0), GenId(1))];
        assert_eq!(*t, Tensor2::pure(Word::letter(Letter::neg(GenId(0))), Word::gen(GenId(1)), Q::one()));
        let e = parse("algebra x1 x2 inv; bracket {x1,x2} = x1^-1 (x) x2;").unwrap_err();
        assert_eq!((e.line, e.col), (1, 38));
        assert!(e.message.contains("not declared"));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("algebra a b;\nbracket {a,c} = a (x) b;").unwrap_err();
        assert_eq!((e.line, e.col), (2, 12));
        let e = parse("algebra a b;\nbracket {a,b} = a b;").unwrap_err();
        assert_eq!(e.expected, vec!["`(x)`"]);
        assert_eq!((e.line, e.col), (2, 19));
        let e = parse("algebra a; bracket {a,a} = 0; {a,a} = 0;").unwrap_err();
        assert!(e.message.contains("duplicate entry"));
        assert!(parse("bracket;").is_err());
        assert!(parse("algebra a; weight 1 2;").is_err());
        assert!(parse("algebra a; weight 1/0;").is_err());
        assert!(parse("algebra inv;").is_err());
    }

    #[test]
    fn coefficients_multiply() {
        let d = parse("algebra a; weight -3/4; bracket {a,a} = 2*a*3 (x) 1/2*a - a (x) a + 0;").unwrap();
        assert_eq!(d.weight, Some(vec![Q::new(-3, 4)]));
        let t = &d.entries[&(GenId(0), GenId(0))];
        assert_eq!(t.coeff(&(Word::gen(GenId(0)), Word::gen(GenId(0)))), Q::from_int(2));
    }

    #[test]
    fn render_round_trip() {
        let src = "# note\nname \"k\\\"s\";\nalgebra v w inv;\nweight 1 -1;\nbracket\n  {v,w} = -w*v (x) 1 + 2/3*1 (x) w^-1;\n  {w,v} = v*w (x) 1;\n";
        let d = parse(src).unwrap();
        assert_eq!(parse(&d.render()).unwrap(), d);
        assert_eq!(d.render(), parse(&d.render()).unwrap().render());
        assert_eq!(d.name.as_deref(), Some("k\"s"));
    }

    #[test]
    fn lint_flags_non_quadratic() {
        let d = parse("algebra a b; bracket {a,b} = a*b (x) a; {b,a} = a (x) b;").unwrap();
        let l = d.lint();
        assert_eq!(l.len(), 1);
        assert!(l[0].contains("{a,b}"));
    }
}
