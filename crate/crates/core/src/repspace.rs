//! Evaluation on representation spaces: generators become exact rational
//! `N×N` matrices and brackets are compared through traces.

use std::ops::Mul;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::axioms::{self, VerificationReport, Witness};
use crate::bracket::BracketSpec;
use crate::error::{Error, Result};
use crate::freealg::{cyclic_normal_form, Algebra, Element, Word};
use crate::scalar::Q;

/// A dense square matrix over `Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    n: usize,
    data: Vec<Q>,
}

impl QMatrix {
    pub fn zero(n: usize) -> Self {
        QMatrix { n, data: vec![Q::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix::zero(n);
        for i in 0..n {
            m.data[i * n + i] = Q::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::Matrix("rows must form a nonempty square".into()));
        }
        Ok(QMatrix { n, data: rows.into_iter().flatten().collect() })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.n + j]
    }

    pub fn trace(&self) -> Q {
        let mut t = Q::zero();
        for i in 0..self.n {
            t += self.get(i, i);
        }
        t
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &QMatrix, c: &Q) {
        for (x, y) in self.data.iter_mut().zip(&other.data) {
            *x += &(y * c);
        }
    }

    /// Gauss–Jordan elimination; `None` when singular.
    pub fn inverse(&self) -> Option<QMatrix> {
        let n = self.n;
        let mut a = self.data.clone();
        let mut inv = QMatrix::identity(n).data;
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[r * n + col].is_zero())?;
            if pivot != col {
                for k in 0..n {
                    a.swap(pivot * n + k, col * n + k);
                    inv.swap(pivot * n + k, col * n + k);
                }
            }
            let p = a[col * n + col].recip();
            for k in 0..n {
                a[col * n + k] = &a[col * n + k] * &p;
                inv[col * n + k] = &inv[col * n + k] * &p;
            }
            for r in 0..n {
                if r == col || a[r * n + col].is_zero() {
                    continue;
                }
                let f = a[r * n + col].clone();
                for k in 0..n {
                    let (s, t) = (&a[col * n + k] * &f, &inv[col * n + k] * &f);
                    a[r * n + k] -= &s;
                    inv[r * n + k] -= &t;
                }
            }
        }
        Some(QMatrix { n, data: inv })
    }

    pub fn is_invertible(&self) -> bool {
        self.inverse().is_some()
    }
}

impl Mul for &QMatrix {
    type Output = QMatrix;

    fn mul(self, rhs: &QMatrix) -> QMatrix {
        let n = self.n;
        let mut out = QMatrix::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += &(a * &rhs.data[k * n + j]);
                }
            }
        }
        out
    }
}

/// One point of the representation space: a matrix per generator, plus the
/// inverse for inverted generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixPoint {
    algebra: Algebra,
    n: usize,
    mats: Vec<QMatrix>,
    inverses: Vec<Option<QMatrix>>,
}

impl MatrixPoint {
    pub fn new(algebra: &Algebra, mats: Vec<QMatrix>) -> Result<Self> {
        if mats.len() != algebra.ngens() {
            return Err(Error::Matrix(format!("{} matrices for {} generators", mats.len(), algebra.ngens())));
        }
        let n = mats[0].size();
        if mats.iter().any(|m| m.size() != n) {
            return Err(Error::Matrix("matrices must share one size".into()));
        }
        let mut inverses = Vec::with_capacity(mats.len());
        for g in algebra.gens() {
            if algebra.is_invertible(g) {
                let inv = mats[g.index()].inverse().ok_or_else(|| {
                    Error::Matrix(format!("matrix for invertible generator `{}` is singular", algebra.name(g)))
                })?;
                inverses.push(Some(inv));
            } else {
                inverses.push(None);
            }
        }
        Ok(MatrixPoint { algebra: algebra.clone(), n, mats, inverses })
    }

    /// Entries `p/q` with `p ∈ [-9, 9]`, `q ∈ [1, 9]`; matrices for
    /// invertible generators are redrawn until nonsingular.
    pub fn sample(algebra: &Algebra, n: usize, seed: u64) -> Self {
        assert!(n > 0, "matrix size must be positive");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let draw = |rng: &mut ChaCha8Rng| {
            let data = (0..n * n).map(|_| Q::new(rng.gen_range(-9..=9), rng.gen_range(1..=9))).collect();
            QMatrix { n, data }
        };
        let mut mats = Vec::new();
        for g in algebra.gens() {
            let mut m = draw(&mut rng);
            while algebra.is_invertible(g) && !m.is_invertible() {
                m = draw(&mut rng);
            }
            mats.push(m);
        }
        MatrixPoint::new(algebra, mats).expect("sampled matrices are consistent")
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn matrix(&self, i: usize) -> &QMatrix {
        &self.mats[i]
    }

    pub fn eval_word(&self, w: &Word) -> Result<QMatrix> {
        let mut acc = QMatrix::identity(self.n);
        for l in w.letters() {
            let g = l.gen();
            if g.index() >= self.mats.len() {
                return Err(Error::UnknownGenerator(format!("index {}", g.index() + 1)));
            }
            let m = if l.is_inverse() {
                self.inverses[g.index()]
                    .as_ref()
                    .ok_or_else(|| Error::NotInvertible(self.algebra.name(g).to_string()))?
            } else {
                &self.mats[g.index()]
            };
            acc = &acc * m;
        }
        Ok(acc)
    }

    pub fn eval_element(&self, x: &Element) -> Result<QMatrix> {
        let mut out = QMatrix::zero(self.n);
        for (w, c) in x.sorted() {
            out.add_scaled(&self.eval_word(w)?, c);
        }
        Ok(out)
    }

    pub fn eval_trace(&self, x: &Element) -> Result<Q> {
        Ok(self.eval_element(x)?.trace())
    }
}

pub fn eval_element(x: &Element, p: &MatrixPoint) -> Result<QMatrix> {
    p.eval_element(x)
}

pub fn eval_trace(x: &Element, p: &MatrixPoint) -> Result<Q> {
    p.eval_trace(x)
}

/// `tr({a, b})` at `p`.
pub fn induced_trace_bracket(spec: &BracketSpec, a: &Element, b: &Element, p: &MatrixPoint) -> Result<Q> {
    p.eval_trace(&spec.mbracket(a, b)?)
}

/// Word traces keyed by cyclic class, filled on demand.
struct TraceMemo<'a> {
    points: &'a [MatrixPoint],
    cache: FxHashMap<Word, Vec<Q>>,
}

impl<'a> TraceMemo<'a> {
    fn new(points: &'a [MatrixPoint]) -> Self {
        TraceMemo { points, cache: FxHashMap::default() }
    }

    /// Adds `coef * tr(x)` at every point to `acc`.
    fn add_traces(&mut self, x: &Element, coef: &Q, acc: &mut [Q]) {
        for (w, c) in x.iter() {
            let key = cyclic_normal_form(w);
            let points = self.points;
            let traces = self.cache.entry(key).or_insert_with_key(|k| {
                points.iter().map(|p| p.eval_word(k).expect("letters checked").trace()).collect()
            });
            let cc = c * coef;
            for (a, t) in acc.iter_mut().zip(traces.iter()) {
                *a += &(&cc * t);
            }
        }
    }
}

/// Trace identities of the induced bracket at one point.
pub fn check_induced_poisson(spec: &BracketSpec, p: &MatrixPoint, maxdeg: usize) -> VerificationReport {
    check_induced_poisson_multi(spec, std::slice::from_ref(p), maxdeg)
}

/// `tr({a,b} + {b,a}) = 0` and `tr({a,{b,c}} - {b,{a,c}} - {{a,b},c}) = 0`
/// for all monomials up to `maxdeg`, at every point. Each bracket term is
/// traced separately before the combination is formed.
pub fn check_induced_poisson_multi(spec: &BracketSpec, points: &[MatrixPoint], maxdeg: usize) -> VerificationReport {
    let alg = spec.algebra();
    if let Some(bad) = points.iter().position(|p| &p.algebra != alg) {
        return VerificationReport::rejected("induced_poisson", format!("point {bad} belongs to another algebra"));
    }
    let words = alg.monomials(maxdeg);
    let n = words.len();
    let m = points.len();
    let single = |a: &Word, b: &Word| {
        let mut e = Element::zero();
        spec.mbracket_words_into(a, b, &Q::one(), &mut e);
        e
    };
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let witness = |inputs: &[&Word], k: usize, parts: String, total: &Q| Witness {
        inputs: inputs.iter().map(|w| alg.render_word(w)).chain([format!("point {k}")]).collect(),
        expected: "0".into(),
        actual: parts,
        residual: total.to_string(),
    };
    let skew = pairs
        .par_iter()
        .map_init(
            || TraceMemo::new(points),
            |memo, &(i, j)| {
                let (a, b) = (&words[i], &words[j]);
                let mut t1 = vec![Q::zero(); m];
                let mut t2 = vec![Q::zero(); m];
                memo.add_traces(&single(a, b), &Q::one(), &mut t1);
                memo.add_traces(&single(b, a), &Q::one(), &mut t2);
                (0..m).find_map(|k| {
                    let s = &t1[k] + &t2[k];
                    (!s.is_zero()).then(|| witness(&[a, b], k, format!("tr{{a,b}} = {}, tr{{b,a}} = {}", t1[k], t2[k]), &s))
                })
            },
        )
        .find_map_first(|x| x);
    let pair_table: Vec<Element> = (0..n * n).into_par_iter().map(|k| single(&words[k / n], &words[k % n])).collect();
    let triples: Vec<usize> = (0..n * n * n).collect();
    let jac = triples
        .par_iter()
        .map_init(
            || TraceMemo::new(points),
            |memo, &t| {
                let (i, j, k) = (t / (n * n), (t / n) % n, t % n);
                let (a, b, c) = (&words[i], &words[j], &words[k]);
                let mut parts = [vec![Q::zero(); m], vec![Q::zero(); m], vec![Q::zero(); m]];
                let mut e = Element::zero();
                for (w, q) in pair_table[j * n + k].iter() {
                    spec.mbracket_words_into(a, w, q, &mut e);
                }
                memo.add_traces(&e, &Q::one(), &mut parts[0]);
                e = Element::zero();
                for (w, q) in pair_table[i * n + k].iter() {
                    spec.mbracket_words_into(b, w, q, &mut e);
                }
                memo.add_traces(&e, &Q::one(), &mut parts[1]);
                e = Element::zero();
                for (w, q) in pair_table[i * n + j].iter() {
                    spec.mbracket_words_into(w, c, q, &mut e);
                }
                memo.add_traces(&e, &Q::one(), &mut parts[2]);
                (0..m).find_map(|p| {
                    let s = &(&parts[0][p] - &parts[1][p]) - &parts[2][p];
                    (!s.is_zero()).then(|| {
                        let detail = format!(
                            "tr{{a,{{b,c}}}} = {}, tr{{b,{{a,c}}}} = {}, tr{{{{a,b}},c}} = {}",
                            parts[0][p], parts[1][p], parts[2][p]
                        );
                        witness(&[a, b, c], p, detail, &s)
                    })
                })
            },
        )
        .find_map_first(|x| x);
    let mut skew_r = VerificationReport::all("trace_skew", Vec::new());
    skew_r.checked = (pairs.len() * m) as u64;
    let mut jac_r = VerificationReport::all("trace_jacobi", Vec::new());
    jac_r.checked = (triples.len() * m) as u64;
    for (r, w) in [(&mut skew_r, skew), (&mut jac_r, jac)] {
        r.max_degree = Some(maxdeg);
        if let Some(w) = w {
            r.status = axioms::Status::Fail;
            r.witnesses.push(w);
        }
    }
    let mut out = VerificationReport::all("induced_poisson", vec![skew_r, jac_r]);
    out.max_degree = Some(maxdeg);
    out.notes.push(format!("{m} point(s) of size {}", points.first().map_or(0, |p| p.n)));
    out
}

/// `{a_ij, b_kl} = ⟪a,b⟫'_kj ⟪a,b⟫''_il` on the coordinate ring, returned as
/// a flat array indexed by `((i*N + j)*N + k)*N + l`. Only defined for
/// double Poisson brackets.
pub fn entrywise_bracket(spec: &BracketSpec, a: &Element, b: &Element, p: &MatrixPoint) -> Result<Vec<Q>> {
    if !axioms::check_double_poisson(spec).passed() {
        return Err(Error::Domain("entrywise brackets need a double Poisson bracket".into()));
    }
    let n = p.size();
    let mut out = vec![Q::zero(); n * n * n * n];
    for ((u1, u2), c) in spec.dbracket(a, b)?.sorted() {
        let (m1, m2) = (p.eval_word(u1)?, p.eval_word(u2)?);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let x = &(m1.get(k, j) * c);
                    if x.is_zero() {
                        continue;
                    }
                    for l in 0..n {
                        out[((i * n + j) * n + k) * n + l] += &(x * m2.get(i, l));
                    }
                }
            }
        }
    }
    Ok(out)
}
