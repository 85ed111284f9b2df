//! Decision procedures for the bracket axioms.
//!
//! Identities that are determined by generators (skew defects, weight, the
//! Poisson property) are checked exactly on all generator pairs or triples.
//! The H₀-skew-symmetry and Jacobi identities of the modified bracket are
//! brute-forced over all monomials up to a degree bound.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bracket::{BracketSpec, MixedType, WeightVector};
use crate::error::{Error, Result};
use crate::freealg::{reduce_mod_commutators, Algebra, Element, GenId, Letter, Tensor2, Tensor3, Word};
use crate::scalar::Q;

pub const DEFAULT_PAIR_DEGREE: usize = 4;
pub const DEFAULT_TRIPLE_DEGREE: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// A failing input with the expected and computed values, rendered over the
/// spec's algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub inputs: Vec<String>,
    pub expected: String,
    pub actual: String,
    pub residual: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub axiom: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub max_degree: Option<usize>,
    pub checked: u64,
    #[serde(default)]
    pub witnesses: Vec<Witness>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<VerificationReport>,
}

impl VerificationReport {
    fn new(axiom: &str, checked: u64, witnesses: Vec<Witness>) -> Self {
        let status = if witnesses.is_empty() { Status::Pass } else { Status::Fail };
        VerificationReport {
            axiom: axiom.to_string(),
            status,
            max_degree: None,
            checked,
            witnesses,
            notes: Vec::new(),
            children: Vec::new(),
        }
    }

    /// A failing report that has no computed witness (e.g. malformed input).
    pub fn rejected(axiom: &str, note: impl Into<String>) -> Self {
        let mut r = VerificationReport::new(axiom, 0, Vec::new());
        r.status = Status::Fail;
        r.notes.push(note.into());
        r
    }

    /// Combines sub-reports; passes iff all of them pass.
    pub fn all(axiom: &str, children: Vec<VerificationReport>) -> Self {
        let mut r = VerificationReport::new(axiom, children.iter().map(|c| c.checked).sum(), Vec::new());
        if children.iter().any(|c| !c.passed()) {
            r.status = Status::Fail;
        }
        r.children = children;
        r
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    fn with_degree(mut self, d: usize) -> Self {
        self.max_degree = Some(d);
        self
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

/// Whether sweeps stop at the first counterexample (in canonical input order)
/// or collect every one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum WitnessPolicy {
    #[default]
    First,
    All,
}

fn letter_el(l: Letter) -> Element {
    Element::word(Word::letter(l))
}

fn render_inputs(alg: &Algebra, xs: &[&Word]) -> Vec<String> {
    xs.iter().map(|w| alg.render_word(w)).collect()
}

fn t2_witness(alg: &Algebra, inputs: &[&Word], expected: &Tensor2, actual: &Tensor2) -> Witness {
    Witness {
        inputs: render_inputs(alg, inputs),
        expected: alg.render_tensor2(expected),
        actual: alg.render_tensor2(actual),
        residual: alg.render_tensor2(&(actual - expected)),
    }
}

fn t3_witness(alg: &Algebra, inputs: &[&Word], expected: &Tensor3, actual: &Tensor3) -> Witness {
    Witness {
        inputs: render_inputs(alg, inputs),
        expected: alg.render_tensor3(expected),
        actual: alg.render_tensor3(actual),
        residual: alg.render_tensor3(&(actual - expected)),
    }
}

/// `⟪x,y⟫ + ⟪y,x⟫°`.
pub fn skew_defect(spec: &BracketSpec, x: &Element, y: &Element) -> Result<Tensor2> {
    Ok(&spec.dbracket(x, y)? + &spec.dbracket(y, x)?.flip())
}

fn skew_defect_letters(spec: &BracketSpec, x: Letter, y: Letter) -> Tensor2 {
    spec.dbracket_unchecked(&letter_el(x), &letter_el(y)) + spec.dbracket_unchecked(&letter_el(y), &letter_el(x)).flip()
}

/// Compares `actual(x, y)` against `expected(x, y)` over all ordered letter
/// pairs of the algebra.
fn sweep_letter_pairs(
    spec: &BracketSpec,
    axiom: &str,
    mut expected: impl FnMut(Letter, Letter) -> Tensor2,
    mut actual: impl FnMut(Letter, Letter) -> Tensor2,
) -> VerificationReport {
    let alg = spec.algebra();
    let letters = alg.letters();
    let mut witnesses = Vec::new();
    let mut checked = 0;
    for &x in &letters {
        for &y in &letters {
            checked += 1;
            let e = expected(x, y);
            let a = actual(x, y);
            if e != a && witnesses.is_empty() {
                witnesses.push(t2_witness(alg, &[&Word::letter(x), &Word::letter(y)], &e, &a));
            }
        }
    }
    VerificationReport::new(axiom, checked, witnesses)
}

fn sweep_letter_triples(
    spec: &BracketSpec,
    axiom: &str,
    mut expected: impl FnMut(Letter, Letter, Letter) -> Tensor3,
) -> VerificationReport {
    let alg = spec.algebra();
    let letters = alg.letters();
    let mut witnesses = Vec::new();
    let mut checked = 0;
    for &x in &letters {
        for &y in &letters {
            for &z in &letters {
                checked += 1;
                let a = spec.djac_unchecked(&letter_el(x), &letter_el(y), &letter_el(z));
                let e = expected(x, y, z);
                if e != a && witnesses.is_empty() {
                    let ws = [Word::letter(x), Word::letter(y), Word::letter(z)];
                    witnesses.push(t3_witness(alg, &[&ws[0], &ws[1], &ws[2]], &e, &a));
                }
            }
        }
    }
    VerificationReport::new(axiom, checked, witnesses)
}

/// `⟪x,y⟫ = -⟪y,x⟫°` on all letter pairs.
pub fn check_cyclic_skew(spec: &BracketSpec) -> VerificationReport {
    sweep_letter_pairs(spec, "cyclic_skew", |_, _| Tensor2::zero(), |x, y| skew_defect_letters(spec, x, y))
}

/// Cyclic skew-symmetry plus a vanishing double Jacobiator on generators.
pub fn check_double_poisson(spec: &BracketSpec) -> VerificationReport {
    let skew = check_cyclic_skew(spec);
    let djac = sweep_letter_triples(spec, "djac_vanishes", |_, _, _| Tensor3::zero());
    VerificationReport::all("double_poisson", vec![skew, djac])
}

/// Skew defects on generator pairs against the prescribed type.
pub fn check_mixed_type(spec: &BracketSpec, ty: &MixedType) -> VerificationReport {
    let d = spec.algebra().ngens();
    if ty.dim() != d || ty.mu.len() != d {
        return VerificationReport::rejected("mixed_type", format!("type has dimension {}, algebra has {d} generators", ty.dim()));
    }
    let mut r = sweep_positive_pairs(spec, "mixed_type", |i, j| ty.defect(i, j));
    if !ty.satisfies_cond_lm() {
        r.status = Status::Fail;
        r.notes.push("type violates CondLM: Lambda must be symmetric and M skew with zero diagonal".into());
    }
    r
}

fn sweep_positive_pairs(
    spec: &BracketSpec,
    axiom: &str,
    mut expected: impl FnMut(GenId, GenId) -> Tensor2,
) -> VerificationReport {
    let alg = spec.algebra();
    let mut witnesses = Vec::new();
    let mut checked = 0;
    for i in alg.gens() {
        for j in alg.gens() {
            checked += 1;
            let (x, y) = (Letter::pos(i), Letter::pos(j));
            let a = skew_defect_letters(spec, x, y);
            let e = expected(i, j);
            if a != e && witnesses.is_empty() {
                witnesses.push(t2_witness(alg, &[&Word::gen(i), &Word::gen(j)], &e, &a));
            }
        }
    }
    VerificationReport::new(axiom, checked, witnesses)
}

/// Reads `(Λ, M)` off the skew defects of the positive generators.
///
/// Off-diagonal entries are the coefficients of `v_i⊗v_j`, `1⊗v_iv_j` and
/// `v_jv_i⊗1`. The defect does not see `λ_ii`; it is set to `λ_il + μ_il`
/// with `l` the first other generator, which is the value any weight must
/// give it.
pub fn infer_mixed_type(spec: &BracketSpec) -> Result<MixedType> {
    let alg = spec.algebra();
    let d = alg.ngens();
    let mut ty = MixedType::zero(d);
    for i in alg.gens() {
        for j in alg.gens() {
            let defect = skew_defect_letters(spec, Letter::pos(i), Letter::pos(j));
            let (a, b) = (i.index(), j.index());
            if i == j {
                if !defect.is_zero() {
                    return Err(Error::Inference(format!(
                        "skew defect of ({0}, {0}) is {1}, not of mixed type",
                        alg.name(i),
                        alg.render_tensor2(&defect)
                    )));
                }
                continue;
            }
            let vi = Word::gen(i);
            let vj = Word::gen(j);
            ty.lambda[a][b] = defect.coeff(&(vi.clone(), vj.clone()));
            ty.mu[a][b] = defect.coeff(&(Word::one(), vi.concat(&vj)));
            let mu_ji = defect.coeff(&(vj.concat(&vi), Word::one()));
            if mu_ji != -&ty.mu[a][b] {
                return Err(Error::Inference(format!(
                    "skew defect of ({}, {}) has mu_ij = {} but mu_ji = {}",
                    alg.name(i),
                    alg.name(j),
                    ty.mu[a][b],
                    mu_ji
                )));
            }
            ty.mu[b][a] = mu_ji;
            if ty.defect(i, j) != defect {
                return Err(Error::Inference(format!(
                    "skew defect of ({}, {}) is {}, outside the quadratic span",
                    alg.name(i),
                    alg.name(j),
                    alg.render_tensor2(&defect)
                )));
            }
        }
    }
    for i in 0..d {
        if let Some(l) = (0..d).find(|&l| l != i) {
            ty.lambda[i][i] = &ty.lambda[i][l] + &ty.mu[i][l];
        }
    }
    Ok(ty)
}

/// `λ_ij - λ_kl = μ_il - μ_kj` for all index quadruples.
pub fn check_wskm(ty: &MixedType) -> VerificationReport {
    let d = ty.dim() as u64;
    let mut r = VerificationReport::new("wskm", d.pow(4), Vec::new());
    if let Some((i, j, k, l)) = ty.wskm_violation() {
        r.status = Status::Fail;
        r.witnesses.push(Witness {
            inputs: [i, j, k, l].iter().map(|x| (x + 1).to_string()).collect(),
            expected: (&ty.mu[i][l] - &ty.mu[k][j]).to_string(),
            actual: (&ty.lambda[i][j] - &ty.lambda[k][l]).to_string(),
            residual: (&(&ty.lambda[i][j] - &ty.lambda[k][l]) - &(&ty.mu[i][l] - &ty.mu[k][j])).to_string(),
        });
    }
    r
}

/// The defect prescribed by a weight for a pair of letters.
pub fn weight_defect(w: &WeightVector, x: Letter, y: Letter) -> Tensor2 {
    let (lx, ly) = (w.letter_weight(x), w.letter_weight(y));
    let plus = (&lx + &ly).half();
    let minus = (&lx - &ly).half();
    let (wx, wy) = (Word::letter(x), Word::letter(y));
    let mut out = Tensor2::zero();
    out.add_term((wx.clone(), wy.clone()), plus.clone());
    out.add_term((wy.clone(), wx.clone()), -&plus);
    out.add_term((Word::one(), wx.concat(&wy)), minus.clone());
    out.add_term((wy.concat(&wx), Word::one()), -&minus);
    out
}

/// Weight condition on every letter pair, inverse letters carrying `-λ`.
pub fn check_weight(spec: &BracketSpec, w: &WeightVector) -> VerificationReport {
    if w.len() != spec.algebra().ngens() {
        return VerificationReport::rejected(
            "weight",
            format!("weight has length {}, algebra has {} generators", w.len(), spec.algebra().ngens()),
        );
    }
    sweep_letter_pairs(spec, "weight", |x, y| weight_defect(w, x, y), |x, y| skew_defect_letters(spec, x, y))
}

/// Weight read off the positive generators, then confirmed on all letters.
pub fn infer_weight(spec: &BracketSpec) -> Result<WeightVector> {
    let ty = infer_mixed_type(spec)?;
    let w = WeightVector::new((0..ty.dim()).map(|i| ty.lambda[i][i].clone()).collect());
    let report = check_weight(spec, &w);
    if !report.passed() {
        let detail = report.witnesses.first().map(|x| format!(" at ({})", x.inputs.join(", "))).unwrap_or_default();
        return Err(Error::Inference(format!("type is not induced by a weight{detail}")));
    }
    Ok(w)
}

/// Right-hand side of the Poisson property for `DJac(x, y, c)`.
pub fn poisson_rhs(spec: &BracketSpec, w: &WeightVector, x: Letter, y: Letter, c: &Element) -> Tensor3 {
    let (lx, ly) = (w.letter_weight(x), w.letter_weight(y));
    let plus = -(&lx + &ly).half();
    let minus = (&lx - &ly).half();
    let bxc = spec.dbracket_unchecked(&letter_el(x), c);
    let ye = letter_el(y);
    let mut out = bxc.otimes1_left(&ye).scale(&plus);
    let inner = Tensor2::inner_act(&ye, &bxc, &Element::one());
    out.add_scaled(&inner.otimes1_left(&Element::one()), &minus);
    out
}

/// `DJac(x,y,z)` against the Poisson property on all letter triples.
pub fn check_poisson_property(spec: &BracketSpec, w: &WeightVector) -> VerificationReport {
    if w.len() != spec.algebra().ngens() {
        return VerificationReport::rejected(
            "poisson_property",
            format!("weight has length {}, algebra has {} generators", w.len(), spec.algebra().ngens()),
        );
    }
    sweep_letter_triples(spec, "poisson_property", |x, y, z| poisson_rhs(spec, w, x, y, &letter_el(z)))
}

/// `{a,b} + {b,a} ∈ [A,A]` for all monomials of degree at most `maxdeg`.
pub fn check_h0_skew(spec: &BracketSpec, maxdeg: usize) -> VerificationReport {
    check_h0_skew_with(spec, maxdeg, WitnessPolicy::First)
}

pub fn check_h0_skew_with(spec: &BracketSpec, maxdeg: usize, policy: WitnessPolicy) -> VerificationReport {
    let alg = spec.algebra();
    let words = alg.monomials(maxdeg);
    let n = words.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let residual = |&(i, j): &(usize, usize)| {
        let (a, b) = (&words[i], &words[j]);
        let mut s = Element::zero();
        spec.mbracket_words_into(a, b, &Q::one(), &mut s);
        spec.mbracket_words_into(b, a, &Q::one(), &mut s);
        let r = reduce_mod_commutators(&s);
        (!r.is_zero()).then(|| Witness {
            inputs: render_inputs(alg, &[a, b]),
            expected: "0".into(),
            actual: alg.render_element(&s),
            residual: alg.render_element(&r),
        })
    };
    let witnesses = collect_witnesses(&pairs, policy, residual);
    let mut r = VerificationReport::new("h0_skew", pairs.len() as u64, witnesses).with_degree(maxdeg);
    if !alg.is_free() {
        r = r.with_note("Laurent words compared up to cyclic reduction and rotation");
    }
    r
}

fn collect_witnesses<T: Sync>(
    items: &[T],
    policy: WitnessPolicy,
    f: impl Fn(&T) -> Option<Witness> + Sync,
) -> Vec<Witness> {
    match policy {
        WitnessPolicy::First => items.par_iter().find_map_first(&f).into_iter().collect(),
        WitnessPolicy::All => items.par_iter().filter_map(&f).collect(),
    }
}

/// The Jacobi identity `{a,{b,c}} - {b,{a,c}} - {{a,b},c} = 0` for all
/// monomials of degree at most `maxdeg`.
pub fn check_jacobi(spec: &BracketSpec, maxdeg: usize) -> VerificationReport {
    check_jacobi_with(spec, maxdeg, WitnessPolicy::First)
}

pub fn check_jacobi_with(spec: &BracketSpec, maxdeg: usize, policy: WitnessPolicy) -> VerificationReport {
    let alg = spec.algebra();
    let words = alg.monomials(maxdeg);
    let n = words.len();
    // {x, y} for every pair of enumerated monomials
    let pair: Vec<Vec<(Word, Q)>> = (0..n * n)
        .into_par_iter()
        .map(|k| {
            let mut e = Element::zero();
            spec.mbracket_words_into(&words[k / n], &words[k % n], &Q::one(), &mut e);
            e.iter().map(|(w, c)| (w.clone(), c.clone())).collect()
        })
        .collect();
    let triples: Vec<usize> = (0..n * n * n).collect();
    let jac = |&t: &usize| {
        let (i, j, k) = (t / (n * n), (t / n) % n, t % n);
        let (a, b, c) = (&words[i], &words[j], &words[k]);
        let mut acc = Element::zero();
        for (w, q) in &pair[j * n + k] {
            spec.mbracket_words_into(a, w, q, &mut acc);
        }
        for (w, q) in &pair[i * n + k] {
            spec.mbracket_words_into(b, w, &-q, &mut acc);
        }
        for (w, q) in &pair[i * n + j] {
            spec.mbracket_words_into(w, c, &-q, &mut acc);
        }
        (!acc.is_zero()).then(|| Witness {
            inputs: render_inputs(alg, &[a, b, c]),
            expected: "0".into(),
            actual: alg.render_element(&acc),
            residual: alg.render_element(&acc),
        })
    };
    let witnesses = collect_witnesses(&triples, policy, jac);
    VerificationReport::new("jacobi", triples.len() as u64, witnesses).with_degree(maxdeg)
}

/// The λ-double Lie identities on generators; requires `V⊗V`-valued entries.
pub fn check_lambda_double_lie(spec: &BracketSpec, lambda: &Q) -> VerificationReport {
    if !spec.is_linear_tensor_valued() {
        return VerificationReport::rejected("lambda_double_lie", "not V(x)V-valued");
    }
    let skew = sweep_letter_pairs(
        spec,
        "lambda_skew",
        |x, y| {
            let (wx, wy) = (Word::letter(x), Word::letter(y));
            let mut t = Tensor2::pure(wx.clone(), wy.clone(), lambda.clone());
            t.add_term((wy, wx), -lambda);
            t
        },
        |x, y| skew_defect_letters(spec, x, y),
    );
    let jac = sweep_letter_triples(spec, "lambda_jacobi", |x, y, z| {
        spec.dbracket_unchecked(&letter_el(x), &letter_el(z)).otimes1_left(&letter_el(y)).scale(&-lambda)
    });
    VerificationReport::all("lambda_double_lie", vec![skew, jac])
}

/// Weight, Poisson property, H₀-skew and Jacobi in one report. The last two
/// are brute-forced independently of the first two.
pub fn check_modified_poisson_battery(
    spec: &BracketSpec,
    w: &WeightVector,
    pair_degree: usize,
    triple_degree: usize,
) -> VerificationReport {
    VerificationReport::all(
        "modified_double_poisson",
        vec![
            check_weight(spec, w),
            check_poisson_property(spec, w),
            check_h0_skew(spec, pair_degree),
            check_jacobi(spec, triple_degree),
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(i: u16) -> GenId {
        GenId(i)
    }

    #[test]
    fn zero_spec_passes_everything() {
        let s = BracketSpec::zero(Algebra::free(2));
        assert!(check_cyclic_skew(&s).passed());
        assert!(check_double_poisson(&s).passed());
        assert_eq!(infer_mixed_type(&s).unwrap(), MixedType::zero(2));
        assert!(check_jacobi(&s, 2).passed());
        assert!(check_h0_skew(&s, 2).passed());
        assert!(check_lambda_double_lie(&s, &Q::zero()).passed());
    }

    #[test]
    fn single_entry_fails_h0_skew_at_first_pair() {
        let s = BracketSpec::new(
            Algebra::free(2),
            [((g(0), g(1)), Tensor2::pure(Word::gen(g(0)), Word::gen(g(1)), Q::one()))],
        )
        .unwrap();
        let r = check_h0_skew(&s, 2);
        assert!(!r.passed());
        assert_eq!(r.witnesses[0].inputs, vec!["v1", "v2"]);
        assert_eq!(r.witnesses[0].residual, "v1*v2");
    }

    #[test]
    fn reports_are_deterministic() {
        let s = BracketSpec::new(
            Algebra::free(2),
            [((g(0), g(1)), Tensor2::pure(Word::gen(g(0)), Word::gen(g(1)), Q::one()))],
        )
        .unwrap();
        let a = serde_json::to_string(&check_jacobi(&s, 2)).unwrap();
        let b = serde_json::to_string(&check_jacobi(&s, 2)).unwrap();
        assert_eq!(a, b);
        let all = check_jacobi_with(&s, 2, WitnessPolicy::All);
        assert!(all.witnesses.len() >= 1);
        assert_eq!(all.witnesses[0], check_jacobi(&s, 2).witnesses[0]);
    }

    #[test]
    fn wrong_weight_length_is_rejected() {
        let s = BracketSpec::zero(Algebra::free(2));
        let r = check_weight(&s, &WeightVector::from_ints(&[1]));
        assert!(!r.passed());
        assert!(r.witnesses.is_empty());
    }
}
