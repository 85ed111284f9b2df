//! The classified families of quadratic brackets and grid searches over
//! their parameters.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::axioms::{self, VerificationReport};
use crate::bracket::{BracketSpec, WeightVector};
use crate::error::{Error, Result};
use crate::freealg::{Algebra, GenId, Tensor2, Word};
use crate::scalar::Q;

/// Parameters of one member of a classified family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum FamilyParams {
    /// Two generators, weight `(λ, ρ)`, mixed terms parametrised by `Γ`.
    Cl1 { lambda: Q, rho: Q, gamma: [Q; 4] },
    /// `ρ = -λ` branch.
    #[serde(rename = "cl1-1")]
    Cl1Minus { lambda: Q, alpha: Q, beta: Q },
    /// `ρ = λ` branch.
    #[serde(rename = "cl1-2")]
    Cl1Plus { lambda: Q, alpha: Q, beta: Q },
    /// Weight `(1,1,1)`; `alpha = (α̃1, α̃2, α̃3)`, `beta = (β̃1, β̃2, β̃3)`.
    Cl3a { alpha: [Q; 3], beta: [Q; 3] },
    /// Weight `(1,1,-1)`; `first = (α1, α2, β̃3)`, `second = (β1, β2, α̃3)`.
    Cl3b { first: [Q; 3], second: [Q; 3] },
    Cld { d: usize, delta: usize },
    Cld2 { d: usize, delta: usize },
    #[serde(rename = "mdbI")]
    MdbI,
    #[serde(rename = "mdbII")]
    MdbII,
    Kontsevich,
}

fn tuple(xs: &[Q]) -> String {
    format!("({})", xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
}

impl fmt::Display for FamilyParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use FamilyParams::*;
        match self {
            Cl1 { lambda, rho, gamma } => write!(f, "cl1 lambda={lambda} rho={rho} gamma={}", tuple(gamma)),
            Cl1Minus { lambda, alpha, beta } => write!(f, "cl1-1 lambda={lambda} alpha={alpha} beta={beta}"),
            Cl1Plus { lambda, alpha, beta } => write!(f, "cl1-2 lambda={lambda} alpha={alpha} beta={beta}"),
            Cl3a { alpha, beta } => write!(f, "cl3a alpha={} beta={}", tuple(alpha), tuple(beta)),
            Cl3b { first, second } => write!(f, "cl3b first={} second={}", tuple(first), tuple(second)),
            Cld { d, delta } => write!(f, "cld d={d} delta={delta}"),
            Cld2 { d, delta } => write!(f, "cld2 d={d} delta={delta}"),
            MdbI => write!(f, "mdbI"),
            MdbII => write!(f, "mdbII"),
            Kontsevich => write!(f, "kontsevich"),
        }
    }
}

/// Accumulates table entries as `c * left (x) right` on positive words.
struct TableBuilder {
    entries: Vec<((GenId, GenId), Tensor2)>,
}

impl TableBuilder {
    fn new() -> Self {
        TableBuilder { entries: Vec::new() }
    }

    /// `⟪v_i, v_j⟫ += Σ c * left ⊗ right`, generators 1-based.
    fn set(&mut self, i: u16, j: u16, terms: &[(Q, &[u16], &[u16])]) {
        let mut t = Tensor2::zero();
        for (c, l, r) in terms {
            let shift = |w: &[u16]| Word::gens(&w.iter().map(|x| x - 1).collect::<Vec<_>>());
            t.add_term((shift(l), shift(r)), c.clone());
        }
        self.entries.push(((GenId(i - 1), GenId(j - 1)), t));
    }

    fn finish(self, algebra: Algebra, weight: WeightVector) -> Result<BracketSpec> {
        BracketSpec::new(algebra, self.entries)?.with_weight(weight)
    }
}

fn q(n: i64) -> Q {
    Q::from_int(n)
}

fn binary(xs: &[Q], what: &str) -> Result<()> {
    if xs.iter().all(|x| x.is_zero() || x.is_one()) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} parameters must be 0 or 1")))
    }
}

/// Builds the bracket table and the weight of a family member.
pub fn build(params: &FamilyParams) -> Result<(BracketSpec, WeightVector)> {
    use FamilyParams::*;
    let spec = match params {
        Cl1 { lambda, rho, gamma } => build_cl1(lambda, rho, gamma)?,
        Cl1Minus { lambda, alpha, beta } => {
            let mut t = TableBuilder::new();
            t.set(1, 2, &[(alpha.clone(), &[], &[1, 2]), (-beta, &[2, 1], &[])]);
            t.set(2, 1, &[(beta - lambda, &[], &[2, 1]), (lambda - alpha, &[1, 2], &[])]);
            t.finish(Algebra::new(["v", "w"])?, WeightVector::new(vec![lambda.clone(), -lambda]))?
        }
        Cl1Plus { lambda, alpha, beta } => {
            let mut t = TableBuilder::new();
            t.set(1, 2, &[(alpha.clone(), &[1], &[2]), (-beta, &[2], &[1])]);
            t.set(2, 1, &[(beta - lambda, &[1], &[2]), (lambda - alpha, &[2], &[1])]);
            t.finish(Algebra::new(["v", "w"])?, WeightVector::new(vec![lambda.clone(), lambda.clone()]))?
        }
        Cl3a { alpha, beta } => {
            binary(alpha, "cl3a")?;
            binary(beta, "cl3a")?;
            let mut t = TableBuilder::new();
            // the pair (i, j) uses the constants indexed by the third generator
            for (i, j, k) in [(1u16, 2u16, 2usize), (1, 3, 1), (2, 3, 0)] {
                let (a, b) = (&alpha[k], &beta[k]);
                t.set(i, j, &[(a.clone(), &[i], &[j]), (-b, &[j], &[i])]);
                t.set(j, i, &[(b - &q(1), &[i], &[j]), (&q(1) - a, &[j], &[i])]);
            }
            t.finish(Algebra::free(3), WeightVector::from_ints(&[1, 1, 1]))?
        }
        Cl3b { first, second } => {
            binary(first, "cl3b")?;
            binary(second, "cl3b")?;
            let [a1, a2, bt3] = first;
            let [b1, b2, at3] = second;
            let mut t = TableBuilder::new();
            t.set(1, 2, &[(at3.clone(), &[1], &[2]), (-bt3, &[2], &[1])]);
            t.set(2, 1, &[(bt3 - &q(1), &[1], &[2]), (&q(1) - at3, &[2], &[1])]);
            for (i, a, b) in [(1u16, a2, b2), (2, a1, b1)] {
                t.set(i, 3, &[(a.clone(), &[], &[i, 3]), (-b, &[3, i], &[])]);
                t.set(3, i, &[(b - &q(1), &[], &[3, i]), (&q(1) - a, &[i, 3], &[])]);
            }
            t.finish(Algebra::free(3), WeightVector::from_ints(&[1, 1, -1]))?
        }
        Cld { d, delta } => build_cld(*d, *delta, false)?,
        Cld2 { d, delta } => build_cld(*d, *delta, true)?,
        MdbI => {
            let mut t = TableBuilder::new();
            t.set(1, 2, &[(q(-1), &[2, 1], &[])]);
            t.set(2, 1, &[(q(1), &[1, 2], &[])]);
            t.set(2, 3, &[(q(-1), &[2], &[3])]);
            t.set(3, 2, &[(q(1), &[2], &[3])]);
            t.set(3, 1, &[(q(-1), &[], &[3, 1])]);
            t.set(1, 3, &[(q(1), &[], &[1, 3])]);
            t.finish(Algebra::new(["x1", "x2", "x3"])?, WeightVector::from_ints(&[1, -1, -1]))?
        }
        MdbII => {
            let mut t = TableBuilder::new();
            t.set(1, 2, &[(q(-1), &[1], &[2])]);
            t.set(2, 1, &[(q(1), &[1], &[2])]);
            t.set(2, 3, &[(q(1), &[3], &[2])]);
            t.set(3, 2, &[(q(-1), &[3], &[2])]);
            t.set(3, 1, &[(q(1), &[1], &[3]), (q(-1), &[3], &[1])]);
            t.finish(Algebra::new(["x1", "x2", "x3"])?, WeightVector::from_ints(&[-1, -1, -1]))?
        }
        Kontsevich => {
            let mut t = TableBuilder::new();
            t.set(1, 2, &[(q(-1), &[2, 1], &[])]);
            t.set(2, 1, &[(q(1), &[1, 2], &[])]);
            // the CL1 member with rho = -lambda, so its weight is (1, -1)
            t.finish(Algebra::new(["v", "w"])?, WeightVector::from_ints(&[1, -1]))?
        }
    };
    let w = spec.weight().cloned().expect("builders attach a weight");
    Ok((spec, w))
}

fn build_cl1(lambda: &Q, rho: &Q, g: &[Q; 4]) -> Result<BracketSpec> {
    let h = |x: Q| x.half();
    let lp = lambda + rho;
    let lm = lambda - rho;
    let mut t = TableBuilder::new();
    t.set(
        1,
        2,
        &[
            (h(-&g[0]), &[1], &[2]),
            (h(g[1].clone()), &[2], &[1]),
            (h(-&g[2]), &[], &[1, 2]),
            (h(g[3].clone()), &[2, 1], &[]),
        ],
    );
    t.set(
        2,
        1,
        &[
            (h(-(&lp + &g[1])), &[1], &[2]),
            (h(&lp + &g[0]), &[2], &[1]),
            (h(-(&lm + &g[3])), &[], &[2, 1]),
            (h(&lm + &g[2]), &[1, 2], &[]),
        ],
    );
    t.finish(Algebra::new(["v", "w"])?, WeightVector::new(vec![lambda.clone(), rho.clone()]))
}

/// The weight `(1,…,1,-1,…,-1)` with `delta` leading ones.
pub fn one_delta(d: usize, delta: usize) -> WeightVector {
    WeightVector::new((0..d).map(|i| if i < delta { q(1) } else { q(-1) }).collect())
}

fn build_cld(d: usize, delta: usize, second: bool) -> Result<BracketSpec> {
    if d < 4 {
        return Err(Error::Domain(format!("d must be at least 4, got {d}")));
    }
    if delta > d {
        return Err(Error::Domain(format!("delta must lie in 0..={d}, got {delta}")));
    }
    let mut t = TableBuilder::new();
    let pos = |i: usize| i <= delta;
    for i in 1..=d as u16 {
        for j in (i + 1)..=d as u16 {
            match (pos(i as usize), pos(j as usize), second) {
                (true, true, false) => t.set(i, j, &[(q(1), &[i], &[j]), (q(-1), &[j], &[i])]),
                (true, false, false) => t.set(i, j, &[(q(1), &[], &[i, j]), (q(-1), &[j, i], &[])]),
                (false, false, false) => t.set(i, j, &[(q(-1), &[i], &[j]), (q(1), &[j], &[i])]),
                (true, true, true) => {
                    t.set(i, j, &[(q(1), &[i], &[j])]);
                    t.set(j, i, &[(q(-1), &[i], &[j])]);
                }
                (true, false, true) => {
                    t.set(i, j, &[(q(-1), &[j, i], &[])]);
                    t.set(j, i, &[(q(1), &[i, j], &[])]);
                }
                (false, false, true) => {
                    t.set(i, j, &[(q(-1), &[i], &[j])]);
                    t.set(j, i, &[(q(1), &[i], &[j])]);
                }
                (false, true, _) => unreachable!("i < j"),
            }
        }
    }
    t.finish(Algebra::free(d), one_delta(d, delta))
}

/// Outcome of a grid search: the points accepted by the generic verifier and
/// the points where the closed-form conditions disagree with it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GridSearch<P> {
    pub grid_size: usize,
    pub survivors: Vec<P>,
    pub disagreements: Vec<P>,
    pub exhaustive: bool,
}

/// Weight plus Poisson property, the generator-level Poisson test.
pub fn is_weighted_poisson(spec: &BracketSpec, w: &WeightVector) -> bool {
    axioms::check_weight(spec, w).passed() && axioms::check_poisson_property(spec, w).passed()
}

fn grid_search<P: Clone + Ord + Send + Sync>(
    points: Vec<P>,
    exhaustive: bool,
    verdict: impl Fn(&P) -> (bool, bool) + Sync,
) -> GridSearch<P> {
    let verdicts: Vec<(bool, bool)> = points.par_iter().map(&verdict).collect();
    let mut survivors = Vec::new();
    let mut disagreements = Vec::new();
    for (p, (generic, closed)) in points.iter().zip(&verdicts) {
        if *generic {
            survivors.push(p.clone());
        }
        if generic != closed {
            disagreements.push(p.clone());
        }
    }
    survivors.sort();
    disagreements.sort();
    GridSearch { grid_size: points.len(), survivors, disagreements, exhaustive }
}

/// A CL1 grid point `(ρ, Γ)`.
pub type Cl1Point = (Q, [Q; 4]);

/// `DJac(v, w, v)` for the CL1 family, expanded by hand.
pub fn cl1_djac_vwv(lambda: &Q, rho: &Q, g: &[Q; 4]) -> crate::freealg::Tensor3 {
    let lp = lambda + rho;
    let lm = lambda - rho;
    let quarter = Q::new(1, 4);
    let v = |w: &[u16]| Word::gens(w);
    let terms: [(Q, [&[u16]; 3]); 8] = [
        (-(&(&lp + &g[0]) * &g[0]), [&[0], &[1], &[0]]),
        (-(&(&lp + &g[0]) * &g[2]), [&[], &[0, 1], &[0]]),
        (-(&(&lm + &g[2]) * &g[0]), [&[0, 0], &[1], &[]]),
        (-(&(&lm + &g[2]) * &g[2]), [&[0], &[0, 1], &[]]),
        (&(&lp + &g[1]) * &g[1], [&[0], &[0], &[1]]),
        (&(&lp + &g[1]) * &g[3], [&[0, 0], &[], &[1]]),
        (&(&lm + &g[3]) * &g[1], [&[], &[0], &[1, 0]]),
        (&(&lm + &g[3]) * &g[3], [&[0], &[], &[1, 0]]),
    ];
    let mut out = crate::freealg::Tensor3::zero();
    for (c, [a, b, d]) in terms {
        out.add_term((v(a), v(b), v(d)), &c * &quarter);
    }
    out
}

/// The closed-form conditions: the two coefficient systems for `DJac(v,v,w)`
/// and `DJac(w,w,v)` plus vanishing of the hand expansion of `DJac(v,w,v)`.
pub fn cl1_closed_form(lambda: &Q, rho: &Q, g: &[Q; 4]) -> bool {
    let lp = lambda + rho;
    let lm = lambda - rho;
    let z = |x: Q| x.is_zero();
    let cond1 = z(&g[0] * &g[2])
        && z(&g[1] * &g[3])
        && g.iter().all(|gi| z(gi * &(lambda + &gi.half())));
    let cond2 = z(&(&lp + &g[1]) * &(&lm + &g[2]))
        && z(&(&lp + &g[0]) * &(&lm + &g[3]))
        && g.iter().all(|gi| z(&(&lp + gi) * &(&lm + gi)));
    cond1 && cond2 && cl1_djac_vwv(lambda, rho, g).is_zero()
}

/// `{0, -2λ}⁴` for `ρ = ±λ`, filtered by weight and Poisson property.
pub fn search_cl1(lambda: &Q) -> Result<GridSearch<Cl1Point>> {
    if lambda.is_zero() {
        return Err(Error::Domain("lambda must be nonzero".into()));
    }
    let values = [Q::zero(), -&(lambda * &q(2))];
    let rhos = [lambda.clone(), -lambda];
    Ok(search_cl1_on(lambda, &rhos, &values, true))
}

/// CL1 search over arbitrary candidate values for `ρ` and each `γ_i`.
pub fn search_cl1_on(lambda: &Q, rhos: &[Q], gammas: &[Q], exhaustive: bool) -> GridSearch<Cl1Point> {
    let mut points = Vec::new();
    for rho in rhos {
        for a in gammas {
            for b in gammas {
                for c in gammas {
                    for d in gammas {
                        points.push((rho.clone(), [a.clone(), b.clone(), c.clone(), d.clone()]));
                    }
                }
            }
        }
    }
    grid_search(points, exhaustive, |(rho, g)| {
        let spec = build_cl1(lambda, rho, g).expect("two generators");
        let w = WeightVector::new(vec![lambda.clone(), rho.clone()]);
        (is_weighted_poisson(&spec, &w), cl1_closed_form(lambda, rho, g))
    })
}

/// Rationals `p/q` with `|p| <= max_num`, `1 <= q <= max_den`, deduplicated and sorted.
pub fn rational_grid(max_num: i64, max_den: i64) -> Vec<Q> {
    let mut out: Vec<Q> = (1..=max_den).flat_map(|den| (-max_num..=max_num).map(move |n| Q::new(n, den))).collect();
    out.sort();
    out.dedup();
    out
}

pub type TriplePair = ([Q; 3], [Q; 3]);

fn binary_triples() -> Vec<[Q; 3]> {
    (0..8).map(|m| [q((m >> 2) & 1), q((m >> 1) & 1), q(m & 1)]).collect()
}

fn binary_grid() -> Vec<TriplePair> {
    let t = binary_triples();
    t.iter().flat_map(|a| t.iter().map(move |b| (a.clone(), b.clone()))).collect()
}

/// `x1 x2 + x2 x3 - x1 x3 - x2`, the common shape of the CL3 conditions.
pub fn triple_condition(x: &[Q; 3]) -> Q {
    &(&(&(&x[0] * &x[1]) + &(&x[1] * &x[2])) - &(&x[0] * &x[2])) - &x[1]
}

/// The six triples accepted by [`triple_condition`] over `{0,1}³`.
pub fn admissible_triples() -> Vec<[Q; 3]> {
    binary_triples().into_iter().filter(|t| triple_condition(t).is_zero()).collect()
}

pub fn cl3a_closed_form(alpha: &[Q; 3], beta: &[Q; 3]) -> bool {
    triple_condition(alpha).is_zero() && triple_condition(beta).is_zero()
}

pub fn cl3b_closed_form(first: &[Q; 3], second: &[Q; 3]) -> bool {
    triple_condition(first).is_zero() && triple_condition(second).is_zero()
}

/// All 64 binary parameter pairs of CL3a, filtered by the generic verifier.
pub fn search_cl3a() -> GridSearch<TriplePair> {
    grid_search(binary_grid(), true, |(a, b)| {
        let (spec, w) = build(&FamilyParams::Cl3a { alpha: a.clone(), beta: b.clone() }).expect("binary");
        (is_weighted_poisson(&spec, &w), cl3a_closed_form(a, b))
    })
}

/// All 64 binary parameter pairs of CL3b, filtered by the generic verifier.
pub fn search_cl3b() -> GridSearch<TriplePair> {
    grid_search(binary_grid(), true, |(a, b)| {
        let (spec, w) = build(&FamilyParams::Cl3b { first: a.clone(), second: b.clone() }).expect("binary");
        (is_weighted_poisson(&spec, &w), cl3b_closed_form(a, b))
    })
}

/// Brute-force bounds used for the `d >= 4` families.
#[derive(Clone, Copy, Debug)]
pub struct FamilyBounds {
    pub h0_degree: usize,
    pub jacobi_degree: usize,
}

impl FamilyBounds {
    /// Jacobi triples grow like `d^(3k)`. At `d = 5` degree 3 is about 3.7
    /// million triples per spec, so Jacobi stops at degree 2 there.
    pub fn for_dim(d: usize) -> Self {
        if d <= 4 {
            FamilyBounds { h0_degree: 4, jacobi_degree: 3 }
        } else {
            FamilyBounds { h0_degree: 4, jacobi_degree: 2 }
        }
    }
}

/// Both `d >= 4` families at `(d, δ)`: weight, Poisson property and bounded
/// H₀/Jacobi brute force.
pub fn verify_family_props(d: usize, delta: usize) -> Result<VerificationReport> {
    verify_family_props_with(d, delta, FamilyBounds::for_dim(d))
}

pub fn verify_family_props_with(d: usize, delta: usize, bounds: FamilyBounds) -> Result<VerificationReport> {
    let mut children = Vec::new();
    for params in [FamilyParams::Cld { d, delta }, FamilyParams::Cld2 { d, delta }] {
        let (spec, w) = build(&params)?;
        let mut r = axioms::check_modified_poisson_battery(&spec, &w, bounds.h0_degree, bounds.jacobi_degree);
        r.axiom = params.to_string();
        children.push(r);
    }
    Ok(VerificationReport::all(&format!("families d={d} delta={delta}"), children))
}
