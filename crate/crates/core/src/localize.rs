//! Extension of a weighted bracket to a Laurent localisation.
//!
//! Only positive-letter tables are stored; brackets involving inverse letters
//! are always derived from them, which is the unique extension.

use crate::axioms;
use crate::bracket::{BracketSpec, WeightVector};
use crate::error::{Error, Result};
use crate::freealg::{Algebra, GenId};

/// Generators to invert, in order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalisationPlan {
    base: Algebra,
    invert: Vec<GenId>,
}

impl LocalisationPlan {
    pub fn new(base: &Algebra, invert: Vec<GenId>) -> Result<Self> {
        if !base.is_free() {
            return Err(Error::InvalidAlgebra("the base algebra is already localised".into()));
        }
        // validates range and distinctness
        base.localized(&invert)?;
        Ok(LocalisationPlan { base: base.clone(), invert })
    }

    /// Plan from generator names.
    pub fn by_names(base: &Algebra, names: &[&str]) -> Result<Self> {
        let invert = names
            .iter()
            .map(|n| base.gen_by_name(n).ok_or_else(|| Error::UnknownGenerator(n.to_string())))
            .collect::<Result<Vec<_>>>()?;
        Self::new(base, invert)
    }

    /// Inverts every generator.
    pub fn all(base: &Algebra) -> Result<Self> {
        Self::new(base, base.gens().collect())
    }

    pub fn base(&self) -> &Algebra {
        &self.base
    }

    pub fn invert(&self) -> &[GenId] {
        &self.invert
    }
}

/// The spec over the localised algebra together with its weight. The
/// extended weight on letters is `(λ_1, …, λ_d, -λ_{i_1}, …, -λ_{i_r})`,
/// see [`WeightVector::extended`].
pub fn localize(spec: &BracketSpec, w: &WeightVector, plan: &LocalisationPlan) -> Result<(BracketSpec, WeightVector)> {
    if spec.algebra() != plan.base() {
        return Err(Error::AlgebraMismatch("plan was made for a different algebra".into()));
    }
    let report = axioms::check_weight(spec, w);
    if !report.passed() {
        let at = report.witnesses.first().map(|x| format!("fails at ({})", x.inputs.join(", ")));
        return Err(Error::WeightHypothesis(at.unwrap_or_else(|| report.notes.join("; "))));
    }
    let algebra = plan.base().localized(plan.invert())?;
    let out = spec.rehost(algebra)?.with_weight(w.clone())?;
    Ok((out, w.clone()))
}
