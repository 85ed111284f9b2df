//! A small text format for bracket specifications (`.ndb` files).
//!
//! ```text
//! # Kontsevich bracket
//! name "kontsevich";
//! algebra v w;
//! weight 1 -1;
//! bracket
//!   {v,w} = -w*v (x) 1;
//!   {w,v} = v*w (x) 1;
//! ```

mod lexer;
mod parser;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::bracket::{BracketSpec, WeightVector};
use crate::error::Result;
use crate::freealg::{Algebra, GenId, Tensor2};
use crate::scalar::Q;

pub use parser::parse;

/// Syntax or name-resolution error with its source position.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
    /// Token kinds acceptable at this position, when known.
    pub expected: Vec<String>,
}

impl ParseError {
    pub(crate) fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        ParseError { line, col, message: message.into(), expected: Vec::new() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub invertible: bool,
}

/// Parsed form of a spec file. Comments are kept but not positioned; the
/// renderer writes them first.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct SpecDocument {
    pub name: Option<String>,
    pub comments: Vec<String>,
    pub generators: Vec<Generator>,
    pub weight: Option<Vec<Q>>,
    pub entries: BTreeMap<(GenId, GenId), Tensor2>,
}

pub const KEYWORDS: [&str; 5] = ["name", "algebra", "weight", "bracket", "inv"];

impl SpecDocument {
    /// The algebra of the generator block; inversions follow declaration order.
    pub fn algebra(&self) -> Result<Algebra> {
        let base = Algebra::new(self.generators.iter().map(|g| g.name.clone()))?;
        let inv: Vec<GenId> = self
            .generators
            .iter()
            .enumerate()
            .filter(|(_, g)| g.invertible)
            .map(|(i, _)| GenId(i as u16))
            .collect();
        base.localized(&inv)
    }

    pub fn to_spec(&self) -> Result<BracketSpec> {
        let spec = BracketSpec::new(self.algebra()?, self.entries.iter().map(|(k, t)| (*k, t.clone())))?;
        match &self.weight {
            Some(w) => spec.with_weight(WeightVector::new(w.clone())),
            None => Ok(spec),
        }
    }

    pub fn from_spec(spec: &BracketSpec, name: Option<&str>) -> Self {
        let a = spec.algebra();
        SpecDocument {
            name: name.map(str::to_string),
            comments: Vec::new(),
            generators: a
                .gens()
                .map(|g| Generator { name: a.name(g).to_string(), invertible: a.is_invertible(g) })
                .collect(),
            weight: spec.weight().map(|w| w.as_slice().to_vec()),
            entries: spec.table().clone(),
        }
    }

    /// Informational warnings: entries that are not homogeneous of degree two.
    pub fn lint(&self) -> Vec<String> {
        let Ok(a) = self.algebra() else { return vec!["invalid algebra block".into()] };
        let mut out = Vec::new();
        for (&(i, j), t) in &self.entries {
            if let Some(((x, y), _)) = t.sorted().into_iter().find(|((x, y), _)| x.degree() + y.degree() != 2) {
                out.push(format!(
                    "{{{},{}}} is not quadratic: term {} (x) {} has degree {}",
                    a.name(i),
                    a.name(j),
                    a.render_word(x),
                    a.render_word(y),
                    x.degree() + y.degree()
                ));
            }
        }
        out
    }

    /// Canonical text; equal documents render identically.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            let _ = writeln!(out, "# {c}");
        }
        if let Some(n) = &self.name {
            let esc = n.replace('\\', "\\\\").replace('"', "\\\"").replace('\n', "\\n");
            let _ = writeln!(out, "name \"{esc}\";");
        }
        let gens: Vec<String> = self
            .generators
            .iter()
            .map(|g| if g.invertible { format!("{} inv", g.name) } else { g.name.clone() })
            .collect();
        let _ = writeln!(out, "algebra {};", gens.join(" "));
        if let Some(w) = &self.weight {
            let ws: Vec<String> = w.iter().map(Q::to_string).collect();
            let _ = writeln!(out, "weight {};", ws.join(" "));
        }
        if self.entries.is_empty() {
            out.push_str("bracket;\n");
            return out;
        }
        out.push_str("bracket\n");
        let a = self.algebra().ok();
        let name = |g: GenId| self.generators[g.index()].name.as_str();
        for (&(i, j), t) in &self.entries {
            let body = match &a {
                Some(a) => a.render_tensor2(t),
                None => "0".into(),
            };
            let _ = writeln!(out, "  {{{},{}}} = {};", name(i), name(j), body);
        }
        out
    }
}

/// Renders a spec as a document.
pub fn render(doc: &SpecDocument) -> String {
    doc.render()
}
