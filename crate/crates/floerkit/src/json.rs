//! The JSON document format for complexes.

use std::collections::{BTreeMap, BTreeSet};

use floerkit_core::{Arrow, CfkComplex, FieldKind, Generator};
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed document: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("schema error: duplicate generator name `{0}`")]
    Duplicate(String),
    #[error("schema error: arrows[{index}].{field} references unknown generator `{name}`")]
    Unknown { index: usize, field: &'static str, name: String },
    #[error("schema error: generators[{index}].maslov has denominator 0")]
    ZeroDenominator { index: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum FieldTag {
    #[default]
    F2,
    Q,
}

impl From<FieldTag> for FieldKind {
    fn from(t: FieldTag) -> Self {
        match t {
            FieldTag::F2 => FieldKind::F2,
            FieldTag::Q => FieldKind::Q,
        }
    }
}

impl From<FieldKind> for FieldTag {
    fn from(k: FieldKind) -> Self {
        match k {
            FieldKind::F2 => FieldTag::F2,
            FieldKind::Q => FieldTag::Q,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneratorDoc {
    name: String,
    alexander: i64,
    maslov: [i64; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArrowDoc {
    from: String,
    to: String,
    nw: i64,
    nz: i64,
    coeff: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    name: String,
    #[serde(default)]
    field: FieldTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    spinc: Option<String>,
    generators: Vec<GeneratorDoc>,
    #[serde(default)]
    arrows: Vec<ArrowDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    flip: Option<BTreeMap<String, String>>,
    /// Signs of the flip map, only meaningful over Q.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    flip_signs: Option<BTreeMap<String, i64>>,
}

/// Parses a document. Only the schema is checked here: syntax, duplicate
/// names and dangling references. Mathematical validity is left to
/// `validate_complex`.
pub fn parse_complex(text: &str) -> Result<CfkComplex, FormatError> {
    let doc: Document = serde_json::from_str(text)?;
    let mut seen = BTreeSet::new();
    let mut generators = Vec::with_capacity(doc.generators.len());
    for (index, g) in doc.generators.into_iter().enumerate() {
        if !seen.insert(g.name.clone()) {
            return Err(FormatError::Duplicate(g.name));
        }
        let [num, den] = g.maslov;
        if den == 0 {
            return Err(FormatError::ZeroDenominator { index });
        }
        generators.push(Generator { name: g.name, alexander: g.alexander, maslov: Ratio::new(num, den) });
    }
    let mut arrows = Vec::with_capacity(doc.arrows.len());
    for (index, a) in doc.arrows.into_iter().enumerate() {
        for (field, name) in [("from", &a.from), ("to", &a.to)] {
            if !seen.contains(name) {
                return Err(FormatError::Unknown { index, field, name: name.clone() });
            }
        }
        arrows.push(Arrow { from: a.from, to: a.to, nw: a.nw, nz: a.nz, coeff: a.coeff });
    }
    Ok(CfkComplex {
        name: doc.name,
        field: doc.field.into(),
        spinc: doc.spinc,
        generators,
        arrows,
        flip: doc.flip,
        flip_signs: doc.flip_signs,
    })
}

/// Generators sorted by name and arrows by `(from, to, nw, nz, coeff)`.
pub fn canonicalize(c: &CfkComplex) -> CfkComplex {
    let mut out = c.clone();
    out.generators.sort_by(|a, b| a.name.cmp(&b.name));
    out.arrows
        .sort_by(|a, b| (&a.from, &a.to, a.nw, a.nz, a.coeff).cmp(&(&b.from, &b.to, b.nw, b.nz, b.coeff)));
    out
}

pub fn serialize_complex(c: &CfkComplex) -> String {
    let c = canonicalize(c);
    let doc = Document {
        name: c.name,
        field: c.field.into(),
        spinc: c.spinc,
        generators: c
            .generators
            .into_iter()
            .map(|g| GeneratorDoc { name: g.name, alexander: g.alexander, maslov: [*g.maslov.numer(), *g.maslov.denom()] })
            .collect(),
        arrows: c
            .arrows
            .into_iter()
            .map(|a| ArrowDoc { from: a.from, to: a.to, nw: a.nw, nz: a.nz, coeff: a.coeff })
            .collect(),
        flip: c.flip,
        flip_signs: c.flip_signs,
    };
    serde_json::to_string_pretty(&doc).expect("documents always serialize")
}
