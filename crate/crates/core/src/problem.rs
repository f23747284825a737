//! JSON problem files.
//!
//! ```json
//! {
//!   "field": {"kind": "GFp", "p": 5},
//!   "poset": {"order": ["a1", "a2", "a3"], "involution": [["a1", "a2"]]},
//!   "objects": {
//!     "B": {"dims": {"a1": 1, "a2": 1}, "blocks": {"a1,a2": [0]}}
//!   },
//!   "morphisms": {
//!     "T": {"source": "B", "target": "B", "blocks": {"a1,a1": [1], "a2,a2": [1]}}
//!   },
//!   "kappa": {}
//! }
//! ```
//!
//! Blocks are keyed `"row,col"` by label and hold row-major entries. Over
//! `Q` entries are strings such as `"-3/4"`; over `GF(p)` they are integers.
//! Either spelling is accepted on input. Missing blocks are zero, missing
//! dims are zero, and every literal is validated on load.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::block::{BlockMatrix, DimVector};
use crate::field::{Field, FieldSpec, PrimeField, Rationals};
use crate::homotopy::KappaMatrix;
use crate::linalg::DenseMatrix;
use crate::poset::IndexSet;
use crate::rep::{Morphism, Representation};

#[derive(Debug, Error)]
pub enum ProblemError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{name}: {condition}")]
    Validation { name: String, condition: String },
}

fn invalid(name: &str, condition: impl ToString) -> ProblemError {
    ProblemError::Validation { name: name.to_string(), condition: condition.to_string() }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum RawField {
    Q,
    GFp { p: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawPoset {
    pub order: Vec<String>,
    #[serde(default)]
    pub involution: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawObject {
    pub dims: BTreeMap<String, usize>,
    #[serde(default)]
    pub blocks: BTreeMap<String, Vec<Value>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawMap {
    pub source: String,
    pub target: String,
    #[serde(default)]
    pub blocks: BTreeMap<String, Vec<Value>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawProblem {
    pub field: RawField,
    pub poset: RawPoset,
    #[serde(default)]
    pub objects: BTreeMap<String, RawObject>,
    #[serde(default)]
    pub morphisms: BTreeMap<String, RawMap>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub kappa: BTreeMap<String, RawMap>,
}

/// A validated problem over a concrete field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Problem<F: Field> {
    pub field: F,
    pub index_set: Arc<IndexSet>,
    pub objects: BTreeMap<String, Representation<F>>,
    pub morphisms: BTreeMap<String, Morphism<F>>,
    pub kappa: BTreeMap<String, KappaMatrix<F>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyProblem {
    Rational(Problem<Rationals>),
    Prime(Problem<PrimeField>),
}

impl AnyProblem {
    pub fn parse(text: &str) -> Result<Self, ProblemError> {
        let raw: RawProblem = serde_json::from_str(text).map_err(|e| ProblemError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        match raw.field {
            RawField::Q => Ok(AnyProblem::Rational(Problem::from_raw(Rationals, &raw)?)),
            RawField::GFp { p } => {
                let f = PrimeField::new(p).map_err(|e| invalid("field", e))?;
                Ok(AnyProblem::Prime(Problem::from_raw(f, &raw)?))
            }
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ProblemError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|source| ProblemError::Io { path: path.display().to_string(), source })?;
        Self::parse(&text)
    }

    pub fn spec(&self) -> FieldSpec {
        match self {
            AnyProblem::Rational(p) => p.field.spec(),
            AnyProblem::Prime(p) => p.field.spec(),
        }
    }

    pub fn to_json(&self) -> String {
        match self {
            AnyProblem::Rational(p) => p.to_json(),
            AnyProblem::Prime(p) => p.to_json(),
        }
    }
}

fn parse_entry<F: Field>(field: &F, name: &str, v: &Value) -> Result<F::Elem, ProblemError> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
        other => return Err(invalid(name, format!("entry {other} is neither an integer nor a string"))),
    };
    field.parse(&text).map_err(|e| invalid(name, e))
}

fn format_entry<F: Field>(field: &F, x: &F::Elem) -> Value {
    match field.spec() {
        FieldSpec::Rationals => Value::String(field.format(x)),
        FieldSpec::PrimeField(_) => Value::from(field.format(x).parse::<u64>().expect("residues print as integers")),
    }
}

fn parse_blocks<F: Field>(
    field: &F,
    name: &str,
    rows: &DimVector,
    cols: &DimVector,
    raw: &BTreeMap<String, Vec<Value>>,
) -> Result<BlockMatrix<F>, ProblemError> {
    let idx = rows.index_set();
    let mut m = BlockMatrix::zero(field, rows, cols).map_err(|e| invalid(name, e))?;
    for (key, entries) in raw {
        let (li, lj) = key.split_once(',').ok_or_else(|| invalid(name, format!("block key {key:?} is not \"row,col\"")))?;
        let i = idx.position(li.trim()).map_err(|e| invalid(name, e))?;
        let j = idx.position(lj.trim()).map_err(|e| invalid(name, e))?;
        let (h, w) = (rows.dim(i), cols.dim(j));
        if entries.len() != h * w {
            return Err(invalid(name, format!("block {key:?} has {} entries, expected {h}x{w}", entries.len())));
        }
        let data = entries.iter().map(|v| parse_entry(field, name, v)).collect::<Result<Vec<_>, _>>()?;
        let block = DenseMatrix::from_vec(field, h, w, data).expect("length checked");
        if !block.is_zero() {
            m.set_block(i, j, block).map_err(|e| invalid(name, e))?;
        }
    }
    Ok(m)
}

/// Blocks keyed `"row,col"`, zero blocks omitted.
pub fn blocks_to_json<F: Field>(m: &BlockMatrix<F>) -> BTreeMap<String, Vec<Value>> {
    let idx = m.index_set();
    m.blocks()
        .map(|(&(i, j), b)| {
            let key = format!("{},{}", idx.label(i), idx.label(j));
            (key, b.entries().iter().map(|x| format_entry(m.field(), x)).collect())
        })
        .collect()
}

impl<F: Field> Problem<F> {
    pub fn new(field: &F, index_set: &Arc<IndexSet>) -> Self {
        Self {
            field: field.clone(),
            index_set: index_set.clone(),
            objects: BTreeMap::new(),
            morphisms: BTreeMap::new(),
            kappa: BTreeMap::new(),
        }
    }

    pub fn from_raw(field: F, raw: &RawProblem) -> Result<Self, ProblemError> {
        let idx = Arc::new(IndexSet::new(&raw.poset.order, &raw.poset.involution).map_err(|e| invalid("poset", e))?);
        let mut out = Self::new(&field, &idx);
        for (name, obj) in &raw.objects {
            let mut dims = vec![0; idx.len()];
            for (label, &d) in &obj.dims {
                dims[idx.position(label).map_err(|e| invalid(name, e))?] = d;
            }
            let dims = DimVector::new(idx.clone(), dims).map_err(|e| invalid(name, e))?;
            let m = parse_blocks(&field, name, &dims, &dims, &obj.blocks)?;
            let rep = Representation::new(&dims, m).map_err(|e| invalid(name, e))?;
            out.objects.insert(name.clone(), rep);
        }
        let endpoints = |name: &str, map: &RawMap| -> Result<(Representation<F>, Representation<F>), ProblemError> {
            let get = |o: &str| {
                out.objects.get(o).cloned().ok_or_else(|| invalid(name, format!("unknown object {o:?}")))
            };
            Ok((get(&map.source)?, get(&map.target)?))
        };
        let mut morphisms = BTreeMap::new();
        for (name, map) in &raw.morphisms {
            let (s, t) = endpoints(name, map)?;
            let m = parse_blocks(&field, name, s.dims(), t.dims(), &map.blocks)?;
            morphisms.insert(name.clone(), Morphism::new(m, &s, &t).map_err(|e| invalid(name, e))?);
        }
        let mut kappa = BTreeMap::new();
        for (name, map) in &raw.kappa {
            let (s, t) = endpoints(name, map)?;
            let m = parse_blocks(&field, name, s.dims(), t.dims(), &map.blocks)?;
            kappa.insert(name.clone(), KappaMatrix::new(m, &s, &t).map_err(|e| invalid(name, e))?);
        }
        out.morphisms = morphisms;
        out.kappa = kappa;
        Ok(out)
    }

    fn name_of(&self, rep: &Representation<F>) -> String {
        self.objects
            .iter()
            .find(|(_, o)| *o == rep)
            .map(|(n, _)| n.clone())
            .expect("every endpoint is a named object")
    }

    pub fn to_raw(&self) -> RawProblem {
        let idx = &self.index_set;
        let field = match self.field.spec() {
            FieldSpec::Rationals => RawField::Q,
            FieldSpec::PrimeField(p) => RawField::GFp { p: p.get() as u64 },
        };
        let poset = RawPoset {
            order: idx.labels().to_vec(),
            involution: idx.swapped_pairs().map(|(a, b)| (idx.label(a).to_string(), idx.label(b).to_string())).collect(),
        };
        let objects = self
            .objects
            .iter()
            .map(|(n, o)| {
                let dims = o.dims().support().into_iter().map(|i| (idx.label(i).to_string(), o.dims().dim(i))).collect();
                (n.clone(), RawObject { dims, blocks: blocks_to_json(o.matrix()) })
            })
            .collect();
        let map = |s: &Representation<F>, t: &Representation<F>, m: &BlockMatrix<F>| RawMap {
            source: self.name_of(s),
            target: self.name_of(t),
            blocks: blocks_to_json(m),
        };
        RawProblem {
            field,
            poset,
            objects,
            morphisms: self.morphisms.iter().map(|(n, m)| (n.clone(), map(m.source(), m.target(), m.matrix()))).collect(),
            kappa: self.kappa.iter().map(|(n, k)| (n.clone(), map(k.source(), k.target(), k.matrix()))).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_raw()).expect("plain data serializes")
    }

    pub fn add_object(&mut self, name: &str, rep: &Representation<F>) {
        self.objects.insert(name.to_string(), rep.clone());
    }

    /// Add a morphism, naming its endpoints `<name>.source` and
    /// `<name>.target` if they are not already present.
    pub fn add_morphism(&mut self, name: &str, m: &Morphism<F>) {
        for (suffix, o) in [("source", m.source()), ("target", m.target())] {
            if !self.objects.values().any(|x| x == o) {
                self.objects.insert(format!("{name}.{suffix}"), o.clone());
            }
        }
        self.morphisms.insert(name.to_string(), m.clone());
    }

    pub fn add_kappa(&mut self, name: &str, k: &KappaMatrix<F>) {
        for (suffix, o) in [("source", k.source()), ("target", k.target())] {
            if !self.objects.values().any(|x| x == o) {
                self.objects.insert(format!("{name}.{suffix}"), o.clone());
            }
        }
        self.kappa.insert(name.to_string(), k.clone());
    }

    pub fn object(&self, name: &str) -> Result<&Representation<F>, ProblemError> {
        self.objects.get(name).ok_or_else(|| invalid(name, "no such object"))
    }

    pub fn morphism(&self, name: &str) -> Result<&Morphism<F>, ProblemError> {
        self.morphisms.get(name).ok_or_else(|| invalid(name, "no such morphism"))
    }

    pub fn kappa_matrix(&self, name: &str) -> Result<&KappaMatrix<F>, ProblemError> {
        self.kappa.get(name).ok_or_else(|| invalid(name, "no such κ-matrix"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = r#"{
        "field": {"kind": "Q"},
        "poset": {"order": ["a", "b"]},
        "objects": {"X": {"dims": {"a": 1, "b": 1}, "blocks": {"a,b": ["1/2"]}}},
        "morphisms": {"id": {"source": "X", "target": "X", "blocks": {"a,a": [1], "b,b": ["1"]}}}
    }"#;

    #[test]
    fn loads_and_round_trips() {
        let p = AnyProblem::parse(SMALL).unwrap();
        let AnyProblem::Rational(q) = &p else { panic!("field") };
        assert_eq!(q.morphisms["id"], q.objects["X"].identity());
        assert_eq!(AnyProblem::parse(&p.to_json()).unwrap(), p);
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = AnyProblem::parse("{\n  \"field\": {\"kind\": \"Q\"},\n  oops\n}").unwrap_err();
        assert!(matches!(err, ProblemError::Syntax { line: 3, .. }), "{err:?}");
    }

    #[test]
    fn validation_errors_name_the_literal() {
        let text = r#"{"field": {"kind": "GFp", "p": 5},
            "poset": {"order": ["0", "1/2", "1", "2"], "involution": [["1/2", "2"]]},
            "objects": {"C": {"dims": {"1/2": 1, "2": 2}}}}"#;
        let err = AnyProblem::parse(text).unwrap_err();
        assert!(matches!(err, ProblemError::Validation { ref name, .. } if name == "C"), "{err:?}");

        let text = r#"{"field": {"kind": "GFp", "p": 6}, "poset": {"order": []}}"#;
        assert!(matches!(AnyProblem::parse(text).unwrap_err(), ProblemError::Validation { ref name, .. } if name == "field"));

        let text = r#"{"field": {"kind": "Q"}, "poset": {"order": ["a"]},
            "objects": {"X": {"dims": {"a": 1}, "blocks": {"a,a": [1]}}}}"#;
        assert!(matches!(AnyProblem::parse(text).unwrap_err(), ProblemError::Validation { ref name, .. } if name == "X"));

        let text = r#"{"field": {"kind": "Q"}, "poset": {"order": ["a"]},
            "morphisms": {"f": {"source": "X", "target": "X"}}}"#;
        assert!(matches!(AnyProblem::parse(text).unwrap_err(), ProblemError::Validation { ref name, .. } if name == "f"));
    }
}
