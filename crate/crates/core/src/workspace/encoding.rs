//! Explicit recursive JSON encoding of typed diagrams.
//!
//! A 0-diagram is its label id. An n-diagram is an object with `regulars`,
//! `singulars`, and, above dimension 1, `forwards` and `backwards`. A map is
//! `{"sing": [...], "slices": [...]}` where `slices` is omitted when the
//! slice morphisms are label-poset facts.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::catcore::LabelId;
use crate::diagram::{Diagram, Morphism, TypedMap};
use crate::monotone::Monotone;
use crate::zigzag::{Zigzag, ZigzagMap};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("at {pointer}: {message}")]
pub struct DecodeError {
    /// JSON pointer into the document.
    pub pointer: String,
    pub message: String,
}

fn err(pointer: &str, message: impl Into<String>) -> DecodeError {
    DecodeError {
        pointer: if pointer.is_empty() { "/".into() } else { pointer.into() },
        message: message.into(),
    }
}

pub fn encode_diagram(d: &Diagram) -> Value {
    match d {
        Diagram::Label(l) => Value::String(l.to_string()),
        Diagram::Zigzag(z) => {
            let mut obj = Map::new();
            obj.insert("regulars".into(), z.regulars().iter().map(encode_diagram).collect());
            obj.insert("singulars".into(), z.singulars().iter().map(encode_diagram).collect());
            if z.regulars().iter().any(|r| matches!(r, Diagram::Zigzag(_))) {
                obj.insert("forwards".into(), z.forwards().iter().map(|m| encode_morphism(m).unwrap_or(Value::Null)).collect());
                obj.insert("backwards".into(), z.backwards().iter().map(|m| encode_morphism(m).unwrap_or(Value::Null)).collect());
            }
            Value::Object(obj)
        }
    }
}

/// `None` for label-poset facts, which are determined by their endpoints.
pub fn encode_morphism(m: &Morphism) -> Option<Value> {
    match m {
        Morphism::Poset { .. } => None,
        Morphism::Map(m) => Some(encode_map(m)),
    }
}

pub fn encode_map(m: &TypedMap) -> Value {
    let mut obj = Map::new();
    obj.insert("sing".into(), json!(m.sing().values()));
    if m.slices().iter().any(|s| matches!(s, Morphism::Map(_))) {
        obj.insert("slices".into(), m.slices().iter().map(|s| encode_morphism(s).unwrap_or(Value::Null)).collect());
    }
    Value::Object(obj)
}

/// Decodes diagrams, sharing structurally equal subdiagrams.
#[derive(Default)]
pub struct Decoder {
    labels: HashMap<String, LabelId>,
    diagrams: HashSet<Diagram>,
    morphisms: HashSet<Morphism>,
}

impl Decoder {
    pub fn new() -> Self {
        Self::default()
    }

    fn label(&mut self, s: &str) -> LabelId {
        self.labels.entry(s.to_owned()).or_insert_with(|| s.into()).clone()
    }

    fn intern(&mut self, d: Diagram) -> Diagram {
        if let Some(x) = self.diagrams.get(&d) {
            return x.clone();
        }
        self.diagrams.insert(d.clone());
        d
    }

    fn intern_morphism(&mut self, m: Morphism) -> Morphism {
        if let Some(x) = self.morphisms.get(&m) {
            return x.clone();
        }
        self.morphisms.insert(m.clone());
        m
    }

    pub fn diagram(&mut self, v: &Value, pointer: &str) -> Result<Diagram, DecodeError> {
        match v {
            Value::String(s) => Ok(Diagram::Label(self.label(s))),
            Value::Object(obj) => {
                check_keys(obj, &["regulars", "singulars", "forwards", "backwards"], pointer)?;
                let regulars = self.list(obj, "regulars", pointer)?;
                let singulars = self.list(obj, "singulars", pointer)?;
                if regulars.len() != singulars.len() + 1 {
                    return Err(err(
                        pointer,
                        format!("{} regular and {} singular objects", regulars.len(), singulars.len()),
                    ));
                }
                let dims: HashSet<usize> = regulars.iter().chain(&singulars).map(Diagram::dimension).collect();
                if dims.len() > 1 {
                    return Err(err(pointer, "objects of mixed dimension"));
                }
                let n = singulars.len();
                let mut forwards = Vec::with_capacity(n);
                let mut backwards = Vec::with_capacity(n);
                let fw = morphism_list(obj, "forwards", n, pointer)?;
                let bw = morphism_list(obj, "backwards", n, pointer)?;
                for i in 0..n {
                    forwards.push(self.morphism(fw[i], &regulars[i], &singulars[i], &format!("{pointer}/forwards/{i}"))?);
                    backwards.push(self.morphism(bw[i], &regulars[i + 1], &singulars[i], &format!("{pointer}/backwards/{i}"))?);
                }
                let z = Zigzag::new(regulars, singulars, forwards, backwards).map_err(|e| err(pointer, e.to_string()))?;
                Ok(self.intern(Diagram::from_zigzag(z)))
            }
            _ => Err(err(pointer, "expected a label id or a zigzag object")),
        }
    }

    fn list(&mut self, obj: &Map<String, Value>, key: &str, pointer: &str) -> Result<Vec<Diagram>, DecodeError> {
        let items = obj
            .get(key)
            .and_then(Value::as_array)
            .ok_or_else(|| err(pointer, format!("missing array `{key}`")))?;
        items
            .iter()
            .enumerate()
            .map(|(i, v)| self.diagram(v, &format!("{pointer}/{key}/{i}")))
            .collect()
    }

    /// Decodes a morphism whose endpoints are already known.
    pub fn morphism(&mut self, v: Option<&Value>, source: &Diagram, target: &Diagram, pointer: &str) -> Result<Morphism, DecodeError> {
        match (source, target) {
            (Diagram::Label(s), Diagram::Label(t)) => match v {
                None | Some(Value::Null) => Ok(Morphism::poset(s, t)),
                Some(_) => Err(err(pointer, "a morphism between labels carries no data")),
            },
            (Diagram::Zigzag(s), Diagram::Zigzag(t)) => {
                let obj = v
                    .and_then(Value::as_object)
                    .ok_or_else(|| err(pointer, "expected a map object"))?;
                check_keys(obj, &["sing", "slices"], pointer)?;
                let values = obj
                    .get("sing")
                    .and_then(Value::as_array)
                    .ok_or_else(|| err(pointer, "missing array `sing`"))?
                    .iter()
                    .enumerate()
                    .map(|(i, x)| {
                        x.as_u64()
                            .map(|x| x as usize)
                            .ok_or_else(|| err(&format!("{pointer}/sing/{i}"), "expected a non-negative integer"))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                if values.len() != s.len() {
                    return Err(err(pointer, format!("`sing` has {} values for a source of length {}", values.len(), s.len())));
                }
                let sing = Monotone::new(values, t.len()).map_err(|e| err(&format!("{pointer}/sing"), e.to_string()))?;
                let slices_v = morphism_list(obj, "slices", s.len(), pointer)?;
                let mut slices = Vec::with_capacity(s.len());
                for (i, sv) in slices_v.into_iter().enumerate() {
                    slices.push(self.morphism(sv, s.singular(i), t.singular(sing.apply(i)), &format!("{pointer}/slices/{i}"))?);
                }
                let m = ZigzagMap::new_shared(s.clone(), t.clone(), sing, slices).map_err(|e| err(pointer, e.to_string()))?;
                Ok(self.intern_morphism(Morphism::Map(Arc::new(m))))
            }
            _ => Err(err(pointer, "endpoints of different dimensions")),
        }
    }
}

fn check_keys(obj: &Map<String, Value>, allowed: &[&str], pointer: &str) -> Result<(), DecodeError> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(err(pointer, format!("unexpected field `{k}`"))),
        None => Ok(()),
    }
}

/// Entries of an optional morphism list; absent lists yield `None`s.
fn morphism_list<'v>(obj: &'v Map<String, Value>, key: &str, n: usize, pointer: &str) -> Result<Vec<Option<&'v Value>>, DecodeError> {
    match obj.get(key) {
        None => Ok(vec![None; n]),
        Some(Value::Array(items)) if items.len() == n => Ok(items.iter().map(Some).collect()),
        Some(Value::Array(items)) => Err(err(pointer, format!("`{key}` has {} entries, expected {n}", items.len()))),
        Some(_) => Err(err(pointer, format!("`{key}` must be an array"))),
    }
}

pub fn decode_diagram(v: &Value) -> Result<Diagram, DecodeError> {
    Decoder::new().diagram(v, "")
}
