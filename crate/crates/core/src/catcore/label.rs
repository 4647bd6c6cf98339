use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{check_shape, BaseDiagram, Category, CategoryError, Cocone, ColimitFailure};

pub type LabelId = Arc<str>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LabelInfo {
    pub id: String,
    pub name: String,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub color: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("label `{0}` is already declared")]
    DuplicateLabel(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("label id must be non-empty and contain no whitespace: `{0}`")]
    InvalidId(String),
}

/// A finite set of labels with dimensions and display hints.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LabelSignature {
    labels: BTreeMap<String, LabelInfo>,
}

impl LabelSignature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, info: LabelInfo) -> Result<(), SignatureError> {
        if info.id.is_empty() || info.id.chars().any(char::is_whitespace) {
            return Err(SignatureError::InvalidId(info.id));
        }
        if self.labels.contains_key(&info.id) {
            return Err(SignatureError::DuplicateLabel(info.id));
        }
        self.labels.insert(info.id.clone(), info);
        Ok(())
    }

    /// Convenience for tests and fixtures: name = id, no color.
    pub fn with(mut self, id: &str, dim: usize) -> Self {
        self.add(LabelInfo {
            id: id.to_owned(),
            name: id.to_owned(),
            dim,
            color: None,
        })
        .expect("fresh label");
        self
    }

    pub fn get(&self, id: &str) -> Option<&LabelInfo> {
        self.labels.get(id)
    }

    pub fn dim(&self, id: &str) -> Result<usize, SignatureError> {
        self.get(id).map(|l| l.dim).ok_or_else(|| SignatureError::UnknownLabel(id.to_owned()))
    }

    pub fn labels(&self) -> impl Iterator<Item = &LabelInfo> {
        self.labels.values()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// `l <= l'` iff equal or of strictly smaller dimension. Unknown labels
    /// are only related to themselves.
    pub fn leq(&self, a: &str, b: &str) -> bool {
        a == b
            || match (self.get(a), self.get(b)) {
                (Some(x), Some(y)) => x.dim < y.dim,
                _ => false,
            }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabelArrow {
    pub source: LabelId,
    pub target: LabelId,
}

/// Join of the labels occurring in a diagram, computed among the occurring
/// labels only: the unique label of maximal dimension, provided every other
/// occurring label has strictly smaller dimension.
pub fn label_colimit(signature: &LabelSignature, labels: &[LabelId]) -> Result<LabelId, ColimitFailure> {
    let mut best: Option<(usize, &LabelId)> = None;
    let mut tied: Vec<&LabelId> = Vec::new();
    for l in labels {
        let dim = signature.dim(l).map_err(|e| ColimitFailure::Malformed { detail: e.to_string() })?;
        match best {
            None => best = Some((dim, l)),
            Some((d, _)) if dim > d => {
                best = Some((dim, l));
                tied.clear();
            }
            Some((d, b)) if dim == d && b != l && !tied.contains(&l) => tied.push(l),
            _ => {}
        }
    }
    let (_, winner) = best.ok_or(ColimitFailure::EmptyShape)?;
    if tied.is_empty() {
        Ok(winner.clone())
    } else {
        let mut names: Vec<String> = std::iter::once(winner).chain(tied).map(|l| l.to_string()).collect();
        names.sort();
        names.dedup();
        Err(ColimitFailure::TiedMaxima { labels: names })
    }
}

/// The label poset of a signature as a thin category.
#[derive(Debug, Clone)]
pub struct LabelPoset {
    pub signature: LabelSignature,
}

impl LabelPoset {
    pub fn new(signature: LabelSignature) -> Self {
        Self { signature }
    }

    pub fn arrow(&self, source: &str, target: &str) -> Option<LabelArrow> {
        self.signature.leq(source, target).then(|| LabelArrow {
            source: source.into(),
            target: target.into(),
        })
    }
}

impl Category for LabelPoset {
    type Object = LabelId;
    type Morphism = LabelArrow;

    fn source(&self, f: &LabelArrow) -> LabelId {
        f.source.clone()
    }

    fn target(&self, f: &LabelArrow) -> LabelId {
        f.target.clone()
    }

    fn identity(&self, x: &LabelId) -> LabelArrow {
        LabelArrow {
            source: x.clone(),
            target: x.clone(),
        }
    }

    fn compose(&self, f: &LabelArrow, g: &LabelArrow) -> Result<LabelArrow, CategoryError> {
        if f.target != g.source {
            return Err(CategoryError::NotComposable(format!("{f:?} then {g:?}")));
        }
        Ok(LabelArrow {
            source: f.source.clone(),
            target: g.target.clone(),
        })
    }

    fn terminal(&self) -> Option<LabelId> {
        let top = self.signature.labels().map(|l| l.dim).max()?;
        let mut at_top = self.signature.labels().filter(|l| l.dim == top);
        let first = at_top.next()?;
        at_top.next().is_none().then(|| first.id.as_str().into())
    }

    fn connected_colimit(&self, d: &BaseDiagram<LabelId, LabelArrow>) -> Result<Cocone<LabelId, LabelArrow>, ColimitFailure> {
        check_shape(&d.shape)?;
        let apex = label_colimit(&self.signature, &d.objects)?;
        Ok(Cocone {
            legs: d
                .objects
                .iter()
                .map(|x| LabelArrow {
                    source: x.clone(),
                    target: apex.clone(),
                })
                .collect(),
            apex,
        })
    }
}
