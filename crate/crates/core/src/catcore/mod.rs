//! Base categories for the zigzag construction.
//!
//! A [`Category`] exposes identities, composition, an optional terminal
//! object and colimits of connected diagrams. The instances here are the
//! terminal category, finite posets, the simplex category and label posets;
//! zigzag categories over any of them are built in [`crate::zigzag`].

use std::fmt::Debug;
use std::hash::Hash;

use serde::Serialize;
use thiserror::Error;

use crate::monotone::NoColimitReason;

mod label;
pub mod oracle;
mod poset;

pub use label::{label_colimit, LabelArrow, LabelId, LabelInfo, LabelPoset, LabelSignature, SignatureError};
pub use poset::{FinitePoset, PosetArrow, PosetError, Simplex, TerminalCategory};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ShapeError {
    #[error("arrow {arrow} has an endpoint outside the {nodes} nodes")]
    EndpointOutOfRange { arrow: usize, nodes: usize },
}

/// A finite shape category presented by nodes `0..n` and a list of arrows.
/// Parallel arrows and loops are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiagramShape {
    node_count: usize,
    arrows: Vec<(usize, usize)>,
}

impl DiagramShape {
    pub fn new(node_count: usize, arrows: Vec<(usize, usize)>) -> Result<Self, ShapeError> {
        for (arrow, &(s, t)) in arrows.iter().enumerate() {
            if s >= node_count || t >= node_count {
                return Err(ShapeError::EndpointOutOfRange {
                    arrow,
                    nodes: node_count,
                });
            }
        }
        Ok(Self { node_count, arrows })
    }

    /// The shape `0 <- 1 -> 2 <- 3 -> ... ` of a cospan chain with `n`
    /// apexes: even nodes are apexes, odd nodes are legs.
    pub fn cospan_chain(apexes: usize) -> Self {
        assert!(apexes >= 1);
        let mut arrows = Vec::new();
        for i in 1..apexes {
            arrows.push((2 * i - 1, 2 * i - 2));
            arrows.push((2 * i - 1, 2 * i));
        }
        Self {
            node_count: 2 * apexes - 1,
            arrows,
        }
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    /// Non-empty and connected as an undirected graph.
    pub fn is_connected(&self) -> bool {
        if self.node_count == 0 {
            return false;
        }
        let mut adjacent = vec![Vec::new(); self.node_count];
        for &(s, t) in &self.arrows {
            adjacent[s].push(t);
            adjacent[t].push(s);
        }
        let mut seen = vec![false; self.node_count];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &adjacent[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.node_count
    }
}

/// A diagram in a base category: objects on nodes, morphisms on arrows.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BaseDiagram<O, M> {
    pub shape: DiagramShape,
    pub objects: Vec<O>,
    pub arrows: Vec<M>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cocone<O, M> {
    pub apex: O,
    pub legs: Vec<M>,
}

/// Why a colimit could not be formed. Nested failures record the height at
/// which the base colimit was attempted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Error, Serialize)]
#[serde(tag = "kind")]
pub enum ColimitFailure {
    #[error("diagram shape is empty")]
    EmptyShape,
    #[error("diagram shape is not connected")]
    NotConnected,
    #[error("colimit of singular heights does not exist ({reason:?})")]
    DeltaColimitFailed { reason: NoColimitReason },
    #[error("base colimit failed at height {height}: {inner}")]
    BaseColimitFailed { height: usize, inner: Box<ColimitFailure> },
    #[error("no least upper bound")]
    NoJoin,
    #[error("labels {labels:?} are tied for maximal dimension")]
    TiedMaxima { labels: Vec<String> },
    #[error("malformed diagram: {detail}")]
    Malformed { detail: String },
}

impl ColimitFailure {
    /// Variant name, used as the machine-readable reason in reports.
    pub fn reason(&self) -> &'static str {
        match self {
            ColimitFailure::EmptyShape => "EmptyShape",
            ColimitFailure::NotConnected => "NotConnected",
            ColimitFailure::DeltaColimitFailed { .. } => "DeltaColimitFailed",
            ColimitFailure::BaseColimitFailed { .. } => "BaseColimitFailed",
            ColimitFailure::NoJoin => "NoJoin",
            ColimitFailure::TiedMaxima { .. } => "TiedMaxima",
            ColimitFailure::Malformed { .. } => "Malformed",
        }
    }

    /// Step of the colimit procedure that failed: 1 for the singular-height
    /// colimit, 4 for a base colimit, 0 otherwise.
    pub fn step(&self) -> u8 {
        match self {
            ColimitFailure::DeltaColimitFailed { .. } => 1,
            ColimitFailure::BaseColimitFailed { .. } | ColimitFailure::NoJoin | ColimitFailure::TiedMaxima { .. } => 4,
            _ => 0,
        }
    }

    pub fn height(&self) -> Option<usize> {
        match self {
            ColimitFailure::BaseColimitFailed { height, .. } => Some(*height),
            _ => None,
        }
    }

    pub fn innermost(&self) -> &ColimitFailure {
        match self {
            ColimitFailure::BaseColimitFailed { inner, .. } => inner.innermost(),
            other => other,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CategoryError {
    #[error("morphisms are not composable: {0}")]
    NotComposable(String),
}

/// A category with decidable equality of objects and morphisms.
///
/// `compose(f, g)` is diagrammatic: apply `f` first, then `g`.
pub trait Category {
    type Object: Clone + Eq + Hash + Debug;
    type Morphism: Clone + Eq + Hash + Debug;

    fn source(&self, f: &Self::Morphism) -> Self::Object;
    fn target(&self, f: &Self::Morphism) -> Self::Object;
    fn identity(&self, x: &Self::Object) -> Self::Morphism;
    fn compose(&self, f: &Self::Morphism, g: &Self::Morphism) -> Result<Self::Morphism, CategoryError>;
    fn terminal(&self) -> Option<Self::Object>;
    fn connected_colimit(
        &self,
        diagram: &BaseDiagram<Self::Object, Self::Morphism>,
    ) -> Result<Cocone<Self::Object, Self::Morphism>, ColimitFailure>;
}

/// Checks that every arrow of the diagram runs between the assigned objects.
pub fn diagram_is_well_typed<C: Category>(cat: &C, d: &BaseDiagram<C::Object, C::Morphism>) -> bool {
    d.objects.len() == d.shape.node_count()
        && d.arrows.len() == d.shape.arrows().len()
        && d.shape
            .arrows()
            .iter()
            .zip(&d.arrows)
            .all(|(&(s, t), f)| cat.source(f) == d.objects[s] && cat.target(f) == d.objects[t])
}

/// Checks that the legs run from the diagram's objects to the apex and that
/// `leg[t] ∘ arrow = leg[s]` for every arrow `s -> t`.
pub fn is_cocone<C: Category>(
    cat: &C,
    d: &BaseDiagram<C::Object, C::Morphism>,
    cocone: &Cocone<C::Object, C::Morphism>,
) -> bool {
    if cocone.legs.len() != d.objects.len() {
        return false;
    }
    let legs_typed = cocone
        .legs
        .iter()
        .zip(&d.objects)
        .all(|(leg, x)| &cat.source(leg) == x && cat.target(leg) == cocone.apex);
    legs_typed
        && d.shape.arrows().iter().zip(&d.arrows).all(|(&(s, t), f)| {
            cat.compose(f, &cocone.legs[t])
                .map(|g| g == cocone.legs[s])
                .unwrap_or(false)
        })
}

pub(crate) fn check_shape(shape: &DiagramShape) -> Result<(), ColimitFailure> {
    if shape.node_count() == 0 {
        Err(ColimitFailure::EmptyShape)
    } else if !shape.is_connected() {
        Err(ColimitFailure::NotConnected)
    } else {
        Ok(())
    }
}
