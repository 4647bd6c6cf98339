//! Monotone maps between finite total orders `[n] = {0, .., n-1}`.
//!
//! This is the simplex category Δ and its endpoint-preserving cousin Δ₌,
//! together with the contravariant equivalence between them ("reversal"),
//! colimits in Δ and the symmetry-breaking cocones used when those colimits
//! do not exist.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catcore::DiagramShape;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonotoneError {
    #[error("size mismatch: left map has target size {left}, right map has source size {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("value {value} at position {position} is out of range for target size {target_size}")]
    ValueOutOfRange {
        position: usize,
        value: usize,
        target_size: usize,
    },
    #[error("values decrease at position {position}")]
    NotMonotone { position: usize },
    #[error("map does not preserve first and last elements")]
    NotRegular,
    #[error("index {index} out of range (size {size})")]
    IndexOutOfRange { index: usize, size: usize },
}

/// An order-preserving map `[n] -> [m]`, stored as its list of values.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monotone {
    target_size: usize,
    values: Vec<usize>,
}

impl fmt::Debug for Monotone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}:[{}]->[{}]", self.values, self.values.len(), self.target_size)
    }
}

impl Monotone {
    pub fn new(values: Vec<usize>, target_size: usize) -> Result<Self, MonotoneError> {
        for (position, &value) in values.iter().enumerate() {
            if value >= target_size {
                return Err(MonotoneError::ValueOutOfRange {
                    position,
                    value,
                    target_size,
                });
            }
            if position > 0 && values[position - 1] > value {
                return Err(MonotoneError::NotMonotone { position });
            }
        }
        Ok(Self {
            target_size,
            values,
        })
    }

    pub(crate) fn new_unchecked(values: Vec<usize>, target_size: usize) -> Self {
        debug_assert!(Self::new(values.clone(), target_size).is_ok());
        Self {
            target_size,
            values,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::new_unchecked((0..n).collect(), n)
    }

    /// The unique map out of the empty order.
    pub fn empty(target_size: usize) -> Self {
        Self::new_unchecked(Vec::new(), target_size)
    }

    pub fn constant(source_size: usize, target_size: usize, value: usize) -> Result<Self, MonotoneError> {
        Self::new(vec![value; source_size], target_size)
    }

    pub fn source_size(&self) -> usize {
        self.values.len()
    }

    pub fn target_size(&self) -> usize {
        self.target_size
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn apply(&self, i: usize) -> usize {
        self.values[i]
    }

    pub fn is_identity(&self) -> bool {
        self.target_size == self.values.len() && self.values.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target_size];
        for &v in &self.values {
            hit[v] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn is_injective(&self) -> bool {
        self.values.windows(2).all(|w| w[0] < w[1])
    }

    /// `other ∘ self`: first apply `self`, then `other`.
    pub fn compose(&self, other: &Monotone) -> Result<Monotone, MonotoneError> {
        if self.target_size != other.source_size() {
            return Err(MonotoneError::SizeMismatch {
                left: self.target_size,
                right: other.source_size(),
            });
        }
        Ok(Monotone::new_unchecked(
            self.values.iter().map(|&v| other.values[v]).collect(),
            other.target_size,
        ))
    }

    /// Adds a new top element to both orders and sends the new source top to
    /// the new target top.
    pub fn top_extend(&self) -> Monotone {
        let mut values = self.values.clone();
        values.push(self.target_size);
        Monotone::new_unchecked(values, self.target_size + 1)
    }

    /// The source elements whose image is at least `j`.
    pub fn above_set(&self, j: usize) -> Result<Vec<usize>, MonotoneError> {
        if j >= self.target_size {
            return Err(MonotoneError::IndexOutOfRange {
                index: j,
                size: self.target_size,
            });
        }
        Ok((0..self.values.len()).filter(|&i| self.values[i] >= j).collect())
    }

    /// Elements of the source mapped to `j`, as a half-open range.
    pub fn preimage(&self, j: usize) -> std::ops::Range<usize> {
        let start = self.values.partition_point(|&v| v < j);
        let end = self.values.partition_point(|&v| v <= j);
        start..end
    }

    /// The endpoint-preserving map `[m+1] -> [n+1]` corresponding to this map
    /// under the equivalence Δ ≃ Δ₌ᵒᵖ.
    ///
    /// `j` is sent to the least `i` with `top_extend(i) >= j`, which is the
    /// number of source elements strictly below `j`.
    pub fn reversal(&self) -> RegularMonotone {
        let values = (0..=self.target_size)
            .map(|j| self.values.partition_point(|&v| v < j))
            .collect();
        RegularMonotone(Monotone::new_unchecked(values, self.values.len() + 1))
    }
}

/// A monotone map `[n] -> [m]` with `n, m >= 1` that preserves the first and
/// last elements.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RegularMonotone(Monotone);

impl fmt::Debug for RegularMonotone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Reg{:?}", self.0)
    }
}

impl RegularMonotone {
    pub fn new(values: Vec<usize>, target_size: usize) -> Result<Self, MonotoneError> {
        let inner = Monotone::new(values, target_size)?;
        Self::try_from(inner)
    }

    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "regular orders are non-empty");
        RegularMonotone(Monotone::identity(n))
    }

    pub fn as_monotone(&self) -> &Monotone {
        &self.0
    }

    pub fn into_monotone(self) -> Monotone {
        self.0
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0.apply(i)
    }

    pub fn values(&self) -> &[usize] {
        self.0.values()
    }

    pub fn source_size(&self) -> usize {
        self.0.source_size()
    }

    pub fn target_size(&self) -> usize {
        self.0.target_size()
    }

    pub fn compose(&self, other: &RegularMonotone) -> Result<RegularMonotone, MonotoneError> {
        Ok(RegularMonotone(self.0.compose(&other.0)?))
    }

    /// Inverse of [`Monotone::reversal`]: fills in the gaps between the
    /// regular values to recover the singular map `[n] -> [m]`.
    pub fn reversal_inverse(&self) -> Monotone {
        let m = self.0.source_size() - 1;
        let n = self.0.target_size() - 1;
        let values = (0..n)
            .map(|i| (1..=m).filter(|&j| self.0.values[j] <= i).count())
            .collect();
        Monotone::new_unchecked(values, m)
    }
}

impl TryFrom<Monotone> for RegularMonotone {
    type Error = MonotoneError;

    fn try_from(inner: Monotone) -> Result<Self, Self::Error> {
        let n = inner.source_size();
        let m = inner.target_size();
        if n == 0 || m == 0 || inner.values[0] != 0 || inner.values[n - 1] != m - 1 {
            return Err(MonotoneError::NotRegular);
        }
        Ok(RegularMonotone(inner))
    }
}

/// How to break ties when the colimit in Δ does not exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Bias {
    #[default]
    None,
    /// Elements coming from lower-indexed diagram nodes are placed first.
    Lower,
    /// Elements coming from higher-indexed diagram nodes are placed first.
    Higher,
}

impl std::str::FromStr for Bias {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" => Ok(Bias::None),
            "lower" => Ok(Bias::Lower),
            "higher" => Ok(Bias::Higher),
            other => Err(format!("unknown bias `{other}` (expected none, lower or higher)")),
        }
    }
}

/// A diagram in Δ: a shape with a size per node and a monotone per arrow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaDiagram {
    pub shape: DiagramShape,
    pub sizes: Vec<usize>,
    pub arrows: Vec<Monotone>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum DeltaDiagramError {
    #[error("arrow {arrow} does not match the sizes of its endpoints")]
    ArrowMismatch { arrow: usize },
    #[error("node count {nodes} does not match {sizes} assigned sizes")]
    NodeMismatch { nodes: usize, sizes: usize },
}

impl DeltaDiagram {
    pub fn new(shape: DiagramShape, sizes: Vec<usize>, arrows: Vec<Monotone>) -> Result<Self, DeltaDiagramError> {
        if shape.node_count() != sizes.len() {
            return Err(DeltaDiagramError::NodeMismatch {
                nodes: shape.node_count(),
                sizes: sizes.len(),
            });
        }
        if arrows.len() != shape.arrows().len() {
            return Err(DeltaDiagramError::ArrowMismatch {
                arrow: arrows.len().min(shape.arrows().len()),
            });
        }
        for (arrow, (&(s, t), f)) in shape.arrows().iter().zip(&arrows).enumerate() {
            if f.source_size() != sizes[s] || f.target_size() != sizes[t] {
                return Err(DeltaDiagramError::ArrowMismatch { arrow });
            }
        }
        Ok(Self { shape, sizes, arrows })
    }
}

/// A cocone in Δ: an apex size and one leg per diagram node.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DeltaCocone {
    pub size: usize,
    pub legs: Vec<Monotone>,
}

impl DeltaCocone {
    /// Checks `leg[target] ∘ arrow = leg[source]` for every arrow.
    pub fn commutes(&self, diagram: &DeltaDiagram) -> bool {
        diagram
            .shape
            .arrows()
            .iter()
            .zip(&diagram.arrows)
            .all(|(&(s, t), f)| f.compose(&self.legs[t]).map(|g| g == self.legs[s]).unwrap_or(false))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NoColimitReason {
    /// Two elements of the quotient order are incomparable.
    Incomparable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum DeltaColimitError {
    #[error("diagram shape is empty")]
    EmptyShape,
    #[error("diagram shape is not connected")]
    NotConnected,
    #[error("no colimit in Δ ({reason:?})")]
    NoColimit { reason: NoColimitReason },
    #[error("a bias is required because the colimit does not exist")]
    BiasRequired,
}

/// Quotient of the disjoint union of a Δ-diagram's elements, with the order
/// induced by successor pairs and cycles collapsed.
struct QuotientOrder {
    /// For each node, for each element, the component it belongs to.
    component_of: Vec<Vec<usize>>,
    /// Strict order edges between components (a DAG).
    successors: Vec<Vec<usize>>,
    /// Smallest (node, element) key of each component, for tie-breaking.
    keys: Vec<(usize, usize)>,
}

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            // keep the smaller index as root so roots are deterministic
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            self.parent[hi] = lo;
        }
    }
}

fn check_shape(shape: &DiagramShape) -> Result<(), DeltaColimitError> {
    if shape.node_count() == 0 {
        return Err(DeltaColimitError::EmptyShape);
    }
    if !shape.is_connected() {
        return Err(DeltaColimitError::NotConnected);
    }
    Ok(())
}

impl QuotientOrder {
    fn build(diagram: &DeltaDiagram) -> Self {
        let mut offsets = Vec::with_capacity(diagram.sizes.len());
        let mut total = 0;
        for &size in &diagram.sizes {
            offsets.push(total);
            total += size;
        }

        let mut sets = DisjointSets::new(total);
        for (&(s, t), f) in diagram.shape.arrows().iter().zip(&diagram.arrows) {
            for (i, &v) in f.values().iter().enumerate() {
                sets.union(offsets[s] + i, offsets[t] + v);
            }
        }

        // Number the classes in order of their smallest element.
        let mut class_of_root = vec![usize::MAX; total];
        let mut class_of = vec![0; total];
        let mut class_count = 0;
        for x in 0..total {
            let root = sets.find(x);
            if class_of_root[root] == usize::MAX {
                class_of_root[root] = class_count;
                class_count += 1;
            }
            class_of[x] = class_of_root[root];
        }

        let mut edges = vec![Vec::new(); class_count];
        for (node, &size) in diagram.sizes.iter().enumerate() {
            for k in 1..size {
                let a = class_of[offsets[node] + k - 1];
                let b = class_of[offsets[node] + k];
                if a != b && !edges[a].contains(&b) {
                    edges[a].push(b);
                }
            }
        }

        // Collapse strongly connected components: any cocone identifies them.
        let scc = strongly_connected_components(&edges);
        let component_count = scc.iter().copied().max().map_or(0, |m| m + 1);
        let mut successors = vec![Vec::new(); component_count];
        for (a, targets) in edges.iter().enumerate() {
            for &b in targets {
                let (ca, cb) = (scc[a], scc[b]);
                if ca != cb && !successors[ca].contains(&cb) {
                    successors[ca].push(cb);
                }
            }
        }

        let mut keys = vec![(usize::MAX, usize::MAX); component_count];
        let mut component_of = Vec::with_capacity(diagram.sizes.len());
        for (node, &size) in diagram.sizes.iter().enumerate() {
            let row: Vec<usize> = (0..size).map(|k| scc[class_of[offsets[node] + k]]).collect();
            for (k, &c) in row.iter().enumerate() {
                keys[c] = keys[c].min((node, k));
            }
            component_of.push(row);
        }

        Self {
            component_of,
            successors,
            keys,
        }
    }

    /// Kahn's algorithm. With `Bias::None` fails as soon as two components
    /// are simultaneously available, since they are then incomparable.
    fn linearize(&self, bias: Bias) -> Result<Vec<usize>, DeltaColimitError> {
        let n = self.successors.len();
        let mut indegree = vec![0; n];
        for targets in &self.successors {
            for &t in targets {
                indegree[t] += 1;
            }
        }
        let mut available: Vec<usize> = (0..n).filter(|&c| indegree[c] == 0).collect();
        let mut position = vec![0; n];
        let mut placed = 0;
        while !available.is_empty() {
            let pick = match bias {
                Bias::None => {
                    if available.len() > 1 {
                        return Err(DeltaColimitError::NoColimit {
                            reason: NoColimitReason::Incomparable,
                        });
                    }
                    0
                }
                Bias::Lower => (0..available.len()).min_by_key(|&i| self.keys[available[i]]).unwrap(),
                Bias::Higher => (0..available.len())
                    .min_by_key(|&i| {
                        let (node, element) = self.keys[available[i]];
                        (std::cmp::Reverse(node), element)
                    })
                    .unwrap(),
            };
            let c = available.swap_remove(pick);
            position[c] = placed;
            placed += 1;
            for &t in &self.successors[c] {
                indegree[t] -= 1;
                if indegree[t] == 0 {
                    available.push(t);
                }
            }
        }
        debug_assert_eq!(placed, n, "condensation is acyclic");
        Ok(position)
    }

    fn cocone(&self, position: &[usize]) -> DeltaCocone {
        let size = position.len();
        let legs = self
            .component_of
            .iter()
            .map(|row| Monotone::new_unchecked(row.iter().map(|&c| position[c]).collect(), size))
            .collect();
        DeltaCocone { size, legs }
    }
}

/// Tarjan's algorithm, iterative. Returns the component index of each vertex.
fn strongly_connected_components(edges: &[Vec<usize>]) -> Vec<usize> {
    let n = edges.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut component = vec![usize::MAX; n];
    let mut next_index = 0;
    let mut next_component = 0;

    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut child)) = call.last_mut() {
            if *child < edges[v].len() {
                let w = edges[v][*child];
                *child += 1;
                if index[w] == usize::MAX {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        component[w] = next_component;
                        if w == v {
                            break;
                        }
                    }
                    next_component += 1;
                }
            }
        }
    }

    // Renumber so components are ordered by their first vertex.
    let mut renumber = vec![usize::MAX; next_component];
    let mut count = 0;
    for v in 0..n {
        if renumber[component[v]] == usize::MAX {
            renumber[component[v]] = count;
            count += 1;
        }
    }
    component.into_iter().map(|c| renumber[c]).collect()
}

/// The colimit of a non-empty connected diagram in Δ, if it exists.
pub fn delta_colimit(diagram: &DeltaDiagram) -> Result<DeltaCocone, DeltaColimitError> {
    check_shape(&diagram.shape)?;
    let quotient = QuotientOrder::build(diagram);
    let position = quotient.linearize(Bias::None)?;
    Ok(quotient.cocone(&position))
}

/// The colimit when it exists; otherwise a cocone obtained by ordering
/// incomparable elements according to `bias`.
pub fn biased_cocone(diagram: &DeltaDiagram, bias: Bias) -> Result<DeltaCocone, DeltaColimitError> {
    check_shape(&diagram.shape)?;
    let quotient = QuotientOrder::build(diagram);
    match quotient.linearize(Bias::None) {
        Ok(position) => Ok(quotient.cocone(&position)),
        Err(DeltaColimitError::NoColimit { .. }) if bias == Bias::None => Err(DeltaColimitError::BiasRequired),
        Err(DeltaColimitError::NoColimit { .. }) => Ok(quotient.cocone(&quotient.linearize(bias)?)),
        Err(e) => Err(e),
    }
}
