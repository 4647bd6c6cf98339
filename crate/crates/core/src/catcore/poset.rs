use thiserror::Error;

use super::{check_shape, BaseDiagram, Category, CategoryError, Cocone, ColimitFailure};
use crate::monotone::{delta_colimit, DeltaColimitError, DeltaDiagram, Monotone};

/// The category with one object and one morphism.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TerminalCategory;

impl Category for TerminalCategory {
    type Object = ();
    type Morphism = ();

    fn source(&self, _: &()) {}
    fn target(&self, _: &()) {}
    fn identity(&self, _: &()) {}

    fn compose(&self, _: &(), _: &()) -> Result<(), CategoryError> {
        Ok(())
    }

    fn terminal(&self) -> Option<()> {
        Some(())
    }

    fn connected_colimit(&self, d: &BaseDiagram<(), ()>) -> Result<Cocone<(), ()>, ColimitFailure> {
        check_shape(&d.shape)?;
        Ok(Cocone {
            apex: (),
            legs: vec![(); d.objects.len()],
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PosetError {
    #[error("relation is not reflexive at {0}")]
    NotReflexive(usize),
    #[error("relation is not antisymmetric at ({0}, {1})")]
    NotAntisymmetric(usize, usize),
    #[error("relation is not transitive at ({0}, {1}, {2})")]
    NotTransitive(usize, usize, usize),
    #[error("relation matrix is not square")]
    NotSquare,
}

/// The unique arrow `source <= target` of a poset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PosetArrow {
    pub source: usize,
    pub target: usize,
}

/// A finite poset on `0..n`, viewed as a thin category.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinitePoset {
    leq: Vec<Vec<bool>>,
}

impl FinitePoset {
    pub fn new(leq: Vec<Vec<bool>>) -> Result<Self, PosetError> {
        let n = leq.len();
        if leq.iter().any(|row| row.len() != n) {
            return Err(PosetError::NotSquare);
        }
        for a in 0..n {
            if !leq[a][a] {
                return Err(PosetError::NotReflexive(a));
            }
            for b in 0..n {
                if a != b && leq[a][b] && leq[b][a] {
                    return Err(PosetError::NotAntisymmetric(a, b));
                }
                for c in 0..n {
                    if leq[a][b] && leq[b][c] && !leq[a][c] {
                        return Err(PosetError::NotTransitive(a, b, c));
                    }
                }
            }
        }
        Ok(Self { leq })
    }

    /// The poset generated by the given covering pairs `(a, b)` meaning `a < b`.
    pub fn from_covers(n: usize, covers: &[(usize, usize)]) -> Result<Self, PosetError> {
        let mut leq = vec![vec![false; n]; n];
        for (a, row) in leq.iter_mut().enumerate() {
            row[a] = true;
        }
        for &(a, b) in covers {
            leq[a][b] = true;
        }
        for k in 0..n {
            for a in 0..n {
                for b in 0..n {
                    if leq[a][k] && leq[k][b] {
                        leq[a][b] = true;
                    }
                }
            }
        }
        Self::new(leq)
    }

    pub fn chain(n: usize) -> Self {
        Self::new((0..n).map(|a| (0..n).map(|b| a <= b).collect()).collect()).unwrap()
    }

    pub fn antichain(n: usize) -> Self {
        Self::new((0..n).map(|a| (0..n).map(|b| a == b).collect()).collect()).unwrap()
    }

    pub fn len(&self) -> usize {
        self.leq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leq.is_empty()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn arrow(&self, source: usize, target: usize) -> Option<PosetArrow> {
        self.leq(source, target).then_some(PosetArrow { source, target })
    }

    /// Least upper bound of a non-empty set of elements.
    pub fn join(&self, elements: &[usize]) -> Option<usize> {
        let upper: Vec<usize> = (0..self.len())
            .filter(|&u| elements.iter().all(|&e| self.leq(e, u)))
            .collect();
        upper.iter().copied().find(|&u| upper.iter().all(|&v| self.leq(u, v)))
    }

    /// All posets on `n` labelled elements.
    pub fn enumerate_all(n: usize) -> Vec<FinitePoset> {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b))).collect();
        let mut out = Vec::new();
        for bits in 0u64..(1u64 << pairs.len()) {
            let mut leq = vec![vec![false; n]; n];
            for (a, row) in leq.iter_mut().enumerate() {
                row[a] = true;
            }
            for (k, &(a, b)) in pairs.iter().enumerate() {
                if bits >> k & 1 == 1 {
                    leq[a][b] = true;
                }
            }
            if let Ok(p) = FinitePoset::new(leq) {
                out.push(p);
            }
        }
        out
    }
}

impl Category for FinitePoset {
    type Object = usize;
    type Morphism = PosetArrow;

    fn source(&self, f: &PosetArrow) -> usize {
        f.source
    }

    fn target(&self, f: &PosetArrow) -> usize {
        f.target
    }

    fn identity(&self, &x: &usize) -> PosetArrow {
        PosetArrow { source: x, target: x }
    }

    fn compose(&self, f: &PosetArrow, g: &PosetArrow) -> Result<PosetArrow, CategoryError> {
        if f.target != g.source {
            return Err(CategoryError::NotComposable(format!("{f:?} then {g:?}")));
        }
        Ok(PosetArrow {
            source: f.source,
            target: g.target,
        })
    }

    fn terminal(&self) -> Option<usize> {
        (0..self.len()).find(|&t| (0..self.len()).all(|x| self.leq(x, t)))
    }

    fn connected_colimit(&self, d: &BaseDiagram<usize, PosetArrow>) -> Result<Cocone<usize, PosetArrow>, ColimitFailure> {
        check_shape(&d.shape)?;
        let apex = self.join(&d.objects).ok_or(ColimitFailure::NoJoin)?;
        Ok(Cocone {
            apex,
            legs: d.objects.iter().map(|&x| PosetArrow { source: x, target: apex }).collect(),
        })
    }
}

/// The simplex category Δ: objects are sizes, morphisms monotone maps.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Simplex;

impl Category for Simplex {
    type Object = usize;
    type Morphism = Monotone;

    fn source(&self, f: &Monotone) -> usize {
        f.source_size()
    }

    fn target(&self, f: &Monotone) -> usize {
        f.target_size()
    }

    fn identity(&self, &x: &usize) -> Monotone {
        Monotone::identity(x)
    }

    fn compose(&self, f: &Monotone, g: &Monotone) -> Result<Monotone, CategoryError> {
        f.compose(g).map_err(|e| CategoryError::NotComposable(e.to_string()))
    }

    fn terminal(&self) -> Option<usize> {
        Some(1)
    }

    fn connected_colimit(&self, d: &BaseDiagram<usize, Monotone>) -> Result<Cocone<usize, Monotone>, ColimitFailure> {
        let delta = DeltaDiagram::new(d.shape.clone(), d.objects.clone(), d.arrows.clone())
            .map_err(|e| ColimitFailure::Malformed { detail: e.to_string() })?;
        match delta_colimit(&delta) {
            Ok(c) => Ok(Cocone {
                apex: c.size,
                legs: c.legs,
            }),
            Err(DeltaColimitError::EmptyShape) => Err(ColimitFailure::EmptyShape),
            Err(DeltaColimitError::NotConnected) => Err(ColimitFailure::NotConnected),
            Err(DeltaColimitError::NoColimit { reason }) => Err(ColimitFailure::DeltaColimitFailed { reason }),
            Err(DeltaColimitError::BiasRequired) => unreachable!("unbiased colimit never asks for a bias"),
        }
    }
}
