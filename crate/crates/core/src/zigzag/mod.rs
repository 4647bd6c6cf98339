//! Zigzags `r0 -> s0 <- r1 -> s1 <- ... <- rn` and zigzag maps over an
//! arbitrary base [`Category`].

use std::sync::Arc;

use thiserror::Error;

use crate::catcore::{BaseDiagram, Category, CategoryError, Cocone, ColimitFailure};
use crate::monotone::{Bias, Monotone, RegularMonotone};

mod ops;
mod validate;

pub use ops::{
    apply_functor, apply_functor_map, concatenate, concatenate_maps, deconstruct, restrict, restrict_map, Deconstruction,
    Height,
};
pub use validate::{validate_map, validate_zigzag, MapViolation, ZigzagViolation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZigzagError {
    #[error("inconsistent lengths: {regulars} regulars, {singulars} singulars, {forwards} forwards, {backwards} backwards")]
    LengthMismatch {
        regulars: usize,
        singulars: usize,
        forwards: usize,
        backwards: usize,
    },
    #[error("last regular object of the first zigzag differs from the first regular object of the second")]
    BoundaryMismatch,
    #[error("window ({a}, {b}) out of range for length {len}")]
    IndexOutOfRange { a: usize, b: usize, len: usize },
    #[error("map has {slices} slices but its source has {heights} singular heights")]
    SliceCountMismatch { slices: usize, heights: usize },
    #[error(transparent)]
    Category(#[from] CategoryError),
}

/// An alternating cospan chain in a base category.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Zigzag<O, M> {
    regulars: Vec<O>,
    singulars: Vec<O>,
    forwards: Vec<M>,
    backwards: Vec<M>,
}

impl<O: Clone, M: Clone> Zigzag<O, M> {
    /// Checks only the lengths; endpoint typing is checked by
    /// [`validate_zigzag`].
    pub fn new(regulars: Vec<O>, singulars: Vec<O>, forwards: Vec<M>, backwards: Vec<M>) -> Result<Self, ZigzagError> {
        let n = singulars.len();
        if regulars.len() != n + 1 || forwards.len() != n || backwards.len() != n {
            return Err(ZigzagError::LengthMismatch {
                regulars: regulars.len(),
                singulars: n,
                forwards: forwards.len(),
                backwards: backwards.len(),
            });
        }
        Ok(Self {
            regulars,
            singulars,
            forwards,
            backwards,
        })
    }

    /// The zigzag of length 0 on a single regular object.
    pub fn trivial(r: O) -> Self {
        Self {
            regulars: vec![r],
            singulars: Vec::new(),
            forwards: Vec::new(),
            backwards: Vec::new(),
        }
    }

    /// The zigzag `r0 -> s <- r1`.
    pub fn cospan(r0: O, s: O, r1: O, forward: M, backward: M) -> Self {
        Self {
            regulars: vec![r0, r1],
            singulars: vec![s],
            forwards: vec![forward],
            backwards: vec![backward],
        }
    }

    pub fn len(&self) -> usize {
        self.singulars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.singulars.is_empty()
    }

    pub fn regulars(&self) -> &[O] {
        &self.regulars
    }

    pub fn singulars(&self) -> &[O] {
        &self.singulars
    }

    pub fn forwards(&self) -> &[M] {
        &self.forwards
    }

    pub fn backwards(&self) -> &[M] {
        &self.backwards
    }

    pub fn regular(&self, i: usize) -> &O {
        &self.regulars[i]
    }

    pub fn singular(&self, i: usize) -> &O {
        &self.singulars[i]
    }

    pub fn forward(&self, i: usize) -> &M {
        &self.forwards[i]
    }

    pub fn backward(&self, i: usize) -> &M {
        &self.backwards[i]
    }

    /// First and last regular objects.
    pub fn boundaries(&self) -> (&O, &O) {
        (&self.regulars[0], &self.regulars[self.len()])
    }

    pub fn source(&self) -> &O {
        &self.regulars[0]
    }

    pub fn target(&self) -> &O {
        &self.regulars[self.len()]
    }

    pub fn into_parts(self) -> (Vec<O>, Vec<O>, Vec<M>, Vec<M>) {
        (self.regulars, self.singulars, self.forwards, self.backwards)
    }
}

/// A map of zigzags: a monotone map of singular heights plus a base
/// morphism out of every source singular object.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ZigzagMap<O, M> {
    source: Arc<Zigzag<O, M>>,
    target: Arc<Zigzag<O, M>>,
    sing: Monotone,
    slices: Vec<M>,
}

impl<O: Clone, M: Clone> ZigzagMap<O, M> {
    /// Checks sizes only; commutativity is checked by [`validate_map`].
    pub fn new(source: Zigzag<O, M>, target: Zigzag<O, M>, sing: Monotone, slices: Vec<M>) -> Result<Self, ZigzagError> {
        Self::new_shared(Arc::new(source), Arc::new(target), sing, slices)
    }

    pub fn new_shared(
        source: Arc<Zigzag<O, M>>,
        target: Arc<Zigzag<O, M>>,
        sing: Monotone,
        slices: Vec<M>,
    ) -> Result<Self, ZigzagError> {
        if sing.source_size() != source.len() || sing.target_size() != target.len() || slices.len() != source.len() {
            return Err(ZigzagError::SliceCountMismatch {
                slices: slices.len(),
                heights: source.len(),
            });
        }
        Ok(Self {
            source,
            target,
            sing,
            slices,
        })
    }

    pub fn source(&self) -> &Zigzag<O, M> {
        &self.source
    }

    pub fn target(&self) -> &Zigzag<O, M> {
        &self.target
    }

    pub fn source_shared(&self) -> &Arc<Zigzag<O, M>> {
        &self.source
    }

    pub fn target_shared(&self) -> &Arc<Zigzag<O, M>> {
        &self.target
    }

    pub fn sing(&self) -> &Monotone {
        &self.sing
    }

    pub fn slices(&self) -> &[M] {
        &self.slices
    }

    pub fn slice(&self, i: usize) -> &M {
        &self.slices[i]
    }

    /// The induced endpoint-preserving map of regular heights, running
    /// from target regular heights to source regular heights.
    pub fn regular_map(&self) -> RegularMonotone {
        self.sing.reversal()
    }

    pub fn into_parts(self) -> (Arc<Zigzag<O, M>>, Arc<Zigzag<O, M>>, Monotone, Vec<M>) {
        (self.source, self.target, self.sing, self.slices)
    }
}

pub fn identity_map<C: Category>(cat: &C, z: &Zigzag<C::Object, C::Morphism>) -> ZigzagMap<C::Object, C::Morphism> {
    let shared = Arc::new(z.clone());
    ZigzagMap {
        source: shared.clone(),
        target: shared,
        sing: Monotone::identity(z.len()),
        slices: z.singulars.iter().map(|s| cat.identity(s)).collect(),
    }
}

/// `f` then `g`.
pub fn compose_maps<C: Category>(
    cat: &C,
    f: &ZigzagMap<C::Object, C::Morphism>,
    g: &ZigzagMap<C::Object, C::Morphism>,
) -> Result<ZigzagMap<C::Object, C::Morphism>, ZigzagError> {
    if f.target != g.source {
        return Err(CategoryError::NotComposable("target of first map differs from source of second".into()).into());
    }
    let sing = f.sing.compose(&g.sing).map_err(|e| CategoryError::NotComposable(e.to_string()))?;
    let slices = f
        .slices
        .iter()
        .enumerate()
        .map(|(i, s)| cat.compose(s, &g.slices[f.sing.apply(i)]))
        .collect::<Result<_, _>>()?;
    Ok(ZigzagMap {
        source: f.source.clone(),
        target: g.target.clone(),
        sing,
        slices,
    })
}

/// A diagram of zigzags and zigzag maps.
pub type ZigzagDiagram<O, M> = BaseDiagram<Zigzag<O, M>, ZigzagMap<O, M>>;

/// The zigzag category over a base, itself a base category.
#[derive(Debug, Clone, Default)]
pub struct ZigzagCategory<B> {
    pub base: B,
    pub bias: Bias,
}

impl<B: Category> ZigzagCategory<B> {
    pub fn new(base: B) -> Self {
        Self { base, bias: Bias::None }
    }
}

impl<B: Category> Category for ZigzagCategory<B> {
    type Object = Zigzag<B::Object, B::Morphism>;
    type Morphism = ZigzagMap<B::Object, B::Morphism>;

    fn source(&self, f: &Self::Morphism) -> Self::Object {
        (*f.source).clone()
    }

    fn target(&self, f: &Self::Morphism) -> Self::Object {
        (*f.target).clone()
    }

    fn identity(&self, x: &Self::Object) -> Self::Morphism {
        identity_map(&self.base, x)
    }

    fn compose(&self, f: &Self::Morphism, g: &Self::Morphism) -> Result<Self::Morphism, CategoryError> {
        compose_maps(&self.base, f, g).map_err(|e| CategoryError::NotComposable(e.to_string()))
    }

    /// The cospan `t -> t <- t` on the base terminal object. It is terminal
    /// in the local category of zigzags from `t` to `t`.
    fn terminal(&self) -> Option<Self::Object> {
        let t = self.base.terminal()?;
        let id = self.base.identity(&t);
        Some(Zigzag::cospan(t.clone(), t.clone(), t, id.clone(), id))
    }

    fn connected_colimit(&self, d: &ZigzagDiagram<B::Object, B::Morphism>) -> Result<Cocone<Self::Object, Self::Morphism>, ColimitFailure> {
        crate::colimit::zigzag_colimit(&self.base, d, self.bias).map(|c| Cocone {
            apex: c.apex,
            legs: c.legs,
        })
    }
}
