//! Generalized contractions `D -> C` and expansions `E -> D` of typed
//! diagrams. A move is computed at the level addressed by a path and then
//! propagated outward one coordinate at a time.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catcore::{BaseDiagram, Category, ColimitFailure, LabelSignature};
use crate::colimit::{contract_zigzag, window_diagram, ContractError};
use crate::diagram::{
    identity, identity_zigzag_map, reshare, slice, validate_dimensions, DimensionViolation, Diagram, Morphism, Path,
    TypedCategory, TypedMap, TypedZigzag,
};
use crate::monotone::{Bias, Monotone};
use crate::zigzag::{concatenate, concatenate_maps, restrict, restrict_map, validate_map, Height, MapViolation, Zigzag, ZigzagMap};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ContractionDirective {
    #[serde(default)]
    pub path: Path,
    /// Regular heights `(a, b)`; the singular heights `a..b` are merged.
    pub window: (usize, usize),
    #[serde(default)]
    pub bias: Bias,
}

/// Which group of a split occurs at the lower of the two new heights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum First {
    /// The first listed group.
    #[default]
    Lower,
    /// The second listed group.
    Higher,
}

impl std::str::FromStr for First {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lower" => Ok(First::Lower),
            "higher" => Ok(First::Higher),
            other => Err(format!("unknown order `{other}` (expected lower or higher)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExpansionDirective {
    #[serde(default)]
    pub path: Path,
    /// Singular height of the addressed zigzag to split.
    pub height: usize,
    /// Partition of the inner singular heights of that singular object.
    pub split: (Vec<usize>, Vec<usize>),
    #[serde(default)]
    pub first: First,
}

/// Whether results failing [`validate_dimensions`] are rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Policy {
    #[default]
    Strict,
    Permissive,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomotopyError {
    #[error("path coordinate {depth} is out of range")]
    PathOutOfRange { depth: usize },
    #[error("the addressed diagram has dimension 0")]
    NotAZigzag,
    #[error("invalid window ({a}, {b}) for a zigzag of length {len}")]
    InvalidWindow { a: usize, b: usize, len: usize },
    #[error("colimit failed: {0}")]
    ColimitFailed(ColimitFailure),
    #[error("result violates dimension constraints at {} position(s)", .0.len())]
    DimensionViolation(Vec<DimensionViolation>),
    #[error("invalid split: {0}")]
    InvalidSplit(String),
    #[error("expansion unsupported: {0}")]
    ExpansionUnsupported(String),
    #[error("an expansion cannot be propagated through the regular coordinate at depth {depth}")]
    RegularPropagationImpossible { depth: usize },
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

/// Machine-readable form of a failure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureReport {
    pub step: u8,
    pub height: Option<usize>,
    pub reason: String,
    pub detail: String,
}

impl HomotopyError {
    pub fn report(&self) -> FailureReport {
        let (step, height, reason) = match self {
            HomotopyError::ColimitFailed(f) => (f.step(), f.height(), f.reason()),
            HomotopyError::PathOutOfRange { .. } => (0, None, "PathOutOfRange"),
            HomotopyError::NotAZigzag => (0, None, "NotAZigzag"),
            HomotopyError::InvalidWindow { .. } => (0, None, "InvalidWindow"),
            HomotopyError::DimensionViolation(_) => (0, None, "DimensionViolation"),
            HomotopyError::InvalidSplit(_) => (0, None, "InvalidSplit"),
            HomotopyError::ExpansionUnsupported(_) => (0, None, "ExpansionUnsupported"),
            HomotopyError::RegularPropagationImpossible { .. } => (0, None, "RegularPropagationImpossible"),
            HomotopyError::Internal(_) => (0, None, "Internal"),
        };
        FailureReport {
            step,
            height,
            reason: reason.to_owned(),
            detail: self.to_string(),
        }
    }
}

fn internal(e: impl std::fmt::Display) -> HomotopyError {
    HomotopyError::Internal(e.to_string())
}

impl From<ContractError> for HomotopyError {
    fn from(e: ContractError) -> Self {
        match e {
            ContractError::InvalidWindow { a, b, len } => HomotopyError::InvalidWindow { a, b, len },
            ContractError::ColimitFailed(f) => HomotopyError::ColimitFailed(f),
        }
    }
}

/// A generalized contraction: `map` runs from the input to `result`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contraction {
    pub result: Diagram,
    pub map: Morphism,
}

/// A generalized expansion: `map` runs from `result` to the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expansion {
    pub result: Diagram,
    pub map: Morphism,
    /// Contraction of the two heights created by the move, at the
    /// outermost level where they appear.
    pub new_pair: ContractionDirective,
    /// True if propagation never had to fall back to bubbling; contracting
    /// `new_pair` then recovers the input.
    pub factorized: bool,
}

/// `Z` with `s_i` replaced by the target `C` of `c`, and the map `Z -> Z'`
/// that is the identity except for the slice `c` at `i`.
pub fn promote_singular<C: Category>(
    cat: &C,
    z: &Arc<Zigzag<C::Object, C::Morphism>>,
    i: usize,
    c: &C::Morphism,
) -> Result<ZigzagMap<C::Object, C::Morphism>, HomotopyError> {
    if i >= z.len() {
        return Err(HomotopyError::PathOutOfRange { depth: 0 });
    }
    let (regulars, mut singulars, mut forwards, mut backwards) = (**z).clone().into_parts();
    singulars[i] = cat.target(c);
    forwards[i] = cat.compose(&forwards[i], c).map_err(internal)?;
    backwards[i] = cat.compose(&backwards[i], c).map_err(internal)?;
    let target = Zigzag::new(regulars, singulars, forwards, backwards).map_err(internal)?;
    let slices = (0..z.len()).map(|h| if h == i { c.clone() } else { cat.identity(z.singular(h)) }).collect();
    ZigzagMap::new_shared(z.clone(), Arc::new(target), Monotone::identity(z.len()), slices).map_err(internal)
}

/// Inserts the singular object `C` at height `j` between two copies of
/// `r_j`, both mapping to it by `c`. The map skips the new height.
pub fn bubble_regular<C: Category>(
    cat: &C,
    z: &Arc<Zigzag<C::Object, C::Morphism>>,
    j: usize,
    c: &C::Morphism,
) -> Result<ZigzagMap<C::Object, C::Morphism>, HomotopyError> {
    if j > z.len() {
        return Err(HomotopyError::PathOutOfRange { depth: 0 });
    }
    let (mut regulars, mut singulars, mut forwards, mut backwards) = (**z).clone().into_parts();
    regulars.insert(j, regulars[j].clone());
    singulars.insert(j, cat.target(c));
    forwards.insert(j, c.clone());
    backwards.insert(j, c.clone());
    let target = Zigzag::new(regulars, singulars, forwards, backwards).map_err(internal)?;
    let values = (0..z.len()).map(|h| if h < j { h } else { h + 1 }).collect();
    let slices = z.singulars().iter().map(|s| cat.identity(s)).collect();
    ZigzagMap::new_shared(z.clone(), Arc::new(target), Monotone::new_unchecked(values, z.len() + 1), slices).map_err(internal)
}

/// The diagrams along a path, outermost first.
fn levels(d: &Diagram, path: &Path) -> Result<Vec<Diagram>, HomotopyError> {
    let mut out = vec![d.clone()];
    for (depth, h) in path.0.iter().enumerate() {
        let next = slice(&out[depth], &Path(vec![*h])).map_err(|_| HomotopyError::PathOutOfRange { depth })?;
        out.push(next);
    }
    Ok(out)
}

fn zigzag_arc(d: &Diagram) -> Result<&Arc<TypedZigzag>, HomotopyError> {
    match d {
        Diagram::Zigzag(z) => Ok(z),
        Diagram::Label(_) => Err(HomotopyError::NotAZigzag),
    }
}

fn map_arc(m: &Morphism) -> Result<&Arc<TypedMap>, HomotopyError> {
    match m {
        Morphism::Map(m) => Ok(m),
        Morphism::Poset { .. } => Err(HomotopyError::Internal("expected a zigzag map".into())),
    }
}

fn check_dimensions(sig: &LabelSignature, d: &Diagram, policy: Policy) -> Result<(), HomotopyError> {
    match (policy, validate_dimensions(sig, d)) {
        (Policy::Strict, Err(v)) => Err(HomotopyError::DimensionViolation(v)),
        _ => Ok(()),
    }
}

/// Contracts the window at the addressed level, then promotes the result
/// through singular coordinates and bubbles it through regular ones.
pub fn contract_at(sig: &LabelSignature, d: &Diagram, dir: &ContractionDirective, policy: Policy) -> Result<Contraction, HomotopyError> {
    let cat = TypedCategory::with_bias(sig, dir.bias);
    let levels = levels(d, &dir.path)?;
    let z = zigzag_arc(levels.last().expect("non-empty"))?;
    let (a, b) = dir.window;
    let (contracted, map) = contract_zigzag(&cat, z, a, b)?;
    let contracted = Arc::new(contracted);
    let mut map = Morphism::map(reshare(map, z, &contracted));

    for depth in (0..dir.path.len()).rev() {
        let outer = zigzag_arc(&levels[depth])?;
        let m = match dir.path.0[depth] {
            Height::Singular(i) => promote_singular(&cat, outer, i, &map)?,
            Height::Regular(j) => bubble_regular(&cat, outer, j, &map)?,
        };
        map = Morphism::map(m);
    }
    let result = map.target();
    check_dimensions(sig, &result, policy)?;
    Ok(Contraction { result, map })
}

/// The singular heights of a contraction window as a diagram in Δ, the
/// input of the first colimit step. `None` when the window holds labels.
pub fn window_delta(d: &Diagram, dir: &ContractionDirective) -> Result<Option<BaseDiagram<usize, Monotone>>, HomotopyError> {
    let levels = levels(d, &dir.path)?;
    let z = zigzag_arc(levels.last().expect("non-empty"))?;
    let w = window_diagram(z.as_ref(), dir.window.0, dir.window.1)?;
    if w.objects.iter().any(|o| o.as_zigzag().is_none()) {
        return Ok(None);
    }
    let arrows = w.arrows.iter().map(|m| map_arc(m).map(|m| m.sing().clone())).collect::<Result<_, _>>()?;
    Ok(Some(BaseDiagram {
        shape: w.shape,
        objects: w.objects.iter().map(Diagram::len).collect(),
        arrows,
    }))
}

fn concat_all(parts: Vec<TypedZigzag>) -> Result<TypedZigzag, HomotopyError> {
    let mut it = parts.into_iter();
    let first = it.next().ok_or_else(|| internal("nothing to concatenate"))?;
    it.try_fold(first, |acc, z| concatenate(&acc, &z)).map_err(internal)
}

fn concat_maps_on(parts: Vec<TypedMap>, source: &Arc<TypedZigzag>, target: &Arc<TypedZigzag>) -> Result<Morphism, HomotopyError> {
    let mut it = parts.into_iter();
    let first = it.next().ok_or_else(|| internal("nothing to concatenate"))?;
    let m = it.try_fold(first, |acc, m| concatenate_maps(&acc, &m)).map_err(internal)?;
    if **m.source_shared() != **source || **m.target_shared() != **target {
        return Err(internal("concatenated pieces do not reassemble"));
    }
    Ok(Morphism::map(reshare(m, source, target)))
}

/// Splits `s_i` into two singular heights, the heights in `lower` happening
/// first, and returns the expanded zigzag with its map onto `z` and the
/// bias under which contracting the new pair recovers `z`.
fn split_singular(
    cat: &TypedCategory<'_>,
    z: &Arc<TypedZigzag>,
    i: usize,
    lower: &BTreeSet<usize>,
) -> Result<(Arc<TypedZigzag>, TypedMap, Bias), HomotopyError> {
    let s = zigzag_arc(z.singular(i)).map_err(|_| HomotopyError::ExpansionUnsupported("singular object has dimension 0".into()))?;
    let f = map_arc(z.forward(i))?;
    let b = map_arc(z.backward(i))?;

    let mut lower_parts = Vec::new();
    let mut middle_parts = Vec::new();
    let mut upper_parts = Vec::new();
    let (mut r_to_lower, mut lower_to_s, mut middle_to_lower) = (Vec::new(), Vec::new(), Vec::new());
    let (mut middle_to_upper, mut r_to_upper, mut upper_to_s) = (Vec::new(), Vec::new(), Vec::new());
    for t in 0..s.len() {
        let piece = restrict(s, t, t + 1).map_err(internal)?;
        let id_piece = identity_zigzag_map(&Arc::new(piece.clone()));
        let ft = restrict_map(f, t, t + 1).map_err(internal)?;
        let bt = restrict_map(b, t, t + 1).map_err(internal)?;
        if lower.contains(&t) {
            let rb = bt.source_shared().clone();
            lower_parts.push(piece.clone());
            r_to_lower.push(ft);
            lower_to_s.push(id_piece);
            middle_parts.push((*rb).clone());
            middle_to_lower.push(bt.clone());
            middle_to_upper.push(identity_zigzag_map(&rb));
            upper_parts.push((*rb).clone());
            r_to_upper.push(identity_zigzag_map(&rb));
            upper_to_s.push(bt);
        } else {
            let rf = ft.source_shared().clone();
            lower_parts.push((*rf).clone());
            r_to_lower.push(identity_zigzag_map(&rf));
            lower_to_s.push(ft.clone());
            middle_parts.push((*rf).clone());
            middle_to_lower.push(identity_zigzag_map(&rf));
            middle_to_upper.push(ft);
            upper_parts.push(piece);
            r_to_upper.push(bt);
            upper_to_s.push(id_piece);
        }
    }
    let lo = Arc::new(concat_all(lower_parts)?);
    let mid = Arc::new(concat_all(middle_parts)?);
    let up = Arc::new(concat_all(upper_parts)?);

    let (regulars, singulars, forwards, backwards) = (**z).clone().into_parts();
    let splice = |v: &[Diagram], at: usize, skip: usize, new: Vec<Diagram>| -> Vec<Diagram> {
        let mut out = v[..at].to_vec();
        out.extend(new);
        out.extend_from_slice(&v[at + skip..]);
        out
    };
    let splice_m = |v: &[Morphism], new: Vec<Morphism>| -> Vec<Morphism> {
        let mut out = v[..i].to_vec();
        out.extend(new);
        out.extend_from_slice(&v[i + 1..]);
        out
    };
    let new_regulars = splice(&regulars, i + 1, 0, vec![Diagram::Zigzag(mid.clone())]);
    let new_singulars = splice(&singulars, i, 1, vec![Diagram::Zigzag(lo.clone()), Diagram::Zigzag(up.clone())]);
    let new_forwards = splice_m(
        &forwards,
        vec![concat_maps_on(r_to_lower, f.source_shared(), &lo)?, concat_maps_on(middle_to_upper, &mid, &up)?],
    );
    let new_backwards = splice_m(
        &backwards,
        vec![concat_maps_on(middle_to_lower, &mid, &lo)?, concat_maps_on(r_to_upper, b.source_shared(), &up)?],
    );
    let expanded = Arc::new(Zigzag::new(new_regulars, new_singulars, new_forwards, new_backwards).map_err(internal)?);

    let values = (0..expanded.len()).map(|h| if h <= i { h } else { h - 1 }).collect();
    let slices = (0..expanded.len())
        .map(|h| match h {
            _ if h == i => concat_maps_on(lower_to_s.clone(), &lo, s),
            _ if h == i + 1 => concat_maps_on(upper_to_s.clone(), &up, s),
            _ => Ok(identity(expanded.singular(h))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let e = ZigzagMap::new_shared(expanded.clone(), z.clone(), Monotone::new_unchecked(values, z.len()), slices).map_err(internal)?;

    let mut last = None;
    for bias in [Bias::None, Bias::Lower, Bias::Higher] {
        let biased = TypedCategory::with_bias(cat.signature, bias);
        match contract_zigzag(&biased, &expanded, i, i + 2) {
            Ok((recovered, back)) if recovered == **z && back.slices() == e.slices() => return Ok((expanded, e, bias)),
            Ok(_) => {}
            Err(err) => last = Some(err),
        }
    }
    Err(HomotopyError::ExpansionUnsupported(match last {
        Some(err) => format!("the new heights do not contract back: {err}"),
        None => "contracting the new heights does not recover the original".into(),
    }))
}

/// All factorizations `f = f' ; e` of `f` through `e`, in lexicographic
/// order of their singular data, up to `cap` of them.
pub fn factorizations(cat: &TypedCategory<'_>, f: &Morphism, e: &Morphism, cap: usize) -> Vec<Morphism> {
    match (f, e) {
        (Morphism::Poset { source: a, target: c }, Morphism::Poset { source: b, target: c2 }) => {
            if c == c2 && cat.signature.leq(a, b) {
                vec![Morphism::poset(a, b)]
            } else {
                Vec::new()
            }
        }
        (Morphism::Map(f), Morphism::Map(e)) => {
            if f.target_shared() != e.target_shared() {
                return Vec::new();
            }
            let mut search = Factorize {
                cat,
                f,
                e,
                cap,
                sing: Vec::new(),
                slices: Vec::new(),
                out: Vec::new(),
            };
            search.run(0);
            search.out
        }
        _ => Vec::new(),
    }
}

struct Factorize<'a, 'b> {
    cat: &'a TypedCategory<'b>,
    f: &'a Arc<TypedMap>,
    e: &'a Arc<TypedMap>,
    cap: usize,
    sing: Vec<usize>,
    slices: Vec<Morphism>,
    out: Vec<Morphism>,
}

impl Factorize<'_, '_> {
    fn run(&mut self, x: usize) {
        if self.out.len() >= self.cap {
            return;
        }
        let source = self.f.source_shared();
        let through = self.e.source_shared();
        if x == source.len() {
            let Ok(m) = ZigzagMap::new_shared(
                source.clone(),
                through.clone(),
                Monotone::new_unchecked(self.sing.clone(), through.len()),
                self.slices.clone(),
            ) else {
                return;
            };
            let candidate = Morphism::map(m);
            let valid = candidate.as_map().is_some_and(|m| validate_map(self.cat, m).is_ok());
            if valid && self.cat.compose(&candidate, &Morphism::Map(self.e.clone())).ok().as_ref() == Some(&Morphism::Map(self.f.clone())) {
                self.out.push(candidate);
            }
            return;
        }
        let lowest = self.sing.last().copied().unwrap_or(0);
        for y in self.e.sing().preimage(self.f.sing().apply(x)) {
            if y < lowest {
                continue;
            }
            for g in factorizations(self.cat, self.f.slice(x), self.e.slice(y), self.cap) {
                self.sing.push(y);
                self.slices.push(g);
                self.run(x + 1);
                self.sing.pop();
                self.slices.pop();
                if self.out.len() >= self.cap {
                    return;
                }
            }
        }
    }
}

/// The lexicographically least factorization of `f` through `e`.
pub fn factorize(cat: &TypedCategory<'_>, f: &Morphism, e: &Morphism) -> Option<Morphism> {
    factorizations(cat, f, e, 1).into_iter().next()
}

/// Splits a singular height at the addressed level in two and propagates
/// the expansion outward: through singular coordinates by factorizing the
/// adjacent maps, falling back to a bubble `r -> S <- E -> S <- r'` when no
/// factorization exists.
pub fn expand_at(sig: &LabelSignature, d: &Diagram, dir: &ExpansionDirective, policy: Policy) -> Result<Expansion, HomotopyError> {
    let cat = TypedCategory::new(sig);
    let levels = levels(d, &dir.path)?;
    let z = zigzag_arc(levels.last().expect("non-empty"))?;
    if dir.height >= z.len() {
        return Err(HomotopyError::InvalidSplit(format!("height {} out of range for length {}", dir.height, z.len())));
    }
    let inner = z.singular(dir.height).len();
    let (g0, g1): (BTreeSet<usize>, BTreeSet<usize>) = (dir.split.0.iter().copied().collect(), dir.split.1.iter().copied().collect());
    if g0.is_empty() || g1.is_empty() {
        return Err(HomotopyError::InvalidSplit("both groups must be non-empty".into()));
    }
    if g0.len() != dir.split.0.len() || g1.len() != dir.split.1.len() || !g0.is_disjoint(&g1) {
        return Err(HomotopyError::InvalidSplit("groups must be disjoint and free of repeats".into()));
    }
    if g0.len() + g1.len() != inner || g0.iter().chain(&g1).any(|&t| t >= inner) {
        return Err(HomotopyError::InvalidSplit(format!("groups must cover the {inner} inner heights exactly")));
    }
    let lower = match dir.first {
        First::Lower => g0,
        First::Higher => g1,
    };

    let (mut expanded, e, bias) = split_singular(&cat, z, dir.height, &lower)?;
    let mut map = Morphism::map(e);
    let mut new_pair = ContractionDirective {
        path: dir.path.clone(),
        window: (dir.height, dir.height + 2),
        bias,
    };
    let mut factorized = true;

    for depth in (0..dir.path.len()).rev() {
        let outer = zigzag_arc(&levels[depth])?;
        let j = match dir.path.0[depth] {
            Height::Singular(j) => j,
            Height::Regular(_) => return Err(HomotopyError::RegularPropagationImpossible { depth }),
        };
        let new_obj = Diagram::Zigzag(expanded.clone());
        let f = factorize(&cat, outer.forward(j), &map);
        let b = factorize(&cat, outer.backward(j), &map);
        let (regulars, singulars, forwards, backwards) = (**outer).clone().into_parts();
        let (next, m) = match (f, b) {
            (Some(f), Some(b)) => {
                let mut singulars = singulars;
                let (mut forwards, mut backwards) = (forwards, backwards);
                singulars[j] = new_obj;
                forwards[j] = f;
                backwards[j] = b;
                let next = Arc::new(Zigzag::new(regulars, singulars, forwards, backwards).map_err(internal)?);
                let slices = (0..outer.len()).map(|h| if h == j { map.clone() } else { identity(outer.singular(h)) }).collect();
                let m = ZigzagMap::new_shared(next.clone(), outer.clone(), Monotone::identity(outer.len()), slices).map_err(internal)?;
                (next, m)
            }
            _ => {
                factorized = false;
                let s = outer.singular(j).clone();
                let mut regulars = regulars;
                regulars.insert(j + 1, new_obj);
                let mut singulars = singulars;
                singulars.insert(j, s);
                let mut forwards = forwards;
                forwards.insert(j + 1, map.clone());
                let mut backwards = backwards;
                backwards.insert(j, map.clone());
                let next = Arc::new(Zigzag::new(regulars, singulars, forwards, backwards).map_err(internal)?);
                let values = (0..next.len()).map(|h| if h <= j { h } else { h - 1 }).collect();
                let slices = next.singulars().iter().map(identity).collect();
                let m = ZigzagMap::new_shared(next.clone(), outer.clone(), Monotone::new_unchecked(values, outer.len()), slices).map_err(internal)?;
                new_pair = ContractionDirective {
                    path: Path(dir.path.0[..depth].to_vec()),
                    window: (j, j + 2),
                    bias: Bias::None,
                };
                (next, m)
            }
        };
        expanded = next;
        map = Morphism::map(m);
    }
    let result = Diagram::Zigzag(expanded);
    check_dimensions(sig, &result, policy)?;
    Ok(Expansion {
        result,
        map,
        new_pair,
        factorized,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoveKind {
    Contraction,
    Expansion,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum GeneralizedViolation {
    Map(Vec<MapViolation>),
    NotAZigzagMap,
    /// More than one target height is missed (contraction), or any is
    /// missed (expansion).
    TooManyMissedHeights { missed: usize },
    /// More than one pair of source heights is merged.
    CollapsesTooMuch { source_len: usize, target_len: usize },
}

/// `validate_map` plus the shape expected of a move: a contraction merges
/// heights and may add one bubble; an expansion merges at most one pair
/// and misses nothing.
pub fn verify_generalized(sig: &LabelSignature, m: &Morphism, kind: MoveKind) -> Result<(), Vec<GeneralizedViolation>> {
    let Some(map) = m.as_map() else {
        return Err(vec![GeneralizedViolation::NotAZigzagMap]);
    };
    let mut out = Vec::new();
    if let Err(v) = validate_map(&TypedCategory::new(sig), map) {
        out.push(GeneralizedViolation::Map(v));
    }
    let missed = (0..map.target().len()).filter(|&t| map.sing().preimage(t).is_empty()).count();
    let allowed = match kind {
        MoveKind::Contraction => 1,
        MoveKind::Expansion => 0,
    };
    if missed > allowed {
        out.push(GeneralizedViolation::TooManyMissedHeights { missed });
    }
    if kind == MoveKind::Expansion && map.source().len() > map.target().len() + 1 {
        out.push(GeneralizedViolation::CollapsesTooMuch {
            source_len: map.source().len(),
            target_len: map.target().len(),
        });
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

/// The proof step `D -> C <- C` recording a contraction `c: D -> C`.
pub fn contraction_step(c: &Morphism) -> Diagram {
    let target = c.target();
    Diagram::from_zigzag(Zigzag::cospan(c.source(), target.clone(), target.clone(), c.clone(), identity(&target)))
}

/// The proof step `D -> D <- E` recording an expansion `e: E -> D`.
pub fn expansion_step(e: &Morphism) -> Diagram {
    let target = e.target();
    Diagram::from_zigzag(Zigzag::cospan(target.clone(), target.clone(), e.source(), identity(&target), e.clone()))
}
