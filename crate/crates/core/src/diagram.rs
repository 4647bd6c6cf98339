//! Typed n-diagrams: objects of the n-fold zigzag category over the label
//! poset of a signature.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catcore::{label_colimit, BaseDiagram, Category, CategoryError, Cocone, ColimitFailure, LabelId, LabelSignature};
use crate::colimit::zigzag_colimit;
use crate::monotone::{Bias, Monotone};
use crate::zigzag::{
    compose_maps, concatenate, concatenate_maps, validate_map, validate_zigzag, Height, MapViolation, Zigzag,
    ZigzagDiagram, ZigzagError, ZigzagMap, ZigzagViolation,
};

pub type TypedZigzag = Zigzag<Diagram, Morphism>;
pub type TypedMap = ZigzagMap<Diagram, Morphism>;

/// A label (dimension 0) or a zigzag of diagrams one dimension lower.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Diagram {
    Label(LabelId),
    Zigzag(Arc<TypedZigzag>),
}

/// A morphism of diagrams: a fact `l <= l'` of the label poset, or a
/// zigzag map.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Morphism {
    Poset { source: LabelId, target: LabelId },
    Map(Arc<TypedMap>),
}

impl fmt::Debug for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagram::Label(l) => write!(f, "{l}"),
            Diagram::Zigzag(z) => {
                write!(f, "[")?;
                for i in 0..z.len() {
                    write!(f, "{:?} > {:?} < ", z.regular(i), z.singular(i))?;
                }
                write!(f, "{:?}]", z.target())
            }
        }
    }
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Morphism::Poset { source, target } => write!(f, "{source}->{target}"),
            Morphism::Map(m) => write!(f, "map{:?}{:?}", m.sing().values(), m.slices()),
        }
    }
}

impl Diagram {
    pub fn label(id: &str) -> Self {
        Diagram::Label(id.into())
    }

    pub fn from_zigzag(z: TypedZigzag) -> Self {
        Diagram::Zigzag(Arc::new(z))
    }

    pub fn dimension(&self) -> usize {
        match self {
            Diagram::Label(_) => 0,
            Diagram::Zigzag(z) => 1 + z.source().dimension(),
        }
    }

    pub fn as_zigzag(&self) -> Option<&TypedZigzag> {
        match self {
            Diagram::Zigzag(z) => Some(z),
            Diagram::Label(_) => None,
        }
    }

    pub fn as_label(&self) -> Option<&LabelId> {
        match self {
            Diagram::Label(l) => Some(l),
            Diagram::Zigzag(_) => None,
        }
    }

    /// Top-level length; 0 for labels.
    pub fn len(&self) -> usize {
        self.as_zigzag().map_or(0, Zigzag::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl Morphism {
    pub fn poset(source: &LabelId, target: &LabelId) -> Self {
        Morphism::Poset {
            source: source.clone(),
            target: target.clone(),
        }
    }

    pub fn map(m: TypedMap) -> Self {
        Morphism::Map(Arc::new(m))
    }

    pub fn source(&self) -> Diagram {
        match self {
            Morphism::Poset { source, .. } => Diagram::Label(source.clone()),
            Morphism::Map(m) => Diagram::Zigzag(m.source_shared().clone()),
        }
    }

    pub fn target(&self) -> Diagram {
        match self {
            Morphism::Poset { target, .. } => Diagram::Label(target.clone()),
            Morphism::Map(m) => Diagram::Zigzag(m.target_shared().clone()),
        }
    }

    pub fn as_map(&self) -> Option<&TypedMap> {
        match self {
            Morphism::Map(m) => Some(m),
            Morphism::Poset { .. } => None,
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            Morphism::Poset { source, target } => source == target,
            Morphism::Map(m) => {
                m.source_shared() == m.target_shared() && m.sing().is_identity() && m.slices().iter().all(Morphism::is_identity)
            }
        }
    }
}

/// The category of typed diagrams of all dimensions over a signature. The
/// bias is used whenever a colimit of singular heights does not exist.
#[derive(Debug, Clone, Copy)]
pub struct TypedCategory<'a> {
    pub signature: &'a LabelSignature,
    pub bias: Bias,
}

impl<'a> TypedCategory<'a> {
    pub fn new(signature: &'a LabelSignature) -> Self {
        Self {
            signature,
            bias: Bias::None,
        }
    }

    pub fn with_bias(signature: &'a LabelSignature, bias: Bias) -> Self {
        Self { signature, bias }
    }
}

/// Rebuilds a map on the given shared endpoints, which must be equal to
/// its own.
pub(crate) fn reshare(m: TypedMap, source: &Arc<TypedZigzag>, target: &Arc<TypedZigzag>) -> TypedMap {
    debug_assert!(**m.source_shared() == **source && **m.target_shared() == **target);
    let (_, _, sing, slices) = m.into_parts();
    ZigzagMap::new_shared(source.clone(), target.clone(), sing, slices).expect("sizes unchanged")
}

impl Category for TypedCategory<'_> {
    type Object = Diagram;
    type Morphism = Morphism;

    fn source(&self, f: &Morphism) -> Diagram {
        f.source()
    }

    fn target(&self, f: &Morphism) -> Diagram {
        f.target()
    }

    fn identity(&self, x: &Diagram) -> Morphism {
        identity(x)
    }

    fn compose(&self, f: &Morphism, g: &Morphism) -> Result<Morphism, CategoryError> {
        match (f, g) {
            (Morphism::Poset { source, target }, Morphism::Poset { source: s2, target: t2 }) => {
                if target != s2 {
                    return Err(CategoryError::NotComposable(format!("{f:?} then {g:?}")));
                }
                Ok(Morphism::poset(source, t2))
            }
            (Morphism::Map(a), Morphism::Map(b)) => {
                let (_, _, sing, slices) = compose_maps(self, a, b)
                    .map_err(|e| CategoryError::NotComposable(e.to_string()))?
                    .into_parts();
                Ok(Morphism::map(
                    ZigzagMap::new_shared(a.source_shared().clone(), b.target_shared().clone(), sing, slices).expect("sizes agree"),
                ))
            }
            _ => Err(CategoryError::NotComposable("morphisms of different dimensions".into())),
        }
    }

    fn terminal(&self) -> Option<Diagram> {
        None
    }

    fn connected_colimit(&self, d: &BaseDiagram<Diagram, Morphism>) -> Result<Cocone<Diagram, Morphism>, ColimitFailure> {
        crate::catcore::check_shape(&d.shape)?;
        let mixed = || ColimitFailure::Malformed {
            detail: "diagram mixes dimensions".into(),
        };
        match &d.objects[0] {
            Diagram::Label(_) => {
                let labels = d.objects.iter().map(|x| x.as_label().cloned().ok_or_else(mixed)).collect::<Result<Vec<_>, _>>()?;
                let apex = label_colimit(self.signature, &labels)?;
                Ok(Cocone {
                    legs: labels.iter().map(|l| Morphism::poset(l, &apex)).collect(),
                    apex: Diagram::Label(apex),
                })
            }
            Diagram::Zigzag(_) => {
                let objects = d.objects.iter().map(|x| x.as_zigzag().cloned().ok_or_else(mixed)).collect::<Result<Vec<_>, _>>()?;
                let arrows = d.arrows.iter().map(|m| m.as_map().cloned().ok_or_else(mixed)).collect::<Result<Vec<_>, _>>()?;
                let zd = ZigzagDiagram {
                    shape: d.shape.clone(),
                    objects,
                    arrows,
                };
                let c = zigzag_colimit(self, &zd, self.bias)?;
                let apex = Arc::new(c.apex);
                let legs = c
                    .legs
                    .into_iter()
                    .zip(&d.objects)
                    .map(|(l, x)| {
                        let (_, _, sing, slices) = l.into_parts();
                        let Diagram::Zigzag(source) = x else { unreachable!("checked above") };
                        Morphism::map(ZigzagMap::new_shared(source.clone(), apex.clone(), sing, slices).expect("sizes unchanged"))
                    })
                    .collect();
                Ok(Cocone {
                    legs,
                    apex: Diagram::Zigzag(apex),
                })
            }
        }
    }
}

/// A sequence of heights, outermost first, addressing a slice.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path(pub Vec<Height>);

impl Path {
    pub fn root() -> Self {
        Path(Vec::new())
    }

    pub fn child(&self, h: Height) -> Self {
        let mut v = self.0.clone();
        v.push(h);
        Path(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn singular_count(&self) -> usize {
        self.0.iter().filter(|h| matches!(h, Height::Singular(_))).count()
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|h| match h {
                Height::Regular(i) => format!("r{i}"),
                Height::Singular(i) => format!("s{i}"),
            })
            .collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for Path {
    type Err = String;

    /// `s0,r1` style; an empty string or `-` is the root.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || s == "-" {
            return Ok(Path::root());
        }
        s.split(',')
            .map(|part| {
                let part = part.trim();
                let (kind, index) = part.split_at(part.char_indices().nth(1).map_or(part.len(), |(i, _)| i));
                let index: usize = index.parse().map_err(|_| format!("bad path coordinate `{part}`"))?;
                match kind {
                    "s" | "S" => Ok(Height::Singular(index)),
                    "r" | "R" => Ok(Height::Regular(index)),
                    _ => Err(format!("bad path coordinate `{part}` (expected s<i> or r<i>)")),
                }
            })
            .collect::<Result<_, _>>()
            .map(Path)
    }
}

impl Serialize for Path {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Path {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("path coordinate {depth} is out of range")]
    PathOutOfRange { depth: usize },
    #[error("expected a diagram of dimension at least 1")]
    NotAZigzag,
    #[error("top-level lengths differ: {left} and {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error(transparent)]
    Zigzag(#[from] ZigzagError),
}

/// The sub-diagram addressed by a path.
pub fn slice(d: &Diagram, path: &Path) -> Result<Diagram, DiagramError> {
    let mut current = d.clone();
    for (depth, h) in path.0.iter().enumerate() {
        let z = current.as_zigzag().ok_or(DiagramError::PathOutOfRange { depth })?;
        let next = match *h {
            Height::Regular(i) if i <= z.len() => z.regular(i).clone(),
            Height::Singular(i) if i < z.len() => z.singular(i).clone(),
            _ => return Err(DiagramError::PathOutOfRange { depth }),
        };
        current = next;
    }
    Ok(current)
}

/// The length-0 diagram one dimension up.
pub fn identity_suspend(d: &Diagram) -> Diagram {
    Diagram::from_zigzag(Zigzag::trivial(d.clone()))
}

pub fn concat(d: &Diagram, e: &Diagram) -> Result<Diagram, DiagramError> {
    let (a, b) = (d.as_zigzag().ok_or(DiagramError::NotAZigzag)?, e.as_zigzag().ok_or(DiagramError::NotAZigzag)?);
    Ok(Diagram::from_zigzag(concatenate(a, b)?))
}

/// Side-by-side composite of two diagrams of equal top-level length: every
/// slice is concatenated with the corresponding slice, and every map with
/// the corresponding map.
pub fn beside(d: &Diagram, e: &Diagram) -> Result<Diagram, DiagramError> {
    let (a, b) = (d.as_zigzag().ok_or(DiagramError::NotAZigzag)?, e.as_zigzag().ok_or(DiagramError::NotAZigzag)?);
    if a.len() != b.len() {
        return Err(DiagramError::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let objects = |x: &[Diagram], y: &[Diagram]| -> Result<Vec<Diagram>, DiagramError> { x.iter().zip(y).map(|(p, q)| concat(p, q)).collect() };
    let regulars = objects(a.regulars(), b.regulars())?;
    let singulars = objects(a.singulars(), b.singulars())?;
    let maps = |x: &[Morphism], y: &[Morphism], sources: &[Diagram], targets: &[Diagram]| -> Result<Vec<Morphism>, DiagramError> {
        x.iter()
            .zip(y)
            .zip(sources.iter().zip(targets))
            .map(|((f, g), (s, t))| {
                let (f, g) = (f.as_map().ok_or(DiagramError::NotAZigzag)?, g.as_map().ok_or(DiagramError::NotAZigzag)?);
                let (_, _, sing, slices) = concatenate_maps(f, g)?.into_parts();
                let (Diagram::Zigzag(s), Diagram::Zigzag(t)) = (s, t) else {
                    return Err(DiagramError::NotAZigzag);
                };
                Ok(Morphism::map(ZigzagMap::new_shared(s.clone(), t.clone(), sing, slices)?))
            })
            .collect()
    };
    let forwards = maps(a.forwards(), b.forwards(), &regulars[..a.len()], &singulars)?;
    let backwards = maps(a.backwards(), b.backwards(), &regulars[1..], &singulars)?;
    Ok(Diagram::from_zigzag(Zigzag::new(regulars, singulars, forwards, backwards)?))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConeError {
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("expected dimension {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("source and target boundaries differ")]
    NotGlobular,
    #[error("no map into the cone: {0}")]
    ConeMapMissing(String),
}

/// The unique map from `x` into a cone core whose heights all collapse to
/// one, bottoming out in label-poset facts.
fn collapse(sig: &LabelSignature, x: &Diagram, core: &Diagram) -> Result<Morphism, ConeError> {
    match (x, core) {
        (Diagram::Label(a), Diagram::Label(k)) => {
            if sig.leq(a, k) {
                Ok(Morphism::poset(a, k))
            } else {
                Err(ConeError::ConeMapMissing(format!("{a} is not below {k}")))
            }
        }
        (Diagram::Zigzag(z), Diagram::Zigzag(k)) => {
            if z.source() != k.source() || z.target() != k.target() {
                return Err(ConeError::NotGlobular);
            }
            let slices = z.singulars().iter().map(|s| collapse(sig, s, k.singular(0))).collect::<Result<_, _>>()?;
            let sing = Monotone::constant(z.len(), k.len(), 0).map_err(|e| ConeError::ConeMapMissing(e.to_string()))?;
            let m = ZigzagMap::new_shared(z.clone(), k.clone(), sing, slices).map_err(|e| ConeError::ConeMapMissing(e.to_string()))?;
            Ok(Morphism::map(m))
        }
        _ => Err(ConeError::DimensionMismatch {
            expected: core.dimension(),
            found: x.dimension(),
        }),
    }
}

/// Singular object of the cone on `l` between `s` and `t`.
fn cone_core(sig: &LabelSignature, l: &str, s: &Diagram, t: &Diagram) -> Result<Diagram, ConeError> {
    match (s, t) {
        (Diagram::Label(_), Diagram::Label(_)) => Ok(Diagram::label(l)),
        (Diagram::Zigzag(a), Diagram::Zigzag(b)) => {
            if a.source() != b.source() || a.target() != b.target() {
                return Err(ConeError::NotGlobular);
            }
            let inner = cone_core(sig, l, a.source(), a.target())?;
            let forward = collapse(sig, a.source(), &inner)?;
            let backward = collapse(sig, a.target(), &inner)?;
            Ok(Diagram::from_zigzag(Zigzag::cospan(a.source().clone(), inner, a.target().clone(), forward, backward)))
        }
        _ => Err(ConeError::DimensionMismatch {
            expected: s.dimension(),
            found: t.dimension(),
        }),
    }
}

/// The generator `l` as a diagram from `s` to `t`: a single singular height
/// whose slice is the iterated endpoint-pinching cone.
pub fn cone_generator(sig: &LabelSignature, l: &str, s: &Diagram, t: &Diagram) -> Result<Diagram, ConeError> {
    let dim = sig.dim(l).map_err(|_| ConeError::UnknownLabel(l.to_owned()))?;
    if dim == 0 {
        return Err(ConeError::DimensionMismatch { expected: 1, found: 0 });
    }
    for x in [s, t] {
        if x.dimension() != dim - 1 {
            return Err(ConeError::DimensionMismatch {
                expected: dim - 1,
                found: x.dimension(),
            });
        }
    }
    let core = cone_core(sig, l, s, t)?;
    let forward = collapse(sig, s, &core)?;
    let backward = collapse(sig, t, &core)?;
    Ok(Diagram::from_zigzag(Zigzag::cospan(s.clone(), core, t.clone(), forward, backward)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ViolationKind {
    UnknownLabel(String),
    MixedDimensions,
    NotALabelFact { source: String, target: String },
    MorphismKind,
    Zigzag(Vec<ZigzagViolation>),
    Map(Vec<MapViolation>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub path: Path,
    pub kind: ViolationKind,
}

struct Checker<'a> {
    cat: TypedCategory<'a>,
    seen_objects: HashSet<*const TypedZigzag>,
    seen_maps: HashSet<*const TypedMap>,
    out: Vec<Violation>,
}

impl Checker<'_> {
    fn object(&mut self, d: &Diagram, path: &Path) {
        match d {
            Diagram::Label(l) => {
                if self.cat.signature.get(l).is_none() {
                    self.out.push(Violation {
                        path: path.clone(),
                        kind: ViolationKind::UnknownLabel(l.to_string()),
                    });
                }
            }
            Diagram::Zigzag(z) => {
                if !self.seen_objects.insert(Arc::as_ptr(z)) {
                    return;
                }
                let dim = z.source().dimension();
                if z.regulars().iter().chain(z.singulars()).any(|x| x.dimension() != dim) {
                    self.out.push(Violation {
                        path: path.clone(),
                        kind: ViolationKind::MixedDimensions,
                    });
                    return;
                }
                if let Err(v) = validate_zigzag(&self.cat, z) {
                    self.out.push(Violation {
                        path: path.clone(),
                        kind: ViolationKind::Zigzag(v),
                    });
                }
                for (i, r) in z.regulars().iter().enumerate() {
                    self.object(r, &path.child(Height::Regular(i)));
                }
                for (i, s) in z.singulars().iter().enumerate() {
                    let p = path.child(Height::Singular(i));
                    self.object(s, &p);
                    self.morphism(z.forward(i), &p);
                    self.morphism(z.backward(i), &p);
                }
            }
        }
    }

    fn morphism(&mut self, m: &Morphism, path: &Path) {
        match m {
            Morphism::Poset { source, target } => {
                if !self.cat.signature.leq(source, target) {
                    self.out.push(Violation {
                        path: path.clone(),
                        kind: ViolationKind::NotALabelFact {
                            source: source.to_string(),
                            target: target.to_string(),
                        },
                    });
                }
            }
            Morphism::Map(map) => {
                if !self.seen_maps.insert(Arc::as_ptr(map)) {
                    return;
                }
                if map.source().source().dimension() != map.target().source().dimension() {
                    self.out.push(Violation {
                        path: path.clone(),
                        kind: ViolationKind::MorphismKind,
                    });
                    return;
                }
                if let Err(v) = validate_map(&self.cat, map) {
                    self.out.push(Violation {
                        path: path.clone(),
                        kind: ViolationKind::Map(v),
                    });
                    return;
                }
                for g in map.slices() {
                    self.morphism(g, path);
                }
            }
        }
    }
}

/// Structural validity: every zigzag is well typed, every map commutes,
/// every label fact holds and every label is in the signature.
pub fn validate(sig: &LabelSignature, d: &Diagram) -> Result<(), Vec<Violation>> {
    let mut c = Checker {
        cat: TypedCategory::new(sig),
        seen_objects: HashSet::new(),
        seen_maps: HashSet::new(),
        out: Vec::new(),
    };
    c.object(d, &Path::root());
    if c.out.is_empty() {
        Ok(())
    } else {
        Err(c.out)
    }
}

/// Structural validity of a morphism, including its endpoints.
pub fn validate_morphism(sig: &LabelSignature, m: &Morphism) -> Result<(), Vec<Violation>> {
    let mut c = Checker {
        cat: TypedCategory::new(sig),
        seen_objects: HashSet::new(),
        seen_maps: HashSet::new(),
        out: Vec::new(),
    };
    c.object(&m.source(), &Path::root());
    c.object(&m.target(), &Path::root());
    c.morphism(m, &Path::root());
    if c.out.is_empty() {
        Ok(())
    } else {
        Err(c.out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimensionViolation {
    pub path: Path,
    pub label: String,
    pub dim: usize,
    pub singular_coordinates: usize,
}

/// Every label reached along a path with `k` singular coordinates must have
/// dimension at most `k`.
pub fn validate_dimensions(sig: &LabelSignature, d: &Diagram) -> Result<(), Vec<DimensionViolation>> {
    fn go(sig: &LabelSignature, d: &Diagram, path: &mut Vec<Height>, singular: usize, out: &mut Vec<DimensionViolation>) {
        match d {
            Diagram::Label(l) => {
                let dim = sig.dim(l).unwrap_or(usize::MAX);
                if dim > singular {
                    out.push(DimensionViolation {
                        path: Path(path.clone()),
                        label: l.to_string(),
                        dim,
                        singular_coordinates: singular,
                    });
                }
            }
            Diagram::Zigzag(z) => {
                for i in 0..=z.len() {
                    path.push(Height::Regular(i));
                    go(sig, z.regular(i), path, singular, out);
                    path.pop();
                    if i < z.len() {
                        path.push(Height::Singular(i));
                        go(sig, z.singular(i), path, singular + 1, out);
                        path.pop();
                    }
                }
            }
        }
    }
    let mut out = Vec::new();
    go(sig, d, &mut Vec::new(), 0, &mut out);
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

/// Identity morphism on a diagram.
pub fn identity(d: &Diagram) -> Morphism {
    match d {
        Diagram::Label(l) => Morphism::poset(l, l),
        Diagram::Zigzag(z) => {
            let slices = z.singulars().iter().map(identity).collect();
            Morphism::map(ZigzagMap::new_shared(z.clone(), z.clone(), Monotone::identity(z.len()), slices).expect("identity"))
        }
    }
}

/// The identity zigzag map on a typed zigzag, with shared endpoints.
pub fn identity_zigzag_map(z: &Arc<TypedZigzag>) -> TypedMap {
    let slices = z.singulars().iter().map(identity).collect();
    ZigzagMap::new_shared(z.clone(), z.clone(), Monotone::identity(z.len()), slices).expect("identity")
}
