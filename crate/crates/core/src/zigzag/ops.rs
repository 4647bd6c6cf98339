use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Zigzag, ZigzagDiagram, ZigzagError, ZigzagMap};
use crate::catcore::{BaseDiagram, Category, DiagramShape};
use crate::monotone::Monotone;

/// A position in a zigzag: a regular height `r_i` or a singular height `s_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Height {
    Regular(usize),
    Singular(usize),
}

impl Height {
    /// Position in the interleaved order `r0 < s0 < r1 < s1 < ...`.
    pub fn interleaved(self) -> usize {
        match self {
            Height::Regular(i) => 2 * i,
            Height::Singular(i) => 2 * i + 1,
        }
    }

    pub fn from_interleaved(k: usize) -> Self {
        if k % 2 == 0 {
            Height::Regular(k / 2)
        } else {
            Height::Singular(k / 2)
        }
    }
}

/// Glues two zigzags along the last regular object of the first.
pub fn concatenate<O: Clone + Eq, M: Clone>(z1: &Zigzag<O, M>, z2: &Zigzag<O, M>) -> Result<Zigzag<O, M>, ZigzagError> {
    if z1.target() != z2.source() {
        return Err(ZigzagError::BoundaryMismatch);
    }
    let mut regulars = z1.regulars.clone();
    regulars.extend(z2.regulars[1..].iter().cloned());
    Ok(Zigzag {
        regulars,
        singulars: [z1.singulars.clone(), z2.singulars.clone()].concat(),
        forwards: [z1.forwards.clone(), z2.forwards.clone()].concat(),
        backwards: [z1.backwards.clone(), z2.backwards.clone()].concat(),
    })
}

pub fn concatenate_maps<O: Clone + Eq, M: Clone>(
    m1: &ZigzagMap<O, M>,
    m2: &ZigzagMap<O, M>,
) -> Result<ZigzagMap<O, M>, ZigzagError> {
    let source = concatenate(&m1.source, &m2.source)?;
    let target = concatenate(&m1.target, &m2.target)?;
    let offset = m1.target.len();
    let values = m1
        .sing
        .values()
        .iter()
        .copied()
        .chain(m2.sing.values().iter().map(|&v| v + offset))
        .collect();
    let len = target.len();
    Ok(ZigzagMap {
        source: Arc::new(source),
        target: Arc::new(target),
        sing: Monotone::new_unchecked(values, len),
        slices: [m1.slices.clone(), m2.slices.clone()].concat(),
    })
}

/// The part of a zigzag between regular heights `a` and `b`.
pub fn restrict<O: Clone, M: Clone>(z: &Zigzag<O, M>, a: usize, b: usize) -> Result<Zigzag<O, M>, ZigzagError> {
    if a > b || b > z.len() {
        return Err(ZigzagError::IndexOutOfRange { a, b, len: z.len() });
    }
    Ok(Zigzag {
        regulars: z.regulars[a..=b].to_vec(),
        singulars: z.singulars[a..b].to_vec(),
        forwards: z.forwards[a..b].to_vec(),
        backwards: z.backwards[a..b].to_vec(),
    })
}

/// Restricts a map to the target window `(a, b)`; the source window is the
/// image of the window under the regular map.
pub fn restrict_map<O: Clone, M: Clone>(m: &ZigzagMap<O, M>, a: usize, b: usize) -> Result<ZigzagMap<O, M>, ZigzagError> {
    let target = restrict(&m.target, a, b)?;
    let reg = m.regular_map();
    let (sa, sb) = (reg.apply(a), reg.apply(b));
    let source = restrict(&m.source, sa, sb)?;
    let values = m.sing.values()[sa..sb].iter().map(|&v| v - a).collect();
    Ok(ZigzagMap {
        source: Arc::new(source),
        target: Arc::new(target),
        sing: Monotone::new_unchecked(values, b - a),
        slices: m.slices[sa..sb].to_vec(),
    })
}

/// A diagram of zigzags flattened into a diagram in the base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Deconstruction<O, M> {
    pub diagram: BaseDiagram<O, M>,
    offsets: Vec<usize>,
}

impl<O, M> Deconstruction<O, M> {
    /// Index of the base node for height `h` of the zigzag at node `j`.
    pub fn node(&self, j: usize, h: Height) -> usize {
        self.offsets[j] + h.interleaved()
    }
}

/// Nodes are pairs (diagram node, height). Each zigzag contributes its own
/// cospans; each diagram arrow contributes its slice morphisms between
/// singular heights and identities between matching regular heights, the
/// latter running from the target zigzag to the source zigzag.
pub fn deconstruct<C: Category>(cat: &C, d: &ZigzagDiagram<C::Object, C::Morphism>) -> Deconstruction<C::Object, C::Morphism> {
    let mut offsets = Vec::with_capacity(d.objects.len());
    let mut objects = Vec::new();
    for z in &d.objects {
        offsets.push(objects.len());
        for i in 0..z.len() {
            objects.push(z.regulars[i].clone());
            objects.push(z.singulars[i].clone());
        }
        objects.push(z.regulars[z.len()].clone());
    }

    let mut shape_arrows = Vec::new();
    let mut arrows = Vec::new();
    for (j, z) in d.objects.iter().enumerate() {
        for i in 0..z.len() {
            let s = offsets[j] + 2 * i + 1;
            shape_arrows.push((s - 1, s));
            arrows.push(z.forwards[i].clone());
            shape_arrows.push((s + 1, s));
            arrows.push(z.backwards[i].clone());
        }
    }
    for (&(j, k), m) in d.shape.arrows().iter().zip(&d.arrows) {
        for (i, g) in m.slices.iter().enumerate() {
            shape_arrows.push((offsets[j] + 2 * i + 1, offsets[k] + 2 * m.sing.apply(i) + 1));
            arrows.push(g.clone());
        }
        let reg = m.regular_map();
        for x in 0..=m.target.len() {
            shape_arrows.push((offsets[k] + 2 * x, offsets[j] + 2 * reg.apply(x)));
            arrows.push(cat.identity(&m.target.regulars[x]));
        }
    }
    let shape = DiagramShape::new(objects.len(), shape_arrows).expect("endpoints are in range by construction");
    Deconstruction {
        diagram: BaseDiagram { shape, objects, arrows },
        offsets,
    }
}

/// Applies a functor given by its object and morphism parts.
pub fn apply_functor<O, M, P, N>(z: &Zigzag<O, M>, on_objects: impl Fn(&O) -> P, on_morphisms: impl Fn(&M) -> N) -> Zigzag<P, N> {
    Zigzag {
        regulars: z.regulars.iter().map(&on_objects).collect(),
        singulars: z.singulars.iter().map(&on_objects).collect(),
        forwards: z.forwards.iter().map(&on_morphisms).collect(),
        backwards: z.backwards.iter().map(&on_morphisms).collect(),
    }
}

pub fn apply_functor_map<O, M, P, N>(
    m: &ZigzagMap<O, M>,
    on_objects: impl Fn(&O) -> P,
    on_morphisms: impl Fn(&M) -> N,
) -> ZigzagMap<P, N> {
    ZigzagMap {
        source: Arc::new(apply_functor(&*m.source, &on_objects, &on_morphisms)),
        target: Arc::new(apply_functor(&*m.target, &on_objects, &on_morphisms)),
        sing: m.sing.clone(),
        slices: m.slices.iter().map(&on_morphisms).collect(),
    }
}
