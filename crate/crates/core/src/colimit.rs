//! Colimits of connected diagrams of zigzags, computed height by height
//! from a colimit of singular heights in Δ and base colimits, and the
//! contraction of a window of a single zigzag.

use thiserror::Error;

use crate::catcore::{check_shape, BaseDiagram, Category, ColimitFailure, DiagramShape};
use crate::monotone::{biased_cocone, delta_colimit, Bias, DeltaColimitError, DeltaCocone, DeltaDiagram, Monotone, NoColimitReason};
use crate::zigzag::{
    concatenate, concatenate_maps, deconstruct, restrict, restrict_map, Height, Zigzag, ZigzagDiagram, ZigzagError, ZigzagMap,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZigzagCocone<O, M> {
    pub apex: Zigzag<O, M>,
    pub legs: Vec<ZigzagMap<O, M>>,
}

fn malformed(e: ZigzagError) -> ColimitFailure {
    ColimitFailure::Malformed { detail: e.to_string() }
}

/// Colimit (or, with a bias, a symmetry-broken cocone) of singular heights.
pub fn singular_cocone<O: Clone, M: Clone>(d: &ZigzagDiagram<O, M>, bias: Bias) -> Result<DeltaCocone, ColimitFailure> {
    let delta = DeltaDiagram::new(
        d.shape.clone(),
        d.objects.iter().map(Zigzag::len).collect(),
        d.arrows.iter().map(|m| m.sing().clone()).collect(),
    )
    .map_err(|e| ColimitFailure::Malformed { detail: e.to_string() })?;
    let result = match bias {
        Bias::None => delta_colimit(&delta),
        _ => biased_cocone(&delta, bias),
    };
    result.map_err(|e| match e {
        DeltaColimitError::EmptyShape => ColimitFailure::EmptyShape,
        DeltaColimitError::NotConnected => ColimitFailure::NotConnected,
        DeltaColimitError::NoColimit { reason } => ColimitFailure::DeltaColimitFailed { reason },
        DeltaColimitError::BiasRequired => ColimitFailure::DeltaColimitFailed {
            reason: NoColimitReason::Incomparable,
        },
    })
}

/// The colimit of a non-empty connected diagram of zigzags.
///
/// Singular heights are glued by a colimit in Δ; then, for each height `k`
/// of the result, the part of every zigzag lying over `k` is flattened into
/// a base diagram whose colimit becomes the singular object at `k`.
pub fn zigzag_colimit<C: Category>(
    base: &C,
    d: &ZigzagDiagram<C::Object, C::Morphism>,
    bias: Bias,
) -> Result<ZigzagCocone<C::Object, C::Morphism>, ColimitFailure> {
    check_shape(&d.shape)?;
    let delta = singular_cocone(d, bias)?;
    let regular: Vec<_> = delta.legs.iter().map(Monotone::reversal).collect();

    if delta.size == 0 {
        let apex = Zigzag::trivial(d.objects[0].source().clone());
        let legs = d
            .objects
            .iter()
            .map(|z| ZigzagMap::new(z.clone(), apex.clone(), Monotone::empty(0), Vec::new()).map_err(malformed))
            .collect::<Result<_, _>>()?;
        return Ok(ZigzagCocone { apex, legs });
    }

    let mut pieces: Vec<Zigzag<C::Object, C::Morphism>> = Vec::with_capacity(delta.size);
    let mut piece_legs: Vec<Vec<ZigzagMap<C::Object, C::Morphism>>> = vec![Vec::with_capacity(delta.size); d.objects.len()];
    for k in 0..delta.size {
        let window = |j: usize| (regular[j].apply(k), regular[j].apply(k + 1));
        let objects = d
            .objects
            .iter()
            .enumerate()
            .map(|(j, z)| {
                let (a, b) = window(j);
                restrict(z, a, b)
            })
            .collect::<Result<Vec<_>, _>>()
            .map_err(malformed)?;
        let arrows = d
            .shape
            .arrows()
            .iter()
            .zip(&d.arrows)
            .map(|(&(_, t), m)| {
                let (a, b) = window(t);
                restrict_map(m, a, b)
            })
            .collect::<Result<Vec<_>, _>>()
            .map_err(malformed)?;
        let local = BaseDiagram {
            shape: d.shape.clone(),
            objects,
            arrows,
        };
        let flat = deconstruct(base, &local);
        let cocone = base
            .connected_colimit(&flat.diagram)
            .map_err(|inner| ColimitFailure::BaseColimitFailed {
                height: k,
                inner: Box::new(inner),
            })?;

        let (j0, z0) = local
            .objects
            .iter()
            .enumerate()
            .find(|(_, z)| !z.is_empty())
            .expect("a jointly surjective cocone hits every height");
        let m0 = z0.len();
        let compose = |f: &C::Morphism, g: &C::Morphism| {
            base.compose(f, g).map_err(|e| ColimitFailure::Malformed { detail: e.to_string() })
        };
        let forward = compose(z0.forward(0), &cocone.legs[flat.node(j0, Height::Singular(0))])?;
        let backward = compose(z0.backward(m0 - 1), &cocone.legs[flat.node(j0, Height::Singular(m0 - 1))])?;
        debug_assert!(local.objects.iter().enumerate().filter(|(_, z)| !z.is_empty()).all(|(j, z)| {
            let m = z.len();
            compose(z.forward(0), &cocone.legs[flat.node(j, Height::Singular(0))]).ok().as_ref() == Some(&forward)
                && compose(z.backward(m - 1), &cocone.legs[flat.node(j, Height::Singular(m - 1))]).ok().as_ref() == Some(&backward)
        }));
        let piece = Zigzag::cospan(z0.source().clone(), cocone.apex.clone(), z0.target().clone(), forward, backward);

        for (j, z) in local.objects.iter().enumerate() {
            let slices = (0..z.len()).map(|i| cocone.legs[flat.node(j, Height::Singular(i))].clone()).collect();
            let sing = Monotone::constant(z.len(), 1, 0).expect("value 0 fits in [1]");
            piece_legs[j].push(ZigzagMap::new(z.clone(), piece.clone(), sing, slices).map_err(malformed)?);
        }
        pieces.push(piece);
    }

    let mut apex = pieces[0].clone();
    for p in &pieces[1..] {
        apex = concatenate(&apex, p).map_err(malformed)?;
    }
    let legs = piece_legs
        .into_iter()
        .map(|parts| {
            let mut it = parts.into_iter();
            let first = it.next().expect("at least one height");
            it.try_fold(first, |acc, m| concatenate_maps(&acc, &m)).map_err(malformed)
        })
        .collect::<Result<_, _>>()?;
    Ok(ZigzagCocone { apex, legs })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContractError {
    #[error("invalid window ({a}, {b}) for a zigzag of length {len}")]
    InvalidWindow { a: usize, b: usize, len: usize },
    #[error("colimit failed: {0}")]
    ColimitFailed(ColimitFailure),
}

/// The diagram `s_a <- r_{a+1} -> ... <- r_{b-1} -> s_{b-1}` whose colimit
/// replaces the singular heights `a..b` of `z`.
pub fn window_diagram<O: Clone, M: Clone>(z: &Zigzag<O, M>, a: usize, b: usize) -> Result<BaseDiagram<O, M>, ContractError> {
    if a >= b || b > z.len() {
        return Err(ContractError::InvalidWindow { a, b, len: z.len() });
    }
    let m = b - a;
    let mut objects = Vec::with_capacity(2 * m - 1);
    let mut arrows = Vec::with_capacity(2 * m - 2);
    for i in 0..m {
        if i > 0 {
            objects.push(z.regular(a + i).clone());
            arrows.push(z.backward(a + i - 1).clone());
            arrows.push(z.forward(a + i).clone());
        }
        objects.push(z.singular(a + i).clone());
    }
    Ok(BaseDiagram {
        shape: DiagramShape::cospan_chain(m),
        objects,
        arrows,
    })
}

/// Contracts the singular heights `a..b` of `z` into one, using the colimit
/// of [`window_diagram`]. Returns the contracted zigzag and the map onto it.
pub fn contract_zigzag<C: Category>(
    base: &C,
    z: &Zigzag<C::Object, C::Morphism>,
    a: usize,
    b: usize,
) -> Result<(Zigzag<C::Object, C::Morphism>, ZigzagMap<C::Object, C::Morphism>), ContractError> {
    let diagram = window_diagram(z, a, b)?;
    let m = b - a;
    let cocone = base.connected_colimit(&diagram).map_err(ContractError::ColimitFailed)?;
    let err = |e: crate::catcore::CategoryError| ContractError::ColimitFailed(ColimitFailure::Malformed { detail: e.to_string() });
    let forward = base.compose(z.forward(a), &cocone.legs[0]).map_err(err)?;
    let backward = base.compose(z.backward(b - 1), &cocone.legs[2 * (m - 1)]).map_err(err)?;

    let (regulars, singulars, forwards, backwards) = z.clone().into_parts();
    let mut new_regulars = regulars[..=a].to_vec();
    new_regulars.extend_from_slice(&regulars[b..]);
    let mut new_singulars = singulars[..a].to_vec();
    new_singulars.push(cocone.apex.clone());
    new_singulars.extend_from_slice(&singulars[b..]);
    let mut new_forwards = forwards[..a].to_vec();
    new_forwards.push(forward);
    new_forwards.extend_from_slice(&forwards[b..]);
    let mut new_backwards = backwards[..a].to_vec();
    new_backwards.push(backward);
    new_backwards.extend_from_slice(&backwards[b..]);
    let contracted = Zigzag::new(new_regulars, new_singulars, new_forwards, new_backwards).expect("lengths agree");

    let values = (0..z.len())
        .map(|i| if i < a { i } else if i < b { a } else { i + 1 - m })
        .collect();
    let slices = (0..z.len())
        .map(|i| {
            if a <= i && i < b {
                cocone.legs[2 * (i - a)].clone()
            } else {
                base.identity(z.singular(i))
            }
        })
        .collect();
    let map = ZigzagMap::new(z.clone(), contracted.clone(), Monotone::new_unchecked(values, contracted.len()), slices)
        .expect("sizes agree");
    Ok((contracted, map))
}
