use serde::Serialize;

use super::{Zigzag, ZigzagMap};
use crate::catcore::Category;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum ZigzagViolation {
    /// Forward map `r_i -> s_i` has the wrong endpoints.
    Forward { height: usize },
    /// Backward map `r_{i+1} -> s_i` has the wrong endpoints.
    Backward { height: usize },
}

/// A failed commutativity condition of a zigzag map, located by target
/// singular height where applicable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum MapViolation {
    SourceInvalid(Vec<ZigzagViolation>),
    TargetInvalid(Vec<ZigzagViolation>),
    /// Slice morphism at this source height has the wrong endpoints.
    SliceType { source_height: usize },
    /// `r_{reg(j)} != r'_j`.
    RegularMismatch { target_height: usize },
    /// `f'_t != g_{i0} ∘ f_{i0}`.
    Forward { target_height: usize },
    /// `b'_t != g_{ik} ∘ b_{ik}`.
    Backward { target_height: usize },
    /// `g_i ∘ b_i != g_{i+1} ∘ f_{i+1}` inside the preimage of `t`.
    Interior { target_height: usize, source_height: usize },
    /// Empty preimage but `f'_t != b'_t`.
    EmptyPreimage { target_height: usize },
}

pub fn validate_zigzag<C: Category>(cat: &C, z: &Zigzag<C::Object, C::Morphism>) -> Result<(), Vec<ZigzagViolation>> {
    let mut out = Vec::new();
    for i in 0..z.len() {
        let f = &z.forwards[i];
        if cat.source(f) != z.regulars[i] || cat.target(f) != z.singulars[i] {
            out.push(ZigzagViolation::Forward { height: i });
        }
        let b = &z.backwards[i];
        if cat.source(b) != z.regulars[i + 1] || cat.target(b) != z.singulars[i] {
            out.push(ZigzagViolation::Backward { height: i });
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

pub fn validate_map<C: Category>(cat: &C, m: &ZigzagMap<C::Object, C::Morphism>) -> Result<(), Vec<MapViolation>> {
    let mut out = Vec::new();
    if let Err(v) = validate_zigzag(cat, &m.source) {
        out.push(MapViolation::SourceInvalid(v));
    }
    if let Err(v) = validate_zigzag(cat, &m.target) {
        out.push(MapViolation::TargetInvalid(v));
    }
    if !out.is_empty() {
        return Err(out);
    }
    let (src, tgt) = (&m.source, &m.target);

    for (i, g) in m.slices.iter().enumerate() {
        if cat.source(g) != src.singulars[i] || cat.target(g) != tgt.singulars[m.sing.apply(i)] {
            out.push(MapViolation::SliceType { source_height: i });
        }
    }
    if !out.is_empty() {
        return Err(out);
    }

    let reg = m.regular_map();
    for j in 0..=tgt.len() {
        if src.regulars[reg.apply(j)] != tgt.regulars[j] {
            out.push(MapViolation::RegularMismatch { target_height: j });
        }
    }

    let composes_to = |a: &C::Morphism, b: &C::Morphism, expected: &C::Morphism| cat.compose(a, b).map(|c| &c == expected).unwrap_or(false);

    for t in 0..tgt.len() {
        let pre = m.sing.preimage(t);
        if pre.is_empty() {
            if tgt.forwards[t] != tgt.backwards[t] {
                out.push(MapViolation::EmptyPreimage { target_height: t });
            }
            continue;
        }
        let (first, last) = (pre.start, pre.end - 1);
        if !composes_to(&src.forwards[first], &m.slices[first], &tgt.forwards[t]) {
            out.push(MapViolation::Forward { target_height: t });
        }
        if !composes_to(&src.backwards[last], &m.slices[last], &tgt.backwards[t]) {
            out.push(MapViolation::Backward { target_height: t });
        }
        for i in first..last {
            let lhs = cat.compose(&src.backwards[i], &m.slices[i]);
            let rhs = cat.compose(&src.forwards[i + 1], &m.slices[i + 1]);
            match (lhs, rhs) {
                (Ok(l), Ok(r)) if l == r => {}
                _ => out.push(MapViolation::Interior {
                    target_height: t,
                    source_height: i,
                }),
            }
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}
