//! Brute-force colimit checkers used to validate the real algorithms.
//!
//! A positive answer from [`verify_universal`] only certifies universality
//! relative to the enumerated cocones and mediators (bounded completeness).

use super::{is_cocone, BaseDiagram, Category, Cocone, DiagramShape, FinitePoset, Simplex};
use crate::monotone::Monotone;

/// Least upper bound of the assigned elements, by exhaustive search over
/// every element of the poset.
pub fn poset_colimit_oracle(poset: &FinitePoset, shape: &DiagramShape, assignment: &[usize]) -> Option<usize> {
    if !shape.is_connected() {
        return None;
    }
    let is_upper = |u: usize| assignment.iter().all(|&a| poset.leq(a, u));
    (0..poset.len()).find(|&u| is_upper(u) && (0..poset.len()).all(|v| !is_upper(v) || poset.leq(u, v)))
}

/// Does `cocone` factor every enumerated cocone uniquely?
///
/// `cocones` enumerates the competing cocones; `mediators(a, b)` enumerates
/// candidate morphisms `a -> b`. Returns false if `cocone` is not itself a
/// cocone.
pub fn verify_universal<C, I, F>(
    cat: &C,
    diagram: &BaseDiagram<C::Object, C::Morphism>,
    cocone: &Cocone<C::Object, C::Morphism>,
    cocones: I,
    mut mediators: F,
) -> bool
where
    C: Category,
    I: IntoIterator<Item = Cocone<C::Object, C::Morphism>>,
    F: FnMut(&C::Object, &C::Object) -> Vec<C::Morphism>,
{
    if !is_cocone(cat, diagram, cocone) {
        return false;
    }
    cocones.into_iter().all(|other| {
        let factoring = mediators(&cocone.apex, &other.apex)
            .into_iter()
            .filter(|u| {
                cocone
                    .legs
                    .iter()
                    .zip(&other.legs)
                    .all(|(leg, target)| cat.compose(leg, u).map(|g| &g == target).unwrap_or(false))
            })
            .count();
        factoring == 1
    })
}

/// Every monotone map `[n] -> [m]`.
pub fn all_monotones(n: usize, m: usize) -> Vec<Monotone> {
    fn go(n: usize, m: usize, lo: usize, acc: &mut Vec<usize>, out: &mut Vec<Monotone>) {
        if acc.len() == n {
            out.push(Monotone::new_unchecked(acc.clone(), m));
            return;
        }
        for v in lo..m {
            acc.push(v);
            go(n, m, v, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(n, m, 0, &mut Vec::new(), &mut out);
    out
}

/// Every cocone over `d` with apex at most `max_apex`.
pub fn delta_cocones(d: &BaseDiagram<usize, Monotone>, max_apex: usize) -> Vec<Cocone<usize, Monotone>> {
    let mut out = Vec::new();
    for apex in 0..=max_apex {
        let mut partial: Vec<Vec<Monotone>> = vec![Vec::new()];
        for &size in &d.objects {
            let choices = all_monotones(size, apex);
            partial = partial
                .into_iter()
                .flat_map(|p| {
                    choices.iter().map(move |c| {
                        let mut q = p.clone();
                        q.push(c.clone());
                        q
                    })
                })
                .collect();
        }
        out.extend(partial.into_iter().map(|legs| Cocone { apex, legs }).filter(|c| is_cocone(&Simplex, d, c)));
    }
    out
}

/// Apex bound used by the Δ checks: one more than the total size, so the
/// universe contains every jointly surjective cocone and a padded one.
pub fn delta_universe_bound(d: &BaseDiagram<usize, Monotone>) -> usize {
    d.objects.iter().sum::<usize>() + 1
}

/// [`verify_universal`] in Δ against every cocone up to `max_apex`.
pub fn verify_delta(d: &BaseDiagram<usize, Monotone>, cocone: &Cocone<usize, Monotone>, max_apex: usize) -> bool {
    verify_universal(&Simplex, d, cocone, delta_cocones(d, max_apex), |&a, &b| all_monotones(a, b))
}

/// The first cocone of the bounded universe certified universal.
pub fn search_delta_colimit(d: &BaseDiagram<usize, Monotone>, max_apex: usize) -> Option<Cocone<usize, Monotone>> {
    let universe = delta_cocones(d, max_apex);
    universe
        .iter()
        .find(|c| verify_universal(&Simplex, d, c, universe.iter().cloned(), |&a, &b| all_monotones(a, b)))
        .cloned()
}
