//! Exhaustive comparisons of the library against the oracles.

use std::time::{Duration, Instant};

use zigzag::catcore::{DiagramShape, FinitePoset, PosetArrow};
use zigzag::colimit::zigzag_colimit;
use zigzag::monotone::{delta_colimit, Bias, DeltaDiagram, Monotone};
use zigzag::zigzag::{Zigzag, ZigzagDiagram, ZigzagMap};

use super::delta::{colimit_by_cuts, for_each_diagram, shapes, Arrow};
use super::zigzag::{bounded_colimit, for_each_instance, posets, Instance, Poset, Zz};

pub fn to_zigzag(z: &Zz) -> Zigzag<usize, PosetArrow> {
    let arrow = |source, target| PosetArrow { source, target };
    let n = z.len();
    Zigzag::new(
        z.reg.clone(),
        z.sing.clone(),
        (0..n).map(|i| arrow(z.reg[i], z.sing[i])).collect(),
        (0..n).map(|i| arrow(z.reg[i + 1], z.sing[i])).collect(),
    )
    .unwrap()
}

pub fn to_diagram(inst: &Instance) -> ZigzagDiagram<usize, PosetArrow> {
    let objects: Vec<_> = inst.nodes.iter().map(to_zigzag).collect();
    let arrows = inst
        .arrows
        .iter()
        .map(|(s, t, f)| {
            let (a, b) = (&inst.nodes[*s], &inst.nodes[*t]);
            let slices = f.iter().enumerate().map(|(i, &v)| PosetArrow { source: a.sing[i], target: b.sing[v] }).collect();
            ZigzagMap::new(objects[*s].clone(), objects[*t].clone(), Monotone::new(f.clone(), b.len()).unwrap(), slices).unwrap()
        })
        .collect();
    ZigzagDiagram {
        shape: DiagramShape::new(inst.nodes.len(), inst.arrows.iter().map(|a| (a.0, a.1)).collect()).unwrap(),
        objects,
        arrows,
    }
}

#[derive(Debug, Default)]
pub struct SweepReport {
    pub cases: usize,
    pub colimits: usize,
    /// Verdict or apex disagreements, with the base having a top element.
    pub mismatches: Vec<String>,
    /// Disagreements over bases without a top element.
    pub mismatches_without_top: Vec<String>,
    /// Successful colimits whose singular legs differ from the Δ colimit.
    pub preservation_failures: Vec<String>,
    pub elapsed: Duration,
    pub oracle_time: Duration,
    pub library_time: Duration,
}

/// Connected loop-free shapes with at most three nodes and two arrows.
pub fn sweep_shapes() -> Vec<(usize, Vec<(usize, usize)>)> {
    shapes(3, 2).into_iter().filter(|(_, a)| a.iter().all(|(s, t)| s != t)).collect()
}

pub fn theorem_sweep(max_poset: usize, max_len: usize, max_apex: usize) -> SweepReport {
    let start = Instant::now();
    let mut report = SweepReport::default();
    for size in 1..=max_poset {
        for p in posets(size) {
            let base = FinitePoset::new(p.leq.clone()).unwrap();
            for (n, shape) in sweep_shapes() {
                for_each_instance(&p, n, &shape, max_len, |inst| check(&p, &base, inst, max_apex, &mut report));
            }
        }
    }
    report.elapsed = start.elapsed();
    report
}

fn check(p: &Poset, base: &FinitePoset, inst: &Instance, max_apex: usize, report: &mut SweepReport) {
    report.cases += 1;
    let bound = max_apex;
    let t = Instant::now();
    let expected = bounded_colimit(p, inst, bound);
    report.oracle_time += t.elapsed();
    let t = Instant::now();
    let got = zigzag_colimit(base, &to_diagram(inst), Bias::None).ok();
    report.library_time += t.elapsed();
    let got_plain = got.as_ref().map(|c| {
        (
            Zz {
                reg: c.apex.regulars().to_vec(),
                sing: c.apex.singulars().to_vec(),
            },
            c.legs.iter().map(|l| l.sing().values().to_vec()).collect::<Vec<_>>(),
        )
    });
    let expected_plain = expected.map(|c| (c.apex, c.legs));
    if got_plain.is_some() {
        report.colimits += 1;
    }
    if got_plain != expected_plain {
        let line = format!("{inst:?}: oracle {expected_plain:?}, library {got_plain:?}");
        let bucket = if p.has_top() { &mut report.mismatches } else { &mut report.mismatches_without_top };
        if bucket.len() < 20 {
            bucket.push(line);
        }
    }
    if let Some((_, legs)) = &got_plain {
        let sizes: Vec<usize> = inst.nodes.iter().map(Zz::len).collect();
        let delta = colimit_by_cuts(&sizes, &inst.arrows).map(|c| c.1);
        if delta.as_ref() != Some(legs) && report.preservation_failures.len() < 20 {
            report.preservation_failures.push(format!("{inst:?}: Δ {delta:?}, library {legs:?}"));
        }
    }
}

fn build(sizes: &[usize], arrows: &[Arrow]) -> DeltaDiagram {
    let shape = DiagramShape::new(sizes.len(), arrows.iter().map(|a| (a.0, a.1)).collect()).unwrap();
    let maps = arrows.iter().map(|(_, t, v)| Monotone::new(v.clone(), sizes[*t]).unwrap()).collect();
    DeltaDiagram::new(shape, sizes.to_vec(), maps).unwrap()
}

/// Every connected diagram with at most three nodes and three arrows and
/// objects up to `max_size`: (cases, colimits, first disagreements).
pub fn delta_sweep(max_size: usize) -> (usize, usize, Vec<String>) {
    let (mut cases, mut existing, mut bad) = (0, 0, Vec::new());
    for (n, shape) in shapes(3, 3) {
        for_each_diagram(n, &shape, max_size, |sizes, arrows| {
            cases += 1;
            let expected = colimit_by_cuts(sizes, arrows);
            let got = delta_colimit(&build(sizes, arrows))
                .ok()
                .map(|c| (c.size, c.legs.iter().map(|l| l.values().to_vec()).collect::<Vec<_>>()));
            existing += expected.is_some() as usize;
            if got != expected && bad.len() < 10 {
                bad.push(format!("{sizes:?} {arrows:?}: expected {expected:?}, got {got:?}"));
            }
        });
    }
    (cases, existing, bad)
}
