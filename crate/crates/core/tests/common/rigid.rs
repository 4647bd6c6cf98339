//! Random rigid fixtures: vertices on parallel wires, one row per singular
//! height, with one row holding at least two vertices to be pulled apart.

use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use zigzag::catcore::LabelSignature;
use zigzag::diagram::{beside, concat, cone_generator, Diagram, Path};
use zigzag::fixtures::{bubble, wires};
use zigzag::homotopy::{ExpansionDirective, First};
use zigzag::workspace::{encode_diagram, sha256_hex};

pub const LABELS: [&str; 3] = ["v", "u", "p"];

#[derive(Debug, Clone)]
pub struct Rigid {
    pub wires: usize,
    /// `rows[h][c]`: the vertex on wire `c` at height `h`, if any.
    pub rows: Vec<Vec<Option<usize>>>,
    pub target: usize,
    /// Wires whose inner height goes to the first group at the target row.
    pub lower: Vec<bool>,
    pub first: First,
}

pub fn signature() -> LabelSignature {
    LABELS.iter().fold(LabelSignature::new().with("x", 0).with("w", 1), |s, l| s.with(l, 2))
}

fn row(wires: usize) -> impl Strategy<Value = Vec<Option<usize>>> {
    prop::collection::vec(prop::option::of(0..LABELS.len()), wires).prop_filter("a vertex per row", |r| r.iter().any(Option::is_some))
}

pub fn rigid() -> impl Strategy<Value = Rigid> {
    (2usize..=4).prop_flat_map(|n| {
        let pair = (0..n, 1..n).prop_map(move |(a, d)| (a, (a + d) % n));
        (
            prop::collection::vec(row(n), 1..=4),
            pair,
            prop::collection::vec(0..LABELS.len(), 2),
            prop::collection::vec(any::<bool>(), n),
            any::<bool>(),
            any::<prop::sample::Index>(),
        )
            .prop_map(move |(mut rows, (a, b), labels, mut lower, higher, at)| {
                let target = at.index(rows.len());
                rows[target][a] = Some(labels[0]);
                rows[target][b] = Some(labels[1]);
                lower[a] = true;
                lower[b] = false;
                Rigid {
                    wires: n,
                    rows,
                    target,
                    lower,
                    first: if higher { First::Higher } else { First::Lower },
                }
            })
    })
}

impl Rigid {
    pub fn diagram(&self, sig: &LabelSignature) -> Diagram {
        let w = wires(sig, "w", 1);
        let cell = |v: Option<usize>| match v {
            Some(l) => cone_generator(sig, LABELS[l], &w, &w).expect("vertex"),
            None => bubble(&w),
        };
        let rows = self.rows.iter().map(|r| r.iter().map(|&v| cell(v)).reduce(|a, b| beside(&a, &b).expect("beside")).expect("wires"));
        rows.reduce(|a, b| concat(&a, &b).expect("concat")).expect("rows")
    }

    pub fn directive(&self) -> ExpansionDirective {
        let (lo, hi): (Vec<usize>, Vec<usize>) = (0..self.wires).partition(|&c| self.lower[c]);
        ExpansionDirective {
            path: Path::root(),
            height: self.target,
            split: (lo, hi),
            first: self.first,
        }
    }
}

pub fn diagram_hash(d: &Diagram) -> String {
    sha256_hex(&serde_json::to_vec(&encode_diagram(d)).expect("serializable"))
}

/// `n` fixtures from a fixed seed.
pub fn sample(n: usize) -> Vec<Rigid> {
    let mut runner = TestRunner::new_with_rng(Config::default(), TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    let strategy = rigid();
    (0..n).map(|_| strategy.new_tree(&mut runner).expect("generated").current()).collect()
}
