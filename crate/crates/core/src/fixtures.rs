//! Worked-example diagrams used by tests, the acceptance suite and the CLI.

use crate::catcore::{LabelSignature, TerminalCategory};
use crate::diagram::{beside, concat, cone_generator, identity, identity_suspend, Diagram, Morphism};
use crate::homotopy::{contract_at, ContractionDirective, Policy};
use crate::monotone::{Bias, Monotone};
use crate::zigzag::{Zigzag, ZigzagCategory, ZigzagMap};

/// A signature together with named diagrams over it.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub signature: LabelSignature,
    pub diagrams: Vec<(String, Diagram)>,
}

impl Fixture {
    pub fn get(&self, name: &str) -> &Diagram {
        &self.diagrams.iter().find(|(n, _)| n == name).unwrap_or_else(|| panic!("no diagram `{name}`")).1
    }
}

fn x() -> Diagram {
    Diagram::label("x")
}

/// The cospan `D -> D <- D` with identity legs.
pub fn bubble(d: &Diagram) -> Diagram {
    Diagram::from_zigzag(Zigzag::cospan(d.clone(), d.clone(), d.clone(), identity(d), identity(d)))
}

/// `x -> w <- x` repeated `n` times.
pub fn wires(sig: &LabelSignature, label: &str, n: usize) -> Diagram {
    let one = cone_generator(sig, label, &x(), &x()).expect("wire");
    (1..n).fold(if n == 0 { identity_suspend(&x()) } else { one.clone() }, |acc, _| concat(&acc, &one).expect("wires"))
}

/// Two vertices on parallel wires, side by side at one height
/// (`contracted`) and one above the other (`staggered`).
pub fn two_beads() -> Fixture {
    let sig = LabelSignature::new().with("x", 0).with("w", 1).with("v", 2).with("u", 2);
    let w = wires(&sig, "w", 1);
    let v = cone_generator(&sig, "v", &w, &w).expect("v");
    let u = cone_generator(&sig, "u", &w, &w).expect("u");
    let contracted = beside(&v, &u).expect("beside");
    let staggered = concat(&beside(&v, &bubble(&w)).expect("beside"), &beside(&bubble(&w), &u).expect("beside")).expect("concat");
    Fixture {
        signature: sig,
        diagrams: vec![("contracted".into(), contracted), ("staggered".into(), staggered)],
    }
}

/// A counit followed by a unit on the scalar region: its two singular
/// heights have no wires between them, so the Δ step sees `[1] <- [0] -> [1]`.
pub fn opposing_unit_counit() -> Fixture {
    let sig = LabelSignature::new()
        .with("x", 0)
        .with("y", 0)
        .with("f", 1)
        .with("g", 1)
        .with("eps", 2)
        .with("eta", 2);
    let f = cone_generator(&sig, "f", &x(), &Diagram::label("y")).expect("f");
    let g = cone_generator(&sig, "g", &Diagram::label("y"), &x()).expect("g");
    let fg = concat(&f, &g).expect("fg");
    let empty = identity_suspend(&x());
    let counit = cone_generator(&sig, "eps", &fg, &empty).expect("eps");
    let unit = cone_generator(&sig, "eta", &empty, &fg).expect("eta");
    let d = concat(&counit, &unit).expect("concat");
    Fixture {
        signature: sig,
        diagrams: vec![("opposing".into(), d)],
    }
}

/// A vertex ending a wire, and a vertex starting a wire, staggered and
/// joined by a passing wire: the Δ step sees `[2] <- [1] -> [2]`.
pub fn wire_between_vertices() -> Fixture {
    let sig = LabelSignature::new().with("x", 0).with("w", 1).with("alpha", 2).with("beta", 2);
    let w = wires(&sig, "w", 1);
    let empty = identity_suspend(&x());
    let alpha = cone_generator(&sig, "alpha", &w, &empty).expect("alpha");
    let beta = cone_generator(&sig, "beta", &empty, &w).expect("beta");
    let d = concat(&beside(&alpha, &bubble(&w)).expect("beside"), &beside(&bubble(&w), &beta).expect("beside")).expect("concat");
    Fixture {
        signature: sig,
        diagrams: vec![("between".into(), d)],
    }
}

/// Row lengths `r0, s0, r1, s1, r2, s2, r3` and the six monotone maps
/// `f0, b0, f1, b1, f2, b2` of the untyped 2-diagram drawn with its
/// ordinal annotations.
pub const SCAFFOLD_ROWS: [usize; 7] = [3, 3, 4, 3, 3, 4, 3];
pub const SCAFFOLD_MAPS: [&[usize]; 6] = [&[0, 1, 2], &[0, 1, 1, 2], &[0, 0, 1, 2], &[0, 1, 2], &[0, 1, 3], &[0, 1, 3]];

pub type Untyped1 = Zigzag<(), ()>;
pub type Untyped1Map = ZigzagMap<(), ()>;

/// The untyped 2-diagram as a zigzag in the zigzag category over the
/// terminal category.
pub fn untyped_scaffold() -> Zigzag<Untyped1, Untyped1Map> {
    let row = |n: usize| Zigzag::new(vec![(); n + 1], vec![(); n], vec![(); n], vec![(); n]).expect("row");
    let rows: Vec<Untyped1> = SCAFFOLD_ROWS.iter().map(|&n| row(n)).collect();
    let map = |k: usize, from: usize, to: usize| {
        ZigzagMap::new(
            rows[from].clone(),
            rows[to].clone(),
            Monotone::new(SCAFFOLD_MAPS[k].to_vec(), SCAFFOLD_ROWS[to]).expect("monotone"),
            vec![(); SCAFFOLD_ROWS[from]],
        )
        .expect("map")
    };
    let regulars = vec![rows[0].clone(), rows[2].clone(), rows[4].clone(), rows[6].clone()];
    let singulars = vec![rows[1].clone(), rows[3].clone(), rows[5].clone()];
    let forwards = vec![map(0, 0, 1), map(2, 2, 3), map(4, 4, 5)];
    let backwards = vec![map(1, 2, 1), map(3, 4, 3), map(5, 6, 5)];
    let z = Zigzag::new(regulars, singulars, forwards, backwards).expect("scaffold");
    debug_assert!(crate::zigzag::validate_zigzag(&ZigzagCategory::new(TerminalCategory), &z).is_ok());
    z
}

/// The same scaffold typed over a signature: region `x`, wires `w`, and
/// vertices `v1` (row s0, height 1), `v2` (row s1, height 0) and a scalar
/// `v3` (row s2, height 2).
pub fn typed_scaffold() -> Fixture {
    let sig = LabelSignature::new().with("x", 0).with("w", 1).with("v1", 2).with("v2", 2).with("v3", 2);
    let vertex_at = |row: usize| match row {
        1 => Some((1, "v1")),
        3 => Some((0, "v2")),
        5 => Some((2, "v3")),
        _ => None,
    };
    let labels = |row: usize| -> Vec<&str> {
        (0..SCAFFOLD_ROWS[row])
            .map(|h| match vertex_at(row) {
                Some((at, l)) if at == h => l,
                _ => "w",
            })
            .collect()
    };
    let row = |r: usize| -> Diagram {
        let ls = labels(r);
        let to = |l: &str| Morphism::poset(&"x".into(), &l.into());
        Diagram::from_zigzag(
            Zigzag::new(
                vec![x(); ls.len() + 1],
                ls.iter().map(|l| Diagram::label(l)).collect(),
                ls.iter().map(|l| to(l)).collect(),
                ls.iter().map(|l| to(l)).collect(),
            )
            .expect("row"),
        )
    };
    let rows: Vec<Diagram> = (0..7).map(row).collect();
    let map = |k: usize, from: usize, to: usize| {
        let (src, tgt) = (labels(from), labels(to));
        let values = SCAFFOLD_MAPS[k];
        let slices = values.iter().enumerate().map(|(i, &v)| Morphism::poset(&src[i].into(), &tgt[v].into())).collect();
        let (Diagram::Zigzag(a), Diagram::Zigzag(b)) = (&rows[from], &rows[to]) else { unreachable!() };
        Morphism::map(ZigzagMap::new_shared(a.clone(), b.clone(), Monotone::new(values.to_vec(), tgt.len()).expect("monotone"), slices).expect("map"))
    };
    let d = Diagram::from_zigzag(
        Zigzag::new(
            vec![rows[0].clone(), rows[2].clone(), rows[4].clone(), rows[6].clone()],
            vec![rows[1].clone(), rows[3].clone(), rows[5].clone()],
            vec![map(0, 0, 1), map(2, 2, 3), map(4, 4, 5)],
            vec![map(1, 2, 1), map(3, 4, 3), map(5, 6, 5)],
        )
        .expect("scaffold"),
    );
    Fixture {
        signature: sig,
        diagrams: vec![("scaffold".into(), d)],
    }
}

/// Scalars `a`, `a'`, `b` on region `x` and a 3-cell `phi: a -> a'`.
pub fn naturality_signature() -> LabelSignature {
    LabelSignature::new().with("x", 0).with("a", 2).with("a'", 2).with("b", 2).with("phi", 3)
}

/// The starting 3-diagram of the naturality workflow:
/// `[a;b] -> [phi;b] <- [a';b] -> [a'|b] <- [b;a']`, where `[p;q]` has `p`
/// below `q` and `[p|q]` has both at one height.
pub fn naturality() -> Fixture {
    let sig = naturality_signature();
    let empty = identity_suspend(&x());
    let scalar = |l: &str| cone_generator(&sig, l, &empty, &empty).expect("scalar");
    let (a, a2, b) = (scalar("a"), scalar("a'"), scalar("b"));
    let phi = cone_generator(&sig, "phi", &a, &a2).expect("phi");
    let first = beside(&phi, &bubble(&b)).expect("beside");

    let a2_b = concat(&a2, &b).expect("concat");
    let b_a2 = concat(&b, &a2).expect("concat");
    let merge = |d: &Diagram, bias| {
        contract_at(
            &sig,
            d,
            &ContractionDirective {
                path: Default::default(),
                window: (0, 2),
                bias,
            },
            Policy::Strict,
        )
        .expect("interchange")
    };
    let left = merge(&a2_b, Bias::Lower);
    let right = merge(&b_a2, Bias::Higher);
    assert_eq!(left.result, right.result, "both interchanges meet");
    let second = Diagram::from_zigzag(Zigzag::cospan(a2_b, left.result, b_a2, left.map, right.map));
    let start = concat(&first, &second).expect("concat");
    Fixture {
        signature: sig,
        diagrams: vec![("N1".into(), start)],
    }
}

/// Proof script for the naturality workflow, one move per line, starting
/// from `N1` and recording the proof in `P`.
pub const NATURALITY_SCRIPT: &str = "\
contract N1 --path - --window 0..2 --proof P
contract N1 --path r0 --window 0..2 --bias lower --proof P
expand N1 --path s0 --height 0 --split 1/0 --first lower --proof P
contract N1 --path - --window 1..3 --proof P
expand N1 --path s1 --height 0 --split 1/0 --first lower --proof P
";
