mod common;

use std::sync::Arc;

use proptest::prelude::*;
use proptest::sample::Index;

use common::delta::{monotone_table, shapes};
use common::rigid::{self, diagram_hash, Rigid};
use common::sweeps::to_zigzag;
use common::zigzag::{is_map, maps, posets, zigzags, Poset, Zz};
use zigzag::catcore::{label_colimit, Category, DiagramShape, FinitePoset, LabelId, LabelSignature, PosetArrow, Simplex};
use zigzag::diagram::{concat, slice, validate, validate_morphism, Path};
use zigzag::homotopy::{contract_at, expand_at, ContractionDirective, Policy};
use zigzag::monotone::{biased_cocone, delta_colimit, Bias, DeltaDiagram, Monotone, RegularMonotone};
use zigzag::render::{emit_svg, emit_text, project, NodeClass, Style};
use zigzag::workspace::{ScriptEnv, Workspace};
use zigzag::zigzag::{compose_maps, deconstruct, identity_map, restrict_map, validate_map, Height, ZigzagCategory, ZigzagDiagram, ZigzagMap};

fn monotone(max_n: usize, max_m: usize) -> impl Strategy<Value = Monotone> {
    (0..=max_n, 1..=max_m).prop_flat_map(|(n, m)| {
        prop::collection::vec(0..m, n).prop_map(move |mut v| {
            v.sort_unstable();
            Monotone::new(v, m).unwrap()
        })
    })
}

fn monotone_into(n: usize, m: usize) -> impl Strategy<Value = Monotone> {
    prop::collection::vec(0..m.max(1), n).prop_map(move |mut v| {
        v.sort_unstable();
        Monotone::new(v, m).unwrap()
    })
}

fn regular(max: usize) -> impl Strategy<Value = RegularMonotone> {
    (1..=max, 1..=max).prop_flat_map(|(n, m)| {
        let m = if n == 1 { 1 } else { m };
        prop::collection::vec(0..m, n).prop_map(move |mut v| {
            v.sort_unstable();
            v[0] = 0;
            v[n - 1] = m - 1;
            RegularMonotone::new(v, m).unwrap()
        })
    })
}

/// `f: [n] -> [m]`, `g: [m] -> [k]`, `h: [k] -> [l]`.
fn composable() -> impl Strategy<Value = (Monotone, Monotone, Monotone)> {
    (0..=6usize, 1..=6usize, 1..=6usize, 1..=6usize)
        .prop_flat_map(|(n, m, k, l)| (monotone_into(n, m), monotone_into(m, k), monotone_into(k, l)))
}

proptest! {
    #[test]
    fn reversal_round_trips(f in monotone(8, 8), g in regular(9)) {
        prop_assert_eq!(f.reversal().reversal_inverse(), f);
        prop_assert_eq!(g.reversal_inverse().reversal(), g);
    }

    #[test]
    fn reversal_preserves_endpoints(f in monotone(8, 8)) {
        let r = f.reversal();
        prop_assert_eq!(r.source_size(), f.target_size() + 1);
        prop_assert_eq!(r.target_size(), f.source_size() + 1);
        prop_assert_eq!(r.apply(0), 0);
        prop_assert_eq!(r.apply(f.target_size()), f.source_size());
    }

    #[test]
    fn reversal_is_contravariant((f, g, _) in composable()) {
        let fg = f.compose(&g).unwrap();
        prop_assert_eq!(fg.reversal(), g.reversal().compose(&f.reversal()).unwrap());
        prop_assert_eq!(Monotone::identity(f.source_size()).reversal(), RegularMonotone::identity(f.source_size() + 1));
    }

    #[test]
    fn simplex_laws((f, g, h) in composable()) {
        let c = Simplex;
        let left = c.compose(&c.compose(&f, &g).unwrap(), &h).unwrap();
        let right = c.compose(&f, &c.compose(&g, &h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(c.compose(&c.identity(&f.source_size()), &f).unwrap(), f.clone());
        prop_assert_eq!(c.compose(&f, &c.identity(&f.target_size())).unwrap(), f);
    }
}

#[derive(Debug, Clone)]
struct Delta {
    shape: Vec<(usize, usize)>,
    sizes: Vec<usize>,
    arrows: Vec<Monotone>,
}

fn delta_diagram() -> impl Strategy<Value = Delta> {
    let all = shapes(3, 3);
    (0..all.len(), prop::collection::vec(1..=4usize, 3), prop::collection::vec(any::<Index>(), 3)).prop_filter_map("no arrows", move |(s, sizes, picks)| {
        let (n, shape) = all[s].clone();
        let sizes = sizes[..n].to_vec();
        let arrows = shape
            .iter()
            .zip(&picks)
            .map(|(&(a, b), i)| {
                let table = monotone_table(sizes[a], sizes[b]);
                Monotone::new(table[i.index(table.len())].clone(), sizes[b]).unwrap()
            })
            .collect();
        Some(Delta { shape, sizes, arrows })
    })
}

impl Delta {
    fn diagram(&self) -> DeltaDiagram {
        DeltaDiagram::new(DiagramShape::new(self.sizes.len(), self.shape.clone()).unwrap(), self.sizes.clone(), self.arrows.clone()).unwrap()
    }
}

proptest! {
    #[test]
    fn biased_cocones_commute(d in delta_diagram()) {
        let d = d.diagram();
        let colimit = delta_colimit(&d);
        for bias in [Bias::Lower, Bias::Higher] {
            if let Ok(c) = biased_cocone(&d, bias) {
                prop_assert!(c.commutes(&d));
                if let Ok(k) = &colimit {
                    prop_assert_eq!(&c, k);
                }
            }
        }
        if let Ok(k) = &colimit {
            prop_assert!(k.commutes(&d));
            let plain = biased_cocone(&d, Bias::None);
            prop_assert_eq!(plain.as_ref().ok(), Some(k));
        }
    }
}

fn small_posets() -> Vec<Poset> {
    (1..=3).flat_map(posets).collect()
}

fn library_poset(p: &Poset) -> FinitePoset {
    FinitePoset::new(p.leq.clone()).unwrap()
}

/// `None` if some slice has no arrow in the poset.
fn try_map(p: &Poset, a: &Zz, b: &Zz, f: &[usize]) -> Option<ZigzagMap<usize, PosetArrow>> {
    let cat = library_poset(p);
    let slices = f.iter().enumerate().map(|(i, &v)| cat.arrow(a.sing[i], b.sing[v])).collect::<Option<_>>()?;
    Some(ZigzagMap::new(to_zigzag(a), to_zigzag(b), Monotone::new(f.to_vec(), b.len()).unwrap(), slices).unwrap())
}

fn library_map(p: &Poset, a: &Zz, b: &Zz, f: &[usize]) -> ZigzagMap<usize, PosetArrow> {
    try_map(p, a, b, f).expect("slices exist")
}

/// A chain `a -> b -> c` of zigzags that admit maps between them.
fn zigzag_chain(len: usize) -> impl Strategy<Value = (Poset, Zz, Zz, Zz)> {
    let ps = small_posets();
    (0..ps.len(), any::<(Index, Index, Index)>()).prop_map(move |(i, (x, y, z))| {
        let p = ps[i].clone();
        let zs = zigzags(&p, len);
        let a = x.get(&zs).clone();
        let next = |from: &Zz, pick: &Index| {
            let to: Vec<&Zz> = zs.iter().filter(|t| !maps(&p, from, t).is_empty()).collect();
            (*pick.get(&to)).clone()
        };
        let b = next(&a, &y);
        let c = next(&b, &z);
        (p, a, b, c)
    })
}

/// A poset with two of its zigzags of length at most `len`.
fn zigzag_pair(len: usize) -> impl Strategy<Value = (Poset, Zz, Zz)> {
    let ps = small_posets();
    (0..ps.len(), any::<Index>(), any::<Index>()).prop_map(move |(i, a, b)| {
        let p = ps[i].clone();
        let zs = zigzags(&p, len);
        (p, a.get(&zs).clone(), b.get(&zs).clone())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn validation_agrees_with_the_definition((p, a, b) in zigzag_pair(2), pick in any::<Index>()) {
        let table = monotone_table(a.len(), b.len());
        prop_assume!(!table.is_empty());
        let f = pick.get(table);
        match try_map(&p, &a, &b, f) {
            Some(m) => prop_assert_eq!(validate_map(&library_poset(&p), &m).is_ok(), is_map(&p, &a, &b, f)),
            None => prop_assert!(!is_map(&p, &a, &b, f)),
        }
    }

    #[test]
    fn valid_maps_form_a_category((p, a, b, c) in zigzag_chain(2), picks in any::<(Index, Index, Index)>()) {
        let cat = library_poset(&p);
        let (ab, bc) = (maps(&p, &a, &b), maps(&p, &b, &c));
        let f = library_map(&p, &a, &b, picks.0.get(&ab));
        let g = library_map(&p, &b, &c, picks.1.get(&bc));
        let fg = compose_maps(&cat, &f, &g).unwrap();
        prop_assert_eq!(validate_map(&cat, &fg), Ok(()));
        let id = identity_map(&cat, &to_zigzag(&a));
        prop_assert_eq!(validate_map(&cat, &id), Ok(()));
        prop_assert_eq!(compose_maps(&cat, &id, &f).unwrap(), f.clone());

        let zc = ZigzagCategory::new(cat.clone());
        let cd = maps(&p, &c, &c);
        let h = library_map(&p, &c, &c, picks.2.get(&cd));
        let left = zc.compose(&zc.compose(&f, &g).unwrap(), &h).unwrap();
        let right = zc.compose(&f, &zc.compose(&g, &h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn restriction_composes((p, a, b) in zigzag_pair(3), pick in any::<Index>(), w in any::<(Index, Index, Index, Index)>()) {
        let ms = maps(&p, &a, &b);
        prop_assume!(!ms.is_empty());
        let m = library_map(&p, &a, &b, pick.get(&ms));
        let n = b.len();
        prop_assert_eq!(restrict_map(&m, 0, n).unwrap(), m.clone());
        let mut ends = [w.0.index(n + 1), w.1.index(n + 1)];
        ends.sort_unstable();
        let [x, y] = ends;
        let mut inner = [w.2.index(y - x + 1), w.3.index(y - x + 1)];
        inner.sort_unstable();
        let once = restrict_map(&m, x + inner[0], x + inner[1]).unwrap();
        let twice = restrict_map(&restrict_map(&m, x, y).unwrap(), inner[0], inner[1]).unwrap();
        prop_assert_eq!(twice, once.clone());
        prop_assert_eq!(validate_map(&library_poset(&p), &once), Ok(()));
    }

    #[test]
    fn deconstruction_counts((p, a, b) in zigzag_pair(2), pick in any::<Index>()) {
        let ms = maps(&p, &a, &b);
        prop_assume!(!ms.is_empty());
        let m = library_map(&p, &a, &b, pick.get(&ms));
        let d: ZigzagDiagram<usize, PosetArrow> = ZigzagDiagram {
            shape: DiagramShape::new(2, vec![(0, 1)]).unwrap(),
            objects: vec![to_zigzag(&a), to_zigzag(&b)],
            arrows: vec![m],
        };
        let x = deconstruct(&library_poset(&p), &d);
        prop_assert_eq!(x.diagram.objects.len(), (2 * a.len() + 1) + (2 * b.len() + 1));
        prop_assert_eq!(x.diagram.shape.arrows().len(), 2 * a.len() + 2 * b.len() + a.len() + b.len() + 1);
        prop_assert_eq!(x.node(1, Height::Regular(b.len())), x.diagram.objects.len() - 1);
    }
}

fn signature_and_labels() -> impl Strategy<Value = (LabelSignature, Vec<LabelId>)> {
    prop::collection::vec(0..=3usize, 1..=5).prop_flat_map(|dims| {
        let n = dims.len();
        let sig = dims.iter().enumerate().fold(LabelSignature::new(), |s, (i, &d)| s.with(&format!("l{i}"), d));
        prop::collection::vec(0..n, 1..=6).prop_map(move |picks| (sig.clone(), picks.iter().map(|i| LabelId::from(format!("l{i}"))).collect()))
    })
}

proptest! {
    #[test]
    fn label_colimit_is_the_join_of_occurring_labels((sig, labels) in signature_and_labels()) {
        let occurring: Vec<&LabelId> = labels.iter().collect();
        let bounds: Vec<&LabelId> = occurring.iter().copied().filter(|u| occurring.iter().all(|l| sig.leq(l, u))).collect();
        let least: Vec<&LabelId> = bounds.iter().copied().filter(|u| bounds.iter().all(|b| sig.leq(u, b))).collect();
        let expected = least.first().map(|&u| u.clone());
        prop_assert_eq!(label_colimit(&sig, &labels).ok(), expected);
    }

    #[test]
    fn poset_laws_and_terminal(i in 0..small_posets().len()) {
        let p = library_poset(&small_posets()[i]);
        let n = p.len();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if let (Some(f), Some(g)) = (p.arrow(a, b), p.arrow(b, c)) {
                        prop_assert_eq!(p.compose(&f, &g).unwrap(), p.arrow(a, c).unwrap());
                    }
                }
                if let Some(f) = p.arrow(a, b) {
                    prop_assert_eq!(p.compose(&p.identity(&a), &f).unwrap(), f);
                }
            }
        }
        if let Some(t) = p.terminal() {
            prop_assert!((0..n).all(|x| p.arrow(x, t).is_some()));
        }
    }
}

fn root_contract(a: usize, b: usize, bias: Bias) -> ContractionDirective {
    ContractionDirective {
        path: Path::root(),
        window: (a, b),
        bias,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn expansion_round_trips(r in rigid::rigid()) {
        let sig = rigid::signature();
        let d = r.diagram(&sig);
        prop_assert_eq!(validate(&sig, &d), Ok(()));
        let e = expand_at(&sig, &d, &r.directive(), Policy::Strict).unwrap();
        prop_assert_eq!(e.result.len(), d.len() + 1);
        prop_assert_eq!(validate_morphism(&sig, &e.map), Ok(()));
        let back = contract_at(&sig, &e.result, &e.new_pair, Policy::Strict).unwrap();
        prop_assert_eq!(validate_morphism(&sig, &back.map), Ok(()));
        prop_assert_eq!(diagram_hash(&back.result), diagram_hash(&d));
    }

    #[test]
    fn bias_is_irrelevant_when_the_colimit_exists(r in rigid::rigid(), at in any::<Index>()) {
        let sig = rigid::signature();
        let d = r.diagram(&sig);
        prop_assume!(d.len() >= 2);
        let a = at.index(d.len() - 1);
        let plain = contract_at(&sig, &d, &root_contract(a, a + 2, Bias::None), Policy::Strict);
        prop_assume!(plain.is_ok());
        let plain = plain.unwrap();
        for bias in [Bias::Lower, Bias::Higher] {
            prop_assert_eq!(&contract_at(&sig, &d, &root_contract(a, a + 2, bias), Policy::Strict).unwrap(), &plain);
        }
    }

    #[test]
    fn slicing_a_concatenation(r in rigid::rigid(), s in rigid::rigid()) {
        let sig = rigid::signature();
        let (d, e) = (r.diagram(&sig), s.diagram(&sig));
        prop_assume!(r.wires == s.wires);
        let de = concat(&d, &e).unwrap();
        for h in 0..d.len() {
            for p in [format!("s{h}"), format!("r{h}")] {
                let p: Path = p.parse().unwrap();
                prop_assert_eq!(slice(&de, &p).unwrap(), slice(&d, &p).unwrap());
            }
        }
    }

    #[test]
    fn workspace_replay_is_deterministic(r in rigid::rigid()) {
        let sig = rigid::signature();
        let d = r.diagram(&sig);
        let w = Workspace { signature: sig, diagrams: [("d".to_owned(), d.clone())].into_iter().collect(), log: Vec::new() };
        let mut script = String::new();
        if d.len() >= 2 {
            script.push_str("contract d --path - --window 0..2\n");
        }
        script.push_str(&format!("assert length d {}\n", if d.len() >= 2 { d.len() - 1 } else { d.len() }));
        let once = w.replay(&script, &ScriptEnv::default());
        let twice = w.replay(&script, &ScriptEnv::default());
        match (once, twice) {
            (Ok(a), Ok(b)) => {
                prop_assert_eq!(a.content_hash(), b.content_hash());
                prop_assert_eq!(a.save(), b.save());
                let reloaded = Workspace::load(&a.save()).unwrap();
                prop_assert_eq!(reloaded.content_hash(), a.content_hash());
                prop_assert!(reloaded.verify_log().is_ok());
            }
            (Err(a), Err(b)) => prop_assert_eq!(a.index, b.index),
            _ => prop_assert!(false, "replays diverged"),
        }
    }

    #[test]
    fn rendering_is_pure(r in rigid::rigid()) {
        let sig = rigid::signature();
        let d = r.diagram(&sig);
        let g = project(&sig, &d);
        prop_assert_eq!(&project(&sig, &d), &g);
        prop_assert_eq!(emit_svg(&sig, &g, &Style::default()), emit_svg(&sig, &g, &Style::default()));
        prop_assert_eq!(emit_text(&g), emit_text(&g));
        let vertices = r.rows.iter().flatten().filter(|v| v.is_some()).count();
        prop_assert_eq!(g.nodes.len(), (2 * d.len() + 1) * (2 * r.wires + 1));
        prop_assert_eq!(g.nodes.iter().filter(|n| n.class == NodeClass::Vertex).count(), vertices);
    }
}

#[test]
fn shared_sources_compare_structurally() {
    let p = &posets(2)[0];
    let a = &zigzags(p, 1)[1];
    let m = library_map(p, a, a, &[0]);
    let shared = ZigzagMap::new_shared(Arc::new(to_zigzag(a)), Arc::new(to_zigzag(a)), Monotone::identity(1), m.slices().to_vec()).unwrap();
    assert_eq!(m, shared);
}

#[test]
fn rigid_sample_is_reproducible() {
    let (a, b): (Vec<Rigid>, Vec<Rigid>) = (rigid::sample(20), rigid::sample(20));
    let sig = rigid::signature();
    let hashes = |v: &[Rigid]| v.iter().map(|r| diagram_hash(&r.diagram(&sig))).collect::<Vec<_>>();
    assert_eq!(hashes(&a), hashes(&b));
}
