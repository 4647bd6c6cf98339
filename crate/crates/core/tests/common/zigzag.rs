//! Zigzags over finite posets and a bounded universal-property oracle for
//! their colimits, written directly from the definitions.
//!
//! Over a poset a zigzag map is determined by its singular monotone `f`: it
//! exists iff the regular objects agree along the reversal of `f` and every
//! singular object lies below its image. A cocone is an apex zigzag with one
//! such monotone per node, compatible with the arrows.

use std::collections::BTreeSet;

use super::delta::{monotone_table, permutations};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    pub leq: Vec<Vec<bool>>,
}

impl Poset {
    pub fn len(&self) -> usize {
        self.leq.len()
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn has_top(&self) -> bool {
        (0..self.len()).any(|t| (0..self.len()).all(|x| self.le(x, t)))
    }
}

/// All partial orders on `n` elements, one per isomorphism class.
pub fn posets(n: usize) -> Vec<Poset> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).filter(|(a, b)| a < b).collect();
    let perms = permutations(n);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    // each unordered pair is unrelated, below or above
    let mut code = vec![0u8; pairs.len()];
    loop {
        let mut leq = vec![vec![false; n]; n];
        for i in 0..n {
            leq[i][i] = true;
        }
        for (&(a, b), &c) in pairs.iter().zip(&code) {
            match c {
                1 => leq[a][b] = true,
                2 => leq[b][a] = true,
                _ => {}
            }
        }
        let transitive = (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| !(leq[a][b] && leq[b][c]) || leq[a][c])));
        if transitive {
            let canon = perms
                .iter()
                .map(|p| {
                    let mut m = vec![vec![false; n]; n];
                    for a in 0..n {
                        for b in 0..n {
                            m[p[a]][p[b]] = leq[a][b];
                        }
                    }
                    m
                })
                .min()
                .unwrap();
            if seen.insert(canon.clone()) {
                out.push(Poset { leq: canon });
            }
        }
        let mut k = 0;
        while k < code.len() {
            code[k] += 1;
            if code[k] < 3 {
                break;
            }
            code[k] = 0;
            k += 1;
        }
        if k == code.len() {
            return out;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Zz {
    pub reg: Vec<usize>,
    pub sing: Vec<usize>,
}

impl Zz {
    pub fn len(&self) -> usize {
        self.sing.len()
    }
}

pub fn zigzags(p: &Poset, max_len: usize) -> Vec<Zz> {
    fn go(p: &Poset, max_len: usize, z: &mut Zz, out: &mut Vec<Zz>) {
        out.push(z.clone());
        if z.len() == max_len {
            return;
        }
        let r = *z.reg.last().unwrap();
        for s in 0..p.len() {
            if !p.le(r, s) {
                continue;
            }
            for r2 in 0..p.len() {
                if p.le(r2, s) {
                    z.sing.push(s);
                    z.reg.push(r2);
                    go(p, max_len, z, out);
                    z.sing.pop();
                    z.reg.pop();
                }
            }
        }
    }
    let mut out = Vec::new();
    for r in 0..p.len() {
        go(p, max_len, &mut Zz { reg: vec![r], sing: vec![] }, &mut out);
    }
    out
}

/// `j -> #{i : f(i) < j}` on `0..=m`.
pub fn reversal(f: &[usize], m: usize) -> Vec<usize> {
    (0..=m).map(|j| f.iter().filter(|&&v| v < j).count()).collect()
}

pub fn is_map(p: &Poset, a: &Zz, b: &Zz, f: &[usize]) -> bool {
    let rho = reversal(f, b.len());
    (0..=b.len()).all(|j| b.reg[j] == a.reg[rho[j]]) && f.iter().enumerate().all(|(i, &v)| p.le(a.sing[i], b.sing[v]))
}

pub fn maps(p: &Poset, a: &Zz, b: &Zz) -> Vec<Vec<usize>> {
    monotone_table(a.len(), b.len()).iter().filter(|f| is_map(p, a, b, f)).cloned().collect()
}

/// Zigzags on nodes and singular monotones on arrows `(source, target, f)`.
#[derive(Debug, Clone)]
pub struct Instance {
    pub nodes: Vec<Zz>,
    pub arrows: Vec<(usize, usize, Vec<usize>)>,
}

/// Every assignment of zigzags of length `<= max_len` and maps to `shape`.
pub fn for_each_instance(p: &Poset, n: usize, shape: &[(usize, usize)], max_len: usize, mut f: impl FnMut(&Instance)) {
    let all = zigzags(p, max_len);
    let mut nodes = vec![0usize; n];
    loop {
        let zs: Vec<&Zz> = nodes.iter().map(|&i| &all[i]).collect();
        let choices: Vec<Vec<Vec<usize>>> = shape.iter().map(|&(s, t)| maps(p, zs[s], zs[t])).collect();
        if choices.iter().all(|c| !c.is_empty()) {
            let mut index = vec![0; shape.len()];
            loop {
                let inst = Instance {
                    nodes: zs.iter().map(|&z| z.clone()).collect(),
                    arrows: shape.iter().zip(&index).zip(&choices).map(|((&(s, t), &i), c)| (s, t, c[i].clone())).collect(),
                };
                f(&inst);
                let mut k = 0;
                while k < index.len() {
                    index[k] += 1;
                    if index[k] < choices[k].len() {
                        break;
                    }
                    index[k] = 0;
                    k += 1;
                }
                if k == index.len() {
                    break;
                }
            }
        }
        let mut k = 0;
        while k < n {
            nodes[k] += 1;
            if nodes[k] < all.len() {
                break;
            }
            nodes[k] = 0;
            k += 1;
        }
        if k == n {
            return;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZCocone {
    pub apex: Zz,
    pub legs: Vec<Vec<usize>>,
}

/// Cocones sharing apex length, legs and (forced) regular objects; the
/// singular objects range over `options`, the upper bounds of what lands
/// at each height.
#[derive(Debug, Clone)]
pub struct Skeleton {
    pub k: usize,
    pub legs: Vec<Vec<usize>>,
    pub reg: Vec<usize>,
    pub options: Vec<Vec<usize>>,
}

impl Skeleton {
    pub fn cocones(&self) -> Vec<ZCocone> {
        product(&self.options)
            .into_iter()
            .map(|sing| ZCocone {
                apex: Zz { reg: self.reg.clone(), sing },
                legs: self.legs.clone(),
            })
            .collect()
    }
}

fn product(options: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for o in options {
        out = out.into_iter().flat_map(|p| o.iter().map(move |&x| [p.clone(), vec![x]].concat())).collect();
    }
    out
}

/// Skeletons of all cocones with apex length at most `max_apex`.
pub fn skeletons(p: &Poset, inst: &Instance, max_apex: usize) -> Vec<Skeleton> {
    fn assign(p: &Poset, inst: &Instance, k: usize, per_node: &[&[Vec<usize>]], legs: &mut Vec<Vec<usize>>, out: &mut Vec<Skeleton>) {
        let n = legs.len();
        if n == inst.nodes.len() {
            let refs: Vec<&Vec<usize>> = legs.iter().collect();
            out.extend(skeleton(p, inst, &refs, k));
            return;
        }
        for f in per_node[n] {
            legs.push(f.clone());
            let commutes = inst
                .arrows
                .iter()
                .filter(|(s, t, _)| *s <= n && *t <= n && (*s == n || *t == n))
                .all(|(s, t, g)| g.iter().enumerate().all(|(x, &y)| legs[*t][y] == legs[*s][x]));
            if commutes {
                assign(p, inst, k, per_node, legs, out);
            }
            legs.pop();
        }
    }
    let mut out = Vec::new();
    for k in 0..=max_apex {
        let per_node: Vec<&[Vec<usize>]> = inst.nodes.iter().map(|z| monotone_table(z.len(), k)).collect();
        assign(p, inst, k, &per_node, &mut Vec::new(), &mut out);
    }
    out
}

/// All cocones with apex length at most `max_apex`.
pub fn cocones(p: &Poset, inst: &Instance, max_apex: usize) -> Vec<ZCocone> {
    skeletons(p, inst, max_apex).iter().flat_map(Skeleton::cocones).collect()
}

/// The apex skeleton of length `k` making `legs` zigzag maps, if any.
fn skeleton(p: &Poset, inst: &Instance, legs: &[&Vec<usize>], k: usize) -> Option<Skeleton> {
    let rho: Vec<Vec<usize>> = legs.iter().map(|f| reversal(f, k)).collect();
    let mut reg = Vec::with_capacity(k + 1);
    for x in 0..=k {
        let mut value = None;
        for (z, r) in inst.nodes.iter().zip(&rho) {
            let r = z.reg[r[x]];
            match value {
                None => value = Some(r),
                Some(v) if v != r => return None,
                _ => {}
            }
        }
        reg.push(value.unwrap());
    }
    let options: Vec<Vec<usize>> = (0..k)
        .map(|h| {
            let mut below = vec![reg[h], reg[h + 1]];
            for (z, f) in inst.nodes.iter().zip(legs) {
                below.extend(f.iter().enumerate().filter(|&(_, &v)| v == h).map(|(i, _)| z.sing[i]));
            }
            (0..p.len()).filter(|&s| below.iter().all(|&b| p.le(b, s))).collect()
        })
        .collect();
    if options.iter().any(Vec::is_empty) {
        return None;
    }
    Some(Skeleton {
        k,
        legs: legs.iter().map(|f| f.to_vec()).collect(),
        reg,
        options,
    })
}

/// Monotones `[c.k] -> [d.k]` commuting with the legs and matching the
/// regular objects: the mediators `c -> d` before singular objects are
/// chosen.
fn skeleton_mediators(c: &Skeleton, d: &Skeleton) -> Vec<Vec<usize>> {
    monotone_table(c.k, d.k)
        .iter()
        .filter(|m| {
            c.legs.iter().zip(&d.legs).all(|(fc, fd)| fc.iter().zip(fd).all(|(&a, &b)| m[a] == b))
                && (0..=d.k).all(|j| d.reg[j] == c.reg[m.iter().filter(|&&v| v < j).count()])
        })
        .cloned()
        .collect()
}

/// Number of mediators `c -> d`, capped at 2.
pub fn mediators(p: &Poset, c: &ZCocone, d: &ZCocone) -> usize {
    monotone_table(c.apex.len(), d.apex.len())
        .iter()
        .filter(|m| c.legs.iter().zip(&d.legs).all(|(fc, fd)| fc.iter().zip(fd).all(|(&a, &b)| m[a] == b)) && is_map(p, &c.apex, &d.apex, m))
        .take(2)
        .count()
}

/// A cocone in the bounded universe with exactly one mediator to every
/// cocone of the universe.
pub fn bounded_colimit(p: &Poset, inst: &Instance, max_apex: usize) -> Option<ZCocone> {
    let skels = skeletons(p, inst, max_apex);
    let all: Vec<Vec<Vec<usize>>> = skels.iter().map(|s| product(&s.options)).collect();
    for (ci, cs) in skels.iter().enumerate() {
        let order: Vec<usize> = std::iter::once(ci).chain((0..skels.len()).filter(|&i| i != ci)).collect();
        let mut meds: Vec<Option<Vec<Vec<usize>>>> = vec![None; skels.len()];
        'candidate: for c_sing in &all[ci] {
            for &di in &order {
                let ms = meds[di].get_or_insert_with(|| skeleton_mediators(cs, &skels[di]));
                if ms.is_empty() {
                    break 'candidate;
                }
                for d_sing in &all[di] {
                    let count = ms
                        .iter()
                        .filter(|m| m.iter().enumerate().all(|(i, &v)| p.le(c_sing[i], d_sing[v])))
                        .take(2)
                        .count();
                    if count != 1 {
                        continue 'candidate;
                    }
                }
            }
            return Some(ZCocone {
                apex: Zz { reg: cs.reg.clone(), sing: c_sing.clone() },
                legs: cs.legs.clone(),
            });
        }
    }
    None
}
