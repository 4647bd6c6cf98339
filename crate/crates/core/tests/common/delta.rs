//! Δ-colimits by the universal property.
//!
//! Every cocone factors through a jointly surjective one, and a mediator out
//! of a jointly surjective cocone is unique when it exists. So the colimit is
//! the jointly surjective cocone admitting a mediator to every other one;
//! such a cocone has the largest apex among them.

/// `(source, target, values)`
pub type Arrow = (usize, usize, Vec<usize>);

/// An apex size and one leg (list of values) per node.
pub type Cocone = (usize, Vec<Vec<usize>>);

pub fn monotones(n: usize, m: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, m: usize, lo: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if acc.len() == n {
            out.push(acc.clone());
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

/// `monotones` for `n, m <= 6`, computed once.
pub fn monotone_table(n: usize, m: usize) -> &'static [Vec<usize>] {
    static TABLE: std::sync::OnceLock<Vec<Vec<Vec<Vec<usize>>>>> = std::sync::OnceLock::new();
    &TABLE.get_or_init(|| (0..=6).map(|n| (0..=6).map(|m| monotones(n, m)).collect()).collect())[n][m]
}

struct Search<'a> {
    sizes: &'a [usize],
    /// Flattened element -> (node, index).
    elements: Vec<(usize, usize)>,
    /// For each element, earlier elements it must agree with.
    equal_to: Vec<Vec<usize>>,
    apex: usize,
    values: Vec<usize>,
    used: Vec<usize>,
    out: Vec<Cocone>,
}

impl Search<'_> {
    fn go(&mut self, e: usize) {
        if e == self.elements.len() {
            if self.used.iter().all(|&c| c > 0) {
                let mut legs = Vec::with_capacity(self.sizes.len());
                let mut k = 0;
                for &s in self.sizes {
                    legs.push(self.values[k..k + s].to_vec());
                    k += s;
                }
                self.out.push((self.apex, legs));
            }
            return;
        }
        let unused = self.used.iter().filter(|&&c| c == 0).count();
        if unused > self.elements.len() - e {
            return;
        }
        let (_, index) = self.elements[e];
        let lo = if index > 0 { self.values[e - 1] } else { 0 };
        let forced = self.equal_to[e].first().map(|&f| self.values[f]);
        let candidates: Vec<usize> = match forced {
            Some(v) => vec![v],
            None => (lo..self.apex).collect(),
        };
        for v in candidates {
            if v < lo || self.equal_to[e].iter().any(|&f| self.values[f] != v) {
                continue;
            }
            self.values[e] = v;
            self.used[v] += 1;
            self.go(e + 1);
            self.used[v] -= 1;
        }
    }
}

/// All cocones whose legs are jointly surjective.
pub fn surjective_cocones(sizes: &[usize], arrows: &[Arrow]) -> Vec<Cocone> {
    let mut offsets = Vec::new();
    let mut elements = Vec::new();
    for (node, &s) in sizes.iter().enumerate() {
        offsets.push(elements.len());
        elements.extend((0..s).map(|i| (node, i)));
    }
    let mut equal_to = vec![Vec::new(); elements.len()];
    for (s, t, f) in arrows {
        for (x, &y) in f.iter().enumerate() {
            let (a, b) = (offsets[*s] + x, offsets[*t] + y);
            if a != b {
                equal_to[a.max(b)].push(a.min(b));
            }
        }
    }
    let total = elements.len();
    if total == 0 {
        return vec![(0, vec![Vec::new(); sizes.len()])];
    }
    let mut out = Vec::new();
    for apex in 1..=total {
        let mut search = Search {
            sizes,
            elements: elements.clone(),
            equal_to: equal_to.clone(),
            apex,
            values: vec![0; total],
            used: vec![0; apex],
            out: Vec::new(),
        };
        search.go(0);
        out.append(&mut search.out);
    }
    out
}

/// Mediator `c -> k` for jointly surjective `c`, if one exists.
pub fn mediator(c: &Cocone, k: &Cocone) -> Option<Vec<usize>> {
    let mut u: Vec<Option<usize>> = vec![None; c.0];
    for (lc, lk) in c.1.iter().zip(&k.1) {
        for (&a, &b) in lc.iter().zip(lk) {
            match u[a] {
                None => u[a] = Some(b),
                Some(x) if x != b => return None,
                _ => {}
            }
        }
    }
    let u: Vec<usize> = u.into_iter().collect::<Option<_>>()?;
    u.windows(2).all(|w| w[0] <= w[1]).then_some(u)
}

/// The colimit of a connected Δ-diagram, if it exists.
pub fn colimit(sizes: &[usize], arrows: &[Arrow]) -> Option<Cocone> {
    let all = surjective_cocones(sizes, arrows);
    let top = all.iter().map(|c| c.0).max()?;
    let mut largest = all.iter().filter(|c| c.0 == top);
    let c = largest.next()?;
    if largest.next().is_some() {
        return None;
    }
    all.iter().all(|k| mediator(c, k).is_some()).then(|| c.clone())
}

/// Cocones into `[2]`: a threshold per node, below which elements go to 0.
pub fn cut_cocones(sizes: &[usize], arrows: &[Arrow]) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut thresholds = vec![0; sizes.len()];
    loop {
        let legs: Vec<Vec<usize>> = sizes
            .iter()
            .zip(&thresholds)
            .map(|(&s, &t)| (0..s).map(|i| (i >= t) as usize).collect())
            .collect();
        if arrows.iter().all(|(s, t, f)| f.iter().enumerate().all(|(x, &y)| legs[*s][x] == legs[*t][y])) {
            out.push(legs);
        }
        let mut k = 0;
        while k < sizes.len() {
            thresholds[k] += 1;
            if thresholds[k] <= sizes[k] {
                break;
            }
            thresholds[k] = 0;
            k += 1;
        }
        if k == sizes.len() {
            return out;
        }
    }
}

/// The colimit via cocones into `[2]` only. A cocone into `[p]` is the sum
/// of its `p - 1` cuts, so a jointly surjective cocone is universal iff it
/// mediates to every cut cocone; the colimit exists iff the cut preorder on
/// elements is total, and is then its set of classes.
pub fn colimit_by_cuts(sizes: &[usize], arrows: &[Arrow]) -> Option<Cocone> {
    let elements: Vec<(usize, usize)> = sizes.iter().enumerate().flat_map(|(n, &s)| (0..s).map(move |i| (n, i))).collect();
    if elements.is_empty() {
        return Some((0, vec![Vec::new(); sizes.len()]));
    }
    // bit j of masks[e] is the value of element e in the j-th cut cocone
    let offsets: Vec<usize> = sizes.iter().scan(0, |acc, &s| Some(std::mem::replace(acc, *acc + s))).collect();
    let mut masks: Vec<Vec<u64>> = vec![Vec::new(); elements.len()];
    let mut thresholds = vec![0; sizes.len()];
    let mut j = 0;
    loop {
        let value = |n: usize, i: usize| i >= thresholds[n];
        if arrows.iter().all(|(s, t, f)| f.iter().enumerate().all(|(x, &y)| value(*s, x) == value(*t, y))) {
            if j % 64 == 0 {
                masks.iter_mut().for_each(|m| m.push(0));
            }
            for (n, &s) in sizes.iter().enumerate() {
                for i in thresholds[n]..s {
                    masks[offsets[n] + i][j / 64] |= 1 << (j % 64);
                }
            }
            j += 1;
        }
        let mut k = 0;
        while k < sizes.len() {
            thresholds[k] += 1;
            if thresholds[k] <= sizes[k] {
                break;
            }
            thresholds[k] = 0;
            k += 1;
        }
        if k == sizes.len() {
            break;
        }
    }
    let below = |a: usize, b: usize| masks[a].iter().zip(&masks[b]).all(|(x, y)| x & !y == 0);
    let mut classes: Vec<usize> = Vec::new();
    for a in 0..elements.len() {
        for b in 0..a {
            if !below(a, b) && !below(b, a) {
                return None;
            }
        }
        if !classes.iter().any(|&c| below(a, c) && below(c, a)) {
            classes.push(a);
        }
    }
    let mut legs: Vec<Vec<usize>> = sizes.iter().map(|&s| vec![0; s]).collect();
    for (a, &(n, i)) in elements.iter().enumerate() {
        legs[n][i] = classes.iter().filter(|&&c| below(c, a) && !below(a, c)).count();
    }
    Some((classes.len(), legs))
}

/// Connected shapes with at most `max_nodes` nodes and `max_arrows` arrows,
/// one per isomorphism class; loops and parallel arrows included.
pub fn shapes(max_nodes: usize, max_arrows: usize) -> Vec<(usize, Vec<(usize, usize)>)> {
    let mut seen = std::collections::BTreeSet::new();
    for n in 1..=max_nodes {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
        let mut stack: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
        while let Some(arrows) = stack.pop() {
            if connected(n, &arrows) {
                let canon = permutations(n)
                    .iter()
                    .map(|p| {
                        let mut a: Vec<(usize, usize)> = arrows.iter().map(|&(s, t)| (p[s], p[t])).collect();
                        a.sort();
                        a
                    })
                    .min()
                    .unwrap();
                seen.insert((n, canon));
            }
            if arrows.len() < max_arrows {
                let start = arrows.last().map_or(0, |last| pairs.iter().position(|p| p == last).unwrap());
                for p in &pairs[start..] {
                    let mut next = arrows.clone();
                    next.push(*p);
                    stack.push(next);
                }
            }
        }
    }
    seen.into_iter().collect()
}

pub fn connected(n: usize, arrows: &[(usize, usize)]) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] == x {
            x
        } else {
            let r = find(p, p[x]);
            p[x] = r;
            r
        }
    }
    for &(s, t) in arrows {
        let (a, b) = (find(&mut parent, s), find(&mut parent, t));
        parent[a] = b;
    }
    let root = find(&mut parent, 0);
    (0..n).all(|i| find(&mut parent, i) == root)
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q: Vec<usize> = p.iter().map(|&x| x).collect();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Calls `f` on every assignment of sizes `0..=max_size` and monotone arrows
/// to `shape`.
pub fn for_each_diagram(n: usize, shape: &[(usize, usize)], max_size: usize, mut f: impl FnMut(&[usize], &[Arrow])) {
    let mut sizes = vec![0; n];
    loop {
        let choices: Vec<Vec<Vec<usize>>> = shape.iter().map(|&(s, t)| monotones(sizes[s], sizes[t])).collect();
        if choices.iter().all(|c| !c.is_empty()) {
            let mut index = vec![0; shape.len()];
            loop {
                let arrows: Vec<Arrow> = shape
                    .iter()
                    .zip(&index)
                    .zip(&choices)
                    .map(|((&(s, t), &i), c)| (s, t, c[i].clone()))
                    .collect();
                f(&sizes, &arrows);
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
            sizes[k] += 1;
            if sizes[k] <= max_size {
                break;
            }
            sizes[k] = 0;
            k += 1;
        }
        if k == n {
            break;
        }
    }
}
