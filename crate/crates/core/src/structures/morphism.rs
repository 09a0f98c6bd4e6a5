//! Homomorphism, isomorphism and automorphism search by backtracking.

use super::{Relation, Structure};
use crate::error::{Error, Result};
use std::collections::VecDeque;

fn check_signatures(a: &Structure, b: &Structure) -> Result<()> {
    let (l, r) = (a.signature(), b.signature());
    if l != r {
        return Err(Error::SignatureMismatch { left: l, right: r });
    }
    Ok(())
}

fn paired<'a>(a: &'a Structure, b: &'a Structure) -> Vec<(&'a Relation, &'a Relation)> {
    a.relations()
        .map(|(name, r)| (r, b.relation(name).expect("signatures checked")))
        .collect()
}

/// Whether `map` (image index per element of `a`) preserves every relation.
pub fn is_homomorphism(a: &Structure, b: &Structure, map: &[usize]) -> bool {
    a.relations().all(|(name, r)| {
        let Some(target) = b.relation(name) else { return false };
        r.pairs().all(|(x, y)| target.contains(map[x], map[y]))
    })
}

/// Up to `limit` homomorphisms `a → b`, as image-index vectors.
///
/// Elements of `a` are assigned in domain order, candidates tried in `b`'s domain order.
pub fn homomorphisms(a: &Structure, b: &Structure, limit: usize) -> Result<Vec<Vec<usize>>> {
    check_signatures(a, b)?;
    let rels = paired(a, b);
    let mut out = Vec::new();
    if limit == 0 {
        return Ok(out);
    }
    if a.size() > 0 && b.size() == 0 {
        return Ok(out);
    }
    let mut map = vec![usize::MAX; a.size()];
    hom_search(&rels, a.size(), b.size(), 0, &mut map, &mut out, limit);
    Ok(out)
}

fn hom_search(
    rels: &[(&Relation, &Relation)],
    n: usize,
    m: usize,
    next: usize,
    map: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
    limit: usize,
) -> bool {
    if next == n {
        out.push(map.clone());
        return out.len() >= limit;
    }
    for cand in 0..m {
        map[next] = cand;
        let ok = rels.iter().all(|(ra, rb)| {
            (0..=next).all(|u| {
                (!ra.contains(next, u) || rb.contains(cand, map[u]))
                    && (!ra.contains(u, next) || rb.contains(map[u], cand))
            })
        });
        if ok && hom_search(rels, n, m, next + 1, map, out, limit) {
            return true;
        }
    }
    map[next] = usize::MAX;
    false
}

type Profile = Vec<(usize, usize, bool)>;

fn profiles(s: &Structure) -> Vec<Profile> {
    (0..s.size())
        .map(|x| {
            s.relations()
                .map(|(_, r)| (r.out_degree(x), r.in_degree(x), r.contains(x, x)))
                .collect()
        })
        .collect()
}

/// Assignment order: anchors first, then undirected BFS so each new element touches an assigned one.
fn search_order(s: &Structure, seeds: &[usize]) -> Vec<usize> {
    let n = s.size();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::new();
    let starts = seeds.iter().copied().chain(0..n);
    for start in starts {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for (_, r) in s.relations() {
                for v in r.successors(u).chain(r.predecessors(u)) {
                    if !seen[v] {
                        seen[v] = true;
                        queue.push_back(v);
                    }
                }
            }
        }
    }
    order
}

struct IsoSearch<'a> {
    rels: Vec<(&'a Relation, &'a Relation)>,
    prof_a: Vec<Profile>,
    prof_b: Vec<Profile>,
    order: Vec<usize>,
    map: Vec<Option<usize>>,
    used: Vec<bool>,
}

impl IsoSearch<'_> {
    fn consistent(&self, x: usize, y: usize) -> bool {
        if self.prof_a[x] != self.prof_b[y] {
            return false;
        }
        self.rels.iter().all(|(ra, rb)| {
            if ra.contains(x, x) != rb.contains(y, y) {
                return false;
            }
            self.order.iter().all(|&u| match self.map[u] {
                Some(v) if u != x => ra.contains(x, u) == rb.contains(y, v) && ra.contains(u, x) == rb.contains(v, y),
                _ => true,
            })
        })
    }

    fn run(&mut self, pos: usize) -> bool {
        if pos == self.order.len() {
            return true;
        }
        let x = self.order[pos];
        if let Some(y) = self.map[x] {
            return self.consistent(x, y) && self.run(pos + 1);
        }
        for y in 0..self.used.len() {
            if self.used[y] || !self.consistent(x, y) {
                continue;
            }
            self.map[x] = Some(y);
            self.used[y] = true;
            if self.run(pos + 1) {
                return true;
            }
            self.map[x] = None;
            self.used[y] = false;
        }
        false
    }
}

fn iso_indexed(a: &Structure, b: &Structure, fixed: &[(usize, usize)]) -> Option<Vec<usize>> {
    if a.size() != b.size() || a.signature() != b.signature() {
        return None;
    }
    let n = a.size();
    let seeds: Vec<usize> = fixed.iter().map(|&(x, _)| x).collect();
    let mut search = IsoSearch {
        rels: paired(a, b),
        prof_a: profiles(a),
        prof_b: profiles(b),
        order: search_order(a, &seeds),
        map: vec![None; n],
        used: vec![false; n],
    };
    for &(x, y) in fixed {
        match search.map[x] {
            Some(prev) if prev == y => continue,
            Some(_) => return None,
            None => {}
        }
        if search.used[y] || !search.consistent(x, y) {
            return None;
        }
        search.map[x] = Some(y);
        search.used[y] = true;
    }
    if search.run(0) {
        Some(search.map.into_iter().map(|m| m.unwrap()).collect())
    } else {
        None
    }
}

/// An isomorphism `(a, anchors_a) ≅ (b, anchors_b)` mapping anchors pointwise, if one exists.
pub fn isomorphism(a: &Structure, anchors_a: &[&str], b: &Structure, anchors_b: &[&str]) -> Result<Option<Vec<usize>>> {
    if anchors_a.len() != anchors_b.len() {
        return Err(Error::InvalidParameter(format!(
            "anchor tuples differ in length ({} vs {})",
            anchors_a.len(),
            anchors_b.len()
        )));
    }
    let mut fixed = Vec::with_capacity(anchors_a.len());
    for (x, y) in anchors_a.iter().zip(anchors_b) {
        fixed.push((a.index_of(x)?, b.index_of(y)?));
    }
    Ok(iso_indexed(a, b, &fixed))
}

#[derive(Clone, Copy, Debug)]
pub struct OrbitOptions {
    pub max_size: usize,
}

impl Default for OrbitOptions {
    fn default() -> Self {
        OrbitOptions { max_size: 64 }
    }
}

/// A generating set of the automorphism group (coset representatives along a point-stabilizer chain).
pub fn automorphism_generators(s: &Structure) -> Vec<Vec<usize>> {
    let n = s.size();
    let prof = profiles(s);
    let order = search_order(s, &[]);
    let mut gens: Vec<Vec<usize>> = Vec::new();
    let mut base: Vec<(usize, usize)> = Vec::new();
    for &b in &order {
        let mut level: Vec<Vec<usize>> = Vec::new();
        let mut orbit = vec![false; n];
        orbit[b] = true;
        for x in 0..n {
            if orbit[x] || prof[x] != prof[b] {
                continue;
            }
            let mut fixed = base.clone();
            fixed.push((b, x));
            if let Some(g) = iso_indexed(s, s, &fixed) {
                level.push(g);
                close_orbit(&mut orbit, b, &level);
            }
        }
        gens.extend(level);
        base.push((b, b));
    }
    gens
}

fn close_orbit(orbit: &mut [bool], start: usize, gens: &[Vec<usize>]) {
    let mut stack = vec![start];
    orbit.iter_mut().for_each(|o| *o = false);
    orbit[start] = true;
    while let Some(u) = stack.pop() {
        for g in gens {
            let v = g[u];
            if !orbit[v] {
                orbit[v] = true;
                stack.push(v);
            }
        }
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut c = x;
        while self.0[c] != r {
            let next = self.0[c];
            self.0[c] = r;
            c = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

/// Partition of `dom²` into orbits of the automorphism group.
///
/// Each orbit lists its pairs in row-major order; orbits are sorted by their first pair.
pub fn automorphism_orbits(s: &Structure, opts: OrbitOptions) -> Result<Vec<Vec<(usize, usize)>>> {
    let n = s.size();
    if n > opts.max_size {
        return Err(Error::BoundExceeded {
            what: "automorphism orbit domain size",
            value: n,
            bound: opts.max_size,
        });
    }
    let gens = automorphism_generators(s);
    let mut uf = UnionFind((0..n * n).collect());
    for g in &gens {
        for a in 0..n {
            for b in 0..n {
                uf.union(a * n + b, g[a] * n + g[b]);
            }
        }
    }
    let mut classes: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut slot = vec![usize::MAX; n * n];
    for p in 0..n * n {
        let r = uf.find(p);
        if slot[r] == usize::MAX {
            slot[r] = classes.len();
            classes.push(Vec::new());
        }
        classes[slot[r]].push((p / n, p % n));
    }
    Ok(classes)
}
