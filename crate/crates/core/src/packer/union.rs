//! The growing union graph with vertex and pair indexes, plus the local
//! search for configurations that mix new and old edges.

use fixedbitset::FixedBitSet;
use rustc_hash::FxHashMap;

use crate::hypercore::{pair_key, Vertex};

#[derive(Clone, Debug)]
pub(super) struct UnionIndex {
    r: usize,
    t: usize,
    k: usize,
    /// Stand-in for a vertex not chosen yet; lies in no placed edge.
    star: Vertex,
    /// `limit[j] = j(r-t)+t`.
    limit: Vec<usize>,
    edges: Vec<Vertex>,
    edge_copy: Vec<u32>,
    vertex_edges: Vec<Vec<u32>>,
    pair_edges: FxHashMap<u64, Vec<u32>>,
    // search scratch
    vcount: Vec<u16>,
    stamp: Vec<u32>,
    stamp_now: u32,
    chosen: Vec<u32>,
    span: Vec<Vertex>,
    old: usize,
    first_new: usize,
    first_root: usize,
    root: usize,
    cand_pool: Vec<Vec<u32>>,
}

impl UnionIndex {
    pub(super) fn new(r: usize, t: usize, k: usize, n: usize) -> Self {
        UnionIndex {
            r,
            t,
            k,
            star: n as Vertex,
            limit: (0..=k).map(|j| j * (r - t) + t).collect(),
            edges: Vec::new(),
            edge_copy: Vec::new(),
            vertex_edges: vec![Vec::new(); n + 1],
            pair_edges: FxHashMap::default(),
            vcount: vec![0; n + 1],
            stamp: Vec::new(),
            stamp_now: 0,
            chosen: Vec::with_capacity(k),
            span: Vec::new(),
            old: 0,
            first_new: 0,
            first_root: 0,
            root: 0,
            cand_pool: vec![Vec::new(); k + 1],
        }
    }

    pub(super) fn star(&self) -> Vertex {
        self.star
    }

    pub(super) fn len(&self) -> usize {
        self.edge_copy.len()
    }

    pub(super) fn edge(&self, e: usize) -> &[Vertex] {
        &self.edges[e * self.r..(e + 1) * self.r]
    }

    pub(super) fn copy_of(&self, e: usize) -> u32 {
        self.edge_copy[e]
    }

    pub(super) fn flat(&self) -> &[Vertex] {
        &self.edges
    }

    /// `edge` must be sorted.
    pub(super) fn push(&mut self, edge: &[Vertex], copy: u32) {
        let id = self.edge_copy.len() as u32;
        self.edges.extend_from_slice(edge);
        self.edge_copy.push(copy);
        self.stamp.push(0);
        for (i, &a) in edge.iter().enumerate() {
            self.vertex_edges[a as usize].push(id);
            for &b in &edge[i + 1..] {
                self.pair_edges.entry(pair_key(a, b)).or_default().push(id);
            }
        }
    }

    pub(super) fn truncate(&mut self, len: usize) {
        while self.edge_copy.len() > len {
            self.pop();
        }
    }

    fn pop(&mut self) {
        let id = self.edge_copy.len() - 1;
        let r = self.r;
        for i in 0..r {
            let a = self.edges[id * r + i];
            self.vertex_edges[a as usize].pop();
            for j in i + 1..r {
                let key = pair_key(a, self.edges[id * r + j]);
                let list = self.pair_edges.get_mut(&key).expect("pair indexed");
                list.pop();
                if list.is_empty() {
                    self.pair_edges.remove(&key);
                }
            }
        }
        self.edges.truncate(id * r);
        self.edge_copy.pop();
        self.stamp.pop();
    }

    /// A connected `(l(r-t)+t, l)`-configuration, `2 <= l <= k`, containing
    /// an edge with id at least `first_root` and an edge with id below
    /// `first_new`. Returns its edge ids.
    pub(super) fn find_conflict(&mut self, first_new: usize, first_root: usize) -> Option<Vec<u32>> {
        self.first_new = first_new;
        self.first_root = first_root;
        for root in first_root..self.len() {
            self.root = root;
            if self.dfs(root) {
                return Some(self.clear_found());
            }
        }
        None
    }

    fn enter(&mut self, e: usize) {
        let r = self.r;
        for i in 0..r {
            let v = self.edges[e * r + i];
            if self.vcount[v as usize] == 0 {
                self.span.push(v);
            }
            self.vcount[v as usize] += 1;
        }
        self.chosen.push(e as u32);
        self.old += (e < self.first_new) as usize;
    }

    /// Undoes [`enter`](Self::enter); `saved` is the span length before it.
    fn leave(&mut self, e: usize, saved: usize) {
        self.old -= (e < self.first_new) as usize;
        self.chosen.pop();
        for i in 0..self.r {
            self.vcount[self.edges[e * self.r + i] as usize] -= 1;
        }
        self.span.truncate(saved);
    }

    fn is_conflict(&self) -> bool {
        let j = self.chosen.len();
        j >= 2 && self.old > 0 && self.span.len() <= self.limit[j]
    }

    /// Smallest overlap with the span an added edge may have so that `k`
    /// edges can still fit in `limit[k]` vertices.
    fn min_overlap(&self) -> usize {
        let budget = self.limit[self.k] as i64 - self.span.len() as i64;
        (self.r as i64 - budget).max(1) as usize
    }

    fn clear_found(&mut self) -> Vec<u32> {
        let found = std::mem::take(&mut self.chosen);
        for &e in &found {
            for i in 0..self.r {
                self.vcount[self.edges[e as usize * self.r + i] as usize] -= 1;
            }
        }
        self.span.clear();
        self.old = 0;
        found
    }

    /// Adds `e` and explores. On success the state is left in place for
    /// the caller to read and clear.
    fn dfs(&mut self, e: usize) -> bool {
        let saved = self.span.len();
        self.enter(e);
        if self.is_conflict() {
            return true;
        }
        let j = self.chosen.len();
        if j < self.k {
            let min_overlap = self.min_overlap();
            if min_overlap <= self.r {
                let mut cands = std::mem::take(&mut self.cand_pool[j]);
                self.candidates(min_overlap, &mut cands);
                let mut hit = false;
                for &f in &cands {
                    if self.dfs(f as usize) {
                        hit = true;
                        break;
                    }
                }
                cands.clear();
                self.cand_pool[j] = cands;
                if hit {
                    return true;
                }
            }
        }
        self.leave(e, saved);
        false
    }

    /// Like [`find_conflict`](Self::find_conflict), but only configurations
    /// that contain an old edge through `x`. Each root contains `x`, so such
    /// an edge can always be taken second.
    pub(super) fn find_conflict_through(&mut self, first_new: usize, first_root: usize, x: Vertex) -> Option<Vec<u32>> {
        self.first_new = first_new;
        self.first_root = first_root;
        let through: Vec<u32> = self.vertex_edges[x as usize]
            .iter()
            .copied()
            .take_while(|&f| (f as usize) < first_new)
            .collect();
        for root in first_root..self.len() {
            self.root = root;
            self.enter(root);
            for &f in &through {
                if self.dfs(f as usize) {
                    return Some(self.clear_found());
                }
            }
            self.leave(root, 0);
        }
        None
    }

    /// Explores every configuration through the edges from `first_root` on,
    /// which contain the stand-in vertex. Returns true as soon as one of them
    /// is a conflict on its own: then every choice of the vertex fails.
    /// Otherwise marks in `out` the vertices of `allowed` that would close a
    /// conflict by an old edge through them added last, overlapping the rest
    /// in at least two placed vertices. Those vertices are certain to fail;
    /// the others still need [`find_conflict_through`](Self::find_conflict_through).
    pub(super) fn scan_star(
        &mut self,
        first_new: usize,
        first_root: usize,
        allowed: &FixedBitSet,
        out: &mut FixedBitSet,
    ) -> bool {
        self.first_new = first_new;
        self.first_root = first_root;
        for root in first_root..self.len() {
            self.root = root;
            if self.scan(root, allowed, out) {
                self.clear_found();
                return true;
            }
        }
        false
    }

    fn scan(&mut self, e: usize, allowed: &FixedBitSet, out: &mut FixedBitSet) -> bool {
        let saved = self.span.len();
        self.enter(e);
        if self.is_conflict() {
            return true;
        }
        let j = self.chosen.len();
        if j < self.k {
            self.mark_completions(allowed, out);
            let min_overlap = self.min_overlap();
            if min_overlap <= self.r {
                let mut cands = std::mem::take(&mut self.cand_pool[j]);
                self.candidates(min_overlap, &mut cands);
                let mut hit = false;
                for &f in &cands {
                    if self.scan(f as usize, allowed, out) {
                        hit = true;
                        break;
                    }
                }
                cands.clear();
                self.cand_pool[j] = cands;
                if hit {
                    return true;
                }
            }
        }
        self.leave(e, saved);
        false
    }

    /// An old edge `f` meeting the placed part of the span in `q` vertices
    /// closes a conflict once the stand-in becomes one of its other
    /// vertices, provided the span grows by at most `limit[j+1] - span`.
    fn mark_completions(&mut self, allowed: &FixedBitSet, out: &mut FixedBitSet) {
        let r = self.r;
        let j = self.chosen.len();
        if self.t < 2 {
            // every vertex of an old edge is already excluded
            return;
        }
        let q_need = (self.span.len() + r - 1) as i64 - self.limit[j + 1] as i64;
        let q_min = q_need.max(2) as usize;
        if q_min > r - 1 {
            return;
        }
        let star = self.star;
        for (i, &a) in self.span.iter().enumerate() {
            if a == star {
                continue;
            }
            for &b in &self.span[i + 1..] {
                if b == star {
                    continue;
                }
                let Some(list) = self.pair_edges.get(&pair_key(a, b)) else {
                    continue;
                };
                for &f in list {
                    let fi = f as usize;
                    if fi >= self.first_new {
                        continue;
                    }
                    let edge = &self.edges[fi * r..(fi + 1) * r];
                    let q = edge.iter().filter(|&&v| self.vcount[v as usize] > 0).count();
                    if q < q_min {
                        continue;
                    }
                    for &v in edge {
                        if self.vcount[v as usize] == 0 && allowed.contains(v as usize) {
                            out.insert(v as usize);
                        }
                    }
                }
            }
        }
    }

    fn candidates(&mut self, min_overlap: usize, out: &mut Vec<u32>) {
        self.stamp_now = self.stamp_now.wrapping_add(1);
        if self.stamp_now == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.stamp_now = 1;
        }
        let r = self.r;
        let mut consider = |f: u32, stamp: &mut [u32], now: u32| {
            let fi = f as usize;
            if stamp[fi] == now {
                return;
            }
            stamp[fi] = now;
            // roots up to this one are handled by their own search
            if fi >= self.first_root && fi <= self.root {
                return;
            }
            if self.chosen.contains(&f) {
                return;
            }
            let overlap = self.edges[fi * r..(fi + 1) * r]
                .iter()
                .filter(|&&v| self.vcount[v as usize] > 0)
                .count();
            if overlap >= min_overlap {
                out.push(f);
            }
        };
        let now = self.stamp_now;
        if min_overlap >= 2 {
            for (i, &a) in self.span.iter().enumerate() {
                for &b in &self.span[i + 1..] {
                    if let Some(list) = self.pair_edges.get(&pair_key(a, b)) {
                        for &f in list {
                            consider(f, &mut self.stamp, now);
                        }
                    }
                }
            }
        } else {
            for &v in &self.span {
                for &f in &self.vertex_edges[v as usize] {
                    consider(f, &mut self.stamp, now);
                }
            }
        }
    }
}
