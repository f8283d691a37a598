//! Exhaustive branch-and-bound search for `(s, k)`-configurations.
//!
//! Write `excess(X) = |X| r - |V(X)|` for an edge set `X`. A `k`-set `W` is an
//! `(s, k)`-configuration iff `excess(W) >= kr - s`. Excess is additive over
//! vertex-disjoint pieces, single edges contribute nothing, and adding an edge
//! never lowers it. So a configuration exists iff the graph has at least `k`
//! edges and some *core* reaches the required excess, where a core is a union
//! of vertex-disjoint connected pieces of two or more edges with at most `k`
//! edges in total; the rest of `W` is arbitrary padding.
//!
//! Cores are enumerated piece by piece. Each piece grows from its smallest
//! edge id by adding edges that meet it and avoid earlier pieces; pieces are
//! started in increasing root order. Two bounds prune the tree:
//!
//! - the span may never exceed `s`, so the next edge must overlap the current
//!   piece in at least `r - (s - span)` vertices (which lets the pair index
//!   replace the vertex index once the budget drops below `r - 1`);
//! - a `j`-edge set spans at least `min { v : C(v, r) >= j }` vertices, which
//!   caps the excess any unfinished piece can still reach.

use crate::combinatorics::binomial;
use crate::error::{Error, Result};

use super::incidence::Incidence;
use super::{ConfigSpec, ConfigurationWitness, Hypergraph, Vertex};

/// A graph with its lookup tables, ready for repeated configuration queries.
pub struct ConfigSearch<'g> {
    g: &'g Hypergraph,
    inc: Incidence,
}

impl<'g> ConfigSearch<'g> {
    pub fn new(g: &'g Hypergraph) -> Self {
        ConfigSearch {
            g,
            inc: Incidence::new(g),
        }
    }

    pub fn graph(&self) -> &'g Hypergraph {
        self.g
    }

    pub fn incidence(&self) -> &Incidence {
        &self.inc
    }

    /// A `spec.k`-edge set spanning at most `spec.s` vertices and containing
    /// all of `required`, if one exists.
    pub fn find(
        &self,
        spec: ConfigSpec,
        required: &[usize],
    ) -> Result<Option<ConfigurationWitness>> {
        spec.validate_for(self.g.uniformity())?;
        let m = self.g.len();
        let mut req = required.to_vec();
        req.sort_unstable();
        req.dedup();
        if let Some(&bad) = req.iter().find(|&&i| i >= m) {
            return Err(Error::param(format!("required edge {bad} out of range")));
        }
        if m < spec.k || req.len() > spec.k {
            return Ok(None);
        }
        let mut dfs = Dfs::new(self.g, &self.inc, spec, Mode::Find, &req);
        dfs.run();
        Ok(dfs.found.map(|core| {
            let mut ids: Vec<usize> = core.iter().map(|&e| e as usize).collect();
            for &e in &req {
                if !ids.contains(&e) {
                    ids.push(e);
                }
            }
            let mut next = 0;
            while ids.len() < spec.k {
                if !ids.contains(&next) {
                    ids.push(next);
                }
                next += 1;
            }
            ConfigurationWitness::from_edges(self.g, ids)
        }))
    }

    /// Marks every edge lying in at least one `spec`-configuration.
    pub fn edges_in_configurations(&self, spec: ConfigSpec) -> Result<Vec<bool>> {
        spec.validate_for(self.g.uniformity())?;
        let m = self.g.len();
        if m < spec.k {
            return Ok(vec![false; m]);
        }
        let mut dfs = Dfs::new(self.g, &self.inc, spec, Mode::Collect, &[]);
        dfs.run();
        if dfs.all {
            Ok(vec![true; m])
        } else {
            Ok(dfs.marks)
        }
    }
}

/// Largest excess of `j` distinct `r`-sets, `jr - min { v : C(v, r) >= j }`.
pub(crate) fn max_excess(r: usize, j: usize) -> i64 {
    if j <= 1 {
        return 0;
    }
    let mut v = r;
    while binomial(v as u64, r as u64) < j as u128 {
        v += 1;
    }
    (j * r) as i64 - v as i64
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Find,
    Collect,
}

struct Dfs<'a> {
    g: &'a Hypergraph,
    inc: &'a Incidence,
    r: usize,
    s: usize,
    k: usize,
    need: i64,
    exmax: Vec<i64>,
    mode: Mode,

    required: Vec<bool>,
    required_total: usize,
    required_hit: usize,

    chosen: Vec<u32>,
    in_chosen: Vec<bool>,
    vcount: Vec<u16>,
    piece_of: Vec<u32>,
    span: usize,

    piece: u32,
    piece_root: usize,
    open_edges: usize,
    open_excess: i64,
    closed_excess: i64,
    open_verts: Vec<Vertex>,

    stamp: Vec<u32>,
    stamp_now: u32,
    bufs: Vec<Vec<u32>>,

    found: Option<Vec<u32>>,
    marks: Vec<bool>,
    all: bool,
}

impl<'a> Dfs<'a> {
    fn new(
        g: &'a Hypergraph,
        inc: &'a Incidence,
        spec: ConfigSpec,
        mode: Mode,
        required: &[usize],
    ) -> Self {
        let r = g.uniformity();
        let m = g.len();
        let mut req_mask = vec![false; if required.is_empty() { 0 } else { m }];
        for &e in required {
            req_mask[e] = true;
        }
        Dfs {
            g,
            inc,
            r,
            s: spec.s,
            k: spec.k,
            need: (spec.k * r) as i64 - spec.s as i64,
            exmax: (0..=spec.k).map(|j| max_excess(r, j)).collect(),
            mode,
            required: req_mask,
            required_total: required.len(),
            required_hit: 0,
            chosen: Vec::with_capacity(spec.k),
            in_chosen: vec![false; m],
            vcount: vec![0; g.vertex_count()],
            piece_of: vec![0; g.vertex_count()],
            span: 0,
            piece: 0,
            piece_root: 0,
            open_edges: 0,
            open_excess: 0,
            closed_excess: 0,
            open_verts: Vec::new(),
            stamp: vec![0; m],
            stamp_now: 0,
            bufs: Vec::new(),
            found: None,
            marks: if mode == Mode::Collect {
                vec![false; m]
            } else {
                Vec::new()
            },
            all: false,
        }
    }

    fn run(&mut self) {
        self.dfs();
    }

    /// Best excess any completion of the current state can reach.
    fn excess_bound(&self) -> i64 {
        let q = self.k - self.chosen.len();
        let r = self.r as i64;
        let best = (0..=q)
            .map(|qo| {
                let open = self.exmax[self.open_edges + qo].min(self.open_excess + qo as i64 * r);
                open + self.exmax[q - qo]
            })
            .max()
            .unwrap_or(0);
        self.closed_excess + best
    }

    /// Returns true to stop the whole search.
    fn dfs(&mut self) -> bool {
        if self.excess_bound() < self.need {
            return false;
        }
        let m = self.chosen.len();
        if m + (self.required_total - self.required_hit) > self.k {
            return false;
        }
        if self.open_edges != 1 && self.closed_excess + self.open_excess >= self.need {
            match self.mode {
                Mode::Find => {
                    self.found = Some(self.chosen.clone());
                    return true;
                }
                Mode::Collect => {
                    if m < self.k {
                        self.all = true;
                        return true;
                    }
                    for &e in &self.chosen {
                        self.marks[e as usize] = true;
                    }
                    return false;
                }
            }
        }
        if m == self.k {
            return false;
        }

        if self.open_edges >= 1 {
            let mut buf = self.bufs.pop().unwrap_or_default();
            self.extension_candidates(&mut buf);
            for &f in &buf {
                if self.extend(f as usize) {
                    self.bufs.push(buf);
                    return true;
                }
            }
            buf.clear();
            self.bufs.push(buf);
        }

        let q = self.k - m;
        if self.open_edges != 1
            && q >= 2
            && self.s >= self.span + self.r
            && self.closed_excess + self.open_excess + self.exmax[q] >= self.need
        {
            let start = if self.open_edges == 0 { 0 } else { self.piece_root + 1 };
            for f in start..self.g.len() {
                if self.in_chosen[f] || self.g.edge(f).iter().any(|&v| self.vcount[v as usize] > 0)
                {
                    continue;
                }
                if self.start_piece(f) {
                    return true;
                }
            }
        }
        false
    }

    fn extension_candidates(&mut self, buf: &mut Vec<u32>) {
        buf.clear();
        let budget = self.s as i64 - self.span as i64;
        let min_overlap = (self.r as i64 - budget).max(1);
        if min_overlap > self.r as i64 {
            return;
        }
        let min_overlap = min_overlap as usize;
        self.stamp_now = self.stamp_now.wrapping_add(1);
        if self.stamp_now == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.stamp_now = 1;
        }
        let lo = self.piece_root as u32 + 1;
        if min_overlap >= 2 {
            for i in 0..self.open_verts.len() {
                for j in i + 1..self.open_verts.len() {
                    let list = self.inc.at_pair(self.open_verts[i], self.open_verts[j]);
                    let from = list.partition_point(|&f| f < lo);
                    for &f in &list[from..] {
                        self.consider(f, min_overlap, buf);
                    }
                }
            }
        } else {
            for i in 0..self.open_verts.len() {
                let list = self.inc.at_vertex(self.open_verts[i]);
                let from = list.partition_point(|&f| f < lo);
                for &f in &list[from..] {
                    self.consider(f, min_overlap, buf);
                }
            }
        }
    }

    #[inline]
    fn consider(&mut self, f: u32, min_overlap: usize, buf: &mut Vec<u32>) {
        let fi = f as usize;
        if self.stamp[fi] == self.stamp_now {
            return;
        }
        self.stamp[fi] = self.stamp_now;
        if self.in_chosen[fi] {
            return;
        }
        let mut overlap = 0;
        for &v in self.g.edge(fi) {
            if self.vcount[v as usize] > 0 {
                if self.piece_of[v as usize] != self.piece {
                    return;
                }
                overlap += 1;
            }
        }
        if overlap >= min_overlap {
            buf.push(f);
        }
    }

    fn add_edge(&mut self, f: usize) -> usize {
        let mut added = 0;
        for &v in self.g.edge(f) {
            let vi = v as usize;
            if self.vcount[vi] == 0 {
                self.piece_of[vi] = self.piece;
                self.open_verts.push(v);
                added += 1;
            }
            self.vcount[vi] += 1;
        }
        self.span += added;
        self.chosen.push(f as u32);
        self.in_chosen[f] = true;
        if !self.required.is_empty() && self.required[f] {
            self.required_hit += 1;
        }
        added
    }

    fn remove_last(&mut self) {
        let f = self.chosen.pop().expect("nothing chosen") as usize;
        self.in_chosen[f] = false;
        if !self.required.is_empty() && self.required[f] {
            self.required_hit -= 1;
        }
        for &v in self.g.edge(f) {
            let vi = v as usize;
            self.vcount[vi] -= 1;
            if self.vcount[vi] == 0 {
                self.piece_of[vi] = 0;
                self.span -= 1;
            }
        }
    }

    fn extend(&mut self, f: usize) -> bool {
        let saved = self.open_verts.len();
        let added = self.add_edge(f);
        let gain = (self.r - added) as i64;
        self.open_edges += 1;
        self.open_excess += gain;
        let stop = self.dfs();
        self.open_edges -= 1;
        self.open_excess -= gain;
        self.remove_last();
        self.open_verts.truncate(saved);
        stop
    }

    fn start_piece(&mut self, f: usize) -> bool {
        let saved_verts = std::mem::take(&mut self.open_verts);
        let saved = (
            self.piece,
            self.piece_root,
            self.open_edges,
            self.open_excess,
            self.closed_excess,
        );
        self.closed_excess += self.open_excess;
        self.piece += 1;
        self.piece_root = f;
        self.open_edges = 1;
        self.open_excess = 0;
        self.add_edge(f);
        let stop = self.dfs();
        self.remove_last();
        self.open_verts = saved_verts;
        (
            self.piece,
            self.piece_root,
            self.open_edges,
            self.open_excess,
            self.closed_excess,
        ) = saved;
        stop
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercore::fixtures::{diamond, fano, pasch};
    use itertools::Itertools;
    use proptest::prelude::*;

    /// Reference: every k-subset of edges, span computed directly.
    fn naive(g: &Hypergraph, spec: ConfigSpec, required: &[usize]) -> bool {
        (0..g.len()).combinations(spec.k).any(|ids| {
            required.iter().all(|r| ids.contains(r)) && g.span_of(&ids).len() <= spec.s
        })
    }

    fn naive_marks(g: &Hypergraph, spec: ConfigSpec) -> Vec<bool> {
        let mut marks = vec![false; g.len()];
        for ids in (0..g.len()).combinations(spec.k) {
            if g.span_of(&ids).len() <= spec.s {
                for i in ids {
                    marks[i] = true;
                }
            }
        }
        marks
    }

    #[test]
    fn max_excess_values() {
        assert_eq!(max_excess(3, 1), 0);
        assert_eq!(max_excess(3, 2), 2);
        assert_eq!(max_excess(3, 3), 5);
        assert_eq!(max_excess(3, 4), 8);
        assert_eq!(max_excess(3, 5), 10);
        assert_eq!(max_excess(4, 2), 3);
    }

    #[test]
    fn disconnected_configurations_are_found() {
        // two 4-edges sharing 3 vertices, twice, on disjoint vertex sets:
        // 4 edges on 10 vertices, no connected (10,4) piece
        let g = Hypergraph::new(
            4,
            10,
            [[0, 1, 2, 3], [0, 1, 2, 4], [5, 6, 7, 8], [5, 6, 7, 9]],
        )
        .unwrap();
        let w = find_in(&g, 10, 4);
        assert_eq!(w.unwrap().span_size, 10);
        assert!(find_in(&g, 9, 4).is_none());
    }

    fn find_in(g: &Hypergraph, s: usize, k: usize) -> Option<ConfigurationWitness> {
        ConfigSearch::new(g)
            .find(ConfigSpec::new(s, k).unwrap(), &[])
            .unwrap()
    }

    #[test]
    fn padding_with_arbitrary_edges() {
        // a dense pair plus a far edge: (2r - 3 + r, 3) holds via padding
        let g = Hypergraph::new(3, 9, [[0, 1, 2], [0, 1, 3], [6, 7, 8]]).unwrap();
        let w = find_in(&g, 7, 3).unwrap();
        assert_eq!(w.edge_indices, vec![0, 1, 2]);
        let marks = ConfigSearch::new(&g)
            .edges_in_configurations(ConfigSpec::new(7, 3).unwrap())
            .unwrap();
        assert_eq!(marks, vec![true; 3]);
    }

    #[test]
    fn collect_on_fixtures() {
        let p = pasch();
        let marks = ConfigSearch::new(&p)
            .edges_in_configurations(ConfigSpec::new(6, 4).unwrap())
            .unwrap();
        assert_eq!(marks, vec![true; 4]);
        let d = diamond(3, 2);
        let marks = ConfigSearch::new(&d)
            .edges_in_configurations(ConfigSpec::new(3, 2).unwrap())
            .unwrap();
        assert_eq!(marks, vec![false; 2]);
        let f = fano();
        assert!(find_in(&f, 4, 2).is_none());
        assert!(find_in(&f, 6, 4).is_some());
    }

    fn arb_graph() -> impl Strategy<Value = (Hypergraph, usize, usize)> {
        (2usize..=4, 4usize..=9).prop_flat_map(|(r, n)| {
            let r = r.min(n);
            let all: Vec<Vec<u32>> = (0..n as u32).combinations(r).collect();
            let total = all.len();
            (
                proptest::sample::subsequence(all, 0..=total.min(12)),
                1usize..=3 * r + 2,
                2usize..=4,
            )
                .prop_map(move |(edges, s, k)| {
                    (Hypergraph::new(r, n, edges).unwrap(), s.max(r), k)
                })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(400))]

        #[test]
        fn agrees_with_enumeration((g, s, k) in arb_graph()) {
            let spec = ConfigSpec::new(s, k).unwrap();
            let search = ConfigSearch::new(&g);
            let got = search.find(spec, &[]).unwrap();
            prop_assert_eq!(got.is_some(), naive(&g, spec, &[]));
            if let Some(w) = got {
                prop_assert_eq!(w.edge_indices.len(), k);
                prop_assert!(w.span_size <= s);
                prop_assert_eq!(&w.span, &g.span_of(&w.edge_indices));
            }
            prop_assert_eq!(search.edges_in_configurations(spec).unwrap(), naive_marks(&g, spec));
        }

        #[test]
        fn required_edges_respected((g, s, k) in arb_graph(), pick in proptest::collection::vec(0usize..12, 0..3)) {
            let spec = ConfigSpec::new(s, k).unwrap();
            let req: Vec<usize> = pick.into_iter().filter(|&i| i < g.len()).unique().collect();
            let search = ConfigSearch::new(&g);
            let got = search.find(spec, &req).unwrap();
            prop_assert_eq!(got.is_some(), naive(&g, spec, &req));
            if let Some(w) = &got {
                prop_assert!(req.iter().all(|r| w.edge_indices.contains(r)));
                prop_assert!(w.span_size <= s);
            }
            // monotone in the required set
            if search.find(spec, &[]).unwrap().is_none() {
                prop_assert!(got.is_none());
            }
        }
    }
}
