use rustc_hash::FxHashMap;

use super::{Hypergraph, Vertex};

/// Vertex-to-edge and pair-to-edge lookup tables for one graph.
///
/// Both tables list edge ids in increasing order.
#[derive(Clone, Debug)]
pub struct Incidence {
    vertex_offsets: Vec<u32>,
    vertex_edges: Vec<u32>,
    pair_ranges: FxHashMap<u64, (u32, u32)>,
    pair_edges: Vec<u32>,
}

#[inline]
pub(crate) fn pair_key(a: Vertex, b: Vertex) -> u64 {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    (u64::from(a) << 32) | u64::from(b)
}

impl Incidence {
    pub fn new(g: &Hypergraph) -> Self {
        let n = g.vertex_count();
        let mut degree = vec![0u32; n + 1];
        for e in g.edges() {
            for &v in e {
                degree[v as usize + 1] += 1;
            }
        }
        for i in 0..n {
            degree[i + 1] += degree[i];
        }
        let vertex_offsets = degree;
        let mut fill = vertex_offsets.clone();
        let mut vertex_edges = vec![0u32; *vertex_offsets.last().unwrap_or(&0) as usize];
        for (id, e) in g.edges().enumerate() {
            for &v in e {
                vertex_edges[fill[v as usize] as usize] = id as u32;
                fill[v as usize] += 1;
            }
        }

        let mut keyed: Vec<(u64, u32)> = Vec::new();
        for (id, e) in g.edges().enumerate() {
            for (i, &a) in e.iter().enumerate() {
                for &b in &e[i + 1..] {
                    keyed.push((pair_key(a, b), id as u32));
                }
            }
        }
        keyed.sort_unstable();
        let mut pair_ranges = FxHashMap::default();
        pair_ranges.reserve(keyed.len());
        let mut start = 0;
        while start < keyed.len() {
            let key = keyed[start].0;
            let mut end = start + 1;
            while end < keyed.len() && keyed[end].0 == key {
                end += 1;
            }
            pair_ranges.insert(key, (start as u32, end as u32));
            start = end;
        }
        let pair_edges = keyed.into_iter().map(|(_, id)| id).collect();

        Incidence {
            vertex_offsets,
            vertex_edges,
            pair_ranges,
            pair_edges,
        }
    }

    /// Edges containing `v`.
    #[inline]
    pub fn at_vertex(&self, v: Vertex) -> &[u32] {
        let v = v as usize;
        &self.vertex_edges[self.vertex_offsets[v] as usize..self.vertex_offsets[v + 1] as usize]
    }

    /// Edges containing both `a` and `b`.
    #[inline]
    pub fn at_pair(&self, a: Vertex, b: Vertex) -> &[u32] {
        match self.pair_ranges.get(&pair_key(a, b)) {
            Some(&(s, e)) => &self.pair_edges[s as usize..e as usize],
            None => &[],
        }
    }
}
