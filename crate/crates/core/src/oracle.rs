//! Exact `f^{(r)}(n; s, k)` for tiny `n` by branch and bound.
//!
//! Edges are `u64` vertex masks and freeness is checked here directly, so
//! the oracle shares no search code with [`crate::hypercore`].

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::bounds::certified_upper_bound;
use crate::combinatorics::{binomial, render};
use crate::error::{Error, Result};
use crate::hypercore::{ConfigSpec, Hypergraph, Vertex};

/// Largest candidate edge count searched without `force`.
pub const CANDIDATE_GUARD: u128 = 60;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OracleOptions {
    /// Lift the candidate guard.
    pub force: bool,
    /// Only search graphs containing the edge `{0, .., r-1}`. Any nonempty
    /// graph is isomorphic to one that does, so the optimum is unchanged.
    pub pin_first_edge: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleResult {
    pub n: usize,
    pub r: usize,
    pub specs: Vec<ConfigSpec>,
    pub optimum: usize,
    #[serde(skip, default = "empty_witness")]
    pub witness: Option<Hypergraph>,
    pub witness_edges: Vec<Vec<Vertex>>,
    pub nodes_explored: u64,
}

fn empty_witness() -> Option<Hypergraph> {
    None
}

impl OracleResult {
    pub fn witness(&self) -> Hypergraph {
        self.witness
            .clone()
            .unwrap_or_else(|| Hypergraph::new(self.r, self.n, self.witness_edges.clone()).expect("valid witness"))
    }
}

/// Would adding `new` to `chosen` create an `(s, k)`-configuration?
fn closes_configuration(chosen: &[u64], new: u64, spec: ConfigSpec) -> bool {
    fn rec(chosen: &[u64], from: usize, need: usize, span: u64, s: u32) -> bool {
        if need == 0 {
            return true;
        }
        (from..chosen.len()).any(|i| {
            let u = span | chosen[i];
            u.count_ones() <= s && chosen.len() - i >= need && rec(chosen, i + 1, need - 1, u, s)
        })
    }
    chosen.len() + 1 >= spec.k && rec(chosen, 0, spec.k - 1, new, spec.s as u32)
}

fn compatible(chosen: &[u64], new: u64, specs: &[ConfigSpec]) -> bool {
    specs.iter().all(|&sp| !closes_configuration(chosen, new, sp))
}

/// Degree cap on t-sets implied by a spec: `k` edges through one t-set span
/// at most `k(r-t)+t` vertices, so for the smallest `t` with
/// `k(r-t)+t <= s` every t-set lies in at most `k-1` edges.
fn degree_cap(r: usize, spec: ConfigSpec) -> Option<usize> {
    let (k, s) = (spec.k, spec.s);
    (0..r).find(|&t| k * (r - t) + t <= s)
}

struct Search<'a> {
    r: usize,
    specs: &'a [ConfigSpec],
    cands: Vec<u64>,
    /// For each capped spec: t and the t-subsets of every candidate.
    caps: Vec<(usize, usize, Vec<Vec<usize>>)>,
    load: Vec<Vec<usize>>,
    chosen: Vec<u64>,
    best: Vec<u64>,
    global_cap: usize,
    nodes: u64,
}

impl Search<'_> {
    fn capacity_bound(&self) -> usize {
        let mut bound = usize::MAX;
        for (ci, (t, limit, _)) in self.caps.iter().enumerate() {
            let per_edge = binomial(self.r as u64, *t as u64) as usize;
            let residual: usize = self.load[ci].iter().map(|&l| limit - l).sum();
            bound = bound.min(self.chosen.len() + residual / per_edge);
        }
        bound
    }

    fn add_load(&mut self, cand: usize, delta: isize) {
        for (ci, (_, _, subsets)) in self.caps.iter().enumerate() {
            for &id in &subsets[cand] {
                self.load[ci][id] = (self.load[ci][id] as isize + delta) as usize;
            }
        }
    }

    fn fits_caps(&self, cand: usize) -> bool {
        self.caps
            .iter()
            .enumerate()
            .all(|(ci, (_, limit, subsets))| subsets[cand].iter().all(|&id| self.load[ci][id] < *limit))
    }

    /// `open` holds candidates, in canonical order, each individually
    /// addable to `chosen`.
    fn run(&mut self, open: &[usize]) {
        self.nodes += 1;
        if self.best.len() >= self.global_cap {
            return;
        }
        if self.chosen.len() > self.best.len() {
            self.best = self.chosen.clone();
        }
        if open.is_empty() {
            return;
        }
        let bound = (self.chosen.len() + open.len()).min(self.capacity_bound());
        if bound <= self.best.len() {
            return;
        }
        let (&first, rest) = open.split_first().expect("nonempty");
        // include first
        self.chosen.push(self.cands[first]);
        self.add_load(first, 1);
        let next: Vec<usize> = rest
            .iter()
            .copied()
            .filter(|&c| self.fits_caps(c) && compatible(&self.chosen, self.cands[c], self.specs))
            .collect();
        self.run(&next);
        self.add_load(first, -1);
        self.chosen.pop();
        // exclude first
        self.run(rest);
    }
}

/// Maximum edge count of an `r`-graph on `[n]` avoiding every spec.
pub fn exact_max(n: usize, r: usize, specs: &[ConfigSpec], opts: OracleOptions) -> Result<OracleResult> {
    if r == 0 || r > n {
        return Err(Error::Param(format!("need 1 <= r <= n, got r = {r}, n = {n}")));
    }
    if n > 64 {
        return Err(Error::Param(format!("n = {n} exceeds 64")));
    }
    for sp in specs {
        sp.validate_for(r)?;
    }
    let total = binomial(n as u64, r as u64);
    if total > CANDIDATE_GUARD && !opts.force {
        return Err(Error::Guard(format!(
            "C({n},{r}) = {total} candidate edges exceeds {CANDIDATE_GUARD}; pass force to search anyway"
        )));
    }
    let cands: Vec<u64> = (0..n)
        .combinations(r)
        .map(|e| e.iter().fold(0u64, |m, &v| m | 1 << v))
        .collect();

    let mut caps = Vec::new();
    let mut load = Vec::new();
    let mut global_cap = cands.len();
    for &sp in specs {
        let Some(t) = degree_cap(r, sp) else { continue };
        let limit = sp.k - 1;
        let mut ids = rustc_hash::FxHashMap::default();
        let subsets: Vec<Vec<usize>> = cands
            .iter()
            .map(|&e| {
                let vs: Vec<usize> = (0..n).filter(|&v| e >> v & 1 == 1).collect();
                vs.into_iter()
                    .combinations(t)
                    .map(|s| {
                        let key = s.iter().fold(0u64, |m, &v| m | 1 << v);
                        let next = ids.len();
                        *ids.entry(key).or_insert(next)
                    })
                    .collect()
            })
            .collect();
        let per_edge = binomial(r as u64, t as u64) as usize;
        global_cap = global_cap.min(limit * binomial(n as u64, t as u64) as usize / per_edge);
        load.push(vec![0usize; ids.len()]);
        caps.push((t, limit, subsets));
    }

    let mut search = Search {
        r,
        specs,
        cands,
        caps,
        load,
        chosen: Vec::new(),
        best: Vec::new(),
        global_cap,
        nodes: 0,
    };
    let all: Vec<usize> = (0..search.cands.len()).collect();
    if opts.pin_first_edge {
        // candidate 0 is {0, .., r-1}
        search.chosen.push(search.cands[0]);
        search.add_load(0, 1);
        let open: Vec<usize> = all[1..]
            .iter()
            .copied()
            .filter(|&c| search.fits_caps(c) && compatible(&search.chosen, search.cands[c], specs))
            .collect();
        search.run(&open);
    } else {
        search.run(&all);
    }

    let witness_edges: Vec<Vec<Vertex>> = search
        .best
        .iter()
        .map(|&m| (0..n as Vertex).filter(|&v| m >> v & 1 == 1).collect())
        .collect();
    let witness = Hypergraph::new(r, n, witness_edges.clone())?;
    Ok(OracleResult {
        n,
        r,
        specs: specs.to_vec(),
        optimum: witness.len(),
        witness: Some(witness),
        witness_edges,
        nodes_explored: search.nodes,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossCheck {
    pub n: usize,
    pub optimum: usize,
    pub packed_edges: usize,
    /// Certified bound on the oracle witness, as `p/q`.
    pub witness_bound: String,
}

/// Checks a packing against the exact optimum, and the upper-bound
/// pipeline against the optimum's witness. A violation is a soundness bug
/// and comes back as an internal error.
pub fn cross_check(n: usize, r: usize, t: usize, k: usize, packed: &Hypergraph, opts: OracleOptions) -> Result<CrossCheck> {
    if packed.uniformity() != r || packed.vertex_count() != n {
        return Err(Error::Param(format!(
            "packed graph is a {}-graph on {} vertices, expected r = {r}, n = {n}",
            packed.uniformity(),
            packed.vertex_count()
        )));
    }
    let spec = ConfigSpec::critical(r, t, k);
    let res = exact_max(n, r, &[spec], opts)?;
    if packed.len() > res.optimum {
        return Err(Error::Internal {
            message: format!("packing has {} edges, above the optimum {}", packed.len(), res.optimum),
            witness: None,
        });
    }
    let rep = certified_upper_bound(&res.witness(), t)?;
    if !rep.sound {
        return Err(Error::Internal {
            message: format!(
                "certified bound {} is below the witness size {}",
                render(&rep.bound),
                res.optimum
            ),
            witness: None,
        });
    }
    Ok(CrossCheck {
        n,
        optimum: res.optimum,
        packed_edges: packed.len(),
        witness_bound: render(&rep.bound),
    })
}
