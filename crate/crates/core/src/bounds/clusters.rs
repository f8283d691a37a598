//! Tight components, diamond claims and the resulting clusters.

use itertools::Itertools;
use petgraph::unionfind::UnionFind;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial, ratio, serde_rational, Rational};
use crate::error::{Error, Result};
use crate::hypercore::{intersection_size, is_subset, ConfigurationWitness, Hypergraph, Vertex};

use super::clean::check_t;

type TSet = Box<[Vertex]>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClusterKind {
    TightTwo,
    TightThreeCommonApex,
    TightThreeNoApex,
    /// One edge plus this many diamonds, each claiming its own t-subset of
    /// the edge.
    EdgeWithDiamonds(usize),
}

impl ClusterKind {
    pub fn edge_count(&self) -> usize {
        match self {
            ClusterKind::TightTwo => 2,
            ClusterKind::TightThreeCommonApex | ClusterKind::TightThreeNoApex => 3,
            ClusterKind::EdgeWithDiamonds(i) => 2 * i + 1,
        }
    }

    /// Covered plus claimed t-sets for a cluster of this kind.
    pub fn closed_form(&self, r: usize, t: usize) -> u128 {
        let (r, t) = (r as u64, t as u64);
        let one = binomial(r, t);
        let two = binomial(2 * r - t, t);
        match *self {
            ClusterKind::TightTwo => two,
            ClusterKind::TightThreeCommonApex => 3 * two - 3 * one + 1,
            ClusterKind::TightThreeNoApex => 2 * two - one,
            ClusterKind::EdgeWithDiamonds(i) => one + i as u128 * (two - 1),
        }
    }

    pub fn label(&self) -> String {
        match self {
            ClusterKind::TightTwo => "tight-two".into(),
            ClusterKind::TightThreeCommonApex => "tight-three-apex".into(),
            ClusterKind::TightThreeNoApex => "tight-three".into(),
            ClusterKind::EdgeWithDiamonds(i) => format!("edge+{i}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cluster {
    /// Edge ids, ascending.
    pub edges: Vec<usize>,
    pub kind: ClusterKind,
    pub covered_or_claimed: u128,
    #[serde(with = "serde_rational")]
    pub ratio: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterDecomposition {
    /// Ordered by smallest edge id.
    pub clusters: Vec<Cluster>,
    pub covered_index: FxHashMap<TSet, usize>,
    pub claimed_index: FxHashMap<TSet, usize>,
}

impl ClusterDecomposition {
    pub fn histogram(&self) -> Vec<(ClusterKind, usize)> {
        self.clusters.iter().map(|c| c.kind).counts().into_iter().sorted().collect()
    }

    pub fn max_ratio(&self) -> Option<Rational> {
        self.clusters.iter().map(|c| c.ratio.clone()).max()
    }

    /// Checks that no t-set is covered or claimed by two clusters.
    pub fn check_disjoint(&self) -> Result<()> {
        for (s, &c) in &self.claimed_index {
            if let Some(&d) = self.covered_index.get(s) {
                if d != c {
                    return Err(Error::Internal {
                        message: format!("t-set {s:?} claimed by cluster {c} and covered by cluster {d}"),
                        witness: None,
                    });
                }
            }
        }
        Ok(())
    }
}

fn t_subsets(vs: &[Vertex], t: usize) -> impl Iterator<Item = TSet> + '_ {
    vs.iter().copied().combinations(t).map(Vec::into_boxed_slice)
}

fn union_sorted(a: &[Vertex], b: &[Vertex]) -> Vec<Vertex> {
    a.iter().copied().merge(b.iter().copied()).dedup().collect()
}

/// Pairs of edges sharing exactly `t` vertices, found through shared
/// t-subsets. Larger intersections are a precondition breach.
fn diamonds(g: &Hypergraph, t: usize) -> Result<Vec<(usize, usize)>> {
    let mut by_tset: FxHashMap<TSet, Vec<usize>> = FxHashMap::default();
    for (i, e) in g.edges().enumerate() {
        for s in t_subsets(e, t) {
            by_tset.entry(s).or_default().push(i);
        }
    }
    let mut pairs = Vec::new();
    for ids in by_tset.values() {
        for (a, b) in ids.iter().copied().tuple_combinations() {
            let shared = intersection_size(g.edge(a), g.edge(b));
            if shared > t {
                return Err(Error::Internal {
                    message: format!("edges {a} and {b} share {shared} > t vertices"),
                    witness: Some(ConfigurationWitness::from_edges(g, vec![a, b])),
                });
            }
            pairs.push((a.min(b), a.max(b)));
        }
    }
    pairs.sort_unstable();
    pairs.dedup();
    Ok(pairs)
}

/// Classes of the closure of "shares exactly `t` vertices". Each class has
/// at most three edges on a cleaned `(4r-3t, 4)`-free graph; a larger one
/// is reported with a four-edge witness.
pub fn tight_components(g: &Hypergraph, t: usize) -> Result<Vec<Vec<usize>>> {
    check_t(g.uniformity(), t)?;
    let pairs = diamonds(g, t)?;
    let mut uf = UnionFind::<usize>::new(g.len());
    for &(a, b) in &pairs {
        uf.union(a, b);
    }
    let comps = group(&mut uf, g.len());
    for c in &comps {
        if c.len() >= 4 {
            // grow a connected 4-subset along tight pairs
            let mut chosen = vec![c[0]];
            while chosen.len() < 4 {
                let next = pairs
                    .iter()
                    .find_map(|&(a, b)| match (chosen.contains(&a), chosen.contains(&b)) {
                        (true, false) => Some(b),
                        (false, true) => Some(a),
                        _ => None,
                    })
                    .expect("component is connected");
                chosen.push(next);
            }
            return Err(Error::Precondition {
                message: format!("tight component with {} edges", c.len()),
                witness: Some(ConfigurationWitness::from_edges(g, chosen)),
            });
        }
    }
    Ok(comps)
}

fn group(uf: &mut UnionFind<usize>, m: usize) -> Vec<Vec<usize>> {
    let mut by_root: FxHashMap<usize, Vec<usize>> = FxHashMap::default();
    for i in 0..m {
        by_root.entry(uf.find_mut(i)).or_default().push(i);
    }
    let mut out: Vec<Vec<usize>> = by_root.into_values().collect();
    out.sort_unstable_by_key(|c| c[0]);
    out
}

/// Diamonds inside one component.
fn component_diamonds(g: &Hypergraph, comp: &[usize], t: usize) -> Vec<(usize, usize)> {
    comp.iter()
        .copied()
        .tuple_combinations()
        .filter(|&(a, b)| intersection_size(g.edge(a), g.edge(b)) == t)
        .collect()
}

/// t-sets claimed by the diamond `{a, b}`.
fn claimed_by(g: &Hypergraph, a: usize, b: usize, t: usize) -> Vec<TSet> {
    let (ea, eb) = (g.edge(a), g.edge(b));
    t_subsets(&union_sorted(ea, eb), t)
        .filter(|s| !is_subset(s, ea) && !is_subset(s, eb))
        .collect()
}

/// Merges components whenever one claims a t-set covered by an edge of
/// another, then classifies and counts every cluster. The partition is the
/// finest one closed under these merges, so it does not depend on the
/// order of `components`.
pub fn merge_clusters(g: &Hypergraph, components: &[Vec<usize>], t: usize) -> Result<ClusterDecomposition> {
    let r = g.uniformity();
    check_t(r, t)?;
    let mut comp_of = vec![usize::MAX; g.len()];
    for (ci, c) in components.iter().enumerate() {
        for &e in c {
            comp_of[e] = ci;
        }
    }
    if comp_of.contains(&usize::MAX) {
        return Err(Error::Param("components do not cover every edge".into()));
    }
    let mut covered_by: FxHashMap<TSet, Vec<usize>> = FxHashMap::default();
    for (i, e) in g.edges().enumerate() {
        for s in t_subsets(e, t) {
            covered_by.entry(s).or_default().push(i);
        }
    }
    let mut uf = UnionFind::<usize>::new(components.len());
    for (ci, c) in components.iter().enumerate() {
        for (a, b) in component_diamonds(g, c, t) {
            for s in claimed_by(g, a, b, t) {
                for &e in covered_by.get(&s).map(Vec::as_slice).unwrap_or(&[]) {
                    uf.union(ci, comp_of[e]);
                }
            }
        }
    }

    let mut members: FxHashMap<usize, Vec<usize>> = FxHashMap::default();
    for ci in 0..components.len() {
        members.entry(uf.find_mut(ci)).or_default().push(ci);
    }
    let mut groups: Vec<Vec<usize>> = members.into_values().collect();
    for grp in &mut groups {
        grp.sort_unstable_by_key(|&ci| components[ci].iter().min().copied());
    }
    groups.sort_unstable_by_key(|grp| components[grp[0]].iter().min().copied());

    let mut clusters = Vec::with_capacity(groups.len());
    let mut covered_index = FxHashMap::default();
    let mut claimed_index = FxHashMap::default();
    for (id, grp) in groups.iter().enumerate() {
        let comps: Vec<&[usize]> = grp.iter().map(|&ci| components[ci].as_slice()).collect();
        let kind = classify(g, &comps, t)?;
        let mut edges: Vec<usize> = comps.iter().flat_map(|c| c.iter().copied()).collect();
        edges.sort_unstable();
        let cluster_diamonds: Vec<(usize, usize)> = comps.iter().flat_map(|c| component_diamonds(g, c, t)).collect();
        for &e in &edges {
            for s in t_subsets(g.edge(e), t) {
                index_into(&mut covered_index, s, id, "covered")?;
            }
        }
        for &(a, b) in &cluster_diamonds {
            for s in claimed_by(g, a, b, t) {
                index_into(&mut claimed_index, s, id, "claimed")?;
            }
        }
        let count = count_claims(g, &edges, &cluster_diamonds, t);
        clusters.push(Cluster {
            ratio: ratio(edges.len() as u64, count),
            edges,
            kind,
            covered_or_claimed: count,
        });
    }
    let dec = ClusterDecomposition {
        clusters,
        covered_index,
        claimed_index,
    };
    dec.check_disjoint()?;
    Ok(dec)
}

fn index_into(index: &mut FxHashMap<TSet, usize>, s: TSet, id: usize, what: &str) -> Result<()> {
    match index.insert(s.clone(), id) {
        Some(prev) if prev != id => Err(Error::Internal {
            message: format!("t-set {s:?} {what} by clusters {prev} and {id}"),
            witness: None,
        }),
        _ => Ok(()),
    }
}

fn classify(g: &Hypergraph, comps: &[&[usize]], t: usize) -> Result<ClusterKind> {
    let dump = || {
        let edges: Vec<Vec<Vertex>> = comps.iter().flat_map(|c| c.iter().map(|&e| g.edge(e).to_vec())).collect();
        Error::Internal {
            message: format!("cluster matches no known shape: {edges:?}"),
            witness: None,
        }
    };
    if let [c] = comps {
        return match c.len() {
            1 => Ok(ClusterKind::EdgeWithDiamonds(0)),
            2 => Ok(ClusterKind::TightTwo),
            3 => {
                let common = g
                    .edge(c[0])
                    .iter()
                    .filter(|v| g.edge(c[1]).contains(v) && g.edge(c[2]).contains(v))
                    .count();
                Ok(if common == t {
                    ClusterKind::TightThreeCommonApex
                } else {
                    ClusterKind::TightThreeNoApex
                })
            }
            _ => Err(dump()),
        };
    }
    // one single edge and diamonds claiming distinct t-subsets of it
    let singles: Vec<usize> = comps.iter().filter(|c| c.len() == 1).map(|c| c[0]).collect();
    let [base] = singles[..] else {
        return Err(dump());
    };
    let base_edge = g.edge(base);
    let mut seen: Vec<TSet> = Vec::new();
    for c in comps.iter().filter(|c| c.len() != 1) {
        let [a, b] = c[..] else {
            return Err(dump());
        };
        let on_base: Vec<TSet> = claimed_by(g, a, b, t)
            .into_iter()
            .filter(|s| is_subset(s, base_edge))
            .collect();
        if on_base.len() != 1 || seen.contains(&on_base[0]) {
            return Err(dump());
        }
        seen.push(on_base[0].clone());
    }
    Ok(ClusterKind::EdgeWithDiamonds(seen.len()))
}

/// Counts t-subsets of the span that are covered by an edge or claimed by
/// a diamond, by enumeration.
fn count_claims(g: &Hypergraph, edges: &[usize], diamonds: &[(usize, usize)], t: usize) -> u128 {
    let span = g.span_of(edges);
    let unions: Vec<Vec<Vertex>> = diamonds
        .iter()
        .map(|&(a, b)| union_sorted(g.edge(a), g.edge(b)))
        .collect();
    t_subsets(&span, t)
        .filter(|s| {
            edges.iter().any(|&e| is_subset(s, g.edge(e)))
                || diamonds.iter().zip(&unions).any(|(&(a, b), u)| {
                    is_subset(s, u) && !is_subset(s, g.edge(a)) && !is_subset(s, g.edge(b))
                })
        })
        .count() as u128
}

/// Enumerated count for one cluster of `g`.
pub fn count_covered_claimed(g: &Hypergraph, cluster: &Cluster, t: usize) -> u128 {
    let diamonds = component_diamonds(g, &cluster.edges, t);
    count_claims(g, &cluster.edges, &diamonds, t)
}

/// Largest edges-to-t-sets ratio over every cluster shape, by direct
/// maximization.
pub fn max_ratio(r: usize, t: usize) -> Result<Rational> {
    check_t(r, t)?;
    let shapes = [
        ClusterKind::TightTwo,
        ClusterKind::TightThreeCommonApex,
        ClusterKind::TightThreeNoApex,
    ]
    .into_iter()
    .chain((0..=binomial(r as u64, t as u64) as usize).map(ClusterKind::EdgeWithDiamonds));
    let best = shapes
        .map(|k| ratio(k.edge_count() as u64, k.closed_form(r, t)))
        .max()
        .expect("at least one shape");
    let expected = if (r, t) == (3, 2) {
        ratio(7, 18)
    } else {
        ratio(1, binomial(r as u64, t as u64))
    };
    debug_assert_eq!(best, expected);
    Ok(best)
}
