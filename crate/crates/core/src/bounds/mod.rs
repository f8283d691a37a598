//! Upper bounds on `(k(r-t)+t, k)`-free graphs for `k <= 4`, and the table
//! of known limits.
//!
//! The pipeline cleans a `(4r-3t, 4)`-free graph of `(3r-2t-1, 3)`- and
//! `(2r-t-1, 2)`-configurations, splits the rest into t-tight components,
//! merges components along diamond claims and bounds each resulting cluster
//! by its ratio of edges to covered or claimed t-sets. Since no t-set is
//! covered or claimed twice, `|G| <= removed + max ratio * C(n, t)`.

mod clean;
mod clusters;
mod limits;

pub use clean::{clean, four_edge_spec, three_edge_spec, two_edge_spec, CleanReport};
pub use clusters::{
    count_covered_claimed, max_ratio, merge_clusters, tight_components, Cluster, ClusterDecomposition,
    ClusterKind,
};
pub use limits::{limit_table, LimitValue, Provenance};

use serde::Serialize;

use crate::combinatorics::{binomial, factorial, int, serde_rational, Rational};
use crate::error::Result;
use crate::hypercore::Hypergraph;

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub n: usize,
    pub r: usize,
    pub t: usize,
    pub edges: usize,
    /// Edges first deleted for lying in a `(4r-3t, 4)`-configuration; zero
    /// whenever the input is `(4r-3t, 4)`-free.
    pub removed_44: usize,
    pub removed_33: usize,
    pub removed_22: usize,
    pub clusters: usize,
    pub histogram: Vec<(String, usize)>,
    /// Largest cluster ratio in this graph; zero when nothing is left.
    #[serde(with = "serde_rational")]
    pub max_cluster_ratio: Rational,
    #[serde(with = "serde_rational")]
    pub bound: Rational,
    pub sound: bool,
    #[serde(skip)]
    pub cleaned: Hypergraph,
    #[serde(skip)]
    pub decomposition: ClusterDecomposition,
}

impl BoundReport {
    pub fn removed(&self) -> usize {
        self.removed_44 + self.removed_33 + self.removed_22
    }
}

/// `|G| <= removed + (max cluster ratio) * C(n, t)`, with the audit trail.
///
/// Inputs that are not `(4r-3t, 4)`-free first lose every edge of such a
/// configuration; the deleted edges are added to the bound, so it stays
/// valid for any `r`-graph.
pub fn certified_upper_bound(g: &Hypergraph, t: usize) -> Result<BoundReport> {
    let r = g.uniformity();
    clean::check_t(r, t)?;
    let (free, removed_44) = clean::delete_configurations(g, four_edge_spec(r, t))?;
    let cleaned = clean(&free, t)?;
    let comps = tight_components(&cleaned.output, t)?;
    let decomposition = merge_clusters(&cleaned.output, &comps, t)?;
    decomposition.check_disjoint()?;
    let max_cluster_ratio = decomposition.max_ratio().unwrap_or_else(|| int(0));
    let removed = removed_44 + cleaned.removed();
    let tsets = binomial(g.vertex_count() as u64, t as u64);
    let bound = int(removed as u64) + &max_cluster_ratio * int(tsets);
    Ok(BoundReport {
        n: g.vertex_count(),
        r,
        t,
        edges: g.len(),
        removed_44,
        removed_33: cleaned.removed_33,
        removed_22: cleaned.removed_22,
        clusters: decomposition.clusters.len(),
        histogram: decomposition
            .histogram()
            .into_iter()
            .map(|(k, c)| (k.label(), c))
            .collect(),
        sound: bound >= int(g.len() as u64),
        max_cluster_ratio,
        bound,
        cleaned: cleaned.output,
        decomposition,
    })
}

/// `C(2r-t, t) >= 2 C(r, t)`, equality exactly at `(r, t) = (3, 2)`.
pub fn diamond_inequality(r: usize, t: usize) -> (u128, u128) {
    (
        binomial((2 * r - t) as u64, t as u64),
        2 * binomial(r as u64, t as u64),
    )
}

/// The lower-bound constant a gadget certifies, times `t!`, compared with
/// the cluster ratio: they agree exactly when the gadget is optimal.
pub fn gadget_gap(gadget_bound: &Rational, r: usize, t: usize) -> Result<Rational> {
    let scaled = gadget_bound * int(factorial(t as u64));
    Ok(max_ratio(r, t)? - scaled)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::ratio;
    use crate::gadgets::builtin_t7;
    use crate::hypercore::fixtures::{diamond, pasch};
    use crate::hypercore::{find_configuration, Vertex};
    use itertools::Itertools;
    use rand::{seq::SliceRandom, Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn diamond_inequality_holds() {
        for r in 3..=40 {
            for t in 2..r {
                let (lhs, rhs) = diamond_inequality(r, t);
                assert!(lhs >= rhs, "r={r} t={t}");
                assert_eq!(lhs == rhs, (r, t) == (3, 2), "r={r} t={t}");
            }
        }
    }

    #[test]
    fn single_diamond_bound_is_tight() {
        let rep = certified_upper_bound(&diamond(3, 2), 2).unwrap();
        assert_eq!(rep.max_cluster_ratio, ratio(1, 3));
        assert_eq!(rep.bound, int(2));
        assert!(rep.sound);
    }

    #[test]
    fn empty_graph_bound_is_zero() {
        let rep = certified_upper_bound(&Hypergraph::empty(3, 10), 2).unwrap();
        assert_eq!(rep.bound, int(0));
        assert!(rep.sound);
    }

    #[test]
    fn t7_reaches_the_optimal_ratio() {
        let rep = certified_upper_bound(&builtin_t7().core, 2).unwrap();
        assert_eq!(rep.max_cluster_ratio, ratio(7, 18));
        assert_eq!(rep.removed(), 0);
        assert_eq!(gadget_gap(&builtin_t7().density_bound(), 3, 2).unwrap(), int(0));
    }

    #[test]
    fn pasch_is_pruned_first() {
        let rep = certified_upper_bound(&pasch(), 2).unwrap();
        assert_eq!(rep.removed_44, 4);
        assert!(rep.sound);
    }

    /// Random `(4r-3t, 4)`-free graph built by greedy insertion, then
    /// cleaned.
    pub(crate) fn random_cleaned(r: usize, t: usize, n: usize, tries: usize, rng: &mut ChaCha8Rng) -> Hypergraph {
        let spec = four_edge_spec(r, t);
        let mut g = Hypergraph::empty(r, n);
        for _ in 0..tries {
            let e: Vec<Vertex> = (0..n as Vertex).collect::<Vec<_>>().choose_multiple(rng, r).copied().collect();
            let Ok(h) = g.union(&Hypergraph::new(r, n, [e.clone()]).unwrap()) else {
                continue;
            };
            let idx = h.edge_index(&e.iter().copied().sorted().collect::<Vec<_>>()).unwrap();
            if find_configuration(&h, spec, &[idx]).unwrap().is_none() {
                g = h;
            }
        }
        clean(&g, t).unwrap().output
    }

    fn canonical(g: &Hypergraph, dec: &ClusterDecomposition) -> Vec<(ClusterKind, Vec<Vec<Vertex>>)> {
        dec.clusters
            .iter()
            .map(|c| (c.kind, c.edges.iter().map(|&e| g.edge(e).to_vec()).sorted().collect()))
            .sorted()
            .collect()
    }

    #[test]
    fn clusters_match_closed_forms_and_ignore_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for &(r, t) in &[(3, 2), (4, 2), (4, 3), (5, 3)] {
            for _ in 0..6 {
                let n = rng.gen_range(r + 3..=r + 8);
                let g = random_cleaned(r, t, n, 60, &mut rng);
                let comps = tight_components(&g, t).unwrap();
                let dec = merge_clusters(&g, &comps, t).unwrap();
                for c in &dec.clusters {
                    assert_eq!(c.covered_or_claimed, c.kind.closed_form(r, t));
                    assert_eq!(count_covered_claimed(&g, c, t), c.covered_or_claimed);
                    assert_eq!(c.edges.len(), c.kind.edge_count());
                }
                let base = canonical(&g, &dec);
                for _ in 0..5 {
                    let mut shuffled = comps.clone();
                    shuffled.shuffle(&mut rng);
                    let again = merge_clusters(&g, &shuffled, t).unwrap();
                    assert_eq!(canonical(&g, &again), base);
                }
            }
        }
    }

    #[test]
    fn bound_is_sound_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..10 {
            let g = random_cleaned(3, 2, 12, 80, &mut rng);
            let rep = certified_upper_bound(&g, 2).unwrap();
            assert!(rep.sound);
            assert!(rep.max_cluster_ratio <= max_ratio(3, 2).unwrap());
        }
    }
}
