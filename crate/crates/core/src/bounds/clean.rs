//! Cleaning: delete the edges of the two small dense configuration types.

use crate::error::{Error, Result};
use crate::hypercore::{is_free, ConfigSearch, ConfigSpec, Hypergraph};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CleanReport {
    pub input: Hypergraph,
    pub output: Hypergraph,
    /// Edges deleted for lying in a `(3r-2t-1, 3)`-configuration.
    pub removed_33: usize,
    /// Edges deleted afterwards for lying in a `(2r-t-1, 2)`-configuration.
    pub removed_22: usize,
}

impl CleanReport {
    pub fn removed(&self) -> usize {
        self.removed_33 + self.removed_22
    }
}

pub fn four_edge_spec(r: usize, t: usize) -> ConfigSpec {
    ConfigSpec {
        s: 4 * r - 3 * t,
        k: 4,
    }
}

pub fn three_edge_spec(r: usize, t: usize) -> ConfigSpec {
    ConfigSpec {
        s: 3 * r - 2 * t - 1,
        k: 3,
    }
}

pub fn two_edge_spec(r: usize, t: usize) -> ConfigSpec {
    ConfigSpec {
        s: 2 * r - t - 1,
        k: 2,
    }
}

pub(super) fn check_t(r: usize, t: usize) -> Result<()> {
    if t < 2 || t >= r {
        return Err(Error::Param(format!("need 2 <= t < r, got r = {r}, t = {t}")));
    }
    Ok(())
}

/// Deletes every edge that lies in some `spec`-configuration. One pass
/// suffices: a configuration of the result would already have been one of
/// the input, and all its edges were deleted.
pub(super) fn delete_configurations(g: &Hypergraph, spec: ConfigSpec) -> Result<(Hypergraph, usize)> {
    if g.len() < spec.k {
        return Ok((g.clone(), 0));
    }
    let marked = ConfigSearch::new(g).edges_in_configurations(spec)?;
    let removed = marked.iter().filter(|&&m| m).count();
    Ok((g.filter_edges(|i| !marked[i]), removed))
}

/// Requires `(4r-3t, 4)`-freeness and reports a witness otherwise.
pub fn clean(g: &Hypergraph, t: usize) -> Result<CleanReport> {
    let r = g.uniformity();
    check_t(r, t)?;
    if let Some(v) = is_free(g, &[four_edge_spec(r, t)])? {
        return Err(Error::Precondition {
            message: format!("input contains a {} configuration", v.spec),
            witness: Some(v.witness),
        });
    }
    let (mid, removed_33) = delete_configurations(g, three_edge_spec(r, t))?;
    let (output, removed_22) = delete_configurations(&mid, two_edge_spec(r, t))?;
    if let Some(v) = is_free(&output, &[three_edge_spec(r, t), two_edge_spec(r, t)])? {
        return Err(Error::Internal {
            message: format!("cleaned graph still contains a {} configuration", v.spec),
            witness: Some(v.witness),
        });
    }
    Ok(CleanReport {
        input: g.clone(),
        output,
        removed_33,
        removed_22,
    })
}
