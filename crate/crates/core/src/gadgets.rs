//! Packing gadgets: a small core r-graph with a supporting t-graph.
//!
//! A gadget `(F, J)` is packable for a given `k` when `F` avoids
//! `(k(r-t)+t, k)`-configurations, avoids the one-vertex-denser
//! `(l(r-t)+t-1, l)`-configurations for `2 <= l < k`, and its non-edge girth
//! exceeds `k/2`. Packing copies of `J` edge-disjointly into the complete
//! t-graph then yields density `|F| / (t! |J|)`.

use std::path::Path;

use itertools::Itertools;
use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial, factorial, ratio, serde_rational, Rational};
use crate::error::{Error, Result};
use crate::hypercore::{find_configuration, ConfigSpec, ConfigurationWitness, Hypergraph};

/// Vertex ids of the built-in seven-edge gadget.
pub mod t7 {
    pub const X1: u32 = 0;
    pub const X2: u32 = 1;
    pub const X3: u32 = 2;
    pub const A1: u32 = 3;
    pub const B1: u32 = 4;
    pub const A2: u32 = 5;
    pub const B2: u32 = 6;
    pub const A3: u32 = 7;
    pub const B3: u32 = 8;

    pub const NAMES: [&str; 9] = ["x1", "x2", "x3", "a1", "b1", "a2", "b2", "a3", "b3"];
}

/// Gadgets hold at most this many vertices (spans are `u128` masks).
pub const MAX_GADGET_VERTICES: usize = 128;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gadget {
    pub name: String,
    pub core: Hypergraph,
    pub t: usize,
    pub support: Hypergraph,
}

impl Gadget {
    /// Validates that `support` is a t-graph on the core's vertices that
    /// contains the core's t-shadow, with `2 <= t < r`.
    pub fn new(name: impl Into<String>, core: Hypergraph, support: Hypergraph) -> Result<Self> {
        let r = core.uniformity();
        let t = support.uniformity();
        if t < 2 || t >= r {
            return Err(Error::param(format!(
                "support order t = {t} must lie in [2, {}]",
                r.saturating_sub(1)
            )));
        }
        if core.vertex_count() != support.vertex_count() {
            return Err(Error::param(format!(
                "core has {} vertices but support has {}",
                core.vertex_count(),
                support.vertex_count()
            )));
        }
        if core.vertex_count() > MAX_GADGET_VERTICES {
            return Err(Error::param(format!(
                "gadgets are limited to {MAX_GADGET_VERTICES} vertices"
            )));
        }
        if core.is_empty() {
            return Err(Error::param("gadget core has no edges"));
        }
        let shadow = core.t_shadow(t)?;
        if let Some(missing) = shadow.edges().find(|s| !support.contains_edge(s)) {
            return Err(Error::param(format!(
                "support misses shadow {t}-set {missing:?}"
            )));
        }
        Ok(Gadget {
            name: name.into(),
            core,
            t,
            support,
        })
    }

    pub fn r(&self) -> usize {
        self.core.uniformity()
    }

    /// `m = |V(F)|`.
    pub fn m(&self) -> usize {
        self.core.vertex_count()
    }

    pub fn support_is_complete(&self) -> bool {
        self.support.len() as u128 == binomial(self.m() as u64, self.t as u64)
    }

    /// `|F| / (t! |J|)`.
    pub fn density_bound(&self) -> Rational {
        ratio(
            self.core.len() as u64,
            factorial(self.t as u64) * self.support.len() as u128,
        )
    }

    pub fn to_gadget_string(&self) -> String {
        format!("{}---\n{}", self.core.to_hg_string(), self.support.to_hg_string())
    }
}

pub fn builtin_t7() -> Gadget {
    use t7::*;
    let core = Hypergraph::new(
        3,
        9,
        [
            [X1, X2, X3],
            [A1, B1, X2],
            [A1, B1, X3],
            [A2, B2, X1],
            [A2, B2, X3],
            [A3, B3, X1],
            [A3, B3, X2],
        ],
    )
    .expect("static edge list");
    let support = core.t_shadow(2).expect("t = 2 <= r");
    Gadget::new("t7", core, support).expect("shadow supports its graph")
}

fn check_rt(r: usize, t: usize) -> Result<()> {
    if t < 2 || t >= r {
        return Err(Error::param(format!("need 2 <= t < r, got r = {r}, t = {t}")));
    }
    if 2 * r - t > MAX_GADGET_VERTICES {
        return Err(Error::param(format!("r = {r} too large for a gadget")));
    }
    Ok(())
}

/// Two r-edges sharing exactly t vertices, supported by their t-shadow.
pub fn builtin_double_edge(r: usize, t: usize) -> Result<Gadget> {
    check_rt(r, t)?;
    let core = crate::hypercore::fixtures::diamond(r, t);
    let support = core.t_shadow(t)?;
    Gadget::new("double-edge", core, support)
}

/// One r-edge with the complete t-graph on its vertices.
pub fn builtin_single_edge(r: usize, t: usize) -> Result<Gadget> {
    check_rt(r, t)?;
    let core = Hypergraph::new(r, r, [(0..r as u32).collect::<Vec<_>>()])?;
    let support = core.t_shadow(t)?;
    Gadget::new("single-edge", core, support)
}

/// Looks up a built-in gadget by name. `r` and `t` are ignored for `t7`.
pub fn builtin(name: &str, r: usize, t: usize) -> Result<Gadget> {
    match name {
        "t7" | "T7" | "T_7" => Ok(builtin_t7()),
        "double-edge" => builtin_double_edge(r, t),
        "single-edge" => builtin_single_edge(r, t),
        other => Err(Error::param(format!(
            "unknown built-in gadget {other:?} (expected t7, double-edge or single-edge)"
        ))),
    }
}

/// Parses a `.gadget` file: the core `.hg` block, a line `---`, then the
/// support `.hg` block.
pub fn parse_gadget(text: &str, name: &str) -> Result<Gadget> {
    let mut offset = 0;
    let mut split = None;
    for (i, line) in text.split_inclusive('\n').enumerate() {
        if line.trim_end_matches(['\n', '\r']) == "---" {
            split = Some((i, offset, offset + line.len()));
            break;
        }
        offset += line.len();
    }
    let Some((sep_line, core_end, support_start)) = split else {
        return Err(Error::Parse {
            line: text.lines().count().max(1),
            message: "missing \"---\" separator between core and support".into(),
        });
    };
    let core = crate::hypercore::format_parse_at(&text[..core_end], 1)?;
    let support = crate::hypercore::format_parse_at(&text[support_start..], sep_line + 2)?;
    Gadget::new(name, core, support)
}

pub fn read_gadget(path: impl AsRef<Path>) -> Result<Gadget> {
    let path = path.as_ref();
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "gadget".into());
    parse_gadget(&std::fs::read_to_string(path)?, &name)
}

/// Non-edge girth result.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Girth {
    Finite(usize),
    /// No witness with at most `cap` edges.
    ExceedsCap,
}

impl Girth {
    /// Whether the girth is strictly greater than `x / 2`.
    pub fn exceeds_half_of(&self, x: usize) -> bool {
        match *self {
            Girth::Finite(g) => 2 * g > x,
            Girth::ExceedsCap => true,
        }
    }
}

fn mask_of(e: &[u32]) -> u128 {
    e.iter().fold(0u128, |m, &v| m | (1u128 << v))
}

/// Smallest `g <= cap` such that some `g` edges of the core span at most
/// `g(r-t)+t` vertices and their span contains a t-set missing from the
/// support.
pub fn non_edge_girth(g: &Gadget, cap: usize) -> Girth {
    let (r, t) = (g.r(), g.t);
    let edges: Vec<u128> = g.core.edges().map(mask_of).collect();
    let support: FxHashSet<u128> = g.support.edges().map(mask_of).collect();
    let has_non_edge = |span: u128| {
        let vs: Vec<u32> = (0..128u32).filter(|&v| span >> v & 1 == 1).collect();
        vs.into_iter()
            .combinations(t)
            .any(|s| !support.contains(&mask_of(&s)))
    };
    for size in 1..=cap.min(edges.len()) {
        let limit = size * (r - t) + t;
        let mut found = false;
        subsets_within(&edges, size, limit, &mut |span| {
            found = has_non_edge(span);
            found
        });
        if found {
            return Girth::Finite(size);
        }
    }
    Girth::ExceedsCap
}

/// Calls `visit` with the span of every `size`-subset of `edges` whose span
/// has at most `limit` vertices, until `visit` returns true.
fn subsets_within(edges: &[u128], size: usize, limit: usize, visit: &mut dyn FnMut(u128) -> bool) {
    fn go(
        edges: &[u128],
        from: usize,
        left: usize,
        span: u128,
        limit: usize,
        visit: &mut dyn FnMut(u128) -> bool,
    ) -> bool {
        if span.count_ones() as usize > limit {
            return false;
        }
        if left == 0 {
            return visit(span);
        }
        for i in from..=edges.len() - left {
            if go(edges, i + 1, left - 1, span | edges[i], limit, visit) {
                return true;
            }
        }
        false
    }
    go(edges, 0, size, 0, limit, visit);
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreenessCheck {
    pub spec: ConfigSpec,
    pub free: bool,
    pub witness: Option<ConfigurationWitness>,
}

impl FreenessCheck {
    fn run(g: &Hypergraph, spec: ConfigSpec) -> Result<Self> {
        let witness = find_configuration(g, spec, &[])?;
        Ok(FreenessCheck {
            spec,
            free: witness.is_none(),
            witness,
        })
    }
}

/// Outcome of checking every packing hypothesis for one gadget and `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EligibilityReport {
    pub gadget: String,
    pub r: usize,
    pub t: usize,
    pub k: usize,
    pub edges: usize,
    pub support_edges: usize,
    pub free_main: FreenessCheck,
    pub free_aux: Vec<FreenessCheck>,
    /// Non-edge girth, computed up to `k`.
    pub girth: Girth,
    /// Girth strictly greater than `k / 2`.
    pub girth_ok: bool,
    pub eligible: bool,
    /// `|F| / (t! |J|)`.
    #[serde(with = "serde_rational")]
    pub bound: Rational,
    /// `|F| / m^t`, reported when the support is the complete t-graph.
    #[serde(with = "crate::combinatorics::serde_rational_opt")]
    pub complete_support_bound: Option<Rational>,
}

pub fn check_eligibility(g: &Gadget, k: usize) -> Result<EligibilityReport> {
    if k < 2 {
        return Err(Error::param(format!("k must be at least 2, got {k}")));
    }
    let (r, t) = (g.r(), g.t);
    let free_main = FreenessCheck::run(&g.core, ConfigSpec::critical(r, t, k))?;
    let free_aux = (2..k)
        .map(|l| FreenessCheck::run(&g.core, ConfigSpec::dense(r, t, l)))
        .collect::<Result<Vec<_>>>()?;
    let girth = non_edge_girth(g, k);
    let girth_ok = girth.exceeds_half_of(k);
    let eligible = free_main.free && free_aux.iter().all(|c| c.free) && girth_ok;
    let complete_support_bound = g
        .support_is_complete()
        .then(|| ratio(g.core.len() as u64, (g.m() as u128).pow(t as u32)));
    Ok(EligibilityReport {
        gadget: g.name.clone(),
        r,
        t,
        k,
        edges: g.core.len(),
        support_edges: g.support.len(),
        free_main,
        free_aux,
        girth,
        girth_ok,
        eligible,
        bound: g.density_bound(),
        complete_support_bound,
    })
}

impl EligibilityReport {
    /// First failed hypothesis, if any.
    pub fn failure(&self) -> Option<String> {
        if !self.free_main.free {
            return Some(format!("core contains a {} configuration", self.free_main.spec));
        }
        if let Some(c) = self.free_aux.iter().find(|c| !c.free) {
            return Some(format!("core contains a {} configuration", c.spec));
        }
        if !self.girth_ok {
            return Some(format!("non-edge girth {:?} is not above k/2", self.girth));
        }
        None
    }
}
