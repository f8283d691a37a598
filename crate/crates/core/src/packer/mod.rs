//! Seeded random-greedy packing of gadget copies into `[n]`.
//!
//! A copy is the image of the gadget core under an injection of its vertices
//! into `[n]`. A new copy is accepted only if
//!
//! 1. none of its support t-sets is already used by an earlier copy,
//! 2. it shares at most `t` vertices with every earlier copy, and
//! 3. no connected `(l(r-t)+t, l)`-configuration with `2 <= l <= k` uses
//!    one of its edges together with an edge of an earlier copy.
//!
//! Check 3 only looks at connected configurations. That loses nothing: a
//! disconnected `(l(r-t)+t, l)`-configuration always has a connected piece
//! with `j` edges on at most `j(r-t)+t-1` vertices, `2 <= j < l`, and such a
//! piece is excluded either by the gadget's own freeness (single copy) or by
//! check 3 (several copies). The union therefore stays
//! `(k(r-t)+t, k)`-free; [`PackingState::extract`] re-verifies that with the
//! exhaustive search before signing a certificate.

use fixedbitset::FixedBitSet;
use rand::{seq::SliceRandom, Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial, int, ratio, serde_rational, to_f64, Rational};
use crate::error::{Error, Result};
use crate::gadgets::{check_eligibility, Gadget};
use crate::hypercore::{is_free, ConfigSpec, Hypergraph, Vertex};

mod union;

use union::UnionIndex;

pub const SCHEMA_VERSION: u32 = 1;

/// Attempts per block when deciding whether to switch samplers.
const SAMPLER_WINDOW: u64 = 200;
/// Rejections within one block that trigger the pivot sampler (90%).
const SAMPLER_SWITCH: u64 = 180;
/// Random draws when looking for an unused t-set.
const PIVOT_TRIES: usize = 64;
/// Candidate vertices tried per extension step before giving up.
const EXTEND_TRIES: usize = 32;
/// Dead ends after which an unused t-set is no longer offered as a pivot.
const RETIRE_AFTER: u8 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackingConfig {
    pub n: usize,
    pub k: usize,
    pub seed: u64,
    pub attempt_budget: u64,
    pub stall_limit: u64,
}

impl PackingConfig {
    /// Defaults: stall limit `50 n`, attempt budget `200 n^2`.
    pub fn new(n: usize, k: usize, seed: u64) -> Self {
        let n64 = n as u64;
        PackingConfig {
            n,
            k,
            seed,
            attempt_budget: 200 * n64 * n64,
            stall_limit: 50 * n64,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Placement {
    pub copy_id: u32,
    /// Image of gadget vertex `i` is `injection[i]`.
    pub injection: Vec<Vertex>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RejectReason {
    ShadowOverlap,
    LargeIntersection,
    /// A cross-copy configuration with this many edges.
    Conflict(usize),
}

/// Edges of a cross-copy configuration and the copies they come from. The
/// candidate copy appears as id `placements.len()`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConflictWitness {
    pub edges: Vec<Vec<Vertex>>,
    pub copies: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlaceOutcome {
    Accepted { copy_id: u32 },
    Rejected {
        reason: RejectReason,
        conflict: Option<ConflictWitness>,
    },
}

impl PlaceOutcome {
    pub fn is_accepted(&self) -> bool {
        matches!(self, PlaceOutcome::Accepted { .. })
    }

    pub fn reason(&self) -> Option<RejectReason> {
        match self {
            PlaceOutcome::Accepted { .. } => None,
            PlaceOutcome::Rejected { reason, .. } => Some(*reason),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackingStats {
    pub attempts: u64,
    pub accepted: u64,
    pub shadow_overlap: u64,
    pub large_intersection: u64,
    /// Indexed by the configuration's edge count.
    pub conflicts: Vec<u64>,
    /// Pivot samples that found no extension.
    pub dead_ends: u64,
    /// Attempt count at which the pivot sampler took over.
    pub pivot_from: Option<u64>,
}

/// Sorted image of a gadget edge under `injection`.
fn image_into(injection: &[Vertex], edge: &[usize], buf: &mut Vec<Vertex>) {
    buf.clear();
    buf.extend(edge.iter().map(|&v| injection[v]));
    buf.sort_unstable();
}

/// Gadget data in the shape the packer needs.
#[derive(Clone, Debug)]
struct Layout {
    core_edges: Vec<Vec<usize>>,
    support_edges: Vec<Vec<usize>>,
    /// For each support edge used as a pivot: the remaining gadget vertices
    /// in extension order.
    extension: Vec<Vec<Step>>,
}

#[derive(Clone, Debug)]
struct Step {
    vertex: usize,
    /// Support edges whose last vertex is `vertex`.
    support: Vec<usize>,
    /// Core edges whose last vertex is `vertex`.
    core: Vec<usize>,
}

impl Layout {
    fn new(g: &Gadget) -> Self {
        let to_usize = |e: &[u32]| e.iter().map(|&v| v as usize).collect::<Vec<_>>();
        let core_edges: Vec<_> = g.core.edges().map(to_usize).collect();
        let support_edges: Vec<_> = g.support.edges().map(to_usize).collect();
        let m = g.m();
        let extension = support_edges
            .iter()
            .map(|pivot| {
                let mut placed = vec![false; m];
                for &v in pivot {
                    placed[v] = true;
                }
                let mut order = Vec::new();
                let mut done = vec![false; support_edges.len()];
                for (i, e) in support_edges.iter().enumerate() {
                    done[i] = e.iter().all(|&v| placed[v]);
                }
                while order.len() + pivot.len() < m {
                    // most support edges completed first, ties by vertex id
                    let next = (0..m)
                        .filter(|&v| !placed[v])
                        .max_by_key(|&v| {
                            let c = support_edges
                                .iter()
                                .enumerate()
                                .filter(|(i, e)| {
                                    !done[*i]
                                        && e.contains(&v)
                                        && e.iter().all(|&w| w == v || placed[w])
                                })
                                .count();
                            (c, std::cmp::Reverse(v))
                        })
                        .expect("unplaced vertex remains");
                    placed[next] = true;
                    let completes: Vec<usize> = (0..support_edges.len())
                        .filter(|&i| !done[i] && support_edges[i].iter().all(|&w| placed[w]))
                        .collect();
                    for &i in &completes {
                        done[i] = true;
                    }
                    let core = core_edges
                        .iter()
                        .enumerate()
                        .filter(|(_, e)| e.contains(&next) && e.iter().all(|&w| placed[w]))
                        .map(|(i, _)| i)
                        .collect();
                    order.push(Step {
                        vertex: next,
                        support: completes,
                        core,
                    });
                }
                order
            })
            .collect();
        Layout {
            core_edges,
            support_edges,
            extension,
        }
    }
}

/// The evolving packing: placed copies plus the indexes needed to test new
/// ones. Single owner, mutated sequentially.
#[derive(Clone, Debug)]
pub struct PackingState {
    n: usize,
    k: usize,
    gadget: Gadget,
    layout: Layout,
    config: Option<PackingConfig>,
    placements: Vec<Placement>,
    used_tsets: FxHashMap<Box<[Vertex]>, u32>,
    /// `(t-1)`-set to the vertices completing it to a used t-set.
    links: FxHashMap<Box<[Vertex]>, FixedBitSet>,
    vertex_copies: Vec<Vec<u32>>,
    copy_bits: Vec<FixedBitSet>,
    /// Dead-end counts of unused t-sets tried as pivots.
    pivot_failures: FxHashMap<Box<[Vertex]>, u8>,
    /// Edges of accepted copies, in placement order.
    union: UnionIndex,
    stats: PackingStats,
    copy_hits: Vec<u32>,
}

impl PackingState {
    /// An empty packing. Does not check eligibility; [`run_greedy`] does.
    pub fn new(gadget: Gadget, n: usize, k: usize) -> Result<Self> {
        if n < gadget.m() {
            return Err(Error::param(format!(
                "n = {n} is smaller than the gadget's {} vertices",
                gadget.m()
            )));
        }
        if n > u32::MAX as usize {
            return Err(Error::param("n too large"));
        }
        if k < 2 {
            return Err(Error::param(format!("k must be at least 2, got {k}")));
        }
        let layout = Layout::new(&gadget);
        let (r, t) = (gadget.r(), gadget.t);
        Ok(PackingState {
            n,
            k,
            layout,
            gadget,
            config: None,
            placements: Vec::new(),
            used_tsets: FxHashMap::default(),
            links: FxHashMap::default(),
            vertex_copies: vec![Vec::new(); n],
            copy_bits: Vec::new(),
            pivot_failures: FxHashMap::default(),
            union: UnionIndex::new(r, t, k, n),
            stats: PackingStats::default(),
            copy_hits: Vec::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn gadget(&self) -> &Gadget {
        &self.gadget
    }

    pub fn placements(&self) -> &[Placement] {
        &self.placements
    }

    pub fn stats(&self) -> &PackingStats {
        &self.stats
    }

    pub fn config(&self) -> Option<&PackingConfig> {
        self.config.as_ref()
    }

    pub fn used_tset_count(&self) -> usize {
        self.used_tsets.len()
    }

    pub fn edge_count(&self) -> usize {
        self.union.len()
    }

    fn r(&self) -> usize {
        self.gadget.r()
    }

    fn t(&self) -> usize {
        self.gadget.t
    }

    /// Tests the copy given by `injection` and places it if it is
    /// compatible. On rejection the state is unchanged.
    pub fn try_place(&mut self, injection: &[Vertex]) -> Result<PlaceOutcome> {
        let m = self.gadget.m();
        if injection.len() != m {
            return Err(Error::param(format!(
                "injection has {} entries, gadget has {m} vertices",
                injection.len()
            )));
        }
        if let Some(&v) = injection.iter().find(|&&v| v as usize >= self.n) {
            return Err(Error::param(format!("vertex {v} out of range for n = {}", self.n)));
        }
        let mut sorted = injection.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::param("injection is not injective"));
        }

        let mut buf = Vec::with_capacity(self.r());
        for e in &self.layout.support_edges {
            image_into(injection, e, &mut buf);
            if self.used_tsets.contains_key(buf.as_slice()) {
                return Ok(self.reject(RejectReason::ShadowOverlap, None));
            }
        }

        if self.shares_too_much(injection) {
            return Ok(self.reject(RejectReason::LargeIntersection, None));
        }

        let copy_id = self.placements.len() as u32;
        let first_new = self.union.len();
        for e in &self.layout.core_edges {
            image_into(injection, e, &mut buf);
            self.union.push(&buf, copy_id);
        }
        if let Some(ids) = self.union.find_conflict(first_new, first_new) {
            let conflict = ConflictWitness {
                edges: ids.iter().map(|&e| self.union.edge(e as usize).to_vec()).collect(),
                copies: ids.iter().map(|&e| self.union.copy_of(e as usize)).collect(),
            };
            self.union.truncate(first_new);
            return Ok(self.reject(RejectReason::Conflict(ids.len()), Some(conflict)));
        }

        self.record_copy(injection, copy_id);
        self.stats.accepted += 1;
        Ok(PlaceOutcome::Accepted { copy_id })
    }

    fn record_copy(&mut self, injection: &[Vertex], copy_id: u32) {
        let mut buf = Vec::with_capacity(self.r());
        for ei in 0..self.layout.support_edges.len() {
            image_into(injection, &self.layout.support_edges[ei], &mut buf);
            for i in 0..buf.len() {
                let mut key = buf.clone();
                let v = key.remove(i);
                self.links
                    .entry(key.into_boxed_slice())
                    .or_insert_with(|| FixedBitSet::with_capacity(self.n))
                    .insert(v as usize);
            }
            self.used_tsets.insert(buf.clone().into_boxed_slice(), copy_id);
        }
        let mut bits = FixedBitSet::with_capacity(self.n);
        for &v in injection {
            self.vertex_copies[v as usize].push(copy_id);
            bits.insert(v as usize);
        }
        self.copy_bits.push(bits);
        self.placements.push(Placement {
            copy_id,
            injection: injection.to_vec(),
        });
    }

    fn reject(&mut self, reason: RejectReason, conflict: Option<ConflictWitness>) -> PlaceOutcome {
        match reason {
            RejectReason::ShadowOverlap => self.stats.shadow_overlap += 1,
            RejectReason::LargeIntersection => self.stats.large_intersection += 1,
            RejectReason::Conflict(l) => {
                if self.stats.conflicts.len() <= l {
                    self.stats.conflicts.resize(l + 1, 0);
                }
                self.stats.conflicts[l] += 1;
            }
        }
        PlaceOutcome::Rejected { reason, conflict }
    }

    fn shares_too_much(&mut self, injection: &[Vertex]) -> bool {
        self.copy_hits.resize(self.placements.len(), 0);
        let t = self.t() as u32;
        let mut touched = Vec::new();
        let mut over = false;
        'outer: for &v in injection {
            for &c in &self.vertex_copies[v as usize] {
                let h = &mut self.copy_hits[c as usize];
                if *h == 0 {
                    touched.push(c);
                }
                *h += 1;
                if *h > t {
                    over = true;
                    break 'outer;
                }
            }
        }
        for c in touched {
            self.copy_hits[c as usize] = 0;
        }
        over
    }

    /// The union graph of the first `copies` placements.
    fn union_of(&self, copies: usize) -> Hypergraph {
        let per = self.layout.core_edges.len();
        let r = self.r();
        Hypergraph::new(
            r,
            self.n,
            self.union.flat()[..copies * per * r].chunks_exact(r),
        )
        .expect("copies never share an edge")
    }

    /// The union graph with a verified freeness certificate.
    ///
    /// Re-checks `(k(r-t)+t, k)`-freeness exhaustively and drops the most
    /// recent copies until it holds.
    pub fn extract(&self) -> Result<Extraction> {
        let spec = ConfigSpec::critical(self.r(), self.t(), self.k);
        let mut copies = self.placements.len();
        loop {
            let graph = self.union_of(copies);
            match is_free(&graph, &[spec])? {
                None => {
                    let certificate = Certificate::new(self, &graph, copies, vec![spec]);
                    return Ok(Extraction {
                        graph,
                        certificate,
                        rolled_back: self.placements.len() - copies,
                    });
                }
                Some(v) if copies <= 1 => {
                    return Err(Error::Internal {
                        message: format!(
                            "union of {copies} copies still contains a {} configuration",
                            v.spec
                        ),
                        witness: Some(v.witness),
                    });
                }
                Some(_) => copies -= 1,
            }
        }
    }

    pub fn density_report(&self) -> DensityReport {
        DensityReport::new(self, self.edge_count())
    }

    /// Places a copy without any checks. Only for exercising the rollback
    /// path of [`extract`](Self::extract) in tests.
    #[doc(hidden)]
    pub fn force_place_unchecked(&mut self, injection: &[Vertex]) {
        let copy_id = self.placements.len() as u32;
        let mut buf = Vec::new();
        for e in &self.layout.core_edges {
            image_into(injection, e, &mut buf);
            self.union.push(&buf, copy_id);
        }
        self.record_copy(injection, copy_id);
    }

    fn sample_uniform(&self, rng: &mut ChaCha8Rng, out: &mut Vec<Vertex>) {
        let m = self.gadget.m();
        out.clear();
        while out.len() < m {
            let v = rng.gen_range(0..self.n as Vertex);
            if !out.contains(&v) {
                out.push(v);
            }
        }
    }

    /// Picks an unused t-set, maps a random support edge onto it and
    /// extends vertex by vertex. Each new vertex is uniform among those that
    /// keep every completed support edge on an unused t-set and share at
    /// most `t` vertices with every placed copy; a vertex whose completed
    /// core edges close a cross-copy configuration is discarded and redrawn.
    /// Returns false on a dead end.
    fn sample_pivot(&mut self, rng: &mut ChaCha8Rng, out: &mut Vec<Vertex>) -> bool {
        let (t, m) = (self.t(), self.gadget.m());
        let mut tset = Vec::with_capacity(t);
        let mut found = false;
        for _ in 0..PIVOT_TRIES {
            tset.clear();
            while tset.len() < t {
                let v = rng.gen_range(0..self.n as Vertex);
                if !tset.contains(&v) {
                    tset.push(v);
                }
            }
            let mut key = tset.clone();
            key.sort_unstable();
            let retired = self.pivot_failures.get(key.as_slice()).is_some_and(|&f| f >= RETIRE_AFTER);
            if !retired && !self.used_tsets.contains_key(key.as_slice()) {
                found = true;
                break;
            }
        }
        if !found {
            return false;
        }
        let pivot = rng.gen_range(0..self.layout.support_edges.len());
        tset.shuffle(rng);
        out.clear();
        out.resize(m, Vertex::MAX);
        for (i, &gv) in self.layout.support_edges[pivot].iter().enumerate() {
            out[gv] = tset[i];
        }

        // vertices excluded for every later step
        let mut blocked = FixedBitSet::with_capacity(self.n);
        let mut hits: FxHashMap<u32, usize> = FxHashMap::default();
        for &v in &tset {
            self.take(v, &mut blocked, &mut hits);
        }
        let copy_id = self.placements.len() as u32;
        let first_new = self.union.len();
        let mut key = Vec::with_capacity(t);
        let mut buf = Vec::with_capacity(self.r());
        let mut complete = true;
        let mut doomed = FixedBitSet::with_capacity(self.n);
        for si in 0..self.layout.extension[pivot].len() {
            let step = self.layout.extension[pivot][si].clone();
            let mut allowed = blocked.clone();
            for &ei in &step.support {
                key.clear();
                key.extend(
                    self.layout.support_edges[ei]
                        .iter()
                        .filter(|&&w| w != step.vertex)
                        .map(|&w| out[w]),
                );
                key.sort_unstable();
                if let Some(link) = self.links.get(key.as_slice()) {
                    allowed.union_with(link);
                }
            }
            allowed.toggle_range(..);
            let mark = self.union.len();
            if !step.core.is_empty() {
                out[step.vertex] = self.union.star();
                for &ci in &step.core {
                    image_into(out, &self.layout.core_edges[ci], &mut buf);
                    self.union.push(&buf, copy_id);
                }
                doomed.clear();
                let dead = self.union.scan_star(first_new, mark, &allowed, &mut doomed);
                self.union.truncate(mark);
                if dead {
                    complete = false;
                    break;
                }
                allowed.difference_with(&doomed);
            }
            let mut chosen = None;
            for _ in 0..EXTEND_TRIES {
                let free = allowed.count_ones(..);
                if free == 0 {
                    break;
                }
                let v = allowed.ones().nth(rng.gen_range(0..free)).expect("free vertex") as Vertex;
                out[step.vertex] = v;
                for &ci in &step.core {
                    image_into(out, &self.layout.core_edges[ci], &mut buf);
                    self.union.push(&buf, copy_id);
                }
                if step.core.is_empty() || self.union.find_conflict_through(first_new, mark, v).is_none() {
                    chosen = Some(v);
                    break;
                }
                self.union.truncate(mark);
                allowed.set(v as usize, false);
            }
            match chosen {
                Some(v) => self.take(v, &mut blocked, &mut hits),
                None => {
                    complete = false;
                    break;
                }
            }
        }
        self.union.truncate(first_new);
        if !complete {
            tset.sort_unstable();
            *self.pivot_failures.entry(tset.into_boxed_slice()).or_insert(0) += 1;
        }
        complete
    }

    fn take(&self, v: Vertex, blocked: &mut FixedBitSet, hits: &mut FxHashMap<u32, usize>) {
        blocked.insert(v as usize);
        for &c in &self.vertex_copies[v as usize] {
            let h = hits.entry(c).or_insert(0);
            *h += 1;
            if *h == self.t() {
                blocked.union_with(&self.copy_bits[c as usize]);
            }
        }
    }
}

/// Runs the seeded greedy process. Refuses gadgets that fail
/// [`check_eligibility`] for `config.k`.
pub fn run_greedy(gadget: &Gadget, config: &PackingConfig) -> Result<PackingState> {
    let report = check_eligibility(gadget, config.k)?;
    if let Some(reason) = report.failure() {
        return Err(Error::Ineligible {
            k: config.k,
            reason,
        });
    }
    let mut state = PackingState::new(gadget.clone(), config.n, config.k)?;
    state.config = Some(config.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut injection = Vec::with_capacity(gadget.m());
    let mut stalled = 0u64;
    let mut window_rejects = 0u64;
    let mut pivot = false;

    while state.stats.attempts < config.attempt_budget && stalled < config.stall_limit {
        state.stats.attempts += 1;
        let accepted = if pivot {
            if state.sample_pivot(&mut rng, &mut injection) {
                state.try_place(&injection)?.is_accepted()
            } else {
                state.stats.dead_ends += 1;
                false
            }
        } else {
            state.sample_uniform(&mut rng, &mut injection);
            state.try_place(&injection)?.is_accepted()
        };
        if accepted {
            stalled = 0;
        } else {
            stalled += 1;
            window_rejects += 1;
        }
        if !pivot && state.stats.attempts % SAMPLER_WINDOW == 0 {
            if window_rejects > SAMPLER_SWITCH {
                pivot = true;
                state.stats.pivot_from = Some(state.stats.attempts);
            }
            window_rejects = 0;
        }
    }
    Ok(state)
}

#[derive(Clone, Debug)]
pub struct Extraction {
    pub graph: Hypergraph,
    pub certificate: Certificate,
    /// Copies dropped because verification failed (zero in practice).
    pub rolled_back: usize,
}

/// Machine-checkable record of what an extracted graph avoids.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema_version: u32,
    pub n: usize,
    pub r: usize,
    pub t: usize,
    pub k: usize,
    pub gadget: String,
    pub seed: Option<u64>,
    pub attempt_budget: Option<u64>,
    pub stall_limit: Option<u64>,
    pub placements: usize,
    pub specs_verified: Vec<ConfigSpec>,
    pub edge_count: usize,
    pub target_fraction: f64,
}

impl Certificate {
    fn new(state: &PackingState, graph: &Hypergraph, copies: usize, specs: Vec<ConfigSpec>) -> Self {
        let report = DensityReport::new(state, graph.len());
        Certificate {
            schema_version: SCHEMA_VERSION,
            n: state.n,
            r: state.r(),
            t: state.t(),
            k: state.k,
            gadget: state.gadget.name.clone(),
            seed: state.config.as_ref().map(|c| c.seed),
            attempt_budget: state.config.as_ref().map(|c| c.attempt_budget),
            stall_limit: state.config.as_ref().map(|c| c.stall_limit),
            placements: copies,
            specs_verified: specs,
            edge_count: graph.len(),
            target_fraction: report.target_fraction,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub n: usize,
    pub edges: usize,
    pub placements: usize,
    /// `|F| / (t! |J|)`; the asymptotic target is this times `n^t`.
    #[serde(with = "serde_rational")]
    pub target_coefficient: Rational,
    #[serde(with = "serde_rational")]
    pub target: Rational,
    /// `edges / target`.
    #[serde(with = "serde_rational")]
    pub fraction_exact: Rational,
    pub target_fraction: f64,
    pub used_tsets: usize,
    pub total_tsets: u128,
    pub coverage: f64,
}

impl DensityReport {
    fn new(state: &PackingState, edges: usize) -> Self {
        let t = state.t();
        let coef = state.gadget.density_bound();
        let target = &coef * int((state.n as u128).pow(t as u32));
        let fraction_exact = if edges == 0 {
            int(0)
        } else {
            int(edges as u64) / &target
        };
        let total = binomial(state.n as u64, t as u64);
        let used = if edges == state.edge_count() {
            state.used_tsets.len()
        } else {
            (edges / state.layout.core_edges.len()) * state.layout.support_edges.len()
        };
        DensityReport {
            n: state.n,
            edges,
            placements: edges / state.layout.core_edges.len(),
            target_fraction: to_f64(&fraction_exact),
            target_coefficient: coef,
            target,
            fraction_exact,
            used_tsets: used,
            total_tsets: total,
            coverage: to_f64(&ratio(used as u64, total)),
        }
    }
}
