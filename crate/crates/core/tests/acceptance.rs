//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails. Pass criterion numbers as arguments to run a subset.

use std::time::{Duration, Instant};

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use girthpack::bounds::{
    certified_upper_bound, clean, count_covered_claimed, diamond_inequality, four_edge_spec, limit_table,
    max_ratio, merge_clusters, tight_components, three_edge_spec, two_edge_spec, ClusterDecomposition, ClusterKind,
    LimitValue,
};
use girthpack::combinatorics::{ratio, render};
use girthpack::gadgets::{builtin_double_edge, builtin_single_edge, builtin_t7, check_eligibility};
use girthpack::hypercore::{find_configuration, is_free, Vertex};
use girthpack::oracle::{exact_max, OracleOptions};
use girthpack::packer::run_greedy;
use girthpack::{binomial, factorial, ConfigSpec, Gadget, Girth, Hypergraph, PackingConfig, Rational};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn criterion_1() -> Outcome {
    let rep = ok(check_eligibility(&builtin_t7(), 4))?;
    ensure(rep.free_main.spec == ConfigSpec::critical(3, 2, 4), || "main spec is not (6,4)".into())?;
    ensure(rep.free_main.free, || "T7 is not (6,4)-free".into())?;
    ensure(
        rep.free_aux.iter().any(|c| c.spec == ConfigSpec::new(4, 3).unwrap() && c.free),
        || "T7 is not (4,3)-free".into(),
    )?;
    ensure(rep.free_aux.iter().all(|c| c.free), || "an auxiliary spec fails".into())?;
    ensure(rep.girth == Girth::Finite(3), || format!("girth {:?}", rep.girth))?;
    ensure(rep.girth_ok && rep.eligible, || "not eligible".into())?;
    ensure(rep.bound == ratio(7, 36), || format!("bound {}", render(&rep.bound)))?;
    Ok(format!("T7 eligible at k=4, girth 3, bound {}", render(&rep.bound)))
}

fn exact(r: usize, t: usize, k: usize) -> Result<Rational, String> {
    match ok(limit_table(r, t, k))? {
        LimitValue::Exact { value, .. } => Ok(value),
        other => Err(format!("({r},{t},{k}) is not exact: {other}")),
    }
}

fn criterion_2() -> Outcome {
    let mut checked = 0;
    let mut expect = |r: usize, t: usize, k: usize, want: Rational| -> Result<(), String> {
        let got = exact(r, t, k)?;
        checked += 1;
        ensure(got == want, || format!("({r},{t},{k}): got {}, want {}", render(&got), render(&want)))
    };
    expect(3, 2, 4, ratio(7, 36))?;
    expect(3, 2, 3, ratio(1, 5))?;
    for r in 3..=40u64 {
        let want = ratio(2u64, factorial(2) * (2 * binomial(r, 2) - 1));
        ensure(want == ratio(1, r * r - r - 1), || format!("closed forms disagree at r={r}"))?;
        expect(r as usize, 2, 3, want)?;
    }
    for r in 4..=12u64 {
        for t in 2..r {
            expect(r as usize, t as usize, 4, ratio(1u64, factorial(t) * binomial(r, t)))?;
        }
    }
    for r in 3..=12u64 {
        for t in 2..r {
            expect(r as usize, t as usize, 2, ratio(factorial(r - t), factorial(r)))?;
        }
        for k in 2..=8u64 {
            expect(r as usize, 1, k as usize, ratio(k - 1, (k - 1) * (r - 1) + 1))?;
        }
    }
    for k in 5..=12u64 {
        match ok(limit_table(3, 2, k as usize))? {
            LimitValue::Interval { lower, upper, .. } => {
                ensure(lower == ratio(1, 6) && upper == ratio(k - 1, 3 * k), || {
                    format!("(3,2,{k}): [{}, {}]", render(&lower), render(&upper))
                })?;
                checked += 1;
            }
            other => return Err(format!("(3,2,{k}) should be an interval, got {other}")),
        }
    }
    Ok(format!("{checked} table entries match"))
}

fn criterion_3() -> Outcome {
    let m = ok(max_ratio(3, 2))?;
    ensure(m == ratio(7, 18), || format!("max_ratio(3,2) = {}", render(&m)))?;
    let mut pairs = 1;
    for r in 4..=12u64 {
        for t in 2..r {
            let m = ok(max_ratio(r as usize, t as usize))?;
            ensure(m == ratio(1, binomial(r, t)), || format!("max_ratio({r},{t}) = {}", render(&m)))?;
            pairs += 1;
        }
    }
    let mut equalities = Vec::new();
    for r in 3..=40usize {
        for t in 2..r {
            let (lhs, rhs) = diamond_inequality(r, t);
            ensure(lhs >= rhs, || format!("diamond inequality fails at r={r}, t={t}"))?;
            // independent recomputation
            let (l2, r2) = (binomial(2 * r as u64 - t as u64, t as u64), 2 * binomial(r as u64, t as u64));
            ensure((lhs, rhs) == (l2, r2), || format!("diamond terms wrong at r={r}, t={t}"))?;
            if lhs == rhs {
                equalities.push((t, r));
            }
        }
    }
    ensure(equalities == [(2, 3)], || format!("equality at {equalities:?}"))?;
    Ok(format!("max_ratio(3,2)=7/18, {pairs} ratios checked, equality only at (t,r)=(2,3)"))
}

fn random_cleaned(r: usize, t: usize, n: usize, tries: usize, rng: &mut ChaCha8Rng) -> Hypergraph {
    let spec = four_edge_spec(r, t);
    let vertices: Vec<Vertex> = (0..n as Vertex).collect();
    let mut g = Hypergraph::empty(r, n);
    for _ in 0..tries {
        let e: Vec<Vertex> = vertices.choose_multiple(rng, r).copied().sorted().collect();
        if g.contains_edge(&e) {
            continue;
        }
        let h = g.union(&Hypergraph::new(r, n, [e.clone()]).unwrap()).unwrap();
        let idx = h.edge_index(&e).unwrap();
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

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut instances = 0;
    let mut clusters = 0;
    let mut kinds = std::collections::BTreeSet::new();
    for &(r, t) in &[(3, 2), (4, 2), (4, 3), (5, 2), (5, 3)] {
        for _ in 0..42 {
            let n = if (r, t) == (5, 2) { rng.gen_range(15..=20) } else { rng.gen_range(r + 3..=r + 8) };
            let g = random_cleaned(r, t, n, 80, &mut rng);
            ensure(is_free(&g, &[four_edge_spec(r, t), three_edge_spec(r, t), two_edge_spec(r, t)]).unwrap().is_none(), || {
                format!("instance for ({r},{t}) is not cleaned")
            })?;
            let comps = ok(tight_components(&g, t))?;
            let dec = ok(merge_clusters(&g, &comps, t))?;
            ok(dec.check_disjoint())?;
            for c in &dec.clusters {
                let counted = count_covered_claimed(&g, c, t);
                let closed = c.kind.closed_form(r, t);
                ensure(counted == closed && c.covered_or_claimed == closed, || {
                    format!("({r},{t}) {}: counted {counted}, closed form {closed}", c.kind.label())
                })?;
                kinds.insert(c.kind);
            }
            let covered: std::collections::HashSet<_> = dec.covered_index.keys().collect();
            ensure(dec.claimed_index.keys().all(|s| !covered.contains(s) || dec.covered_index[s] == dec.claimed_index[s]), || {
                "covered and claimed overlap across clusters".into()
            })?;
            let base = canonical(&g, &dec);
            for _ in 0..20 {
                let mut shuffled = comps.clone();
                shuffled.shuffle(&mut rng);
                for c in &mut shuffled {
                    c.shuffle(&mut rng);
                }
                let other = ok(merge_clusters(&g, &shuffled, t))?;
                ensure(canonical(&g, &other) == base, || format!("merge order changes clusters for ({r},{t})"))?;
            }
            instances += 1;
            clusters += dec.clusters.len();
        }
    }
    ensure(kinds.len() >= 3, || format!("only {} cluster kinds seen", kinds.len()))?;
    Ok(format!("{instances} instances, {clusters} clusters, {} kinds", kinds.len()))
}

struct Run {
    gadget: &'static str,
    n: usize,
    seed: u64,
    graph: Hypergraph,
    fraction: f64,
    elapsed: Duration,
}

fn pack(name: &'static str, gadget: &Gadget, k: usize, n: usize, seed: u64) -> Result<Run, String> {
    let start = Instant::now();
    let state = ok(run_greedy(gadget, &PackingConfig::new(n, k, seed)))?;
    let ex = ok(state.extract())?;
    Ok(Run {
        gadget: name,
        n,
        seed,
        fraction: ex.certificate.target_fraction,
        graph: ex.graph,
        elapsed: start.elapsed(),
    })
}

const SEEDS: std::ops::RangeInclusive<u64> = 1..=5;

fn packing_runs(sizes: &[usize]) -> Result<Vec<Run>, String> {
    let t7 = builtin_t7();
    let de = ok(builtin_double_edge(3, 2))?;
    let mut runs = Vec::new();
    for &n in sizes {
        for seed in SEEDS {
            runs.push(pack("t7", &t7, 4, n, seed)?);
            runs.push(pack("double-edge", &de, 3, n, seed)?);
        }
    }
    Ok(runs)
}

fn criterion_5(runs: &[Run]) -> Outcome {
    let mut checked = 0;
    for run in runs.iter().filter(|r| [60, 200, 500].contains(&r.n)) {
        let k = if run.gadget == "t7" { 4 } else { 3 };
        let spec = ConfigSpec::critical(3, 2, k);
        if let Some(v) = ok(is_free(&run.graph, &[spec]))? {
            return Err(format!("{} n={} seed={}: found {:?}", run.gadget, run.n, run.seed, v.witness));
        }
        let rep = ok(certified_upper_bound(&run.graph, 2))?;
        ensure(rep.bound >= ratio(run.graph.len() as u64, 1u64), || {
            format!("{} n={} seed={}: bound {} below {} edges", run.gadget, run.n, run.seed, render(&rep.bound), run.graph.len())
        })?;
        checked += 1;
    }
    ensure(checked == 30, || format!("only {checked} runs checked"))?;
    Ok(format!("{checked} packings free and within their certified bounds"))
}

fn mean_fraction(runs: &[Run], gadget: &str, n: usize) -> f64 {
    let f: Vec<f64> = runs.iter().filter(|r| r.gadget == gadget && r.n == n).map(|r| r.fraction).collect();
    f.iter().sum::<f64>() / f.len() as f64
}

fn criterion_6(runs: &[Run]) -> Outcome {
    let mut parts = Vec::new();
    let mut failed = false;
    for gadget in ["t7", "double-edge"] {
        let (f100, f500) = (mean_fraction(runs, gadget, 100), mean_fraction(runs, gadget, 500));
        let slowest = runs.iter().filter(|r| r.gadget == gadget && r.n == 500).map(|r| r.elapsed).max().unwrap();
        failed |= f500 < 0.55 || f500 < f100 - 0.05;
        parts.push(format!("{gadget}: n=500 {f500:.4}, n=100 {f100:.4}, slowest run {slowest:.0?}"));
    }
    let line = parts.join("; ");
    if failed {
        Err(line)
    } else {
        Ok(line)
    }
}

fn criterion_7() -> Outcome {
    let opts = OracleOptions::default();
    let small = ok(exact_max(4, 3, &[ConfigSpec::critical(3, 2, 4)], opts))?;
    ensure(small.optimum == 3, || format!("exact_max(4,3,[(6,4)]) = {}", small.optimum))?;
    let sts = ok(exact_max(7, 3, &[ConfigSpec::new(4, 2).unwrap()], opts))?;
    ensure(sts.optimum == 7, || format!("exact_max(7,3,[(4,2)]) = {}", sts.optimum))?;
    let w = sts.witness();
    ensure(w.len() == 7 && ok(is_free(&w, &[ConfigSpec::new(4, 2).unwrap()]))?.is_none(), || {
        "the (4,2) witness is not a 7-edge (4,2)-free graph".into()
    })?;

    let packers = [
        ("double-edge", ok(builtin_double_edge(3, 2))?, 3),
        ("single-edge", ok(builtin_single_edge(3, 2))?, 3),
        ("single-edge", ok(builtin_single_edge(3, 2))?, 4),
    ];
    let mut compared = 0;
    let mut witnesses = vec![w];
    for n in 5..=7 {
        for k in [3, 4] {
            let spec = ConfigSpec::critical(3, 2, k);
            let opt = ok(exact_max(n, 3, &[spec], opts))?;
            let w = opt.witness();
            ensure(ok(is_free(&w, &[spec]))?.is_none(), || format!("oracle witness n={n} k={k} not free"))?;
            witnesses.push(w);
            for (name, gadget, _) in packers.iter().filter(|p| p.2 == k) {
                for seed in 1..=10 {
                    let state = ok(run_greedy(gadget, &PackingConfig::new(n, k, seed)))?;
                    let g = ok(state.extract())?.graph;
                    ensure(g.len() <= opt.optimum, || {
                        format!("{name} k={k} n={n} seed={seed}: {} edges above optimum {}", g.len(), opt.optimum)
                    })?;
                    compared += 1;
                }
            }
        }
    }
    for w in &witnesses {
        let rep = ok(certified_upper_bound(w, 2))?;
        ensure(rep.sound && rep.bound >= ratio(w.len() as u64, 1u64), || {
            format!("bound {} below witness with {} edges", render(&rep.bound), w.len())
        })?;
    }
    Ok(format!(
        "(4,3,[(6,4)])=3, (7,3,[(4,2)])=7, {compared} packings within optimum, bound sound on {} witnesses",
        witnesses.len()
    ))
}

/// A T7 packing on the first `n - n/5` vertices, subsampled, with the last
/// `n/5` vertices split into groups of four that each carry up to three
/// triples. Only groups with three triples are removable.
fn cleaning_input(base: &Hypergraph, n: usize, rng: &mut ChaCha8Rng) -> Hypergraph {
    let keep = rng.gen_range(0.5..0.95);
    let sub = base.filter_edges(|_| rng.gen_bool(keep)).with_vertex_count(n).unwrap();
    let block = n - n / 5;
    let mut extra = Vec::new();
    for g in (block..n).step_by(4).filter(|g| g + 4 <= n) {
        let quad: Vec<Vertex> = (g as Vertex..g as Vertex + 4).collect();
        let count = rng.gen_range(0..=3);
        for skip in quad.choose_multiple(rng, count) {
            extra.push(quad.iter().copied().filter(|v| v != skip).collect::<Vec<_>>());
        }
    }
    sub.union(&Hypergraph::new(3, n, extra).unwrap()).unwrap()
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let t7 = builtin_t7();
    let mut removed = [0usize; 2];
    let mut inputs = 0;
    for (slot, n) in [100usize, 200].into_iter().enumerate() {
        for seed in 1..=3 {
            let state = ok(run_greedy(&t7, &PackingConfig::new(n - n / 5, 4, seed)))?;
            let base = ok(state.extract())?.graph;
            for _ in 0..17 {
                let g = cleaning_input(&base, n, &mut rng);
                ensure(ok(is_free(&g, &[four_edge_spec(3, 2)]))?.is_none(), || "input is not (6,4)-free".into())?;
                let rep = ok(clean(&g, 2))?;
                ensure(ok(is_free(&rep.output, &[three_edge_spec(3, 2), two_edge_spec(3, 2)]))?.is_none(), || {
                    format!("clean output at n={n} still has a small configuration")
                })?;
                ensure(rep.output.len() + rep.removed() == g.len(), || "edge accounting is off".into())?;
                removed[slot] += rep.removed();
                inputs += 1;
            }
        }
    }
    ensure(removed[0] > 0, || "no removals at n=100".into())?;
    let growth = removed[1] as f64 / removed[0] as f64;
    ensure(growth <= 3.0, || format!("removals grew {growth:.2}x ({} -> {})", removed[0], removed[1]))?;
    Ok(format!("{inputs} inputs, removals {} at n=100 and {} at n=200 ({growth:.2}x)", removed[0], removed[1]))
}

fn report(id: usize, name: &str, limit: Option<Duration>, start: Instant, outcome: Outcome) -> bool {
    let elapsed = start.elapsed();
    let (mut pass, mut detail) = match outcome {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    if let Some(limit) = limit {
        if elapsed > limit {
            pass = false;
            detail = format!("{detail}; over the {limit:?} limit");
        }
    }
    println!(
        "criterion {id} [{name}]: {} ({detail}) in {:.2}s",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    pass
}

fn main() {
    let wanted: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let run = |id: usize| wanted.is_empty() || wanted.contains(&id);
    let secs = |s| Some(Duration::from_secs(s));
    let mut all = true;

    if run(1) {
        all &= report(1, "gadget certification", secs(1), Instant::now(), criterion_1());
    }
    if run(2) {
        all &= report(2, "limit table", secs(1), Instant::now(), criterion_2());
    }
    if run(3) {
        all &= report(3, "upper-bound engine", secs(10), Instant::now(), criterion_3());
    }
    if run(4) {
        all &= report(4, "cluster counting", secs(60), Instant::now(), criterion_4());
    }
    if run(5) || run(6) {
        let start = Instant::now();
        let sizes: &[usize] = if run(5) { &[60, 100, 200, 500] } else { &[100, 500] };
        match packing_runs(sizes) {
            Ok(runs) => {
                let packed = start.elapsed();
                if run(5) {
                    let t = Instant::now() - packed;
                    all &= report(5, "packing soundness", None, t, criterion_5(&runs));
                }
                if run(6) {
                    let t = Instant::now();
                    all &= report(6, "packing density", None, t, criterion_6(&runs));
                }
            }
            Err(e) => {
                for id in [5, 6].into_iter().filter(|&i| run(i)) {
                    all &= report(id, "packing", None, start, Err(e.clone()));
                }
            }
        }
    }
    if run(7) {
        all &= report(7, "oracle ground truth", secs(600), Instant::now(), criterion_7());
    }
    if run(8) {
        all &= report(8, "cleaning lemma", secs(60), Instant::now(), criterion_8());
    }
    if !all {
        std::process::exit(1);
    }
}
