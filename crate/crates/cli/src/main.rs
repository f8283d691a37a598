use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use girthpack::bounds::{certified_upper_bound, limit_table, LimitValue};
use girthpack::combinatorics::render;
use girthpack::gadgets::{builtin, check_eligibility, read_gadget};
use girthpack::hypercore::{is_free, read_hg, write_hg};
use girthpack::io::write_atomic;
use girthpack::oracle::{exact_max, OracleOptions};
use girthpack::packer::run_greedy;
use girthpack::{ConfigSpec, Error, Gadget, PackingConfig, Result};

const SCHEMA_VERSION: u32 = 1;
/// Column order of `sweep` CSV output.
const CSV_HEADER: &str = "n,seed,edges,target_fraction,verified";

/// Dense hypergraphs avoiding (k(r-t)+t, k)-configurations: packing,
/// verification and upper bounds.
#[derive(Parser, Debug)]
#[command(name = "girthpack", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check whether a gadget may be packed for a given k.
    GadgetCheck {
        #[command(flatten)]
        gadget: GadgetArgs,
        #[arg(long)]
        k: usize,
    },
    /// Pack gadget copies on n vertices and write the graph and certificate.
    Pack {
        #[command(flatten)]
        gadget: GadgetArgs,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Exit 0 if the graph is (s,k)-free, 1 with a witness otherwise.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        k: usize,
    },
    /// Clean, cluster and bound a (4r-3t,4)-free graph.
    Analyze {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        t: usize,
    },
    /// Exact maximum edge count on a few vertices.
    Oracle {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        k: usize,
        /// Further forbidden specs as "s,k"; repeatable.
        #[arg(long = "spec", value_parser = parse_spec)]
        extra: Vec<ConfigSpec>,
        /// Search beyond the candidate guard.
        #[arg(long)]
        force: bool,
        /// Directory for the witness file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Known limit of n^-t f(n; k(r-t)+t, k).
    Limits {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Pack over an n by seed grid, one row per run.
    Sweep {
        #[command(flatten)]
        gadget: GadgetArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Comma-separated vertex counts.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        /// Seeds as "a..b" (inclusive) or a comma-separated list.
        #[arg(long, value_parser = parse_seeds, default_value = "1")]
        seeds: SeedList,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

#[derive(Args, Debug, Clone, Serialize)]
struct GadgetArgs {
    /// Built-in gadget: t7, double-edge or single-edge.
    #[arg(long, conflicts_with = "gadget")]
    builtin: Option<String>,
    /// Built-in name or path to a .gadget file.
    #[arg(long)]
    gadget: Option<String>,
    #[arg(long, default_value_t = 3)]
    r: usize,
    #[arg(long, default_value_t = 2)]
    t: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
struct RunArgs {
    #[arg(long)]
    k: usize,
    /// Defaults to 200 n^2.
    #[arg(long)]
    attempt_budget: Option<u64>,
    /// Defaults to 50 n.
    #[arg(long)]
    stall_limit: Option<u64>,
}

impl RunArgs {
    fn config(&self, n: usize, seed: u64) -> PackingConfig {
        let mut c = PackingConfig::new(n, self.k, seed);
        if let Some(b) = self.attempt_budget {
            c.attempt_budget = b;
        }
        if let Some(s) = self.stall_limit {
            c.stall_limit = s;
        }
        c
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Debug, Serialize)]
struct SeedList(Vec<u64>);

fn parse_seeds(s: &str) -> std::result::Result<SeedList, String> {
    if let Some((a, b)) = s.split_once("..") {
        let a: u64 = a.trim().parse().map_err(|e| format!("bad seed range start: {e}"))?;
        let b: u64 = b.trim().parse().map_err(|e| format!("bad seed range end: {e}"))?;
        if a > b {
            return Err(format!("empty seed range {a}..{b}"));
        }
        return Ok(SeedList((a..=b).collect()));
    }
    s.split(',')
        .map(|x| x.trim().parse().map_err(|e| format!("bad seed {x:?}: {e}")))
        .collect::<std::result::Result<_, _>>()
        .map(SeedList)
}

fn parse_spec(s: &str) -> std::result::Result<ConfigSpec, String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected \"s,k\", got {s:?}"))?;
    let s: usize = a.trim().parse().map_err(|e| format!("bad s: {e}"))?;
    let k: usize = b.trim().parse().map_err(|e| format!("bad k: {e}"))?;
    ConfigSpec::new(s, k).map_err(|e| e.to_string())
}

/// What a successful command reports: the output and whether the checked
/// property held.
struct Outcome {
    stdout: String,
    ok: bool,
}

impl Outcome {
    fn json(v: Value, ok: bool) -> Self {
        Outcome {
            stdout: serde_json::to_string_pretty(&v).expect("json") + "\n",
            ok,
        }
    }
}

fn envelope(command: &str, config: Value, result: Value) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "config": config,
        "result": result,
    })
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn load_gadget(args: &GadgetArgs) -> Result<Gadget> {
    match (&args.builtin, &args.gadget) {
        (Some(name), _) => builtin(name, args.r, args.t),
        (None, Some(g)) if Path::new(g).is_file() => read_gadget(g),
        (None, Some(g)) => builtin(g, args.r, args.t),
        (None, None) => Err(Error::Param("pass --builtin NAME or --gadget NAME|PATH".into())),
    }
}

fn gadget_check(args: &GadgetArgs, k: usize) -> Result<Outcome> {
    let gadget = load_gadget(args)?;
    let report = check_eligibility(&gadget, k)?;
    let limit = limit_table(report.r, report.t, k)?;
    let note = match limit.exact() {
        Some(v) if &report.bound < v => Some(format!("suboptimal: the known limit is {}", render(v))),
        Some(_) => Some("matches the known limit".to_string()),
        None => None,
    };
    let mut result = to_value(&report);
    result["failure"] = to_value(&report.failure());
    result["known_limit"] = json!(limit.to_string());
    result["note"] = to_value(&note);
    let config = json!({ "gadget": gadget.name, "r": report.r, "t": report.t, "k": k });
    Ok(Outcome::json(envelope("gadget-check", config, result), report.eligible))
}

fn pack(gadget: &GadgetArgs, run: &RunArgs, n: usize, seed: u64, out: &Path) -> Result<Outcome> {
    let g = load_gadget(gadget)?;
    let config = run.config(n, seed);
    let state = run_greedy(&g, &config)?;
    let extraction = state.extract()?;
    let stem = format!("{}-n{}-seed{}", g.name, n, seed);
    let hg_path = out.join(format!("{stem}.hg"));
    let cert_path = out.join(format!("{stem}.cert.json"));
    write_hg(&hg_path, &extraction.graph)?;
    let cert = serde_json::to_vec_pretty(&extraction.certificate).expect("json");
    write_atomic(&cert_path, &cert)?;
    let result = json!({
        "graph": hg_path,
        "certificate": cert_path,
        "density": to_value(&state.density_report()),
        "stats": to_value(state.stats()),
        "rolled_back": extraction.rolled_back,
    });
    let cfg = json!({ "gadget": g.name, "r": g.r(), "t": g.t, "packing": to_value(&config) });
    Ok(Outcome::json(envelope("pack", cfg, result), true))
}

fn verify(input: &Path, s: usize, k: usize) -> Result<Outcome> {
    let g = read_hg(input)?;
    let spec = ConfigSpec::new(s, k)?;
    let violation = is_free(&g, &[spec])?;
    let witness_edges = violation
        .as_ref()
        .map(|v| v.witness.edge_indices.iter().map(|&e| g.edge(e).to_vec()).collect::<Vec<_>>());
    let result = json!({
        "free": violation.is_none(),
        "edges": g.len(),
        "witness": to_value(&violation.as_ref().map(|v| &v.witness)),
        "witness_edges": witness_edges,
    });
    let cfg = json!({ "input": input, "s": s, "k": k });
    Ok(Outcome::json(envelope("verify", cfg, result), violation.is_none()))
}

fn analyze(input: &Path, t: usize) -> Result<Outcome> {
    let g = read_hg(input)?;
    let report = certified_upper_bound(&g, t)?;
    let cfg = json!({ "input": input, "t": t });
    let sound = report.sound;
    Ok(Outcome::json(envelope("analyze", cfg, to_value(&report)), sound))
}

#[allow(clippy::too_many_arguments)]
fn oracle(n: usize, r: usize, s: usize, k: usize, extra: &[ConfigSpec], force: bool, out: Option<&Path>) -> Result<Outcome> {
    let mut specs = vec![ConfigSpec::new(s, k)?];
    specs.extend_from_slice(extra);
    let res = exact_max(
        n,
        r,
        &specs,
        OracleOptions {
            force,
            ..Default::default()
        },
    )?;
    let mut result = to_value(&res);
    if let Some(dir) = out {
        let path = dir.join(format!("oracle-n{n}-r{r}.hg"));
        write_hg(&path, &res.witness())?;
        result["witness_file"] = to_value(&path);
    }
    let cfg = json!({ "n": n, "r": r, "specs": specs, "force": force });
    Ok(Outcome::json(envelope("oracle", cfg, result), true))
}

fn limits(r: usize, t: usize, k: usize, format: Format) -> Result<Outcome> {
    let value = limit_table(r, t, k)?;
    match format {
        Format::Json => {
            let cfg = json!({ "r": r, "t": t, "k": k });
            let mut result = to_value(&value);
            result["display"] = json!(value.to_string());
            Ok(Outcome::json(envelope("limits", cfg, result), value != LimitValue::Unknown))
        }
        _ => Ok(Outcome {
            stdout: format!("{value}\n"),
            ok: true,
        }),
    }
}

#[derive(Debug, Serialize)]
struct SweepRow {
    n: usize,
    seed: u64,
    edges: usize,
    target_fraction: f64,
    verified: bool,
}

fn sweep_cell(gadget: &Gadget, run: &RunArgs, n: usize, seed: u64) -> Result<SweepRow> {
    let state = run_greedy(gadget, &run.config(n, seed))?;
    let extraction = state.extract()?;
    let verified = is_free(&extraction.graph, &extraction.certificate.specs_verified)?.is_none();
    Ok(SweepRow {
        n,
        seed,
        edges: extraction.graph.len(),
        target_fraction: extraction.certificate.target_fraction,
        verified,
    })
}

fn thread_count() -> Result<Option<usize>> {
    match std::env::var("GIRTHPACK_THREADS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&x| x > 0)
            .map(Some)
            .ok_or_else(|| Error::Param(format!("GIRTHPACK_THREADS must be a positive integer, got {v:?}"))),
        Err(_) => Ok(None),
    }
}

fn sweep(
    gadget: &GadgetArgs,
    run: &RunArgs,
    ns: &[usize],
    seeds: &SeedList,
    out: Option<&Path>,
    format: Format,
) -> Result<Outcome> {
    let g = load_gadget(gadget)?;
    // validate before spending any time
    let report = check_eligibility(&g, run.k)?;
    if let Some(reason) = report.failure() {
        return Err(Error::Ineligible { k: run.k, reason });
    }
    if let Some(&bad) = ns.iter().find(|&&n| n < g.m()) {
        return Err(Error::Param(format!("n = {bad} is below the gadget size {}", g.m())));
    }
    let grid: Vec<(usize, u64)> = ns.iter().flat_map(|&n| seeds.0.iter().map(move |&s| (n, s))).collect();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(threads) = thread_count()? {
        builder = builder.num_threads(threads);
    }
    let pool = builder.build().map_err(|e| Error::Param(e.to_string()))?;
    let rows: Vec<SweepRow> = pool.install(|| {
        grid.par_iter()
            .map(|&(n, seed)| sweep_cell(&g, run, n, seed))
            .collect::<Result<_>>()
    })?;
    let all_verified = rows.iter().all(|r| r.verified);
    let text = match format {
        Format::Json => {
            let cfg = json!({ "gadget": g.name, "r": g.r(), "t": g.t, "run": to_value(run), "n": ns, "seeds": seeds.0 });
            serde_json::to_string_pretty(&envelope("sweep", cfg, to_value(&rows))).expect("json") + "\n"
        }
        _ => {
            let mut s = String::from(CSV_HEADER);
            s.push('\n');
            for r in &rows {
                s.push_str(&format!("{},{},{},{:.6},{}\n", r.n, r.seed, r.edges, r.target_fraction, r.verified));
            }
            s
        }
    };
    match out {
        Some(path) => {
            write_atomic(path, text.as_bytes())?;
            Ok(Outcome {
                stdout: String::new(),
                ok: all_verified,
            })
        }
        None => Ok(Outcome {
            stdout: text,
            ok: all_verified,
        }),
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::GadgetCheck { gadget, k } => gadget_check(gadget, *k),
        Command::Pack {
            gadget,
            run,
            n,
            seed,
            out,
        } => pack(gadget, run, *n, *seed, out),
        Command::Verify { input, s, k } => verify(input, *s, *k),
        Command::Analyze { input, t } => analyze(input, *t),
        Command::Oracle {
            n,
            r,
            s,
            k,
            extra,
            force,
            out,
        } => oracle(*n, *r, *s, *k, extra, *force, out.as_deref()),
        Command::Limits { r, t, k, format } => limits(*r, *t, *k, *format),
        Command::Sweep {
            gadget,
            run,
            n,
            seeds,
            out,
            format,
        } => sweep(gadget, run, n, seeds, out.as_deref(), *format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            if outcome.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            let err = json!({
                "schema_version": SCHEMA_VERSION,
                "error": {
                    "kind": e.kind(),
                    "message": e.to_string(),
                    "witness": to_value(&e.witness()),
                }
            });
            eprintln!("{err}");
            ExitCode::from(2)
        }
    }
}
