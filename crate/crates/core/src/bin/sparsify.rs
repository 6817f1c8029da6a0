//! CLI workbench. Exit codes: 0 success, 1 verification violation, 2 usage
//! or construction error.
//!
//! Constant overrides via environment: SPARSIFY_C_DETECT, SPARSIFY_C_LARGE,
//! SPARSIFY_C_SAMPLE, SPARSIFY_C_ERR.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use sparsify::clustering::{self, BoundParams, ClusterClass};
use sparsify::error::{Error, Result};
use sparsify::graph::Node;
use sparsify::instances;
use sparsify::io;
use sparsify::preserver::{self, Provenance, PreserverParams};
use sparsify::spanner::{self, StandardParams};
use sparsify::sweep::{self, SweepSpec, DEFAULT_CAP};
use sparsify::verify;

#[derive(Parser)]
#[command(name = "sparsify", version, about = "graph sparsification workbench")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate instances.
    Gen {
        #[command(subcommand)]
        family: GenCmd,
    },
    /// Padded-core clustering; emits a CSV cluster table.
    Cluster(ClusterArgs),
    /// Distance preserver constructions.
    Preserver {
        #[command(subcommand)]
        cmd: PreserverCmd,
    },
    /// Spanner constructions.
    Spanner {
        #[command(subcommand)]
        cmd: SpannerCmd,
    },
    /// BFS audit of a subgraph against an additive budget.
    Verify(VerifyArgs),
    /// Benchmark sweeps over instance grids; emits CSV.
    Sweep(SweepArgs),
}

#[derive(Subcommand)]
enum GenCmd {
    /// Layered lower-bound instance (width q, prime).
    Layered {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        layers: u32,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        pairs_out: Option<PathBuf>,
    },
    /// Uniform random graph with exactly m edges.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// w x h grid.
    Grid {
        #[arg(long)]
        w: usize,
        #[arg(long)]
        h: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct ClusterArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    r: u32,
    /// Comma-separated a,b,E for the large-cluster threshold.
    #[arg(long, default_value = "0.6666666666666666,0.6666666666666666,1")]
    params: String,
}

#[derive(Subcommand)]
enum PreserverCmd {
    Build {
        #[arg(long, value_parser = ["naive", "new"])]
        algo: String,
        /// Threshold exponent: "auto" or a real in [0, 1].
        #[arg(long, default_value = "auto")]
        eps: String,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        pairs: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum SpannerCmd {
    Subset {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        subset: PathBuf,
        #[arg(long)]
        d: f64,
        #[arg(long, default_value_t = 2.0 / 3.0)]
        a: f64,
        #[arg(long, default_value_t = 2.0 / 3.0)]
        b: f64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    Standard {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        d: f64,
        /// Comma-separated preserver exponents a,b.
        #[arg(long, default_value = "0.6666666666666666,0.6666666666666666")]
        ab: String,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Subgraph edge-list file.
    #[arg(long)]
    h: PathBuf,
    #[arg(long)]
    pairs: PathBuf,
    #[arg(long, default_value_t = 0.0)]
    budget: f64,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_parser = ["layered", "random", "grid"])]
    family: String,
    #[arg(long, value_parser = ["naive", "new", "subset", "standard"])]
    algo: String,
    /// Comma-separated sizes: q for layered, n for random, side for grid.
    #[arg(long)]
    sizes: String,
    /// Comma-separated demand-set sizes (preserver sweeps).
    #[arg(long, default_value = "")]
    pairs: String,
    /// Comma-separated error exponents (spanner sweeps).
    #[arg(long, default_value = "")]
    ds: String,
    #[arg(long, default_value_t = 2.0 / 3.0)]
    a: f64,
    #[arg(long, default_value_t = 2.0 / 3.0)]
    b: f64,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: usize,
}

fn env_f64(name: &str, default: f64) -> Result<f64> {
    match std::env::var(name) {
        Ok(s) => s
            .parse()
            .map_err(|_| Error::invalid(format!("{name} must be a real number, got {s:?}"))),
        Err(_) => Ok(default),
    }
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Error::invalid(format!("bad {what} entry {t:?}")))
        })
        .collect()
}

fn run(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Gen { family } => run_gen(family)?,
        Cmd::Cluster(args) => run_cluster(args)?,
        Cmd::Preserver {
            cmd: PreserverCmd::Build {
                algo,
                eps,
                graph,
                pairs,
                out,
            },
        } => run_preserver(&algo, &eps, &graph, &pairs, &out)?,
        Cmd::Spanner { cmd } => run_spanner(cmd)?,
        Cmd::Verify(args) => return run_verify(args),
        Cmd::Sweep(args) => run_sweep(args)?,
    }
    Ok(true)
}

fn run_gen(cmd: GenCmd) -> Result<()> {
    match cmd {
        GenCmd::Layered {
            q,
            layers,
            out,
            pairs_out,
        } => {
            let inst = instances::layered_graph(q, layers)?;
            io::write_graph(&out, &inst.graph)?;
            if let Some(p) = pairs_out {
                io::write_pairs(&p, &inst.pairs)?;
            }
            println!(
                "layered q={q} layers={layers} n={} m={} pairs={}",
                inst.graph.n(),
                inst.graph.m(),
                inst.pairs.len()
            );
        }
        GenCmd::Random { n, m, seed, out } => {
            let g = instances::random_graph(n, m, seed)?;
            io::write_graph(&out, &g)?;
            println!("random n={} m={} seed={seed}", g.n(), g.m());
        }
        GenCmd::Grid { w, h, out } => {
            let g = instances::grid_graph(w, h)?;
            io::write_graph(&out, &g)?;
            println!("grid w={w} h={h} n={} m={}", g.n(), g.m());
        }
    }
    Ok(())
}

fn parse_bound_params(s: &str, d: f64) -> Result<BoundParams> {
    let vals: Vec<f64> = parse_list(s, "params")?;
    if vals.len() != 3 {
        return Err(Error::invalid("expected a,b,E"));
    }
    let mut p = BoundParams::new(vals[0], vals[1], d, vals[2])?;
    p.c_large = env_f64("SPARSIFY_C_LARGE", p.c_large)?;
    p.validate()?;
    Ok(p)
}

fn run_cluster(args: ClusterArgs) -> Result<()> {
    let g = io::read_graph(&args.graph)?;
    let p = parse_bound_params(&args.params, 0.0)?;
    let cl = clustering::build_clustering(&g, args.r)?;
    clustering::audit_clustering(&g, &cl)?;
    println!("center,r_i,core_size,cluster_size,label");
    for i in 0..cl.len() {
        let label = match clustering::classify_cluster(cl.clusters[i].len(), cl.base_radius, &p) {
            ClusterClass::Large => "large",
            ClusterClass::Small => "small",
        };
        println!(
            "{},{},{},{},{}",
            cl.centers[i],
            cl.radii[i],
            cl.cores[i].len(),
            cl.clusters[i].len(),
            label
        );
    }
    Ok(())
}

fn run_preserver(algo: &str, eps: &str, graph: &Path, pairs: &Path, out: &Path) -> Result<()> {
    let g = io::read_graph(graph)?;
    let p = io::read_pairs(pairs, g.n())?;
    let pres = match algo {
        "naive" => preserver::naive_preserver(&g, &p)?,
        _ => {
            let epsilon = match eps {
                "auto" => None,
                v => Some(v.parse().map_err(|_| Error::invalid("bad --eps"))?),
            };
            let params = PreserverParams {
                epsilon,
                c_detect: env_f64("SPARSIFY_C_DETECT", 1.0)?,
                ..Default::default()
            };
            preserver::new_preserver(&g, &p, &params)?
        }
    };
    io::write_edge_set(out, g.n(), pres.edges.iter().copied())?;
    let hist = pres.provenance_histogram();
    let count = |tag: Provenance| hist.get(&tag).copied().unwrap_or(0);
    let aux: usize = hist
        .iter()
        .filter(|(k, _)| matches!(k, Provenance::Auxiliary(_)))
        .map(|(_, v)| v)
        .sum();
    println!(
        "m={} n={} pairs={} b={} naive={} leftover={} auxiliary={} aux_count={}",
        pres.edges.len(),
        g.n(),
        p.len(),
        pres.branching_events(),
        count(Provenance::Naive),
        count(Provenance::Leftover),
        aux,
        pres.auxiliaries.len()
    );
    Ok(())
}

fn run_spanner(cmd: SpannerCmd) -> Result<()> {
    match cmd {
        SpannerCmd::Subset {
            graph,
            subset,
            d,
            a: _,
            b: _,
            out,
            cap,
        } => {
            let g = io::read_graph(&graph)?;
            let s = io::read_node_set(&subset, g.n())?;
            let res = spanner::subset_spanner(&g, &s, d)?;
            io::write_edge_set(&out, g.n(), res.edges.iter().copied())?;
            let mut raw = Vec::new();
            for (i, &x) in s.iter().enumerate() {
                for &y in &s[i + 1..] {
                    raw.push((x, y));
                }
            }
            let err = if g.n() <= cap && !raw.is_empty() {
                let demands = sparsify::graph::PairSet::new(&raw, g.n())?;
                let rep = verify::verify(&g, &res.edges, &demands, res.beta_target)?;
                if !rep.passed() {
                    return Err(Error::internal("subset spanner failed its certificate"));
                }
                rep.max_additive_error.to_string()
            } else {
                "skipped".into()
            };
            println!(
                "n={} m={} h={} beta={:.6} mult={} subset={} max_error={err}",
                g.n(),
                g.m(),
                res.edges.len(),
                res.beta_target,
                res.mult_edges,
                res.subset_edges
            );
        }
        SpannerCmd::Standard {
            graph,
            d,
            ab,
            seed,
            out,
            cap,
        } => {
            let g = io::read_graph(&graph)?;
            let vals: Vec<f64> = parse_list(&ab, "ab")?;
            if vals.len() != 2 {
                return Err(Error::invalid("expected --ab a,b"));
            }
            let mut sp = StandardParams::new(d, vals[0], vals[1], seed)?;
            sp.c_sample = env_f64("SPARSIFY_C_SAMPLE", sp.c_sample)?;
            sp.c_err = env_f64("SPARSIFY_C_ERR", sp.c_err)?;
            sp.validate()?;
            let res = spanner::standard_spanner(&g, &sp)?;
            io::write_edge_set(&out, g.n(), res.edges.iter().copied())?;
            let err = if g.n() <= cap {
                let mut raw = Vec::new();
                for u in 0..g.n() as Node {
                    for v in u + 1..g.n() as Node {
                        raw.push((u, v));
                    }
                }
                let demands = sparsify::graph::PairSet::new(&raw, g.n())?;
                let rep = verify::verify(&g, &res.edges, &demands, res.beta_target)?;
                if !rep.passed() {
                    return Err(Error::internal("standard spanner failed its certificate"));
                }
                rep.max_additive_error.to_string()
            } else {
                "skipped".into()
            };
            println!(
                "n={} m={} h={} beta={:.6} sample={} mult={} subset={} paths={} max_error={err}",
                g.n(),
                g.m(),
                res.edges.len(),
                res.beta_target,
                sp.sample_size(g.n()),
                res.mult_edges,
                res.subset_edges,
                res.path_edges
            );
        }
    }
    Ok(())
}

fn run_verify(args: VerifyArgs) -> Result<bool> {
    let g = io::read_graph(&args.graph)?;
    let h = io::read_graph(&args.h)?;
    if h.n() != g.n() {
        return Err(Error::invalid(format!(
            "subgraph declares n = {} but the host has n = {}",
            h.n(),
            g.n()
        )));
    }
    let demands = io::read_pairs(&args.pairs, g.n())?;
    let h_edges = h.edges().iter().copied().collect();
    let rep = verify::verify(&g, &h_edges, &demands, args.budget)?;
    println!(
        "demands={} max_additive_error={} max_stretch={:.4} violations={}",
        rep.demand_count,
        rep.max_additive_error,
        rep.max_multiplicative_stretch,
        rep.violations.len()
    );
    for &(u, v, dg, dh) in rep.violations.iter().take(20) {
        println!("violation {u} {v} d_g={dg:?} d_h={dh:?}");
    }
    Ok(rep.passed())
}

fn run_sweep(args: SweepArgs) -> Result<()> {
    let spec = SweepSpec {
        family: sweep::Family::parse(&args.family)?,
        algo: sweep::Algo::parse(&args.algo)?,
        sizes: parse_list(&args.sizes, "sizes")?,
        pair_counts: parse_list(&args.pairs, "pairs")?,
        ds: parse_list(&args.ds, "ds")?,
        a: args.a,
        b: args.b,
        seed: args.seed,
        cap: args.cap,
    };
    let rows = sweep::sweep(&spec)?;
    let text = sweep::rows_to_csv(&rows)?;
    io::write_text(&args.out, &text)?;
    println!("rows={}", rows.len());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
