use std::collections::BTreeSet;
use std::time::Instant;

use clap::{Args, ValueEnum};
use prs_core::problems::find_sink_free_orientation;
use prs_core::verify::run_moments;
use prs_core::{Graph, PrfTable};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Global;
use crate::error::CliError;
use crate::input::{check_encoding, encode};
use crate::output::Report;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// Random spanning tree plus extra random edges.
    Random,
    Cycle,
    Complete,
    /// Ladder with `size / 2` rungs.
    Ladder,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long)]
    pub encoding: String,
    #[arg(long, value_enum, default_value_t = Family::Random)]
    pub family: Family,
    /// Vertex counts, comma-separated.
    #[arg(long, value_delimiter = ',', default_values_t = [10usize, 20, 30])]
    pub sizes: Vec<usize>,
    /// Extra edges of random graphs beyond the spanning tree; defaults to half the vertex count.
    #[arg(long)]
    pub extra: Option<usize>,
    #[arg(long, default_value_t = 1000)]
    pub runs: usize,
    #[arg(long)]
    pub lambda: Option<String>,
    /// Add a wall-clock column. Timings vary between runs.
    #[arg(long)]
    pub timing: bool,
}

/// Connected graph: random spanning tree plus `extra` further edges.
pub fn random_graph(n: usize, extra: usize, seed: u64) -> Result<Graph, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = BTreeSet::new();
    for v in 1..n {
        edges.insert((rng.random_range(0..v), v));
    }
    let target = (n.saturating_sub(1) + extra).min(n * n.saturating_sub(1) / 2);
    while edges.len() < target {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u != v {
            edges.insert((u.min(v), u.max(v)));
        }
    }
    Ok(Graph::undirected(n, edges.into_iter().collect())?)
}

fn family_graph(args: &BenchArgs, n: usize, seed: u64) -> Result<Graph, CliError> {
    Ok(match args.family {
        Family::Random => random_graph(n, args.extra.unwrap_or(n / 2), seed)?,
        Family::Cycle => Graph::cycle(n),
        Family::Complete => Graph::complete(n),
        Family::Ladder => Graph::ladder((n / 2).max(2)),
    })
}

pub fn run(args: &BenchArgs, global: &Global, out: &mut Report) -> Result<(), CliError> {
    check_encoding(&args.encoding)?;
    if args.runs == 0 {
        return Err(CliError::Usage("--runs must be positive".into()));
    }
    if args.sizes.iter().any(|&n| n < 3) {
        return Err(CliError::Usage("--sizes entries must be at least 3".into()));
    }
    let mut header = vec![
        "encoding",
        "family",
        "vertices",
        "edges",
        "runs",
        "mean_iterations",
        "se_iterations",
        "mean_variable_resamples",
        "se_variable_resamples",
    ];
    if args.timing {
        header.push("seconds");
    }
    for (i, &n) in args.sizes.iter().enumerate() {
        let mut g = family_graph(args, n, global.seed.wrapping_add(i as u64))?;
        match args.encoding.as_str() {
            "root-connected" => g = g.bidirected(),
            "sink-free" => g = find_sink_free_orientation(&g).unwrap_or(g),
            _ => {}
        }
        let loaded = encode(&args.encoding, g, args.lambda.as_deref())?;
        let encoded = &loaded.encoded;
        let graph = loaded.graph.as_ref().expect("encodings of graphs keep the graph");
        let domains = encoded.instance.domains();
        let start = Instant::now();
        let m = run_moments(args.runs, global.seed, &[], |seed| {
            encoded.sample(&PrfTable::new(seed, domains), global.cap).map(|o| o.stats)
        })?;
        let seconds = start.elapsed().as_secs_f64();
        let mut fields = vec![
            args.encoding.clone(),
            format!("{:?}", args.family).to_lowercase(),
            graph.n().to_string(),
            graph.edges().len().to_string(),
            args.runs.to_string(),
            format!("{:.6}", m.iterations.mean),
            format!("{:.6}", m.iterations.se),
            format!("{:.6}", m.variable_resamples.mean),
            format!("{:.6}", m.variable_resamples.se),
        ];
        if args.timing {
            fields.push(format!("{seconds:.6}"));
        }
        out.row(&header, &fields)?;
    }
    Ok(())
}
