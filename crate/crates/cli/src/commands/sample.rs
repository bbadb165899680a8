use clap::Args;
use prs_core::{ChoicePolicy, PrfTable, RunStats};
use rayon::prelude::*;

use super::{parse_policy, Global};
use crate::error::CliError;
use crate::input::Target;
use crate::output::{Format, Report};

#[derive(Args, Debug)]
pub struct SampleArgs {
    #[command(flatten)]
    pub target: Target,
    /// Number of samples; sample `i` uses table seed `seed + i`.
    #[arg(long, default_value_t = 1)]
    pub n: u64,
    /// Clause choice policy (lowest, highest, random[:SEED], round-robin,
    /// simultaneous, largest, hashed:SEED). Defaults to the encoding's own.
    #[arg(long)]
    pub policy: Option<String>,
}

const HEADER: &[&str] = &["sample", "seed", "iterations", "variable_resamples", "object"];

pub fn run(args: &SampleArgs, global: &Global, out: &mut Report) -> Result<(), CliError> {
    args.target.validate()?;
    let policy: Option<ChoicePolicy> = args.policy.as_deref().map(|p| parse_policy(p, global.seed)).transpose()?;
    let loaded = args.target.load()?;
    let encoded = &loaded.encoded;
    for note in &loaded.notes {
        eprintln!("note: {note}");
    }
    let domains = encoded.instance.domains();
    let runs: Vec<(u64, String, RunStats)> = (0..args.n)
        .into_par_iter()
        .map(|i| {
            let seed = global.seed.wrapping_add(i);
            let table = PrfTable::new(seed, domains);
            let outcome = match &policy {
                Some(p) => encoded.sample_with(p, &table, global.cap),
                None => encoded.sample(&table, global.cap),
            }?;
            Ok((seed, encoded.decode(&outcome.assignment).canonical_key(), outcome.stats))
        })
        .collect::<Vec<Result<_, prs_core::EngineError>>>()
        .into_iter()
        .collect::<Result<_, _>>()?;

    for (i, (seed, object, stats)) in runs.iter().enumerate() {
        match out.format() {
            Format::Text => out.line(object),
            Format::Csv => out.row(
                HEADER,
                &[
                    i.to_string(),
                    seed.to_string(),
                    stats.iterations.to_string(),
                    stats.variable_resamples.to_string(),
                    object.clone(),
                ],
            )?,
        }
    }
    if out.format() == Format::Text {
        let n = runs.len().max(1) as f64;
        let iterations: u64 = runs.iter().map(|r| r.2.iterations).sum();
        let variables: u64 = runs.iter().map(|r| r.2.variable_resamples).sum();
        out.kv("encoding", encoded.name)?;
        out.kv("samples", runs.len())?;
        out.kv("seeds", format!("{}..{}", global.seed, global.seed.wrapping_add(args.n)))?;
        out.kv("mean iterations", format!("{:.6}", iterations as f64 / n))?;
        out.kv("mean variable resamples", format!("{:.6}", variables as f64 / n))?;
    }
    Ok(())
}
