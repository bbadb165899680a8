use clap::{Args, ValueEnum};
use prs_core::verify::{
    confluence_check_prf, distribution_check, runtime_check, DistributionConfig, Level, DEFAULT_SAMPLES,
};
use prs_core::ChoicePolicy;

use super::{parse_policy, Global};
use crate::error::CliError;
use crate::input::Target;
use crate::output::Report;

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum LevelArg {
    Object,
    Assignment,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub target: Target,
    /// Number of samples; sample `i` uses table seed `seed + i`.
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub n: usize,
    /// Total variation threshold; defaults to a support-dependent value.
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Comma-separated policies. The first drives the distribution check;
    /// with two or more, transcripts are compared across all of them.
    #[arg(long, value_delimiter = ',')]
    pub policies: Vec<String>,
    /// Tables used by the confluence comparison.
    #[arg(long, default_value_t = 1000)]
    pub confluence_seeds: u64,
    /// Runs for comparing mean resampling counts with their predictions (0 skips).
    #[arg(long, default_value_t = 0)]
    pub runtime_runs: usize,
    #[arg(long, value_enum, default_value_t = LevelArg::Object)]
    pub level: LevelArg,
}

pub fn run(args: &VerifyArgs, global: &Global, out: &mut Report) -> Result<bool, CliError> {
    args.target.validate()?;
    let policies: Vec<ChoicePolicy> = args
        .policies
        .iter()
        .map(|p| parse_policy(p, global.seed))
        .collect::<Result<_, _>>()?;
    if let Some(t) = args.threshold {
        if !(t > 0.0 && t <= 1.0) {
            return Err(CliError::Usage(format!("--threshold must lie in (0, 1], got {t}")));
        }
    }
    let loaded = args.target.load()?;
    for note in &loaded.notes {
        eprintln!("note: {note}");
    }
    let encoded = &loaded.encoded;
    let config = DistributionConfig {
        samples: args.n,
        threshold: args.threshold,
        seed_base: global.seed,
        level: match args.level {
            LevelArg::Object => Level::Object,
            LevelArg::Assignment => Level::Assignment,
        },
        max_iterations: global.cap,
        policy: policies.first().cloned(),
    };
    let report = distribution_check(encoded, &config)?;
    out.kv("encoding", &report.encoding)?;
    out.kv("level", format!("{:?}", report.level).to_lowercase())?;
    out.kv("policy", policies.first().map_or("default".into(), ChoicePolicy::name))?;
    out.kv("samples", report.samples)?;
    out.kv("seed base", report.seed_base)?;
    out.kv("support", report.support)?;
    out.kv("tv", format!("{:.6}", report.tv))?;
    out.kv("threshold", report.threshold)?;
    out.kv("distribution", pass_fail(report.pass))?;
    for (key, z) in &report.z_scores {
        out.kv(&format!("z[{key}]"), format!("{z:.3}"))?;
    }
    let mut pass = report.pass;

    if policies.len() >= 2 {
        if encoded.is_extremal() {
            let seeds: Vec<u64> = (0..args.confluence_seeds).map(|i| global.seed.wrapping_add(i)).collect();
            let c = confluence_check_prf(&encoded.instance, &seeds, &policies, global.cap)?;
            out.kv("confluence policies", c.policies.join(","))?;
            out.kv("confluence seeds", c.seeds)?;
            out.kv("confluence", pass_fail(c.pass))?;
            if let Some(ce) = &c.counterexample {
                out.kv(
                    "confluence counterexample",
                    format!("seed {} ({} vs {})", ce.seed, ce.first_policy, ce.second_policy),
                )?;
            }
            pass &= c.pass;
        } else {
            out.kv("confluence", "skipped (encoding uses a fixed clause rule)")?;
        }
    }

    if args.runtime_runs > 0 {
        let r = runtime_check(&encoded.instance, args.runtime_runs, global.seed, global.cap)?;
        out.kv("runtime runs", r.runs)?;
        for line in &r.lines {
            out.kv(
                &format!("runtime {}", line.quantity),
                format!(
                    "mean {:.6} se {:.6} predicted {:.6} {}",
                    line.mean,
                    line.se,
                    line.predicted,
                    pass_fail(line.pass)
                ),
            )?;
        }
        out.kv("runtime", pass_fail(r.pass))?;
        pass &= r.pass;
    }
    out.kv("verdict", pass_fail(pass))?;
    Ok(pass)
}

fn pass_fail(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "fail"
    }
}
