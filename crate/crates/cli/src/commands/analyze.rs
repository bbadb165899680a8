use std::collections::BTreeMap;
use std::fmt::Display;

use clap::Args;
use num_rational::BigRational;
use prs_core::analysis::{
    crude_critical_activity, expected_counts, hardcore_lambda, lll_check, p_vector, q_table,
    AnalysisError, ExpectedCounts, DEFAULT_SET_CAP,
};
use prs_core::instance::{build_dependency_graph, check_extremal, WeightMode, DEFAULT_ENUMERATION_CAP};
use prs_core::problems::cluster_certificate;
use prs_core::{ClauseKey, Instance, Scalar};

use super::Global;
use crate::error::CliError;
use crate::input::{Loaded, Target};
use crate::output::Report;

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub target: Target,
    /// Report the hard-core activity threshold for maximum degree --delta
    /// instead of analysing an instance.
    #[arg(long, conflicts_with_all = ["encoding", "graph", "instance"])]
    pub hardcore_threshold: bool,
    #[arg(long, default_value_t = 3, requires = "hardcore_threshold")]
    pub delta: u32,
}

pub fn run(args: &AnalyzeArgs, _global: &Global, out: &mut Report) -> Result<(), CliError> {
    if args.hardcore_threshold {
        return threshold(args.delta, out);
    }
    let loaded = args.target.load()?;
    for note in &loaded.notes {
        eprintln!("note: {note}");
    }
    let instance = if loaded.encoded.instance.is_explicit() {
        loaded.encoded.instance.clone()
    } else {
        loaded.encoded.instance.materialize()?
    };
    let exact = instance.domains().iter().all(|d| d.mode() == WeightMode::Exact);
    out.kv("encoding", loaded.encoded.name)?;
    out.kv("arithmetic", if exact { "exact" } else { "float" })?;
    out.kv("variables", instance.num_variables())?;
    out.kv("clauses", instance.clauses()?.len())?;
    if exact {
        analyze_with::<BigRational>(&instance, out)?;
    } else {
        analyze_with::<f64>(&instance, out)?;
    }
    if loaded.encoded.name == "hardcore" {
        certificate(&loaded, &instance, out)?;
    }
    Ok(())
}

fn threshold(delta: u32, out: &mut Report) -> Result<(), CliError> {
    let t = hardcore_lambda(delta)?;
    out.kv("delta", delta)?;
    out.kv("maximiser", format!("{:.7}", t.maximizer))?;
    out.kv("bound", format!("{:.7}", t.p_delta))?;
    out.kv(&format!("lambda_{delta}"), format!("{:.7}", t.lambda))?;
    if delta >= 2 {
        let c = crude_critical_activity(delta)?;
        out.kv("crude z_c", format!("{:.7}", c.z_c))?;
        out.kv("crude lambda_c", format!("{:.7}", c.lambda_c))?;
    }
    Ok(())
}

fn analyze_with<T: Scalar + Display>(instance: &Instance, out: &mut Report) -> Result<(), CliError> {
    let keys: Vec<ClauseKey> = instance.clauses()?.iter().map(|c| c.key().clone()).collect();
    let extremal = check_extremal(instance, DEFAULT_ENUMERATION_CAP)?.extremal;
    out.kv("extremal", if extremal { "yes" } else { "no" })?;
    if extremal {
        let counts: ExpectedCounts<T> = expected_counts(instance)?;
        write_table(&counts.keys, &counts.table.p, &counts.table.q_empty, &counts.table.q_singleton, out)?;
        for (key, e) in counts.keys.iter().zip(&counts.per_clause) {
            out.kv(&format!("expected resamples[{key}]"), e)?;
        }
        out.kv("predicted iterations", &counts.iterations)?;
        out.kv("predicted variable resamples", &counts.variable_resamples)?;
        if counts.escalated {
            out.kv("escalated to exact arithmetic", "yes")?;
        }
        return Ok(());
    }
    let g = build_dependency_graph(instance)?;
    let p = p_vector::<T>(instance)?;
    let table = q_table(&g, &p, DEFAULT_SET_CAP)?;
    write_table(&keys, &table.p, &table.q_empty, &table.q_singleton, out)?;
    out.kv("predicted iterations", "unavailable (instance is not extremal)")?;
    Ok(())
}

fn write_table<T: Display>(keys: &[ClauseKey], p: &[T], q_empty: &T, q: &[T], out: &mut Report) -> Result<(), CliError> {
    for (key, pk) in keys.iter().zip(p) {
        out.kv(&format!("p[{key}]"), pk)?;
    }
    out.kv("q_empty", q_empty)?;
    for (key, qk) in keys.iter().zip(q) {
        out.kv(&format!("q[{key}]"), qk)?;
    }
    Ok(())
}

/// Local lemma check of the cluster certificate at the threshold maximiser
/// for the graph's maximum degree.
fn certificate(loaded: &Loaded, instance: &Instance, out: &mut Report) -> Result<(), CliError> {
    let Some(g) = &loaded.graph else { return Ok(()) };
    let delta = g.max_degree() as u32;
    if delta == 0 {
        return Ok(());
    }
    let t = hardcore_lambda(delta)?;
    let cert = cluster_certificate(g, t.maximizer)?;
    let by_key: BTreeMap<&ClauseKey, f64> = cert.keys.iter().zip(&cert.x).map(|(k, &x)| (k, x)).collect();
    let clauses = instance.clauses()?;
    let x = clauses
        .iter()
        .map(|c| {
            by_key
                .get(c.key())
                .copied()
                .ok_or_else(|| AnalysisError::InvalidCertificate(format!("no weight for clause {}", c.key())))
        })
        .collect::<Result<Vec<f64>, _>>()?;
    let dep = build_dependency_graph(instance)?;
    let p = p_vector::<f64>(instance)?;
    let report = lll_check(&dep, &p, &x)?;
    out.kv(&format!("activity threshold (max degree {delta})"), format!("{:.7}", t.lambda))?;
    let verdict = if report.valid {
        "valid".to_string()
    } else {
        format!("invalid ({} of {} clauses fail)", report.failing.len(), clauses.len())
    };
    out.kv("cluster certificate", verdict)?;
    if report.valid {
        for (c, b) in clauses.iter().zip(&report.bounds) {
            out.kv(&format!("resample bound[{}]", c.key()), format!("{b:.6}"))?;
        }
    }
    Ok(())
}
