//! Statistical and combinatorial checks of the sampler: distributions
//! against exact enumeration, transcript confluence across policies, and
//! empirical run counts against the exact predictions.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::analysis::{brute_force_target, expected_counts_f64, AnalysisError, TargetDist, BRUTE_FORCE_CAP};
use crate::engine::{
    run_extremal, table_cell, ChoicePolicy, EngineError, PrfTable, ResamplingTable, RunStats,
};
use crate::instance::{ClauseKey, DomainDist, Instance};
use crate::problems::Encoded;

/// Sample size used when the caller does not choose one.
pub const DEFAULT_SAMPLES: usize = 100_000;

/// Threshold floor for the total variation test.
pub const TV_FLOOR: f64 = 0.02;

/// Largest support size for which the floor is used unchanged.
pub const SMALL_SUPPORT: usize = 32;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("empty sample")]
    EmptySample,
    #[error("run with seed {seed} failed: {source}")]
    Run {
        seed: u64,
        #[source]
        source: EngineError,
    },
    #[error("runtime predictions only apply to extremal instances: {0}")]
    NotExtremal(String),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Counts of canonical outcome keys.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EmpiricalDist {
    pub counts: BTreeMap<String, u64>,
    pub total: u64,
}

impl EmpiricalDist {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, key: String) {
        *self.counts.entry(key).or_insert(0) += 1;
        self.total += 1;
    }

    /// Merges counts from another sample. The result does not depend on
    /// the order in which partial samples are merged.
    pub fn merge(mut self, other: EmpiricalDist) -> EmpiricalDist {
        for (k, c) in other.counts {
            *self.counts.entry(k).or_insert(0) += c;
        }
        self.total += other.total;
        self
    }

    pub fn frequency(&self, key: &str) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        self.counts.get(key).copied().unwrap_or(0) as f64 / self.total as f64
    }
}

impl FromIterator<String> for EmpiricalDist {
    fn from_iter<I: IntoIterator<Item = String>>(iter: I) -> Self {
        let mut d = EmpiricalDist::new();
        for k in iter {
            d.add(k);
        }
        d
    }
}

/// Total variation distance between an empirical sample and an exact
/// distribution. Observed keys outside the exact support count in full.
pub fn tv_distance(emp: &EmpiricalDist, exact: &BTreeMap<String, f64>) -> Result<f64, VerifyError> {
    if emp.total == 0 {
        return Err(VerifyError::EmptySample);
    }
    let mut sum = 0.0;
    for (key, &p) in exact {
        sum += (emp.frequency(key) - p).abs();
    }
    for key in emp.counts.keys() {
        if !exact.contains_key(key) {
            sum += emp.frequency(key);
        }
    }
    Ok((sum / 2.0).clamp(0.0, 1.0))
}

/// Per-outcome z-scores `(freq - p) / sqrt(p (1 - p) / n)`. Outcomes with
/// zero exact probability that were observed get an infinite score.
pub fn z_scores(emp: &EmpiricalDist, exact: &BTreeMap<String, f64>) -> BTreeMap<String, f64> {
    let n = emp.total as f64;
    let mut out = BTreeMap::new();
    for (key, &p) in exact {
        let se = (p * (1.0 - p) / n).sqrt();
        let diff = emp.frequency(key) - p;
        let z = if se > 0.0 {
            diff / se
        } else if diff == 0.0 {
            0.0
        } else {
            diff.signum() * f64::INFINITY
        };
        out.insert(key.clone(), z);
    }
    for key in emp.counts.keys() {
        out.entry(key.clone()).or_insert(f64::INFINITY);
    }
    out
}

/// `0.02` for supports up to 32 outcomes, otherwise `max(0.02, 2 sqrt(support / n))`.
pub fn default_threshold(support: usize, n: usize) -> f64 {
    if support <= SMALL_SUPPORT || n == 0 {
        TV_FLOOR
    } else {
        TV_FLOOR.max(2.0 * (support as f64 / n as f64).sqrt())
    }
}

/// What a distribution check compares.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    /// Decoded objects, with the exact distribution pushed through the decoder.
    #[default]
    Object,
    /// Raw assignments.
    Assignment,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComparisonReport {
    pub encoding: String,
    pub level: Level,
    pub tv: f64,
    pub threshold: f64,
    pub pass: bool,
    pub samples: usize,
    /// Run `i` uses table seed `seed_base + i`.
    pub seed_base: u64,
    pub support: usize,
    pub z_scores: BTreeMap<String, f64>,
}

fn assignment_key(values: &[usize]) -> String {
    serde_json::to_string(values).expect("index lists serialise")
}

/// The exact distribution over outcome keys at the requested level.
pub fn exact_pushforward(
    encoded: &Encoded,
    target: &TargetDist<f64>,
    level: Level,
) -> BTreeMap<String, f64> {
    let mut out = BTreeMap::new();
    for (a, p) in &target.outcomes {
        let key = match level {
            Level::Object => encoded.decode(a).canonical_key(),
            Level::Assignment => assignment_key(a.as_slice()),
        };
        *out.entry(key).or_insert(0.0) += p;
    }
    out
}

/// Draws `n` samples with table seeds `seed_base..seed_base + n` in parallel.
pub fn sample_keys(
    encoded: &Encoded,
    policy: Option<&ChoicePolicy>,
    n: usize,
    seed_base: u64,
    level: Level,
    max_iterations: u64,
) -> Result<EmpiricalDist, VerifyError> {
    let domains = encoded.instance.domains();
    (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let seed = seed_base.wrapping_add(i);
            let table = PrfTable::new(seed, domains);
            let run = match policy {
                Some(p) => encoded.sample_with(p, &table, max_iterations),
                None => encoded.sample(&table, max_iterations),
            }
            .map_err(|source| VerifyError::Run { seed, source })?;
            Ok(match level {
                Level::Object => encoded.decode(&run.assignment).canonical_key(),
                Level::Assignment => assignment_key(run.assignment.as_slice()),
            })
        })
        .try_fold(EmpiricalDist::new, |mut d, key: Result<String, VerifyError>| {
            d.add(key?);
            Ok(d)
        })
        .try_reduce(EmpiricalDist::new, |a, b| Ok(a.merge(b)))
}

/// Options for [`distribution_check`].
#[derive(Clone, Debug)]
pub struct DistributionConfig {
    pub samples: usize,
    /// `None` picks [`default_threshold`].
    pub threshold: Option<f64>,
    pub seed_base: u64,
    pub level: Level,
    pub max_iterations: u64,
    pub policy: Option<ChoicePolicy>,
}

impl Default for DistributionConfig {
    fn default() -> Self {
        DistributionConfig {
            samples: DEFAULT_SAMPLES,
            threshold: None,
            seed_base: 0,
            level: Level::Object,
            max_iterations: crate::engine::DEFAULT_MAX_ITERATIONS,
            policy: None,
        }
    }
}

/// Samples the encoding and compares the outcome frequencies with the exact
/// distribution obtained by enumerating every assignment.
pub fn distribution_check(encoded: &Encoded, config: &DistributionConfig) -> Result<ComparisonReport, VerifyError> {
    let target = brute_force_target::<f64>(&encoded.instance, BRUTE_FORCE_CAP)?;
    let exact = exact_pushforward(encoded, &target, config.level);
    let emp = sample_keys(
        encoded,
        config.policy.as_ref(),
        config.samples,
        config.seed_base,
        config.level,
        config.max_iterations,
    )?;
    let tv = tv_distance(&emp, &exact)?;
    let threshold = config
        .threshold
        .unwrap_or_else(|| default_threshold(exact.len(), config.samples));
    Ok(ComparisonReport {
        encoding: encoded.name.to_string(),
        level: config.level,
        tv,
        threshold,
        pass: tv < threshold,
        samples: config.samples,
        seed_base: config.seed_base,
        support: exact.len(),
        z_scores: z_scores(&emp, &exact),
    })
}

/// Fraction of `trials` samples of size `n`, drawn directly from `exact`,
/// whose distance to `exact` is below `threshold`.
pub fn null_pass_rate(exact: &BTreeMap<String, f64>, n: usize, threshold: f64, trials: usize, seed: u64) -> f64 {
    let keys: Vec<&String> = exact.keys().collect();
    let mut cumulative = Vec::with_capacity(keys.len());
    let mut acc = 0.0;
    for k in &keys {
        acc += exact[*k];
        cumulative.push(acc);
    }
    let passes: usize = (0..trials)
        .into_par_iter()
        .filter(|&t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(t as u64));
            let mut emp = EmpiricalDist::new();
            for _ in 0..n {
                let u: f64 = rng.random::<f64>() * acc;
                let i = cumulative.partition_point(|&c| c <= u).min(keys.len() - 1);
                emp.add(keys[i].clone());
            }
            tv_distance(&emp, exact).is_ok_and(|tv| tv < threshold)
        })
        .count();
    passes as f64 / trials as f64
}

/// Two runs from the same table that disagree.
#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub seed: u64,
    pub first_policy: String,
    pub second_policy: String,
    pub first_transcript: String,
    pub second_transcript: String,
    pub first_assignment: Vec<usize>,
    pub second_assignment: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConfluenceReport {
    pub pass: bool,
    pub seeds: usize,
    pub policies: Vec<String>,
    /// Counterexample with the earliest seed in the list, if any.
    pub counterexample: Option<Counterexample>,
}

/// Makes a table for a seed.
pub type TableFactory<'a> = dyn Fn(u64) -> Box<dyn ResamplingTable + 'a> + Sync + 'a;

/// Random policies get a seed derived from the table seed so different
/// tables see different choice sequences.
fn reseed(policy: &ChoicePolicy, table_seed: u64) -> ChoicePolicy {
    match policy {
        ChoicePolicy::RandomFromN { seed } => ChoicePolicy::RandomFromN {
            seed: seed ^ table_seed.rotate_left(32),
        },
        other => other.clone(),
    }
}

/// Runs every policy on the table of every seed and checks that all runs
/// on the same table end with equal transcripts and assignments.
pub fn confluence_check(
    instance: &Instance,
    seeds: &[u64],
    policies: &[ChoicePolicy],
    tables: &TableFactory<'_>,
    max_iterations: u64,
) -> Result<ConfluenceReport, VerifyError> {
    let results: Vec<Result<Option<Counterexample>, VerifyError>> = seeds
        .par_iter()
        .map(|&seed| {
            let table = tables(seed);
            let mut first: Option<(String, crate::engine::RunOutcome)> = None;
            for policy in policies {
                let run = run_extremal(instance, &reseed(policy, seed), table.as_ref(), max_iterations)
                    .map_err(|source| VerifyError::Run { seed, source })?;
                match &first {
                    None => first = Some((policy.name(), run)),
                    Some((name, base)) => {
                        if base.transcript != run.transcript || base.assignment != run.assignment {
                            return Ok(Some(Counterexample {
                                seed,
                                first_policy: name.clone(),
                                second_policy: policy.name(),
                                first_transcript: base.transcript.to_json_string(),
                                second_transcript: run.transcript.to_json_string(),
                                first_assignment: base.assignment.as_slice().to_vec(),
                                second_assignment: run.assignment.as_slice().to_vec(),
                            }));
                        }
                    }
                }
            }
            Ok(None)
        })
        .collect();
    let mut counterexample = None;
    for r in results {
        if let Some(c) = r? {
            counterexample = Some(c);
            break;
        }
    }
    Ok(ConfluenceReport {
        pass: counterexample.is_none(),
        seeds: seeds.len(),
        policies: policies.iter().map(ChoicePolicy::name).collect(),
        counterexample,
    })
}

/// [`confluence_check`] with the standard pseudorandom tables.
pub fn confluence_check_prf(
    instance: &Instance,
    seeds: &[u64],
    policies: &[ChoicePolicy],
    max_iterations: u64,
) -> Result<ConfluenceReport, VerifyError> {
    let domains = instance.domains();
    let factory = move |seed: u64| -> Box<dyn ResamplingTable + '_> { Box::new(PrfTable::new(seed, domains)) };
    confluence_check(instance, seeds, policies, &factory, max_iterations)
}

/// Sample mean with its standard error.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Moments {
    pub mean: f64,
    pub std: f64,
    pub se: f64,
}

#[derive(Clone, Copy, Debug, Default)]
struct Accumulator {
    sum: f64,
    sum_sq: f64,
}

impl Accumulator {
    fn push(&mut self, x: f64) {
        self.sum += x;
        self.sum_sq += x * x;
    }

    fn moments(&self, n: usize) -> Moments {
        if n == 0 {
            return Moments::default();
        }
        let nf = n as f64;
        let mean = self.sum / nf;
        let var = if n > 1 {
            ((self.sum_sq - nf * mean * mean) / (nf - 1.0)).max(0.0)
        } else {
            0.0
        };
        Moments {
            mean,
            std: var.sqrt(),
            se: (var / nf).sqrt(),
        }
    }
}

/// Summary of repeated runs.
#[derive(Clone, Debug, Serialize)]
pub struct RunMoments {
    pub runs: usize,
    pub iterations: Moments,
    pub variable_resamples: Moments,
    /// Every clause resampled in some run, plus any requested keys.
    pub per_clause: BTreeMap<ClauseKey, Moments>,
}

/// Runs `sample` on tables with seeds `seed_base..seed_base + runs` and
/// summarises the statistics. `keys` are always reported, even if never resampled.
pub fn run_moments<F>(runs: usize, seed_base: u64, keys: &[ClauseKey], sample: F) -> Result<RunMoments, VerifyError>
where
    F: Fn(u64) -> Result<RunStats, EngineError> + Sync,
{
    let stats: Vec<RunStats> = (0..runs as u64)
        .into_par_iter()
        .map(|i| {
            let seed = seed_base.wrapping_add(i);
            sample(seed).map_err(|source| VerifyError::Run { seed, source })
        })
        .collect::<Result<_, _>>()?;
    let mut iterations = Accumulator::default();
    let mut variables = Accumulator::default();
    let mut per_clause: BTreeMap<ClauseKey, Accumulator> =
        keys.iter().map(|k| (k.clone(), Accumulator::default())).collect();
    for s in &stats {
        iterations.push(s.iterations as f64);
        variables.push(s.variable_resamples as f64);
        for k in s.clause_resamples.keys() {
            per_clause.entry(k.clone()).or_default();
        }
    }
    for (k, acc) in per_clause.iter_mut() {
        for s in &stats {
            acc.push(s.resamples_of(k) as f64);
        }
    }
    Ok(RunMoments {
        runs,
        iterations: iterations.moments(runs),
        variable_resamples: variables.moments(runs),
        per_clause: per_clause.into_iter().map(|(k, a)| (k, a.moments(runs))).collect(),
    })
}

/// One predicted quantity against its empirical mean.
#[derive(Clone, Debug, Serialize)]
pub struct RuntimeLine {
    pub quantity: String,
    pub predicted: f64,
    pub mean: f64,
    pub se: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RuntimeReport {
    pub runs: usize,
    pub seed_base: u64,
    pub pass: bool,
    pub lines: Vec<RuntimeLine>,
}

/// Number of standard errors allowed between prediction and empirical mean.
pub const RUNTIME_SIGMAS: f64 = 3.0;

fn runtime_line(quantity: String, predicted: f64, m: Moments) -> RuntimeLine {
    let slack = RUNTIME_SIGMAS * m.se + 1e-12 * predicted.abs().max(1.0);
    RuntimeLine {
        quantity,
        predicted,
        mean: m.mean,
        se: m.se,
        pass: (m.mean - predicted).abs() <= slack,
    }
}

/// Compares mean resampling counts over `runs` lowest-key runs with the
/// exact predictions. Non-extremal instances are refused.
pub fn runtime_check(
    instance: &Instance,
    runs: usize,
    seed_base: u64,
    max_iterations: u64,
) -> Result<RuntimeReport, VerifyError> {
    let predicted = match expected_counts_f64(instance) {
        Ok(p) => p,
        Err(AnalysisError::NotExtremal(a, b)) => {
            return Err(VerifyError::NotExtremal(format!("clauses {a} and {b} can be false together")))
        }
        Err(e) => return Err(e.into()),
    };
    let domains = instance.domains();
    let moments = run_moments(runs, seed_base, &predicted.keys, |seed| {
        let table = PrfTable::new(seed, domains);
        run_extremal(instance, &ChoicePolicy::LowestId, &table, max_iterations).map(|o| o.stats)
    })?;
    let mut lines = vec![
        runtime_line("iterations".into(), predicted.iterations, moments.iterations),
        runtime_line(
            "variable_resamples".into(),
            predicted.variable_resamples,
            moments.variable_resamples,
        ),
    ];
    for (k, key) in predicted.keys.iter().enumerate() {
        let m = moments.per_clause.get(key).copied().unwrap_or_default();
        lines.push(runtime_line(format!("clause {key}"), predicted.per_clause[k], m));
    }
    Ok(RuntimeReport {
        runs,
        seed_base,
        pass: lines.iter().all(|l| l.pass),
        lines,
    })
}

/// Marginal and serial-pair agreement of table cells with their domains.
#[derive(Clone, Debug, Serialize)]
pub struct TableReport {
    /// Per variable: distance between the column frequencies and the domain weights.
    pub marginal_tv: Vec<f64>,
    /// Per variable: distance between the frequencies of consecutive pairs
    /// `(row, row + 1)` and the product of the weights.
    pub pair_tv: Vec<f64>,
}

/// Reads `rows` cells of each column and measures how far their marginal
/// and consecutive-pair frequencies are from the domain distribution.
pub fn table_check(table: &dyn ResamplingTable, domains: &[DomainDist], rows: usize) -> TableReport {
    let mut marginal_tv = Vec::with_capacity(domains.len());
    let mut pair_tv = Vec::with_capacity(domains.len());
    for (var, d) in domains.iter().enumerate() {
        let weights: Vec<f64> = (0..d.len()).map(|i| d.float_weight(i)).collect();
        let total: f64 = weights.iter().sum();
        let cells: Vec<usize> = (0..rows).filter_map(|r| table_cell(table, var, r)).collect();
        let marginal: EmpiricalDist = cells.iter().map(|v| v.to_string()).collect();
        let exact: BTreeMap<String, f64> = (0..d.len()).map(|i| (i.to_string(), weights[i] / total)).collect();
        marginal_tv.push(tv_distance(&marginal, &exact).unwrap_or(1.0));
        let pairs: EmpiricalDist = cells.windows(2).map(|w| format!("{},{}", w[0], w[1])).collect();
        let mut exact_pairs = BTreeMap::new();
        for i in 0..d.len() {
            for j in 0..d.len() {
                exact_pairs.insert(format!("{i},{j}"), weights[i] * weights[j] / (total * total));
            }
        }
        pair_tv.push(tv_distance(&pairs, &exact_pairs).unwrap_or(1.0));
    }
    TableReport { marginal_tv, pair_tv }
}
