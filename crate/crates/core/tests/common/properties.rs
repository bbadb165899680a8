//! Property suites shared by the `properties` test target and the
//! acceptance gate. Each suite runs a deterministic proptest runner with
//! [`CASES`] generated cases.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use prs_core::analysis::{clause_false_prob, expected_counts, indep_poly, q_value, DependencyGraph};
use prs_core::engine::{FixtureTable, PrfTable, RecordingTable, DEFAULT_MAX_ITERATIONS};
use prs_core::instance::{
    check_atomic, check_axiom1, check_axiom3, check_extremal, DependencyRelation, DEFAULT_ENUMERATION_CAP,
};
use prs_core::problems::{
    encode_arborescence, encode_bicircular, encode_hardcore, encode_root_connected, encode_sink_free,
    encode_strong_orientation, find_sink_free_orientation, Encoded,
};
use prs_core::verify::{tv_distance, EmpiricalDist};
use prs_core::{run_extremal, Assignment, ChoicePolicy, Clause, ClauseKey, DomainDist, Graph, Instance};

use super::random_connected_graph;

pub const CASES: u32 = 1000;

type Suite = fn() -> Result<(), String>;

pub const ALL: &[(&str, Suite)] = &[
    ("violated clauses of extremal instances share no variable", violated_clauses_independent),
    ("extremality verdict matches full enumeration", extremal_verdict_matches_enumeration),
    ("atomic clause probability is the falsifier weight", atomic_falsifier_weight),
    ("custom relations validate iff pairs share a variable", custom_relation_validation),
    ("all policies give the same transcript", policies_are_confluent),
    ("frontier is the only row read and satisfies the formula", frontier_consistency),
    ("variable resamples equal the arity-weighted clause counts", stats_consistency),
    ("planted satisfying assignment reproduces the transcript", planted_assignment),
    ("q values equal enumerated probabilities", q_values_match_enumeration),
    ("singleton q factorises through the neighbourhood-deleted graph", q_singleton_factorises),
    ("independence polynomial is affine in each coordinate", polynomial_multilinear),
    ("decoded samples satisfy their defining property", decoded_samples_valid),
    ("decoding is a bijection onto the target objects", decoding_bijective),
    ("oracle violations match the materialised clause list", oracle_matches_materialised),
    ("hard-core clusters are the large components of the occupied set", hardcore_clusters),
    ("independent hard-core clusters only share unoccupied boundary", hardcore_shared_boundary),
    ("empirical counts merge associatively and distances stay in range", empirical_merge),
];

fn runner() -> TestRunner {
    let config = Config {
        cases: CASES,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn run<S: Strategy>(strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String> {
    runner().run(&strategy, test).map_err(|e| e.to_string())
}

/// A random explicit instance with its clauses listed as falsifier sets.
struct RandomInstance {
    instance: Instance,
    radices: Vec<usize>,
    weights: Vec<Vec<BigRational>>,
    scopes: Vec<Vec<usize>>,
    falsifiers: Vec<Vec<Vec<usize>>>,
}

fn random_instance(seed: u64) -> RandomInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(2..=6);
    let radices: Vec<usize> = (0..n).map(|_| rng.random_range(2..=3)).collect();
    let weights: Vec<Vec<BigRational>> = radices
        .iter()
        .map(|&r| {
            let raw: Vec<i64> = (0..r).map(|_| rng.random_range(1..=4)).collect();
            let total: i64 = raw.iter().sum();
            raw.iter().map(|&w| BigRational::new(w.into(), total.into())).collect()
        })
        .collect();
    let domains: Vec<DomainDist> = weights
        .iter()
        .map(|w| DomainDist::exact((0..w.len() as i64).collect(), w.clone()).unwrap())
        .collect();
    let m = rng.random_range(2..=4);
    let mut scopes = Vec::new();
    let mut falsifiers = Vec::new();
    let mut clauses = Vec::new();
    for k in 0..m {
        let size = rng.random_range(1..=3.min(n));
        let mut scope: BTreeSet<usize> = BTreeSet::new();
        while scope.len() < size {
            scope.insert(rng.random_range(0..n));
        }
        let scope: Vec<usize> = scope.into_iter().collect();
        let count = rng.random_range(1..=2);
        let mut fs: BTreeSet<Vec<usize>> = BTreeSet::new();
        for _ in 0..count {
            fs.insert(scope.iter().map(|&v| rng.random_range(0..radices[v])).collect());
        }
        let fs: Vec<Vec<usize>> = fs.into_iter().collect();
        clauses.push(Clause::from_falsifiers(ClauseKey::Index(k), scope.clone(), &domains, fs.clone()).unwrap());
        scopes.push(scope);
        falsifiers.push(fs);
    }
    RandomInstance {
        instance: Instance::explicit(domains, clauses).unwrap(),
        radices,
        weights,
        scopes,
        falsifiers,
    }
}

impl RandomInstance {
    fn all_assignments(&self) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for &r in &self.radices {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<usize>| {
                    (0..r).map(move |v| {
                        let mut p = prefix.clone();
                        p.push(v);
                        p
                    })
                })
                .collect();
        }
        out
    }

    fn is_false(&self, k: usize, x: &[usize]) -> bool {
        let vals: Vec<usize> = self.scopes[k].iter().map(|&v| x[v]).collect();
        self.falsifiers[k].contains(&vals)
    }

    fn weight(&self, x: &[usize]) -> BigRational {
        x.iter()
            .enumerate()
            .fold(BigRational::one(), |acc, (v, &val)| acc * &self.weights[v][val])
    }

    fn shares(&self, k: usize, l: usize) -> bool {
        self.scopes[k].iter().any(|v| self.scopes[l].contains(v))
    }

    fn extremal_by_enumeration(&self) -> bool {
        let all = self.all_assignments();
        let m = self.scopes.len();
        (0..m).all(|k| {
            (k + 1..m).all(|l| !self.shares(k, l) || !all.iter().any(|x| self.is_false(k, x) && self.is_false(l, x)))
        })
    }
}

fn sink_free_encoding(seed: u64, max_n: usize) -> (Graph, Encoded) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(3..=max_n);
    let extra = rng.random_range(1..=3);
    let g = random_connected_graph(n, extra, seed);
    let oriented = find_sink_free_orientation(&g).expect("connected graph with a cycle");
    let enc = encode_sink_free(&oriented).unwrap();
    (oriented, enc)
}

fn random_assignment(domains: &[DomainDist], rng: &mut ChaCha8Rng) -> Assignment {
    Assignment::new(domains.iter().map(|d| rng.random_range(0..d.len())).collect())
}

fn fail(msg: String) -> TestCaseError {
    TestCaseError::fail(msg)
}

pub fn violated_clauses_independent() -> Result<(), String> {
    run(any::<u64>(), |seed| {
        let ri = random_instance(seed);
        let report = check_extremal(&ri.instance, DEFAULT_ENUMERATION_CAP).map_err(|e| fail(e.to_string()))?;
        if report.extremal {
            for x in ri.all_assignments() {
                let n = ri.instance.violated_clauses(&Assignment::new(x));
                for (i, a) in n.iter().enumerate() {
                    for b in &n[i + 1..] {
                        prop_assert!(!a.shares_variable_with(b));
                    }
                }
            }
        }
        let (_, enc) = sink_free_encoding(seed, 10);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        for _ in 0..10 {
            let n = enc.instance.violated_clauses(&random_assignment(enc.instance.domains(), &mut rng));
            for (i, a) in n.iter().enumerate() {
                for b in &n[i + 1..] {
                    prop_assert!(!a.shares_variable_with(b));
                }
            }
        }
        Ok(())
    })
}

pub fn extremal_verdict_matches_enumeration() -> Result<(), String> {
    run(any::<u64>(), |seed| {
        let ri = random_instance(seed);
        let report = check_extremal(&ri.instance, DEFAULT_ENUMERATION_CAP).map_err(|e| fail(e.to_string()))?;
        prop_assert_eq!(report.extremal, ri.extremal_by_enumeration());
        let axiom1 = check_axiom1(&ri.instance, DEFAULT_ENUMERATION_CAP).map_err(|e| fail(e.to_string()))?;
        prop_assert_eq!(axiom1.extremal, report.extremal);
        Ok(())
    })
}

pub fn atomic_falsifier_weight() -> Result<(), String> {
    run(any::<u64>(), |seed| {
        let ri = random_instance(seed);
        let atomic = check_atomic(&ri.instance, DEFAULT_ENUMERATION_CAP).map_err(|e| fail(e.to_string()))?;
        prop_assert_eq!(atomic.len(), ri.scopes.len());
        for (k, &is_atomic) in atomic.iter().enumerate() {
            prop_assert_eq!(is_atomic, ri.falsifiers[k].len() == 1);
            let p: BigRational =
                clause_false_prob(&ri.instance, &ClauseKey::Index(k)).map_err(|e| fail(e.to_string()))?;
            let want = ri.falsifiers[k].iter().fold(BigRational::zero(), |acc, f| {
                acc + ri.scopes[k]
                    .iter()
                    .zip(f)
                    .fold(BigRational::one(), |w, (&v, &val)| w * &ri.weights[v][val])
            });
            prop_assert_eq!(p, want);
        }
        Ok(())
    })
}

pub fn custom_relation_validation() -> Result<(), String> {
    run((any::<u64>(), proptest::collection::vec((0usize..4, 0usize..4), 0..6)), |(seed, pairs)| {
        let ri = random_instance(seed);
        let m = ri.scopes.len();
        let pairs: Vec<(usize, usize)> = pairs.into_iter().filter(|&(a, b)| a < m && b < m && a != b).collect();
        let expected = pairs.iter().all(|&(a, b)| ri.shares(a, b));
        let rel = DependencyRelation::from_pairs(pairs.iter().map(|&(a, b)| (ClauseKey::Index(a), ClauseKey::Index(b))));
        let inst = ri.instance.clone().with_dependency(rel);
        prop_assert_eq!(inst.validate_dependency().is_ok(), expected);
        Ok(())
    })
}

fn policies() -> Vec<ChoicePolicy> {
    vec![
        ChoicePolicy::LowestId,
        ChoicePolicy::HighestId,
        ChoicePolicy::RandomFromN { seed: 11 },
        ChoicePolicy::RoundRobin,
        ChoicePolicy::SimultaneousAll,
    ]
}

pub fn policies_are_confluent() -> Result<(), String> {
    run(any::<u64>(), |seed| {
        let (_, enc) = sink_free_encoding(seed, 9);
        let table = PrfTable::new(seed, enc.instance.domains());
        let runs: Vec<_> = policies()
            .iter()
            .map(|p| run_extremal(&enc.instance, p, &table, DEFAULT_MAX_ITERATIONS).unwrap())
            .collect();
        for r in &runs[1..] {
            prop_assert!(r.transcript == runs[0].transcript);
            prop_assert_eq!(&r.assignment, &runs[0].assignment);
            prop_assert_eq!(&r.stats.clause_resamples, &runs[0].stats.clause_resamples);
        }
        Ok(())
    })
}

pub fn frontier_consistency() -> Result<(), String> {
    run((any::<u64>(), 0usize..5), |(seed, policy)| {
        let (_, enc) = sink_free_encoding(seed, 9);
        let inner = PrfTable::new(seed, enc.instance.domains());
        let recorder = RecordingTable::new(&inner, enc.instance.num_variables());
        let out = run_extremal(&enc.instance, &policies()[policy], &recorder, DEFAULT_MAX_ITERATIONS).unwrap();
        prop_assert!(enc.instance.is_satisfied(&out.assignment));
        let highest = recorder.highest_rows();
        for (v, &row) in out.transcript.frontier.iter().enumerate() {
            prop_assert_eq!(highest[v], Some(row));
        }
        prop_assert!(out.transcript.validate().is_ok());
        Ok(())
    })
}

pub fn stats_consistency() -> Result<(), String> {
    run((any::<u64>(), 0usize..5), |(seed, policy)| {
        let (g, enc) = sink_free_encoding(seed, 9);
        let table = PrfTable::new(seed, enc.instance.domains());
        let out = run_extremal(&enc.instance, &policies()[policy], &table, DEFAULT_MAX_ITERATIONS).unwrap();
        let weighted: u64 = out
            .stats
            .clause_resamples
            .iter()
            .map(|(k, &e)| e * g.incident_edges(k.index().unwrap()).len() as u64)
            .sum();
        prop_assert_eq!(out.stats.variable_resamples, weighted);
        prop_assert_eq!(out.transcript.block_counts(), out.stats.clause_resamples.clone());
        let total: u64 = out.stats.clause_resamples.values().sum();
        if !matches!(policies()[policy], ChoicePolicy::SimultaneousAll) {
            prop_assert_eq!(out.stats.iterations, total);
        } else {
            prop_assert!(out.stats.iterations <= total);
        }
        Ok(())
    })
}

pub fn planted_assignment() -> Result<(), String> {
    run(any::<u64>(), |seed| {
        let (g, enc) = sink_free_encoding(seed, 7);
        let m = g.edges().len();
        prop_assume!(m <= 14);
        let table = PrfTable::new(seed, enc.instance.domains());
        let first = run_extremal(&enc.instance, &ChoicePolicy::LowestId, &table, DEFAULT_MAX_ITERATIONS).unwrap();
        let satisfying: Vec<u64> = (0..1u64 << m)
            .filter(|mask| enc.instance.is_satisfied(&Assignment::new((0..m).map(|e| (mask >> e & 1) as usize).collect())))
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 2);
        let mask = satisfying[rng.random_range(0..satisfying.len())];
        let columns: Vec<Vec<usize>> = (0..m)
            .map(|e| {
                let top = first.transcript.frontier[e];
                let mut col: Vec<usize> = (0..top).map(|r| prs_core::engine::table_cell(&table, e, r).unwrap()).collect();
                col.push((mask >> e & 1) as usize);
                col
            })
            .collect();
        let planted = FixtureTable::new(columns);
        let second = run_extremal(&enc.instance, &ChoicePolicy::HighestId, &planted, DEFAULT_MAX_ITERATIONS)
            .map_err(|e| fail(e.to_string()))?;
        prop_assert!(second.transcript == first.transcript);
        prop_assert_eq!(second.assignment.as_slice().to_vec(), (0..m).map(|e| (mask >> e & 1) as usize).collect::<Vec<_>>());
        Ok(())
    })
}

pub fn q_values_match_enumeration() -> Result<(), String> {
    run(any::<u64>(), |seed| {
        let ri = random_instance(seed);
        if !ri.extremal_by_enumeration() {
            return Ok(());
        }
        let m = ri.scopes.len();
        let mut sat = BigRational::zero();
        let mut only = vec![BigRational::zero(); m];
        for x in ri.all_assignments() {
            let falses: Vec<usize> = (0..m).filter(|&k| ri.is_false(k, &x)).collect();
            match falses.as_slice() {
                [] => sat += ri.weight(&x),
                [k] => only[*k] += ri.weight(&x),
                _ => {}
            }
        }
        match expected_counts::<BigRational>(&ri.instance) {
            Ok(c) => {
                prop_assert!(c.table.q_empty > BigRational::zero());
                prop_assert_eq!(&c.table.q_empty, &sat);
                prop_assert_eq!(&c.table.q_singleton, &only);
            }
            Err(prs_core::AnalysisError::Unsatisfiable(_)) => prop_assert!(sat.is_zero()),
            Err(e) => return Err(fail(e.to_string())),
        }
        Ok(())
    })
}

fn random_dependency_graph(rng: &mut ChaCha8Rng) -> (usize, Vec<(usize, usize)>, Vec<BigRational>) {
    let m = rng.random_range(1..=8);
    let mut edges = Vec::new();
    for a in 0..m {
        for b in a + 1..m {
            if rng.random_bool(0.35) {
                edges.push((a, b));
            }
        }
    }
    let p = (0..m)
        .map(|_| BigRational::new(rng.random_range(0..=12).into(), 13.into()))
        .collect();
    (m, edges, p)
}

/// Signed independence polynomial by plain subset enumeration.
fn subset_poly(m: usize, edges: &[(usize, usize)], z: &[BigRational], allowed: u32) -> BigRational {
    let mut total = BigRational::zero();
    for mask in 0u32..1 << m {
        if mask & !allowed != 0 || edges.iter().any(|&(a, b)| mask >> a & 1 == 1 && mask >> b & 1 == 1) {
            continue;
        }
        let mut term = (0..m).filter(|&k| mask >> k & 1 == 1).fold(BigRational::one(), |acc, k| acc * &z[k]);
        if mask.count_ones() % 2 == 1 {
            term = -term;
        }
        total += term;
    }
    total
}

pub fn q_singleton_factorises() -> Result<(), String> {
    run(any::<u64>(), |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (m, edges, p) = random_dependency_graph(&mut rng);
        let g = DependencyGraph::new(m, &edges).unwrap();
        for k in 0..m {
            let mut outside: u32 = (1u32 << m) - 1;
            outside &= !(1 << k);
            for &(a, b) in &edges {
                if a == k {
                    outside &= !(1 << b);
                }
                if b == k {
                    outside &= !(1 << a);
                }
            }
            let want = &p[k] * subset_poly(m, &edges, &p, outside);
            let got = q_value(&g, &p, &[k], 40).map_err(|e| fail(e.to_string()))?;
            prop_assert_eq!(got, want);
        }
        prop_assert_eq!(
            indep_poly(&g, &p, 40).map_err(|e| fail(e.to_string()))?,
            subset_poly(m, &edges, &p, (1u32 << m) - 1)
        );
        Ok(())
    })
}

pub fn polynomial_multilinear() -> Result<(), String> {
    run(any::<u64>(), |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (m, edges, z) = random_dependency_graph(&mut rng);
        let g = DependencyGraph::new(m, &edges).unwrap();
        for k in 0..m {
            let points: Vec<BigRational> = [-3i64, 1, 7].iter().map(|&a| BigRational::new(a.into(), 5.into())).collect();
            let values: Vec<BigRational> = points
                .iter()
                .map(|a| {
                    let mut zz = z.clone();
                    zz[k] = a.clone();
                    indep_poly(&g, &zz, 40).unwrap()
                })
                .collect();
            let lhs = (&values[1] - &values[0]) * (&points[2] - &points[0]);
            let rhs = (&values[2] - &values[0]) * (&points[1] - &points[0]);
            prop_assert_eq!(lhs, rhs);
        }
        Ok(())
    })
}

/// A random graph for the oracle-backed encoders, small enough to enumerate.
fn small_graph(seed: u64, max_n: usize) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(3..=max_n);
    let extra = rng.random_range(0..=3);
    random_connected_graph(n, extra, seed ^ 0xabc)
}

fn encodings_for(g: &Graph, seed: u64) -> Vec<(Encoded, Graph, bool)> {
    let mut out = Vec::new();
    let rooted = g.clone().with_root(0).unwrap();
    out.push((encode_arborescence(g, 0).unwrap(), rooted.clone(), false));
    let bi = g.bidirected().with_root(0).unwrap();
    out.push((encode_root_connected(&bi, 0).unwrap(), bi, false));
    if let Ok(enc) = encode_bicircular(g) {
        out.push((enc, g.clone(), false));
    }
    let lambda = 0.2 + (seed % 17) as f64 / 8.0;
    out.push((encode_hardcore(g, lambda).unwrap(), g.clone(), false));
    if let Ok(enc) = encode_strong_orientation(g) {
        out.push((enc, g.clone(), true));
    }
    if let Some(o) = find_sink_free_orientation(g) {
        out.push((encode_sink_free(&o).unwrap(), o, false));
    }
    out
}

pub fn decoded_samples_valid() -> Result<(), String> {
    run(any::<u64>(), |seed| {
        let g = small_graph(seed, 7);
        for (enc, graph, strong) in encodings_for(&g, seed) {
            if strong && graph.edges().len() > 12 {
                continue;
            }
            let table = PrfTable::new(seed, enc.instance.domains());
            let out = enc.sample(&table, DEFAULT_MAX_ITERATIONS).map_err(|e| fail(format!("{}: {e}", enc.name)))?;
            prop_assert!(enc.instance.is_satisfied(&out.assignment));
            let obj = enc.decode(&out.assignment);
            prop_assert!(obj.is_valid_for(&graph, strong), "{} produced {}", enc.name, obj);
        }
        Ok(())
    })
}

pub fn decoding_bijective() -> Result<(), String> {
    run(any::<u64>(), |seed| {
        let g = small_graph(seed, 5);
        for (enc, graph, strong) in encodings_for(&g, seed) {
            if enc.instance.assignment_count() > 1 << 14 {
                continue;
            }
            let target = prs_core::analysis::brute_force_target::<f64>(&enc.instance, 1 << 14)
                .map_err(|e| fail(format!("{}: {e}", enc.name)))?;
            let keys: BTreeSet<String> = target.outcomes.iter().map(|(a, _)| enc.decode(a).canonical_key()).collect();
            prop_assert_eq!(keys.len(), target.outcomes.len(), "{} decoder is not injective", enc.name);
            let oracle = match enc.name {
                "arborescence" => super::arborescence_oracle(&graph, 0),
                "root-connected" => super::root_connected_oracle(&graph, 0),
                "bicircular" => super::bicircular_oracle(&graph),
                "hardcore" => super::hardcore_oracle(&graph, 1.0),
                "sink-free" => super::sink_free_oracle(&graph),
                "strong" => {
                    prop_assert_eq!(keys.len(), super::strong_orientation_count(&graph));
                    prop_assert!(strong);
                    continue;
                }
                other => return Err(fail(format!("unexpected encoding {other}"))),
            };
            prop_assert_eq!(&keys, &oracle.keys().cloned().collect::<BTreeSet<_>>(), "{}", enc.name);
            if enc.name == "bicircular" {
                for (basis, (preimages, components)) in super::bicircular_preimages(&graph) {
                    if super::all_unicyclic(graph.n(), &basis) {
                        prop_assert_eq!(preimages, 1usize << components);
                    }
                }
            }
        }
        Ok(())
    })
}

fn keys_of(clauses: &[Clause]) -> Vec<ClauseKey> {
    clauses.iter().map(|c| c.key().clone()).collect()
}

pub fn oracle_matches_materialised() -> Result<(), String> {
    run(any::<u64>(), |seed| {
        let g = small_graph(seed, 5);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 3);
        for (enc, _, _) in encodings_for(&g, seed) {
            if enc.instance.is_explicit() {
                continue;
            }
            let explicit = enc.instance.materialize().map_err(|e| fail(e.to_string()))?;
            for _ in 0..10 {
                let a = random_assignment(enc.instance.domains(), &mut rng);
                prop_assert_eq!(keys_of(&enc.instance.violated_clauses(&a)), keys_of(&explicit.violated_clauses(&a)));
                for c in enc.instance.violated_clauses(&a) {
                    let listed = explicit.explicit_clause(c.key()).expect("listed clause");
                    prop_assert_eq!(listed.scope(), c.scope());
                }
            }
            if enc.is_extremal() {
                let report = check_extremal(&explicit, DEFAULT_ENUMERATION_CAP).map_err(|e| fail(e.to_string()))?;
                prop_assert!(report.extremal, "{} is documented as extremal", enc.name);
            } else {
                let with_relation = explicit.with_dependency(enc.instance.dependency().clone());
                prop_assert!(with_relation.validate_dependency().is_ok());
                let a1 = check_axiom1(&with_relation, DEFAULT_ENUMERATION_CAP).map_err(|e| fail(e.to_string()))?;
                prop_assert!(a1.extremal);
                let a3 = check_axiom3(&with_relation, DEFAULT_ENUMERATION_CAP).map_err(|e| fail(e.to_string()))?;
                prop_assert!(a3.holds);
            }
        }
        Ok(())
    })
}

fn large_components(g: &Graph, occupied: &[bool]) -> BTreeSet<Vec<usize>> {
    let adj = g.adjacency();
    let mut seen = vec![false; g.n()];
    let mut out = BTreeSet::new();
    for s in 0..g.n() {
        if !occupied[s] || seen[s] {
            continue;
        }
        let mut comp = vec![s];
        seen[s] = true;
        let mut i = 0;
        while i < comp.len() {
            for &w in &adj[comp[i]] {
                if occupied[w] && !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
            i += 1;
        }
        if comp.len() >= 2 {
            comp.sort();
            out.insert(comp);
        }
    }
    out
}

pub fn hardcore_clusters() -> Result<(), String> {
    run((any::<u64>(), 3usize..12), |(seed, n)| {
        let g = random_connected_graph(n, (seed % 8) as usize, seed);
        let enc = encode_hardcore(&g, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_assignment(enc.instance.domains(), &mut rng);
        let occupied: Vec<bool> = a.as_slice().iter().map(|&x| x == 1).collect();
        let violated = enc.instance.violated_clauses(&a);
        let reported: BTreeSet<Vec<usize>> = violated.iter().map(|c| c.key().vertices().unwrap().to_vec()).collect();
        prop_assert_eq!(reported.len(), violated.len());
        prop_assert_eq!(&reported, &large_components(&g, &occupied));
        let mut used = BTreeSet::new();
        for s in &reported {
            for v in s {
                prop_assert!(used.insert(*v), "clusters overlap at {}", v);
            }
        }
        for c in &violated {
            let s = c.key().vertices().unwrap();
            let mut closed: BTreeSet<usize> = s.iter().copied().collect();
            for &v in s {
                closed.extend(g.neighbors(v));
            }
            prop_assert_eq!(c.scope().to_vec(), closed.into_iter().collect::<Vec<_>>());
        }
        Ok(())
    })
}

pub fn hardcore_shared_boundary() -> Result<(), String> {
    run((any::<u64>(), 3usize..14), |(seed, n)| {
        let g = random_connected_graph(n, (seed % 6) as usize, seed);
        let enc = encode_hardcore(&g, 2.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_assignment(enc.instance.domains(), &mut rng);
        let violated = enc.instance.violated_clauses(&a);
        for (i, c) in violated.iter().enumerate() {
            for d in &violated[i + 1..] {
                if enc.instance.depends(c, d) {
                    continue;
                }
                let (s, t) = (c.key().vertices().unwrap(), d.key().vertices().unwrap());
                for v in c.scope().iter().filter(|v| d.scope().contains(v)) {
                    prop_assert!(!s.contains(v) && !t.contains(v));
                    prop_assert_eq!(a.get(*v), 0);
                }
            }
        }
        Ok(())
    })
}

pub fn empirical_merge() -> Result<(), String> {
    let keys = proptest::collection::vec(0u8..6, 1..60);
    run((keys, 0usize..60), |(keys, split)| {
        let split = split.min(keys.len());
        let to_dist = |ks: &[u8]| ks.iter().map(|k| k.to_string()).collect::<EmpiricalDist>();
        let whole = to_dist(&keys);
        let (a, b) = (to_dist(&keys[..split]), to_dist(&keys[split..]));
        prop_assert_eq!(a.clone().merge(b.clone()), whole.clone());
        prop_assert_eq!(b.merge(a), whole.clone());
        let exact: BTreeMap<String, f64> =
            whole.counts.iter().map(|(k, &c)| (k.clone(), c as f64 / whole.total as f64)).collect();
        prop_assert!(tv_distance(&whole, &exact).unwrap() < 1e-12);
        let uniform: BTreeMap<String, f64> = (0u8..6).map(|k| (k.to_string(), 1.0 / 6.0)).collect();
        let tv = tv_distance(&whole, &uniform).unwrap();
        prop_assert!((0.0..=1.0).contains(&tv));
        Ok(())
    })
}
