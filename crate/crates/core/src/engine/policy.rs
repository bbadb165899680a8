use std::fmt;
use std::sync::Arc;

use super::table::mix;
use crate::instance::{Clause, ClauseKey};

/// A clause-choice rule that sees only the set of violated clauses.
///
/// `violated` is non-empty and sorted by key. The result must be the key of
/// one of its elements and must not depend on anything but the set.
pub trait NBasedRule: Send + Sync {
    fn choose(&self, violated: &[Clause]) -> ClauseKey;

    fn name(&self) -> String;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct LowestKey;

impl NBasedRule for LowestKey {
    fn choose(&self, violated: &[Clause]) -> ClauseKey {
        violated
            .iter()
            .map(Clause::key)
            .min()
            .expect("violated set is non-empty")
            .clone()
    }

    fn name(&self) -> String {
        "lowest".into()
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct HighestKey;

impl NBasedRule for HighestKey {
    fn choose(&self, violated: &[Clause]) -> ClauseKey {
        violated
            .iter()
            .map(Clause::key)
            .max()
            .expect("violated set is non-empty")
            .clone()
    }

    fn name(&self) -> String {
        "highest".into()
    }
}

/// Largest scope, ties broken towards the lowest key.
#[derive(Clone, Copy, Debug, Default)]
pub struct LargestScope;

impl NBasedRule for LargestScope {
    fn choose(&self, violated: &[Clause]) -> ClauseKey {
        violated
            .iter()
            .max_by(|a, b| a.arity().cmp(&b.arity()).then_with(|| b.key().cmp(a.key())))
            .expect("violated set is non-empty")
            .key()
            .clone()
    }

    fn name(&self) -> String {
        "largest".into()
    }
}

/// Pseudorandom choice determined by a hash of the violated key set.
#[derive(Clone, Copy, Debug)]
pub struct HashedRule {
    pub seed: u64,
}

impl NBasedRule for HashedRule {
    fn choose(&self, violated: &[Clause]) -> ClauseKey {
        let mut keys: Vec<&ClauseKey> = violated.iter().map(Clause::key).collect();
        keys.sort();
        keys.dedup();
        let h = keys.iter().fold(mix(self.seed), |h, k| mix(h ^ key_hash(k)));
        keys[(h % keys.len() as u64) as usize].clone()
    }

    fn name(&self) -> String {
        format!("hashed:{}", self.seed)
    }
}

fn key_hash(key: &ClauseKey) -> u64 {
    match key {
        ClauseKey::Index(k) => mix(*k as u64),
        ClauseKey::Cycle(v) => v.iter().fold(mix(1 << 62), |h, &x| mix(h ^ x as u64)),
        ClauseKey::Vertices(v) => v.iter().fold(mix(1 << 63), |h, &x| mix(h ^ x as u64)),
    }
}

/// How the extremal sampler picks what to resample each iteration.
#[derive(Clone)]
pub enum ChoicePolicy {
    LowestId,
    HighestId,
    /// Uniform choice from the violated set, driven by its own generator.
    RandomFromN { seed: u64 },
    /// The first violated key after the previously chosen one, cyclically.
    RoundRobin,
    /// Every violated clause in one iteration, in ascending key order.
    SimultaneousAll,
    Rule(Arc<dyn NBasedRule>),
}

impl ChoicePolicy {
    pub fn name(&self) -> String {
        match self {
            ChoicePolicy::LowestId => "lowest".into(),
            ChoicePolicy::HighestId => "highest".into(),
            ChoicePolicy::RandomFromN { seed } => format!("random:{seed}"),
            ChoicePolicy::RoundRobin => "round-robin".into(),
            ChoicePolicy::SimultaneousAll => "simultaneous".into(),
            ChoicePolicy::Rule(r) => format!("rule:{}", r.name()),
        }
    }

    /// Parses `lowest`, `highest`, `random` (or `random:SEED`), `round-robin`,
    /// `simultaneous`, `largest` and `hashed:SEED`.
    pub fn parse(text: &str, default_seed: u64) -> Option<ChoicePolicy> {
        let (head, arg) = match text.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (text, None),
        };
        let seed = match arg {
            Some(a) => a.parse().ok()?,
            None => default_seed,
        };
        Some(match head {
            "lowest" => ChoicePolicy::LowestId,
            "highest" => ChoicePolicy::HighestId,
            "random" => ChoicePolicy::RandomFromN { seed },
            "round-robin" => ChoicePolicy::RoundRobin,
            "simultaneous" => ChoicePolicy::SimultaneousAll,
            "largest" => ChoicePolicy::Rule(Arc::new(LargestScope)),
            "hashed" => ChoicePolicy::Rule(Arc::new(HashedRule { seed })),
            _ => return None,
        })
    }
}

impl fmt::Debug for ChoicePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}
