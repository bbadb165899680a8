use std::collections::BTreeMap;

use serde::Serialize;

use super::EngineError;
use crate::instance::ClauseKey;

/// Cells consumed by one resampling of a clause scope.
#[derive(Clone, Debug, Serialize)]
pub struct Block {
    pub clause: ClauseKey,
    /// `(variable, row)` pairs, ascending by variable.
    pub cells: Vec<(usize, usize)>,
    /// Iteration at which the block was resampled. Not part of equality.
    pub time: u64,
}

/// The frontier with the partition of the consumed cells into blocks.
///
/// Two transcripts are equal when their frontiers agree and their blocks
/// agree as an unordered set of labelled cell sets.
#[derive(Clone, Debug, Default)]
pub struct Transcript {
    pub frontier: Vec<usize>,
    pub blocks: Vec<Block>,
}

#[derive(Serialize)]
struct CanonicalBlock<'a> {
    clause: &'a ClauseKey,
    cells: &'a [(usize, usize)],
}

#[derive(Serialize)]
struct CanonicalTranscript<'a> {
    frontier: &'a [usize],
    blocks: Vec<CanonicalBlock<'a>>,
}

impl Transcript {
    pub fn new(num_variables: usize) -> Self {
        Transcript {
            frontier: vec![0; num_variables],
            blocks: Vec::new(),
        }
    }

    /// Blocks as `(cells, clause)` sorted by cells, then clause.
    pub fn canonical_blocks(&self) -> Vec<(&[(usize, usize)], &ClauseKey)> {
        let mut v: Vec<_> = self
            .blocks
            .iter()
            .map(|b| (b.cells.as_slice(), &b.clause))
            .collect();
        v.sort();
        v
    }

    /// Number of blocks per clause.
    pub fn block_counts(&self) -> BTreeMap<ClauseKey, u64> {
        let mut counts = BTreeMap::new();
        for b in &self.blocks {
            *counts.entry(b.clause.clone()).or_insert(0) += 1;
        }
        counts
    }

    /// Checks that the blocks partition exactly the cells below the frontier.
    pub fn validate(&self) -> Result<(), EngineError> {
        let mut seen: Vec<Vec<bool>> = self.frontier.iter().map(|&f| vec![false; f]).collect();
        for b in &self.blocks {
            for &(var, row) in &b.cells {
                let slot = seen
                    .get_mut(var)
                    .and_then(|col| col.get_mut(row))
                    .ok_or_else(|| {
                        EngineError::InvalidTranscript(format!(
                            "cell ({var}, {row}) of block {} is not below the frontier",
                            b.clause
                        ))
                    })?;
                if *slot {
                    return Err(EngineError::InvalidTranscript(format!(
                        "cell ({var}, {row}) belongs to two blocks"
                    )));
                }
                *slot = true;
            }
        }
        for (var, col) in seen.iter().enumerate() {
            if let Some(row) = col.iter().position(|s| !s) {
                return Err(EngineError::InvalidTranscript(format!(
                    "cell ({var}, {row}) is below the frontier but in no block"
                )));
            }
        }
        Ok(())
    }

    /// Canonical JSON: the frontier, then blocks sorted by their cells.
    pub fn to_json_string(&self) -> String {
        let blocks = self
            .canonical_blocks()
            .into_iter()
            .map(|(cells, clause)| CanonicalBlock { clause, cells })
            .collect();
        serde_json::to_string(&CanonicalTranscript {
            frontier: &self.frontier,
            blocks,
        })
        .expect("transcript serialises")
    }
}

impl PartialEq for Transcript {
    fn eq(&self, other: &Self) -> bool {
        self.frontier == other.frontier
            && self.blocks.len() == other.blocks.len()
            && self.canonical_blocks() == other.canonical_blocks()
    }
}

impl Eq for Transcript {}
