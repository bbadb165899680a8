use std::sync::Mutex;

use crate::instance::DomainDist;

/// A semi-infinite grid of draws, one column per variable.
///
/// Implementations must be pure: the value of a cell may depend only on the
/// variable and the row, never on which cells were read before.
pub trait ResamplingTable: Send + Sync {
    /// Domain index stored at `(var, row)`, or `None` when the table has no
    /// such cell (finite fixtures).
    fn cell(&self, var: usize, row: usize) -> Option<usize>;
}

/// Reads one cell.
pub fn table_cell(table: &dyn ResamplingTable, var: usize, row: usize) -> Option<usize> {
    table.cell(var, row)
}

pub(crate) fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// 64 pseudorandom bits for a cell, a pure function of its coordinates.
pub fn cell_bits(seed: u64, var: usize, row: usize) -> u64 {
    mix(mix(mix(seed) ^ var as u64) ^ row as u64)
}

/// Uniform draw in `[0, 1)` with 53 random bits.
pub fn cell_uniform(seed: u64, var: usize, row: usize) -> f64 {
    (cell_bits(seed, var, row) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Counter-mode table: every cell is hashed from `(seed, var, row)` and mapped
/// through the inverse CDF of the variable's domain.
#[derive(Clone, Copy, Debug)]
pub struct PrfTable<'a> {
    seed: u64,
    domains: &'a [DomainDist],
}

impl<'a> PrfTable<'a> {
    pub fn new(seed: u64, domains: &'a [DomainDist]) -> Self {
        PrfTable { seed, domains }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

impl ResamplingTable for PrfTable<'_> {
    fn cell(&self, var: usize, row: usize) -> Option<usize> {
        let domain = self.domains.get(var)?;
        Some(domain.sample_index(cell_uniform(self.seed, var, row)))
    }
}

/// Explicit finite grid of domain indices, one column per variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixtureTable {
    columns: Vec<Vec<usize>>,
}

impl FixtureTable {
    pub fn new(columns: Vec<Vec<usize>>) -> Self {
        FixtureTable { columns }
    }

    pub fn columns(&self) -> &[Vec<usize>] {
        &self.columns
    }

    /// Replaces the cell at `(var, row)`, growing the column if needed.
    /// Missing cells below `row` are filled with `fill`.
    pub fn set(&mut self, var: usize, row: usize, value: usize, fill: usize) {
        let col = &mut self.columns[var];
        if col.len() <= row {
            col.resize(row + 1, fill);
        }
        col[row] = value;
    }
}

impl ResamplingTable for FixtureTable {
    fn cell(&self, var: usize, row: usize) -> Option<usize> {
        self.columns.get(var)?.get(row).copied()
    }
}

/// Wraps a table and records the highest row read in each column.
pub struct RecordingTable<'t> {
    inner: &'t dyn ResamplingTable,
    highest: Mutex<Vec<Option<usize>>>,
}

impl<'t> RecordingTable<'t> {
    pub fn new(inner: &'t dyn ResamplingTable, num_variables: usize) -> Self {
        RecordingTable {
            inner,
            highest: Mutex::new(vec![None; num_variables]),
        }
    }

    /// Per variable, the highest row read so far.
    pub fn highest_rows(&self) -> Vec<Option<usize>> {
        self.highest.lock().expect("recorder lock").clone()
    }
}

impl ResamplingTable for RecordingTable<'_> {
    fn cell(&self, var: usize, row: usize) -> Option<usize> {
        let mut h = self.highest.lock().expect("recorder lock");
        if let Some(slot) = h.get_mut(var) {
            *slot = Some(slot.map_or(row, |r| r.max(row)));
        }
        drop(h);
        self.inner.cell(var, row)
    }
}
