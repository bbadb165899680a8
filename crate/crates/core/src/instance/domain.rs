use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::InstanceError;

/// Tolerance on the weight sum of float-valued domains.
pub const FLOAT_SUM_TOLERANCE: f64 = 1e-12;

/// How the weights of a domain were supplied.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightMode {
    Exact,
    Float,
}

/// A finite domain with a probability distribution over its values.
///
/// Weights are kept in both representations. Exact domains carry the
/// rationals they were built from; float domains carry the exact binary
/// expansion of their floats, normalised so the exact weights sum to one.
/// Sampling always uses the float cumulative weights in declaration order.
#[derive(Clone, Debug)]
pub struct DomainDist {
    values: Vec<i64>,
    exact: Vec<BigRational>,
    float: Vec<f64>,
    cumulative: Vec<f64>,
    mode: WeightMode,
}

impl DomainDist {
    pub fn exact(values: Vec<i64>, weights: Vec<BigRational>) -> Result<Self, InstanceError> {
        check_values(&values, weights.len())?;
        if weights.iter().any(|w| w.is_negative()) {
            return Err(InstanceError::InvalidWeights("negative weight".into()));
        }
        let sum = weights.iter().fold(BigRational::zero(), |acc, w| acc + w);
        if !sum.is_one() {
            return Err(InstanceError::InvalidWeights(format!(
                "exact weights sum to {sum}, not 1"
            )));
        }
        let float = weights.iter().map(|w| w.to_f64().unwrap_or(0.0)).collect();
        Ok(Self::assemble(values, weights, float, WeightMode::Exact))
    }

    pub fn float(values: Vec<i64>, weights: Vec<f64>) -> Result<Self, InstanceError> {
        check_values(&values, weights.len())?;
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(InstanceError::InvalidWeights(
                "weights must be finite and nonnegative".into(),
            ));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > FLOAT_SUM_TOLERANCE {
            return Err(InstanceError::InvalidWeights(format!(
                "float weights sum to {sum}, not 1"
            )));
        }
        let raw: Vec<BigRational> = weights
            .iter()
            .map(|w| BigRational::from_float(*w).unwrap_or_else(BigRational::zero))
            .collect();
        let total = raw.iter().fold(BigRational::zero(), |acc, w| acc + w);
        let exact = raw.into_iter().map(|w| w / &total).collect();
        Ok(Self::assemble(values, exact, weights, WeightMode::Float))
    }

    /// Uniform distribution over `values`, exact weights `1/len`.
    pub fn uniform(values: Vec<i64>) -> Result<Self, InstanceError> {
        let len = values.len();
        if len == 0 {
            return Err(InstanceError::InvalidWeights("empty domain".into()));
        }
        let w = BigRational::new(BigInt::one(), BigInt::from(len));
        Self::exact(values, vec![w; len])
    }

    /// Values `[0, 1]` with `P(1) = z`, exact.
    pub fn bernoulli_exact(z: BigRational) -> Result<Self, InstanceError> {
        let one = BigRational::one();
        Self::exact(vec![0, 1], vec![&one - &z, z])
    }

    /// Values `[0, 1]` with `P(1) = z`, float.
    pub fn bernoulli(z: f64) -> Result<Self, InstanceError> {
        Self::float(vec![0, 1], vec![1.0 - z, z])
    }

    pub fn fair_coin() -> Self {
        Self::uniform(vec![0, 1]).expect("two-point domain")
    }

    fn assemble(values: Vec<i64>, exact: Vec<BigRational>, float: Vec<f64>, mode: WeightMode) -> Self {
        let mut cumulative = Vec::with_capacity(float.len());
        let mut acc = 0.0;
        for w in &float {
            acc += w;
            cumulative.push(acc);
        }
        // Make the last non-zero bucket absorb rounding so every u in [0,1) maps somewhere.
        if let Some(last) = float.iter().rposition(|w| *w > 0.0) {
            for c in cumulative.iter_mut().skip(last) {
                *c = 1.0;
            }
        }
        DomainDist {
            values,
            exact,
            float,
            cumulative,
            mode,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn value(&self, index: usize) -> i64 {
        self.values[index]
    }

    pub fn index_of(&self, value: i64) -> Option<usize> {
        self.values.iter().position(|v| *v == value)
    }

    pub fn mode(&self) -> WeightMode {
        self.mode
    }

    pub fn exact_weight(&self, index: usize) -> &BigRational {
        &self.exact[index]
    }

    pub fn exact_weights(&self) -> &[BigRational] {
        &self.exact
    }

    pub fn float_weight(&self, index: usize) -> f64 {
        self.float[index]
    }

    pub fn float_weights(&self) -> &[f64] {
        &self.float
    }

    /// Inverse CDF: the first value whose cumulative weight exceeds `u`.
    pub fn sample_index(&self, u: f64) -> usize {
        self.cumulative
            .iter()
            .position(|c| u < *c)
            .unwrap_or(self.values.len() - 1)
    }
}

fn check_values(values: &[i64], weight_count: usize) -> Result<(), InstanceError> {
    if values.is_empty() {
        return Err(InstanceError::InvalidWeights("empty domain".into()));
    }
    if values.len() != weight_count {
        return Err(InstanceError::InvalidWeights(format!(
            "{} values but {} weights",
            values.len(),
            weight_count
        )));
    }
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(InstanceError::DuplicateValue);
    }
    Ok(())
}
