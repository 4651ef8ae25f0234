use rand::Rng;
use spin_core::corners::state_count;
use spin_core::SpinHamiltonian;

use crate::{EngineError, Result};

/// Exhaustive tables are capped at this many sites.
pub const GIBBS_MAX_N: usize = 20;

/// Full probability vector of a measure on `{±1}^n` in lexicographic state
/// order, together with the log-partition value of the Hamiltonian that
/// produced it.
#[derive(Debug, Clone)]
pub struct ExactGibbsTable {
    n: usize,
    probs: Vec<f64>,
    log_z: f64,
}

impl ExactGibbsTable {
    /// Wraps an explicit probability vector. The vector must have length
    /// `2^n`, be nonnegative, and sum to 1 within 1e-12.
    pub fn from_probs(n: usize, probs: Vec<f64>, log_z: f64) -> Result<Self> {
        if probs.len() != state_count(n) {
            return Err(EngineError::DimensionMismatch {
                expected: state_count(n),
                got: probs.len(),
            });
        }
        if probs.iter().any(|&p| !(p >= 0.0)) {
            return Err(EngineError::BadParameter(
                "probabilities must be nonnegative".into(),
            ));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(EngineError::BadParameter(format!(
                "probabilities sum to {sum}, not 1"
            )));
        }
        Ok(Self { n, probs, log_z })
    }

    pub fn uniform(n: usize) -> Self {
        let len = state_count(n);
        Self {
            n,
            probs: vec![1.0 / len as f64; len],
            log_z: (len as f64).ln(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, state: usize) -> f64 {
        self.probs[state]
    }

    pub fn log_z(&self) -> f64 {
        self.log_z
    }

    pub fn min_prob(&self) -> f64 {
        self.probs.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn is_full_support(&self) -> bool {
        self.probs.iter().all(|&p| p > 0.0)
    }

    /// First zero-probability state, if any.
    pub fn zero_state(&self) -> Option<usize> {
        self.probs.iter().position(|&p| p == 0.0)
    }

    /// Measure tilted by a positive external field: the weight of every state
    /// with `sigma_i = +1` is multiplied by `lambda_i`, then renormalized.
    /// Tilting by the all-ones field is the identity, and successive tilts
    /// compose into the componentwise product.
    pub fn tilt(&self, lambda: &[f64]) -> Result<ExactGibbsTable> {
        if lambda.len() != self.n {
            return Err(EngineError::DimensionMismatch {
                expected: self.n,
                got: lambda.len(),
            });
        }
        if lambda.iter().any(|&l| !(l > 0.0) || !l.is_finite()) {
            return Err(EngineError::BadParameter(
                "tilt fields must be positive and finite".into(),
            ));
        }
        let n = self.n;
        let mut weights = self.probs.clone();
        for (s, w) in weights.iter_mut().enumerate() {
            let mut factor = 1.0;
            for i in 1..=n {
                if spin_core::corners::spin_at(s, n, i) > 0.0 {
                    factor *= lambda[i - 1];
                }
            }
            *w *= factor;
        }
        let norm: f64 = weights.iter().sum();
        for w in &mut weights {
            *w /= norm;
        }
        Ok(ExactGibbsTable {
            n,
            probs: weights,
            log_z: self.log_z + norm.ln(),
        })
    }
}

/// Builds the Gibbs table `mu(sigma) = exp(H(sigma)) / Z` by exhaustive
/// enumeration with log-sum-exp normalization.
pub fn gibbs_table(h: &SpinHamiltonian) -> Result<ExactGibbsTable> {
    let n = h.n();
    if n > GIBBS_MAX_N {
        return Err(EngineError::TooLarge {
            n,
            limit: GIBBS_MAX_N,
            what: "gibbs_table",
        });
    }
    let values = h.corner_table();
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut probs: Vec<f64> = values.iter().map(|&v| (v - max).exp()).collect();
    let sum: f64 = probs.iter().sum();
    for p in &mut probs {
        *p /= sum;
    }
    Ok(ExactGibbsTable {
        n,
        probs,
        log_z: max + sum.ln(),
    })
}

/// Total-variation distance `½ Σ |p - q|` between two vectors of equal length.
pub fn tv_distance(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

/// Draws `m` i.i.d. state indices by inverse CDF, so that sampling noise is
/// purely statistical.
pub fn sample_states<R: Rng>(table: &ExactGibbsTable, m: usize, rng: &mut R) -> Vec<usize> {
    let mut cdf = Vec::with_capacity(table.len());
    let mut acc = 0.0;
    for &p in table.probs() {
        acc += p;
        cdf.push(acc);
    }
    let last = table.len() - 1;
    (0..m)
        .map(|_| {
            let u: f64 = rng.gen();
            cdf.partition_point(|&c| c < u).min(last)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use spin_core::SpinHamiltonian;

    #[test]
    fn uniform_table_from_zero_hamiltonian() {
        let t = gibbs_table(&SpinHamiltonian::zero(3)).unwrap();
        for &p in t.probs() {
            assert!((p - 0.125).abs() < 1e-15);
        }
        assert!((t.log_z() - 3.0 * std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn one_site_field_table() {
        let h = 0.7;
        let ham = SpinHamiltonian::from_terms(1, vec![(vec![1], h)]).unwrap();
        let t = gibbs_table(&ham).unwrap();
        let z = 2.0 * h.cosh();
        assert!((t.prob(0) - h.exp() / z).abs() < 1e-15);
        assert!((t.prob(1) - (-h).exp() / z).abs() < 1e-15);
        assert!((t.log_z() - z.ln()).abs() < 1e-12);
    }

    #[test]
    fn random_table_normalizes() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let h = crate::random::random_hamiltonian(6, 3, crate::random::CoeffLaw::Gaussian, 0.6, &mut rng);
        let t = gibbs_table(&h).unwrap();
        let sum: f64 = t.probs().iter().sum();
        assert!((sum - 1.0).abs() <= 1e-12);
        assert!(t.is_full_support());
        // log_z against direct summation oracle.
        let direct: f64 = (0..8usize * 8)
            .map(|s| h.evaluate_state(s).exp())
            .sum::<f64>()
            .ln();
        assert!((t.log_z() - direct).abs() / direct.abs().max(1.0) <= 1e-10);
    }

    #[test]
    fn tilt_identity_and_odds() {
        let t = ExactGibbsTable::uniform(3);
        let same = t.tilt(&[1.0, 1.0, 1.0]).unwrap();
        for s in 0..8 {
            assert!((same.prob(s) - t.prob(s)).abs() < 1e-15);
        }
        let tilted = t.tilt(&[3.0, 1.0, 1.0]).unwrap();
        let p_plus: f64 = (0..8)
            .filter(|&s| spin_core::corners::spin_at(s, 3, 1) > 0.0)
            .map(|s| tilted.prob(s))
            .sum();
        assert!((p_plus - 0.75).abs() < 1e-12);
    }

    #[test]
    fn tilt_composes_multiplicatively() {
        let ham = SpinHamiltonian::from_terms(2, vec![(vec![1, 2], 0.4)]).unwrap();
        let t = gibbs_table(&ham).unwrap();
        let a = [2.0, 0.5];
        let b = [1.5, 3.0];
        let ab: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
        let two = t.tilt(&a).unwrap().tilt(&b).unwrap();
        let one = t.tilt(&ab).unwrap();
        for s in 0..4 {
            assert!((two.prob(s) - one.prob(s)).abs() <= 1e-14);
        }
    }

    #[test]
    fn tilt_rejects_nonpositive() {
        let t = ExactGibbsTable::uniform(2);
        assert!(t.tilt(&[1.0, 0.0]).is_err());
        assert!(t.tilt(&[1.0, -2.0]).is_err());
    }

    #[test]
    fn inverse_cdf_sampling_concentrates() {
        let ham = SpinHamiltonian::from_terms(2, vec![(vec![1], 2.0)]).unwrap();
        let t = gibbs_table(&ham).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let m = 200_000;
        let draws = sample_states(&t, m, &mut rng);
        let mut emp = vec![0.0; 4];
        for s in draws {
            emp[s] += 1.0 / m as f64;
        }
        assert!(tv_distance(&emp, t.probs()) <= 3.0 * (4.0f64 / m as f64).sqrt());
    }
}
