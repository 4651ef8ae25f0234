//! Random Hamiltonian families for verification sweeps.

use rand::Rng;
use rand_distr::{Exp1, StandardNormal};
use spin_core::{smoothness_beta, SampleMode, SpinHamiltonian};

/// Coefficient law for random instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoeffLaw {
    Gaussian,
    /// Exp(1) magnitude with a uniform random sign.
    SignedExp,
}

/// Corner values are rescaled so `max H - min H` stays below this, keeping
/// every state numerically inside the support of `exp(H)`.
const MAX_RANGE: f64 = 40.0;

/// A dense random Hamiltonian with all terms of degree `1..=degree`,
/// coefficients drawn from `law` and scaled by `scale / sqrt(#terms of that
/// degree)`. The overall instance is clamped to a safe dynamic range.
pub fn random_hamiltonian<R: Rng>(
    n: usize,
    degree: usize,
    law: CoeffLaw,
    scale: f64,
    rng: &mut R,
) -> SpinHamiltonian {
    let mut draws: Vec<(u64, f64)> = Vec::new();
    let mut per_degree_counts = vec![0usize; degree + 1];
    for mask in 1u64..(1 << n) {
        let d = mask.count_ones() as usize;
        if d <= degree {
            per_degree_counts[d] += 1;
        }
    }
    for mask in 1u64..(1 << n) {
        let d = mask.count_ones() as usize;
        if d > degree {
            continue;
        }
        let raw: f64 = match law {
            CoeffLaw::Gaussian => rng.sample(StandardNormal),
            CoeffLaw::SignedExp => {
                let mag: f64 = rng.sample(Exp1);
                if rng.gen::<bool>() {
                    mag
                } else {
                    -mag
                }
            }
        };
        draws.push((mask, raw * scale / (per_degree_counts[d] as f64).sqrt()));
    }
    let h = SpinHamiltonian::from_masks(n, draws).expect("valid masks");
    clamp_range(h)
}

fn clamp_range(h: SpinHamiltonian) -> SpinHamiltonian {
    let table = h.corner_table();
    let max = table.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = table.iter().copied().fold(f64::INFINITY, f64::min);
    let range = max - min;
    if range <= MAX_RANGE {
        return h;
    }
    let factor = MAX_RANGE / range;
    let n = h.n();
    SpinHamiltonian::from_masks(n, h.terms().map(|(m, c)| (m, c * factor))).expect("rescale")
}

/// A random degree-`<= degree` instance whose interaction part is rescaled to
/// an exact smoothness `beta = target_beta`, with moderate Gaussian fields
/// left untouched (fields do not enter the Hessian).
pub fn random_small_beta_hamiltonian<R: Rng>(
    n: usize,
    degree: usize,
    target_beta: f64,
    rng: &mut R,
) -> SpinHamiltonian {
    assert!(degree >= 2, "interactions need degree >= 2");
    loop {
        let mut terms: Vec<(u64, f64)> = Vec::new();
        for mask in 1u64..(1 << n) {
            let d = mask.count_ones() as usize;
            if d >= 2 && d <= degree {
                terms.push((mask, rng.sample(StandardNormal)));
            }
        }
        let interactions = SpinHamiltonian::from_masks(n, terms).expect("valid masks");
        let beta = smoothness_beta(&interactions, SampleMode::Exhaustive)
            .expect("small n")
            .beta;
        if beta <= 0.0 {
            continue;
        }
        let factor = target_beta / beta;
        let fields: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let scaled =
            SpinHamiltonian::from_masks(n, interactions.terms().map(|(m, c)| (m, c * factor)))
                .expect("rescale");
        return scaled.with_field_added(&fields).expect("field");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_instances_are_deterministic() {
        let a = random_hamiltonian(5, 3, CoeffLaw::Gaussian, 1.0, &mut ChaCha8Rng::seed_from_u64(4));
        let b = random_hamiltonian(5, 3, CoeffLaw::Gaussian, 1.0, &mut ChaCha8Rng::seed_from_u64(4));
        assert_eq!(a, b);
    }

    #[test]
    fn small_beta_instances_hit_target() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let h = random_small_beta_hamiltonian(5, 3, 0.03, &mut rng);
        let beta = smoothness_beta(&h, SampleMode::Exhaustive).unwrap().beta;
        assert!((beta - 0.03).abs() <= 1e-12, "beta = {beta}");
    }

    #[test]
    fn range_is_clamped() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let h = random_hamiltonian(6, 3, CoeffLaw::SignedExp, 100.0, &mut rng);
        let table = h.corner_table();
        let max = table.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = table.iter().copied().fold(f64::INFINITY, f64::min);
        assert!(max - min <= 40.0 + 1e-9);
    }
}
