//! The smoothness constant `beta = max_sigma ||∇²H(sigma)||_op` and the
//! pinned-subsystem constant `T`. Because the Hessian of the multilinear
//! extension at any interior point is a product-measure average of corner
//! Hessians, the corner maximum equals the cube-wide supremum, and `T = beta`.

use crate::corners::{corner_coords, state_count};
use crate::linalg::operator_norm;
use crate::{Result, SpinError, SpinHamiltonian};

/// Exhaustive corner enumeration is capped here.
pub const BETA_EXHAUSTIVE_MAX_N: usize = 20;
/// `t_constant` enumerates `3^n` points.
pub const T_CONSTANT_MAX_N: usize = 12;

/// How `smoothness_beta` explores the corners.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleMode {
    /// All `2^n` corners; exact.
    Exhaustive,
    /// Random corners plus sign-greedy local ascent; a certified lower bound.
    Sampled { trials: usize, seed: u64 },
}

/// Result of a smoothness computation.
#[derive(Debug, Clone)]
pub struct SmoothnessReport {
    /// Max (exhaustive) or best-found (sampled) corner Hessian operator norm.
    pub beta: f64,
    /// Corner attaining `beta`.
    pub argmax_corner: Vec<i8>,
    /// True when the value is the exact maximum.
    pub exhaustive: bool,
}

fn corner_hessian_norm(h: &SpinHamiltonian, state: usize) -> f64 {
    let x = corner_coords(state, h.n());
    operator_norm(&h.hessian_unchecked(&x))
}

/// `beta = max_sigma ||∇²H(sigma)||_op`.
///
/// For Hamiltonians of degree at most 2 the Hessian is constant and a single
/// norm suffices. Sampled mode returns a lower bound: uniform random corners,
/// each improved by greedily flipping the most-improving coordinate.
pub fn smoothness_beta(h: &SpinHamiltonian, mode: SampleMode) -> Result<SmoothnessReport> {
    let n = h.n();
    if h.degree() <= 2 {
        let x = vec![1.0; n];
        return Ok(SmoothnessReport {
            beta: operator_norm(&h.hessian_unchecked(&x)),
            argmax_corner: vec![1; n],
            exhaustive: true,
        });
    }
    match mode {
        SampleMode::Exhaustive => {
            if n > BETA_EXHAUSTIVE_MAX_N {
                return Err(SpinError::TooLarge {
                    n,
                    limit: BETA_EXHAUSTIVE_MAX_N,
                    what: "exhaustive smoothness_beta",
                });
            }
            let mut best = f64::NEG_INFINITY;
            let mut arg = 0usize;
            for s in 0..state_count(n) {
                let v = corner_hessian_norm(h, s);
                if v > best {
                    best = v;
                    arg = s;
                }
            }
            Ok(SmoothnessReport {
                beta: best,
                argmax_corner: crate::corners::spins_of_state(arg, n),
                exhaustive: true,
            })
        }
        SampleMode::Sampled { trials, seed } => {
            let mut state = seed ^ 0x5851_f42d_4c95_7f2d;
            let mut next_u64 = move || {
                state = state
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                let mut z = state;
                z = (z ^ (z >> 33)).wrapping_mul(0xff51afd7ed558ccd);
                z ^ (z >> 33)
            };
            let mask = state_count(n) - 1;
            let mut best = f64::NEG_INFINITY;
            let mut arg = 0usize;
            for _ in 0..trials.max(1) {
                let mut s = next_u64() as usize & mask;
                let mut val = corner_hessian_norm(h, s);
                loop {
                    let mut improved = false;
                    let mut bs = s;
                    let mut bv = val;
                    for i in 1..=n {
                        let t = crate::corners::flip_site(s, n, i);
                        let v = corner_hessian_norm(h, t);
                        if v > bv + 1e-15 {
                            bv = v;
                            bs = t;
                            improved = true;
                        }
                    }
                    if !improved {
                        break;
                    }
                    s = bs;
                    val = bv;
                }
                if val > best {
                    best = val;
                    arg = s;
                }
            }
            Ok(SmoothnessReport {
                beta: best,
                argmax_corner: crate::corners::spins_of_state(arg, n),
                exhaustive: false,
            })
        }
    }
}

/// `T`: the supremum over disjoint pinning sets `A, B`, pinned spins, and
/// free corners of the operator norm of the pinned-system interaction matrix
/// `(∂_i B_j^{[A,B]})`.
///
/// Enumerates `x in {-1,0,+1}^n` and takes the Hessian restricted to the
/// nonzero coordinates: zero coordinates realize `B`, and taking `A` empty is
/// optimal because any pinned matrix is a principal submatrix of the free one
/// at the same point.
pub fn t_constant(h: &SpinHamiltonian) -> Result<f64> {
    let n = h.n();
    if n > T_CONSTANT_MAX_N {
        return Err(SpinError::TooLarge {
            n,
            limit: T_CONSTANT_MAX_N,
            what: "t_constant",
        });
    }
    let mut trits = vec![0u8; n]; // 0 -> -1, 1 -> 0, 2 -> +1
    let mut best = 0.0f64;
    loop {
        let x: Vec<f64> = trits.iter().map(|&t| f64::from(t) - 1.0).collect();
        let free: Vec<usize> = (0..n).filter(|&i| trits[i] != 1).collect();
        if free.len() >= 2 {
            let hess = h.hessian_unchecked(&x);
            let sub = hess.select_rows(free.iter()).select_columns(free.iter());
            best = best.max(operator_norm(&sub));
        }
        // Odometer over trits.
        let mut pos = 0;
        loop {
            if pos == n {
                return Ok(best);
            }
            trits[pos] += 1;
            if trits[pos] <= 2 {
                break;
            }
            trits[pos] = 0;
            pos += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::PinningContext;

    fn ising(n: usize, j: &[(usize, usize, f64)], h: &[f64]) -> SpinHamiltonian {
        let mut terms: Vec<(Vec<usize>, f64)> =
            j.iter().map(|&(a, b, c)| (vec![a, b], c)).collect();
        for (i, &hi) in h.iter().enumerate() {
            if hi != 0.0 {
                terms.push((vec![i + 1], hi));
            }
        }
        SpinHamiltonian::from_terms(n, terms).unwrap()
    }

    #[test]
    fn ising_beta_is_coupling_norm() {
        // J = [[0, .1], [.1, 0]] has operator norm 0.1, for any field.
        let h = ising(2, &[(1, 2, 0.1)], &[3.0, -1.0]);
        let rep = smoothness_beta(&h, SampleMode::Exhaustive).unwrap();
        assert!((rep.beta - 0.1).abs() < 1e-14);
        assert!(rep.exhaustive);
    }

    #[test]
    fn triple_term_beta_matches_corner_oracle() {
        let h = SpinHamiltonian::from_terms(3, vec![(vec![1, 2, 3], 1.0)]).unwrap();
        // Oracle: enumerate all 8 corners directly.
        let mut oracle = 0.0f64;
        for s in 0..8 {
            let x = corner_coords(s, 3);
            oracle = oracle.max(operator_norm(&h.hessian(&x).unwrap()));
        }
        let rep = smoothness_beta(&h, SampleMode::Exhaustive).unwrap();
        assert!((rep.beta - oracle).abs() < 1e-14);
        // The hollow all-ones 3x3 matrix has spectrum {2, -1, -1}.
        assert!((rep.beta - 2.0).abs() < 1e-12);
    }

    #[test]
    fn sampled_mode_is_lower_bound() {
        let mut seed = 17u64;
        for trial in 0..10 {
            seed = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(trial);
            let n = 6;
            let mut terms = Vec::new();
            let mut s = seed;
            let mut rnd = move || {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                ((s >> 11) as f64) / (1u64 << 53) as f64 - 0.5
            };
            for i in 1..=n {
                for j in i + 1..=n {
                    for k in j + 1..=n {
                        terms.push((vec![i, j, k], rnd()));
                    }
                }
            }
            let h = SpinHamiltonian::from_terms(n, terms).unwrap();
            let exact = smoothness_beta(&h, SampleMode::Exhaustive).unwrap().beta;
            let sampled = smoothness_beta(&h, SampleMode::Sampled { trials: 8, seed })
                .unwrap()
                .beta;
            assert!(
                sampled <= exact + 1e-12,
                "sampled {sampled} exceeds exhaustive {exact}"
            );
        }
    }

    #[test]
    fn degree_one_t_is_zero() {
        let h = SpinHamiltonian::from_terms(3, vec![(vec![1], 5.0), (vec![2], -2.0)]).unwrap();
        assert_eq!(t_constant(&h).unwrap(), 0.0);
    }

    #[test]
    fn ising_t_equals_coupling_norm() {
        let h = ising(3, &[(1, 2, 0.4), (2, 3, -0.7), (1, 3, 0.2)], &[1.0, 0.0, -2.0]);
        let t = t_constant(&h).unwrap();
        let beta = smoothness_beta(&h, SampleMode::Exhaustive).unwrap().beta;
        assert!((t - beta).abs() <= 1e-12, "T {t} vs beta {beta}");
    }

    #[test]
    fn t_matches_full_pinning_enumeration() {
        // Independent oracle: enumerate every (A, B, sigma_A, free corner)
        // through pin() and the generic Hessian, at n = 4.
        let n = 4;
        let h = SpinHamiltonian::from_terms(
            n,
            vec![
                (vec![1, 2, 3], 0.8),
                (vec![2, 3, 4], -0.5),
                (vec![1, 4], 0.3),
                (vec![2], 1.1),
            ],
        )
        .unwrap();
        let mut oracle = 0.0f64;
        let mut assign = vec![0u8; n]; // 0 free, 1 in A, 2 in B
        'outer: loop {
            let a: Vec<usize> = (0..n).filter(|&i| assign[i] == 1).map(|i| i + 1).collect();
            let b: Vec<usize> = (0..n).filter(|&i| assign[i] == 2).map(|i| i + 1).collect();
            let free: Vec<usize> = (0..n).filter(|&i| assign[i] == 0).collect();
            for amask in 0..(1usize << a.len()) {
                let sigma: Vec<i8> = (0..a.len())
                    .map(|k| if (amask >> k) & 1 == 0 { 1 } else { -1 })
                    .collect();
                let ctx = PinningContext::new(a.clone(), sigma, b.clone()).unwrap();
                let pinned = h.pin(&ctx).unwrap();
                for fmask in 0..(1usize << free.len()) {
                    let mut x = vec![0.0; n];
                    for (&site, &spin) in ctx.a_sites().iter().zip(ctx.sigma_a()) {
                        x[site - 1] = f64::from(spin);
                    }
                    for (k, &i) in free.iter().enumerate() {
                        x[i] = if (fmask >> k) & 1 == 0 { 1.0 } else { -1.0 };
                    }
                    let hess = pinned.hessian(&x).unwrap();
                    let sub = hess.select_rows(free.iter()).select_columns(free.iter());
                    oracle = oracle.max(operator_norm(&sub));
                }
            }
            let mut pos = 0;
            loop {
                if pos == n {
                    break 'outer;
                }
                assign[pos] += 1;
                if assign[pos] <= 2 {
                    break;
                }
                assign[pos] = 0;
                pos += 1;
            }
        }
        let t = t_constant(&h).unwrap();
        assert!((t - oracle).abs() <= 1e-12, "T {t} vs oracle {oracle}");
    }

    #[test]
    fn t_rejects_large_n() {
        let h = SpinHamiltonian::zero(13);
        assert!(matches!(t_constant(&h), Err(SpinError::TooLarge { .. })));
    }
}
