//! Dense symmetric spectral helpers shared across the workspace.
//!
//! Matrices here are small (at most a few thousand rows), so a dense
//! eigensolver is the primary path; power iteration is kept as a fallback for
//! anything larger, with relative tolerance 1e-10 and an iteration cap.

use nalgebra::DMatrix;

/// Dimension above which [`operator_norm`] switches to power iteration.
const DENSE_EIG_LIMIT: usize = 600;

const POWER_TOL: f64 = 1e-10;
const POWER_MAX_ITERS: usize = 100_000;

/// Eigenvalues of a symmetric matrix, ascending.
pub fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let mut ev: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}

/// Largest eigenvalue of a symmetric matrix.
pub fn lambda_max(m: &DMatrix<f64>) -> f64 {
    *symmetric_eigenvalues(m)
        .last()
        .expect("lambda_max of empty matrix")
}

/// Operator (spectral) norm of a symmetric matrix; 0 for the empty matrix.
pub fn operator_norm(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    if n == 0 {
        return 0.0;
    }
    if n <= DENSE_EIG_LIMIT {
        symmetric_eigenvalues(m)
            .into_iter()
            .fold(0.0f64, |acc, v| acc.max(v.abs()))
    } else {
        power_iteration_norm(m)
    }
}

/// Spectral radius of a symmetric matrix by power iteration. The growth rate
/// `|Mv|/|v|` converges to the largest |eigenvalue| even when the extreme
/// eigenvalues come in a +/- pair.
pub fn power_iteration_norm(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    // Deterministic pseudo-random start so repeated runs agree bit-for-bit.
    let mut state = 0x9e37_79b9_7f4a_7c15u64;
    let mut v = nalgebra::DVector::from_fn(n, |_, _| {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((state >> 11) as f64) / (1u64 << 53) as f64 - 0.5
    });
    let mut norm = v.norm();
    if norm == 0.0 {
        return 0.0;
    }
    v /= norm;
    let mut estimate = 0.0f64;
    for _ in 0..POWER_MAX_ITERS {
        let w = m * &v;
        norm = w.norm();
        if norm == 0.0 {
            return 0.0;
        }
        let rel = (norm - estimate).abs() / norm.max(f64::MIN_POSITIVE);
        estimate = norm;
        v = w / norm;
        if rel <= POWER_TOL {
            break;
        }
    }
    estimate
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norm_of_small_symmetric() {
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 0.1, 0.1, 0.0]);
        assert!((operator_norm(&m) - 0.1).abs() < 1e-14);
    }

    #[test]
    fn power_iteration_agrees_with_dense() {
        let mut state = 1u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64) / (1u64 << 53) as f64 - 0.5
        };
        let n = 40;
        let a = DMatrix::from_fn(n, n, |_, _| next());
        let sym = (&a + a.transpose()) * 0.5;
        let dense = operator_norm(&sym);
        let power = power_iteration_norm(&sym);
        assert!(
            (dense - power).abs() <= 1e-8 * dense.max(1.0),
            "dense {dense} vs power {power}"
        );
    }

    #[test]
    fn empty_matrix_norm_is_zero() {
        assert_eq!(operator_norm(&DMatrix::zeros(0, 0)), 0.0);
    }
}
