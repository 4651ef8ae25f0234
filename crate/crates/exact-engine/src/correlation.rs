use nalgebra::DMatrix;
use spin_core::corners::spin_at;
use spin_core::linalg::lambda_max;

use crate::table::ExactGibbsTable;
use crate::{EngineError, Result};

/// Correlation matrices enumerate `2^n` states.
pub const CORRELATION_MAX_N: usize = 14;

/// The correlation matrix of a measure, with rows conditioning and columns
/// responding: entry `(x, y)` is `P[y | x] - P[y]` off the diagonal and
/// `1 - P[x]` on it.
#[derive(Debug, Clone)]
pub struct CorrelationMatrix {
    pub matrix: DMatrix<f64>,
    pub lambda_max: f64,
}

impl CorrelationMatrix {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

/// Single and pairwise marginals of the homogenized measure: element
/// `2(i-1) + b` is site `i` carrying spin `+1` (b = 0) or `-1` (b = 1).
pub fn homogenized_marginals(table: &ExactGibbsTable) -> (Vec<f64>, DMatrix<f64>) {
    let n = table.n();
    let m = 2 * n;
    let mut single = vec![0.0; m];
    let mut joint = DMatrix::zeros(m, m);
    let mut active = vec![0usize; n];
    for s in 0..table.len() {
        let w = table.prob(s);
        if w == 0.0 {
            continue;
        }
        for i in 1..=n {
            active[i - 1] = 2 * (i - 1) + usize::from(spin_at(s, n, i) < 0.0);
        }
        for &a in &active {
            single[a] += w;
            for &b in &active {
                joint[(a, b)] += w;
            }
        }
    }
    (single, joint)
}

/// Builds `M = alpha² D Psi - alpha D` for the homogenized measure directly
/// from joint marginals; the assembly `M(x,y) = alpha²(P[x,y] - P[x]P[y])`
/// off-diagonal, `alpha² P[x](1-P[x]) - alpha P[x]` on it, is symmetric.
pub(crate) fn flc_matrix(single: &[f64], joint: &DMatrix<f64>, alpha: f64) -> DMatrix<f64> {
    let m = single.len();
    DMatrix::from_fn(m, m, |x, y| {
        if x == y {
            alpha * alpha * single[x] * (1.0 - single[x]) - alpha * single[x]
        } else {
            alpha * alpha * (joint[(x, y)] - single[x] * single[y])
        }
    })
}

/// Correlation matrix of the homogenized spin measure (`2n x 2n`); requires
/// full support so every conditioning event has positive probability.
pub fn correlation_matrix_spin(table: &ExactGibbsTable) -> Result<CorrelationMatrix> {
    let n = table.n();
    if n > CORRELATION_MAX_N {
        return Err(EngineError::TooLarge {
            n,
            limit: CORRELATION_MAX_N,
            what: "correlation_matrix_spin",
        });
    }
    if let Some(state) = table.zero_state() {
        return Err(EngineError::ZeroProbabilityState { state });
    }
    let (single, joint) = homogenized_marginals(table);
    let m = 2 * n;
    let psi = DMatrix::from_fn(m, m, |x, y| {
        if x == y {
            1.0 - single[x]
        } else {
            joint[(x, y)] / single[x] - single[y]
        }
    });
    // Psi is similar to the symmetric D^{-1/2} (D Psi) D^{-1/2}; use that for
    // a real spectrum.
    let sym = DMatrix::from_fn(m, m, |x, y| {
        let dpsi = if x == y {
            single[x] * (1.0 - single[x])
        } else {
            joint[(x, y)] - single[x] * single[y]
        };
        dpsi / (single[x] * single[y]).sqrt()
    });
    let lm = lambda_max(&((&sym + sym.transpose()) * 0.5));
    Ok(CorrelationMatrix {
        matrix: psi,
        lambda_max: lm,
    })
}

/// `eta = lambda_max(Psi)` of the homogenized correlation matrix.
pub fn spectral_independence_eta(table: &ExactGibbsTable) -> Result<f64> {
    Ok(correlation_matrix_spin(table)?.lambda_max)
}
