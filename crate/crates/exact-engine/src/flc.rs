use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spin_core::linalg::lambda_max;

use crate::correlation::{flc_matrix, homogenized_marginals};
use crate::table::ExactGibbsTable;
use crate::{EngineError, Result};

/// A positive eigenvalue above this threshold counts as a concavity
/// violation; product measures sit at exactly zero, so the margin only has
/// to absorb eigensolver noise.
const PSD_TOL: f64 = 1e-10;

/// Outcome of fractional log-concavity falsification.
#[derive(Debug, Clone)]
pub enum FlcOutcome {
    /// No violating tilt found within the sample budget. This is NOT a
    /// certificate of log-concavity; the quantifier over external fields is
    /// infinite and only sampled here.
    Pass { tilts_checked: usize },
    /// A tilt whose homogenized measure fails the concavity test at `z = 1`.
    Witness { lambda: Vec<f64>, eigenvalue: f64 },
}

/// Searches for an external field under which `alpha`-fractional
/// log-concavity fails, by testing `lambda_max(alpha² D Psi - alpha D) <= 0`
/// for the tilted, homogenized measure. The all-ones field is always checked
/// first, then `tilt_samples` log-uniform fields in `[1e-3, 1e3]^n`.
pub fn flc_falsify(
    table: &ExactGibbsTable,
    alpha: f64,
    tilt_samples: usize,
    seed: u64,
) -> Result<FlcOutcome> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(EngineError::BadParameter(format!(
            "alpha = {alpha} outside (0, 1]"
        )));
    }
    if let Some(state) = table.zero_state() {
        return Err(EngineError::ZeroProbabilityState { state });
    }
    let n = table.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0usize;
    let mut next_tilt = |first: bool| -> Vec<f64> {
        if first {
            vec![1.0; n]
        } else {
            (0..n)
                .map(|_| {
                    let u: f64 = rng.gen();
                    // log-uniform in [1e-3, 1e3]
                    (10.0f64).powf(-3.0 + 6.0 * u)
                })
                .collect()
        }
    };
    for k in 0..=tilt_samples {
        let lambda = next_tilt(k == 0);
        let tilted = table.tilt(&lambda)?;
        let (single, joint) = homogenized_marginals(&tilted);
        let m = flc_matrix(&single, &joint, alpha);
        let top = lambda_max(&m);
        checked += 1;
        if top > PSD_TOL {
            return Ok(FlcOutcome::Witness {
                lambda,
                eigenvalue: top,
            });
        }
    }
    Ok(FlcOutcome::Pass {
        tilts_checked: checked,
    })
}
