use crate::{EngineError, Result};

/// The standard total-variation mixing-time bracket from the Poincaré
/// constant, plus the MLSI upper bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixingBounds {
    /// `(1/gamma - 1) log(1/2eps)`
    pub lower_gamma: f64,
    /// `(1/gamma) log(1/(eps min_x mu(x)))`
    pub upper_gamma: f64,
    /// `(1/rho) (log log(1/min_x mu(x)) + log(1/2eps²))`
    pub upper_mlsi: f64,
}

/// Evaluates the three mixing-time expressions for spectral gap `gamma`,
/// MLSI constant `rho`, minimum stationary probability, and accuracy `eps`.
pub fn mixing_time_bounds(gamma: f64, rho: f64, min_prob: f64, eps: f64) -> Result<MixingBounds> {
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(EngineError::BadParameter(format!("gamma = {gamma} not in (0,1]")));
    }
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(EngineError::BadParameter(format!("rho = {rho} not in (0,1]")));
    }
    if !(min_prob > 0.0 && min_prob < 1.0) {
        return Err(EngineError::BadParameter(format!(
            "min_prob = {min_prob} not in (0,1)"
        )));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(EngineError::BadParameter(format!("eps = {eps} not in (0,1)")));
    }
    let lower_gamma = (1.0 / gamma - 1.0) * (1.0 / (2.0 * eps)).ln();
    let upper_gamma = (1.0 / gamma) * (1.0 / (eps * min_prob)).ln();
    let upper_mlsi = (1.0 / rho) * ((1.0 / min_prob).ln().ln() + (1.0 / (2.0 * eps * eps)).ln());
    Ok(MixingBounds {
        lower_gamma,
        upper_gamma,
        upper_mlsi,
    })
}

/// Spectral independence from a contraction parameter: a coupling contracting
/// at rate `kappa <= 1 - eps/n` forces gap at least `eps/n`, hence
/// `eta = 1/eps` with `eps = n(1 - kappa)`.
pub fn si_from_contraction(kappa: f64, n: usize) -> Result<f64> {
    if !(0.0..1.0).contains(&kappa) {
        return Err(EngineError::BadParameter(format!("kappa = {kappa} not in [0,1)")));
    }
    if n == 0 {
        return Err(EngineError::BadParameter("n must be positive".into()));
    }
    Ok(1.0 / (n as f64 * (1.0 - kappa)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_gap_has_zero_lower_bound() {
        let b = mixing_time_bounds(1.0, 0.5, 0.01, 0.25).unwrap();
        assert_eq!(b.lower_gamma, 0.0);
    }

    #[test]
    fn substitution_examples() {
        let min = (2.0f64).powi(-10);
        let b = mixing_time_bounds(0.1, 0.05, min, 0.01).unwrap();
        assert!((b.upper_gamma - 10.0 * (100.0 * 1024.0f64).ln()).abs() < 1e-10);
        let expect_mlsi = 20.0 * ((1024.0f64).ln().ln() + 5000.0f64.ln());
        assert!((b.upper_mlsi - expect_mlsi).abs() < 1e-10);
    }

    #[test]
    fn contraction_examples() {
        let n = 8;
        assert!((si_from_contraction(1.0 - 1.0 / n as f64, n).unwrap() - 1.0).abs() < 1e-14);
        assert!((si_from_contraction(0.0, 1).unwrap() - 1.0).abs() < 1e-14);
        assert!((si_from_contraction(1.0 - 2.0 / n as f64, n).unwrap() - 0.5).abs() < 1e-14);
        assert!(si_from_contraction(1.0, 4).is_err());
    }
}
