use nalgebra::{DMatrix, DVector};
use spin_core::corners::{flip_site, spins_of_state, state_count};
use spin_core::linalg::symmetric_eigenvalues;
use spin_core::SpinHamiltonian;

use crate::table::{tv_distance, ExactGibbsTable};
use crate::{EngineError, Result};

/// Dense Glauber operators are capped at this many sites.
pub const GLAUBER_MAX_N: usize = 14;

const ROW_SUM_TOL: f64 = 1e-12;
const STATIONARY_TOL: f64 = 1e-10;
const REVERSIBILITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WalkKind {
    Glauber,
    DownUp,
    UpDown,
}

/// A row-stochastic transition matrix with its stationary distribution.
#[derive(Debug, Clone)]
pub struct WalkOperator {
    pub kind: WalkKind,
    pub matrix: DMatrix<f64>,
    pub stationary: DVector<f64>,
}

impl WalkOperator {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Checks the structural invariants: rows sum to 1 (1e-12), the
    /// stationary vector is left-fixed (1e-10), and detailed balance holds
    /// (1e-10).
    pub fn validate(&self) -> Result<()> {
        let n = self.dim();
        if self.stationary.len() != n {
            return Err(EngineError::DimensionMismatch {
                expected: n,
                got: self.stationary.len(),
            });
        }
        for r in 0..n {
            let sum: f64 = self.matrix.row(r).iter().sum();
            if (sum - 1.0).abs() > ROW_SUM_TOL {
                return Err(EngineError::BadParameter(format!(
                    "row {r} sums to {sum}, not 1"
                )));
            }
        }
        let left = self.matrix.transpose() * &self.stationary;
        let dev = (&left - &self.stationary).amax();
        if dev > STATIONARY_TOL {
            return Err(EngineError::BadParameter(format!(
                "stationary vector is not left-fixed (deviation {dev:e})"
            )));
        }
        self.check_reversible()
    }

    pub fn check_reversible(&self) -> Result<()> {
        let n = self.dim();
        let mut dev = 0.0f64;
        for x in 0..n {
            for y in x + 1..n {
                let d = (self.stationary[x] * self.matrix[(x, y)]
                    - self.stationary[y] * self.matrix[(y, x)])
                    .abs();
                dev = dev.max(d);
            }
        }
        if dev > REVERSIBILITY_TOL {
            return Err(EngineError::NotReversible { deviation: dev });
        }
        Ok(())
    }

    /// Similarity transform `D_pi^{1/2} P D_pi^{-1/2}`, symmetric for
    /// reversible chains; guards division by requiring positive stationary
    /// mass everywhere.
    fn symmetrized(&self) -> Result<DMatrix<f64>> {
        let n = self.dim();
        if let Some(x) = (0..n).find(|&x| self.stationary[x] <= 0.0) {
            return Err(EngineError::ZeroProbabilityState { state: x });
        }
        let d: Vec<f64> = self.stationary.iter().map(|&p| p.sqrt()).collect();
        let mut a = DMatrix::zeros(n, n);
        for x in 0..n {
            for y in 0..n {
                a[(x, y)] = self.matrix[(x, y)] * d[x] / d[y];
            }
        }
        Ok((&a + a.transpose()) * 0.5)
    }
}

/// All eigenvalues of a reversible walk, ascending.
pub fn walk_eigenvalues(op: &WalkOperator) -> Result<Vec<f64>> {
    op.check_reversible()?;
    Ok(symmetric_eigenvalues(&op.symmetrized()?))
}

/// Spectral gap `1 - lambda_2` of a reversible walk.
pub fn spectral_gap(op: &WalkOperator) -> Result<f64> {
    let ev = walk_eigenvalues(op)?;
    if ev.len() < 2 {
        return Ok(1.0);
    }
    Ok(1.0 - ev[ev.len() - 2])
}

/// The single-site heat-bath (Glauber) transition matrix of a full-support
/// table: a uniformly random site is resampled from its conditional law, so
/// `P(sigma, sigma^j) = mu(sigma^j) / (n (mu(sigma) + mu(sigma^j)))`.
pub fn glauber_operator(table: &ExactGibbsTable) -> Result<WalkOperator> {
    let n = table.n();
    if n > GLAUBER_MAX_N {
        return Err(EngineError::TooLarge {
            n,
            limit: GLAUBER_MAX_N,
            what: "glauber_operator",
        });
    }
    if let Some(state) = table.zero_state() {
        return Err(EngineError::ZeroProbabilityState { state });
    }
    let len = state_count(n);
    let mut p = DMatrix::zeros(len, len);
    for s in 0..len {
        let mut hold = 1.0;
        for j in 1..=n {
            let t = flip_site(s, n, j);
            let w = table.prob(t) / (table.prob(s) + table.prob(t)) / n as f64;
            p[(s, t)] = w;
            hold -= w;
        }
        p[(s, s)] = hold;
    }
    Ok(WalkOperator {
        kind: WalkKind::Glauber,
        matrix: p,
        stationary: DVector::from_column_slice(table.probs()),
    })
}

/// Dirichlet form `E_P(f,g) = ½ Σ_{x,y} pi(x) P(x,y) (f(x)-f(y)) (g(x)-g(y))`.
pub fn dirichlet_form(op: &WalkOperator, f: &[f64], g: &[f64]) -> Result<f64> {
    let n = op.dim();
    if f.len() != n || g.len() != n {
        return Err(EngineError::DimensionMismatch {
            expected: n,
            got: f.len().min(g.len()),
        });
    }
    let mut acc = 0.0;
    for x in 0..n {
        let px = op.stationary[x];
        for y in 0..n {
            let w = op.matrix[(x, y)];
            if w != 0.0 {
                acc += px * w * (f[x] - f[y]) * (g[x] - g[y]);
            }
        }
    }
    Ok(0.5 * acc)
}

/// The cosh form of the Glauber Dirichlet energy,
/// `(1/4n) Σ_sigma mu(sigma) Σ_j cosh^{-2}(B_j(sigma)) (f(sigma)-f(sigma^j))²`,
/// where `B_j` is the cavity field. The `1/n` matches the uniform site
/// selection in [`glauber_operator`], so this agrees with
/// [`dirichlet_form`] applied to that operator.
pub fn dirichlet_form_cosh(h: &SpinHamiltonian, table: &ExactGibbsTable, f: &[f64]) -> Result<f64> {
    let n = h.n();
    if table.n() != n {
        return Err(EngineError::DimensionMismatch {
            expected: n,
            got: table.n(),
        });
    }
    if f.len() != table.len() {
        return Err(EngineError::DimensionMismatch {
            expected: table.len(),
            got: f.len(),
        });
    }
    let mut acc = 0.0;
    for s in 0..table.len() {
        let spins = spins_of_state(s, n);
        for j in 1..=n {
            let b = h.cavity_field(j, &spins)?;
            let sech = 1.0 / b.cosh();
            let df = f[s] - f[flip_site(s, n, j)];
            acc += table.prob(s) * sech * sech * df * df;
        }
    }
    Ok(acc / (4.0 * n as f64))
}

/// Conditional-covariance form of the Glauber Dirichlet form:
/// `(1/n) Σ_i E_{sigma_{~i}} Cov(f, g | sigma_{~i})`.
pub fn dirichlet_form_cov(table: &ExactGibbsTable, f: &[f64], g: &[f64]) -> Result<f64> {
    let n = table.n();
    if f.len() != table.len() || g.len() != table.len() {
        return Err(EngineError::DimensionMismatch {
            expected: table.len(),
            got: f.len().min(g.len()),
        });
    }
    let mut acc = 0.0;
    for i in 1..=n {
        for s in 0..table.len() {
            let t = flip_site(s, n, i);
            if s < t {
                let w = table.prob(s) + table.prob(t);
                if w > 0.0 {
                    let p = table.prob(s) / w;
                    acc += w * p * (1.0 - p) * (f[s] - f[t]) * (g[s] - g[t]);
                }
            }
        }
    }
    Ok(acc / n as f64)
}

/// Exact `eps`-total-variation mixing time: the smallest `t` with
/// `max_x d_TV(1_x P^t, pi) <= eps`, found by exact matrix powering.
pub fn measured_mixing_time(op: &WalkOperator, eps: f64, cap: usize) -> Result<usize> {
    if !(0.0..1.0).contains(&eps) || eps == 0.0 {
        return Err(EngineError::BadParameter(format!("eps = {eps} not in (0,1)")));
    }
    let n = op.dim();
    let pi: Vec<f64> = op.stationary.iter().copied().collect();
    let mut m = DMatrix::<f64>::identity(n, n);
    for t in 0..=cap {
        let worst = (0..n)
            .map(|x| {
                let row: Vec<f64> = m.row(x).iter().copied().collect();
                tv_distance(&row, &pi)
            })
            .fold(0.0f64, f64::max);
        if worst <= eps {
            return Ok(t);
        }
        m *= &op.matrix;
    }
    Err(EngineError::MixingCapExceeded { eps, cap })
}
