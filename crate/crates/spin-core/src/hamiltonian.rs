use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::corners::{self, reverse_mask, state_count};
use crate::{Result, SpinError};

/// Slack tolerated before a coordinate is rejected as outside `[-1,1]`.
const DOMAIN_SLACK: f64 = 1e-12;

/// Largest `n` accepted by the exhaustive Fourier transform.
pub const FOURIER_MAX_N: usize = 24;

/// A function `H : {±1}^n -> R` stored through its nonzero Fourier
/// coefficients `Ĥ(S)`, identified with its multilinear extension
/// `H(x) = sum_S Ĥ(S) prod_{i in S} x_i` over `[-1,1]^n`.
///
/// Term keys are site bitmasks (bit `i-1` for site `i`); a missing key is a
/// zero coefficient. Two values with equal term maps define the same
/// function, so the representation is canonical.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinHamiltonian {
    n: usize,
    terms: BTreeMap<u64, f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermRecord {
    sites: Vec<usize>,
    coeff: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HamiltonianFile {
    n: usize,
    terms: Vec<TermRecord>,
}

impl SpinHamiltonian {
    /// The zero Hamiltonian on `n` sites.
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    /// Builds from `(sites, coeff)` pairs with 1-based, strictly increasing
    /// site lists. Duplicate site sets are rejected.
    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, f64)>,
    {
        let mut map = BTreeMap::new();
        for (sites, coeff) in terms {
            let mut mask = 0u64;
            let mut prev = 0usize;
            for &site in &sites {
                if site < 1 || site > n {
                    return Err(SpinError::SiteOutOfRange { site, n });
                }
                if site <= prev {
                    return Err(SpinError::InvalidTerm(format!(
                        "sites {sites:?} are not strictly increasing"
                    )));
                }
                prev = site;
                mask |= 1u64 << (site - 1);
            }
            if map.insert(mask, coeff).is_some() {
                return Err(SpinError::InvalidTerm(format!(
                    "duplicate term on sites {sites:?}"
                )));
            }
        }
        map.retain(|_, c| *c != 0.0);
        Ok(Self { n, terms: map })
    }

    /// Builds from raw `(bitmask, coeff)` pairs, accumulating duplicates.
    pub fn from_masks<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, f64)>,
    {
        let mut map: BTreeMap<u64, f64> = BTreeMap::new();
        for (mask, coeff) in terms {
            if n < 64 && mask >= (1u64 << n) {
                return Err(SpinError::InvalidTerm(format!(
                    "mask {mask:#x} has sites beyond n = {n}"
                )));
            }
            *map.entry(mask).or_insert(0.0) += coeff;
        }
        map.retain(|_, c| *c != 0.0);
        Ok(Self { n, terms: map })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Iterator over `(site bitmask, coefficient)` in ascending mask order.
    pub fn terms(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.terms.iter().map(|(&m, &c)| (m, c))
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of a site bitmask (0 when absent).
    pub fn coeff(&self, mask: u64) -> f64 {
        self.terms.get(&mask).copied().unwrap_or(0.0)
    }

    /// Largest term cardinality.
    pub fn degree(&self) -> usize {
        self.terms
            .keys()
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    /// `H` with its degree-1 part replaced by `h` (used for tilting).
    pub fn with_field_added(&self, h: &[f64]) -> Result<Self> {
        if h.len() != self.n {
            return Err(SpinError::DimensionMismatch {
                expected: self.n,
                got: h.len(),
            });
        }
        let mut out = self.clone();
        for (i, &hi) in h.iter().enumerate() {
            let mask = 1u64 << i;
            let c = out.terms.entry(mask).or_insert(0.0);
            *c += hi;
            if *c == 0.0 {
                out.terms.remove(&mask);
            }
        }
        Ok(out)
    }

    /// `H(sigma)` at a corner state (lexicographic index).
    pub fn evaluate_state(&self, state: usize) -> f64 {
        let mut tot = 0.0;
        for (&mask, &c) in &self.terms {
            let sm = reverse_mask(mask, self.n);
            tot += c * corners::monomial_sign(state, sm);
        }
        tot
    }

    /// All `2^n` corner values in lexicographic state order, synthesized with
    /// a Walsh-Hadamard butterfly in `O(n 2^n)`.
    pub fn corner_table(&self) -> Vec<f64> {
        let len = state_count(self.n);
        let mut vals = vec![0.0; len];
        for (&mask, &c) in &self.terms {
            vals[reverse_mask(mask, self.n) as usize] += c;
        }
        walsh_hadamard_in_place(&mut vals);
        vals
    }

    /// Inverse of [`Self::corner_table`]: recovers the coefficients
    /// `Ĥ(S) = 2^{-n} sum_sigma H(sigma) prod_{i in S} sigma_i` from a full
    /// table of corner values in lexicographic state order.
    pub fn fourier_transform(values: &[f64]) -> Result<Self> {
        let len = values.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(SpinError::BadTableLength { len });
        }
        let n = len.trailing_zeros() as usize;
        if n > FOURIER_MAX_N {
            return Err(SpinError::TooLarge {
                n,
                limit: FOURIER_MAX_N,
                what: "fourier_transform",
            });
        }
        let mut work = values.to_vec();
        walsh_hadamard_in_place(&mut work);
        let scale = 1.0 / len as f64;
        let mut terms = BTreeMap::new();
        for (idx, v) in work.into_iter().enumerate() {
            let c = v * scale;
            if c != 0.0 {
                terms.insert(reverse_mask(idx as u64, n), c);
            }
        }
        Ok(Self { n, terms })
    }

    fn check_point(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n {
            return Err(SpinError::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        let mut clamped = Vec::with_capacity(self.n);
        for (index, &v) in x.iter().enumerate() {
            if !(v.abs() <= 1.0 + DOMAIN_SLACK) {
                return Err(SpinError::OutOfDomain { index, value: v });
            }
            clamped.push(v.clamp(-1.0, 1.0));
        }
        Ok(clamped)
    }

    /// Multilinear extension at `x in [-1,1]^n`. At corners this agrees with
    /// the corner table; at interior points it equals the expectation of `H`
    /// under the product measure with site means `x_i`.
    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        let x = self.check_point(x)?;
        let mut tot = 0.0;
        for (&mask, &c) in &self.terms {
            let mut p = c;
            let mut m = mask;
            while m != 0 {
                let b = m.trailing_zeros() as usize;
                p *= x[b];
                m &= m - 1;
            }
            tot += p;
        }
        Ok(tot)
    }

    /// Cavity field `B_j(sigma) = ∂_j H(sigma)`. Multilinearity makes the
    /// result independent of `sigma_j`.
    pub fn cavity_field(&self, j: usize, sigma: &[i8]) -> Result<f64> {
        if sigma.len() != self.n {
            return Err(SpinError::DimensionMismatch {
                expected: self.n,
                got: sigma.len(),
            });
        }
        if j < 1 || j > self.n {
            return Err(SpinError::SiteOutOfRange { site: j, n: self.n });
        }
        let jbit = 1u64 << (j - 1);
        let mut tot = 0.0;
        for (&mask, &c) in &self.terms {
            if mask & jbit == 0 {
                continue;
            }
            let mut p = c;
            let mut m = mask & !jbit;
            while m != 0 {
                let b = m.trailing_zeros() as usize;
                p *= f64::from(sigma[b]);
                m &= m - 1;
            }
            tot += p;
        }
        Ok(tot)
    }

    /// Gradient of the multilinear extension at `x`.
    pub fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        let x = self.check_point(x)?;
        let mut g = vec![0.0; self.n];
        for (&mask, &c) in &self.terms {
            let mut m = mask;
            while m != 0 {
                let b = m.trailing_zeros() as usize;
                m &= m - 1;
                let mut p = c;
                let mut rest = mask & !(1u64 << b);
                while rest != 0 {
                    let rb = rest.trailing_zeros() as usize;
                    p *= x[rb];
                    rest &= rest - 1;
                }
                g[b] += p;
            }
        }
        Ok(g)
    }

    /// Hessian of the multilinear extension at `x`. The diagonal is
    /// identically zero by multilinearity.
    pub fn hessian(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        let x = self.check_point(x)?;
        Ok(self.hessian_unchecked(&x))
    }

    pub(crate) fn hessian_unchecked(&self, x: &[f64]) -> DMatrix<f64> {
        let n = self.n;
        let mut h = DMatrix::zeros(n, n);
        for (&mask, &c) in &self.terms {
            if mask.count_ones() < 2 {
                continue;
            }
            let sites: Vec<usize> = BitIter(mask).collect();
            for (a, &i) in sites.iter().enumerate() {
                for &j in &sites[a + 1..] {
                    let mut p = c;
                    for &l in &sites {
                        if l != i && l != j {
                            p *= x[l];
                        }
                    }
                    h[(i, j)] += p;
                    h[(j, i)] += p;
                }
            }
        }
        h
    }

    /// Serializes to the workspace Hamiltonian JSON format.
    pub fn to_json(&self) -> String {
        let file = HamiltonianFile {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(&mask, &coeff)| TermRecord {
                    sites: BitIter(mask).map(|b| b + 1).collect(),
                    coeff,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("hamiltonian serialization cannot fail")
    }

    /// Parses the Hamiltonian JSON format, validating site lists.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: HamiltonianFile = serde_json::from_str(text)?;
        Self::from_terms(file.n, file.terms.into_iter().map(|t| (t.sites, t.coeff)))
    }
}

/// Iterates the set bit positions of a mask, ascending.
struct BitIter(u64);

impl Iterator for BitIter {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            let b = self.0.trailing_zeros() as usize;
            self.0 &= self.0 - 1;
            Some(b)
        }
    }
}

/// In-place Walsh-Hadamard butterfly; self-inverse up to a factor `2^n`.
fn walsh_hadamard_in_place(values: &mut [f64]) {
    let len = values.len();
    let mut h = 1;
    while h < len {
        let mut i = 0;
        while i < len {
            for j in i..i + h {
                let a = values[j];
                let b = values[j + h];
                values[j] = a + b;
                values[j + h] = a - b;
            }
            i += h * 2;
        }
        h *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corners::{corner_coords, spins_of_state, state_count};

    #[test]
    fn parity_fourier_transform() {
        // n = 2 parity at ++, +-, -+, --.
        let values = [1.0, -1.0, -1.0, 1.0];
        let h = SpinHamiltonian::fourier_transform(&values).unwrap();
        assert_eq!(h.term_count(), 1);
        assert_eq!(h.coeff(0b11), 1.0);
    }

    #[test]
    fn constant_fourier_transform() {
        let h = SpinHamiltonian::fourier_transform(&[3.0, 3.0]).unwrap();
        assert_eq!(h.term_count(), 1);
        assert_eq!(h.coeff(0), 3.0);
    }

    #[test]
    fn roundtrip_random_table() {
        // Fixed "random" table; the oracle is direct per-corner evaluation.
        let n = 3;
        let values: Vec<f64> = (0..state_count(n))
            .map(|s| ((s * 37 + 11) % 17) as f64 * 0.3 - 2.0)
            .collect();
        let h = SpinHamiltonian::fourier_transform(&values).unwrap();
        let back = h.corner_table();
        for (s, (&v, &w)) in values.iter().zip(back.iter()).enumerate() {
            let rel = (v - w).abs() / v.abs().max(1.0);
            assert!(rel <= 1e-10, "state {s}: {v} vs {w}");
        }
        // Direct evaluation oracle bypasses the butterfly.
        for s in 0..state_count(n) {
            assert!((h.evaluate_state(s) - values[s]).abs() <= 1e-12);
        }
    }

    #[test]
    fn fourier_rejects_bad_length() {
        assert!(matches!(
            SpinHamiltonian::fourier_transform(&[1.0, 2.0, 3.0]),
            Err(SpinError::BadTableLength { len: 3 })
        ));
    }

    #[test]
    fn evaluate_at_zero_is_mean() {
        let h = SpinHamiltonian::from_terms(3, vec![(vec![], 1.5), (vec![1, 3], 0.7)]).unwrap();
        assert_eq!(h.evaluate(&[0.0, 0.0, 0.0]).unwrap(), 1.5);
    }

    #[test]
    fn evaluate_matches_corners() {
        let h =
            SpinHamiltonian::from_terms(3, vec![(vec![1], -0.4), (vec![2, 3], 1.1), (vec![1, 2, 3], 0.2)])
                .unwrap();
        for s in 0..state_count(3) {
            let x = corner_coords(s, 3);
            assert!((h.evaluate(&x).unwrap() - h.evaluate_state(s)).abs() < 1e-14);
        }
    }

    #[test]
    fn evaluate_product_point() {
        let h = SpinHamiltonian::from_terms(2, vec![(vec![1, 2], 1.0)]).unwrap();
        assert!((h.evaluate(&[0.5, 0.5]).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn evaluate_rejects_out_of_domain() {
        let h = SpinHamiltonian::from_terms(1, vec![(vec![1], 1.0)]).unwrap();
        assert!(h.evaluate(&[1.0 + 1e-13]).is_ok());
        assert!(matches!(
            h.evaluate(&[1.5]),
            Err(SpinError::OutOfDomain { index: 0, .. })
        ));
    }

    #[test]
    fn cavity_field_examples() {
        // H = sigma1 sigma2 + h1 sigma1, j = 1  ->  sigma2 + h1.
        let h1 = 0.3;
        let h = SpinHamiltonian::from_terms(2, vec![(vec![1, 2], 1.0), (vec![1], h1)]).unwrap();
        assert!((h.cavity_field(1, &[1, 1]).unwrap() - (1.0 + h1)).abs() < 1e-15);
        assert!((h.cavity_field(1, &[1, -1]).unwrap() - (-1.0 + h1)).abs() < 1e-15);
        // No term containing j.
        assert_eq!(h.cavity_field(2, &[1, 1]).unwrap(), 1.0);
        let g = SpinHamiltonian::from_terms(3, vec![(vec![1, 2], 1.0)]).unwrap();
        assert_eq!(g.cavity_field(3, &[1, -1, 1]).unwrap(), 0.0);
    }

    #[test]
    fn cavity_field_independent_of_own_spin() {
        let h = SpinHamiltonian::from_terms(
            4,
            vec![(vec![1, 2], 0.5), (vec![1, 3, 4], -0.8), (vec![2], 0.1)],
        )
        .unwrap();
        for s in 0..state_count(4) {
            let spins = spins_of_state(s, 4);
            for j in 1..=4 {
                let mut flipped = spins.clone();
                flipped[j - 1] = -flipped[j - 1];
                let a = h.cavity_field(j, &spins).unwrap();
                let b = h.cavity_field(j, &flipped).unwrap();
                assert_eq!(a, b, "cavity field at {j} depends on own spin");
            }
        }
    }

    #[test]
    fn gradient_hessian_finite_differences() {
        let h = SpinHamiltonian::from_terms(
            5,
            vec![
                (vec![1, 2, 4], 0.9),
                (vec![2, 3], -1.3),
                (vec![5], 0.4),
                (vec![1, 3, 5], 0.25),
            ],
        )
        .unwrap();
        let x = [0.2, -0.4, 0.1, 0.6, -0.3];
        let grad = h.gradient(&x).unwrap();
        let hess = h.hessian(&x).unwrap();
        let step = 1e-4;
        for i in 0..5 {
            let mut xp = x;
            let mut xm = x;
            xp[i] += step;
            xm[i] -= step;
            let fd = (h.evaluate(&xp).unwrap() - h.evaluate(&xm).unwrap()) / (2.0 * step);
            assert!((fd - grad[i]).abs() <= 1e-6, "grad[{i}]: fd {fd} vs {}", grad[i]);
            for j in 0..5 {
                let mut xpp = x;
                let mut xpm = x;
                let mut xmp = x;
                let mut xmm = x;
                xpp[i] += step;
                xpp[j] += step;
                xpm[i] += step;
                xpm[j] -= step;
                xmp[i] -= step;
                xmp[j] += step;
                xmm[i] -= step;
                xmm[j] -= step;
                let fd2 = (h.evaluate(&xpp).unwrap() - h.evaluate(&xpm).unwrap()
                    - h.evaluate(&xmp).unwrap()
                    + h.evaluate(&xmm).unwrap())
                    / (4.0 * step * step);
                let want = if i == j { 0.0 } else { hess[(i, j)] };
                assert!((fd2 - want).abs() <= 1e-6, "hess[{i},{j}]: fd {fd2} vs {want}");
            }
        }
        for i in 0..5 {
            assert_eq!(hess[(i, i)], 0.0);
        }
    }

    #[test]
    fn hessian_of_pure_quadratic_is_constant() {
        let h = SpinHamiltonian::from_terms(2, vec![(vec![1, 2], 0.1)]).unwrap();
        let m = h.hessian(&[0.3, -0.9]).unwrap();
        assert_eq!(m[(0, 1)], 0.1);
        assert_eq!(m[(1, 0)], 0.1);
        let linear = SpinHamiltonian::from_terms(3, vec![(vec![1], 2.0), (vec![3], -1.0)]).unwrap();
        assert!(linear.hessian(&[0.0; 3]).unwrap().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn field_addition_changes_gradient_not_hessian() {
        let h = SpinHamiltonian::from_terms(3, vec![(vec![1, 2], 0.5), (vec![2, 3], -0.2)]).unwrap();
        let tilted = h.with_field_added(&[1.0, -2.0, 0.5]).unwrap();
        let x = [0.1, 0.2, -0.6];
        assert_ne!(h.gradient(&x).unwrap(), tilted.gradient(&x).unwrap());
        assert_eq!(h.hessian(&x).unwrap(), tilted.hessian(&x).unwrap());
    }

    #[test]
    fn json_roundtrip_and_validation() {
        let h = SpinHamiltonian::from_terms(3, vec![(vec![1, 3], -0.5), (vec![2], 1.0)]).unwrap();
        let text = h.to_json();
        let back = SpinHamiltonian::from_json(&text).unwrap();
        assert_eq!(h, back);

        let dup = r#"{"n":2,"terms":[{"sites":[1,2],"coeff":1.0},{"sites":[1,2],"coeff":2.0}]}"#;
        assert!(SpinHamiltonian::from_json(dup).is_err());
        let unsorted = r#"{"n":2,"terms":[{"sites":[2,1],"coeff":1.0}]}"#;
        assert!(SpinHamiltonian::from_json(unsorted).is_err());
        let out_of_range = r#"{"n":2,"terms":[{"sites":[3],"coeff":1.0}]}"#;
        assert!(SpinHamiltonian::from_json(out_of_range).is_err());
        let unknown_key = r#"{"n":2,"terms":[],"extra":1}"#;
        assert!(SpinHamiltonian::from_json(unknown_key).is_err());
    }
}
