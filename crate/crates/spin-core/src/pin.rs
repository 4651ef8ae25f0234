use crate::{Result, SpinError, SpinHamiltonian};

/// A partial assignment: spins on `A` are fixed, coordinates in `B` are set
/// to zero in the multilinear extension, the rest stay free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PinningContext {
    a_sites: Vec<usize>,
    sigma_a: Vec<i8>,
    b_sites: Vec<usize>,
}

impl PinningContext {
    /// Builds a context from 1-based site lists. `a_sites` and `b_sites`
    /// must be disjoint and `sigma_a` supplies one `+-1` spin per A-site.
    pub fn new(a_sites: Vec<usize>, sigma_a: Vec<i8>, b_sites: Vec<usize>) -> Result<Self> {
        if sigma_a.len() != a_sites.len() {
            return Err(SpinError::DimensionMismatch {
                expected: a_sites.len(),
                got: sigma_a.len(),
            });
        }
        for &s in &sigma_a {
            if s != 1 && s != -1 {
                return Err(SpinError::InvalidTerm(format!("spin {s} is not +-1")));
            }
        }
        let mut pairs: Vec<(usize, i8)> = a_sites.into_iter().zip(sigma_a).collect();
        pairs.sort_by_key(|&(s, _)| s);
        pairs.dedup_by_key(|&mut (s, _)| s);
        let (a_sites, sigma_a): (Vec<usize>, Vec<i8>) = pairs.into_iter().unzip();
        let mut b_sites = b_sites;
        b_sites.sort_unstable();
        b_sites.dedup();
        for &b in &b_sites {
            if a_sites.binary_search(&b).is_ok() {
                return Err(SpinError::OverlappingPinning(b));
            }
        }
        Ok(Self {
            a_sites,
            sigma_a,
            b_sites,
        })
    }

    pub fn empty() -> Self {
        Self {
            a_sites: Vec::new(),
            sigma_a: Vec::new(),
            b_sites: Vec::new(),
        }
    }

    pub fn a_sites(&self) -> &[usize] {
        &self.a_sites
    }

    pub fn sigma_a(&self) -> &[i8] {
        &self.sigma_a
    }

    pub fn b_sites(&self) -> &[usize] {
        &self.b_sites
    }

    /// Sites of `[1..=n]` in neither A nor B, ascending.
    pub fn free_sites(&self, n: usize) -> Vec<usize> {
        (1..=n)
            .filter(|s| {
                self.a_sites.binary_search(s).is_err() && self.b_sites.binary_search(s).is_err()
            })
            .collect()
    }

    /// Union of two contexts on disjoint site sets.
    pub fn merged(&self, other: &PinningContext) -> Result<PinningContext> {
        let mut a: Vec<usize> = self.a_sites.clone();
        let mut s: Vec<i8> = self.sigma_a.clone();
        for (&site, &spin) in other.a_sites.iter().zip(&other.sigma_a) {
            if a.contains(&site) {
                return Err(SpinError::OverlappingPinning(site));
            }
            a.push(site);
            s.push(spin);
        }
        let mut b = self.b_sites.clone();
        for &site in &other.b_sites {
            if b.contains(&site) {
                return Err(SpinError::OverlappingPinning(site));
            }
            b.push(site);
        }
        PinningContext::new(a, s, b)
    }

    /// Embeds free-site values into an n-dimensional point: A-sites carry
    /// their pinned spins, B-sites carry zero.
    pub fn embed(&self, n: usize, free_values: &[f64]) -> Result<Vec<f64>> {
        let free = self.free_sites(n);
        if free.len() != free_values.len() {
            return Err(SpinError::DimensionMismatch {
                expected: free.len(),
                got: free_values.len(),
            });
        }
        let mut x = vec![0.0; n];
        for (&site, &spin) in self.a_sites.iter().zip(&self.sigma_a) {
            x[site - 1] = f64::from(spin);
        }
        for (&site, &v) in free.iter().zip(free_values) {
            x[site - 1] = v;
        }
        Ok(x)
    }
}

impl SpinHamiltonian {
    /// Pinned Hamiltonian `H^{[A,B]}_{sigma_A}`: terms meeting `B` are
    /// dropped, spins on `A` are substituted, and the result keeps the
    /// original site indexing with support only on the free sites. It equals
    /// the multilinear extension of `H` evaluated at `(sigma_A, . , 0_B)`.
    pub fn pin(&self, ctx: &PinningContext) -> Result<SpinHamiltonian> {
        let n = self.n();
        let mut a_mask = 0u64;
        let mut a_sign = std::collections::BTreeMap::new();
        for (&site, &spin) in ctx.a_sites().iter().zip(ctx.sigma_a()) {
            if site < 1 || site > n {
                return Err(SpinError::SiteOutOfRange { site, n });
            }
            a_mask |= 1u64 << (site - 1);
            a_sign.insert(site - 1, spin);
        }
        let mut b_mask = 0u64;
        for &site in ctx.b_sites() {
            if site < 1 || site > n {
                return Err(SpinError::SiteOutOfRange { site, n });
            }
            b_mask |= 1u64 << (site - 1);
        }
        let mut out = Vec::new();
        for (mask, coeff) in self.terms() {
            if mask & b_mask != 0 {
                continue;
            }
            let mut c = coeff;
            let mut pinned = mask & a_mask;
            while pinned != 0 {
                let b = pinned.trailing_zeros() as usize;
                c *= f64::from(a_sign[&b]);
                pinned &= pinned - 1;
            }
            out.push((mask & !a_mask, c));
        }
        SpinHamiltonian::from_masks(n, out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corners::{corner_coords, state_count};

    #[test]
    fn pin_substitutes_spins() {
        // H = sigma1 sigma2 sigma3, A = {3} with sigma3 = +1  ->  sigma1 sigma2.
        let h = SpinHamiltonian::from_terms(3, vec![(vec![1, 2, 3], 1.0)]).unwrap();
        let ctx = PinningContext::new(vec![3], vec![1], vec![]).unwrap();
        let pinned = h.pin(&ctx).unwrap();
        assert_eq!(pinned.coeff(0b011), 1.0);
        assert_eq!(pinned.term_count(), 1);
    }

    #[test]
    fn pin_zeroes_sites() {
        let h = SpinHamiltonian::from_terms(3, vec![(vec![1, 2, 3], 1.0)]).unwrap();
        let ctx = PinningContext::new(vec![], vec![], vec![3]).unwrap();
        let pinned = h.pin(&ctx).unwrap();
        assert_eq!(pinned.term_count(), 0);
    }

    #[test]
    fn pin_rejects_overlap() {
        assert!(matches!(
            PinningContext::new(vec![2], vec![1], vec![2]),
            Err(SpinError::OverlappingPinning(2))
        ));
    }

    #[test]
    fn pinned_corners_match_embedded_evaluation() {
        let n = 8;
        // Deterministic mixed-degree instance.
        let mut terms = Vec::new();
        let mut c = 0.13f64;
        for i in 1..=n {
            terms.push((vec![i], c.sin()));
            c += 1.0;
        }
        for i in 1..n {
            terms.push((vec![i, i + 1], (c * 0.7).cos() * 0.5));
            c += 1.0;
        }
        terms.push((vec![1, 4, 7], 0.31));
        terms.push((vec![2, 3, 8], -0.44));
        let h = SpinHamiltonian::from_terms(n, terms).unwrap();
        let ctx = PinningContext::new(vec![2, 5], vec![1, -1], vec![7]).unwrap();
        let pinned = h.pin(&ctx).unwrap();
        let free = ctx.free_sites(n);
        let m = free.len();
        for fs in 0..state_count(m) {
            let fv = corner_coords(fs, m);
            let x = ctx.embed(n, &fv).unwrap();
            let via_pin = pinned.evaluate(&x).unwrap();
            let via_embed = h.evaluate(&x).unwrap();
            assert!(
                (via_pin - via_embed).abs() <= 1e-12,
                "corner {fs}: {via_pin} vs {via_embed}"
            );
        }
    }

    #[test]
    fn pin_composes_with_merged_context() {
        let h = SpinHamiltonian::from_terms(
            5,
            vec![
                (vec![1, 2, 3], 0.8),
                (vec![2, 4], -0.3),
                (vec![3, 5], 0.6),
                (vec![4], 1.2),
            ],
        )
        .unwrap();
        let c1 = PinningContext::new(vec![1], vec![-1], vec![4]).unwrap();
        let c2 = PinningContext::new(vec![3], vec![1], vec![]).unwrap();
        let two_step = h.pin(&c1).unwrap().pin(&c2).unwrap();
        let merged = h.pin(&c1.merged(&c2).unwrap()).unwrap();
        assert_eq!(two_step, merged);
    }

    #[test]
    fn pinned_cavity_fields_match_gradient_of_pin() {
        let h = SpinHamiltonian::from_terms(
            4,
            vec![(vec![1, 2, 4], 0.9), (vec![2, 3], -1.3), (vec![1], 0.2)],
        )
        .unwrap();
        let ctx = PinningContext::new(vec![4], vec![-1], vec![]).unwrap();
        let pinned = h.pin(&ctx).unwrap();
        // B_j^{[A,B]} is the cavity field of the pinned system at free sites.
        let sigma = [1i8, -1, 1, -1];
        for j in [1usize, 2, 3] {
            let expect = pinned.cavity_field(j, &sigma).unwrap();
            let x = [1.0, -1.0, 1.0, -1.0];
            let grad = pinned.gradient(&x).unwrap();
            assert!((grad[j - 1] - expect).abs() < 1e-14);
        }
    }
}
