//! Corner-state indexing helpers.
//!
//! A state `s` in `0..2^n` encodes the spin vector lexicographically over
//! `(sigma_1, ..., sigma_n)` with `+1 < -1`: bit `n - i` of `s` is 0 exactly
//! when `sigma_i = +1`. Term subsets use the independent convention bit
//! `i - 1` for site `i`; [`reverse_mask`] converts between the two.

/// Number of corner states for `n` sites.
#[inline]
pub fn state_count(n: usize) -> usize {
    1usize << n
}

/// Spin of site `i` (1-based) in state `s`.
#[inline]
pub fn spin_at(s: usize, n: usize, i: usize) -> f64 {
    debug_assert!(i >= 1 && i <= n);
    if (s >> (n - i)) & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// State with the spin at site `i` flipped.
#[inline]
pub fn flip_site(s: usize, n: usize, i: usize) -> usize {
    s ^ (1usize << (n - i))
}

/// Reflect a site bitmask (bit `i-1` for site `i`) into the state-bit
/// convention (bit `n-i` for site `i`), or vice versa.
#[inline]
pub fn reverse_mask(mask: u64, n: usize) -> u64 {
    let mut out = 0u64;
    let mut m = mask;
    while m != 0 {
        let b = m.trailing_zeros() as usize;
        out |= 1u64 << (n - 1 - b);
        m &= m - 1;
    }
    out
}

/// Sign of the monomial `prod_{i in subset} sigma_i` at state `s`, where
/// `subset_state_mask` already uses the state-bit convention.
#[inline]
pub fn monomial_sign(s: usize, subset_state_mask: u64) -> f64 {
    if ((s as u64) & subset_state_mask).count_ones() & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// The `+-1` spin vector of a state.
pub fn spins_of_state(s: usize, n: usize) -> Vec<i8> {
    (1..=n)
        .map(|i| if (s >> (n - i)) & 1 == 0 { 1i8 } else { -1i8 })
        .collect()
}

/// State index of a `+-1` spin vector.
pub fn state_of_spins(spins: &[i8]) -> usize {
    let n = spins.len();
    let mut s = 0usize;
    for (idx, &sp) in spins.iter().enumerate() {
        if sp < 0 {
            s |= 1usize << (n - 1 - idx);
        }
    }
    s
}

/// The corner of `[-1,1]^n` corresponding to a state.
pub fn corner_coords(s: usize, n: usize) -> Vec<f64> {
    (1..=n).map(|i| spin_at(s, n, i)).collect()
}
