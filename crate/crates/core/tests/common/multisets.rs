//! Direct enumeration of PBW monomials of the loop affine vacuum module.

/// Number of multisets of creation modes `(type, k)` with `k >= 1` and
/// `Σ k = d`, where `types` distinct modes exist at every `k`.
pub fn count(types: usize, d: usize) -> u64 {
    // modes listed in a fixed order; choose a nonincreasing sequence of mode ids
    fn go(types: usize, remaining: usize, max_id: usize) -> u64 {
        if remaining == 0 {
            return 1;
        }
        let mut n = 0;
        for id in 0..=max_id {
            let k = id / types + 1;
            if k <= remaining {
                n += go(types, remaining - k, id);
            }
        }
        n
    }
    if d == 0 {
        return 1;
    }
    go(types, d, types * d - 1)
}
