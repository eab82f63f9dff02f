//! Indexing between the full sequence and the even-m subsequence via
//! `k_m = m * 2^m`.

/// The pair `(k, m(k))` where `m(k)` is the smallest even `m >= 2` with
/// `k <= m * 2^m`, together with `k_m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConstructionIndex {
    pub k: u64,
    pub m: u32,
    pub k_m: u64,
}

/// `k_m = m * 2^m` in exact integer arithmetic. Panics if the product
/// overflows `u64` (first at `m = 58`).
pub fn k_m(m: u32) -> u64 {
    assert!(m >= 1, "m must be positive");
    let v = (m as u128) << m;
    u64::try_from(v).expect("k_m overflows u64")
}

/// Maps `k >= 1` to the smallest even `m >= 2` with `k <= k_m`.
///
/// The guarantee `k <= k_m <= 5k` holds for `k > 2048` (where `m(k) >= 10`,
/// so `4m/(m-2) <= 5`); for smaller `k` the ratio can reach 6.
pub fn index_for(k: u64) -> ConstructionIndex {
    assert!(k >= 1, "k must be at least 1");
    let mut m = 2u32;
    loop {
        let cap = (m as u128) << m;
        if cap >= k as u128 {
            return ConstructionIndex { k, m, k_m: k_m(m) };
        }
        m += 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_examples() {
        assert_eq!(index_for(8), ConstructionIndex { k: 8, m: 2, k_m: 8 });
        assert_eq!(
            index_for(100),
            ConstructionIndex {
                k: 100,
                m: 6,
                k_m: 384
            }
        );
        assert_eq!(
            index_for(64),
            ConstructionIndex {
                k: 64,
                m: 4,
                k_m: 64
            }
        );
        assert_eq!(index_for(1), ConstructionIndex { k: 1, m: 2, k_m: 8 });
        assert_eq!(
            index_for(65),
            ConstructionIndex {
                k: 65,
                m: 6,
                k_m: 384
            }
        );
    }

    #[test]
    fn k_m_values() {
        assert_eq!(k_m(2), 8);
        assert_eq!(k_m(4), 64);
        assert_eq!(k_m(6), 384);
        assert_eq!(k_m(8), 2048);
        assert_eq!(k_m(10), 10240);
        assert_eq!(k_m(58), 58u64 << 58);
    }

    #[test]
    #[should_panic(expected = "overflows")]
    fn k_m_overflow_panics() {
        k_m(59);
    }

    #[test]
    fn window_bracketing_above_eight() {
        for k in 9..5000u64 {
            let idx = index_for(k);
            assert!(idx.m >= 4 || k <= 8);
            assert!(idx.m.is_multiple_of(2));
            assert!(k <= idx.k_m);
            if idx.m >= 4 {
                assert!(k_m(idx.m - 2) < k, "minimality at k={k}");
            }
        }
    }

    #[test]
    fn five_k_bound_holds_for_large_k() {
        // Sharp from m(k) >= 10 onwards; spot-check the window boundaries.
        for k in [2049u64, 2500, 10240, 10241, 60000, 1 << 20] {
            let idx = index_for(k);
            assert!(idx.k_m <= 5 * k, "k={k} k_m={}", idx.k_m);
        }
        // Known small-k violations of the asymptotic 5k bound.
        assert!(index_for(65).k_m > 5 * 65);
        assert!(index_for(400).k_m > 5 * 400);
    }
}
