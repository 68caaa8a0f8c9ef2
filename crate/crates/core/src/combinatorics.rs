//! Multi-indices over the n independent variables, and the counting functions
//! built on them: binomials, jet-fiber dimensions, class sizes, and the
//! modified Stirling numbers used by the character recursions.
//!
//! Conventions used throughout the crate:
//! * a multi-index is a dense vector `(m_1, …, m_n)` of non-negative entries;
//!   `m_k` is the number of derivatives with respect to the k-th variable;
//! * the *class* of a non-zero multi-index is the 1-based position of its first
//!   non-zero entry, so `(0,0,0,1)` has class 4 and `(1,1,0,1)` has class 1;
//! * the last variable `x^n` is the time-like one, so class-n derivatives are
//!   the "all time derivatives" direction;
//! * enumeration order is reverse-lexicographic: compare two indices by their
//!   reversed tuples, lexicographically. For n = 2, order 2 this enumerates
//!   `(2,0), (1,1), (0,2)`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::cmp::Ordering;
use std::fmt;

use crate::linalg::Rational;

/// Dense exponent vector of one derivative monomial.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        assert!(
            !entries.is_empty(),
            "multi-index needs at least one variable"
        );
        MultiIndex(entries)
    }

    /// The zero index (an undifferentiated field component) over n variables.
    pub fn zero(n: usize) -> Self {
        MultiIndex::new(vec![0; n])
    }

    /// Number of independent variables this index ranges over.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Total derivative order |m| = Σ m_k.
    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    /// 1-based position of the first non-zero entry; `None` for the zero index.
    pub fn class(&self) -> Option<usize> {
        self.0.iter().position(|&e| e != 0).map(|p| p + 1)
    }

    pub fn entry(&self, k: usize) -> u32 {
        self.0[k]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    /// Index with one extra derivative in variable `mu` (1-based).
    pub fn bumped(&self, mu: usize) -> Self {
        assert!(
            (1..=self.0.len()).contains(&mu),
            "variable index out of range"
        );
        let mut v = self.0.clone();
        v[mu - 1] += 1;
        MultiIndex(v)
    }

    /// Entry-wise sum: the index of D_other applied to D_self.
    pub fn plus(&self, other: &MultiIndex) -> Self {
        assert_eq!(self.0.len(), other.0.len());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Reverse-lexicographic comparison: compare reversed tuples lexicographically.
///
/// Total over indices of equal length; indices of different total order are
/// *not* specially treated here (callers sort by order first when they care).
pub fn revlex_cmp(a: &MultiIndex, b: &MultiIndex) -> Ordering {
    assert_eq!(
        a.len(),
        b.len(),
        "comparing indices over different variable counts"
    );
    for (x, y) in a.0.iter().rev().zip(b.0.iter().rev()) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

/// All multi-indices over `n` variables with total order exactly `q`, in
/// reverse-lexicographic order.
pub fn multi_indices_exact(n: usize, q: u32) -> Vec<MultiIndex> {
    assert!(n >= 1);
    let mut out = Vec::new();
    let mut scratch = vec![0u32; n];
    fill_exact(n, q, &mut scratch, &mut out);
    out
}

fn fill_exact(vars: usize, remaining: u32, scratch: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
    if vars == 1 {
        scratch[0] = remaining;
        out.push(MultiIndex(scratch.clone()));
        return;
    }
    // The last variable varies slowest and ascends: that is exactly
    // lexicographic order on the reversed tuple.
    for last in 0..=remaining {
        scratch[vars - 1] = last;
        fill_exact(vars - 1, remaining - last, scratch, out);
    }
    scratch[vars - 1] = 0;
}

/// All multi-indices of total order 0..=q, grouped by ascending order and
/// reverse-lexicographic within each order.
pub fn multi_indices_up_to(n: usize, q: u32) -> Vec<MultiIndex> {
    (0..=q).flat_map(|o| multi_indices_exact(n, o)).collect()
}

/// Exact binomial coefficient; zero when k > n.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    acc
}

/// Dimension of the jet fiber: number of jet coordinates of order ≤ q for m
/// field components over n variables, m·C(n+q, q).
pub fn fiber_dim(n: usize, q: u32, m: usize) -> BigInt {
    BigInt::from(m as u64) * binomial(n as u64 + q as u64, q as u64)
}

/// Number of jet coordinates of order exactly q: m·C(n−1+q, n−1).
pub fn order_count(n: usize, q: u32, m: usize) -> BigInt {
    BigInt::from(m as u64) * binomial(n as u64 - 1 + q as u64, n as u64 - 1)
}

/// Number of order-q jet coordinates of class k (1 ≤ k ≤ n):
/// m·C(n+q−k−1, n−k). Summed over k this recovers `order_count`.
pub fn class_size(n: usize, q: u32, m: usize, k: usize) -> BigInt {
    assert!((1..=n).contains(&k), "class out of range");
    assert!(q >= 1, "order-0 coordinates have no class");
    BigInt::from(m as u64) * binomial((n + q as usize - k - 1) as u64, (n - k) as u64)
}

/// Modified Stirling number s^(N)_k(X): the k-th elementary symmetric
/// polynomial of X+1, …, X+N, extended by s^(N)_0 = 1 and s^(N)_k = 0 for
/// k < 0. These are the expansion coefficients of ∏_{j=1..N}(r + X + j) in r.
///
/// Panics if k > N, where the elementary symmetric polynomial is undefined.
pub fn modified_stirling(n_cap: usize, k: i64, x: &Rational) -> Rational {
    if k < 0 {
        return Rational::zero();
    }
    let k = k as usize;
    if k == 0 {
        return Rational::one();
    }
    assert!(
        k <= n_cap,
        "modified Stirling number s^({n_cap})_{k} undefined: k exceeds the argument count"
    );
    // e[j] accumulates σ_j of the arguments seen so far.
    let mut e = vec![Rational::zero(); k + 1];
    e[0] = Rational::one();
    for j in 1..=n_cap {
        let a = x + Rational::from_integer(BigInt::from(j as u64));
        for idx in (1..=k.min(j)).rev() {
            let add = &a * &e[idx - 1];
            e[idx] += add;
        }
    }
    e.swap_remove(k)
}

/// Convenience: s^(N)_k at an integer argument.
pub fn modified_stirling_int(n_cap: usize, k: i64, x: i64) -> Rational {
    modified_stirling(n_cap, k, &Rational::from_integer(BigInt::from(x)))
}

/// Checked narrowing for counts that are known to be small in any system the
/// engine can realistically process.
pub fn to_usize(v: &BigInt) -> usize {
    use num_traits::ToPrimitive;
    v.to_usize()
        .expect("count exceeds usize: system too large to analyze")
}

pub fn to_u64(v: &BigInt) -> u64 {
    use num_traits::ToPrimitive;
    v.to_u64()
        .expect("count exceeds u64: system too large to analyze")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn class_is_first_nonzero_position() {
        assert_eq!(mi(&[0, 0, 0, 1]).class(), Some(4));
        assert_eq!(mi(&[1, 1, 0, 1]).class(), Some(1));
        assert_eq!(mi(&[0, 3, 4, 1]).class(), Some(2));
        assert_eq!(mi(&[0, 0, 0, 0]).class(), None);
    }

    #[test]
    fn enumeration_order_is_reverse_lexicographic() {
        let got = multi_indices_exact(2, 2);
        assert_eq!(got, vec![mi(&[2, 0]), mi(&[1, 1]), mi(&[0, 2])]);

        let got3 = multi_indices_exact(3, 2);
        assert_eq!(
            got3,
            vec![
                mi(&[2, 0, 0]),
                mi(&[1, 1, 0]),
                mi(&[0, 2, 0]),
                mi(&[1, 0, 1]),
                mi(&[0, 1, 1]),
                mi(&[0, 0, 2]),
            ]
        );
        for w in got3.windows(2) {
            assert_eq!(revlex_cmp(&w[0], &w[1]), Ordering::Less);
        }
    }

    #[test]
    fn enumeration_counts_match_order_count() {
        for n in 1..=5usize {
            for q in 0..=6u32 {
                let want = order_count(n, q, 1).to_usize().unwrap();
                assert_eq!(multi_indices_exact(n, q).len(), want, "n={n} q={q}");
            }
        }
        assert_eq!(multi_indices_up_to(4, 2).len(), 15); // C(6,2)
    }

    #[test]
    fn fiber_and_class_counts() {
        assert_eq!(fiber_dim(4, 2, 4), BigInt::from(60)); // 4·C(6,2)
        assert_eq!(fiber_dim(4, 3, 4), BigInt::from(140)); // 4·C(7,3)
        assert_eq!(order_count(4, 3, 4), BigInt::from(80)); // 4·C(6,3)
        let sizes: Vec<_> = (1..=4).map(|k| class_size(4, 2, 4, k)).collect();
        assert_eq!(
            sizes,
            vec![
                BigInt::from(16),
                BigInt::from(12),
                BigInt::from(8),
                BigInt::from(4)
            ]
        );
        // Classes partition the order-q coordinates.
        for n in 2..=5usize {
            for q in 1..=5u32 {
                for m in 1..=3usize {
                    let total: BigInt = (1..=n).map(|k| class_size(n, q, m, k)).sum();
                    assert_eq!(total, order_count(n, q, m), "n={n} q={q} m={m}");
                }
            }
        }
    }

    #[test]
    fn binomial_and_factorial_basics() {
        assert_eq!(binomial(6, 2), BigInt::from(15));
        assert_eq!(binomial(11, 4), BigInt::from(330));
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(binomial(0, 0), BigInt::one());
        assert_eq!(factorial(0), BigInt::one());
        assert_eq!(factorial(6), BigInt::from(720));
        // Pascal recurrence on a grid.
        for n in 1..=20u64 {
            for k in 1..=n {
                assert_eq!(binomial(n, k), binomial(n - 1, k - 1) + binomial(n - 1, k));
            }
        }
    }

    #[test]
    fn modified_stirling_special_values() {
        let s = |n_cap: usize, k: i64, x: i64| modified_stirling_int(n_cap, k, x);
        let r = |v: i64| Rational::from_integer(BigInt::from(v));

        assert_eq!(s(3, -1, 0), r(0));
        assert_eq!(s(3, 0, 7), r(1));
        // σ_1(1,2,3) and σ_2(1,2,3)
        assert_eq!(s(3, 1, 0), r(6));
        assert_eq!(s(3, 2, 0), r(11));
        // s^(k)_k(0) = k!
        for k in 1..=6 {
            assert_eq!(
                s(k as usize, k, 0),
                Rational::from_integer(factorial(k as u64))
            );
        }
        // s^(2)_2(1) = 2·3
        assert_eq!(s(2, 2, 1), r(6));
        // s^(n−1)_1(q+ℓ) = ½n(n−1) + (n−1)(q+ℓ), here n=4, q=2, ℓ=1.
        assert_eq!(s(3, 1, 3), r(15));
        // s^(n−1)_2(0) = (n−2)(n−1)n(3n−1)/24 at n = 4: 2·3·4·11/24 = 11.
        assert_eq!(s(3, 2, 0), r(11));
        // s^(n−2)_1(0) = ½(n−2)(n−1) at n = 5: σ_1(1,2,3) = 6.
        assert_eq!(s(3, 1, 0), r(6));
    }

    #[test]
    #[should_panic(expected = "undefined")]
    fn modified_stirling_rejects_k_above_cap() {
        modified_stirling_int(2, 3, 0);
    }

    #[test]
    fn bumped_and_plus() {
        let a = mi(&[0, 1, 0, 2]);
        assert_eq!(a.bumped(1), mi(&[1, 1, 0, 2]));
        assert_eq!(a.bumped(4), mi(&[0, 1, 0, 3]));
        assert_eq!(a.plus(&mi(&[1, 0, 2, 0])), mi(&[1, 1, 2, 2]));
        assert_eq!(a.order(), 3);
    }
}
