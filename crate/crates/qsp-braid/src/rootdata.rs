//! Type A_n root and weight combinatorics.
//!
//! Weights are stored in fundamental-weight coordinates, so the pairing
//! `(μ, α_i)` is simply the `i`-th coordinate of `μ` and every exponent in
//! the commutation relations is an integer power of `q`.  Nodes are
//! 1-based throughout, matching the usual labelling of the Dynkin diagram.

use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use thiserror::Error;

/// Errors from root-datum operations.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum RootError {
    #[error("node index {index} out of range 1..={n}")]
    NodeOutOfRange { index: i64, n: usize },
    #[error("inadmissible Satake datum (n = {n}, r = {r}): need 1 <= r <= ceil(n/2) - 1")]
    Inadmissible { n: usize, r: usize },
    #[error("weight has {got} coordinates, expected {n}")]
    WeightLength { got: usize, n: usize },
    #[error("empty node set")]
    EmptySet,
}

// ---------------------------------------------------------------------------
// Weights
// ---------------------------------------------------------------------------

/// An element of the weight lattice, in ϖ-coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight(pub SmallVec<[i32; 8]>);

impl Weight {
    pub fn zero(n: usize) -> Weight {
        Weight(SmallVec::from_elem(0, n))
    }

    pub fn from_coords(c: &[i32]) -> Weight {
        Weight(SmallVec::from_slice(c))
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i32] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| *c == 0)
    }

    pub fn add(&self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(o.0.iter()).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(o.0.iter()).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: i32) -> Weight {
        Weight(self.0.iter().map(|a| a * k).collect())
    }

    /// `(μ, α_i)`: the i-th ϖ-coordinate.
    pub fn pair_simple(&self, i: usize) -> i32 {
        self.0[i - 1]
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

// ---------------------------------------------------------------------------
// Cartan data
// ---------------------------------------------------------------------------

fn check_node(i: usize, n: usize) -> Result<(), RootError> {
    if i == 0 || i > n {
        return Err(RootError::NodeOutOfRange { index: i as i64, n });
    }
    Ok(())
}

/// Cartan matrix entry `a_{ij}` of type A_n.
pub fn cartan(n: usize, i: usize, j: usize) -> Result<i32, RootError> {
    check_node(i, n)?;
    check_node(j, n)?;
    Ok(cartan_unchecked(i, j))
}

pub(crate) fn cartan_unchecked(i: usize, j: usize) -> i32 {
    if i == j {
        2
    } else if i.abs_diff(j) == 1 {
        -1
    } else {
        0
    }
}

/// The fundamental weight ϖ_i.
pub fn varpi(n: usize, i: usize) -> Weight {
    let mut w = Weight::zero(n);
    w.0[i - 1] = 1;
    w
}

/// The simple root α_i = −ϖ_{i−1} + 2ϖ_i − ϖ_{i+1}.
pub fn alpha(n: usize, i: usize) -> Weight {
    let mut w = Weight::zero(n);
    for j in 1..=n {
        w.0[j - 1] = cartan_unchecked(i, j);
    }
    w
}

/// The sum α_a + … + α_b of an interval of simple roots.
pub fn interval_root(n: usize, a: usize, b: usize) -> Weight {
    let mut w = Weight::zero(n);
    for i in a..=b {
        w = w.add(&alpha(n, i));
    }
    w
}

/// `(μ, α_i)` with range checking.
pub fn pairing(mu: &Weight, i: usize) -> Result<i32, RootError> {
    check_node(i, mu.rank())?;
    Ok(mu.pair_simple(i))
}

/// Pairing of two weights when the second is in the root lattice, given by
/// its α-coefficients: `(μ, Σ k_i α_i) = Σ k_i μ_i`.
pub fn pair_with_root(mu: &Weight, root_coeffs: &[i32]) -> i32 {
    mu.0.iter().zip(root_coeffs.iter()).map(|(a, b)| a * b).sum()
}

/// σ_i(μ) = μ − (μ, α_i) α_i.
pub fn reflect(i: usize, mu: &Weight) -> Result<Weight, RootError> {
    check_node(i, mu.rank())?;
    Ok(reflect_unchecked(i, mu))
}

pub(crate) fn reflect_unchecked(i: usize, mu: &Weight) -> Weight {
    let k = mu.pair_simple(i);
    if k == 0 {
        return mu.clone();
    }
    mu.sub(&alpha(mu.rank(), i).scale(k))
}

/// Apply a word of reflections `σ_{i_1} ⋯ σ_{i_t}` (rightmost acts first).
pub fn reflect_word(word: &[usize], mu: &Weight) -> Weight {
    word.iter()
        .rev()
        .fold(mu.clone(), |acc, i| reflect_unchecked(*i, &acc))
}

/// The diagram involution τ(i) = n − i + 1.
pub fn tau(n: usize, i: usize) -> Result<usize, RootError> {
    check_node(i, n)?;
    Ok(n + 1 - i)
}

/// τ on weights: ϖ_i ↦ ϖ_{τ(i)}, i.e. reverse the coordinates.
pub fn tau_weight(mu: &Weight) -> Weight {
    Weight(mu.0.iter().rev().copied().collect())
}

/// Split a node set into maximal intervals.
fn intervals(set: &[usize]) -> Vec<(usize, usize)> {
    let mut s: Vec<usize> = set.to_vec();
    s.sort();
    s.dedup();
    let mut out = Vec::new();
    let mut it = s.into_iter();
    if let Some(first) = it.next() {
        let (mut a, mut b) = (first, first);
        for x in it {
            if x == b + 1 {
                b = x;
            } else {
                out.push((a, b));
                a = x;
                b = x;
            }
        }
        out.push((a, b));
    }
    out
}

/// A reduced word for the longest element of the parabolic subgroup W_J.
/// For an interval {a..b} the word is (a)(a+1 a)(a+2 a+1 a)⋯.
pub fn longest_word(n: usize, set: &[usize]) -> Result<Vec<usize>, RootError> {
    if set.is_empty() {
        return Err(RootError::EmptySet);
    }
    for i in set {
        check_node(*i, n)?;
    }
    let mut word = Vec::new();
    for (a, b) in intervals(set) {
        for top in a..=b {
            for i in (a..=top).rev() {
                word.push(i);
            }
        }
    }
    Ok(word)
}

/// Positive roots of A_n as intervals `[a, b]` in lexicographic order.
/// This order is convex: if β < γ and β + γ is a root then β < β+γ < γ.
pub fn positive_roots(n: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for a in 1..=n {
        for b in a..=n {
            v.push((a, b));
        }
    }
    v
}

/// Symmetric form of two interval roots.
pub fn interval_pairing(x: (usize, usize), y: (usize, usize)) -> i32 {
    let mut s = 0;
    for i in x.0..=x.1 {
        for j in y.0..=y.1 {
            s += cartan_unchecked(i, j);
        }
    }
    s
}

/// `(μ, [a,b])` for a weight and an interval root.
pub fn weight_interval_pairing(mu: &Weight, root: (usize, usize)) -> i32 {
    (root.0..=root.1).map(|i| mu.pair_simple(i)).sum()
}

// ---------------------------------------------------------------------------
// Satake datum
// ---------------------------------------------------------------------------

/// The AIII/AIV Satake datum: X = {r+1, …, n−r}, τ(i) = n − i + 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SatakeDatum {
    pub n: usize,
    pub r: usize,
}

impl SatakeDatum {
    /// Validate `1 ≤ r ≤ ⌈n/2⌉ − 1`.
    pub fn new(n: usize, r: usize) -> Result<SatakeDatum, RootError> {
        if n == 0 || r < 1 || r + 1 > n.div_ceil(2) || n > crate::coeffield::symbols::MAX_NODE {
            return Err(RootError::Inadmissible { n, r });
        }
        Ok(SatakeDatum { n, r })
    }

    pub fn tau(&self, i: usize) -> usize {
        self.n + 1 - i
    }

    /// τ(r).
    pub fn tr(&self) -> usize {
        self.tau(self.r)
    }

    /// X as a sorted list of nodes.
    pub fn x_nodes(&self) -> Vec<usize> {
        (self.r + 1..=self.n - self.r).collect()
    }

    pub fn in_x(&self, i: usize) -> bool {
        i > self.r && i <= self.n - self.r
    }

    /// I ∖ X.
    pub fn non_x_nodes(&self) -> Vec<usize> {
        (1..=self.n).filter(|i| !self.in_x(*i)).collect()
    }

    /// The smallest and largest node of X.
    pub fn x_interval(&self) -> (usize, usize) {
        (self.r + 1, self.n - self.r)
    }

    pub fn x_len(&self) -> usize {
        self.n - 2 * self.r
    }

    /// Reduced word of w_X.
    pub fn wx_word(&self) -> Vec<usize> {
        longest_word(self.n, &self.x_nodes()).expect("X is nonempty")
    }

    /// ϖ'_i = ϖ_i − ϖ_{τ(i)}.
    pub fn varpi_prime(&self, i: usize) -> Weight {
        varpi(self.n, i).sub(&varpi(self.n, self.tau(i)))
    }

    /// The weight of L_i = K_i K_{τ(i)}^{-1}: α_i − α_{τ(i)}.
    pub fn l_weight(&self, i: usize) -> Weight {
        alpha(self.n, i).sub(&alpha(self.n, self.tau(i)))
    }

    /// The weight of K_X = Π_{j∈X} K_j.
    pub fn kx_weight(&self) -> Weight {
        let (a, b) = self.x_interval();
        interval_root(self.n, a, b)
    }

    /// −w_X ∘ τ applied to μ.
    pub fn theta(&self, mu: &Weight) -> Weight {
        reflect_word(&self.wx_word(), &tau_weight(mu)).neg()
    }

    /// Membership of K_μ in U_Θ^0.
    pub fn theta_fixed(&self, mu: &Weight) -> bool {
        &self.theta(mu) == mu
    }

    /// Generators of the Θ-fixed lattice used for relation instances:
    /// α_j (j ∈ X) and ϖ'_i (i ∈ I∖X).
    pub fn theta_generators(&self) -> Vec<(String, Weight)> {
        let mut v = Vec::new();
        for j in self.x_nodes() {
            v.push((format!("a[{j}]"), alpha(self.n, j)));
        }
        for i in self.non_x_nodes() {
            v.push((format!("wp[{i}]"), self.varpi_prime(i)));
        }
        v
    }

    /// The reduced word σ_r σ_{r+1} ⋯ σ_{τ(r)} ⋯ σ_{r+1} σ_r for the
    /// restricted reflection at r, or σ_i σ_{τ(i)} for i < r.
    pub fn restricted_word(&self, i: usize) -> Vec<usize> {
        if i < self.r {
            vec![i, self.tau(i)]
        } else {
            let mut w: Vec<usize> = (self.r..=self.tr()).collect();
            w.extend((self.r..self.tr()).rev());
            w
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cartan_examples() {
        assert_eq!(cartan(5, 3, 3), Ok(2));
        assert_eq!(cartan(5, 2, 3), Ok(-1));
        assert_eq!(cartan(5, 1, 4), Ok(0));
        assert!(cartan(5, 0, 1).is_err());
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(pairing(&varpi(4, 2), 2), Ok(1));
        assert_eq!(pairing(&alpha(4, 1), 2), Ok(-1));
        let d = SatakeDatum::new(5, 2).unwrap();
        for j in d.x_nodes() {
            assert_eq!(pairing(&d.varpi_prime(3), j), Ok(0));
        }
    }

    #[test]
    fn reflection_examples() {
        let n = 3;
        assert_eq!(reflect(1, &alpha(n, 1)).unwrap(), alpha(n, 1).neg());
        assert_eq!(
            reflect(1, &varpi(n, 1)).unwrap(),
            varpi(n, 1).sub(&alpha(n, 1))
        );
        assert_eq!(
            reflect_word(&[2, 1, 2], &alpha(n, 1)),
            reflect_word(&[1, 2, 1], &alpha(n, 1))
        );
    }

    #[test]
    fn tau_examples() {
        assert_eq!(tau(5, 1), Ok(5));
        let d = SatakeDatum::new(5, 2).unwrap();
        assert_eq!(tau_weight(&d.varpi_prime(1)), d.varpi_prime(1).neg());
        for i in 1..=5 {
            assert_eq!(tau_weight(&alpha(5, i)), alpha(5, 6 - i));
        }
    }

    #[test]
    fn longest_words() {
        assert_eq!(longest_word(4, &[2]).unwrap(), vec![2]);
        assert_eq!(longest_word(4, &[1, 2]).unwrap(), vec![1, 2, 1]);
        let d = SatakeDatum::new(5, 2).unwrap();
        assert_eq!(d.wx_word(), vec![3]);
        assert_eq!(longest_word(5, &[2, 3, 4]).unwrap().len(), 6);
    }

    #[test]
    fn theta_fixed_examples() {
        let d = SatakeDatum::new(5, 2).unwrap();
        assert!(d.theta_fixed(&alpha(5, 3)));
        for i in 1..=5 {
            assert!(d.theta_fixed(&d.varpi_prime(i)));
        }
        assert!(!d.theta_fixed(&varpi(5, 1)));
        let d = SatakeDatum::new(6, 2).unwrap();
        for (_, w) in d.theta_generators() {
            assert!(d.theta_fixed(&w));
        }
        for i in d.non_x_nodes() {
            assert!(d.theta_fixed(&d.l_weight(i)));
        }
    }

    #[test]
    fn admissibility() {
        assert!(SatakeDatum::new(4, 2).is_err());
        assert!(SatakeDatum::new(4, 1).is_ok());
        assert!(SatakeDatum::new(3, 1).is_ok());
        assert!(SatakeDatum::new(7, 3).is_ok());
        assert!(SatakeDatum::new(7, 4).is_err());
        assert!(SatakeDatum::new(2, 1).is_err());
    }
}
