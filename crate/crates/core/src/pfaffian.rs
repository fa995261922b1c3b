//! Exact Pfaffian computation, the defining-sum cross-check oracle, matching
//! signs, and an exact determinant used by the tests.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::num::{sign_pow, Rat};
use crate::skew::SkewMatrix;

/// Default dimension bound for the defining-sum oracle.
pub const PFAFFIAN_ORACLE_BOUND: usize = 16;

/// Pfaffian by skew-symmetric Schur-complement elimination, O(n^3) exact
/// rational operations. Odd dimension gives 0.
pub fn pfaffian(a: &SkewMatrix) -> Rat {
    let n = a.n();
    if n % 2 != 0 {
        return Rat::zero();
    }
    let mut m = a.clone();
    let mut acc = Rat::one();
    let mut k = 0;
    while k < n {
        // ensure a nonzero pivot at (k, k+1); swapping rows+columns flips
        // the sign of the Pfaffian
        if m.get(k, k + 1).is_zero() {
            match (k + 2..n).find(|&j| !m.get(k, j).is_zero()) {
                Some(j) => {
                    m.swap(k + 1, j);
                    acc = -acc;
                }
                None => return Rat::zero(), // row k is zero beyond position k
            }
        }
        let p = m.get(k, k + 1).clone();
        acc *= &p;
        // Schur complement on the trailing block:
        // a'[i][j] = a[i][j] - (a[k][i] a[k+1][j] - a[k][j] a[k+1][i]) / p
        for i in (k + 2)..n {
            if m.get(k, i).is_zero() && m.get(k + 1, i).is_zero() {
                continue;
            }
            for j in (i + 1)..n {
                let delta =
                    (m.get(k, i).clone() * m.get(k + 1, j)) - (m.get(k, j).clone() * m.get(k + 1, i));
                if !delta.is_zero() {
                    let x = m.get(i, j).clone() - delta / &p;
                    m.set(i, j, x);
                }
            }
        }
        k += 2;
    }
    acc
}

/// Pfaffian by the defining sum over perfect matchings of {0,..,n-1}; used
/// only as a cross-check oracle, hence the dimension bound.
pub fn pfaffian_by_definition(a: &SkewMatrix) -> Result<Rat> {
    pfaffian_by_definition_bounded(a, PFAFFIAN_ORACLE_BOUND)
}

pub fn pfaffian_by_definition_bounded(a: &SkewMatrix, bound: usize) -> Result<Rat> {
    let n = a.n();
    if n > bound {
        return Err(Error::DimensionTooLargeForOracle(n, bound));
    }
    if n % 2 != 0 {
        return Ok(Rat::zero());
    }
    Ok(pf_def_rec(a, &(0..n).collect::<Vec<_>>()))
}

fn pf_def_rec(a: &SkewMatrix, live: &[usize]) -> Rat {
    // expansion along the first live index: Pf(A) = sum_j (-1)^j a[0][j] Pf(A_{0,j})
    if live.is_empty() {
        return Rat::one(); // empty Pfaffian
    }
    let i = live[0];
    let mut total = Rat::zero();
    for (pos, &j) in live.iter().enumerate().skip(1) {
        let aij = a.get(i, j);
        if aij.is_zero() {
            continue;
        }
        let rest: Vec<usize> = live[1..]
            .iter()
            .copied()
            .filter(|&x| x != j)
            .collect();
        let term = aij.clone() * pf_def_rec(a, &rest);
        total += term * sign_pow(pos + 1); // sign (-1)^{pos+1}, pos is 1-based column offset
    }
    total
}

/// Exact determinant by rational Gaussian elimination with partial pivoting.
pub fn determinant(a: &SkewMatrix) -> Rat {
    let n = a.n();
    let mut m: Vec<Vec<Rat>> = (0..n)
        .map(|i| (0..n).map(|j| a.get(i, j).clone()).collect())
        .collect();
    let mut det = Rat::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rat::zero();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        let pivot = m[col][col].clone();
        det *= &pivot;
        for r in (col + 1)..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone() / &pivot;
            for c in col..n {
                let sub = factor.clone() * &m[col][c];
                m[r][c] -= sub;
            }
        }
    }
    det
}

/// A perfect matching of {0,..,2n-1} listed edge by edge, each pair tail
/// first per the edge orientation.
#[derive(Clone, Debug)]
pub struct MatchingSignInput {
    pub pairs: Vec<(usize, usize)>,
}

impl MatchingSignInput {
    pub fn new(pairs: Vec<(usize, usize)>) -> Result<Self> {
        let n2 = pairs.len() * 2;
        let mut seen = vec![false; n2];
        for &(i, j) in &pairs {
            if i >= n2 || j >= n2 || seen[i] || seen[j] {
                return Err(Error::MismatchedSupport);
            }
            seen[i] = true;
            seen[j] = true;
        }
        Ok(MatchingSignInput { pairs })
    }
}

/// Sign of the permutation sending 1,2,...,2n to i1,j1,i2,j2,...,in,jn.
pub fn matching_sign(m: &MatchingSignInput) -> i32 {
    let mut image = Vec::with_capacity(m.pairs.len() * 2);
    for &(i, j) in &m.pairs {
        image.push(i);
        image.push(j);
    }
    permutation_sign(&image)
}

/// Seeded generator of random skew-symmetric rational matrices, used by
/// cross-check suites and benchmarks.
pub struct SkewBuild {
    rng: rand_chacha::ChaCha8Rng,
}

impl SkewBuild {
    pub fn seeded(seed: u64) -> Self {
        use rand::SeedableRng;
        SkewBuild {
            rng: rand_chacha::ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn random(&mut self, n: usize) -> SkewMatrix {
        use rand::Rng;
        let mut m = SkewMatrix::zero(n);
        for i in 0..n {
            for j in (i + 1)..n {
                let num = self.rng.gen_range(-6i64..=6);
                let den = self.rng.gen_range(1i64..=4);
                m.set(i, j, crate::num::frac(num, den));
            }
        }
        m
    }
}

/// Sign by cycle decomposition, O(n).
pub fn permutation_sign(image: &[usize]) -> i32 {
    let n = image.len();
    let mut seen = vec![false; n];
    let mut sign = 1;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = image[x];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rat;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn two_by_two() {
        let mut m = SkewMatrix::zero(2);
        m.set(0, 1, crate::num::frac(5, 3));
        assert_eq!(pfaffian(&m), crate::num::frac(5, 3));
        assert_eq!(pfaffian_by_definition(&m).unwrap(), crate::num::frac(5, 3));
    }

    #[test]
    fn empty_pfaffian_is_one() {
        let m = SkewMatrix::zero(0);
        assert_eq!(pfaffian_by_definition(&m).unwrap(), rat(1));
        assert_eq!(pfaffian(&m), rat(1));
    }

    #[test]
    fn odd_dimension_is_zero() {
        let m = SkewBuild::seeded(7).random(5);
        assert_eq!(pfaffian(&m), rat(0));
        assert_eq!(pfaffian_by_definition(&m).unwrap(), rat(0));
    }

    #[test]
    fn four_by_four_expansion() {
        // Pf = a12 a34 - a13 a24 + a14 a23, checked on an asymmetric instance
        let mut m = SkewMatrix::zero(4);
        m.set(0, 1, rat(2));
        m.set(0, 2, rat(3));
        m.set(0, 3, rat(5));
        m.set(1, 2, rat(7));
        m.set(1, 3, rat(11));
        m.set(2, 3, rat(13));
        let expect = rat(2 * 13 - 3 * 11 + 5 * 7);
        assert_eq!(pfaffian(&m), expect);
        assert_eq!(pfaffian_by_definition(&m).unwrap(), expect);
    }

    #[test]
    fn elimination_matches_definition_and_det() {
        let mut build = SkewBuild::seeded(42);
        for n in [4usize, 6, 8, 10] {
            for _ in 0..10 {
                let m = build.random(n);
                let pf = pfaffian(&m);
                assert_eq!(pf, pfaffian_by_definition(&m).unwrap());
                assert_eq!(pf.clone() * &pf, determinant(&m));
            }
        }
    }

    #[test]
    fn alternating_under_swap() {
        let m = SkewBuild::seeded(3).random(6);
        let mut s = m.clone();
        s.swap(1, 4);
        assert_eq!(pfaffian(&s), -pfaffian(&m));
    }

    #[test]
    fn oracle_bound_enforced() {
        let m = SkewMatrix::zero(18);
        assert!(matches!(
            pfaffian_by_definition(&m),
            Err(Error::DimensionTooLargeForOracle(18, _))
        ));
    }

    #[test]
    fn matching_sign_examples() {
        let id = MatchingSignInput::new(vec![(0, 1), (2, 3)]).unwrap();
        assert_eq!(matching_sign(&id), 1);
        let crossed = MatchingSignInput::new(vec![(0, 2), (1, 3)]).unwrap();
        assert_eq!(matching_sign(&crossed), -1);
        let flipped = MatchingSignInput::new(vec![(1, 0), (2, 3)]).unwrap();
        assert_eq!(matching_sign(&flipped), -1);
    }

    #[test]
    fn matching_sign_block_invariance_and_flip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            // random matching on 8 points with random edge directions
            let mut pts: Vec<usize> = (0..8).collect();
            pts.shuffle(&mut rng);
            let mut pairs: Vec<(usize, usize)> =
                pts.chunks(2).map(|c| (c[0], c[1])).collect();
            let base = matching_sign(&MatchingSignInput::new(pairs.clone()).unwrap());
            // permuting the edges (blocks of two) never changes the sign
            pairs.shuffle(&mut rng);
            let shuffled = matching_sign(&MatchingSignInput::new(pairs.clone()).unwrap());
            assert_eq!(base, shuffled);
            // reversing one edge flips it
            let k = rng.gen_range(0..pairs.len());
            pairs[k] = (pairs[k].1, pairs[k].0);
            let flipped = matching_sign(&MatchingSignInput::new(pairs).unwrap());
            assert_eq!(flipped, -base);
        }
    }
}
