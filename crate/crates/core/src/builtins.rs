//! Standard algebras and the combinatorics of N-descent-free words.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::freealg::{Tensor, Word};
use crate::homog::{Algebra, AlgebraPresentation};
use crate::linalg::{BasisSolver, SparseVec};
use crate::scalar::{Field, ParamFraction, Rational};

/// `S(V)`: relations `x_i x_j - x_j x_i`, `i < j`.
pub fn polynomial(n: usize) -> Result<AlgebraPresentation<Rational>> {
    if n == 0 {
        return Err(Error::InvalidParameters("polynomial algebra needs n >= 1".into()));
    }
    let mut rels = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            rels.push(Tensor::from_terms(
                n,
                2,
                [(Word(vec![i, j]), Rational::one()), (Word(vec![j, i]), -Rational::one())],
            )?);
        }
    }
    AlgebraPresentation::new(format!("poly(n={n})"), n, 2, rels)
}

/// Free algebra on `n` generators, presented with relation degree `degree`.
pub fn free<F: Field>(n: usize, degree: usize) -> Result<AlgebraPresentation<F>> {
    AlgebraPresentation::new(format!("free(n={n})"), n, degree, Vec::new())
}

/// Sign of a permutation given as a list of images.
pub fn permutation_sign(perm: &[usize]) -> i64 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// All permutations of `0..k` in lex order.
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // next permutation
        let Some(i) = (1..k).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..k).rev().find(|&j| cur[j] > cur[i - 1]).expect("successor exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
}

/// Increasing `k`-subsets of `0..n`, lex order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// The N-antisymmetrizer algebra: one relation
/// `Σ_σ sgn(σ) x_{i_σ(1)}…x_{i_σ(N)}` per index tuple `i₁ < … < i_N`.
pub fn antisymmetrizer(n: usize, big_n: usize) -> Result<AlgebraPresentation<Rational>> {
    if big_n < 2 || big_n > n {
        return Err(Error::InvalidParameters(format!("antisymmetrizer needs 2 <= N <= n, got n={n}, N={big_n}")));
    }
    let perms = permutations(big_n);
    let mut rels = Vec::new();
    for idx in subsets(n, big_n) {
        let terms = perms.iter().map(|p| {
            let w = Word(p.iter().map(|&s| idx[s]).collect());
            (w, Rational::from(permutation_sign(p)))
        });
        rels.push(Tensor::from_terms(n, big_n, terms)?);
    }
    AlgebraPresentation::new(format!("antisym(n={n},N={big_n})"), n, big_n, rels)
}

/// Quantum space `x_j x_i = q_ij x_i x_j` (`i < j`) with the given parameters.
pub fn quantum_space<F: Field>(
    n: usize,
    q: impl Fn(usize, usize) -> F,
    label: impl Into<String>,
) -> Result<AlgebraPresentation<F>> {
    if n == 0 {
        return Err(Error::InvalidParameters("quantum space needs n >= 1".into()));
    }
    let mut rels = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let qij = q(i, j);
            if qij.is_zero() {
                return Err(Error::InvalidParameters(format!("q_{}{} must be nonzero", i + 1, j + 1)));
            }
            rels.push(Tensor::from_terms(n, 2, [(Word(vec![j, i]), F::one()), (Word(vec![i, j]), -qij)])?);
        }
    }
    AlgebraPresentation::new(label, n, 2, rels)
}

/// Index of the parameter `q_ij` (`i < j`) in the generic quantum space.
pub fn quantum_parameter_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    // pairs (0,1),(0,2),…,(1,2),… in lex order
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// Quantum space over ℚ(q_ij) with independent generic parameters; parameter
/// `k` of [`ParamFraction`] is the pair at [`quantum_parameter_index`].
pub fn quantum_space_generic(n: usize) -> Result<AlgebraPresentation<ParamFraction>> {
    quantum_space(n, |i, j| ParamFraction::param(quantum_parameter_index(n, i, j)), format!("qspace(n={n},generic)"))
}

/// Does the word contain `N` consecutive strictly decreasing letters?
pub fn has_descent(word: &[usize], big_n: usize) -> bool {
    let mut run = 1;
    for w in word.windows(2) {
        run = if w[1] < w[0] { run + 1 } else { 1 };
        if run >= big_n {
            return true;
        }
    }
    big_n <= 1 && !word.is_empty()
}

pub fn is_admissible(word: &[usize], big_n: usize) -> bool {
    !has_descent(word, big_n)
}

/// Transfer-matrix count of N-descent-free words.
///
/// States are `(last letter, length of the current strictly decreasing run)`
/// with run length in `1..N`.
#[derive(Clone, Debug)]
pub struct DescentDP {
    n: usize,
    big_n: usize,
}

impl DescentDP {
    pub fn new(n: usize, big_n: usize) -> Self {
        DescentDP { n, big_n }
    }

    /// Counts for lengths `0..=max_len`.
    pub fn counts(&self, max_len: usize) -> Vec<BigInt> {
        let (n, big_n) = (self.n, self.big_n);
        let mut out = vec![BigInt::one()];
        if max_len == 0 {
            return out;
        }
        let runs = big_n.max(2) - 1;
        // table[last][run-1]
        let mut table = vec![vec![BigInt::zero(); runs]; n];
        for row in table.iter_mut() {
            row[0] = BigInt::one();
        }
        out.push(BigInt::from(n));
        for _ in 2..=max_len {
            let mut next = vec![vec![BigInt::zero(); runs]; n];
            for last in 0..n {
                for r in 0..runs {
                    let c = &table[last][r];
                    if c.is_zero() {
                        continue;
                    }
                    for b in 0..n {
                        if b < last {
                            if r + 1 < runs {
                                next[b][r + 1] += c;
                            }
                        } else {
                            next[b][0] += c;
                        }
                    }
                }
            }
            table = next;
            out.push(table.iter().flatten().sum());
        }
        out
    }
}

/// `L(n, N, k)`.
pub fn count_admissible(n: usize, big_n: usize, k: usize) -> BigInt {
    DescentDP::new(n, big_n).counts(k).pop().expect("nonempty")
}

/// Admissible words of length `k` in lex order.
pub fn enumerate_admissible(n: usize, big_n: usize, k: usize) -> Vec<Word> {
    fn go(n: usize, big_n: usize, k: usize, run: usize, cur: &mut Vec<usize>, out: &mut Vec<Word>) {
        if cur.len() == k {
            out.push(Word(cur.clone()));
            return;
        }
        for b in 0..n {
            let r = match cur.last() {
                Some(&l) if b < l => run + 1,
                _ => 1,
            };
            if r >= big_n {
                continue;
            }
            cur.push(b);
            go(n, big_n, k, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, big_n, k, 0, &mut Vec::new(), &mut out);
    out
}

/// The classes of the admissible words of length `k`, used as a basis of
/// `A_k` (for the antisymmetrizer algebras and `S(V)` they are one).
#[derive(Clone, Debug)]
pub struct AdmissibleBasis<F: Field> {
    words: Vec<Word>,
    solver: BasisSolver<F>,
    /// `dual[s]`: the coordinate functional of word `s` on normal coordinates.
    dual: Vec<SparseVec<F>>,
}

impl<F: Field> AdmissibleBasis<F> {
    pub fn new(algebra: &Algebra<F>, big_n: usize, k: usize) -> Result<Self> {
        let words = enumerate_admissible(algebra.n(), big_n, k);
        let dim = algebra.dim_component(k)?;
        let classes = words
            .iter()
            .map(|w| algebra.class_of_word(w).map(|c| c.coords().clone()))
            .collect::<Result<Vec<_>>>()?;
        let solver = BasisSolver::new(dim, &classes);
        match solver {
            Ok(solver) if words.len() == dim => {
                let mut rows = vec![Vec::new(); dim];
                for p in 0..dim {
                    for (s, c) in solver.coordinates(&SparseVec::unit(p))?.into_iter().enumerate() {
                        if !c.is_zero() {
                            rows[s].push((p, c));
                        }
                    }
                }
                let dual = rows.into_iter().map(SparseVec::from_pairs).collect();
                Ok(AdmissibleBasis { words, solver, dual })
            }
            _ => Err(Error::InvalidParameters(format!(
                "admissible words of length {k} ({}) do not form a basis of A_{k} (dim {dim})",
                words.len()
            ))),
        }
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    /// Position of an admissible word in [`Self::words`].
    pub fn position(&self, w: &Word) -> Option<usize> {
        self.words.binary_search(w).ok()
    }

    /// Admissible coordinates of a class given in normal coordinates.
    pub fn coordinates(&self, normal: &SparseVec<F>) -> Result<Vec<F>> {
        self.solver.coordinates(normal)
    }

    /// The single admissible coordinate at `position`.
    pub fn coordinate(&self, position: usize, normal: &SparseVec<F>) -> F {
        self.dual[position].dot(normal)
    }
}

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

/// Closed form for `dim A^!_m` of the antisymmetrizer algebra.
pub fn dual_dims_closed_form(n: usize, big_n: usize, m: usize) -> BigInt {
    if m < big_n {
        BigInt::from(n).pow(m as u32)
    } else if m <= n {
        binomial(n as u64, m as u64)
    } else {
        BigInt::zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::all_words;

    #[test]
    fn polynomial_relations() {
        assert_eq!(polynomial(2).unwrap().relations.len(), 1);
        let p3 = polynomial(3).unwrap();
        assert_eq!(p3.relations.len(), 3);
        assert_eq!(Algebra::new(p3).dim_component(2).unwrap(), 6);
        assert!(polynomial(0).is_err());
    }

    #[test]
    fn polynomial_hilbert_is_binomial() {
        for n in 1..=3 {
            let a = Algebra::new(polynomial(n).unwrap());
            for d in 0..=5 {
                assert_eq!(
                    BigInt::from(a.dim_component(d).unwrap()),
                    binomial((d + n - 1) as u64, d as u64)
                );
            }
        }
    }

    #[test]
    fn antisymmetrizer_shapes() {
        assert_eq!(polynomial(2).unwrap().relation_space(), antisymmetrizer(2, 2).unwrap().relation_space());
        let a33 = antisymmetrizer(3, 3).unwrap();
        assert_eq!(a33.relations.len(), 1);
        assert_eq!(a33.relations[0].terms().count(), 6);
        assert!(a33.relations[0].terms().all(|(_, c)| c.abs() == Rational::one()));
        assert_eq!(antisymmetrizer(4, 3).unwrap().relations.len(), 4);
        assert!(antisymmetrizer(3, 4).is_err());
        assert!(antisymmetrizer(3, 1).is_err());
    }

    #[test]
    fn quantum_space_cases() {
        let ones = quantum_space(3, |_, _| Rational::one(), "q=1").unwrap();
        assert_eq!(ones.relation_space(), polynomial(3).unwrap().relation_space());
        assert!(quantum_space(2, |_, _| Rational::zero(), "bad").is_err());

        let g = Algebra::new(quantum_space_generic(2).unwrap());
        let h: Vec<usize> = (0..=5).map(|d| g.dim_component(d).unwrap()).collect();
        assert_eq!(h, vec![1, 2, 3, 4, 5, 6]);
        let dual = Algebra::new(g.dual());
        assert_eq!(dual.dim_component(2).unwrap(), 1);
        assert_eq!(quantum_parameter_index(4, 0, 1), 0);
        assert_eq!(quantum_parameter_index(4, 1, 2), 3);
        assert_eq!(quantum_parameter_index(4, 2, 3), 5);
    }

    fn brute_count(n: usize, big_n: usize, k: usize) -> usize {
        all_words(n, k).filter(|w| is_admissible(w.letters(), big_n)).count()
    }

    #[test]
    fn admissible_counts_match_brute_force() {
        assert_eq!(count_admissible(3, 3, 3), BigInt::from(26));
        assert_eq!(count_admissible(2, 2, 3), BigInt::from(4));
        for n in 1..=4 {
            for big_n in 2..=4 {
                for k in 0..=6 {
                    let dp = count_admissible(n, big_n, k);
                    assert_eq!(dp, BigInt::from(brute_count(n, big_n, k)), "n={n} N={big_n} k={k}");
                    let words = enumerate_admissible(n, big_n, k);
                    assert_eq!(BigInt::from(words.len()), dp);
                    assert!(words.windows(2).all(|w| w[0] < w[1]));
                }
            }
        }
    }

    #[test]
    fn short_words_are_all_admissible() {
        for k in 0..3 {
            assert_eq!(count_admissible(4, 3, k), BigInt::from(4u32.pow(k as u32)));
        }
        assert!(has_descent(&[2, 1, 0], 3));
        assert!(!has_descent(&[2, 1, 1, 0], 3));
    }

    #[test]
    fn closed_form_dual_dims() {
        let v: Vec<BigInt> = (0..=5).map(|m| dual_dims_closed_form(4, 3, m)).collect();
        assert_eq!(v, [1, 4, 16, 4, 1, 0].map(BigInt::from));
        assert_eq!(dual_dims_closed_form(5, 3, 2), BigInt::from(25));
        assert_eq!(dual_dims_closed_form(4, 4, 4), BigInt::from(1));
    }

    #[test]
    fn permutation_helpers() {
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutation_sign(&[1, 0, 2]), -1);
        assert_eq!(permutation_sign(&[1, 2, 0]), 1);
        assert_eq!(subsets(4, 2).len(), 6);
    }
}
