//! Numeric specializations `z_i^j ↦ Z_ij`: the MacMahon Master Theorem for
//! `S(V)` and its N-analog for the antisymmetrizer algebras.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::builtins::{antisymmetrizer, is_admissible, subsets, AdmissibleBasis};
use crate::error::{Error, Result};
use crate::freealg::Word;
use crate::homog::{Algebra, AlgebraClass};
use crate::linalg::{Accumulator, SparseVec};
use crate::scalar::{Field, MPoly, Monomial, Rational};
use crate::series::MultiSeries;

/// A square rational matrix; row `i` holds the values of `z_i^1 … z_i^n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct NumericMatrix {
    n: usize,
    entries: Vec<Vec<Rational>>,
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    n: usize,
    entries: Vec<Vec<Rational>>,
}

impl TryFrom<MatrixJson> for NumericMatrix {
    type Error = Error;
    fn try_from(m: MatrixJson) -> Result<Self> {
        NumericMatrix::new(m.entries).and_then(|z| {
            if z.n == m.n {
                Ok(z)
            } else {
                Err(Error::DimensionMismatch { left: m.n, right: z.n })
            }
        })
    }
}

impl From<NumericMatrix> for MatrixJson {
    fn from(z: NumericMatrix) -> Self {
        MatrixJson { n: z.n, entries: z.entries }
    }
}

impl NumericMatrix {
    pub fn new(entries: Vec<Vec<Rational>>) -> Result<Self> {
        let n = entries.len();
        if let Some(row) = entries.iter().find(|r| r.len() != n) {
            return Err(Error::NotSquare { rows: n, cols: row.len() });
        }
        Ok(NumericMatrix { n, entries })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> Rational) -> Self {
        NumericMatrix { n, entries: (0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect() }
    }

    pub fn zero(n: usize) -> Self {
        Self::from_fn(n, |_, _| Rational::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { Rational::one() } else { Rational::zero() })
    }

    pub fn ones(n: usize) -> Self {
        Self::from_fn(n, |_, _| Rational::one())
    }

    /// Entries `p/q` with `p ∈ [-9, 9]`, `q ∈ [1, 9]`, from a seeded ChaCha8 stream.
    pub fn random(n: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let entries = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| {
                        let p: i64 = rng.gen_range(-9..=9);
                        let q: i64 = rng.gen_range(1..=9);
                        Rational::new(p, q).expect("nonzero denominator")
                    })
                    .collect()
            })
            .collect();
        NumericMatrix { n, entries }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<Rational>] {
        &self.entries
    }

    /// Determinant of the principal submatrix on `rows`.
    pub fn principal_minor(&self, rows: &[usize]) -> Rational {
        let m: Vec<Vec<MPoly<Rational>>> =
            rows.iter().map(|&i| rows.iter().map(|&j| MPoly::constant(self.get(i, j).clone())).collect()).collect();
        determinant(&m).constant_term()
    }
}

/// Determinant by Laplace expansion along the first row, memoized on the
/// set of remaining columns.
pub fn determinant<F: Field>(m: &[Vec<MPoly<F>>]) -> MPoly<F> {
    let n = m.len();
    assert!(n < 64, "determinant size");
    let mut memo: HashMap<u64, MPoly<F>> = HashMap::new();
    fn go<F: Field>(m: &[Vec<MPoly<F>>], row: usize, cols: u64, memo: &mut HashMap<u64, MPoly<F>>) -> MPoly<F> {
        if row == m.len() {
            return MPoly::one();
        }
        if let Some(v) = memo.get(&cols) {
            return v.clone();
        }
        let mut acc = MPoly::zero();
        let mut sign_pos = 0;
        for c in 0..m.len() {
            if cols & (1 << c) == 0 {
                continue;
            }
            if !m[row][c].is_zero() {
                let term = m[row][c].mul(&go(m, row + 1, cols & !(1 << c), memo));
                acc = if sign_pos % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            sign_pos += 1;
        }
        memo.insert(cols, acc.clone());
        acc
    }
    go(m, 0, if n == 0 { 0 } else { (1u64 << n) - 1 }, &mut memo)
}

/// `ZT` with `T = diag(t_1, …, t_n)`: entry `(i, j)` is `Z_ij t_j`.
pub fn z_times_t(z: &NumericMatrix) -> Vec<Vec<MPoly<Rational>>> {
    (0..z.n)
        .map(|i| (0..z.n).map(|j| MPoly::var(j).scale(z.get(i, j))).collect())
        .collect()
}

/// Coefficients `c_0 … c_n` of `det(λI - M) = Σ c_r λ^{n-r}`, by the
/// Faddeev–LeVerrier recursion. Asserts `c_r = (-1)^r e_r(M)`, with `e_r`
/// the sum of principal `r×r` minors.
pub fn char_poly_coeffs(m: &[Vec<MPoly<Rational>>]) -> Vec<MPoly<Rational>> {
    let n = m.len();
    let mat_mul = |a: &[Vec<MPoly<Rational>>], b: &[Vec<MPoly<Rational>>]| -> Vec<Vec<MPoly<Rational>>> {
        (0..n)
            .map(|i| (0..n).map(|j| (0..n).fold(MPoly::zero(), |acc, k| acc.add(&a[i][k].mul(&b[k][j])))).collect())
            .collect()
    };
    let mut coeffs = vec![MPoly::one()];
    let mut mk: Vec<Vec<MPoly<Rational>>> = vec![vec![MPoly::zero(); n]; n];
    for k in 1..=n {
        let mut next = mat_mul(m, &mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] = row[i].add(&coeffs[k - 1]);
        }
        let am = mat_mul(m, &next);
        let trace = (0..n).fold(MPoly::zero(), |acc, i| acc.add(&am[i][i]));
        let inv_k = Rational::new(-1, k as i64).expect("k > 0");
        coeffs.push(trace.scale(&inv_k));
        mk = next;
    }
    for (r, c) in coeffs.iter().enumerate() {
        let e_r = elementary_symmetric(m, r);
        let expected = if r % 2 == 0 { e_r } else { e_r.neg() };
        assert_eq!(*c, expected, "c_{r} = (-1)^{r} e_{r}");
    }
    coeffs
}

/// `e_r(M)`: the sum of principal `r×r` minors.
pub fn elementary_symmetric(m: &[Vec<MPoly<Rational>>], r: usize) -> MPoly<Rational> {
    subsets(m.len(), r).into_iter().fold(MPoly::zero(), |acc, rows| {
        let sub: Vec<Vec<MPoly<Rational>>> =
            rows.iter().map(|&i| rows.iter().map(|&j| m[i][j].clone()).collect()).collect();
        acc.add(&determinant(&sub))
    })
}

/// `Z^{⊗N}` applied to a vector of `V^{⊗N}` given in word coordinates.
fn tensor_power_apply(z: &NumericMatrix, big_n: usize, v: &SparseVec<Rational>) -> SparseVec<Rational> {
    let n = z.n;
    let mut acc = Accumulator::new();
    for (w, c) in v.iter() {
        let word = Word::from_index(w, n, big_n);
        // expand Π_s (Σ_j Z_{w_s j} x_j)
        let mut partial: Vec<(usize, Rational)> = vec![(0, c.clone())];
        for &i in word.letters() {
            let mut next = Vec::with_capacity(partial.len() * n);
            for (idx, x) in &partial {
                for j in 0..n {
                    let zij = z.get(i, j);
                    if !zij.is_zero() {
                        next.push((idx * n + j, x.clone() * zij));
                    }
                }
            }
            partial = next;
        }
        for (idx, x) in partial {
            acc.add(idx, &x);
        }
    }
    acc.finish()
}

/// True iff `Z^{⊗N}(span R) ⊆ span R`, so that `z_i^j ↦ Z_ij` kills every
/// relation of `end(A)`.
pub fn check_specializable(algebra: &Algebra<Rational>, z: &NumericMatrix) -> Result<bool> {
    if z.n != algebra.n() {
        return Err(Error::DimensionMismatch { left: algebra.n(), right: z.n });
    }
    let r = algebra.relation_space();
    for v in r.basis() {
        if !r.contains(&tensor_power_apply(z, algebra.relation_degree(), v))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Values of the relations of `end(A)` at `z_i^j ↦ Z_ij`:
/// `⟨ξ, Z^{⊗N} r⟩` for `ξ` in a basis of `R^⊥` and `r` in a basis of `R`.
pub fn end_relation_values(algebra: &Algebra<Rational>, z: &NumericMatrix) -> Vec<Rational> {
    let r = algebra.relation_space();
    let perp = r.orthogonal_complement();
    let mut out = Vec::new();
    for v in r.basis() {
        let image = tensor_power_apply(z, algebra.relation_degree(), v);
        for xi in perp.basis() {
            out.push(xi.dot(&image));
        }
    }
    out
}

/// The G-coefficients of an algebra at a numeric matrix.
#[derive(Debug)]
pub struct GTable<'a> {
    algebra: &'a Algebra<Rational>,
    z: NumericMatrix,
    big_n: usize,
    /// `[X_i]` in `A_1` normal coordinates.
    generators: Vec<AlgebraClass<Rational>>,
}

impl<'a> GTable<'a> {
    /// Fails with [`Error::NotSpecializable`] unless the relations of `end(A)`
    /// vanish at `Z`.
    pub fn new(algebra: &'a Algebra<Rational>, z: NumericMatrix) -> Result<Self> {
        if !check_specializable(algebra, &z)? {
            return Err(Error::NotSpecializable);
        }
        let n = algebra.n();
        let generators = (0..n)
            .map(|i| {
                let v = SparseVec::from_pairs((0..n).map(|j| (j, z.get(i, j).clone())));
                algebra.reduce_vec(1, &v)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GTable { algebra, z, big_n: algebra.relation_degree(), generators })
    }

    pub fn matrix(&self) -> &NumericMatrix {
        &self.z
    }

    /// `[X_{i_1} … X_{i_k}]` in `A_k`.
    pub fn product(&self, word: &Word) -> Result<AlgebraClass<Rational>> {
        word.check(self.algebra.n())?;
        word.letters().iter().try_fold(self.algebra.unit(), |acc, &i| self.algebra.multiply(&acc, &self.generators[i]))
    }

    /// Coefficient of `x_{i_1} … x_{i_k}` in `X_{i_1} … X_{i_k}`, in the
    /// admissible basis.
    pub fn coefficient(&self, word: &Word) -> Result<Rational> {
        if !is_admissible(word.letters(), self.big_n) {
            return Err(Error::NotAdmissible(word.0.clone()));
        }
        let basis = AdmissibleBasis::new(self.algebra, self.big_n, word.grade())?;
        Ok(basis.coordinate(basis.position(word).expect("admissible"), self.product(word)?.coords()))
    }

    /// All `G(i)` with `|i| = k`, in lex order of `i`; products are built
    /// along shared prefixes.
    pub fn all_of_length(&self, k: usize) -> Result<Vec<(Word, Rational)>> {
        let basis = AdmissibleBasis::new(self.algebra, self.big_n, k)?;
        let mut out = Vec::with_capacity(basis.words().len());
        let mut stack: Vec<AlgebraClass<Rational>> = vec![self.algebra.unit()];
        let mut prefix: Vec<usize> = Vec::new();
        for (pos, w) in basis.words().iter().enumerate() {
            let common = prefix.iter().zip(w.letters()).take_while(|(a, b)| a == b).count();
            prefix.truncate(common);
            stack.truncate(common + 1);
            for &i in &w.letters()[common..] {
                let next = self.algebra.multiply(stack.last().expect("unit"), &self.generators[i])?;
                stack.push(next);
                prefix.push(i);
            }
            out.push((w.clone(), basis.coordinate(pos, stack.last().expect("nonempty").coords())));
        }
        Ok(out)
    }

    /// `Σ_{|i| ≤ D} G(i) t_{i_1} … t_{i_k}`, words collected by content.
    pub fn series(&self, max_degree: u32) -> Result<MultiSeries<Rational>> {
        let n = self.algebra.n();
        let mut s = MultiSeries::zero(n, max_degree);
        for k in 0..=max_degree as usize {
            for (w, g) in self.all_of_length(k)? {
                s.add_term(content(n, &w), g);
            }
        }
        Ok(s)
    }
}

/// The commutative monomial `t_{i_1} … t_{i_k}`.
pub fn content(n: usize, w: &Word) -> Monomial {
    let mut exps = vec![0u32; n];
    for &i in w.letters() {
        exps[i] += 1;
    }
    Monomial::new(exps)
}

/// `ε(r)`: `+1` for `r ≡ 0`, `-1` for `r ≡ 1 (mod N)`, absent otherwise.
pub fn epsilon(big_n: usize, r: usize) -> Option<i64> {
    match r % big_n {
        0 => Some(1),
        1 => Some(-1),
        _ => None,
    }
}

/// `Σ_{J, |J| ≡ 0,1 (mod N)} ε(|J|) det(Z_J) Π_{j ∈ J} t_j`.
pub fn signed_minor_polynomial(z: &NumericMatrix, big_n: usize) -> MPoly<Rational> {
    let mut p = MPoly::zero();
    for r in 0..=z.n {
        let Some(eps) = epsilon(big_n, r) else { continue };
        for cols in subsets(z.n, r) {
            let minor = z.principal_minor(&cols);
            let mut exps = vec![0u32; z.n];
            for &j in &cols {
                exps[j] = 1;
            }
            p.add_term(Monomial::new(exps), minor * &Rational::from(eps));
        }
    }
    p
}

/// `det(I - ZT)` as a polynomial in `t_1 … t_n`.
pub fn det_i_minus_zt(z: &NumericMatrix) -> MPoly<Rational> {
    let zt = z_times_t(z);
    let m: Vec<Vec<MPoly<Rational>>> = (0..z.n)
        .map(|i| {
            (0..z.n)
                .map(|j| {
                    let one = if i == j { MPoly::one() } else { MPoly::zero() };
                    one.sub(&zt[i][j])
                })
                .collect()
        })
        .collect();
    determinant(&m)
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SeriesMismatch {
    pub monomial: Vec<u32>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct MasterTheoremReport {
    pub n: usize,
    pub big_n: usize,
    pub max_degree: u32,
    pub matrix: NumericMatrix,
    pub denominator: String,
    pub passed: bool,
    pub first_mismatch: Option<SeriesMismatch>,
    pub terms_compared: usize,
}

fn compare(
    n: usize,
    big_n: usize,
    z: &NumericMatrix,
    lhs: &MultiSeries<Rational>,
    denominator: &MPoly<Rational>,
    max_degree: u32,
) -> Result<MasterTheoremReport> {
    let rhs = MultiSeries::from_poly(n, max_degree, denominator).invert()?;
    let first_mismatch = lhs.first_difference(&rhs).map(|m| SeriesMismatch {
        monomial: (0..n).map(|i| m.exp(i)).collect(),
        lhs: lhs.coeff(&m).to_string(),
        rhs: rhs.coeff(&m).to_string(),
    });
    Ok(MasterTheoremReport {
        n,
        big_n,
        max_degree,
        matrix: z.clone(),
        denominator: denominator.display_with(|i| format!("t{}", i + 1)).to_string(),
        passed: first_mismatch.is_none(),
        first_mismatch,
        terms_compared: rhs.terms().count().max(lhs.terms().count()),
    })
}

/// `Σ G(m) t^m = det(I - ZT)^{-1}` up to total degree `max_degree`.
pub fn mmt_check(z: &NumericMatrix, max_degree: u32) -> Result<MasterTheoremReport> {
    let algebra = Algebra::new(crate::builtins::polynomial(z.n)?);
    let lhs = GTable::new(&algebra, z.clone())?.series(max_degree)?;
    compare(z.n, 2, z, &lhs, &det_i_minus_zt(z), max_degree)
}

/// The N-MT for `antisym(n, N)` up to total degree `max_degree`.
pub fn nmt_check(big_n: usize, z: &NumericMatrix, max_degree: u32) -> Result<MasterTheoremReport> {
    let algebra = Algebra::new(antisymmetrizer(z.n, big_n)?);
    let lhs = GTable::new(&algebra, z.clone())?.series(max_degree)?;
    compare(z.n, big_n, z, &lhs, &signed_minor_polynomial(z, big_n), max_degree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins::{polynomial, quantum_space};

    fn q(v: i64) -> Rational {
        Rational::from(v)
    }

    #[test]
    fn char_poly_identity() {
        let i2: Vec<Vec<MPoly<Rational>>> = NumericMatrix::identity(2)
            .entries()
            .iter()
            .map(|r| r.iter().map(|x| MPoly::constant(x.clone())).collect())
            .collect();
        assert_eq!(char_poly_coeffs(&i2), vec![MPoly::constant(q(1)), MPoly::constant(q(-2)), MPoly::constant(q(1))]);
        let z = NumericMatrix::random(3, 11);
        let m: Vec<Vec<MPoly<Rational>>> =
            z.entries().iter().map(|r| r.iter().map(|x| MPoly::constant(x.clone())).collect()).collect();
        let c = char_poly_coeffs(&m);
        let sum = c.iter().fold(Rational::zero(), |acc, p| acc + p.constant_term());
        let i_minus = NumericMatrix::from_fn(3, |i, j| {
            let id = if i == j { q(1) } else { q(0) };
            id - z.get(i, j).clone()
        });
        assert_eq!(sum, i_minus.principal_minor(&[0, 1, 2]));
        assert_eq!(char_poly_coeffs(&z_times_t(&z)).len(), 4);
    }

    #[test]
    fn specializable_guard() {
        let anti = Algebra::new(antisymmetrizer(3, 3).unwrap());
        assert!(check_specializable(&anti, &NumericMatrix::random(3, 1)).unwrap());
        let p = Algebra::new(polynomial(2).unwrap());
        assert!(check_specializable(&p, &NumericMatrix::random(2, 5)).unwrap());
        let qs = Algebra::new(quantum_space(2, |_, _| q(2), "q").unwrap());
        assert!(!check_specializable(&qs, &NumericMatrix::ones(2)).unwrap());
        assert!(end_relation_values(&qs, &NumericMatrix::ones(2)).iter().any(|v| !v.is_zero()));
        assert!(matches!(GTable::new(&qs, NumericMatrix::ones(2)), Err(Error::NotSpecializable)));
    }

    #[test]
    fn g_identity_and_ones() {
        let p = Algebra::new(polynomial(2).unwrap());
        let g = GTable::new(&p, NumericMatrix::identity(2)).unwrap();
        for k in 0..5 {
            assert!(g.all_of_length(k).unwrap().iter().all(|(_, v)| *v == q(1)));
        }
        assert_eq!(g.coefficient(&Word::empty()).unwrap(), q(1));
        assert!(matches!(g.coefficient(&Word(vec![1, 0])), Err(Error::NotAdmissible(_))));
        let ones = GTable::new(&p, NumericMatrix::ones(2)).unwrap();
        for k in 0..6 {
            let total = ones.all_of_length(k).unwrap().into_iter().fold(q(0), |acc, (_, v)| acc + v);
            assert_eq!(total, q(1 << k));
        }
    }

    #[test]
    fn small_master_theorems() {
        assert!(mmt_check(&NumericMatrix::zero(2), 4).unwrap().passed);
        assert!(mmt_check(&NumericMatrix::identity(2), 4).unwrap().passed);
        assert!(mmt_check(&NumericMatrix::random(2, 3), 4).unwrap().passed);
        assert!(nmt_check(3, &NumericMatrix::identity(3), 4).unwrap().passed);
    }

    #[test]
    fn identity_denominator() {
        let p = signed_minor_polynomial(&NumericMatrix::identity(3), 3);
        let t = |i| MPoly::<Rational>::var(i);
        let expected = MPoly::one().sub(&t(0)).sub(&t(1)).sub(&t(2)).add(&t(0).mul(&t(1)).mul(&t(2)));
        assert_eq!(p, expected);
        assert_eq!(signed_minor_polynomial(&NumericMatrix::random(3, 2), 2), det_i_minus_zt(&NumericMatrix::random(3, 2)));
    }

    #[test]
    fn matrix_json() {
        let z = NumericMatrix::random(2, 9);
        let text = serde_json::to_string(&z).unwrap();
        assert!(text.starts_with("{\"n\":2,\"entries\":[["));
        assert_eq!(NumericMatrix::from_json(&text).unwrap(), z);
        assert!(NumericMatrix::from_json("{\"n\":2,\"entries\":[[\"1\"]]}").is_err());
    }
}
