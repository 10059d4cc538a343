//! Manin's bialgebra `end(A)` and the character map.
//!
//! `end(A)` is the N-homogeneous algebra on the `n²` generators `z_i^j`
//! (flat index `i·n + j`) with relations `R^⊥ ⊗ R`, factor-interleaved.
//! Its coproduct is `Δ(z_i^j) = Σ_k z_i^k ⊗ z_k^j`; only the coaction
//! `δ(x_i) = Σ_j z_i^j ⊗ x_j` is used here.

use serde::Serialize;

use crate::builtins::{permutation_sign, permutations, subsets, AdmissibleBasis};
use crate::error::{Error, Result};
use crate::freealg::{tensor_dim, z_index, Tensor, Word};
use crate::homog::{Algebra, AlgebraClass, AlgebraPresentation, GradedRing};
use crate::koszul::{max_ell, nu, KoszulComplex};
use crate::linalg::{Accumulator, BasisSolver, SparseVec, Subspace};
use crate::scalar::Field;
use crate::series::UniSeries;

/// Word index in `end(A)` of `z_{w_1}^{j_1} … z_{w_k}^{j_k}`, given the
/// indices of `w` and `j` in `V^{⊗k}`.
pub fn interleave(n: usize, k: usize, mut w: usize, mut j: usize) -> usize {
    let (mut out, mut place) = (0, 1);
    for _ in 0..k {
        out += (z_index(n, w % n, j % n)) * place;
        place *= n * n;
        w /= n;
        j /= n;
    }
    out
}

/// Presentation of `end(A)`.
pub fn end_presentation<F: Field>(base: &AlgebraPresentation<F>) -> Result<AlgebraPresentation<F>> {
    let r = base.relation_space();
    let perp = r.orthogonal_complement();
    let (n, big_n) = (base.n, base.degree);
    let mut relations = Vec::with_capacity(perp.dim() * r.dim());
    for xi in perp.basis() {
        let xi = Tensor::from_sparse(n, big_n, xi);
        for v in r.basis() {
            relations.push(xi.shuffle_pairs(&Tensor::from_sparse(n, big_n, v))?);
        }
    }
    AlgebraPresentation::new(format!("end({})", base.label), n * n, big_n, relations)
}

/// `end(A)` together with the algebra it coacts on.
#[derive(Debug)]
pub struct ManinBialgebra<'a, F: Field> {
    base: &'a Algebra<F>,
    end: Algebra<F>,
    koszul: KoszulComplex<'a, F>,
}

impl<'a, F: Field> ManinBialgebra<'a, F> {
    pub fn new(base: &'a Algebra<F>) -> Result<Self> {
        let end = Algebra::new(end_presentation(base.presentation())?);
        Ok(ManinBialgebra { base, end, koszul: KoszulComplex::new(base) })
    }

    pub fn base(&self) -> &'a Algebra<F> {
        self.base
    }

    pub fn end(&self) -> &Algebra<F> {
        &self.end
    }

    pub fn koszul(&self) -> &KoszulComplex<'a, F> {
        &self.koszul
    }

    /// `dim span(R^⊥ ⊗ R) = dim R^⊥ · dim R`.
    pub fn relation_dim_invariant(&self) -> bool {
        let r = self.base.relation_space();
        let perp = tensor_dim(self.base.n(), self.base.relation_degree()).expect("fits") - r.dim();
        self.end.relation_space().dim() == perp * r.dim()
    }

    fn n(&self) -> usize {
        self.base.n()
    }

    /// `δ(x_w) = Σ_j [z_w^j] ⊗ [x_j]`, omitting pairs with a zero factor.
    pub fn coaction_on_word(&self, w: &Word) -> Result<Vec<(AlgebraClass<F>, AlgebraClass<F>)>> {
        w.check(self.n())?;
        let k = w.grade();
        let (n, wi) = (self.n(), w.index(self.n()));
        let mut out = Vec::new();
        for j in 0..self.base.ambient(k)? {
            let a = self.base.class_of_word(&Word::from_index(j, n, k))?;
            if a.is_zero() {
                continue;
            }
            let e = self.end.class_of_word(&Word::from_index(interleave(n, k, wi, j), n * n, k))?;
            if !e.is_zero() {
                out.push((e, a));
            }
        }
        Ok(out)
    }

    /// Checks that `δ` maps every basis vector of the ideal `I_d` to zero in
    /// `end(A)_d ⊗ A_d`.
    pub fn coaction_kills_ideal(&self, d: usize) -> Result<bool> {
        let (n, ca, ce) = (self.n(), self.base.component(d)?, self.end.component(d)?);
        let reduced_x: Vec<SparseVec<F>> = (0..self.base.ambient(d)?).map(|j| ca.reduce(&SparseVec::unit(j))).collect();
        for v in ca.ideal().basis() {
            let mut acc = Accumulator::new();
            for (j, a) in reduced_x.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let mut e = Accumulator::new();
                for (i, c) in v.iter() {
                    ce.reduce_word_into(interleave(n, d, i, j), c, &mut e);
                }
                for (pe, x) in e.finish().iter() {
                    for (pa, y) in a.iter() {
                        acc.add(pe * ca.dim() + pa, &(x.clone() * y));
                    }
                }
            }
            if !acc.finish().is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `Σ_s Σ_i b_s[i] Σ_j f_s(x_j) z_i^j`: the trace of the coaction on the
    /// span of `basis`, where `dual[s]` lists the nonzero `(j, f_s(x_j))`.
    fn trace(&self, k: usize, basis: &[SparseVec<F>], dual: &[Vec<(usize, F)>]) -> Result<AlgebraClass<F>> {
        let (n, ce) = (self.n(), self.end.component(k)?);
        let mut acc = Accumulator::new();
        for (b, f) in basis.iter().zip(dual) {
            for (i, x) in b.iter() {
                for (j, y) in f {
                    ce.reduce_word_into(interleave(n, k, i, *j), &(x.clone() * y), &mut acc);
                }
            }
        }
        self.end.class_from_coords(k, acc.finish())
    }

    /// `χ(A_k)`, traced over the normal basis.
    pub fn chi_a(&self, k: usize) -> Result<AlgebraClass<F>> {
        let ca = self.base.component(k)?;
        let basis: Vec<SparseVec<F>> = ca.normal_indices().iter().map(|&e| SparseVec::unit(e)).collect();
        let mut dual = vec![Vec::new(); ca.dim()];
        for j in 0..self.base.ambient(k)? {
            let mut acc = Accumulator::new();
            ca.reduce_word_into(j, &F::one(), &mut acc);
            for (p, c) in acc.finish().iter() {
                dual[p].push((j, c.clone()));
            }
        }
        self.trace(k, &basis, &dual)
    }

    /// `χ(J_{ν(ℓ)})`, traced over the echelon basis with pivot functionals.
    pub fn chi_j(&self, ell: usize) -> Result<AlgebraClass<F>> {
        let m = nu(self.base.relation_degree(), ell);
        let j = self.koszul.dual_space(m)?;
        let dual: Vec<Vec<(usize, F)>> = j.pivots().iter().map(|&p| vec![(p, F::one())]).collect();
        self.trace(m, j.basis(), &dual)
    }

    /// `χ(J_{ν(ℓ)})` traced over an arbitrary basis of `J_{ν(ℓ)}`.
    pub fn chi_j_in_basis(&self, ell: usize, basis: &[SparseVec<F>]) -> Result<AlgebraClass<F>> {
        let m = nu(self.base.relation_degree(), ell);
        let j = self.koszul.dual_space(m)?;
        if basis.len() != j.dim() {
            return Err(Error::DimensionMismatch { left: j.dim(), right: basis.len() });
        }
        // rows of M: echelon coordinates of the new basis vectors
        let rows = basis
            .iter()
            .map(|b| j.coordinates(b).map(|c| SparseVec::from_dense(&c)))
            .collect::<Result<Vec<_>>>()?;
        let solver = BasisSolver::new(j.dim(), &rows)?;
        // f_s(x_{p_u}) = M^{-1}[u][s]
        let mut dual = vec![Vec::new(); j.dim()];
        for (u, &p) in j.pivots().iter().enumerate() {
            for (s, c) in solver.coordinates(&SparseVec::unit(u))?.into_iter().enumerate() {
                if !c.is_zero() {
                    dual[s].push((p, c));
                }
            }
        }
        self.trace(m, basis, &dual)
    }

    /// Evaluates a class at `z_i^j ↦ value(i, j)` through its normal representative.
    pub fn evaluate(&self, c: &AlgebraClass<F>, value: impl Fn(usize, usize) -> F) -> Result<F> {
        let (n, comp) = (self.n(), self.end.component(c.degree())?);
        let mut total = F::zero();
        for (p, x) in c.coords().iter() {
            let word = Word::from_index(comp.normal_indices()[p], n * n, c.degree());
            let mut prod = x.clone();
            for &z in word.letters() {
                prod = prod * &value(z / n, z % n);
                if prod.is_zero() {
                    break;
                }
            }
            total += &prod;
        }
        Ok(total)
    }

    /// The counit `z_i^j ↦ δ_ij`.
    pub fn counit(&self, c: &AlgebraClass<F>) -> Result<F> {
        self.evaluate(c, |i, j| if i == j { F::one() } else { F::zero() })
    }

    /// `Σ_k χ(A_k) t^k` to `max_degree`.
    pub fn chi_a_series(&self, max_degree: usize) -> Result<UniSeries<AlgebraClass<F>>> {
        Ok(UniSeries::new((0..=max_degree).map(|k| self.chi_a(k)).collect::<Result<Vec<_>>>()?))
    }

    /// `Σ_ℓ (-1)^ℓ χ(J_{ν(ℓ)}) t^{ν(ℓ)}` to `max_degree`.
    pub fn chi_j_series(&self, max_degree: usize) -> Result<UniSeries<AlgebraClass<F>>> {
        let big_n = self.base.relation_degree();
        let mut coeffs: Vec<AlgebraClass<F>> = (0..=max_degree).map(|d| self.end.zero_class(d)).collect();
        for ell in 0..=max_ell(big_n, max_degree) {
            let c = self.chi_j(ell)?;
            coeffs[nu(big_n, ell)] = if ell % 2 == 0 { c } else { self.end.scale(&c, &-F::one()) };
        }
        Ok(UniSeries::new(coeffs))
    }

    /// Checks `(Σ χ(A_k) t^k)(Σ (-1)^ℓ χ(J_{ν(ℓ)}) t^{ν(ℓ)}) = 1` in
    /// `end(A)` up to `max_degree`, and `counit ∘ χ = dim` on every term.
    pub fn kmt_check(&self, max_degree: usize) -> Result<KmtReport> {
        let ring = GradedRing(&self.end);
        let bos = self.chi_a_series(max_degree)?;
        let ferm = self.chi_j_series(max_degree)?;
        let product = bos.mul(&ferm, &ring);
        let first_failure = (0..=max_degree).find(|&d| {
            let c = product.coeff(d);
            if d == 0 {
                c.coords() != &SparseVec::unit(0)
            } else {
                !c.is_zero()
            }
        });
        let mut counit_mismatches = Vec::new();
        let mut chi_a = Vec::new();
        for k in 0..=max_degree {
            let c = bos.coeff(k);
            let value = self.counit(c)?;
            let dim = self.base.dim_component(k)?;
            if value != F::from_i64(dim as i64) {
                counit_mismatches.push(format!("chi(A_{k}): counit {value}, dim {dim}"));
            }
            chi_a.push(self.character_element(c)?);
        }
        let mut chi_j = Vec::new();
        for ell in 0..=max_ell(self.base.relation_degree(), max_degree) {
            let c = self.chi_j(ell)?;
            let value = self.counit(&c)?;
            let m = nu(self.base.relation_degree(), ell);
            let dim = self.koszul.dual_dim(m)?;
            if value != F::from_i64(dim as i64) {
                counit_mismatches.push(format!("chi(J_{m}): counit {value}, dim {dim}"));
            }
            chi_j.push(self.character_element(&c)?);
        }
        Ok(KmtReport {
            algebra: self.base.label().to_string(),
            max_degree,
            passed: first_failure.is_none() && counit_mismatches.is_empty(),
            first_failure,
            counit_mismatches,
            chi_a,
            chi_j,
        })
    }

    pub fn character_element(&self, c: &AlgebraClass<F>) -> Result<CharacterElement> {
        let comp = self.end.component(c.degree())?;
        let nn = self.n() * self.n();
        Ok(CharacterElement {
            degree: c.degree(),
            terms: c
                .coords()
                .iter()
                .map(|(p, x)| CharacterTerm {
                    word: Word::from_index(comp.normal_indices()[p], nn, c.degree()).0,
                    coeff: x.to_string(),
                })
                .collect(),
        })
    }

    /// Does the base algebra have the relations of `S(V)`?
    pub fn is_polynomial(&self) -> bool {
        let n = self.n();
        if self.base.relation_degree() != 2 {
            return false;
        }
        let commutators = subsets(n, 2).into_iter().map(|p| {
            let (i, j) = (p[0], p[1]);
            SparseVec::from_pairs([(i * n + j, F::one()), (j * n + i, -F::one())])
        });
        Subspace::span(n * n, commutators) == *self.base.relation_space()
    }

    /// `Σ_{|J|=ℓ} det(Z_J)` in `end(A)_ℓ` under the given convention.
    pub fn minor_sum(&self, ell: usize, convention: DeterminantConvention) -> Result<AlgebraClass<F>> {
        let n = self.n();
        let mut t = Tensor::zero(n * n, ell);
        for cols in subsets(n, ell) {
            for p in permutations(ell) {
                let letters = (0..ell)
                    .map(|s| match convention {
                        DeterminantConvention::ColumnAscending => z_index(n, cols[p[s]], cols[s]),
                        DeterminantConvention::RowAscending => z_index(n, cols[s], cols[p[s]]),
                    })
                    .collect();
                t = t.add(&Tensor::from_terms(n * n, ell, [(Word(letters), F::from_i64(permutation_sign(&p)))])?)?;
            }
        }
        self.end.reduce(&t)
    }

    /// Bos/Ferm cross-check against the χ-series for `S(V)`.
    pub fn bos_ferm(&self, max_degree: usize) -> Result<BosFermReport> {
        if !self.is_polynomial() {
            return Err(Error::NotPolynomial);
        }
        let n = self.n();
        let chi_a = self.chi_a_series(max_degree)?;
        let chi_j = self.chi_j_series(max_degree)?;

        // Bos_k = Σ_{|m|=k} G(m), G(m) = coefficient of x^m in X^m
        let mut bos = Vec::new();
        for k in 0..=max_degree {
            let basis = AdmissibleBasis::new(self.base, 2, k)?;
            let (ca, ce) = (self.base.component(k)?, self.end.component(k)?);
            let mut acc = Accumulator::new();
            for j in 0..self.base.ambient(k)? {
                let mut r = Accumulator::new();
                ca.reduce_word_into(j, &F::one(), &mut r);
                for (pos, c) in basis.coordinates(&r.finish())?.into_iter().enumerate() {
                    if !c.is_zero() {
                        let w = basis.words()[pos].index(n);
                        ce.reduce_word_into(interleave(n, k, w, j), &c, &mut acc);
                    }
                }
            }
            bos.push(self.end.class_from_coords(k, acc.finish())?);
        }
        let bos_mismatch = (0..=max_degree).find(|&k| bos[k] != *chi_a.coeff(k));

        let mut conventions = Vec::new();
        for convention in [DeterminantConvention::ColumnAscending, DeterminantConvention::RowAscending] {
            let mut first_mismatch = None;
            for ell in 0..=max_degree {
                let minors = self.minor_sum(ell, convention)?;
                let signed = if ell % 2 == 0 { minors } else { self.end.scale(&minors, &-F::one()) };
                if signed != *chi_j.coeff(ell) {
                    first_mismatch = Some(ell);
                    break;
                }
            }
            conventions.push(ConventionResult { convention, passed: first_mismatch.is_none(), first_mismatch });
        }
        let passing: Vec<DeterminantConvention> =
            conventions.iter().filter(|c| c.passed).map(|c| c.convention).collect();
        Ok(BosFermReport {
            n,
            max_degree,
            bos_matches_chi: bos_mismatch.is_none(),
            bos_first_mismatch: bos_mismatch,
            passed: bos_mismatch.is_none() && !passing.is_empty(),
            passing_convention: passing.first().copied(),
            conventions,
        })
    }
}

/// Ordering of the factors in a noncommutative minor `det(Z_J)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeterminantConvention {
    /// `Σ_σ sgn(σ) z_{σ(j₁)}^{j₁} … z_{σ(j_ℓ)}^{j_ℓ}`
    ColumnAscending,
    /// `Σ_σ sgn(σ) z_{j₁}^{σ(j₁)} … z_{j_ℓ}^{σ(j_ℓ)}`
    RowAscending,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CharacterTerm {
    /// Flat generator indices `i·n + j`.
    pub word: Vec<usize>,
    pub coeff: String,
}

/// A class in `end(A)_d`, listed over the normal basis.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CharacterElement {
    pub degree: usize,
    pub terms: Vec<CharacterTerm>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct KmtReport {
    pub algebra: String,
    pub max_degree: usize,
    pub passed: bool,
    pub first_failure: Option<usize>,
    pub counit_mismatches: Vec<String>,
    pub chi_a: Vec<CharacterElement>,
    pub chi_j: Vec<CharacterElement>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ConventionResult {
    pub convention: DeterminantConvention,
    pub passed: bool,
    pub first_mismatch: Option<usize>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct BosFermReport {
    pub n: usize,
    pub max_degree: usize,
    pub passed: bool,
    pub bos_matches_chi: bool,
    pub bos_first_mismatch: Option<usize>,
    pub conventions: Vec<ConventionResult>,
    pub passing_convention: Option<DeterminantConvention>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins::{antisymmetrizer, polynomial, quantum_space_generic};
    use crate::scalar::Rational;

    fn q(v: i64) -> Rational {
        Rational::from(v)
    }

    #[test]
    fn interleave_matches_shuffle() {
        // w = x2 x1, j = x1 x2 (n = 2) gives z_2^1 z_1^2 = letters 2, 1
        let idx = interleave(2, 2, Word(vec![1, 0]).index(2), Word(vec![0, 1]).index(2));
        assert_eq!(idx, Word(vec![2, 1]).index(4));
    }

    #[test]
    fn polynomial_two_end() {
        let a = Algebra::new(polynomial(2).unwrap());
        let b = ManinBialgebra::new(&a).unwrap();
        assert!(b.relation_dim_invariant());
        assert_eq!(b.end().relation_space().dim(), 3);
        assert_eq!(b.end().dim_component(2).unwrap(), 13);
    }

    #[test]
    fn chi_low_degrees() {
        let a = Algebra::new(polynomial(2).unwrap());
        let b = ManinBialgebra::new(&a).unwrap();
        assert_eq!(b.chi_a(0).unwrap(), b.end().unit());
        assert_eq!(b.chi_j(0).unwrap(), b.end().unit());
        let trace = b.end().reduce(&Tensor::from_terms(4, 1, [(Word(vec![0]), q(1)), (Word(vec![3]), q(1))]).unwrap()).unwrap();
        assert_eq!(b.chi_a(1).unwrap(), trace);
        assert_eq!(b.counit(&b.chi_a(1).unwrap()).unwrap(), q(2));
        assert_eq!(b.counit(&b.end().unit()).unwrap(), q(1));
    }

    #[test]
    fn coaction_on_generator() {
        let a = Algebra::new(polynomial(2).unwrap());
        let b = ManinBialgebra::new(&a).unwrap();
        let d = b.coaction_on_word(&Word(vec![1])).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d[0].0, b.end().class_of_word(&Word(vec![2])).unwrap());
        assert_eq!(d[0].1, a.class_of_word(&Word(vec![0])).unwrap());
        assert_eq!(b.coaction_on_word(&Word::empty()).unwrap(), vec![(b.end().unit(), a.unit())]);
        assert!(b.coaction_kills_ideal(2).unwrap());
        assert!(b.coaction_kills_ideal(3).unwrap());
    }

    #[test]
    fn kmt_polynomial_two() {
        let a = Algebra::new(polynomial(2).unwrap());
        let b = ManinBialgebra::new(&a).unwrap();
        let r = b.kmt_check(4).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn kmt_generic_quantum_plane() {
        let a = Algebra::new(quantum_space_generic(2).unwrap());
        let b = ManinBialgebra::new(&a).unwrap();
        assert!(b.kmt_check(3).unwrap().passed);
    }

    #[test]
    fn bos_ferm_convention() {
        let a = Algebra::new(polynomial(2).unwrap());
        let b = ManinBialgebra::new(&a).unwrap();
        let r = b.bos_ferm(3).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.passing_convention, Some(DeterminantConvention::ColumnAscending));
        let anti = Algebra::new(antisymmetrizer(3, 3).unwrap());
        assert!(matches!(ManinBialgebra::new(&anti).unwrap().bos_ferm(2), Err(Error::NotPolynomial)));
    }
}
