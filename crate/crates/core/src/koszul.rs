//! The Koszul complex `K(A)` of an N-homogeneous algebra.
//!
//! `K(A)` has components `A ⊗ J_{ν(ℓ)}` where `J_m ⊆ V^{⊗m}` is the
//! intersection of all windows `V^{⊗i}⊗R⊗V^{⊗j}` (the graded dual of
//! `A^!_m`), and the differential moves the first `ν(ℓ) - ν(ℓ-1)` tensor
//! factors of the `J` part into `A`. Everything here is degree-bounded:
//! a passing certificate means exactness *up to the given total degree*.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::builtins::{binomial, count_admissible, dual_dims_closed_form};
use crate::error::{Error, Result};
use crate::freealg::tensor_dim;
use crate::homog::Algebra;
use crate::linalg::{Accumulator, Matrix, SparseVec, Subspace};
use crate::scalar::Field;
use crate::series::{Integers, UniSeries};

/// The jump map: `ν_N(2i) = Ni`, `ν_N(2i+1) = Ni + 1`.
pub fn nu(big_n: usize, ell: usize) -> usize {
    big_n * (ell / 2) + ell % 2
}

/// Largest `ℓ` with `ν_N(ℓ) ≤ m`.
pub fn max_ell(big_n: usize, m: usize) -> usize {
    let mut ell = 0;
    while nu(big_n, ell + 1) <= m {
        ell += 1;
    }
    ell
}

/// Koszul complex of an algebra, with a cache of the spaces `J_m`.
#[derive(Debug)]
pub struct KoszulComplex<'a, F: Field> {
    algebra: &'a Algebra<F>,
    dual_spaces: Mutex<BTreeMap<usize, Arc<Subspace<F>>>>,
}

impl<'a, F: Field> KoszulComplex<'a, F> {
    pub fn new(algebra: &'a Algebra<F>) -> Self {
        KoszulComplex { algebra, dual_spaces: Mutex::new(BTreeMap::new()) }
    }

    pub fn algebra(&self) -> &'a Algebra<F> {
        self.algebra
    }

    fn nu(&self, ell: usize) -> usize {
        nu(self.algebra.relation_degree(), ell)
    }

    fn tensor_ambient(&self, m: usize) -> Result<usize> {
        tensor_dim(self.algebra.n(), m).ok_or(Error::TooLarge {
            ambient: (self.algebra.n() as u128).saturating_pow(m as u32),
            limit: usize::MAX as u128,
        })
    }

    /// `J_m`: all of `V^{⊗m}` below `N`, `span(R)` at `N`, and
    /// `(V⊗J_{m-1}) ∩ (J_{m-1}⊗V)` above.
    pub fn dual_space(&self, m: usize) -> Result<Arc<Subspace<F>>> {
        if let Some(s) = self.dual_spaces.lock().expect("lock").get(&m) {
            return Ok(s.clone());
        }
        let big_n = self.algebra.relation_degree();
        let ambient = self.tensor_ambient(m)?;
        let space = if m < big_n {
            if ambient > crate::homog::MAX_ENGINE_AMBIENT {
                return Err(Error::TooLarge {
                    ambient: ambient as u128,
                    limit: crate::homog::MAX_ENGINE_AMBIENT as u128,
                });
            }
            Subspace::full(ambient)
        } else if m == big_n {
            self.algebra.relation_space().clone()
        } else {
            let prev = self.dual_space(m - 1)?;
            let n = self.algebra.n();
            let block = ambient / n;
            let left = Subspace::span(
                ambient,
                (0..n).flat_map(|a| prev.basis().iter().map(move |r| r.shifted(a * block))),
            );
            let right = Subspace::span(
                ambient,
                prev.basis().iter().flat_map(|r| (0..n).map(move |b| r.remap_monotone(|c| c * n + b))),
            );
            left.intersect(&right)?
        };
        let space = Arc::new(space);
        self.dual_spaces.lock().expect("lock").insert(m, space.clone());
        Ok(space)
    }

    /// `J_m` as the intersection of every window, computed directly.
    pub fn dual_space_bruteforce(&self, m: usize) -> Result<Subspace<F>> {
        let big_n = self.algebra.relation_degree();
        let ambient = self.tensor_ambient(m)?;
        if m < big_n {
            return Ok(Subspace::full(ambient));
        }
        let n = self.algebra.n();
        let mid = tensor_dim(n, big_n).expect("fits");
        let mut acc: Option<Subspace<F>> = None;
        for i in 0..=m - big_n {
            let j = m - big_n - i;
            let (left, right) = (tensor_dim(n, i).expect("fits"), tensor_dim(n, j).expect("fits"));
            let mut vectors = Vec::new();
            for r in self.algebra.relation_space().basis() {
                for a in 0..left {
                    for b in 0..right {
                        vectors.push(r.remap_monotone(|c| (a * mid + c) * right + b));
                    }
                }
            }
            let window = Subspace::span(ambient, vectors);
            acc = Some(match acc {
                None => window,
                Some(s) => s.intersect(&window)?,
            });
        }
        Ok(acc.expect("at least one window"))
    }

    /// `dim J_m`, which equals `dim A^!_m` by orthogonality.
    pub fn dual_dim(&self, m: usize) -> Result<usize> {
        if m < self.algebra.relation_degree() {
            return self.tensor_ambient(m);
        }
        Ok(self.dual_space(m)?.dim())
    }

    /// Checks `J_m ⊆ V^{⊗s} ⊗ J_{m-s}`.
    pub fn check_inclusion(&self, m: usize, s: usize) -> Result<()> {
        self.split_coordinates(m, s).map(|_| ())
    }

    /// For each basis vector `b` of `J_m`, the decomposition
    /// `b = Σ_u u ⊗ b_u` with `b_u` in `J_{m-s}` coordinates.
    fn split_coordinates(&self, m: usize, s: usize) -> Result<Vec<Vec<(usize, Vec<F>)>>> {
        let top = self.dual_space(m)?;
        let rest = self.dual_space(m - s)?;
        let block = self.tensor_ambient(m - s)?;
        let mut out = Vec::with_capacity(top.dim());
        for b in top.basis() {
            let mut parts: BTreeMap<usize, Vec<(usize, F)>> = BTreeMap::new();
            for (w, c) in b.iter() {
                parts.entry(w / block).or_default().push((w % block, c.clone()));
            }
            let mut split = Vec::with_capacity(parts.len());
            for (u, entries) in parts {
                let v = SparseVec::from_pairs(entries);
                let coords = rest.coordinates(&v).map_err(|_| Error::InclusionFailure { m, split: s, rest: m - s })?;
                split.push((u, coords));
            }
            out.push(split);
        }
        Ok(out)
    }

    /// `dim A_{m-ν(ℓ)} ⊗ J_{ν(ℓ)}`.
    pub fn space_dim(&self, m: usize, ell: usize) -> Result<usize> {
        let v = self.nu(ell);
        if v > m {
            return Ok(0);
        }
        Ok(self.algebra.dim_component(m - v)? * self.dual_dim(v)?)
    }

    /// Matrix of `d_ℓ : A_k⊗J_{ν(ℓ)} → A_{k+s}⊗J_{ν(ℓ-1)}` at total degree `m`,
    /// with product bases ordered `(normal word, J basis vector)`.
    pub fn differential(&self, m: usize, ell: usize) -> Result<Matrix<F>> {
        if ell == 0 {
            return Err(Error::InvalidParameters("d_0 is not part of the complex".into()));
        }
        let (top, low) = (self.nu(ell), self.nu(ell - 1));
        let target_dim = self.space_dim(m, ell - 1)?;
        if top > m {
            return Ok(Matrix::zero(target_dim, 0));
        }
        let s = top - low;
        let k = m - top;
        let source_a = self.algebra.component(k)?;
        let target_a = self.algebra.component(k + s)?;
        let split = self.split_coordinates(top, s)?;
        let low_dim = self.dual_dim(low)?;
        let shift = self.tensor_ambient(s)?;

        let mut columns = Vec::with_capacity(source_a.dim() * split.len());
        for &e in source_a.normal_indices() {
            // reduce(e·u) for every u that occurs
            let mut products: BTreeMap<usize, SparseVec<F>> = BTreeMap::new();
            for parts in &split {
                for (u, _) in parts {
                    products.entry(*u).or_insert_with(|| {
                        let mut acc = Accumulator::new();
                        target_a.reduce_word_into(e * shift + u, &F::one(), &mut acc);
                        acc.finish()
                    });
                }
            }
            for parts in &split {
                let mut acc = Accumulator::new();
                for (u, coords) in parts {
                    for (p, x) in products[u].iter() {
                        for (q, y) in coords.iter().enumerate() {
                            if !y.is_zero() {
                                acc.add(p * low_dim + q, &(x.clone() * y));
                            }
                        }
                    }
                }
                columns.push(acc.finish());
            }
        }
        Ok(Matrix::from_columns(target_dim, &columns))
    }

    /// Ranks and homology of the total-degree-`m` strand `K(A)_m`.
    pub fn homology_report(&self, m: usize) -> Result<DegreeReport> {
        let top = max_ell(self.algebra.relation_degree(), m);
        let dims = (0..=top).map(|ell| self.space_dim(m, ell)).collect::<Result<Vec<_>>>()?;
        let mut matrices: Vec<Option<Matrix<F>>> = vec![None];
        let mut ranks = vec![0usize; top + 2];
        for ell in 1..=top {
            if dims[ell] == 0 || dims[ell - 1] == 0 {
                matrices.push(None);
                continue;
            }
            let d = self.differential(m, ell)?;
            ranks[ell] = d.rank();
            matrices.push(Some(d));
        }
        let mut d_squared_zero = true;
        for ell in 2..=top {
            if let (Some(lo), Some(hi)) = (&matrices[ell - 1], &matrices[ell]) {
                if !lo.mul(hi)?.is_zero() {
                    d_squared_zero = false;
                }
            }
        }
        let entries: Vec<HomologyEntry> = (0..=top)
            .map(|ell| HomologyEntry {
                ell,
                internal_degree: self.nu(ell),
                a_degree: m - self.nu(ell),
                dim: dims[ell],
                rank: ranks[ell],
                homology: dims[ell] - ranks[ell] - ranks[ell + 1],
            })
            .collect();
        let euler = entries.iter().fold(BigInt::zero(), |acc, e| {
            if e.ell % 2 == 0 {
                acc + BigInt::from(e.dim)
            } else {
                acc - BigInt::from(e.dim)
            }
        });
        Ok(DegreeReport {
            total_degree: m,
            positive_exact: entries.iter().skip(1).all(|e| e.homology == 0),
            augmentation_exact: m == 0 || entries[0].homology == 0,
            d_squared_zero,
            euler_characteristic: euler.to_string(),
            entries,
        })
    }

    /// Exactness of `K(A)_m` for `1 ≤ m ≤ max_degree`, in homological degrees
    /// `ℓ ≥ 1` and at `ℓ = 0`.
    pub fn certificate(&self, max_degree: usize) -> Result<KoszulCertificate> {
        let mut degrees = Vec::new();
        let mut first_failure = None;
        for m in 1..=max_degree {
            let report = self.homology_report(m)?;
            if first_failure.is_none() {
                first_failure = report.first_failure().map(|ell| FailureLocation { total_degree: m, ell });
            }
            degrees.push(report);
        }
        Ok(KoszulCertificate {
            algebra: self.algebra.label().to_string(),
            max_degree,
            passed: first_failure.is_none(),
            verdict: match &first_failure {
                None => format!("exact up to degree {max_degree}"),
                Some(f) => format!("not exact: H_{} at total degree {}", f.ell, f.total_degree),
            },
            first_failure,
            degrees,
        })
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct HomologyEntry {
    pub ell: usize,
    pub internal_degree: usize,
    pub a_degree: usize,
    pub dim: usize,
    /// Rank of `d_ℓ` (0 for `ℓ = 0`).
    pub rank: usize,
    pub homology: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct DegreeReport {
    pub total_degree: usize,
    pub entries: Vec<HomologyEntry>,
    /// `H_ℓ = 0` for all `ℓ ≥ 1`.
    pub positive_exact: bool,
    /// `H_0 = 0`, i.e. `d_1` onto `A_m` (always true at `m = 0`).
    pub augmentation_exact: bool,
    pub d_squared_zero: bool,
    pub euler_characteristic: String,
}

impl DegreeReport {
    /// Smallest failing `ℓ` (positive degrees first, then `ℓ = 0`).
    pub fn first_failure(&self) -> Option<usize> {
        if !self.d_squared_zero {
            return Some(1);
        }
        if let Some(e) = self.entries.iter().skip(1).find(|e| e.homology != 0) {
            return Some(e.ell);
        }
        (!self.augmentation_exact).then_some(0)
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct FailureLocation {
    pub total_degree: usize,
    pub ell: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct KoszulCertificate {
    pub algebra: String,
    pub max_degree: usize,
    pub passed: bool,
    pub verdict: String,
    pub first_failure: Option<FailureLocation>,
    pub degrees: Vec<DegreeReport>,
}

/// `Σ_ℓ (-1)^ℓ dim A^!_{ν(ℓ)} t^{ν(ℓ)}` truncated at `max_degree`.
pub fn dvp_rhs<F: Field>(complex: &KoszulComplex<'_, F>, max_degree: usize) -> Result<UniSeries<BigInt>> {
    let big_n = complex.algebra().relation_degree();
    let mut coeffs = vec![BigInt::zero(); max_degree + 1];
    for ell in 0..=max_ell(big_n, max_degree) {
        let d = BigInt::from(complex.dual_dim(nu(big_n, ell))?);
        coeffs[nu(big_n, ell)] = if ell % 2 == 0 { d } else { -d };
    }
    Ok(UniSeries::new(coeffs))
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct DvpReport {
    pub algebra: String,
    pub max_degree: usize,
    pub passed: bool,
    pub first_failure: Option<usize>,
    pub hilbert: Vec<String>,
    pub dual_series: Vec<String>,
    pub product: Vec<String>,
}

/// Checks `H_A(t) · Σ(-1)^ℓ dim A^!_{ν(ℓ)} t^{ν(ℓ)} = 1` up to `max_degree`.
pub fn dvp_check<F: Field>(complex: &KoszulComplex<'_, F>, max_degree: usize) -> Result<DvpReport> {
    let h = complex.algebra().hilbert_series(max_degree)?;
    let rhs = dvp_rhs(complex, max_degree)?;
    let product = h.mul(&rhs, &Integers);
    let first_failure = product.first_difference(&UniSeries::one(&Integers, max_degree), &Integers);
    let strs = |s: &UniSeries<BigInt>| s.coeffs().iter().map(ToString::to_string).collect();
    Ok(DvpReport {
        algebra: complex.algebra().label().to_string(),
        max_degree,
        passed: first_failure.is_none(),
        first_failure,
        hilbert: strs(&h),
        dual_series: strs(&rhs),
        product: strs(&product),
    })
}

/// `Σ_{k+ℓ=m} (-1)^k C(n+k-1, k) C(n, ℓ)`.
pub fn identity_eq1(n: u64, m: u64) -> BigInt {
    (0..=m).fold(BigInt::zero(), |acc, k| {
        let term = binomial(n + k - 1, k) * binomial(n, m - k);
        if k % 2 == 0 {
            acc + term
        } else {
            acc - term
        }
    })
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct AdmissibleReport {
    pub n: usize,
    pub big_n: usize,
    pub max_degree: usize,
    pub passed: bool,
    pub counts: Vec<String>,
    pub inverse_coefficients: Vec<String>,
    /// `(ℓ, ν(ℓ), signed binomial)` for the nonzero terms.
    pub polynomial_terms: Vec<(usize, usize, String)>,
    /// `ℓ` of the last nonzero term; expected `2q` (r = 0) or `2q + 1`.
    pub last_term_index: usize,
    pub expected_last_term_index: usize,
    pub polynomial_degree: usize,
    pub first_failure: Option<usize>,
}

/// Checks `Σ_k L(n,N,k) t^k = (1 - nt + C(n,N)t^N - C(n,N+1)t^{N+1} + …)^{-1}`.
pub fn admissible_identity_check(n: usize, big_n: usize, max_degree: usize) -> Result<AdmissibleReport> {
    if big_n < 2 || big_n > n {
        return Err(Error::InvalidParameters(format!("need 2 <= N <= n, got n={n}, N={big_n}")));
    }
    let mut terms = Vec::new();
    let mut ell = 0;
    loop {
        let v = nu(big_n, ell);
        if v > n {
            break;
        }
        let d = dual_dims_closed_form(n, big_n, v);
        if d.is_zero() {
            break;
        }
        terms.push((ell, v, if ell % 2 == 0 { d } else { -d }));
        ell += 1;
    }
    let mut poly = vec![BigInt::zero(); max_degree + 1];
    for (_, v, c) in &terms {
        if *v <= max_degree {
            poly[*v] = c.clone();
        }
    }
    let inverse = UniSeries::new(poly).invert(&Integers)?;
    let counts: Vec<BigInt> = (0..=max_degree).map(|k| count_admissible(n, big_n, k)).collect();
    let first_failure = (0..=max_degree).find(|&k| counts[k] != *inverse.coeff(k));
    let (q, r) = (n / big_n, n % big_n);
    let expected = if r == 0 { 2 * q } else { 2 * q + 1 };
    let (last_ell, last_nu, _) = terms.last().cloned().expect("constant term present");
    Ok(AdmissibleReport {
        n,
        big_n,
        max_degree,
        passed: first_failure.is_none() && last_ell == expected && last_nu == nu(big_n, expected),
        counts: counts.iter().map(ToString::to_string).collect(),
        inverse_coefficients: inverse.coeffs().iter().map(ToString::to_string).collect(),
        polynomial_terms: terms.iter().map(|(l, v, c)| (*l, *v, c.to_string())).collect(),
        last_term_index: last_ell,
        expected_last_term_index: expected,
        polynomial_degree: last_nu,
        first_failure,
    })
}

/// Alternating dimension sum `Σ_{k+ν(ℓ)=m} (-1)^ℓ dim A_k · dim A^!_{ν(ℓ)}`.
pub fn euler_sum<F: Field>(complex: &KoszulComplex<'_, F>, m: usize) -> Result<BigInt> {
    let big_n = complex.algebra().relation_degree();
    let mut acc = BigInt::zero();
    for ell in 0..=max_ell(big_n, m) {
        let v = nu(big_n, ell);
        let term = BigInt::from(complex.algebra().dim_component(m - v)?) * BigInt::from(complex.dual_dim(v)?);
        acc = if ell % 2 == 0 { acc + term } else { acc - term };
    }
    Ok(acc)
}

/// `1` as a convenience for reports.
pub fn unit_series(max_degree: usize) -> UniSeries<BigInt> {
    UniSeries::from_fn(&Integers, max_degree, |d| if d == 0 { BigInt::one() } else { BigInt::zero() })
}
