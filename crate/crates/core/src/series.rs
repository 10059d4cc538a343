//! Truncated power series.
//!
//! [`UniSeries`] is univariate with coefficients in any [`CoeffRing`]: the
//! integers, a scalar field, or the graded components of an algebra (where
//! the degree-`d` coefficient lives in `A_d`). [`MultiSeries`] is a
//! commutative multivariate series over a field, truncated in total degree.

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::marker::PhantomData;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{Field, MPoly, Monomial};

/// A coefficient ring presented through a context object, so that graded
/// algebra classes can carry their multiplication table.
pub trait CoeffRing {
    type Elem: Clone + PartialEq + Debug;

    /// Zero of the coefficient attached to `t^degree`.
    fn zero_at(&self, degree: usize) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Inverse of a degree-0 coefficient, if it is a unit.
    fn unit_inverse(&self, a: &Self::Elem) -> Option<Self::Elem>;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Integers;

impl CoeffRing for Integers {
    type Elem = BigInt;

    fn zero_at(&self, _: usize) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn unit_inverse(&self, a: &BigInt) -> Option<BigInt> {
        a.abs().is_one().then(|| a.clone())
    }
}

/// A field viewed as a coefficient ring.
#[derive(Debug)]
pub struct Scalars<F>(PhantomData<F>);

impl<F> Default for Scalars<F> {
    fn default() -> Self {
        Scalars(PhantomData)
    }
}

impl<F: Field> CoeffRing for Scalars<F> {
    type Elem = F;

    fn zero_at(&self, _: usize) -> F {
        F::zero()
    }
    fn one(&self) -> F {
        F::one()
    }
    fn add(&self, a: &F, b: &F) -> F {
        a.clone() + b
    }
    fn neg(&self, a: &F) -> F {
        -a.clone()
    }
    fn mul(&self, a: &F, b: &F) -> F {
        a.clone() * b
    }
    fn is_zero(&self, a: &F) -> bool {
        a.is_zero()
    }
    fn unit_inverse(&self, a: &F) -> Option<F> {
        a.inv()
    }
}

/// `c₀ + c₁t + … + c_D t^D`, truncated at `D = coeffs.len() - 1`.
#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct UniSeries<E> {
    coeffs: Vec<E>,
}

impl<E: Clone + PartialEq + Debug> UniSeries<E> {
    /// Series from explicit coefficients; the truncation is `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<E>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least the constant term");
        UniSeries { coeffs }
    }

    pub fn from_fn<R: CoeffRing<Elem = E>>(_ring: &R, truncation: usize, f: impl FnMut(usize) -> E) -> Self {
        UniSeries { coeffs: (0..=truncation).map(f).collect() }
    }

    pub fn one<R: CoeffRing<Elem = E>>(ring: &R, truncation: usize) -> Self {
        Self::from_fn(ring, truncation, |d| if d == 0 { ring.one() } else { ring.zero_at(d) })
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, d: usize) -> &E {
        &self.coeffs[d]
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn truncate(&self, d: usize) -> Self {
        UniSeries { coeffs: self.coeffs[..=d.min(self.truncation())].to_vec() }
    }

    pub fn mul<R: CoeffRing<Elem = E>>(&self, other: &Self, ring: &R) -> Self {
        let d = self.truncation().min(other.truncation());
        let coeffs = (0..=d)
            .map(|k| {
                (0..=k).fold(ring.zero_at(k), |acc, i| {
                    ring.add(&acc, &ring.mul(&self.coeffs[i], &other.coeffs[k - i]))
                })
            })
            .collect();
        UniSeries { coeffs }
    }

    /// Multiplicative inverse; the constant term must be a unit.
    pub fn invert<R: CoeffRing<Elem = E>>(&self, ring: &R) -> Result<Self> {
        let c0inv = ring.unit_inverse(&self.coeffs[0]).ok_or(Error::NotInvertible)?;
        let mut out: Vec<E> = vec![c0inv.clone()];
        for k in 1..=self.truncation() {
            let mut acc = ring.zero_at(k);
            for i in 1..=k {
                acc = ring.add(&acc, &ring.mul(&self.coeffs[i], &out[k - i]));
            }
            out.push(ring.neg(&ring.mul(&c0inv, &acc)));
        }
        Ok(UniSeries { coeffs: out })
    }

    /// Coefficient-wise equality up to the smaller truncation.
    pub fn equals<R: CoeffRing<Elem = E>>(&self, other: &Self, ring: &R) -> bool {
        self.first_difference(other, ring).is_none()
    }

    /// First degree where the series differ, up to the smaller truncation.
    pub fn first_difference<R: CoeffRing<Elem = E>>(&self, other: &Self, ring: &R) -> Option<usize> {
        let d = self.truncation().min(other.truncation());
        (0..=d).find(|&k| !ring.is_zero(&ring.add(&self.coeffs[k], &ring.neg(&other.coeffs[k]))))
    }

    /// Is this `1` up to truncation?
    pub fn is_one<R: CoeffRing<Elem = E>>(&self, ring: &R) -> bool {
        self.equals(&Self::one(ring, self.truncation()), ring)
    }

    /// Applies a coefficient map (e.g. a ring homomorphism).
    pub fn map<E2: Clone + PartialEq + Debug>(&self, f: impl FnMut(&E) -> E2) -> UniSeries<E2> {
        UniSeries { coeffs: self.coeffs.iter().map(f).collect() }
    }
}

/// Commutative series in `t₁…t_n` over a field, truncated at total degree `D`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiSeries<F: Field> {
    vars: usize,
    truncation: u32,
    terms: BTreeMap<Monomial, F>,
}

impl<F: Field> MultiSeries<F> {
    pub fn zero(vars: usize, truncation: u32) -> Self {
        MultiSeries { vars, truncation, terms: BTreeMap::new() }
    }

    pub fn one(vars: usize, truncation: u32) -> Self {
        let mut s = Self::zero(vars, truncation);
        s.add_term(Monomial::one(), F::one());
        s
    }

    /// Truncates a polynomial.
    pub fn from_poly(vars: usize, truncation: u32, p: &MPoly<F>) -> Self {
        let mut s = Self::zero(vars, truncation);
        for (m, c) in p.terms() {
            s.add_term(m.clone(), c.clone());
        }
        s
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &F)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> F {
        self.terms.get(m).cloned().unwrap_or_else(F::zero)
    }

    /// Adds `c·t^m`; terms beyond the truncation are dropped.
    pub fn add_term(&mut self, m: Monomial, c: F) {
        debug_assert!(m.exponents().len() <= self.vars);
        if c.is_zero() || m.total_degree() > self.truncation {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_insert_with(F::zero);
        *slot += &c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let d = self.truncation.min(other.truncation);
        let mut out = Self::zero(self.vars.max(other.vars), d);
        for (m1, c1) in &self.terms {
            let d1 = m1.total_degree();
            for (m2, c2) in &other.terms {
                if d1 + m2.total_degree() <= d {
                    out.add_term(m1.mul(m2), c1.clone() * c2);
                }
            }
        }
        out
    }

    /// Inverse, by the recursion on total degree.
    pub fn invert(&self) -> Result<Self> {
        let c0 = self.coeff(&Monomial::one());
        let c0inv = c0.inv().ok_or(Error::NotInvertible)?;
        // f = c0 (1 - g) with g having no constant term; 1/f = c0⁻¹ Σ g^k
        let mut g = Self::zero(self.vars, self.truncation);
        for (m, c) in &self.terms {
            if !m.is_one() {
                g.add_term(m.clone(), -(c.clone() * &c0inv));
            }
        }
        let mut sum = Self::one(self.vars, self.truncation);
        let mut power = Self::one(self.vars, self.truncation);
        for _ in 0..self.truncation {
            power = power.mul(&g);
            if power.terms.is_empty() {
                break;
            }
            for (m, c) in &power.terms {
                sum.add_term(m.clone(), c.clone());
            }
        }
        Ok(sum.scale(&c0inv))
    }

    pub fn scale(&self, s: &F) -> Self {
        let mut out = Self::zero(self.vars, self.truncation);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.clone() * s);
        }
        out
    }

    /// First monomial (in lex order) whose coefficients differ, up to the
    /// smaller truncation.
    pub fn first_difference(&self, other: &Self) -> Option<Monomial> {
        let d = self.truncation.min(other.truncation);
        let keys: std::collections::BTreeSet<&Monomial> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter()
            .filter(|m| m.total_degree() <= d)
            .find(|m| self.coeff(m) != other.coeff(m))
            .cloned()
    }

    pub fn equals(&self, other: &Self) -> bool {
        self.first_difference(other).is_none()
    }

    /// Sets every `t_i = t`, giving a univariate series.
    pub fn diagonal(&self) -> UniSeries<F> {
        let mut coeffs = vec![F::zero(); self.truncation as usize + 1];
        for (m, c) in &self.terms {
            coeffs[m.total_degree() as usize] += c;
        }
        UniSeries::new(coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    type Q = Rational;

    fn ints(v: &[i64]) -> UniSeries<BigInt> {
        UniSeries::new(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    #[test]
    fn geometric_series() {
        let inv = ints(&[1, -1, 0, 0, 0]).invert(&Integers).unwrap();
        assert_eq!(inv, ints(&[1, 1, 1, 1, 1]));
    }

    #[test]
    fn square_inverse() {
        let inv = ints(&[1, -2, 1, 0, 0, 0]).invert(&Integers).unwrap();
        assert_eq!(inv, ints(&[1, 2, 3, 4, 5, 6]));
        assert!(ints(&[2, 1]).invert(&Integers).is_err());
    }

    #[test]
    fn multi_inverse_coefficient() {
        let mut f = MultiSeries::<Q>::one(2, 3);
        f.add_term(Monomial::var(0, 1), Q::from(-1));
        f.add_term(Monomial::var(1, 1), Q::from(-1));
        let g = f.invert().unwrap();
        assert_eq!(g.coeff(&Monomial::new(vec![1, 1])), Q::from(2));
        assert_eq!(g.coeff(&Monomial::new(vec![2, 1])), Q::from(3));
        assert!(f.mul(&g).equals(&MultiSeries::one(2, 3)));
    }

    #[test]
    fn equality_uses_min_truncation() {
        let a = ints(&[1, 2, 3]);
        let b = ints(&[1, 2, 3, 9]);
        assert!(a.equals(&b, &Integers));
        assert_eq!(ints(&[1, 2, 4]).first_difference(&b, &Integers), Some(2));
    }
}
