//! Words and homogeneous tensors over a finite alphabet.
//!
//! A word `x_{i₁}…x_{i_k}` over `n` letters is identified with the
//! coordinate index `Σ i_s n^{k-s}`, so numeric order on indices is the
//! lexicographic order on words of a fixed length. Dual tensors (over V*)
//! use the same representation; the pairing is diagonal in this basis.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::SparseVec;
use crate::scalar::{Field, Rational};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn new(letters: Vec<usize>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn grade(&self) -> usize {
        self.0.len()
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn check(&self, n: usize) -> Result<()> {
        match self.0.iter().find(|&&l| l >= n) {
            Some(&letter) => Err(Error::LetterOutOfRange { letter, n }),
            None => Ok(()),
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn index(&self, n: usize) -> usize {
        self.0.iter().fold(0, |acc, &l| acc * n + l)
    }

    pub fn from_index(mut index: usize, n: usize, grade: usize) -> Word {
        let mut v = vec![0; grade];
        for slot in v.iter_mut().rev() {
            *slot = index % n;
            index /= n;
        }
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|l| format!("x{}", l + 1)).collect();
        write!(f, "{}", parts.join(""))
    }
}

/// `n^k` with overflow checking.
pub fn tensor_dim(n: usize, k: usize) -> Option<usize> {
    let mut acc: usize = 1;
    for _ in 0..k {
        acc = acc.checked_mul(n)?;
    }
    Some(acc)
}

/// Every word of length `k` over `n` letters, in lex order.
pub fn all_words(n: usize, k: usize) -> impl Iterator<Item = Word> {
    let total = tensor_dim(n, k).expect("tensor power fits in usize");
    (0..total).map(move |i| Word::from_index(i, n, k))
}

/// Homogeneous element of `V^{⊗k}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Tensor<F: Field> {
    n: usize,
    grade: usize,
    terms: BTreeMap<Word, F>,
}

impl<F: Field> Tensor<F> {
    pub fn zero(n: usize, grade: usize) -> Self {
        Tensor { n, grade, terms: BTreeMap::new() }
    }

    pub fn word(n: usize, word: Word) -> Result<Self> {
        Self::from_terms(n, word.grade(), [(word, F::one())])
    }

    pub fn letter(n: usize, letter: usize) -> Result<Self> {
        Self::word(n, Word(vec![letter]))
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, F)>>(n: usize, grade: usize, terms: I) -> Result<Self> {
        let mut t = Self::zero(n, grade);
        for (w, c) in terms {
            if w.grade() != grade {
                return Err(Error::GradeMismatch { left: grade, right: w.grade() });
            }
            w.check(n)?;
            t.add_term(w, c);
        }
        Ok(t)
    }

    fn add_term(&mut self, w: Word, c: F) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(w.clone()).or_insert_with(F::zero);
        *slot += &c;
        if slot.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &F)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> F {
        self.terms.get(w).cloned().unwrap_or_else(F::zero)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::AlphabetMismatch { left: self.n, right: other.n });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        if self.grade != other.grade {
            return Err(Error::GradeMismatch { left: self.grade, right: other.grade });
        }
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, s: &F) -> Self {
        let mut out = Self::zero(self.n, self.grade);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c.clone() * s);
        }
        out
    }

    /// Product in the free algebra `T(V)`.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.n, self.grade + other.grade);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                out.add_term(w1.concat(w2), c1.clone() * c2);
            }
        }
        Ok(out)
    }

    /// Natural pairing `⟨ξ, v⟩` of `self ∈ V*^{⊗k}` with `v ∈ V^{⊗k}`.
    pub fn pair(&self, v: &Self) -> Result<F> {
        self.check_compatible(v)?;
        if self.grade != v.grade {
            return Err(Error::GradeMismatch { left: self.grade, right: v.grade });
        }
        let mut acc = F::zero();
        for (w, c) in &self.terms {
            if let Some(d) = v.terms.get(w) {
                acc += &(c.clone() * d);
            }
        }
        Ok(acc)
    }

    /// Interleaves `self ∈ V*^{⊗N}` with `v ∈ V^{⊗N}` into `(V*⊗V)^{⊗N}`:
    /// the word pair `(j₁…j_N, i₁…i_N)` maps to the word of generators
    /// `z_{i_s}^{j_s}`, flattened as `i_s·n + j_s`.
    pub fn shuffle_pairs(&self, v: &Self) -> Result<Self> {
        self.check_compatible(v)?;
        if self.grade != v.grade {
            return Err(Error::GradeMismatch { left: self.grade, right: v.grade });
        }
        let n = self.n;
        let mut out = Self::zero(n * n, self.grade);
        for (xi, c1) in &self.terms {
            for (w, c2) in &v.terms {
                let z = xi.0.iter().zip(&w.0).map(|(&j, &i)| z_index(n, i, j)).collect();
                out.add_term(Word(z), c1.clone() * c2);
            }
        }
        Ok(out)
    }

    /// Coordinates in the word basis of `V^{⊗k}`.
    pub fn to_sparse(&self) -> SparseVec<F> {
        SparseVec::from_pairs(self.terms.iter().map(|(w, c)| (w.index(self.n), c.clone())))
    }

    pub fn from_sparse(n: usize, grade: usize, v: &SparseVec<F>) -> Self {
        let mut t = Self::zero(n, grade);
        for (i, c) in v.iter() {
            t.terms.insert(Word::from_index(i, n, grade), c.clone());
        }
        t
    }
}

/// Flat index of the generator `z_i^j` of the Manin bialgebra.
pub fn z_index(n: usize, i: usize, j: usize) -> usize {
    i * n + j
}

impl<F: Field> fmt::Display for Tensor<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(w, c)| format!("({c})*{w}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson<S> {
    coeff: S,
    word: Word,
}

#[derive(Serialize, Deserialize)]
struct TensorJson<S> {
    grade: usize,
    terms: Vec<TermJson<S>>,
}

impl<F: Field + Serialize> Serialize for Tensor<F> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TensorJson {
            grade: self.grade,
            terms: self.terms.iter().map(|(w, c)| TermJson { coeff: c, word: w.clone() }).collect(),
        }
        .serialize(s)
    }
}

impl Tensor<Rational> {
    /// Parses the tensor JSON schema; the alphabet size comes from context.
    pub fn from_json_value(n: usize, value: &serde_json::Value) -> Result<Self> {
        let raw: TensorJson<Rational> = serde_json::from_value(value.clone())?;
        Self::from_terms(n, raw.grade, raw.terms.into_iter().map(|t| (t.word, t.coeff)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = Rational;

    fn x(n: usize, l: usize) -> Tensor<Q> {
        Tensor::letter(n, l).unwrap()
    }

    fn w(letters: &[usize]) -> Word {
        Word(letters.to_vec())
    }

    #[test]
    fn concat_letters() {
        let t = x(2, 0).concat(&x(2, 1)).unwrap();
        assert_eq!(t, Tensor::word(2, w(&[0, 1])).unwrap());
        let diff = x(2, 0).add(&x(2, 1).scale(&Q::from(-1))).unwrap();
        let prod = diff.concat(&x(2, 0)).unwrap();
        assert_eq!(prod.coeff(&w(&[0, 0])), Q::from(1));
        assert_eq!(prod.coeff(&w(&[1, 0])), Q::from(-1));
        assert!(x(2, 0).concat(&x(3, 0)).is_err());
    }

    #[test]
    fn pairing_is_diagonal() {
        let a = Tensor::<Q>::word(2, w(&[0, 1])).unwrap();
        let b = Tensor::<Q>::word(2, w(&[1, 0])).unwrap();
        assert_eq!(a.pair(&a).unwrap(), Q::from(1));
        assert_eq!(a.pair(&b).unwrap(), Q::from(0));
        assert!(a.pair(&x(2, 0)).is_err());
    }

    #[test]
    fn antisymmetric_pairs_trivially_with_symmetric() {
        let n = 3;
        let anti = Tensor::<Q>::from_terms(n, 2, [(w(&[0, 2]), Q::from(1)), (w(&[2, 0]), Q::from(-1))]).unwrap();
        let sym = Tensor::<Q>::from_terms(
            n,
            2,
            [(w(&[0, 2]), Q::from(5)), (w(&[2, 0]), Q::from(5)), (w(&[1, 1]), Q::from(7))],
        )
        .unwrap();
        assert_eq!(anti.pair(&sym).unwrap(), Q::from(0));
    }

    #[test]
    fn shuffle_index_convention() {
        // N = 1: x^1 paired with x_2 gives z_2^1 = flat index 1*2 + 0
        let xi = x(2, 0);
        let v = x(2, 1);
        assert_eq!(xi.shuffle_pairs(&v).unwrap(), Tensor::word(4, w(&[2])).unwrap());
        // N = 2: (x^1 x^2) with (x_1 x_2) gives (z_1^1, z_2^2)
        let xi = Tensor::<Q>::word(2, w(&[0, 1])).unwrap();
        let v = Tensor::<Q>::word(2, w(&[0, 1])).unwrap();
        assert_eq!(xi.shuffle_pairs(&v).unwrap(), Tensor::word(4, w(&[0, 3])).unwrap());
    }

    #[test]
    fn word_index_round_trip() {
        for (i, word) in all_words(3, 3).enumerate() {
            assert_eq!(word.index(3), i);
        }
        assert_eq!(Word::from_index(5, 2, 3), w(&[1, 0, 1]));
    }

    #[test]
    fn tensor_json() {
        let t = Tensor::<Q>::from_terms(2, 2, [(w(&[0, 1]), Q::from(1)), (w(&[1, 0]), Q::from(-1))]).unwrap();
        let js = serde_json::to_value(&t).unwrap();
        assert_eq!(
            js.to_string(),
            r#"{"grade":2,"terms":[{"coeff":"1","word":[0,1]},{"coeff":"-1","word":[1,0]}]}"#
        );
        assert_eq!(Tensor::from_json_value(2, &js).unwrap(), t);
        assert!(Tensor::from_json_value(1, &js).is_err());
    }
}
