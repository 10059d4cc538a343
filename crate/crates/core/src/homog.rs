//! N-homogeneous algebras `A = T(V)/(R)`.
//!
//! Each graded component is computed by exact linear algebra: the ideal
//! component `I_d` is the span of `V⊗I_{d-1}` and `R⊗V^{⊗(d-N)}`, kept in
//! reduced row echelon form over the word basis of `V^{⊗d}`. The normal basis
//! of `A_d` is the set of non-pivot words, and reduction of a word is a
//! single row lookup.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freealg::{tensor_dim, Tensor, Word};
use crate::linalg::{Accumulator, Echelon, SparseVec, Subspace};
use crate::scalar::{Field, Rational};
use crate::series::{CoeffRing, UniSeries};

/// Largest tensor power the engine will materialize.
pub const MAX_ENGINE_AMBIENT: usize = 1 << 27;

/// Generators `x_1..x_n`, relation degree `N`, relations spanning `R ⊆ V^{⊗N}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraPresentation<F: Field> {
    pub label: String,
    pub n: usize,
    pub degree: usize,
    pub relations: Vec<Tensor<F>>,
}

impl<F: Field> AlgebraPresentation<F> {
    pub fn new(label: impl Into<String>, n: usize, degree: usize, relations: Vec<Tensor<F>>) -> Result<Self> {
        if degree < 2 {
            return Err(Error::InvalidRelationDegree(degree));
        }
        for r in &relations {
            if r.n() != n {
                return Err(Error::AlphabetMismatch { left: n, right: r.n() });
            }
            if r.grade() != degree {
                return Err(Error::GradeMismatch { left: degree, right: r.grade() });
            }
        }
        Ok(AlgebraPresentation { label: label.into(), n, degree, relations })
    }

    /// `span(R)` in reduced row echelon form.
    pub fn relation_space(&self) -> Subspace<F> {
        let ambient = tensor_dim(self.n, self.degree).expect("relation space fits");
        Subspace::span(ambient, self.relations.iter().map(Tensor::to_sparse))
    }

    /// Presentation of `A^! = T(V*)/(R^⊥)`: relations are the echelon basis of
    /// the annihilator of `R`.
    pub fn dual(&self) -> Self {
        let perp = self.relation_space().orthogonal_complement();
        let relations = perp.basis().iter().map(|v| Tensor::from_sparse(self.n, self.degree, v)).collect();
        AlgebraPresentation { label: format!("{}^!", self.label), n: self.n, degree: self.degree, relations }
    }
}

#[derive(Serialize, Deserialize)]
struct PresentationJson {
    label: String,
    n: usize,
    #[serde(rename = "N")]
    degree: usize,
    relations: Vec<serde_json::Value>,
}

impl<F: Field + Serialize> Serialize for AlgebraPresentation<F> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::Error as _;
        let relations = self
            .relations
            .iter()
            .map(serde_json::to_value)
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(S::Error::custom)?;
        PresentationJson { label: self.label.clone(), n: self.n, degree: self.degree, relations }.serialize(s)
    }
}

impl AlgebraPresentation<Rational> {
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: PresentationJson = serde_json::from_str(text)?;
        let relations =
            raw.relations.iter().map(|v| Tensor::from_json_value(raw.n, v)).collect::<Result<Vec<_>>>()?;
        Self::new(raw.label, raw.n, raw.degree, relations)
    }
}

/// One graded component: the ideal `I_d` and the normal basis of `A_d`.
#[derive(Debug)]
pub struct Component<F: Field> {
    degree: usize,
    ideal: Subspace<F>,
    normal: Vec<usize>,
    position: Vec<u32>,
}

const NOT_NORMAL: u32 = u32::MAX;

impl<F: Field> Component<F> {
    fn new(degree: usize, ideal: Subspace<F>) -> Self {
        let normal = ideal.free_columns();
        let mut position = vec![NOT_NORMAL; ideal.ambient()];
        for (i, &w) in normal.iter().enumerate() {
            position[w] = i as u32;
        }
        Component { degree, ideal, normal, position }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn ideal(&self) -> &Subspace<F> {
        &self.ideal
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    /// Word indices of the normal basis, increasing.
    pub fn normal_indices(&self) -> &[usize] {
        &self.normal
    }

    pub fn normal_position(&self, word_index: usize) -> Option<usize> {
        match self.position[word_index] {
            NOT_NORMAL => None,
            p => Some(p as usize),
        }
    }

    /// Adds `coeff · [word]` in normal coordinates to `acc`.
    pub fn reduce_word_into(&self, word_index: usize, coeff: &F, acc: &mut Accumulator<F>) {
        if coeff.is_zero() {
            return;
        }
        match self.position[word_index] {
            NOT_NORMAL => {
                let row = self.ideal.pivot_row(word_index).expect("non-normal words are pivots");
                for (col, x) in row.iter().skip(1) {
                    acc.add(self.position[col] as usize, &-(x.clone() * coeff));
                }
            }
            p => acc.add(p as usize, coeff),
        }
    }

    pub fn reduce(&self, v: &SparseVec<F>) -> SparseVec<F> {
        let mut acc = Accumulator::new();
        for (w, c) in v.iter() {
            self.reduce_word_into(w, c, &mut acc);
        }
        acc.finish()
    }
}

static NEXT_ID: AtomicU64 = AtomicU64::new(0);

/// Element of `A_d` in coordinates over the normal basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AlgebraClass<F: Field> {
    algebra: u64,
    degree: usize,
    coords: SparseVec<F>,
}

impl<F: Field> AlgebraClass<F> {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coords(&self) -> &SparseVec<F> {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_zero()
    }
}

/// An N-homogeneous algebra with its lazily populated graded cache.
///
/// The cache is filled degree by degree under a lock (single writer);
/// finished components are shared read-only.
#[derive(Debug)]
pub struct Algebra<F: Field> {
    id: u64,
    presentation: AlgebraPresentation<F>,
    relation_space: Subspace<F>,
    cache: Mutex<Vec<Arc<Component<F>>>>,
}

impl<F: Field> Algebra<F> {
    pub fn new(presentation: AlgebraPresentation<F>) -> Self {
        let relation_space = presentation.relation_space();
        Algebra {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            presentation,
            relation_space,
            cache: Mutex::new(Vec::new()),
        }
    }

    pub fn presentation(&self) -> &AlgebraPresentation<F> {
        &self.presentation
    }

    pub fn n(&self) -> usize {
        self.presentation.n
    }

    /// The relation degree `N`.
    pub fn relation_degree(&self) -> usize {
        self.presentation.degree
    }

    pub fn label(&self) -> &str {
        &self.presentation.label
    }

    pub fn relation_space(&self) -> &Subspace<F> {
        &self.relation_space
    }

    /// `dim V^{⊗d}`, or an error above [`MAX_ENGINE_AMBIENT`].
    pub fn ambient(&self, d: usize) -> Result<usize> {
        match tensor_dim(self.n(), d) {
            Some(a) if a <= MAX_ENGINE_AMBIENT => Ok(a),
            _ => Err(Error::TooLarge {
                ambient: (self.n() as u128).saturating_pow(d as u32),
                limit: MAX_ENGINE_AMBIENT as u128,
            }),
        }
    }

    pub fn component(&self, d: usize) -> Result<Arc<Component<F>>> {
        let mut cache = self.cache.lock().expect("cache lock");
        while cache.len() <= d {
            let next = cache.len();
            let ideal = self.build_ideal(next, cache.last().map(|c| &c.ideal))?;
            cache.push(Arc::new(Component::new(next, ideal)));
        }
        Ok(cache[d].clone())
    }

    fn build_ideal(&self, d: usize, previous: Option<&Subspace<F>>) -> Result<Subspace<F>> {
        let ambient = self.ambient(d)?;
        let big_n = self.relation_degree();
        if d < big_n || self.n() == 0 {
            return Ok(Subspace::zero(ambient));
        }
        if d == big_n {
            return Ok(self.relation_space.clone());
        }
        let n = self.n();
        let prev = previous.expect("components are built in order");
        let block = ambient / n;
        let mut e = Echelon::new(ambient);
        // V ⊗ I_{d-1}: already echelon with distinct pivots
        for a in 0..n {
            for row in prev.basis() {
                e.insert(row.shifted(a * block));
            }
        }
        // R ⊗ V^{⊗(d-N)}
        let tail = tensor_dim(n, d - big_n).expect("fits");
        for r in self.relation_space.basis() {
            for w in 0..tail {
                e.insert(r.remap_monotone(|c| c * tail + w));
            }
        }
        Ok(e.into_subspace())
    }

    /// `Σ_{i+N+j=d} V^{⊗i}⊗R⊗V^{⊗j}` spanned window by window; independent
    /// of the recursive construction.
    pub fn ideal_component_bruteforce(&self, d: usize) -> Result<Subspace<F>> {
        let ambient = self.ambient(d)?;
        let n = self.n();
        let big_n = self.relation_degree();
        let mut vectors = Vec::new();
        if d >= big_n {
            for i in 0..=d - big_n {
                let j = d - big_n - i;
                let left = tensor_dim(n, i).expect("fits");
                let right = tensor_dim(n, j).expect("fits");
                let mid = tensor_dim(n, big_n).expect("fits");
                for r in self.relation_space.basis() {
                    for a in 0..left {
                        for b in 0..right {
                            vectors.push(r.remap_monotone(|c| (a * mid + c) * right + b));
                        }
                    }
                }
            }
        }
        Ok(Subspace::span(ambient, vectors))
    }

    pub fn ideal_component(&self, d: usize) -> Result<Subspace<F>> {
        Ok(self.component(d)?.ideal.clone())
    }

    pub fn dim_component(&self, d: usize) -> Result<usize> {
        Ok(self.component(d)?.dim())
    }

    /// `H_A(t)` truncated at `max_degree`.
    pub fn hilbert_series(&self, max_degree: usize) -> Result<UniSeries<BigInt>> {
        let dims = (0..=max_degree).map(|d| self.dim_component(d).map(BigInt::from)).collect::<Result<_>>()?;
        Ok(UniSeries::new(dims))
    }

    pub fn normal_basis(&self, d: usize) -> Result<Vec<Word>> {
        let c = self.component(d)?;
        Ok(c.normal.iter().map(|&i| Word::from_index(i, self.n(), d)).collect())
    }

    fn class(&self, degree: usize, coords: SparseVec<F>) -> AlgebraClass<F> {
        AlgebraClass { algebra: self.id, degree, coords }
    }

    pub fn unit(&self) -> AlgebraClass<F> {
        self.class(0, SparseVec::unit(0))
    }

    pub fn zero_class(&self, degree: usize) -> AlgebraClass<F> {
        self.class(degree, SparseVec::zero())
    }

    /// Class with the given normal coordinates.
    pub fn class_from_coords(&self, degree: usize, coords: SparseVec<F>) -> Result<AlgebraClass<F>> {
        let dim = self.dim_component(degree)?;
        if let Some(c) = coords.max_col() {
            if c >= dim {
                return Err(Error::DimensionMismatch { left: dim, right: c + 1 });
            }
        }
        Ok(self.class(degree, coords))
    }

    /// Projection `T(V)_d → A_d`.
    pub fn reduce(&self, t: &Tensor<F>) -> Result<AlgebraClass<F>> {
        if t.n() != self.n() {
            return Err(Error::AlphabetMismatch { left: self.n(), right: t.n() });
        }
        let comp = self.component(t.grade())?;
        Ok(self.class(t.grade(), comp.reduce(&t.to_sparse())))
    }

    /// Reduction of a vector of `V^{⊗d}` given in word coordinates.
    pub fn reduce_vec(&self, degree: usize, v: &SparseVec<F>) -> Result<AlgebraClass<F>> {
        let comp = self.component(degree)?;
        Ok(self.class(degree, comp.reduce(v)))
    }

    pub fn class_of_word(&self, w: &Word) -> Result<AlgebraClass<F>> {
        w.check(self.n())?;
        let comp = self.component(w.grade())?;
        let mut acc = Accumulator::new();
        comp.reduce_word_into(w.index(self.n()), &F::one(), &mut acc);
        Ok(self.class(w.grade(), acc.finish()))
    }

    /// Representative tensor supported on normal words.
    pub fn representative(&self, a: &AlgebraClass<F>) -> Result<Tensor<F>> {
        self.check(a)?;
        let comp = self.component(a.degree)?;
        let v = SparseVec::from_pairs(a.coords.iter().map(|(p, c)| (comp.normal[p], c.clone())));
        Ok(Tensor::from_sparse(self.n(), a.degree, &v))
    }

    fn check(&self, a: &AlgebraClass<F>) -> Result<()> {
        if a.algebra != self.id {
            return Err(Error::AlgebraMismatch);
        }
        Ok(())
    }

    pub fn add(&self, a: &AlgebraClass<F>, b: &AlgebraClass<F>) -> Result<AlgebraClass<F>> {
        self.check(a)?;
        self.check(b)?;
        if a.degree != b.degree {
            return Err(Error::GradeMismatch { left: a.degree, right: b.degree });
        }
        Ok(self.class(a.degree, a.coords.add(&b.coords)))
    }

    pub fn scale(&self, a: &AlgebraClass<F>, s: &F) -> AlgebraClass<F> {
        self.class(a.degree, a.coords.scale(s))
    }

    pub fn multiply(&self, a: &AlgebraClass<F>, b: &AlgebraClass<F>) -> Result<AlgebraClass<F>> {
        self.check(a)?;
        self.check(b)?;
        let (ca, cb) = (self.component(a.degree)?, self.component(b.degree)?);
        let target = self.component(a.degree + b.degree)?;
        let shift = tensor_dim(self.n(), b.degree).expect("fits");
        let mut acc = Accumulator::new();
        for (p, x) in a.coords.iter() {
            let left = ca.normal[p] * shift;
            for (q, y) in b.coords.iter() {
                target.reduce_word_into(left + cb.normal[q], &(x.clone() * y), &mut acc);
            }
        }
        Ok(self.class(a.degree + b.degree, acc.finish()))
    }

    /// Presentation of the dual algebra `A^!`.
    pub fn dual(&self) -> AlgebraPresentation<F> {
        self.presentation.dual()
    }
}

/// The graded algebra as a coefficient ring for [`UniSeries`]: the
/// coefficient of `t^d` lives in `A_d`.
#[derive(Clone, Copy, Debug)]
pub struct GradedRing<'a, F: Field>(pub &'a Algebra<F>);

impl<F: Field> CoeffRing for GradedRing<'_, F> {
    type Elem = AlgebraClass<F>;

    fn zero_at(&self, degree: usize) -> AlgebraClass<F> {
        self.0.zero_class(degree)
    }
    fn one(&self) -> AlgebraClass<F> {
        self.0.unit()
    }
    fn add(&self, a: &AlgebraClass<F>, b: &AlgebraClass<F>) -> AlgebraClass<F> {
        self.0.add(a, b).expect("same algebra and degree")
    }
    fn neg(&self, a: &AlgebraClass<F>) -> AlgebraClass<F> {
        self.0.scale(a, &-F::one())
    }
    fn mul(&self, a: &AlgebraClass<F>, b: &AlgebraClass<F>) -> AlgebraClass<F> {
        self.0.multiply(a, b).expect("component fits in memory")
    }
    fn is_zero(&self, a: &AlgebraClass<F>) -> bool {
        a.is_zero()
    }
    fn unit_inverse(&self, a: &AlgebraClass<F>) -> Option<AlgebraClass<F>> {
        if a.degree != 0 {
            return None;
        }
        let c = a.coords.get(0).inv()?;
        Some(self.0.class(0, SparseVec::from_pairs([(0, c)])))
    }
}
