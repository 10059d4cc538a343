//! Exact sparse linear algebra: echelon forms, rank, kernels, subspace sums
//! and intersections, coordinates.
//!
//! Vectors are sparse rows sorted by column. Pivots are always the leftmost
//! nonzero column, normalized to 1; a [`Subspace`] stores the reduced row
//! echelon basis, which is unique, so two subspaces are equal iff their
//! stored bases are identical.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::scalar::Field;

/// Sparse vector: `(column, value)` pairs, strictly increasing columns, no
/// stored zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SparseVec<F: Field> {
    entries: Vec<(usize, F)>,
}

impl<F: Field> Default for SparseVec<F> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<F: Field> SparseVec<F> {
    pub fn zero() -> Self {
        SparseVec { entries: Vec::new() }
    }

    pub fn unit(col: usize) -> Self {
        SparseVec { entries: vec![(col, F::one())] }
    }

    /// Builds from arbitrary `(column, value)` pairs, summing duplicates.
    pub fn from_pairs<I: IntoIterator<Item = (usize, F)>>(pairs: I) -> Self {
        let mut acc = Accumulator::new();
        for (c, v) in pairs {
            acc.add(c, &v);
        }
        acc.finish()
    }

    pub fn from_dense(values: &[F]) -> Self {
        SparseVec {
            entries: values
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| (i, v.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self, len: usize) -> Vec<F> {
        let mut out = vec![F::zero(); len];
        for (c, v) in &self.entries {
            out[*c] = v.clone();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &F)> {
        self.entries.iter().map(|(c, v)| (*c, v))
    }

    pub fn leading(&self) -> Option<(usize, &F)> {
        self.entries.first().map(|(c, v)| (*c, v))
    }

    pub fn max_col(&self) -> Option<usize> {
        self.entries.last().map(|(c, _)| *c)
    }

    pub fn get(&self, col: usize) -> F {
        match self.entries.binary_search_by_key(&col, |(c, _)| *c) {
            Ok(i) => self.entries[i].1.clone(),
            Err(_) => F::zero(),
        }
    }

    pub fn scale(&self, s: &F) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        SparseVec {
            entries: self.entries.iter().map(|(c, v)| (*c, v.clone() * s)).collect(),
        }
    }

    /// `self + s * other`.
    pub fn axpy(&self, s: &F, other: &Self) -> Self {
        if s.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.entries, &other.entries);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push((b[j].0, b[j].1.clone() * s));
                j += 1;
            } else {
                let v = a[i].1.clone() + &(b[j].1.clone() * s);
                if !v.is_zero() {
                    out.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
        SparseVec { entries: out }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.axpy(&F::one(), other)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.axpy(&-F::one(), other)
    }

    /// Shifts every column by `offset`.
    pub fn shifted(&self, offset: usize) -> Self {
        SparseVec {
            entries: self.entries.iter().map(|(c, v)| (c + offset, v.clone())).collect(),
        }
    }

    /// Maps columns through `f`, which must be strictly increasing on the support.
    pub fn remap_monotone(&self, f: impl Fn(usize) -> usize) -> Self {
        SparseVec {
            entries: self.entries.iter().map(|(c, v)| (f(*c), v.clone())).collect(),
        }
    }

    pub fn dot(&self, other: &Self) -> F {
        let mut acc = F::zero();
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.entries, &other.entries);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc += &(a[i].1.clone() * &b[j].1);
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    }
}

/// Hash-based accumulator for building sparse vectors term by term.
#[derive(Debug)]
pub struct Accumulator<F: Field> {
    map: HashMap<usize, F>,
}

impl<F: Field> Default for Accumulator<F> {
    fn default() -> Self {
        Self::new()
    }
}

impl<F: Field> Accumulator<F> {
    pub fn new() -> Self {
        Accumulator { map: HashMap::new() }
    }

    pub fn add(&mut self, col: usize, v: &F) {
        if v.is_zero() {
            return;
        }
        *self.map.entry(col).or_insert_with(F::zero) += v;
    }

    pub fn add_scaled(&mut self, s: &F, vec: &SparseVec<F>) {
        if s.is_zero() {
            return;
        }
        for (c, v) in vec.iter() {
            self.add(c, &(v.clone() * s));
        }
    }

    pub fn finish(self) -> SparseVec<F> {
        let mut entries: Vec<(usize, F)> = self.map.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        entries.sort_unstable_by_key(|(c, _)| *c);
        SparseVec { entries }
    }
}

/// Sparse row-major matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix<F: Field> {
    rows: usize,
    cols: usize,
    data: Vec<SparseVec<F>>,
}

impl<F: Field> Matrix<F> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![SparseVec::zero(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        Matrix { rows: n, cols: n, data: (0..n).map(SparseVec::unit).collect() }
    }

    pub fn from_rows(cols: usize, data: Vec<SparseVec<F>>) -> Self {
        debug_assert!(data.iter().all(|r| r.max_col().is_none_or(|c| c < cols)));
        Matrix { rows: data.len(), cols, data }
    }

    /// Builds the matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(rows: usize, columns: &[SparseVec<F>]) -> Self {
        let mut data: Vec<Vec<(usize, F)>> = vec![Vec::new(); rows];
        for (j, col) in columns.iter().enumerate() {
            for (i, v) in col.iter() {
                data[i].push((j, v.clone()));
            }
        }
        Matrix {
            rows,
            cols: columns.len(),
            data: data.into_iter().map(|entries| SparseVec { entries }).collect(),
        }
    }

    pub fn from_dense(values: &[Vec<F>]) -> Self {
        let cols = values.first().map_or(0, Vec::len);
        assert!(values.iter().all(|r| r.len() == cols), "ragged matrix");
        Matrix { rows: values.len(), cols, data: values.iter().map(|r| SparseVec::from_dense(r)).collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &SparseVec<F> {
        &self.data[i]
    }

    pub fn row_vecs(&self) -> &[SparseVec<F>] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> F {
        self.data[i].get(j)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(SparseVec::is_zero)
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(SparseVec::len).sum()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_columns(self.cols, &self.data)
    }

    pub fn mul(&self, other: &Matrix<F>) -> Result<Matrix<F>> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { left: self.cols, right: other.rows });
        }
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut acc = Accumulator::new();
                for (k, v) in row.iter() {
                    acc.add_scaled(v, &other.data[k]);
                }
                acc.finish()
            })
            .collect();
        Ok(Matrix { rows: self.rows, cols: other.cols, data })
    }

    pub fn mul_vec(&self, v: &SparseVec<F>) -> SparseVec<F> {
        SparseVec::from_pairs(self.data.iter().enumerate().map(|(i, row)| (i, row.dot(v))))
    }

    pub fn rank(&self) -> usize {
        rank_of(&self.data)
    }
}

/// Incremental row echelon builder (leftmost pivots, normalized to 1).
#[derive(Clone, Debug)]
pub struct Echelon<F: Field> {
    ambient: usize,
    rows: HashMap<usize, SparseVec<F>>,
}

impl<F: Field> Echelon<F> {
    pub fn new(ambient: usize) -> Self {
        Echelon { ambient, rows: HashMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the stored rows until its leading column is free.
    fn reduce_leading(&self, mut v: SparseVec<F>) -> SparseVec<F> {
        while let Some((c, coef)) = v.leading() {
            match self.rows.get(&c) {
                Some(row) => v = v.axpy(&-coef.clone(), row),
                None => break,
            }
        }
        v
    }

    /// Inserts `v`; returns whether it was independent of the current rows.
    pub fn insert(&mut self, v: SparseVec<F>) -> bool {
        debug_assert!(v.max_col().is_none_or(|c| c < self.ambient));
        if v.is_zero() {
            return false;
        }
        let r = self.reduce_leading(v);
        match r.leading() {
            None => false,
            Some((c, lead)) => {
                let inv = lead.inv().expect("nonzero pivot");
                let r = r.scale(&inv);
                self.rows.insert(c, r);
                true
            }
        }
    }

    /// Back-substitutes to the reduced row echelon form.
    pub fn into_subspace(self) -> Subspace<F> {
        let mut pivots: Vec<usize> = self.rows.keys().copied().collect();
        pivots.sort_unstable();
        let mut reduced: HashMap<usize, SparseVec<F>> = HashMap::with_capacity(pivots.len());
        for &p in pivots.iter().rev() {
            let row = &self.rows[&p];
            let mut acc = Accumulator::new();
            let mut touched = false;
            for (c, v) in row.iter() {
                if c != p {
                    if let Some(other) = reduced.get(&c) {
                        acc.add_scaled(&-v.clone(), other);
                        touched = true;
                    }
                }
            }
            let new_row = if touched { row.add(&acc.finish()) } else { row.clone() };
            reduced.insert(p, new_row);
        }
        let rows = pivots.iter().map(|p| reduced.remove(p).expect("row")).collect();
        Subspace { ambient: self.ambient, rows, pivots }
    }
}

/// Rank of a family of vectors.
pub fn rank_of<F: Field>(vectors: &[SparseVec<F>]) -> usize {
    let ambient = vectors.iter().filter_map(SparseVec::max_col).max().map_or(0, |c| c + 1);
    let mut e = Echelon::new(ambient);
    for v in vectors {
        e.insert(v.clone());
    }
    e.rank()
}

/// Subspace of `F^ambient` stored by its reduced row echelon basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace<F: Field> {
    ambient: usize,
    rows: Vec<SparseVec<F>>,
    pivots: Vec<usize>,
}

impl<F: Field> Subspace<F> {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace { ambient, rows: (0..ambient).map(SparseVec::unit).collect(), pivots: (0..ambient).collect() }
    }

    pub fn span<I: IntoIterator<Item = SparseVec<F>>>(ambient: usize, vectors: I) -> Self {
        let mut e = Echelon::new(ambient);
        for v in vectors {
            e.insert(v);
        }
        e.into_subspace()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[SparseVec<F>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Row whose pivot is `col`, if any.
    pub fn pivot_row(&self, col: usize) -> Option<&SparseVec<F>> {
        self.pivots.binary_search(&col).ok().map(|i| &self.rows[i])
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivots.binary_search(&col).is_ok()
    }

    /// Columns that are not pivots, increasing.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.ambient - self.pivots.len());
        let mut p = self.pivots.iter().peekable();
        for c in 0..self.ambient {
            if p.peek() == Some(&&c) {
                p.next();
            } else {
                out.push(c);
            }
        }
        out
    }

    /// Checks the reduced row echelon invariants.
    pub fn is_rref(&self) -> bool {
        self.rows.len() == self.pivots.len()
            && self.pivots.windows(2).all(|w| w[0] < w[1])
            && self.rows.iter().zip(&self.pivots).all(|(r, &p)| {
                r.leading().is_some_and(|(c, v)| c == p && v.is_one())
                    && r.iter().all(|(c, _)| c == p || !self.is_pivot(c))
            })
    }

    fn pivot_coords(&self, v: &SparseVec<F>) -> Vec<F> {
        self.pivots.iter().map(|&p| v.get(p)).collect()
    }

    /// `v` minus its projection along the pivot coordinates.
    pub fn residual(&self, v: &SparseVec<F>) -> SparseVec<F> {
        let mut acc = Accumulator::new();
        for (i, c) in self.pivot_coords(v).iter().enumerate() {
            if !c.is_zero() {
                acc.add_scaled(&-c.clone(), &self.rows[i]);
            }
        }
        v.add(&acc.finish())
    }

    pub fn contains(&self, v: &SparseVec<F>) -> Result<bool> {
        self.check_vec(v)?;
        Ok(self.residual(v).is_zero())
    }

    /// Coefficients `c` with `Σ c_i basis_i = v`.
    pub fn coordinates(&self, v: &SparseVec<F>) -> Result<Vec<F>> {
        self.check_vec(v)?;
        if !self.residual(v).is_zero() {
            return Err(Error::NotInSubspace);
        }
        Ok(self.pivot_coords(v))
    }

    fn check_vec(&self, v: &SparseVec<F>) -> Result<()> {
        match v.max_col() {
            Some(c) if c >= self.ambient => Err(Error::DimensionMismatch { left: self.ambient, right: c + 1 }),
            _ => Ok(()),
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch { left: self.ambient, right: other.ambient });
        }
        Ok(())
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut e = Echelon::new(self.ambient);
        for r in self.rows.iter().chain(&other.rows) {
            e.insert(r.clone());
        }
        Ok(e.into_subspace())
    }

    /// Zassenhaus intersection.
    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let a = self.ambient;
        let mut e = Echelon::new(2 * a);
        for r in &self.rows {
            e.insert(r.add(&r.shifted(a)));
        }
        for r in &other.rows {
            e.insert(r.clone());
        }
        let rows = e.rows.into_iter().filter(|(p, _)| *p >= a).map(|(_, r)| r.remap_monotone(|c| c - a));
        Ok(Subspace::span(a, rows))
    }

    pub fn is_subspace_of(&self, other: &Self) -> Result<bool> {
        self.check_same(other)?;
        for r in &self.rows {
            if !other.contains(r)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Annihilator under the standard (identity Gram) pairing.
    pub fn orthogonal_complement(&self) -> Self {
        let mut vectors = Vec::with_capacity(self.ambient - self.dim());
        for f in self.free_columns() {
            let mut entries: Vec<(usize, F)> = self
                .rows
                .iter()
                .zip(&self.pivots)
                .filter_map(|(r, &p)| {
                    let v = r.get(f);
                    (!v.is_zero()).then(|| (p, -v))
                })
                .collect();
            entries.push((f, F::one()));
            entries.sort_unstable_by_key(|(c, _)| *c);
            vectors.push(SparseVec { entries });
        }
        Subspace::span(self.ambient, vectors)
    }
}

/// Reduced row echelon form of the row space of `m`, with the rank.
pub fn rref<F: Field>(m: &Matrix<F>) -> (Subspace<F>, usize) {
    let s = Subspace::span(m.cols(), m.row_vecs().iter().cloned());
    let r = s.dim();
    (s, r)
}

/// Null space `{v : M v = 0}`.
pub fn kernel<F: Field>(m: &Matrix<F>) -> Subspace<F> {
    rref(m).0.orthogonal_complement()
}

/// Expresses vectors in an arbitrary (independent) basis.
#[derive(Clone, Debug)]
pub struct BasisSolver<F: Field> {
    ambient: usize,
    size: usize,
    augmented: Subspace<F>,
}

impl<F: Field> BasisSolver<F> {
    /// Fails with [`Error::NotInSubspace`] if the vectors are dependent.
    pub fn new(ambient: usize, basis: &[SparseVec<F>]) -> Result<Self> {
        let size = basis.len();
        let mut e = Echelon::new(ambient + size);
        for (i, b) in basis.iter().enumerate() {
            let mut v = b.clone();
            v.entries.push((ambient + i, F::one()));
            e.insert(v);
        }
        let augmented = e.into_subspace();
        if augmented.pivots.last().is_some_and(|&p| p >= ambient) {
            return Err(Error::NotInSubspace);
        }
        Ok(BasisSolver { ambient, size, augmented })
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn coordinates(&self, v: &SparseVec<F>) -> Result<Vec<F>> {
        let mut left = Accumulator::new();
        let mut right = Accumulator::new();
        for (row, &p) in self.augmented.rows.iter().zip(&self.augmented.pivots) {
            let c = v.get(p);
            if c.is_zero() {
                continue;
            }
            for (col, x) in row.iter() {
                let t = x.clone() * &c;
                if col < self.ambient {
                    left.add(col, &t);
                } else {
                    right.add(col - self.ambient, &t);
                }
            }
        }
        if v.sub(&left.finish()).is_zero() {
            // row = b_i-combination on the left, e-combination on the right:
            // Σ c_r (left_r) = v and left_r = Σ right_r[i] b_i
            Ok(right.finish().to_dense(self.size))
        } else {
            Err(Error::NotInSubspace)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    type Q = Rational;

    fn q(v: i64) -> Q {
        Q::from(v)
    }

    fn dense(rows: &[&[i64]]) -> Matrix<Q> {
        Matrix::from_dense(&rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect::<Vec<_>>())
    }

    fn v(vals: &[i64]) -> SparseVec<Q> {
        SparseVec::from_dense(&vals.iter().map(|&x| q(x)).collect::<Vec<_>>())
    }

    #[test]
    fn rref_proportional_rows() {
        let (s, r) = rref(&dense(&[&[2, 4], &[1, 2]]));
        assert_eq!(r, 1);
        assert_eq!(s.basis(), &[v(&[1, 2])]);
    }

    #[test]
    fn rref_zero_and_identity() {
        let (s, r) = rref(&Matrix::<Q>::zero(3, 4));
        assert_eq!((s.dim(), r), (0, 0));
        let (s, r) = rref(&Matrix::<Q>::identity(3));
        assert_eq!(r, 3);
        assert_eq!(s, Subspace::full(3));
    }

    #[test]
    fn rref_is_reduced() {
        let (s, _) = rref(&dense(&[&[0, 1, 2, 3], &[1, 1, 1, 1], &[1, 2, 3, 5]]));
        assert!(s.is_rref());
        assert_eq!(s.basis(), &[v(&[1, 0, -1, 0]), v(&[0, 1, 2, 0]), v(&[0, 0, 0, 1])]);
    }

    #[test]
    fn kernel_examples() {
        let k = kernel(&dense(&[&[1, 1]]));
        assert_eq!(k.dim(), 1);
        assert_eq!(k.basis(), &[v(&[1, -1])]);
        assert_eq!(kernel(&dense(&[&[1, 2], &[3, 4]])).dim(), 0);
    }

    #[test]
    fn sum_and_intersection() {
        let u = Subspace::span(2, [v(&[1, 0])]);
        let w = Subspace::span(2, [v(&[0, 1])]);
        assert_eq!(u.sum(&w).unwrap().dim(), 2);
        assert_eq!(u.intersect(&w).unwrap().dim(), 0);
        assert_eq!(u.sum(&u).unwrap(), u);
        assert_eq!(u.intersect(&u).unwrap(), u);
        assert!(u.sum(&Subspace::zero(3)).is_err());
    }

    #[test]
    fn coordinates_and_membership() {
        let u = Subspace::span(3, [v(&[1, 1, 0]), v(&[0, 1, 1])]);
        let c = u.coordinates(&v(&[2, 5, 3])).unwrap();
        let rebuilt = u.basis().iter().zip(&c).fold(SparseVec::zero(), |acc, (b, x)| acc.axpy(x, b));
        assert_eq!(rebuilt, v(&[2, 5, 3]));
        assert_eq!(u.coordinates(&v(&[1, 0, 0])), Err(Error::NotInSubspace));
        assert!(!u.contains(&v(&[1, 0, 0])).unwrap());
        assert!(u.contains(&v(&[0, 0, 0, 1])).is_err());
    }

    #[test]
    fn basis_solver_uses_given_basis() {
        let basis = [v(&[1, 1, 0]), v(&[0, 1, 1])];
        let s = BasisSolver::new(3, &basis).unwrap();
        assert_eq!(s.coordinates(&v(&[2, 5, 3])).unwrap(), vec![q(2), q(3)]);
        assert!(s.coordinates(&v(&[1, 0, 0])).is_err());
        assert!(BasisSolver::new(3, &[v(&[1, 1, 0]), v(&[2, 2, 0])]).is_err());
    }

    #[test]
    fn matrix_product() {
        let a = dense(&[&[1, 2], &[0, 1]]);
        let b = dense(&[&[1, -2], &[0, 1]]);
        assert_eq!(a.mul(&b).unwrap(), Matrix::identity(2));
        assert_eq!(a.transpose(), dense(&[&[1, 0], &[2, 1]]));
    }
}
