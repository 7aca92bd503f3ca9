//! Dense vectors, matrices and subspaces over a prime field.
//!
//! Entries are kept as canonical `u32` residues next to the owning [`Field`];
//! every elimination routine pivots on the first nonzero entry and assigns free
//! variables in column order, so results are reproducible bit for bit.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vector {
    field: Field,
    entries: Vec<u32>,
}

impl Vector {
    /// Builds a vector, reducing every entry modulo `q`.
    pub fn new(field: Field, entries: &[u64]) -> Self {
        let q = field.order() as u64;
        Vector {
            field,
            entries: entries.iter().map(|&v| (v % q) as u32).collect(),
        }
    }

    /// Entries must already be canonical.
    pub(crate) fn from_raw(field: Field, entries: Vec<u32>) -> Self {
        debug_assert!(entries.iter().all(|&v| v < field.order()));
        Vector { field, entries }
    }

    pub fn from_elems(field: Field, elems: &[Elem]) -> Result<Self> {
        let mut entries = Vec::with_capacity(elems.len());
        for e in elems {
            if e.field() != field {
                return Err(Error::FieldMismatch {
                    left: field.order(),
                    right: e.field().order(),
                });
            }
            entries.push(e.value());
        }
        Ok(Vector { field, entries })
    }

    pub fn zeros(field: Field, n: usize) -> Self {
        Vector {
            field,
            entries: vec![0; n],
        }
    }

    pub fn unit(field: Field, n: usize, i: usize) -> Self {
        let mut v = Self::zeros(field, n);
        v.entries[i] = 1;
        v
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> Elem {
        self.field.elem(self.entries[i] as u64)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&v| v == 0)
    }

    fn check(&self, other: &Vector, context: &'static str) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                left: self.field.order(),
                right: other.field.order(),
            });
        }
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                context,
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(())
    }

    pub fn dot(&self, other: &Vector) -> Result<Elem> {
        self.check(other, "dot product")?;
        let f = self.field;
        let mut acc = 0u32;
        for (&a, &b) in self.entries.iter().zip(&other.entries) {
            acc = f.add_raw(acc, f.mul_raw(a, b));
        }
        Ok(f.elem(acc as u64))
    }

    pub fn add(&self, other: &Vector) -> Result<Vector> {
        self.check(other, "vector sum")?;
        let f = self.field;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| f.add_raw(a, b))
            .collect();
        Ok(Vector::from_raw(f, entries))
    }

    pub fn scale(&self, c: Elem) -> Vector {
        let f = self.field;
        let entries = self
            .entries
            .iter()
            .map(|&a| f.mul_raw(a, c.value()))
            .collect();
        Vector::from_raw(f, entries)
    }

    /// Appends one coordinate.
    pub fn extended(&self, last: u32) -> Vector {
        let mut entries = self.entries.clone();
        entries.push(last % self.field.order());
        Vector::from_raw(self.field, entries)
    }

    /// The first `m` coordinates.
    pub fn truncated(&self, m: usize) -> Vector {
        Vector::from_raw(self.field, self.entries[..m].to_vec())
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds from nested rows, reducing modulo `q`.
    pub fn from_rows(field: Field, rows: &[Vec<u64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(field, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    context: "matrix row length",
                    expected: cols,
                    found: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                m.data[i * cols + j] = (v % field.order() as u64) as u32;
            }
        }
        Ok(m)
    }

    /// Like [`Matrix::from_rows`] but for an explicit shape, so empty
    /// dimensions survive.
    pub fn from_rows_shaped(field: Field, rows: usize, cols: usize, data: &[u64]) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                context: "matrix entry count",
                expected: rows * cols,
                found: data.len(),
            });
        }
        let q = field.order() as u64;
        Ok(Matrix {
            field,
            rows,
            cols,
            data: data.iter().map(|&v| (v % q) as u32).collect(),
        })
    }

    /// Stacks `vectors` as columns; every vector must have length `n`.
    pub fn from_columns(field: Field, n: usize, vectors: &[&Vector]) -> Result<Self> {
        let mut m = Self::zeros(field, n, vectors.len());
        for (j, v) in vectors.iter().enumerate() {
            if v.field != field {
                return Err(Error::FieldMismatch {
                    left: field.order(),
                    right: v.field.order(),
                });
            }
            if v.len() != n {
                return Err(Error::DimensionMismatch {
                    context: "matrix column",
                    expected: n,
                    found: v.len(),
                });
            }
            for i in 0..n {
                m.data[i * m.cols + j] = v.entries[i];
            }
        }
        Ok(m)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn raw(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.field.elem(self.raw(i, j) as u64)
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = (v % self.field.order() as u64) as u32;
    }

    pub fn row(&self, i: usize) -> Vector {
        Vector::from_raw(
            self.field,
            self.data[i * self.cols..(i + 1) * self.cols].to_vec(),
        )
    }

    pub fn column(&self, j: usize) -> Vector {
        Vector::from_raw(self.field, (0..self.rows).map(|i| self.raw(i, j)).collect())
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn row_values(&self) -> Vec<Vec<u32>> {
        (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.raw(i, j);
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                left: self.field.order(),
                right: other.field.order(),
            });
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                context: "matrix product",
                expected: self.cols,
                found: other.rows,
            });
        }
        let f = self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.raw(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = f.add_raw(out.data[idx], f.mul_raw(a, other.raw(k, j)));
                }
            }
        }
        Ok(out)
    }

    /// `M · v` for a column vector `v`.
    pub fn mul_vec(&self, v: &Vector) -> Result<Vector> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                context: "matrix-vector product",
                expected: self.cols,
                found: v.len(),
            });
        }
        let f = self.field;
        let entries = (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(0, |acc, j| {
                    f.add_raw(acc, f.mul_raw(self.raw(i, j), v.entries[j]))
                })
            })
            .collect();
        Ok(Vector::from_raw(f, entries))
    }

    /// `x · M` for a row vector `x`.
    pub fn vec_mul(&self, x: &Vector) -> Result<Vector> {
        if x.len() != self.rows {
            return Err(Error::DimensionMismatch {
                context: "vector-matrix product",
                expected: self.rows,
                found: x.len(),
            });
        }
        let f = self.field;
        let mut out = vec![0u32; self.cols];
        for i in 0..self.rows {
            let a = x.entries[i];
            if a == 0 {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = f.add_raw(*o, f.mul_raw(a, self.raw(i, j)));
            }
        }
        Ok(Vector::from_raw(f, out))
    }

    /// Keeps the first `m` rows.
    pub fn top_rows(&self, m: usize) -> Matrix {
        Matrix {
            field: self.field,
            rows: m,
            cols: self.cols,
            data: self.data[..m * self.cols].to_vec(),
        }
    }

    /// In-place reduced row echelon form. Returns the pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.raw(i, c) != 0) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = f.inv_raw(self.raw(r, c)).expect("pivot is nonzero");
            for j in c..self.cols {
                let idx = r * self.cols + j;
                self.data[idx] = f.mul_raw(self.data[idx], inv);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.raw(i, c);
                if factor == 0 {
                    continue;
                }
                for j in c..self.cols {
                    let sub = f.mul_raw(factor, self.raw(r, j));
                    let idx = i * self.cols + j;
                    self.data[idx] = f.sub_raw(self.data[idx], sub);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref_in_place().len()
    }

    pub fn invert(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                context: "inverse of non-square matrix",
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.data[i * 2 * n + j] = self.raw(i, j);
            }
            aug.data[i * 2 * n + n + i] = 1;
        }
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots.iter().take(n).any(|&p| p >= n) {
            return Err(Error::SingularMatrix);
        }
        let mut inv = Matrix::zeros(self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.data[i * n + j] = aug.raw(i, n + j);
            }
        }
        Ok(inv)
    }

    /// A nonzero `v` with `M v = 0`, or `None` when the columns are
    /// independent. The first free column gets 1, later free columns 0.
    pub fn nullspace_nonzero(&self) -> Option<Vector> {
        let mut r = self.clone();
        let pivots = r.rref_in_place();
        let free = (0..self.cols).find(|c| !pivots.contains(c))?;
        let f = self.field;
        let mut v = vec![0u32; self.cols];
        v[free] = 1;
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = f.neg_raw(r.raw(row, free));
        }
        Some(Vector::from_raw(f, v))
    }

    /// A basis of `{v : M v = 0}`, one vector per free column.
    pub fn nullspace_basis(&self) -> Vec<Vector> {
        let mut r = self.clone();
        let pivots = r.rref_in_place();
        let f = self.field;
        (0..self.cols)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut v = vec![0u32; self.cols];
                v[free] = 1;
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg_raw(r.raw(row, free));
                }
                Vector::from_raw(f, v)
            })
            .collect()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.raw(i, j).to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// A subspace of `F_q^n`, stored as a reduced row echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    field: Field,
    ambient: usize,
    basis: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: Field, ambient: usize) -> Self {
        Subspace {
            field,
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    /// Span of arbitrary (possibly dependent) vectors.
    pub fn span<'a, I>(field: Field, ambient: usize, vectors: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a Vector>,
    {
        let vs: Vec<&Vector> = vectors.into_iter().collect();
        if vs.is_empty() {
            return Ok(Self::zero(field, ambient));
        }
        let mut m = Matrix::from_columns(field, ambient, &vs)?.transpose();
        let pivots = m.rref_in_place();
        let basis = (0..pivots.len()).map(|i| m.row(i)).collect();
        Ok(Subspace {
            field,
            ambient,
            basis,
            pivots,
        })
    }

    pub fn full(field: Field, ambient: usize) -> Self {
        let basis: Vec<Vector> = (0..ambient)
            .map(|i| Vector::unit(field, ambient, i))
            .collect();
        Subspace {
            field,
            ambient,
            basis,
            pivots: (0..ambient).collect(),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if n != self.ambient {
            return Err(Error::DimensionMismatch {
                context: "subspace ambient dimension",
                expected: self.ambient,
                found: n,
            });
        }
        Ok(())
    }

    pub fn contains(&self, v: &Vector) -> Result<bool> {
        self.check_dim(v.len())?;
        Ok(self.contains_raw(v.entries()))
    }

    /// Membership test by reducing against the echelon basis.
    pub(crate) fn contains_raw(&self, v: &[u32]) -> bool {
        let f = self.field;
        let mut w = v.to_vec();
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            let c = w[p];
            if c == 0 {
                continue;
            }
            for (x, &y) in w[p..].iter_mut().zip(&b.entries[p..]) {
                *x = f.sub_raw(*x, f.mul_raw(c, y));
            }
        }
        w.iter().all(|&x| x == 0)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_dim(other.ambient)?;
        Subspace::span(
            self.field,
            self.ambient,
            self.basis.iter().chain(&other.basis),
        )
    }

    /// `dim(S ∩ T) = dim S + dim T - dim(S + T)`.
    pub fn intersection_dim(&self, other: &Subspace) -> Result<usize> {
        let s = self.sum(other)?;
        Ok(self.dim() + other.dim() - s.dim())
    }
}

/// How [`pick_vector_avoiding_with`] searches `F_q^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PickStrategy {
    /// Smallest vector in lexicographic order, first coordinate most
    /// significant.
    Lexicographic,
    /// Uniform sampling from a seeded generator; falls back to the
    /// lexicographic scan after a bounded number of draws.
    Seeded(u64),
}

/// The lexicographically smallest vector of `F_q^n` lying outside every
/// listed subspace. An empty list yields the zero vector.
pub fn pick_vector_avoiding(field: Field, n: usize, subspaces: &[Subspace]) -> Result<Vector> {
    pick_vector_avoiding_with(field, n, subspaces, PickStrategy::Lexicographic)
}

pub fn pick_vector_avoiding_with(
    field: Field,
    n: usize,
    subspaces: &[Subspace],
    strategy: PickStrategy,
) -> Result<Vector> {
    for s in subspaces {
        s.check_dim(n)?;
        if s.dim() == n {
            return Err(Error::SearchExhausted);
        }
    }
    let avoids = |v: &[u32]| subspaces.iter().all(|s| !s.contains_raw(v));

    if let PickStrategy::Seeded(seed) = strategy {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = field.order();
        let mut v = vec![0u32; n];
        for _ in 0..4096 {
            for x in v.iter_mut() {
                *x = rng.gen_range(0..q);
            }
            if avoids(&v) {
                return Ok(Vector::from_raw(field, v));
            }
        }
    }

    let q = field.order();
    let mut v = vec![0u32; n];
    loop {
        if avoids(&v) {
            return Ok(Vector::from_raw(field, v));
        }
        // Odometer increment, last coordinate least significant.
        let mut i = n;
        loop {
            if i == 0 {
                return Err(Error::SearchExhausted);
            }
            i -= 1;
            v[i] += 1;
            if v[i] < q {
                break;
            }
            v[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f5() -> Field {
        Field::new(5).unwrap()
    }

    fn vec5(e: &[u64]) -> Vector {
        Vector::new(f5(), e)
    }

    fn det(f: Field, m: &[Vec<u32>]) -> u32 {
        // Laplace expansion along the first row.
        let n = m.len();
        if n == 0 {
            return 1;
        }
        let mut acc = 0;
        for j in 0..n {
            let minor: Vec<Vec<u32>> = m[1..]
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, &v)| v)
                        .collect()
                })
                .collect();
            let term = f.mul_raw(m[0][j], det(f, &minor));
            acc = if j % 2 == 0 {
                f.add_raw(acc, term)
            } else {
                f.sub_raw(acc, term)
            };
        }
        acc
    }

    fn combos(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        if n < k {
            return vec![];
        }
        let mut out = combos(n - 1, k);
        for mut c in combos(n - 1, k - 1) {
            c.push(n - 1);
            out.push(c);
        }
        out
    }

    /// Largest k with a nonzero k-by-k minor.
    fn rank_by_minors(m: &Matrix) -> usize {
        let rows = m.row_values();
        for k in (1..=m.rows().min(m.cols())).rev() {
            for rs in combos(m.rows(), k) {
                for cs in combos(m.cols(), k) {
                    let sub: Vec<Vec<u32>> = rs
                        .iter()
                        .map(|&i| cs.iter().map(|&j| rows[i][j]).collect())
                        .collect();
                    if det(m.field(), &sub) != 0 {
                        return k;
                    }
                }
            }
        }
        0
    }

    fn all_vectors(f: Field, n: usize) -> Vec<Vector> {
        let q = f.order() as u64;
        (0..q.pow(n as u32))
            .map(|mut idx| {
                let mut e = vec![0u64; n];
                for slot in e.iter_mut().rev() {
                    *slot = idx % q;
                    idx /= q;
                }
                Vector::new(f, &e)
            })
            .collect()
    }

    #[test]
    fn rank_examples() {
        let f = f5();
        let ft1 = Matrix::from_columns(
            f,
            3,
            &[&vec5(&[0, 1, 1]), &vec5(&[1, 0, 1]), &vec5(&[0, 0, 1])],
        )
        .unwrap();
        assert_eq!(ft1.rank(), 3);
        assert_eq!(rank_by_minors(&ft1), 3);
        assert_eq!(Matrix::identity(f, 4).rank(), 4);
        assert_eq!(Matrix::zeros(f, 3, 2).rank(), 0);
    }

    #[test]
    fn invert_examples() {
        let f = f5();
        let q = Matrix::from_rows(f, &[vec![1, 1], vec![1, 0]]).unwrap();
        let inv = q.invert().unwrap();
        assert_eq!(
            inv,
            Matrix::from_rows(f, &[vec![0, 1], vec![1, 4]]).unwrap()
        );
        assert_eq!(q.mul(&inv).unwrap(), Matrix::identity(f, 2));
        assert_eq!(
            Matrix::identity(f, 3).invert().unwrap(),
            Matrix::identity(f, 3)
        );
        let sing = Matrix::from_rows(f, &[vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(sing.invert(), Err(Error::SingularMatrix));
        assert_eq!(Matrix::identity(f, 0).invert().unwrap().rows(), 0);
    }

    #[test]
    fn nullspace_examples() {
        let f = f5();
        let m = Matrix::from_rows(f, &[vec![1, 0, 1], vec![1, 1, 0]]).unwrap();
        let v = m.nullspace_nonzero().unwrap();
        assert!(m.mul_vec(&v).unwrap().is_zero());
        // Exhaustive scan: every solution is a multiple of (1,4,4).
        let sols: Vec<Vector> = all_vectors(f, 3)
            .into_iter()
            .filter(|x| !x.is_zero() && m.mul_vec(x).unwrap().is_zero())
            .collect();
        assert_eq!(sols.len(), 4);
        assert!(sols.contains(&v));
        assert!(sols.contains(&vec5(&[1, 4, 4])));

        assert_eq!(Matrix::identity(f, 3).nullspace_nonzero(), None);
        assert_eq!(
            Matrix::zeros(f, 1, 3).nullspace_nonzero(),
            Some(vec5(&[1, 0, 0]))
        );
    }

    #[test]
    fn membership_examples() {
        let f = f5();
        let s = Subspace::span(f, 3, [&vec5(&[1, 0, 1]), &vec5(&[0, 0, 1])]).unwrap();
        assert!(s.contains(&vec5(&[1, 0, 3])).unwrap());
        assert!(!s.contains(&vec5(&[0, 1, 0])).unwrap());
        assert!(s.contains(&Vector::zeros(f, 3)).unwrap());
        assert!(!Subspace::zero(f, 2).contains(&vec5(&[1, 0])).unwrap());
        assert!(s.contains(&vec5(&[1, 0])).is_err());
    }

    #[test]
    fn intersection_examples() {
        let f = f5();
        let b1 = Subspace::span(f, 2, [&vec5(&[1, 1])]).unwrap();
        let l = Subspace::span(f, 2, [&vec5(&[0, 1]), &vec5(&[1, 0])]).unwrap();
        assert_eq!(b1.intersection_dim(&l).unwrap(), 1);
        assert_eq!(l.intersection_dim(&l).unwrap(), 2);
        let x = Subspace::span(f, 2, [&vec5(&[1, 0])]).unwrap();
        let y = Subspace::span(f, 2, [&vec5(&[0, 1])]).unwrap();
        assert_eq!(x.intersection_dim(&y).unwrap(), 0);
    }

    #[test]
    fn pick_examples() {
        let f = f5();
        // Eight kernel pairs of the primary 2-subsets in the 3-dimensional
        // example code.
        let k = |e: &[u64]| vec5(e);
        let pairs = [
            (k(&[0, 1, 1]), k(&[1, 0, 1])),
            (k(&[0, 1, 1]), k(&[1, 0, 2])),
            (k(&[0, 1, 1]), k(&[0, 1, 2])),
            (k(&[0, 1, 1]), k(&[0, 0, 1])),
            (k(&[1, 0, 1]), k(&[1, 0, 2])),
            (k(&[1, 0, 1]), k(&[0, 1, 2])),
            (k(&[1, 0, 2]), k(&[0, 1, 2])),
            (k(&[0, 1, 2]), k(&[0, 0, 1])),
        ];
        let subs: Vec<Subspace> = pairs
            .iter()
            .map(|(a, b)| Subspace::span(f, 3, [a, b]).unwrap())
            .collect();
        let hand_choice = vec5(&[1, 1, 0]);
        assert!(subs.iter().all(|s| !s.contains(&hand_choice).unwrap()));
        let v = pick_vector_avoiding(f, 3, &subs).unwrap();
        assert!(subs.iter().all(|s| !s.contains(&v).unwrap()));
        // Nothing smaller in lexicographic order qualifies.
        for w in all_vectors(f, 3) {
            if w.entries() < v.entries() {
                assert!(subs.iter().any(|s| s.contains(&w).unwrap()));
            }
        }

        assert_eq!(
            pick_vector_avoiding(f, 3, &[]).unwrap(),
            Vector::zeros(f, 3)
        );
        let f2 = Field::new(2).unwrap();
        assert_eq!(
            pick_vector_avoiding(f2, 1, &[Subspace::zero(f2, 1)]).unwrap(),
            Vector::new(f2, &[1])
        );
        assert_eq!(
            pick_vector_avoiding(f2, 2, &[Subspace::full(f2, 2)]),
            Err(Error::SearchExhausted)
        );
        // Three lines through the origin cover GF(2)^2.
        let lines: Vec<Subspace> = [[1u64, 0], [0, 1], [1, 1]]
            .iter()
            .map(|e| Subspace::span(f2, 2, [&Vector::new(f2, e)]).unwrap())
            .collect();
        assert_eq!(
            pick_vector_avoiding(f2, 2, &lines),
            Err(Error::SearchExhausted)
        );
    }

    #[test]
    fn seeded_pick_avoids() {
        let f = f5();
        let subs = vec![
            Subspace::span(f, 2, [&vec5(&[1, 1])]).unwrap(),
            Subspace::zero(f, 2),
        ];
        for seed in 0..20 {
            let v = pick_vector_avoiding_with(f, 2, &subs, PickStrategy::Seeded(seed)).unwrap();
            assert!(subs.iter().all(|s| !s.contains(&v).unwrap()));
        }
    }

    fn small_matrix() -> impl Strategy<Value = (u64, usize, usize, Vec<u64>)> {
        (
            prop_oneof![Just(2u64), Just(3), Just(5), Just(7)],
            1usize..5,
            1usize..5,
        )
            .prop_flat_map(|(q, r, c)| {
                (
                    Just(q),
                    Just(r),
                    Just(c),
                    proptest::collection::vec(0..q, r * c),
                )
            })
    }

    fn small_space() -> impl Strategy<Value = (u64, usize, Vec<Vec<u64>>, Vec<Vec<u64>>)> {
        (prop_oneof![Just(2u64), Just(3), Just(5)], 1usize..5).prop_flat_map(|(q, n)| {
            let vecs = proptest::collection::vec(proptest::collection::vec(0..q, n), 0..4);
            (Just(q), Just(n), vecs.clone(), vecs)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn rank_matches_minors((q, r, c, data) in small_matrix()) {
            let f = Field::new(q).unwrap();
            let m = Matrix::from_rows_shaped(f, r, c, &data).unwrap();
            prop_assert_eq!(m.rank(), rank_by_minors(&m));
        }

        #[test]
        fn invert_round_trip((q, n, _, data) in small_matrix().prop_filter("square", |(_, r, c, _)| r == c)) {
            let f = Field::new(q).unwrap();
            let m = Matrix::from_rows_shaped(f, n, n, &data).unwrap();
            match m.invert() {
                Ok(inv) => {
                    prop_assert_eq!(inv.mul(&m).unwrap(), Matrix::identity(f, n));
                    prop_assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(f, n));
                }
                Err(e) => {
                    prop_assert_eq!(e, Error::SingularMatrix);
                    prop_assert!(m.rank() < n);
                }
            }
        }

        #[test]
        fn nullspace_contract((q, r, c, data) in small_matrix()) {
            let f = Field::new(q).unwrap();
            let m = Matrix::from_rows_shaped(f, r, c, &data).unwrap();
            match m.nullspace_nonzero() {
                Some(v) => {
                    prop_assert!(!v.is_zero());
                    prop_assert!(m.mul_vec(&v).unwrap().is_zero());
                }
                None => prop_assert_eq!(m.rank(), c),
            }
            let basis = m.nullspace_basis();
            prop_assert_eq!(basis.len() + m.rank(), c);
            for v in &basis {
                prop_assert!(m.mul_vec(v).unwrap().is_zero());
            }
            prop_assert_eq!(Subspace::span(f, c, &basis).unwrap().dim(), basis.len());
        }

        #[test]
        fn intersection_matches_count((q, n, a, b) in small_space()) {
            let f = Field::new(q).unwrap();
            let va: Vec<Vector> = a.iter().map(|e| Vector::new(f, e)).collect();
            let vb: Vec<Vector> = b.iter().map(|e| Vector::new(f, e)).collect();
            let s = Subspace::span(f, n, &va).unwrap();
            let t = Subspace::span(f, n, &vb).unwrap();
            let count = all_vectors(f, n)
                .iter()
                .filter(|v| s.contains(v).unwrap() && t.contains(v).unwrap())
                .count() as u64;
            let d = s.intersection_dim(&t).unwrap() as u32;
            prop_assert_eq!(count, q.pow(d));
            for v in &va {
                prop_assert!(s.contains(v).unwrap());
            }
        }

        #[test]
        fn pick_result_avoids_all((q, n, a, b) in small_space()) {
            let f = Field::new(q).unwrap();
            let subs: Vec<Subspace> = a
                .iter()
                .chain(&b)
                .map(|e| Subspace::span(f, n, [&Vector::new(f, e)]).unwrap())
                .collect();
            match pick_vector_avoiding(f, n, &subs) {
                Ok(v) => {
                    for s in &subs {
                        prop_assert!(!s.contains(&v).unwrap());
                    }
                }
                Err(e) => {
                    prop_assert_eq!(e, Error::SearchExhausted);
                    prop_assert!(all_vectors(f, n).iter().all(|v| subs.iter().any(|s| s.contains(v).unwrap())));
                }
            }
        }
    }
}
