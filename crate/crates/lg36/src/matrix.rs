//! Dense exact matrices and elimination.
//!
//! Elimination is plain Gauss–Jordan over the field with unit pivots; over Q
//! every row is rescaled to coprime integers after each update
//! ([`Field::normalize_row`]), which keeps coefficient growth near the
//! fraction-free bound while leaving ranks, kernels and solution sets exact.

use crate::field::Field;

#[derive(Clone, PartialEq)]
pub struct Matrix<K: Field> {
    field: K,
    rows: usize,
    cols: usize,
    data: Vec<K::Elem>,
}

impl<K: Field> std::fmt::Debug for Matrix<K> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|c| self.field.fmt_elem(self.get(r, c)))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<K: Field> Matrix<K> {
    pub fn zero(field: K, rows: usize, cols: usize) -> Self {
        let data = vec![field.zero(); rows * cols];
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn identity(field: K, n: usize) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, m.field.one());
        }
        m
    }

    pub fn from_rows(field: K, rows: Vec<Vec<K::Elem>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            field,
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(field: K, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> K::Elem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    /// Integer-entry constructor, handy for fixtures.
    pub fn from_i64(field: K, rows: &[&[i64]]) -> Self {
        Self::from_rows(
            field.clone(),
            rows.iter()
                .map(|r| r.iter().map(|&n| field.from_i64(n)).collect())
                .collect(),
        )
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &K::Elem {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: K::Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[K::Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn rows_vec(&self) -> Vec<Vec<K::Elem>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.field.clone(), self.cols, self.rows, |r, c| {
            self.get(c, r).clone()
        })
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let k = &self.field;
        Self::from_fn(k.clone(), self.rows, other.cols, |r, c| {
            let mut acc = k.zero();
            for i in 0..self.cols {
                acc = k.add(&acc, &k.mul(self.get(r, i), other.get(i, c)));
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[K::Elem]) -> Vec<K::Elem> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in mul_vec");
        let k = &self.field;
        (0..self.rows)
            .map(|r| {
                let mut acc = k.zero();
                for c in 0..self.cols {
                    acc = k.add(&acc, &k.mul(self.get(r, c), &v[c]));
                }
                acc
            })
            .collect()
    }

    pub fn scale(&self, s: &K::Elem) -> Self {
        let k = &self.field;
        Self::from_fn(k.clone(), self.rows, self.cols, |r, c| {
            k.mul(self.get(r, c), s)
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let k = &self.field;
        Self::from_fn(k.clone(), self.rows, self.cols, |r, c| {
            k.add(self.get(r, c), other.get(r, c))
        })
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let k = &self.field;
        Self::from_fn(k.clone(), self.rows, self.cols, |r, c| {
            k.sub(self.get(r, c), other.get(r, c))
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "column mismatch in vstack");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix {
            field: self.field.clone(),
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn row_mut(&mut self, r: usize) -> &mut [K::Elem] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// In-place reduced row echelon form with unit pivots.
    /// Returns the pivot columns in order.
    pub fn rref(&mut self) -> Vec<usize> {
        let k = self.field.clone();
        for r in 0..self.rows {
            k.normalize_row(self.row_mut(r));
        }
        let mut pivots = Vec::new();
        let mut next_row = 0;
        for c in 0..self.cols {
            if next_row == self.rows {
                break;
            }
            let Some(pr) = (next_row..self.rows).find(|&r| !k.is_zero(self.get(r, c))) else {
                continue;
            };
            self.swap_rows(next_row, pr);
            let inv = k
                .inv(self.get(next_row, c))
                .expect("pivot is nonzero by selection");
            for j in c..self.cols {
                let v = k.mul(self.get(next_row, j), &inv);
                self.set(next_row, j, v);
            }
            for r in 0..self.rows {
                if r == next_row || k.is_zero(self.get(r, c)) {
                    continue;
                }
                let factor = self.get(r, c).clone();
                for j in c..self.cols {
                    let v = k.sub(self.get(r, j), &k.mul(&factor, self.get(next_row, j)));
                    self.set(r, j, v);
                }
                k.normalize_row(self.row_mut(r));
            }
            pivots.push(c);
            next_row += 1;
        }
        // Unit pivots again: normalize_row may have rescaled reduced rows.
        for (r, &c) in pivots.iter().enumerate() {
            let inv = k.inv(self.get(r, c)).expect("pivot stays nonzero");
            if k.is_one(&inv) {
                continue;
            }
            for j in 0..self.cols {
                let v = k.mul(self.get(r, j), &inv);
                self.set(r, j, v);
            }
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right kernel {x : Ax = 0}.
    pub fn kernel_basis(&self) -> Vec<Vec<K::Elem>> {
        let k = &self.field;
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivot_set.contains(c)) {
            let mut v = vec![k.zero(); self.cols];
            v[free] = k.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = k.neg(m.get(r, free));
            }
            basis.push(v);
        }
        basis
    }

    /// Particular solution of Ax = b (free variables set to zero), or None if
    /// the system is inconsistent.
    pub fn solve(&self, b: &[K::Elem]) -> Option<Vec<K::Elem>> {
        assert_eq!(self.rows, b.len(), "rhs length mismatch");
        let k = &self.field;
        let mut aug = Self::from_fn(k.clone(), self.rows, self.cols + 1, |r, c| {
            if c < self.cols {
                self.get(r, c).clone()
            } else {
                b[r].clone()
            }
        });
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![k.zero(); self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.get(r, self.cols).clone();
        }
        Some(x)
    }

    pub fn det(&self) -> K::Elem {
        assert_eq!(self.rows, self.cols, "det of non-square matrix");
        let k = self.field.clone();
        let n = self.rows;
        let mut m = self.clone();
        let mut det = k.one();
        for c in 0..n {
            let Some(pr) = (c..n).find(|&r| !k.is_zero(m.get(r, c))) else {
                return k.zero();
            };
            if pr != c {
                m.swap_rows(pr, c);
                det = k.neg(&det);
            }
            let pivot = m.get(c, c).clone();
            det = k.mul(&det, &pivot);
            let inv = k.inv(&pivot).expect("pivot nonzero");
            for r in c + 1..n {
                if k.is_zero(m.get(r, c)) {
                    continue;
                }
                let factor = k.mul(m.get(r, c), &inv);
                for j in c..n {
                    let v = k.sub(m.get(r, j), &k.mul(&factor, m.get(c, j)));
                    m.set(r, j, v);
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        let k = &self.field;
        let n = self.rows;
        let mut aug = Self::from_fn(k.clone(), n, 2 * n, |r, c| {
            if c < n {
                self.get(r, c).clone()
            } else if c - n == r {
                k.one()
            } else {
                k.zero()
            }
        });
        let pivots = aug.rref();
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
            return None;
        }
        Some(Self::from_fn(k.clone(), n, n, |r, c| {
            aug.get(r, n + c).clone()
        }))
    }

    /// Row-space basis: the nonzero rows of the RREF.
    pub fn row_space_basis(&self) -> Vec<Vec<K::Elem>> {
        let mut m = self.clone();
        let pivots = m.rref();
        (0..pivots.len()).map(|r| m.row(r).to_vec()).collect()
    }

    /// Does v lie in the row space?
    pub fn row_space_contains(&self, v: &[K::Elem]) -> bool {
        assert_eq!(self.cols, v.len());
        let stacked = self.vstack(&Matrix::from_rows(self.field.clone(), vec![v.to_vec()]));
        stacked.rank() == self.rank()
    }
}

/// Solution-space basis of a homogeneous system given by linear functionals
/// (rows) on `n` unknowns. An empty row list means every vector solves.
pub fn solve_homogeneous<K: Field>(field: K, rows: &[Vec<K::Elem>], n: usize) -> Vec<Vec<K::Elem>> {
    if rows.is_empty() {
        return Matrix::zero(field, 1, n).kernel_basis();
    }
    assert!(rows.iter().all(|r| r.len() == n), "functional arity mismatch");
    Matrix::from_rows(field, rows.to_vec()).kernel_basis()
}
