//! Dense exact matrices over the Gaussian rationals.

use std::fmt;

use crate::scalar::Gr;

#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Gr>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: ExactMatrix,
    pub pivots: Vec<usize>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, data: vec![Gr::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Gr::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Gr>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        ExactMatrix { rows: r, cols: c, data }
    }

    /// Build from column vectors, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<Gr>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, v) in col.iter().enumerate() {
                m.data[i * m.cols + j] = v.clone();
            }
        }
        m
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| Gr::from_int(v)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Gr {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Gr) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: &Gr) {
        self.data[i * self.cols + j] += v;
    }

    pub fn row(&self, i: usize) -> &[Gr] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Gr> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Gr>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Gr::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.get(i, j);
                if !v.is_zero() {
                    t.set(j, i, v.clone());
                }
            }
        }
        t
    }

    pub fn conj(&self) -> Self {
        ExactMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(Gr::conj).collect() }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.get(i, j);
                if !v.is_zero() {
                    t.set(j, i, v.conj());
                }
            }
        }
        t
    }

    pub fn scale(&self, s: &Gr) -> Self {
        ExactMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| v * s).collect() }
    }

    pub fn neg(&self) -> Self {
        ExactMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| -v).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch in add");
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch in sub");
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "shape mismatch in mul");
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        out.data[i * o.cols + j] += &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Gr]) -> Vec<Gr> {
        assert_eq!(self.cols, v.len(), "shape mismatch in mul_vec");
        let mut out = vec![Gr::zero(); self.rows];
        for (i, o) in out.iter_mut().enumerate() {
            for (k, x) in v.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let a = self.get(i, k);
                if !a.is_zero() {
                    *o += &(a * x);
                }
            }
        }
        out
    }

    /// Horizontal concatenation [self | o].
    pub fn hstack(&self, o: &Self) -> Self {
        assert_eq!(self.rows, o.rows);
        let mut m = Self::zeros(self.rows, self.cols + o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
            for j in 0..o.cols {
                m.set(i, self.cols + j, o.get(i, j).clone());
            }
        }
        m
    }

    pub fn vstack(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.cols);
        let mut data = self.data.clone();
        data.extend(o.data.iter().cloned());
        ExactMatrix { rows: self.rows + o.rows, cols: self.cols, data }
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        let mut m = Self::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            for (jj, &j) in idx.iter().enumerate() {
                m.set(i, jj, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend(self.row(i).iter().cloned());
        }
        ExactMatrix { rows: idx.len(), cols: self.cols, data }
    }

    pub fn block(&self, r0: usize, c0: usize, r: usize, c: usize) -> Self {
        let mut m = Self::zeros(r, c);
        for i in 0..r {
            for j in 0..c {
                m.set(i, j, self.get(r0 + i, c0 + j).clone());
            }
        }
        m
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Self) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j).clone());
            }
        }
    }

    /// Gauss-Jordan elimination over the field, choosing in each column the
    /// nonzero pivot of smallest bit size.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let (rows, cols) = (m.rows, m.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let mut best: Option<(usize, u64)> = None;
            for i in r..rows {
                let v = m.get(i, c);
                if !v.is_zero() {
                    let b = v.bit_size();
                    if best.is_none_or(|(_, bb)| b < bb) {
                        best = Some((i, b));
                    }
                }
            }
            let Some((p, _)) = best else { continue };
            if p != r {
                for j in 0..cols {
                    m.data.swap(p * cols + j, r * cols + j);
                }
            }
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            let nz: Vec<usize> = (c..cols).filter(|&j| !m.get(r, j).is_zero()).collect();
            for &j in &nz {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for &j in &nz {
                    let delta = &f * m.get(r, j);
                    m.data[i * cols + j] -= &delta;
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        // eliminate on the shorter side
        if self.rows > self.cols {
            self.transpose().rref().pivots.len()
        } else {
            self.rref().pivots.len()
        }
    }

    /// Basis of the null space, one vector per free column of the RREF.
    pub fn kernel_basis(&self) -> Vec<Vec<Gr>> {
        let Rref { matrix: r, pivots } = self.rref();
        let mut is_pivot = vec![None; self.cols];
        for (k, &p) in pivots.iter().enumerate() {
            is_pivot[p] = Some(k);
        }
        let mut basis = Vec::new();
        for f in 0..self.cols {
            if is_pivot[f].is_some() {
                continue;
            }
            let mut v = vec![Gr::zero(); self.cols];
            v[f] = Gr::one();
            for (k, &p) in pivots.iter().enumerate() {
                let x = r.get(k, f);
                if !x.is_zero() {
                    v[p] = -x;
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Kernel basis as the columns of a matrix.
    pub fn kernel(&self) -> ExactMatrix {
        ExactMatrix::from_columns(self.cols, &self.kernel_basis())
    }

    /// Independent columns of the matrix spanning its image (pivot columns).
    pub fn image_basis(&self) -> ExactMatrix {
        let piv = self.rref().pivots;
        self.select_columns(&piv)
    }

    pub fn inverse(&self) -> Option<ExactMatrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&Self::identity(n));
        let Rref { matrix, pivots } = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(matrix.block(0, n, n, n))
    }

    pub fn det(&self) -> Gr {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Gr::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Gr::zero();
            };
            if p != c {
                for j in 0..n {
                    m.data.swap(p * n + j, c * n + j);
                }
                det = -det;
            }
            let piv = m.get(c, c).clone();
            det = &det * &piv;
            let inv = piv.inv().unwrap();
            for i in c + 1..n {
                let f = m.get(i, c) * &inv;
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let delta = &f * m.get(c, j);
                    m.data[i * n + j] -= &delta;
                }
            }
        }
        det
    }

    /// Moore-Penrose pseudo-inverse from the rank factorization A = B C,
    /// B the pivot columns of A and C the nonzero rows of its RREF.
    pub fn pinv(&self) -> ExactMatrix {
        let Rref { matrix: r, pivots } = self.rref();
        let k = pivots.len();
        if k == 0 {
            return Self::zeros(self.cols, self.rows);
        }
        let b = self.select_columns(&pivots);
        let c = r.block(0, 0, k, self.cols);
        let bh = b.adjoint();
        let ch = c.adjoint();
        let bb = bh.mul(&b).inverse().expect("B^H B invertible");
        let cc = c.mul(&ch).inverse().expect("C C^H invertible");
        ch.mul(&cc).mul(&bb).mul(&bh)
    }

    /// Minimum-norm exact solution of A x = b, or None when inconsistent.
    pub fn solve(&self, b: &[Gr]) -> Option<Vec<Gr>> {
        assert_eq!(self.rows, b.len(), "dimension mismatch in solve");
        let x = self.pinv().mul_vec(b);
        if self.mul_vec(&x) == b {
            Some(x)
        } else {
            None
        }
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Subspaces of a coordinate space, given by spanning columns.
pub mod subspace {
    use super::ExactMatrix;
    use crate::scalar::Gr;

    pub fn dim(s: &ExactMatrix) -> usize {
        s.rank()
    }

    /// Independent spanning columns.
    pub fn basis(s: &ExactMatrix) -> ExactMatrix {
        s.image_basis()
    }

    pub fn sum(a: &ExactMatrix, b: &ExactMatrix) -> ExactMatrix {
        basis(&a.hstack(b))
    }

    pub fn intersection(a: &ExactMatrix, b: &ExactMatrix) -> ExactMatrix {
        let a = basis(a);
        let b = basis(b);
        let m = a.rows();
        if a.cols() == 0 || b.cols() == 0 {
            return ExactMatrix::zeros(m, 0);
        }
        let ker = a.hstack(&b.neg()).kernel_basis();
        let cols: Vec<Vec<Gr>> = ker.iter().map(|v| a.mul_vec(&v[..a.cols()])).collect();
        basis(&ExactMatrix::from_columns(m, &cols))
    }

    /// Whether span(b) is contained in span(a).
    pub fn contains(a: &ExactMatrix, b: &ExactMatrix) -> bool {
        if b.cols() == 0 {
            return true;
        }
        a.hstack(b).rank() == a.rank()
    }

    /// Orthogonal complement for the standard Hermitian product.
    pub fn orth_complement(a: &ExactMatrix) -> ExactMatrix {
        if a.cols() == 0 {
            return ExactMatrix::identity(a.rows());
        }
        a.adjoint().kernel()
    }
}
