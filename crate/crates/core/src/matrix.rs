//! Dense real matrices and vectors, Kronecker lifts, and the conventional
//! linear-algebra kernels everything else is built on.

use std::fmt;
use std::ops::Index;

use crate::arith::{check_elements, mul_dim};
use crate::{Error, Result};

/// Relative pivot threshold for [`Matrix::inverse`] and [`Matrix::solve`].
pub const PIVOT_TOL: f64 = 1e-12;

const POWER_ITER_TOL: f64 = 1e-12;
const POWER_ITER_MAX: usize = 10_000;

fn check_finite(data: &[f64]) -> Result<()> {
    match data.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(Error::NonFinite(i)),
        None => Ok(()),
    }
}

/// Dense `rows x cols` real matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::ZeroDimension);
        }
        check_elements(rows, cols)?;
        if data.len() != rows * cols {
            return Err(Error::DataLength { expected: rows * cols, actual: data.len() });
        }
        check_finite(&data)?;
        Ok(Matrix { rows, cols, data })
    }

    pub(crate) fn from_raw(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from equally long rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.as_ref().len());
        if rows.iter().any(|row| row.as_ref().len() != c) {
            return Err(Error::ShapeMismatch("rows have different lengths".into()));
        }
        Matrix::new(r, c, rows.iter().flat_map(|row| row.as_ref().iter().copied()).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::ZeroDimension);
        }
        check_elements(rows, cols)?;
        Ok(Matrix::from_raw(rows, cols, vec![0.0; rows * cols]))
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Matrix::zeros(n, n)?;
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        Ok(m)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vect]) -> Result<Self> {
        let c = cols.len();
        let r = cols.first().map_or(0, Vect::dim);
        if cols.iter().any(|v| v.dim() != r) {
            return Err(Error::ShapeMismatch("columns have different dimensions".into()));
        }
        let mut m = Matrix::zeros(r, c)?;
        for (j, v) in cols.iter().enumerate() {
            for i in 0..r {
                m.data[i * c + j] = v[i];
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vect {
        Vect::from_raw((0..self.rows).map(|i| self.get(i, j)).collect())
    }

    pub fn columns(&self) -> Vec<Vect> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Maximum absolute column sum.
    pub fn norm1(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self.get(i, j).abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0.0)
    }

    /// Largest entrywise difference; `None` when shapes differ.
    pub fn max_abs_diff(&self, other: &Matrix) -> Option<f64> {
        if self.shape() != other.shape() {
            return None;
        }
        Some(self.data.iter().zip(&other.data).fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = vec![0.0; self.data.len()];
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[j * self.rows + i] = self.get(i, j);
            }
        }
        Matrix::from_raw(self.cols, self.rows, out)
    }

    pub fn scale(&self, c: f64) -> Matrix {
        Matrix::from_raw(self.rows, self.cols, self.data.iter().map(|v| c * v).collect())
    }

    pub fn neg(&self) -> Matrix {
        self.scale(-1.0)
    }

    fn zip_with(&self, other: &Matrix, f: impl Fn(f64, f64) -> f64) -> Result<Matrix> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        Ok(Matrix::from_raw(self.rows, self.cols, data))
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| a - b)
    }

    /// Conventional product; requires `cols(self) == rows(other)`.
    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        check_elements(self.rows, other.cols)?;
        let (m, k, n) = (self.rows, self.cols, other.cols);
        let mut out = vec![0.0; m * n];
        for i in 0..m {
            let orow = &mut out[i * n..(i + 1) * n];
            for p in 0..k {
                let a = self.data[i * k + p];
                if a == 0.0 {
                    continue;
                }
                for (o, &b) in orow.iter_mut().zip(&other.data[p * n..(p + 1) * n]) {
                    *o += a * b;
                }
            }
        }
        Ok(Matrix::from_raw(m, n, out))
    }

    /// Conventional matrix-vector product.
    pub fn mul_vec(&self, x: &Vect) -> Result<Vect> {
        if self.cols != x.dim() {
            return Err(Error::ShapeMismatch(format!(
                "cannot apply {}x{} to a vector of dimension {}",
                self.rows,
                self.cols,
                x.dim()
            )));
        }
        let out = (0..self.rows)
            .map(|i| self.row(i).iter().zip(x.data()).map(|(a, b)| a * b).sum())
            .collect();
        Ok(Vect::from_raw(out))
    }

    /// `self ⊗ I_s`, materialized.
    pub fn kron_identity(&self, s: usize) -> Result<Matrix> {
        if s == 0 {
            return Err(Error::ZeroDimension);
        }
        if s == 1 {
            return Ok(self.clone());
        }
        let (r, c) = (mul_dim(self.rows, s)?, mul_dim(self.cols, s)?);
        let mut out = Matrix::zeros(r, c)?;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.get(i, j);
                if v != 0.0 {
                    for k in 0..s {
                        out.set(i * s + k, j * s + k, v);
                    }
                }
            }
        }
        Ok(out)
    }

    /// `self ⊗ 1_s`: every row repeated `s` times.
    pub fn kron_ones(&self, s: usize) -> Result<Matrix> {
        if s == 0 {
            return Err(Error::ZeroDimension);
        }
        let r = mul_dim(self.rows, s)?;
        check_elements(r, self.cols)?;
        let mut data = Vec::with_capacity(r * self.cols);
        for i in 0..self.rows {
            for _ in 0..s {
                data.extend_from_slice(self.row(i));
            }
        }
        Ok(Matrix::from_raw(r, self.cols, data))
    }

    /// General Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Matrix) -> Result<Matrix> {
        let (r, c) = (mul_dim(self.rows, other.rows)?, mul_dim(self.cols, other.cols)?);
        let mut out = Matrix::zeros(r, c)?;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.set(i * other.rows + k, j * other.cols + l, a * other.get(k, l));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Integer power of a square matrix (`A^0 = I`).
    pub fn powi(&self, e: usize) -> Result<Matrix> {
        self.require_square()?;
        let mut result = Matrix::identity(self.rows)?;
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.matmul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.matmul(&base)?;
            }
        }
        Ok(result)
    }

    pub(crate) fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(format!("{}x{} matrix is not square", self.rows, self.cols)))
        }
    }

    /// Solves `self * X = rhs` by LU with partial pivoting.
    pub fn solve(&self, rhs: &Matrix) -> Result<Matrix> {
        self.require_square()?;
        if rhs.rows != self.rows {
            return Err(Error::ShapeMismatch("right-hand side has wrong row count".into()));
        }
        let n = self.rows;
        let mut a = self.data.clone();
        let mut b = rhs.data.clone();
        let nb = rhs.cols;
        let threshold = PIVOT_TOL * self.max_abs();
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| a[i * n + k].abs().total_cmp(&a[j * n + k].abs()))
                .unwrap();
            let pivot = a[p * n + k];
            if pivot.abs() <= threshold || pivot == 0.0 {
                return Err(Error::Singular);
            }
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                for j in 0..nb {
                    b.swap(k * nb + j, p * nb + j);
                }
            }
            for i in k + 1..n {
                let f = a[i * n + k] / pivot;
                if f == 0.0 {
                    continue;
                }
                a[i * n + k] = 0.0;
                for j in k + 1..n {
                    a[i * n + j] -= f * a[k * n + j];
                }
                for j in 0..nb {
                    b[i * nb + j] -= f * b[k * nb + j];
                }
            }
        }
        for k in (0..n).rev() {
            let pivot = a[k * n + k];
            for j in 0..nb {
                let mut s = b[k * nb + j];
                for l in k + 1..n {
                    s -= a[k * n + l] * b[l * nb + j];
                }
                b[k * nb + j] = s / pivot;
            }
        }
        Ok(Matrix::from_raw(n, nb, b))
    }

    pub fn inverse(&self) -> Result<Matrix> {
        self.solve(&Matrix::identity(self.rows)?)
    }

    /// Largest singular value by power iteration on the smaller Gram matrix.
    pub fn spectral_norm(&self) -> Result<f64> {
        let gram = if self.rows < self.cols {
            self.matmul(&self.transpose())?
        } else {
            self.transpose().matmul(self)?
        };
        Ok(largest_eigenvalue_psd(&gram)?.max(0.0).sqrt())
    }

    /// Numerical rank by Householder QR with column pivoting.
    ///
    /// A diagonal entry of `R` counts when it exceeds `rel_tol * σ_max`.
    /// Returns the rank and the indices of the pivot columns chosen, which
    /// span the column space.
    pub fn rank_with_pivots(&self, rel_tol: f64) -> Result<(usize, Vec<usize>)> {
        let sigma = self.spectral_norm()?;
        if sigma == 0.0 {
            return Ok((0, Vec::new()));
        }
        let threshold = rel_tol * sigma;
        let (m, n) = (self.rows, self.cols);
        let mut a = self.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut rank = 0;
        for k in 0..m.min(n) {
            let norms: Vec<f64> =
                (k..n).map(|j| (k..m).map(|i| a.get(i, j).powi(2)).sum::<f64>()).collect();
            let (off, &best) =
                norms.iter().enumerate().max_by(|x, y| x.1.total_cmp(y.1)).unwrap();
            if best.sqrt() <= threshold {
                break;
            }
            let p = k + off;
            if p != k {
                perm.swap(k, p);
                for i in 0..m {
                    let t = a.get(i, k);
                    a.set(i, k, a.get(i, p));
                    a.set(i, p, t);
                }
            }
            // Householder reflector zeroing a[k+1.., k]
            let alpha = -best.sqrt().copysign(a.get(k, k));
            let mut v: Vec<f64> = (k..m).map(|i| a.get(i, k)).collect();
            v[0] -= alpha;
            let vnorm2: f64 = v.iter().map(|x| x * x).sum();
            if vnorm2 > 0.0 {
                for j in k..n {
                    let dot: f64 = (k..m).map(|i| v[i - k] * a.get(i, j)).sum();
                    let f = 2.0 * dot / vnorm2;
                    for i in k..m {
                        a.set(i, j, a.get(i, j) - f * v[i - k]);
                    }
                }
            }
            rank += 1;
        }
        perm.truncate(rank);
        Ok((rank, perm))
    }

    pub fn rank(&self, rel_tol: f64) -> Result<usize> {
        self.rank_with_pivots(rel_tol).map(|(r, _)| r)
    }
}

/// Largest eigenvalue of a symmetric positive semidefinite matrix.
fn largest_eigenvalue_psd(g: &Matrix) -> Result<f64> {
    let n = g.rows();
    if g.is_zero() {
        return Ok(0.0);
    }
    // a non-uniform start avoids being orthogonal to structured eigenvectors
    let start: Vec<f64> = (0..n).map(|i| 1.0 + ((i as f64 + 1.0) * 0.618_033_988_75).fract()).collect();
    let mut v = Vect::from_raw(start);
    let mut restarts = 0;
    let mut lambda = 0.0;
    let mut iter = 0;
    while iter < POWER_ITER_MAX {
        let nv = v.euclid_norm();
        let u = v.scale(1.0 / nv);
        let w = g.mul_vec(&u)?;
        let next = u.dot(&w);
        if w.euclid_norm() == 0.0 {
            // start vector in the null space; try the next unit vector
            if restarts >= n {
                return Ok(0.0);
            }
            let mut e = vec![0.0; n];
            e[restarts] = 1.0;
            restarts += 1;
            v = Vect::from_raw(e);
            continue;
        }
        if iter > 0 && (next - lambda).abs() <= POWER_ITER_TOL * next.abs() {
            return Ok(next);
        }
        lambda = next;
        v = w;
        iter += 1;
    }
    Err(Error::NoConvergence(POWER_ITER_MAX))
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Dense real vector of positive dimension.
#[derive(Clone, PartialEq)]
pub struct Vect {
    data: Vec<f64>,
}

impl Vect {
    pub fn new(data: Vec<f64>) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::ZeroDimension);
        }
        check_elements(data.len(), 1)?;
        check_finite(&data)?;
        Ok(Vect { data })
    }

    pub(crate) fn from_raw(data: Vec<f64>) -> Self {
        debug_assert!(!data.is_empty());
        Vect { data }
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Vect::new(vec![0.0; n])
    }

    pub fn ones(n: usize) -> Result<Self> {
        Vect::new(vec![1.0; n])
    }

    /// The unit vector `δ_n^i` (zero-based `i`).
    pub fn unit(n: usize, i: usize) -> Result<Self> {
        if i >= n {
            return Err(Error::InvalidInput(format!("unit index {i} out of range for dimension {n}")));
        }
        let mut v = Vect::zeros(n)?;
        v.data[i] = 1.0;
        Ok(v)
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn scale(&self, c: f64) -> Vect {
        Vect::from_raw(self.data.iter().map(|v| c * v).collect())
    }

    pub fn dot(&self, other: &Vect) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    pub fn euclid_norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0.0)
    }

    /// Largest entrywise difference; `None` when dimensions differ.
    pub fn max_abs_diff(&self, other: &Vect) -> Option<f64> {
        if self.dim() != other.dim() {
            return None;
        }
        Some(self.data.iter().zip(&other.data).fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }

    /// Same-dimension sum.
    pub fn add(&self, other: &Vect) -> Result<Vect> {
        if self.dim() != other.dim() {
            return Err(Error::ShapeMismatch(format!("dimensions {} vs {}", self.dim(), other.dim())));
        }
        Ok(Vect::from_raw(self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect()))
    }

    /// `self ⊗ 1_s`: each entry repeated `s` times.
    pub fn kron_ones(&self, s: usize) -> Result<Vect> {
        if s == 0 {
            return Err(Error::ZeroDimension);
        }
        let n = mul_dim(self.dim(), s)?;
        check_elements(n, 1)?;
        let mut data = Vec::with_capacity(n);
        for &v in &self.data {
            data.extend(std::iter::repeat(v).take(s));
        }
        Ok(Vect::from_raw(data))
    }

    pub fn as_column(&self) -> Matrix {
        Matrix::from_raw(self.dim(), 1, self.data.clone())
    }
}

impl Index<usize> for Vect {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.data[i]
    }
}

impl fmt::Debug for Vect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Vect{:?}", self.data)
    }
}

/// Orthonormal basis of the span of `vectors` (modified Gram-Schmidt with
/// one reorthogonalization pass). Vectors whose remaining component falls
/// below `tol` times their norm are dropped.
pub fn orthonormal_basis(vectors: &[Vect], tol: f64) -> Vec<Vect> {
    let mut basis: Vec<Vect> = Vec::new();
    for v in vectors {
        let scale = v.euclid_norm();
        if scale == 0.0 {
            continue;
        }
        let mut w = v.data().to_vec();
        for _ in 0..2 {
            for q in &basis {
                let c: f64 = w.iter().zip(q.data()).map(|(a, b)| a * b).sum();
                for (wi, qi) in w.iter_mut().zip(q.data()) {
                    *wi -= c * qi;
                }
            }
        }
        let n = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > tol * scale {
            basis.push(Vect::from_raw(w.into_iter().map(|x| x / n).collect()));
        }
    }
    basis
}

/// Euclidean distance from `v` to the span of an orthonormal `basis`.
pub fn projection_residual(basis: &[Vect], v: &Vect) -> f64 {
    let mut w = v.data().to_vec();
    for q in basis {
        let c: f64 = w.iter().zip(q.data()).map(|(a, b)| a * b).sum();
        for (wi, qi) in w.iter_mut().zip(q.data()) {
            *wi -= c * qi;
        }
    }
    w.iter().map(|x| x * x).sum::<f64>().sqrt()
}
