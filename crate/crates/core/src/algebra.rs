//! Semi-tensor products, cross-dimensional additions and the dimension-free
//! metric on vectors and matrices.
//!
//! Products are computed by index arithmetic against the Kronecker lifts
//! `A ⊗ I_s` and `x ⊗ 1_q` without materializing them. The
//! [`m_product_reference`] path builds the lifts explicitly and exists for
//! oracle comparisons.

use crate::arith::{check_elements, lcm, mul_dim, Ratio};
use crate::matrix::{Matrix, Vect};
use crate::{Error, Result};

/// The shape class `rows/cols` (reduced) a matrix belongs to.
pub fn shape_class(a: &Matrix) -> Ratio {
    Ratio::of_shape(a.rows(), a.cols())
}

/// `(A ⊗ I_s)(B ⊗ I_q)` with `cols(A)·s == rows(B)·q`.
fn lifted_product(a: &Matrix, s: usize, b: &Matrix, q: usize) -> Result<Matrix> {
    let (m, n) = a.shape();
    let r = b.cols();
    let out_rows = mul_dim(m, s)?;
    let out_cols = mul_dim(r, q)?;
    check_elements(out_rows, out_cols)?;
    let mut out = vec![0.0; out_rows * out_cols];
    for i in 0..m {
        for al in 0..s {
            let orow = &mut out[(i * s + al) * out_cols..(i * s + al + 1) * out_cols];
            for j in 0..n {
                let aij = a.get(i, j);
                if aij == 0.0 {
                    continue;
                }
                let k = j * s + al;
                let (bi, d) = (k / q, k % q);
                for (c, &bv) in b.row(bi).iter().enumerate() {
                    orow[c * q + d] += aij * bv;
                }
            }
        }
    }
    Ok(Matrix::from_raw(out_rows, out_cols, out))
}

/// Shape of `A ⋉ B` for factors of the given shapes, checked against the
/// dimension and element limits.
pub fn m_product_shape(a: (usize, usize), b: (usize, usize)) -> Result<(usize, usize)> {
    let t = lcm(a.1, b.0)?;
    let shape = (mul_dim(a.0, t / a.1)?, mul_dim(b.1, t / b.0)?);
    check_elements(shape.0, shape.1)?;
    Ok(shape)
}

/// Left semi-tensor product `A ⋉ B`.
pub fn m_product(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if a.cols() == b.rows() {
        return a.matmul(b);
    }
    let t = lcm(a.cols(), b.rows())?;
    lifted_product(a, t / a.cols(), b, t / b.rows())
}

/// `A ⋉ B` through explicitly materialized Kronecker lifts.
pub fn m_product_reference(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    let t = lcm(a.cols(), b.rows())?;
    a.kron_identity(t / a.cols())?.matmul(&b.kron_identity(t / b.rows())?)
}

/// V-product `A ⋉⃗ x`: the action of any matrix on a vector of any dimension.
pub fn v_product(a: &Matrix, x: &Vect) -> Result<Vect> {
    let (m, n) = a.shape();
    let r = x.dim();
    let t = lcm(n, r)?;
    let (s, q) = (t / n, t / r);
    let out_dim = mul_dim(m, s)?;
    check_elements(out_dim, 1)?;
    let xs = x.data();
    let mut out = vec![0.0; out_dim];
    for i in 0..m {
        let arow = a.row(i);
        for al in 0..s {
            out[i * s + al] = arow.iter().enumerate().map(|(j, &aij)| aij * xs[(j * s + al) / q]).sum();
        }
    }
    Ok(Vect::from_raw(out))
}

/// `A ⋉⃗ x` through explicitly materialized lifts.
pub fn v_product_reference(a: &Matrix, x: &Vect) -> Result<Vect> {
    let t = lcm(a.cols(), x.dim())?;
    a.kron_identity(t / a.cols())?.mul_vec(&x.kron_ones(t / x.dim())?)
}

/// `A ⋉⃗ B`: the V-product applied to each column of `B`.
pub fn v_product_mat(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    let (m, n) = a.shape();
    let (p, c) = b.shape();
    if n == p {
        return a.matmul(b);
    }
    let t = lcm(n, p)?;
    let (s, q) = (t / n, t / p);
    let out_rows = mul_dim(m, s)?;
    check_elements(out_rows, c)?;
    let mut out = vec![0.0; out_rows * c];
    for i in 0..m {
        for al in 0..s {
            let orow = &mut out[(i * s + al) * c..(i * s + al + 1) * c];
            for j in 0..n {
                let aij = a.get(i, j);
                if aij == 0.0 {
                    continue;
                }
                for (o, &bv) in orow.iter_mut().zip(b.row((j * s + al) / q)) {
                    *o += aij * bv;
                }
            }
        }
    }
    Ok(Matrix::from_raw(out_rows, c, out))
}

fn check_same_class(a: &Matrix, b: &Matrix) -> Result<()> {
    let (l, r) = (shape_class(a), shape_class(b));
    if l != r {
        return Err(Error::ShapeClassMismatch { left: l, right: r });
    }
    Ok(())
}

fn m_combine(a: &Matrix, b: &Matrix, sign: f64) -> Result<Matrix> {
    check_same_class(a, b)?;
    let t = lcm(a.rows(), b.rows())?;
    let lifted_a = a.kron_identity(t / a.rows())?;
    let lifted_b = b.kron_identity(t / b.rows())?;
    if sign > 0.0 {
        lifted_a.add(&lifted_b)
    } else {
        lifted_a.sub(&lifted_b)
    }
}

/// M-addition `A ⊞ B` inside one shape class.
pub fn m_add(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    m_combine(a, b, 1.0)
}

/// M-subtraction `A ⊟ B = A ⊞ (−B)`.
pub fn m_sub(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    m_combine(a, b, -1.0)
}

fn v_combine(x: &Vect, y: &Vect, sign: f64) -> Result<Vect> {
    let t = lcm(x.dim(), y.dim())?;
    check_elements(t, 1)?;
    let (p, q) = (t / x.dim(), t / y.dim());
    let (xs, ys) = (x.data(), y.data());
    Ok(Vect::from_raw((0..t).map(|i| xs[i / p] + sign * ys[i / q]).collect()))
}

/// V-addition `x ⊞ y` on vectors of any dimensions.
pub fn v_add(x: &Vect, y: &Vect) -> Result<Vect> {
    v_combine(x, y, 1.0)
}

/// V-subtraction `x ⊟ y`.
pub fn v_sub(x: &Vect, y: &Vect) -> Result<Vect> {
    v_combine(x, y, -1.0)
}

/// Dimension-free inner product.
pub fn inner_v(x: &Vect, y: &Vect) -> Result<f64> {
    let t = lcm(x.dim(), y.dim())?;
    let (p, q) = (t / x.dim(), t / y.dim());
    let (xs, ys) = (x.data(), y.data());
    let sum: f64 = (0..t).map(|i| xs[i / p] * ys[i / q]).sum();
    Ok(sum / t as f64)
}

/// `‖x‖_V = sqrt(⟨x, x⟩ / dim x)`.
pub fn norm_v(x: &Vect) -> f64 {
    (x.dot(x) / x.dim() as f64).sqrt()
}

/// Operator norm induced by [`norm_v`]: `sqrt(n/m) · σ_max(A)`.
pub fn op_norm_v(a: &Matrix) -> Result<f64> {
    let ratio = a.cols() as f64 / a.rows() as f64;
    Ok(ratio.sqrt() * a.spectral_norm()?)
}

/// `‖x ⊟ y‖_V`; zero exactly on equivalent pairs.
pub fn dist_v(x: &Vect, y: &Vect) -> Result<f64> {
    Ok(norm_v(&v_sub(x, y)?))
}
