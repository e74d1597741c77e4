//! Matrix exponential by Padé scaling and squaring, and the φ-functions
//! `φ_s(Z) = Σ_j Z^j / (j+s)!` built on it.

use crate::matrix::Matrix;
use crate::{Error, Result};

/// Largest φ index accepted by [`phi`].
pub const MAX_PHI_ORDER: usize = 64;

const THETA: [(usize, f64); 4] = [
    (3, 1.495585217958292e-2),
    (5, 2.539398330063230e-1),
    (7, 9.504178996162932e-1),
    (9, 2.097847961257068),
];
const THETA_13: f64 = 5.371920351148152;

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0];
const B9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

fn axpy(acc: &Matrix, c: f64, x: &Matrix) -> Matrix {
    acc.add(&x.scale(c)).expect("same shape")
}

fn diag_shift(m: &Matrix, c: f64) -> Matrix {
    let mut out = m.clone();
    for i in 0..m.rows() {
        out.set(i, i, out.get(i, i) + c);
    }
    out
}

/// `[m/m]` Padé approximant for `m ≤ 9`.
fn pade_low(a: &Matrix, b: &[f64]) -> Result<(Matrix, Matrix)> {
    let n = a.rows();
    let a2 = a.matmul(a)?;
    let mut even_pow = Matrix::identity(n)?;
    let mut u = Matrix::zeros(n, n)?;
    let mut v = Matrix::zeros(n, n)?;
    for k in (0..b.len()).step_by(2) {
        if k > 0 {
            even_pow = even_pow.matmul(&a2)?;
        }
        v = axpy(&v, b[k], &even_pow);
        u = axpy(&u, b[k + 1], &even_pow);
    }
    Ok((a.matmul(&u)?, v))
}

fn pade13(a: &Matrix) -> Result<(Matrix, Matrix)> {
    let b = &B13;
    let a2 = a.matmul(a)?;
    let a4 = a2.matmul(&a2)?;
    let a6 = a4.matmul(&a2)?;
    let inner_u = a6.scale(b[13]).add(&a4.scale(b[11]))?.add(&a2.scale(b[9]))?;
    let u = a6.matmul(&inner_u)?.add(&a6.scale(b[7]))?.add(&a4.scale(b[5]))?.add(&a2.scale(b[3]))?;
    let u = a.matmul(&diag_shift(&u, b[1]))?;
    let inner_v = a6.scale(b[12]).add(&a4.scale(b[10]))?.add(&a2.scale(b[8]))?;
    let v = a6.matmul(&inner_v)?.add(&a6.scale(b[6]))?.add(&a4.scale(b[4]))?.add(&a2.scale(b[2]))?;
    Ok((u, diag_shift(&v, b[0])))
}

fn pade_solve(u: &Matrix, v: &Matrix) -> Result<Matrix> {
    v.sub(u)?.solve(&v.add(u)?)
}

/// Matrix exponential `e^A`.
pub fn expm(a: &Matrix) -> Result<Matrix> {
    a.require_square()?;
    let norm = a.norm1();
    for (m, theta) in THETA {
        if norm <= theta {
            let b: &[f64] = match m {
                3 => &B3,
                5 => &B5,
                7 => &B7,
                _ => &B9,
            };
            let (u, v) = pade_low(a, b)?;
            return pade_solve(&u, &v);
        }
    }
    let s = (norm / THETA_13).log2().ceil().max(0.0) as i32;
    let scaled = a.scale(2f64.powi(-s));
    let (u, v) = pade13(&scaled)?;
    let mut r = pade_solve(&u, &v)?;
    for _ in 0..s {
        r = r.matmul(&r)?;
    }
    Ok(r)
}

/// `φ_0(Mt), …, φ_s(Mt)` from one exponential of the block matrix
/// `[[Mt, I, 0, …], [0, 0, I, …], …, [0, …, 0]]`.
pub fn phi_sequence(m: &Matrix, t: f64, s: usize) -> Result<Vec<Matrix>> {
    m.require_square()?;
    if s > MAX_PHI_ORDER {
        return Err(Error::InvalidInput(format!("phi order {s} exceeds {MAX_PHI_ORDER}")));
    }
    let n = m.rows();
    if s == 0 {
        return Ok(vec![expm(&m.scale(t))?]);
    }
    let big = n * (s + 1);
    let mut w = Matrix::zeros(big, big)?;
    for i in 0..n {
        for j in 0..n {
            w.set(i, j, m.get(i, j) * t);
        }
    }
    for blk in 0..s {
        for i in 0..n {
            w.set(blk * n + i, (blk + 1) * n + i, 1.0);
        }
    }
    let e = expm(&w)?;
    let block = |k: usize| {
        let mut out = Matrix::zeros(n, n).expect("positive dimension");
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, e.get(i, k * n + j));
            }
        }
        out
    };
    Ok((0..=s).map(block).collect())
}

/// `φ_s(M t)`; `φ_0` is the exponential.
pub fn phi(m: &Matrix, t: f64, s: usize) -> Result<Matrix> {
    Ok(phi_sequence(m, t, s)?.pop().expect("non-empty"))
}
