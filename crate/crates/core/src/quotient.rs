//! Equivalence classes of vectors (`x ↔ x ⊗ 1_α`) and matrices
//! (`A ~ A ⊗ I_α`), each represented by its lowest-dimensional member.

use crate::algebra::{m_add, m_product, norm_v, op_norm_v, v_add, v_product};
use crate::arith::{divisors, gcd};
use crate::matrix::{Matrix, Vect};
use crate::Result;

/// Class of a vector, held as its irreducible representative `z` with the
/// original vector equal to `z ⊗ 1_factor`. Equality compares classes, so
/// only the representative takes part.
#[derive(Clone, Debug)]
pub struct VecClass {
    pub rep: Vect,
    pub factor: usize,
}

/// Class of a matrix, held as `Λ` with the original matrix `Λ ⊗ I_factor`.
#[derive(Clone, Debug)]
pub struct MatClass {
    pub rep: Matrix,
    pub factor: usize,
}

impl PartialEq for VecClass {
    fn eq(&self, other: &Self) -> bool {
        self.rep == other.rep
    }
}

impl PartialEq for MatClass {
    fn eq(&self, other: &Self) -> bool {
        self.rep == other.rep
    }
}

/// Block means of `x` when it is constant on consecutive blocks of length
/// `alpha` within `tol`.
pub(crate) fn block_constant(x: &[f64], alpha: usize, tol: f64) -> Option<Vec<f64>> {
    let mut reps = Vec::with_capacity(x.len() / alpha);
    for block in x.chunks(alpha) {
        let (lo, hi) = block.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
        let mean = block.iter().sum::<f64>() / alpha as f64;
        if hi - mean > tol || mean - lo > tol {
            return None;
        }
        reps.push(mean);
    }
    Some(reps)
}

/// Lowest-dimensional `z` with `‖x − z ⊗ 1_α‖_∞ ≤ tol`.
pub fn reduce_vec(x: &Vect, tol: f64) -> VecClass {
    for &alpha in divisors(x.dim()).iter().rev() {
        if alpha == 1 {
            break;
        }
        if let Some(rep) = block_constant(x.data(), alpha, tol) {
            return VecClass { rep: Vect::from_raw(rep), factor: alpha };
        }
    }
    VecClass { rep: x.clone(), factor: 1 }
}

fn block_scalar_identity(a: &Matrix, alpha: usize, tol: f64) -> Option<Matrix> {
    let (br, bc) = (a.rows() / alpha, a.cols() / alpha);
    let mut rep = vec![0.0; br * bc];
    for bi in 0..br {
        for bj in 0..bc {
            let mut diag = 0.0;
            for k in 0..alpha {
                diag += a.get(bi * alpha + k, bj * alpha + k);
            }
            let c = diag / alpha as f64;
            for k in 0..alpha {
                for l in 0..alpha {
                    let expect = if k == l { c } else { 0.0 };
                    if (a.get(bi * alpha + k, bj * alpha + l) - expect).abs() > tol {
                        return None;
                    }
                }
            }
            rep[bi * bc + bj] = c;
        }
    }
    Some(Matrix::from_raw(br, bc, rep))
}

/// Lowest-dimensional `Λ` with `‖A − Λ ⊗ I_α‖_∞ ≤ tol`.
pub fn reduce_mat(a: &Matrix, tol: f64) -> MatClass {
    let g = gcd(a.rows() as u64, a.cols() as u64) as usize;
    for &alpha in divisors(g).iter().rev() {
        if alpha == 1 {
            break;
        }
        if let Some(rep) = block_scalar_identity(a, alpha, tol) {
            return MatClass { rep, factor: alpha };
        }
    }
    MatClass { rep: a.clone(), factor: 1 }
}

pub fn vec_equivalent(x: &Vect, y: &Vect, tol: f64) -> bool {
    let (zx, zy) = (reduce_vec(x, tol), reduce_vec(y, tol));
    zx.rep.max_abs_diff(&zy.rep).is_some_and(|d| d <= tol)
}

pub fn mat_equivalent(a: &Matrix, b: &Matrix, tol: f64) -> bool {
    let (la, lb) = (reduce_mat(a, tol), reduce_mat(b, tol));
    la.rep.max_abs_diff(&lb.rep).is_some_and(|d| d <= tol)
}

impl VecClass {
    pub fn of(x: &Vect, tol: f64) -> Self {
        reduce_vec(x, tol)
    }

    /// Class norm, computed on the representative.
    pub fn norm(&self) -> f64 {
        norm_v(&self.rep)
    }
}

impl MatClass {
    pub fn of(a: &Matrix, tol: f64) -> Self {
        reduce_mat(a, tol)
    }

    /// Class operator norm, computed on the representative.
    pub fn norm(&self) -> Result<f64> {
        op_norm_v(&self.rep)
    }
}

/// `⟨A⟩ ⋉⃗ x̄`.
pub fn class_v_product(a: &MatClass, x: &VecClass, tol: f64) -> Result<VecClass> {
    Ok(reduce_vec(&v_product(&a.rep, &x.rep)?, tol))
}

/// `⟨A⟩ ⋉ ⟨B⟩`.
pub fn class_m_product(a: &MatClass, b: &MatClass, tol: f64) -> Result<MatClass> {
    Ok(reduce_mat(&m_product(&a.rep, &b.rep)?, tol))
}

/// `⟨A⟩ ⊞ ⟨B⟩`; the classes must share a shape class.
pub fn class_m_add(a: &MatClass, b: &MatClass, tol: f64) -> Result<MatClass> {
    Ok(reduce_mat(&m_add(&a.rep, &b.rep)?, tol))
}

/// `x̄ ⊞ ȳ`.
pub fn class_v_add(x: &VecClass, y: &VecClass, tol: f64) -> Result<VecClass> {
    Ok(reduce_vec(&v_add(&x.rep, &y.rep)?, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::dist_v;
    use crate::DEFAULT_TOL as TOL;

    fn v(data: &[f64]) -> Vect {
        Vect::new(data.to_vec()).unwrap()
    }

    fn m(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(rows).unwrap()
    }

    #[test]
    fn reduce_vec_examples() {
        let c = reduce_vec(&v(&[1.0, 1.0, 2.0, 2.0, 3.0, 3.0]), TOL);
        assert_eq!(c.rep.data(), &[1.0, 2.0, 3.0]);
        assert_eq!(c.factor, 2);
        assert_eq!(reduce_vec(&v(&[1.0, 2.0, 3.0]), TOL).rep.data(), &[1.0, 2.0, 3.0]);
        let c = reduce_vec(&v(&[5.0; 4]), TOL);
        assert_eq!((c.rep.data(), c.factor), (&[5.0][..], 4));
    }

    #[test]
    fn reduce_mat_examples() {
        let c = reduce_mat(&m(&[&[2.0, 0.0], &[0.0, 2.0]]), TOL);
        assert_eq!((c.rep.data(), c.factor), (&[2.0][..], 2));
        let a = m(&[&[1.0, 2.0], &[3.0, 4.0]]);
        assert_eq!(reduce_mat(&a, TOL).rep, a);
        let c = reduce_mat(&a.kron_identity(3).unwrap(), TOL);
        assert_eq!((c.rep.clone(), c.factor), (a, 3));
    }

    #[test]
    fn equivalence_examples() {
        assert!(vec_equivalent(&v(&[1.0, 2.0]), &v(&[1.0, 1.0, 2.0, 2.0]), TOL));
        assert!(!vec_equivalent(&v(&[1.0, 2.0]), &v(&[2.0, 1.0]), TOL));
        assert!(vec_equivalent(&v(&[1.0, 1.0, 2.0, 2.0, 3.0, 3.0]), &v(&[1.0, 2.0, 3.0]), TOL));
        let a = m(&[&[1.0, 2.0], &[3.0, 4.0]]);
        assert!(mat_equivalent(&a, &a.kron_identity(2).unwrap(), TOL));
        assert!(mat_equivalent(&Matrix::identity(2).unwrap(), &Matrix::identity(3).unwrap(), TOL));
        assert!(!mat_equivalent(&a, &m(&[&[1.0, 2.0], &[4.0, 3.0]]), TOL));
    }

    #[test]
    fn distance_agrees_with_equivalence() {
        let pairs = [
            (v(&[1.0, 2.0]), v(&[1.0, 1.0, 2.0, 2.0])),
            (v(&[1.0, 2.0]), v(&[2.0, 1.0])),
            (v(&[3.0]), v(&[3.0, 3.0, 3.0])),
            (v(&[1.0, 0.0, 1.0]), v(&[1.0, 0.0])),
        ];
        for (x, y) in &pairs {
            assert_eq!(dist_v(x, y).unwrap() <= TOL, vec_equivalent(x, y, TOL));
        }
    }

    #[test]
    fn class_operations() {
        let x = VecClass::of(&v(&[1.0, 1.0, -2.0, -2.0]), TOL);
        let id = MatClass::of(&Matrix::identity(3).unwrap(), TOL);
        assert_eq!(class_v_product(&id, &x, TOL).unwrap(), x);
        assert_eq!(VecClass::of(&v(&[1.0, 2.0]), TOL).norm(), VecClass::of(&v(&[1.0, 1.0, 2.0, 2.0]), TOL).norm());

        let a = m(&[&[1.0, 2.0], &[0.0, 1.0]]);
        let b = m(&[&[2.0, 0.0], &[1.0, 1.0]]);
        let ab = class_m_product(&MatClass::of(&a, TOL), &MatClass::of(&b, TOL), TOL).unwrap();
        assert_eq!(ab, reduce_mat(&a.matmul(&b).unwrap(), TOL));

        let s = class_m_add(&MatClass::of(&a, TOL), &MatClass::of(&a.kron_identity(2).unwrap(), TOL), TOL).unwrap();
        assert_eq!(s.rep, a.scale(2.0));
        assert!(class_m_add(&MatClass::of(&a, TOL), &MatClass::of(&m(&[&[1.0, 2.0]]), TOL), TOL).is_err());

        let y = class_v_add(&VecClass::of(&v(&[1.0, 2.0]), TOL), &VecClass::of(&v(&[1.0, 1.0, 2.0, 2.0]), TOL), TOL);
        assert_eq!(y.unwrap().rep.data(), &[2.0, 4.0]);
    }
}
