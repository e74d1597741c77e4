#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use stp_core::algebra::{dist_v, m_product, norm_v, op_norm_v, v_product, v_sub};
use stp_core::dynamics::{ContinuousMethod, ContinuousSolver};
use stp_core::poly::FormalPoly;
use stp_core::quotient::{reduce_mat, reduce_vec, vec_equivalent};
use stp_core::{Matrix, Vect};

pub fn m(rows: &[&[f64]]) -> Matrix {
    Matrix::from_rows(rows).unwrap()
}

pub fn v(data: &[f64]) -> Vect {
    Vect::new(data.to_vec()).unwrap()
}

pub fn a_2x4() -> Matrix {
    m(&[&[1.0, 2.0, -1.0, 0.0], &[1.0, -2.0, 2.0, -1.0]])
}

pub fn a_star_6() -> Matrix {
    m(&[
        &[1.0, 2.0, 0.0, -1.0, 0.0, 0.0],
        &[1.0, 0.0, 2.0, -1.0, 0.0, 0.0],
        &[0.0, 1.0, 2.0, 0.0, -1.0, 0.0],
        &[1.0, -2.0, 0.0, 2.0, -1.0, 0.0],
        &[1.0, 0.0, -2.0, 2.0, 0.0, -1.0],
        &[0.0, 1.0, -2.0, 0.0, 2.0, -1.0],
    ])
}

pub fn x0_r8() -> Vect {
    v(&[1.0, 0.0, 2.0, -2.0, -1.0, 1.0, 2.0, 0.0])
}

/// Periodic schedule A_0..A_3 with x0 = [1, 0, −1].
pub fn schedule_4() -> Vec<Matrix> {
    vec![
        m(&[&[0.0, 0.0, 1.0, -1.0], &[-1.0, 1.0, 1.0, 1.0]]),
        m(&[&[1.0, 0.0, 1.0, 1.0], &[-1.0, 0.0, 0.0, 1.0]]),
        m(&[&[0.0, 0.0, 1.0, -1.0], &[-1.0, -1.0, -1.0, 1.0]]),
        m(&[&[-1.0, 0.0, 1.0, 1.0], &[-1.0, 0.0, 0.0, 1.0]]),
    ]
}

pub fn schedule_4_states() -> Vec<Vec<f64>> {
    vec![
        vec![1.0, 1.0, 0.0, -1.0, -2.0, -3.0],
        vec![-2.0, -3.0, -4.0, -3.0, -4.0, -4.0],
        vec![1.0, 1.0, 0.0, 4.0, 5.0, 7.0],
        vec![8.0, 10.0, 11.0, 4.0, 6.0, 6.0],
        vec![-2.0, -2.0, 0.0, 12.0, 13.0, 13.0],
        vec![23.0, 23.0, 24.0, 15.0, 15.0, 15.0],
        vec![0.0, 0.0, 0.0, -46.0, -47.0, -47.0],
        vec![-93.0, -93.0, -94.0, -47.0, -47.0, -47.0],
        vec![0.0, 0.0, 0.0, -94.0, -95.0, -95.0],
        vec![-189.0, -189.0, -190.0, -95.0, -95.0, -95.0],
    ]
}

/// Polynomials p = A z_1 + B z_2 and q = C z_{1/2} + D z_1.
pub fn example_pq() -> (FormalPoly, FormalPoly) {
    let a = m(&[&[1.0, 0.0], &[1.0, 1.0]]);
    let b = m(&[&[1.0], &[-1.0]]);
    let c = m(&[&[1.0, -1.0, 2.0, -1.0], &[0.0, 1.0, 0.0, -1.0]]);
    let d = m(&[&[1.0, -1.0, 0.0], &[0.0, 2.0, 1.0], &[2.0, 1.0, 1.0]]);
    (FormalPoly::from_terms([a, b]).unwrap(), FormalPoly::from_terms([c, d]).unwrap())
}

/// `e^{A_* t}` for `A_* = [[3,−1],[−1,1]]` from its closed-form entries.
pub fn exp_2x2_closed_form(t: f64, d_printed: bool) -> Matrix {
    let r2 = 2f64.sqrt();
    let (p, q) = (((2.0 + r2) * t).exp(), ((2.0 - r2) * t).exp());
    let a = (r2 + 1.0) * p + (r2 - 1.0) * q;
    let b = -p + q;
    let c = -p + q;
    let d = if d_printed { (-r2 + 1.0) * p + (r2 + 1.0) * q } else { (r2 - 1.0) * p + (r2 + 1.0) * q };
    m(&[&[a, b], &[c, d]]).scale(1.0 / (2.0 * r2))
}

pub fn rel_close(got: f64, expected: f64, rel: f64) -> bool {
    (got - expected).abs() <= rel * got.abs().max(expected.abs()).max(1.0)
}

pub fn mat_close(a: &Matrix, b: &Matrix, rel: f64) -> bool {
    match a.max_abs_diff(b) {
        Some(d) => d <= rel * a.max_abs().max(b.max_abs()).max(1.0),
        None => false,
    }
}

pub fn vec_close(a: &Vect, b: &Vect, rel: f64) -> bool {
    match a.max_abs_diff(b) {
        Some(d) => d <= rel * a.max_abs().max(b.max_abs()).max(1.0),
        None => false,
    }
}

// strategies

pub fn int_matrix(max_dim: usize) -> impl Strategy<Value = Matrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(|(r, c)| {
        prop::collection::vec(-5i32..=5, r * c)
            .prop_map(move |d| Matrix::new(r, c, d.into_iter().map(f64::from).collect()).unwrap())
    })
}

pub fn int_vect(max_dim: usize) -> impl Strategy<Value = Vect> {
    prop::collection::vec(-5i32..=5, 1..=max_dim).prop_map(|d| Vect::new(d.into_iter().map(f64::from).collect()).unwrap())
}

pub fn real_matrix(max_dim: usize) -> impl Strategy<Value = Matrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(|(r, c)| {
        prop::collection::vec(-1.0f64..1.0, r * c).prop_map(move |d| Matrix::new(r, c, d).unwrap())
    })
}

pub fn real_vect(max_dim: usize) -> impl Strategy<Value = Vect> {
    prop::collection::vec(-1.0f64..1.0, 1..=max_dim).prop_map(|d| Vect::new(d).unwrap())
}

pub fn factor() -> impl Strategy<Value = usize> {
    1usize..=4
}

/// `k × kμ` matrices, which have invariant spaces, with at most 8 columns.
pub fn bounded_matrix() -> impl Strategy<Value = Matrix> {
    let shapes = vec![(1, 1), (1, 2), (1, 3), (1, 4), (2, 2), (2, 4), (2, 6), (2, 8), (3, 3), (3, 6), (4, 4), (4, 8)];
    prop::sample::select(shapes).prop_flat_map(|(r, c)| {
        prop::collection::vec(-1.0f64..1.0, r * c).prop_map(move |d| Matrix::new(r, c, d).unwrap())
    })
}

pub fn small_poly() -> impl Strategy<Value = FormalPoly> {
    prop::collection::vec(int_matrix(3), 1..=2).prop_map(|ms| FormalPoly::from_terms(ms).unwrap())
}

/// Vector pairs that are equivalent about half of the time.
pub fn vect_pair() -> impl Strategy<Value = (Vect, Vect)> {
    prop_oneof![
        (int_vect(8), int_vect(8)),
        (int_vect(4), factor(), factor()).prop_map(|(z, a, b)| (z.kron_ones(a).unwrap(), z.kron_ones(b).unwrap())),
    ]
}

// property checks shared by the test suite and the acceptance runner

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), TestCaseError> {
    if cond {
        Ok(())
    } else {
        Err(TestCaseError::fail(msg()))
    }
}

pub fn check_associativity(a: &Matrix, b: &Matrix, c: &Matrix) -> Result<(), TestCaseError> {
    let left = m_product(&m_product(a, b).unwrap(), c).unwrap();
    let right = m_product(a, &m_product(b, c).unwrap()).unwrap();
    ensure(mat_close(&left, &right, 1e-10), || format!("(AB)C != A(BC) for {a:?} {b:?} {c:?}"))
}

pub fn check_action_law(a: &Matrix, b: &Matrix, x: &Vect) -> Result<(), TestCaseError> {
    let left = v_product(a, &v_product(b, x).unwrap()).unwrap();
    let right = v_product(&m_product(a, b).unwrap(), x).unwrap();
    ensure(vec_close(&left, &right, 1e-10), || format!("A(Bx) != (AB)x for {a:?} {b:?} {x:?}"))
}

pub fn check_transpose_law(a: &Matrix, b: &Matrix) -> Result<(), TestCaseError> {
    let left = m_product(a, b).unwrap().transpose();
    let right = m_product(&b.transpose(), &a.transpose()).unwrap();
    ensure(left == right, || format!("(AB)^T != B^T A^T for {a:?} {b:?}"))
}

pub fn check_norm_invariance(a: &Matrix, x: &Vect, s: usize) -> Result<(), TestCaseError> {
    let nx = norm_v(x);
    let nxs = norm_v(&x.kron_ones(s).unwrap());
    ensure(rel_close(nx, nxs, 1e-10), || format!("|x| = {nx}, |x (x) 1_{s}| = {nxs}"))?;
    let na = op_norm_v(a).unwrap();
    let nas = op_norm_v(&a.kron_identity(s).unwrap()).unwrap();
    ensure(rel_close(na, nas, 1e-10), || format!("|A| = {na}, |A (x) I_{s}| = {nas} for {a:?}"))
}

pub fn check_reduce_round_trip(z: &Vect, za: &Matrix, alpha: usize) -> Result<(), TestCaseError> {
    let x = z.kron_ones(alpha).unwrap();
    let cls = reduce_vec(&x, 1e-9);
    ensure(cls.rep.kron_ones(cls.factor).unwrap() == x, || format!("vector round trip failed for {x:?}"))?;
    ensure(cls.factor % alpha == 0, || format!("factor {} misses block length {alpha}", cls.factor))?;
    ensure(reduce_vec(&cls.rep, 1e-9).factor == 1, || "vector representative reduces further".into())?;

    let a = za.kron_identity(alpha).unwrap();
    let mc = reduce_mat(&a, 1e-9);
    ensure(mc.rep.kron_identity(mc.factor).unwrap() == a, || format!("matrix round trip failed for {a:?}"))?;
    ensure(mc.factor % alpha == 0, || format!("factor {} misses lift {alpha}", mc.factor))?;
    ensure(reduce_mat(&mc.rep, 1e-9).rep == mc.rep, || "matrix reduction not idempotent".into())
}

pub fn check_dist_zero_iff_equivalent(x: &Vect, y: &Vect) -> Result<(), TestCaseError> {
    let d = dist_v(x, y).unwrap();
    let eq = vec_equivalent(x, y, 1e-9);
    ensure((d <= 1e-9) == eq, || format!("dist = {d}, equivalent = {eq} for {x:?} {y:?}"))
}

pub fn check_lie(p: &FormalPoly, q: &FormalPoly, r: &FormalPoly) -> Result<(), TestCaseError> {
    let pq = p.lie_bracket(q).unwrap();
    let qp = q.lie_bracket(p).unwrap();
    ensure(pq.add(&qp).unwrap().is_empty(), || "bracket is not skew-symmetric".into())?;

    let t1 = p.lie_bracket(&q.lie_bracket(r).unwrap()).unwrap();
    let t2 = q.lie_bracket(&r.lie_bracket(p).unwrap()).unwrap();
    let t3 = r.lie_bracket(&pq).unwrap();
    let scale = t1.max_abs().max(t2.max_abs()).max(t3.max_abs()).max(1.0);
    let sum = t1.add(&t2).unwrap().add(&t3).unwrap();
    ensure(sum.max_abs() <= 1e-9 * scale, || format!("Jacobi residual {}", sum.max_abs()))
}

pub fn check_derivative(a: &Matrix, x0: &Vect, t: f64) -> Result<(), TestCaseError> {
    let solver = ContinuousSolver::new(a, x0, ContinuousMethod::Phi).unwrap();
    let h = 1e-4;
    let diff = v_sub(&solver.eval(t + h).unwrap(), &solver.eval(t - h).unwrap()).unwrap().scale(0.5 / h);
    let rhs = v_product(a, &solver.eval(t).unwrap()).unwrap();
    let err = v_sub(&diff, &rhs).unwrap().max_abs();
    ensure(err <= 1e-5 * rhs.max_abs().max(1.0), || format!("derivative error {err} at t = {t} for {a:?} {x0:?}"))
}
