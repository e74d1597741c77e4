//! Dimension analysis and trajectory solvers for `x(t+1) = A(t) ⋉⃗ x(t)` and
//! `ẋ = A ⋉⃗ x`.

use serde::Serialize;

use crate::algebra::{norm_v, v_add, v_product, v_product_mat};
use crate::arith::{gcd_lcm, lcm};
use crate::expm::{expm, phi_sequence};
use crate::matrix::{Matrix, Vect};
use crate::poly::{analytic_poly, Generator};
use crate::{Error, Result};

/// Rows divide columns, so every trajectory settles in a fixed dimension.
pub fn is_dimension_bounded(a: &Matrix) -> bool {
    a.cols() % a.rows() == 0
}

fn require_bounded(a: &Matrix) -> Result<()> {
    if is_dimension_bounded(a) {
        Ok(())
    } else {
        Err(Error::NotDimensionBounded { rows: a.rows(), cols: a.cols() })
    }
}

/// Dimension of `A ⋉⃗ x` for `x` of dimension `r`, computed without overflow.
pub fn next_dim(a: &Matrix, r: usize) -> Result<u128> {
    let (_, l) = gcd_lcm(a.cols() as u64, r as u64)?;
    Ok(a.rows() as u128 * (l / a.cols() as u64) as u128)
}

/// Dimensions visited by a trajectory of a dimension-bounded `k × kμx`
/// matrix, from `r_0` up to the first invariant dimension `r_*`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionProfile {
    pub k: usize,
    pub mu_x: usize,
    pub r_seq: Vec<usize>,
    pub i_star: usize,
    pub r_star: usize,
}

pub fn dimension_profile(a: &Matrix, r0: usize) -> Result<DimensionProfile> {
    require_bounded(a)?;
    if r0 == 0 {
        return Err(Error::ZeroDimension);
    }
    let mut r_seq = vec![r0];
    loop {
        let r = *r_seq.last().unwrap();
        let next = next_dim(a, r)? as usize;
        if next == r {
            break;
        }
        r_seq.push(next);
    }
    let i_star = r_seq.len() - 1;
    let r_star = r_seq[i_star];
    Ok(DimensionProfile { k: a.rows(), mu_x: a.cols() / a.rows(), r_seq, i_star, r_star })
}

/// Whether `V_r` is mapped into itself: `r = lcm(r, kμx)/μx` with `k | r`.
pub fn is_invariant_dim(a: &Matrix, r: usize) -> Result<bool> {
    require_bounded(a)?;
    let (k, mu_x) = (a.rows(), a.cols() / a.rows());
    Ok(r % k == 0 && lcm(r, a.cols())? / mu_x == r)
}

/// The square matrix of `A` acting on an invariant `V_r`, i.e. the columns
/// `A ⋉⃗ δ_r^i`.
pub fn restriction(a: &Matrix, r: usize) -> Result<Matrix> {
    if !is_invariant_dim(a, r)? {
        return Err(Error::NotInvariant { r, rows: a.rows(), cols: a.cols() });
    }
    v_product_mat(a, &Matrix::identity(r)?)
}

/// `(A ⊗ I_{r/k})(I_r ⊗ 1_{μx})` with materialized factors.
pub fn restriction_reference(a: &Matrix, r: usize) -> Result<Matrix> {
    if !is_invariant_dim(a, r)? {
        return Err(Error::NotInvariant { r, rows: a.rows(), cols: a.cols() });
    }
    let mu_x = a.cols() / a.rows();
    let spread = Matrix::identity(r)?.kron_ones(mu_x)?;
    a.kron_identity(r / a.rows())?.matmul(&spread)
}

/// Matrix sequence driving a discrete system.
#[derive(Clone, Debug, PartialEq)]
pub enum Schedule {
    Constant(Matrix),
    /// `A(t) = list[t mod len]`.
    Periodic(Vec<Matrix>),
}

impl Schedule {
    pub fn periodic(list: Vec<Matrix>) -> Result<Self> {
        if list.is_empty() {
            return Err(Error::InvalidInput("periodic schedule needs at least one matrix".into()));
        }
        Ok(Schedule::Periodic(list))
    }

    pub fn at(&self, t: usize) -> &Matrix {
        match self {
            Schedule::Constant(a) => a,
            Schedule::Periodic(list) => &list[t % list.len()],
        }
    }

    /// The single matrix of a time-invariant schedule.
    pub fn constant(&self) -> Option<&Matrix> {
        match self {
            Schedule::Constant(a) => Some(a),
            Schedule::Periodic(list) if list.iter().all(|m| m == &list[0]) => Some(&list[0]),
            Schedule::Periodic(_) => None,
        }
    }
}

/// One state of a trajectory; `t` is the step index for discrete systems.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectorySample {
    pub t: f64,
    pub state: Vect,
}

/// Default cap on the state dimension during simulation.
pub const DEFAULT_MAX_STATE_DIM: usize = 1 << 20;

pub(crate) fn check_step_dim(a: &Matrix, r: usize, step: usize, max_dim: usize) -> Result<()> {
    let dim = next_dim(a, r)?;
    if dim > max_dim as u128 {
        return Err(Error::TrajectoryOverflow { step, dim, limit: max_dim as u64 });
    }
    Ok(())
}

/// `x(0), …, x(steps)` of `x(t+1) = A(t) ⋉⃗ x(t)`.
pub fn simulate_discrete(schedule: &Schedule, x0: &Vect, steps: usize, max_dim: usize) -> Result<Vec<TrajectorySample>> {
    let mut out = Vec::with_capacity(steps + 1);
    let mut x = x0.clone();
    out.push(TrajectorySample { t: 0.0, state: x.clone() });
    for t in 0..steps {
        let a = schedule.at(t);
        check_step_dim(a, x.dim(), t + 1, max_dim)?;
        x = v_product(a, &x)?;
        out.push(TrajectorySample { t: (t + 1) as f64, state: x.clone() });
    }
    Ok(out)
}

/// How the tail of the exact continuous solution is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContinuousMethod {
    /// `t^s φ_s(A_* t) x_s`, valid for every dimension-bounded `A`.
    Phi,
    /// `A_*^{-s} (e^{A_* t} − Σ_{j<s} t^j A_*^j / j!) x_s`; needs `A_*` invertible.
    Inverse,
}

/// Closed-form solution of `ẋ = A ⋉⃗ x` from a fixed initial state.
///
/// With `x_j = A^j ⋉⃗ x_0` and `s = i_*`, the solution is the V-sum of the
/// transient terms `t^j/j! x_j` for `j < s` and `t^s φ_s(A_* t) x_s`.
#[derive(Clone, Debug)]
pub struct ContinuousSolver {
    profile: DimensionProfile,
    transient: Vec<Vect>,
    a_star: Matrix,
    a_star_inv_pow: Option<Matrix>,
    method: ContinuousMethod,
}

fn inv_factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc / k as f64)
}

impl ContinuousSolver {
    pub fn new(a: &Matrix, x0: &Vect, method: ContinuousMethod) -> Result<Self> {
        let profile = dimension_profile(a, x0.dim())?;
        let mut transient = vec![x0.clone()];
        for _ in 0..profile.i_star {
            let next = v_product(a, transient.last().unwrap())?;
            transient.push(next);
        }
        let a_star = restriction(a, profile.r_star)?;
        let a_star_inv_pow = match method {
            ContinuousMethod::Phi => None,
            ContinuousMethod::Inverse => Some(a_star.inverse()?.powi(profile.i_star)?),
        };
        Ok(ContinuousSolver { profile, transient, a_star, a_star_inv_pow, method })
    }

    pub fn profile(&self) -> &DimensionProfile {
        &self.profile
    }

    pub fn a_star(&self) -> &Matrix {
        &self.a_star
    }

    /// `x_0, …, x_s`.
    pub fn transient(&self) -> &[Vect] {
        &self.transient
    }

    fn fold_terms(&self, poly: impl Fn(usize) -> f64, tail: Vect) -> Result<Vect> {
        let s = self.profile.i_star;
        let mut acc = tail;
        for j in (0..s).rev() {
            acc = v_add(&self.transient[j].scale(poly(j)), &acc)?;
        }
        Ok(acc)
    }

    /// `x(t)`.
    pub fn eval(&self, t: f64) -> Result<Vect> {
        let s = self.profile.i_star;
        let xs = &self.transient[s];
        let tail = match self.method {
            ContinuousMethod::Phi => {
                let phi = phi_sequence(&self.a_star, t, s)?.pop().unwrap();
                phi.mul_vec(xs)?.scale(t.powi(s as i32))
            }
            ContinuousMethod::Inverse => {
                let e = expm(&self.a_star.scale(t))?;
                let mut partial = Matrix::zeros(xs.dim(), xs.dim())?;
                let mut power = Matrix::identity(xs.dim())?;
                for j in 0..s {
                    partial = partial.add(&power.scale(t.powi(j as i32) * inv_factorial(j)))?;
                    power = power.matmul(&self.a_star)?;
                }
                let inv = self.a_star_inv_pow.as_ref().expect("inverse method");
                inv.matmul(&e.sub(&partial)?)?.mul_vec(xs)?
            }
        };
        self.fold_terms(|j| t.powi(j as i32) * inv_factorial(j), tail)
    }

    /// `∫_0^σ x(τ) dτ`, term by term: `σ^{j+1}/(j+1)! x_j` for the transient
    /// part and `σ^{s+1} φ_{s+1}(A_* σ) x_s` for the tail.
    pub fn integral(&self, sigma: f64) -> Result<Vect> {
        let s = self.profile.i_star;
        let phi = phi_sequence(&self.a_star, sigma, s + 1)?.pop().unwrap();
        let tail = phi.mul_vec(&self.transient[s])?.scale(sigma.powi(s as i32 + 1));
        self.fold_terms(|j| sigma.powi(j as i32 + 1) * inv_factorial(j + 1), tail)
    }
}

/// Exact solution of `ẋ = A ⋉⃗ x` at each time, by the φ-function path.
pub fn continuous_solution(a: &Matrix, x0: &Vect, ts: &[f64]) -> Result<Vec<TrajectorySample>> {
    continuous_solution_with(a, x0, ts, ContinuousMethod::Phi)
}

pub fn continuous_solution_with(
    a: &Matrix,
    x0: &Vect,
    ts: &[f64],
    method: ContinuousMethod,
) -> Result<Vec<TrajectorySample>> {
    let solver = ContinuousSolver::new(a, x0, method)?;
    ts.iter().map(|&t| Ok(TrajectorySample { t, state: solver.eval(t)? })).collect()
}

/// Continuous solution for a schedule; only time-invariant schedules have
/// a closed form.
pub fn continuous_solution_scheduled(schedule: &Schedule, x0: &Vect, ts: &[f64]) -> Result<Vec<TrajectorySample>> {
    match schedule.constant() {
        Some(a) => continuous_solution(a, x0, ts),
        None => Err(Error::Unsupported("time-varying continuous-time systems have no closed-form solver".into())),
    }
}

/// A state from the truncated exponential series with its error bound in
/// the dimension-free norm.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSample {
    pub t: f64,
    pub state: Vect,
    pub error_bound: f64,
}

/// `Σ_{i ≤ order} t^i/i! A^i ⋉⃗ x_0` for any `A`, with
/// `‖error‖_V ≤ tail · ‖x_0‖_V`.
pub fn continuous_solution_truncated(
    a: &Matrix,
    x0: &Vect,
    ts: &[f64],
    order: usize,
    max_dim: usize,
) -> Result<Vec<TruncatedSample>> {
    ts.iter()
        .map(|&t| {
            let series = analytic_poly(&a.scale(t), Generator::Exp, order)?;
            let state = series.apply_capped(x0, max_dim)?;
            Ok(TruncatedSample { t, state, error_bound: series.tail_bound() * norm_v(x0) })
        })
        .collect()
}
