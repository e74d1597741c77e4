//! Controlled cross-dimensional systems
//!
//! ```text
//! x(t+1) = A ⋉⃗ x(t) ⊞ B u(t)        ẋ = A ⋉⃗ x ⊞ B u
//! y(t)   = C ⋉⃗ x(t)
//! ```
//!
//! Verdicts are computed on the stationary realization, the ordinary square
//! system the dynamics reduce to once the state enters its invariant space.

use crate::algebra::{v_add, v_product, v_product_mat, v_sub};
use crate::arith::gcd;
use crate::dynamics::{check_step_dim, dimension_profile, next_dim, restriction, ContinuousMethod, ContinuousSolver, TrajectorySample};
use crate::matrix::{orthonormal_basis, projection_residual, Matrix, Vect};
use crate::quotient::block_constant;
use crate::{Error, Result};

/// Relative singular-value threshold for rank decisions.
pub const RANK_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TimeKind {
    Discrete,
    Continuous,
}

/// `(A, B, C)` with `A` of size `m × n`, `B` of size `m × p` and `C` of
/// size `q × m`. `B` and `C` are optional so uncontrolled systems fit too.
#[derive(Clone, Debug, PartialEq)]
pub struct ControlSystem {
    a: Matrix,
    b: Option<Matrix>,
    c: Option<Matrix>,
    time_kind: TimeKind,
}

impl ControlSystem {
    pub fn new(a: Matrix, b: Option<Matrix>, c: Option<Matrix>, time_kind: TimeKind) -> Result<Self> {
        let m = a.rows();
        if let Some(b) = &b {
            if b.rows() != m {
                return Err(Error::ShapeMismatch(format!("B has {} rows, A has {m}", b.rows())));
            }
        }
        if let Some(c) = &c {
            if c.cols() != m {
                return Err(Error::ShapeMismatch(format!("C has {} columns, A has {m} rows", c.cols())));
            }
        }
        Ok(ControlSystem { a, b, c, time_kind })
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn b(&self) -> Result<&Matrix> {
        self.b.as_ref().ok_or_else(|| Error::InvalidInput("system has no B matrix".into()))
    }

    pub fn c(&self) -> Result<&Matrix> {
        self.c.as_ref().ok_or_else(|| Error::InvalidInput("system has no C matrix".into()))
    }

    pub fn time_kind(&self) -> TimeKind {
        self.time_kind
    }
}

/// `(A_s, B_s, C_s)` on `V_{r_*}`.
#[derive(Clone, Debug, PartialEq)]
pub struct StationaryRealization {
    pub r_star: usize,
    pub a_s: Matrix,
    pub b_s: Option<Matrix>,
    pub c_s: Option<Matrix>,
    /// Dimensions `r_0, …, r_*` visited on the way in.
    pub transient_dims: Vec<usize>,
}

/// Outcome of a Kalman rank test. `full_rank` is the controllability or
/// observability verdict.
#[derive(Clone, Debug, PartialEq)]
pub struct RankReport {
    pub full_rank: bool,
    pub rank: usize,
    pub dim: usize,
    pub basis: Vec<Vect>,
}

pub fn stationary_realization(sys: &ControlSystem, r0: usize) -> Result<StationaryRealization> {
    let profile = dimension_profile(&sys.a, r0)?;
    let (r_star, m) = (profile.r_star, sys.a.rows());
    if r_star % m != 0 {
        return Err(Error::ShapeMismatch(format!("invariant dimension {r_star} is not a multiple of {m}")));
    }
    let j = r_star / m;
    Ok(StationaryRealization {
        r_star,
        a_s: restriction(&sys.a, r_star)?,
        b_s: sys.b.as_ref().map(|b| b.kron_ones(j)).transpose()?,
        c_s: sys.c.as_ref().map(|c| c.kron_identity(j)).transpose()?,
        transient_dims: profile.r_seq,
    })
}

fn rank_report(k: &Matrix, dim: usize) -> Result<RankReport> {
    let (rank, mut pivots) = k.rank_with_pivots(RANK_TOL)?;
    pivots.sort_unstable();
    let basis = pivots.into_iter().map(|j| k.col(j)).collect();
    Ok(RankReport { full_rank: rank == dim, rank, dim, basis })
}

fn hstack(blocks: &[Matrix]) -> Result<Matrix> {
    let rows = blocks[0].rows();
    let cols = blocks.iter().map(Matrix::cols).sum();
    let mut out = Matrix::zeros(rows, cols)?;
    let mut offset = 0;
    for blk in blocks {
        for i in 0..rows {
            for j in 0..blk.cols() {
                out.set(i, offset + j, blk.get(i, j));
            }
        }
        offset += blk.cols();
    }
    Ok(out)
}

/// Kalman rank test of `(A_s, B_s)`; the basis spans the reachable subspace
/// of `V_{r_*}`.
pub fn is_controllable(sys: &ControlSystem, r0: usize) -> Result<RankReport> {
    sys.b()?;
    let real = stationary_realization(sys, r0)?;
    let mut blocks = vec![real.b_s.expect("B present")];
    for _ in 1..real.r_star {
        let next = real.a_s.matmul(blocks.last().unwrap())?;
        blocks.push(next);
    }
    rank_report(&hstack(&blocks)?, real.r_star)
}

/// Kalman rank test of `(A_s, C_s)`; the basis spans the row space of the
/// observability matrix.
pub fn is_observable(sys: &ControlSystem, r0: usize) -> Result<RankReport> {
    sys.c()?;
    let real = stationary_realization(sys, r0)?;
    let a_t = real.a_s.transpose();
    let mut blocks = vec![real.c_s.expect("C present").transpose()];
    for _ in 1..real.r_star {
        let next = a_t.matmul(blocks.last().unwrap())?;
        blocks.push(next);
    }
    rank_report(&hstack(&blocks)?, real.r_star)
}

/// Reachable subspace of the transient layer `V_{r_k}`, `0 < k < i_*`:
/// the span of `B, A ⋉⃗ B, …, A^{k−1} ⋉⃗ B` embedded by `⊗ 1_{r_k/m}`.
pub fn reachable_layer(sys: &ControlSystem, r0: usize, k: usize) -> Result<RankReport> {
    let b = sys.b()?;
    let profile = dimension_profile(&sys.a, r0)?;
    if k == 0 || k >= profile.i_star {
        return Err(Error::LayerOutOfRange { k, i_star: profile.i_star });
    }
    let (r_k, m) = (profile.r_seq[k], sys.a.rows());
    if r_k % m != 0 {
        return Err(Error::ShapeMismatch(format!("layer dimension {r_k} is not a multiple of {m}")));
    }
    let mut blocks = vec![b.clone()];
    for _ in 1..k {
        let next = v_product_mat(&sys.a, blocks.last().unwrap())?;
        blocks.push(next);
    }
    let stacked = hstack(&blocks)?;
    let (rank, mut pivots) = stacked.rank_with_pivots(RANK_TOL)?;
    pivots.sort_unstable();
    let basis = pivots
        .into_iter()
        .map(|j| stacked.col(j).kron_ones(r_k / m))
        .collect::<Result<Vec<_>>>()?;
    Ok(RankReport { full_rank: rank == r_k, rank, dim: r_k, basis })
}

/// Piecewise-constant input: `values[i]` holds on `[breakpoints[i],
/// breakpoints[i+1])`, the last value holds forever, and the input is zero
/// before the first breakpoint.
#[derive(Clone, Debug, PartialEq)]
pub struct ZohSignal {
    breakpoints: Vec<f64>,
    values: Vec<Vect>,
}

impl ZohSignal {
    pub fn new(breakpoints: Vec<f64>, values: Vec<Vect>) -> Result<Self> {
        if breakpoints.is_empty() || breakpoints.len() != values.len() {
            return Err(Error::InvalidInput(format!(
                "{} breakpoints for {} values",
                breakpoints.len(),
                values.len()
            )));
        }
        if breakpoints.iter().any(|b| !b.is_finite()) {
            return Err(Error::InvalidInput("breakpoints must be finite".into()));
        }
        if breakpoints.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidInput("breakpoints must be strictly increasing".into()));
        }
        let p = values[0].dim();
        if values.iter().any(|v| v.dim() != p) {
            return Err(Error::InvalidInput("input values have different dimensions".into()));
        }
        Ok(ZohSignal { breakpoints, values })
    }

    pub fn constant(u: Vect) -> Self {
        ZohSignal { breakpoints: vec![0.0], values: vec![u] }
    }

    pub fn dim(&self) -> usize {
        self.values[0].dim()
    }

    /// `u(τ)`, or `None` before the first breakpoint.
    pub fn at(&self, tau: f64) -> Option<&Vect> {
        let idx = self.breakpoints.partition_point(|&b| b <= tau);
        idx.checked_sub(1).map(|i| &self.values[i])
    }

    /// Hold intervals `(start, end, value index)` clipped to `[0, t]`.
    fn intervals(&self, t: f64) -> impl Iterator<Item = (f64, f64, usize)> + '_ {
        (0..self.values.len()).filter_map(move |i| {
            let start = self.breakpoints[i].max(0.0);
            let end = self.breakpoints.get(i + 1).copied().unwrap_or(f64::INFINITY).min(t);
            (end > start).then_some((start, end, i))
        })
    }
}

/// A state with the matching output `y = C ⋉⃗ x` when `C` is present.
#[derive(Clone, Debug, PartialEq)]
pub struct ControlSample {
    pub t: f64,
    pub state: Vect,
    pub output: Option<Vect>,
}

fn check_input_dim(b: &Matrix, u: &ZohSignal) -> Result<()> {
    if u.dim() != b.cols() {
        return Err(Error::ShapeMismatch(format!("input has dimension {}, B has {} columns", u.dim(), b.cols())));
    }
    Ok(())
}

/// `x(t+1) = A ⋉⃗ x(t) ⊞ B u(t)` for `steps` steps, with `u(t)` read from the
/// signal at time `t` (zero before its first breakpoint).
pub fn simulate_discrete_control(
    sys: &ControlSystem,
    x0: &Vect,
    u: &ZohSignal,
    steps: usize,
    max_dim: usize,
) -> Result<Vec<ControlSample>> {
    let b = sys.b()?;
    check_input_dim(b, u)?;
    let output = |x: &Vect| sys.c.as_ref().map(|c| v_product(c, x)).transpose();
    let mut x = x0.clone();
    let mut out = vec![ControlSample { t: 0.0, output: output(&x)?, state: x.clone() }];
    for t in 0..steps {
        check_step_dim(&sys.a, x.dim(), t + 1, max_dim)?;
        let ax = v_product(&sys.a, &x)?;
        x = match u.at(t as f64) {
            Some(ut) => v_add(&ax, &b.mul_vec(ut)?)?,
            None => ax,
        };
        if x.dim() > max_dim {
            return Err(Error::TrajectoryOverflow { step: t + 1, dim: x.dim() as u128, limit: max_dim as u64 });
        }
        out.push(ControlSample { t: (t + 1) as f64, output: output(&x)?, state: x.clone() });
    }
    Ok(out)
}

/// `x(t) = e^{At} ⋉⃗ x_0 ⊞ ∫_0^t e^{A(t−τ)} ⋉⃗ B u(τ) dτ` for a
/// zero-order-hold input, integrated exactly on each hold interval.
pub fn continuous_forced_response(
    sys: &ControlSystem,
    x0: &Vect,
    u: &ZohSignal,
    ts: &[f64],
) -> Result<Vec<TrajectorySample>> {
    let b = sys.b()?;
    check_input_dim(b, u)?;
    if ts.iter().any(|t| !t.is_finite() || *t < 0.0) {
        return Err(Error::InvalidInput("times must be finite and non-negative".into()));
    }
    let drift = ContinuousSolver::new(&sys.a, x0, ContinuousMethod::Phi)?;
    let forcing: Vec<Option<ContinuousSolver>> = u
        .values
        .iter()
        .map(|ui| {
            let w = b.mul_vec(ui)?;
            if w.is_zero() {
                Ok(None)
            } else {
                ContinuousSolver::new(&sys.a, &w, ContinuousMethod::Phi).map(Some)
            }
        })
        .collect::<Result<_>>()?;
    ts.iter()
        .map(|&t| {
            let mut x = drift.eval(t)?;
            for (start, end, idx) in u.intervals(t) {
                if let Some(solver) = &forcing[idx] {
                    let piece = v_sub(&solver.integral(t - start)?, &solver.integral(t - end)?)?;
                    x = v_add(&x, &piece)?;
                }
            }
            Ok(TrajectorySample { t, state: x })
        })
        .collect()
}

/// Block length `r1/g` and class dimension `g` for `A` acting on `V_r`.
fn class_blocks(a: &Matrix, r: usize) -> Result<(usize, usize)> {
    let r1 = next_dim(a, r)?;
    let r1 = usize::try_from(r1).map_err(|_| Error::DimensionOverflow { value: r1, limit: u64::MAX })?;
    let g = gcd(r as u64, r1 as u64) as usize;
    Ok((r1 / g, g))
}

/// Square matrix on `V_r` reproducing the class dynamics `x̄ ↦ ⟨A⟩ ⋉⃗ x̄`,
/// or `None` when the class of `V_r` is not invariant.
///
/// Column `i` is the reduced image of `A ⋉⃗ δ_r^i`, re-embedded in `V_r`.
pub fn projective_stationary_realization(a: &Matrix, r: usize, tol: f64) -> Result<Option<Matrix>> {
    let (block, g) = class_blocks(a, r)?;
    let images = v_product_mat(a, &Matrix::identity(r)?)?;
    let mut cols = Vec::with_capacity(r);
    for i in 0..r {
        match block_constant(images.col(i).data(), block, tol) {
            Some(reps) => cols.push(Vect::from_raw(reps).kron_ones(r / g)?),
            None => return Ok(None),
        }
    }
    Matrix::from_columns(&cols).map(Some)
}

/// Whether the class of `span(basis) ⊂ V_r` is mapped into itself.
pub fn subspace_class_invariant(a: &Matrix, basis: &[Vect], tol: f64) -> Result<bool> {
    let r = match basis.first() {
        Some(b) => b.dim(),
        None => return Err(Error::InvalidInput("empty basis".into())),
    };
    if basis.iter().any(|b| b.dim() != r) {
        return Err(Error::ShapeMismatch("basis vectors have different dimensions".into()));
    }
    let (block, g) = class_blocks(a, r)?;
    let q = orthonormal_basis(basis, 1e-12);
    for b in basis {
        let w = v_product(a, b)?;
        let Some(reps) = block_constant(w.data(), block, tol) else {
            return Ok(false);
        };
        let embedded = Vect::from_raw(reps).kron_ones(r / g)?;
        if projection_residual(&q, &embedded) > tol {
            return Ok(false);
        }
    }
    Ok(true)
}
