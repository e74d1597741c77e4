//! Formal polynomials `p = Σ_μ A_μ z_μ` of matrices, keyed by shape class,
//! and lazily evaluated analytic series with a certified tail bound.

use std::collections::BTreeMap;

use crate::algebra::{m_add, m_product, m_product_shape, m_sub, op_norm_v, shape_class, v_add, v_product};
use crate::arith::Ratio;
use crate::matrix::{Matrix, Vect};
use crate::{Error, Result};

/// Finite formal polynomial. Every coefficient stored under `μ` has shape
/// class `μ`, and no stored coefficient is identically zero.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FormalPoly {
    terms: BTreeMap<Ratio, Matrix>,
}

impl FormalPoly {
    pub fn zero() -> Self {
        FormalPoly::default()
    }

    /// The unit `[1] z_1`.
    pub fn identity() -> Self {
        FormalPoly::monomial(Matrix::from_raw(1, 1, vec![1.0]))
    }

    pub fn monomial(a: Matrix) -> Self {
        let mut p = FormalPoly::zero();
        if !a.is_zero() {
            p.terms.insert(shape_class(&a), a);
        }
        p
    }

    /// Sums the given coefficients, M-adding those that share a class.
    pub fn from_terms<I: IntoIterator<Item = Matrix>>(coeffs: I) -> Result<Self> {
        let mut p = FormalPoly::zero();
        for a in coeffs {
            p.add_term(a)?;
        }
        Ok(p)
    }

    fn add_term(&mut self, a: Matrix) -> Result<()> {
        if a.is_zero() {
            return Ok(());
        }
        let key = shape_class(&a);
        let merged = match self.terms.remove(&key) {
            Some(existing) => m_add(&existing, &a)?,
            None => a,
        };
        if !merged.is_zero() {
            self.terms.insert(key, merged);
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, mu: Ratio) -> Option<&Matrix> {
        self.terms.get(&mu)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Ratio, &Matrix)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    /// `p ⊞ q`.
    pub fn add(&self, other: &FormalPoly) -> Result<FormalPoly> {
        let mut out = self.clone();
        for a in other.terms.values() {
            out.add_term(a.clone())?;
        }
        Ok(out)
    }

    /// `p ⊟ q`.
    pub fn sub(&self, other: &FormalPoly) -> Result<FormalPoly> {
        let mut out = self.clone();
        for (key, b) in &other.terms {
            let merged = match out.terms.remove(key) {
                Some(a) => m_sub(&a, b)?,
                None => b.neg(),
            };
            if !merged.is_zero() {
                out.terms.insert(*key, merged);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: f64) -> FormalPoly {
        if c == 0.0 {
            return FormalPoly::zero();
        }
        FormalPoly { terms: self.terms.iter().map(|(k, a)| (*k, a.scale(c))).collect() }
    }

    /// Convolution product: the coefficient at `μ` collects `A_ξ ⋉ B_η` over
    /// `ξη = μ`.
    pub fn mul(&self, other: &FormalPoly) -> Result<FormalPoly> {
        let mut out = FormalPoly::zero();
        for a in self.terms.values() {
            for b in other.terms.values() {
                out.add_term(m_product(a, b)?)?;
            }
        }
        Ok(out)
    }

    /// `[p, q] = p⋉q ⊟ q⋉p`.
    pub fn lie_bracket(&self, other: &FormalPoly) -> Result<FormalPoly> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// `Σ_μ A_μ ⋉⃗ x`, folded by V-addition. The zero polynomial maps `x` to
    /// the zero vector of its own dimension.
    pub fn apply(&self, x: &Vect) -> Result<Vect> {
        let mut acc: Option<Vect> = None;
        for a in self.terms.values() {
            let y = v_product(a, x)?;
            acc = Some(match acc {
                Some(s) => v_add(&s, &y)?,
                None => y,
            });
        }
        match acc {
            Some(v) => Ok(v),
            None => Vect::zeros(x.dim()),
        }
    }

    /// `Σ_μ ‖A_μ‖_V`, finite for every stored polynomial.
    pub fn norm_sum(&self) -> Result<f64> {
        self.terms.values().map(op_norm_v).sum()
    }

    /// Largest absolute coefficient entry; zero for the empty polynomial.
    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(Matrix::max_abs).fold(0.0, f64::max)
    }
}

/// Coefficient rule of a power series `Σ c_i A^i z^i`.
#[derive(Clone, Debug, PartialEq)]
pub enum Generator {
    Exp,
    Sin,
    Cos,
    /// Explicit coefficients `c_0, c_1, …`; missing ones are zero.
    Custom(Vec<f64>),
}

impl Generator {
    pub fn coeff(&self, i: usize) -> f64 {
        let inv_fact = || (1..=i).fold(1.0, |acc, k| acc / k as f64);
        match self {
            Generator::Exp => inv_fact(),
            Generator::Sin if i % 2 == 1 => {
                if (i / 2) % 2 == 0 {
                    inv_fact()
                } else {
                    -inv_fact()
                }
            }
            Generator::Cos if i % 2 == 0 => {
                if (i / 2) % 2 == 0 {
                    inv_fact()
                } else {
                    -inv_fact()
                }
            }
            Generator::Sin | Generator::Cos => 0.0,
            Generator::Custom(c) => c.get(i).copied().unwrap_or(0.0),
        }
    }
}

/// Default truncation order for analytic generators.
pub const DEFAULT_ORDER: usize = 30;

/// Default cap on intermediate state dimension in [`TruncatedSeries::apply`].
pub const DEFAULT_MAX_STATE_DIM: usize = 1 << 20;

/// `Σ_{i ≤ N} c_i A^i z^i` with a bound on the discarded tail.
///
/// Coefficients are never materialized unless [`TruncatedSeries::to_poly`]
/// is called, since powers of a non-square base grow geometrically.
#[derive(Clone, Debug)]
pub struct TruncatedSeries {
    base: Matrix,
    generator: Generator,
    order: usize,
    base_norm: f64,
    tail_bound: f64,
}

/// `Σ_{i>n} a^i / i!`, summed until the term ratio drops below one half and
/// closed with a geometric bound.
fn exp_tail(a: f64, n: usize) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    let ln_term = (n + 1) as f64 * a.ln() - (1..=n + 1).map(|k| (k as f64).ln()).sum::<f64>();
    let mut term = ln_term.exp();
    let mut sum = 0.0;
    let mut i = n + 1;
    loop {
        sum += term;
        let ratio = a / (i + 1) as f64;
        if ratio <= 0.5 {
            return sum + term * ratio / (1.0 - ratio);
        }
        if !sum.is_finite() || i > 10_000_000 {
            return f64::INFINITY;
        }
        term *= ratio;
        i += 1;
    }
}

/// Builds the truncated series of `generator` at `a`.
pub fn analytic_poly(a: &Matrix, generator: Generator, order: usize) -> Result<TruncatedSeries> {
    if order == 0 {
        return Err(Error::InvalidInput("truncation order must be at least 1".into()));
    }
    let base_norm = op_norm_v(a)?;
    let tail_bound = match &generator {
        Generator::Exp | Generator::Sin | Generator::Cos => exp_tail(base_norm, order),
        Generator::Custom(c) => {
            (order + 1..c.len()).map(|i| c[i].abs() * base_norm.powi(i as i32)).sum()
        }
    };
    Ok(TruncatedSeries { base: a.clone(), generator, order, base_norm, tail_bound })
}

impl TruncatedSeries {
    pub fn base(&self) -> &Matrix {
        &self.base
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Upper bound on `Σ_{i>N} |c_i| ‖A‖_V^i`.
    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    /// Bound on the summed coefficient norms: the finite part plus the tail.
    pub fn norm_sum_bound(&self) -> f64 {
        let finite: f64 =
            (0..=self.order).map(|i| self.generator.coeff(i).abs() * self.base_norm.powi(i as i32)).sum();
        finite + self.tail_bound
    }

    /// Materializes `Σ_{i ≤ N} c_i A^i` as a formal polynomial (`A^0 = [1]`).
    pub fn to_poly(&self) -> Result<FormalPoly> {
        let mut shape = (1, 1);
        for _ in 0..self.order {
            shape = m_product_shape(shape, self.base.shape())?;
        }
        let mut out = FormalPoly::zero();
        let mut power = Matrix::from_raw(1, 1, vec![1.0]);
        for i in 0..=self.order {
            if i > 0 {
                power = m_product(&power, &self.base)?;
            }
            let c = self.generator.coeff(i);
            if c != 0.0 {
                out.add_term(power.scale(c))?;
            }
        }
        Ok(out)
    }

    /// `Σ_{i ≤ N} c_i A^i ⋉⃗ x` by repeated V-products, with the default
    /// dimension cap.
    pub fn apply(&self, x: &Vect) -> Result<Vect> {
        self.apply_capped(x, DEFAULT_MAX_STATE_DIM)
    }

    /// As [`TruncatedSeries::apply`], failing once an intermediate state
    /// would exceed `max_dim`.
    pub fn apply_capped(&self, x: &Vect, max_dim: usize) -> Result<Vect> {
        let mut xi = x.clone();
        let c0 = self.generator.coeff(0);
        let mut acc = if c0 != 0.0 { Some(xi.scale(c0)) } else { None };
        for i in 1..=self.order {
            xi = v_product(&self.base, &xi)?;
            if xi.dim() > max_dim {
                return Err(Error::DimensionOverflow { value: xi.dim() as u128, limit: max_dim as u64 });
            }
            let c = self.generator.coeff(i);
            if c == 0.0 {
                continue;
            }
            let term = xi.scale(c);
            acc = Some(match acc {
                Some(s) => v_add(&s, &term)?,
                None => term,
            });
            if acc.as_ref().is_some_and(|s| s.dim() > max_dim) {
                return Err(Error::DimensionOverflow { value: acc.unwrap().dim() as u128, limit: max_dim as u64 });
            }
        }
        match acc {
            Some(v) => Ok(v),
            None => Vect::zeros(x.dim()),
        }
    }
}
