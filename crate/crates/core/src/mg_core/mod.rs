//! Multigrid solver stack on a nested B-spline hierarchy: Chebyshev
//! smoothing, the progressive-precision V(1,0)-cycle, iterative refinement,
//! FMG and progressive FMG.
//!
//! Levels are 1-based with level 1 the coarsest. Each level keeps the exact
//! operator next to its quantized copies: `a_check` for the refinement
//! residual and `a_dot` (a further rounding of `a_check`) inside the V-cycle.

mod chebyshev;
mod galerkin;
mod ops;
mod pfmg;
mod propagation;
mod solve;

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sparse_linalg::{lambda_max_power, norm_and_cond, ConditionInfo, SparseMatrix, Vector};
use crate::spline_fem::{
    apply_dirichlet, assemble_load, assemble_stiffness, build_prolongation, model_exact, model_load, SplineSpace,
};
use crate::vprec::{PrecisionCtx, Real};

pub use chebyshev::{chebyshev_smooth, ChebyshevCoeffs};
pub use galerkin::{galerkin_coarse, galerkin_exact_abs};
pub use pfmg::{pfmg, target_level, PfmgOptions, PfmgOutcome, PfmgStep, PFMG_FIRST_CHECK};
pub use propagation::{build_error_propagation, rho_v, tune_spectrum_fraction, PROPAGATION_DIM_CAP};
pub use solve::{IrOptions, IrOutcome, Stagnation, StopReason};

/// Spectrum fraction used when nothing has been tuned.
pub const DEFAULT_SPECTRUM_FRACTION: f64 = 0.3;

/// The four working precisions of one level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelPrecision {
    /// Iterate updates in refinement.
    pub eps: PrecisionCtx,
    /// Refinement residual.
    pub eps_bar: PrecisionCtx,
    /// Storage of `A`, `b` and `P`.
    pub eps_check: PrecisionCtx,
    /// Everything inside the V-cycle on this level.
    pub eps_dot: PrecisionCtx,
}

impl LevelPrecision {
    pub fn uniform(ctx: PrecisionCtx) -> Self {
        LevelPrecision { eps: ctx, eps_bar: ctx, eps_check: ctx, eps_dot: ctx }
    }

    pub fn base() -> Self {
        Self::uniform(PrecisionCtx::BASE)
    }

    /// `low` for updates and the V-cycle, base precision for the residual and storage.
    pub fn mixed(low: PrecisionCtx) -> Self {
        LevelPrecision { eps: low, eps_bar: PrecisionCtx::BASE, eps_check: PrecisionCtx::BASE, eps_dot: low }
    }
}

/// Right-hand side and, when known, the exact solution `u(xi, deriv)`.
#[derive(Clone, Copy)]
pub struct Problem<T> {
    pub load: fn(T) -> T,
    pub exact: Option<fn(T, usize) -> T>,
}

impl<T: Real> Problem<T> {
    /// `u'''' = -16 pi^4 cos(2 pi xi)`, `u = 1 - cos(2 pi xi)`.
    pub fn model() -> Self {
        Problem { load: model_load::<T>, exact: Some(model_exact::<T>) }
    }
}

/// One grid of the hierarchy.
#[derive(Debug)]
pub struct LevelData<T> {
    pub space: SplineSpace,
    pub prec: LevelPrecision,
    /// Exact constrained stiffness and load.
    pub a: SparseMatrix<T>,
    pub b: Vector<T>,
    pub a_check: SparseMatrix<T>,
    pub b_check: Vector<T>,
    pub a_dot: SparseMatrix<T>,
    /// Exact prolongation from the next coarser level (zero columns on level 1).
    pub p_exact: SparseMatrix<T>,
    /// `p_exact` rounded to `eps_check`, and its transpose.
    pub p: SparseMatrix<T>,
    pub pt: SparseMatrix<T>,
    /// `1 / diag(a_dot)`.
    pub d_inv: Vec<T>,
    pub h: f64,
    /// Largest eigenvalue of `D^{-1} A` for the exact `A`.
    pub lambda_max: T,
    lambda_lo: Option<T>,
    cheb: Option<ChebyshevCoeffs<T>>,
    cond: OnceLock<ConditionInfo>,
}

impl<T: Real> Clone for LevelData<T> {
    fn clone(&self) -> Self {
        let cond = OnceLock::new();
        if let Some(c) = self.cond.get() {
            let _ = cond.set(*c);
        }
        LevelData {
            space: self.space,
            prec: self.prec,
            a: self.a.clone(),
            b: self.b.clone(),
            a_check: self.a_check.clone(),
            b_check: self.b_check.clone(),
            a_dot: self.a_dot.clone(),
            p_exact: self.p_exact.clone(),
            p: self.p.clone(),
            pt: self.pt.clone(),
            d_inv: self.d_inv.clone(),
            h: self.h,
            lambda_max: self.lambda_max,
            lambda_lo: self.lambda_lo,
            cheb: self.cheb,
            cond,
        }
    }
}

/// `lambda_max(D^{-1} A)` from the symmetric scaling `D^{-1/2} A D^{-1/2}`.
fn jacobi_lambda_max<T: Real>(a: &SparseMatrix<T>) -> Result<T> {
    if a.nrows() == 0 {
        return Ok(T::zero());
    }
    let s: Vec<T> = a.diagonal().iter().map(|&d| T::one() / d.sqrt()).collect();
    let scaled = SparseMatrix::from_rows(
        a.nrows(),
        a.ncols(),
        (0..a.nrows()).map(|i| a.row(i).map(|(j, v)| (j, s[i] * v * s[j])).collect()).collect(),
        true,
    );
    Ok(T::from_f(lambda_max_power(&scaled)?))
}

impl<T: Real> LevelData<T> {
    /// Assembles level `space` and its prolongation from `space.coarser()`.
    pub fn assemble(space: SplineSpace, prec: LevelPrecision, problem: &Problem<T>) -> Result<Self> {
        let a_full = assemble_stiffness::<T>(&space);
        let b_full = assemble_load::<T>(&space, &problem.load);
        let (a, b) = apply_dirichlet(&space, &a_full, &b_full)?;
        let p_exact = match space.coarser() {
            Some(c) => build_prolongation::<T>(&c, &space)?,
            None => SparseMatrix::from_rows(a.nrows(), 0, vec![Vec::new(); a.nrows()], false),
        };
        let lambda_max = jacobi_lambda_max(&a)?;
        let empty = SparseMatrix::identity(0);
        let mut level = LevelData {
            space,
            prec,
            a,
            b,
            a_check: empty.clone(),
            b_check: Vector::zeros(0),
            a_dot: empty.clone(),
            p_exact,
            p: empty.clone(),
            pt: empty,
            d_inv: Vec::new(),
            h: space.h_f64(),
            lambda_max,
            lambda_lo: None,
            cheb: None,
            cond: OnceLock::new(),
        };
        level.set_precision(prec);
        Ok(level)
    }

    /// Re-derives every quantized component from the exact data.
    pub fn set_precision(&mut self, prec: LevelPrecision) {
        self.prec = prec;
        self.a_check = self.a.quantize(prec.eps_check);
        self.b_check = self.b.quantize(prec.eps_check);
        self.a_dot = self.a_check.quantize(prec.eps_dot);
        self.p = self.p_exact.quantize(prec.eps_check);
        self.pt = self.p.transpose();
        self.refresh_diagonal();
    }

    fn refresh_diagonal(&mut self) {
        self.d_inv = self.a_dot.diagonal().iter().map(|&d| T::one() / d).collect();
    }

    /// Constrained dimension.
    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn level(&self) -> usize {
        self.space.level()
    }

    pub fn lambda_lo(&self) -> Option<T> {
        self.lambda_lo
    }

    pub fn chebyshev(&self) -> Option<&ChebyshevCoeffs<T>> {
        self.cheb.as_ref()
    }

    /// Targets `[frac * lambda_max, lambda_max]`.
    pub fn set_spectrum_fraction(&mut self, frac: f64) -> Result<()> {
        if !(frac > 0.0 && frac < 1.0) {
            return Err(Error::Invalid(format!("spectrum fraction {frac} outside (0, 1)")));
        }
        if self.dim() == 0 {
            return Ok(());
        }
        let lo = T::from_f(frac) * self.lambda_max;
        self.cheb = Some(ChebyshevCoeffs::new(lo, self.lambda_max)?);
        self.lambda_lo = Some(lo);
        Ok(())
    }

    /// Norm and condition estimates of the exact operator, computed once.
    pub fn condition(&self) -> Result<ConditionInfo> {
        if let Some(c) = self.cond.get() {
            return Ok(*c);
        }
        let c = norm_and_cond(&self.a)?;
        let _ = self.cond.set(c);
        Ok(c)
    }

    pub fn kappa(&self) -> Result<f64> {
        Ok(self.condition()?.kappa)
    }

    /// `A` inside the V-cycle on this level replaced by `a`; the diagonal
    /// scaling follows it.
    pub fn replace_cycle_operator(&mut self, a: SparseMatrix<T>) -> Result<()> {
        if a.nrows() != self.dim() || a.ncols() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: a.nrows() });
        }
        self.a_dot = a;
        self.refresh_diagonal();
        Ok(())
    }
}

/// Nested levels `1..=n_levels()` of one spline degree.
pub struct Hierarchy<T> {
    p: usize,
    m: usize,
    frac: f64,
    problem: Problem<T>,
    levels: Vec<LevelData<T>>,
}

impl<T: Real> Clone for Hierarchy<T> {
    fn clone(&self) -> Self {
        Hierarchy { p: self.p, m: self.m, frac: self.frac, problem: self.problem, levels: self.levels.clone() }
    }
}

impl<T: Real> Hierarchy<T> {
    /// Empty hierarchy; grow it with [`Hierarchy::push_level`].
    pub fn new(p: usize, problem: Problem<T>) -> Result<Self> {
        SplineSpace::new(p, 1)?;
        Ok(Hierarchy { p, m: 2, frac: DEFAULT_SPECTRUM_FRACTION, problem, levels: Vec::new() })
    }

    /// Model problem on levels `1..=n_levels` with precisions `prec(level)`.
    pub fn build(p: usize, n_levels: usize, frac: f64, prec: impl Fn(usize) -> LevelPrecision) -> Result<Self> {
        let mut h = Self::new(p, Problem::model())?;
        h.frac = frac;
        for j in 1..=n_levels {
            h.push_level(prec(j))?;
        }
        Ok(h)
    }

    /// Model problem with every precision at base.
    pub fn build_base(p: usize, n_levels: usize, frac: f64) -> Result<Self> {
        Self::build(p, n_levels, frac, |_| LevelPrecision::base())
    }

    /// Assembles the next finer level.
    pub fn push_level(&mut self, prec: LevelPrecision) -> Result<()> {
        let space = SplineSpace::new(self.p, self.levels.len() + 1)?;
        let mut level = LevelData::assemble(space, prec, &self.problem)?;
        level.set_spectrum_fraction(self.frac)?;
        self.levels.push(level);
        Ok(())
    }

    pub fn degree(&self) -> usize {
        self.p
    }

    /// Spline order `k = p + 1`.
    pub fn order(&self) -> usize {
        self.p + 1
    }

    /// Order of the differential operator's energy (2 for the biharmonic).
    pub fn m(&self) -> usize {
        self.m
    }

    /// Energy-norm convergence order `q = k - m`.
    pub fn q(&self) -> usize {
        self.order() - self.m
    }

    pub fn spectrum_fraction(&self) -> f64 {
        self.frac
    }

    pub fn problem(&self) -> &Problem<T> {
        &self.problem
    }

    pub fn n_levels(&self) -> usize {
        self.levels.len()
    }

    /// Level `j` (1-based).
    pub fn level(&self, j: usize) -> Result<&LevelData<T>> {
        j.checked_sub(1)
            .and_then(|i| self.levels.get(i))
            .ok_or(Error::IndexOutOfRange { index: j, len: self.levels.len() })
    }

    pub fn level_mut(&mut self, j: usize) -> Result<&mut LevelData<T>> {
        let len = self.levels.len();
        j.checked_sub(1).and_then(|i| self.levels.get_mut(i)).ok_or(Error::IndexOutOfRange { index: j, len })
    }

    pub fn levels(&self) -> &[LevelData<T>] {
        &self.levels
    }

    pub fn finest(&self) -> Result<&LevelData<T>> {
        self.level(self.levels.len())
    }

    pub fn set_spectrum_fraction(&mut self, frac: f64) -> Result<()> {
        for l in &mut self.levels {
            l.set_spectrum_fraction(frac)?;
        }
        self.frac = frac;
        Ok(())
    }

    /// Copy with the precisions of every level replaced.
    pub fn with_precisions(&self, prec: impl Fn(usize) -> LevelPrecision) -> Self {
        let mut h = self.clone();
        for l in &mut h.levels {
            l.set_precision(prec(l.level()));
        }
        h
    }

    /// Copy holding only levels `1..=j`.
    pub fn truncated(&self, j: usize) -> Result<Self> {
        self.level(j)?;
        let mut h = self.clone();
        h.levels.truncate(j);
        Ok(h)
    }

    /// Replaces the cycle operators below level `j` by the Galerkin chain
    /// `A_{i-1} = P_i^T (A_i P_i)`, each product rounded to `eps_dot` of
    /// level `i - 1`.
    pub fn use_galerkin_coarse(&mut self, j: usize) -> Result<()> {
        self.level(j)?;
        for i in (2..=j).rev() {
            let fine = &self.levels[i - 1];
            let ctx = self.levels[i - 2].prec.eps_dot;
            let coarse = galerkin_coarse(&fine.a_dot, &fine.p_exact, ctx)?;
            self.levels[i - 2].replace_cycle_operator(coarse)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vprec::Quad;

    #[test]
    fn precision_presets() {
        let m = LevelPrecision::mixed(PrecisionCtx::FP32);
        assert_eq!(m.eps_bar, PrecisionCtx::BASE);
        assert_eq!(m.eps_dot.bits(), 24);
        assert_eq!(LevelPrecision::uniform(PrecisionCtx::FP16).eps_check.bits(), 11);
    }

    #[test]
    fn hierarchy_shapes() {
        let h = Hierarchy::<Quad>::build_base(4, 4, 0.3).unwrap();
        assert_eq!(h.n_levels(), 4);
        for j in 2..=4 {
            let l = h.level(j).unwrap();
            let c = h.level(j - 1).unwrap();
            assert_eq!(l.p.nrows(), l.dim());
            assert_eq!(l.p.ncols(), c.dim());
            assert!(l.chebyshev().is_some());
        }
        assert!(h.level(0).is_err());
        assert!(h.level(5).is_err());
        assert_eq!(h.q(), 3);
    }

    #[test]
    fn jacobi_spectrum_is_positive() {
        let h = Hierarchy::<Quad>::build_base(4, 6, 0.3).unwrap();
        for l in h.levels().iter().skip(1) {
            let lm = l.lambda_max.to_f64();
            // Gershgorin radius of D^{-1}A bounds lambda_max
            let gersh = (0..l.dim())
                .map(|i| l.a.row(i).map(|(_, v)| v.abs().to_f64()).sum::<f64>() * l.d_inv[i].to_f64())
                .fold(0.0, f64::max);
            // a unit vector has Rayleigh quotient 1
            assert!(lm >= 1.0 - 1e-12 && lm <= gersh * (1.0 + 1e-9), "{lm} {gersh}");
        }
    }

    #[test]
    fn requantization_keeps_exact_data() {
        let h = Hierarchy::<Quad>::build_base(4, 5, 0.3).unwrap();
        let q = h.with_precisions(|_| LevelPrecision::uniform(PrecisionCtx::FP16));
        let (l0, l1) = (h.level(5).unwrap(), q.level(5).unwrap());
        assert_eq!(l0.a, l1.a);
        assert_ne!(l0.a_check, l1.a_check);
        assert!(l1.a_dot.values().iter().all(|v| v.round_to_bits(11) == *v));
    }

    #[test]
    fn chebyshev_error_polynomial_on_interval() {
        // the degree-2 polynomial equioscillates with amplitude 1/T_2(sigma)
        let cf = ChebyshevCoeffs::new(Quad::from_f64(0.25), Quad::from_f64(2.0)).unwrap();
        let sigma = 2.25 / 1.75;
        let amp = 1.0 / (2.0 * sigma * sigma - 1.0);
        for k in 0..=20 {
            let lam = 0.25 + 1.75 * k as f64 / 20.0;
            let v = cf.error_polynomial(Quad::from_f64(lam)).to_f64();
            assert!(v.abs() <= amp * (1.0 + 1e-12), "{lam} {v}");
        }
        let ends = cf.error_polynomial(Quad::from_f64(2.0)).to_f64();
        assert!((ends.abs() - amp).abs() < 1e-12);
        assert!(ChebyshevCoeffs::new(Quad::ONE, Quad::ONE).is_err());
    }
}
