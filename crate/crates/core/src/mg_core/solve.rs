use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sparse_linalg::{energy_norm, Vector};
use crate::vprec::Real;

use super::chebyshev::smooth_zero;
use super::ops::{round_all, sub_at};
use super::Hierarchy;

/// Stop once the best error of the last `window` cycles improved on the best
/// error before them by less than the relative amount `rel_change`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stagnation {
    pub window: usize,
    pub rel_change: f64,
}

impl Default for Stagnation {
    fn default() -> Self {
        Stagnation { window: 50, rel_change: 1e-3 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IrOptions {
    pub max_cycles: usize,
    /// Stop when `||r||_2 < tol`; zero disables the test.
    pub tol: f64,
    /// Divergence is declared when each of the last `divergence_window`
    /// errors exceeds `divergence_factor` times the smallest error of the
    /// window before them.
    pub divergence_factor: f64,
    pub divergence_window: usize,
    pub stagnation: Option<Stagnation>,
}

impl Default for IrOptions {
    fn default() -> Self {
        IrOptions { max_cycles: 1000, tol: 0.0, divergence_factor: 10.0, divergence_window: 10, stagnation: None }
    }
}

impl IrOptions {
    pub fn cycles(n: usize) -> Self {
        IrOptions { max_cycles: n, ..Self::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StopReason {
    MaxCycles,
    Tolerance,
    Stagnated,
}

#[derive(Clone, Debug)]
pub struct IrOutcome<T> {
    pub x: Vector<T>,
    /// Relative energy errors `||x_i - x_ref||_A / ||x_ref||_A` for
    /// `i = 0..=cycles`, measured with the exact `A`; empty without a reference.
    pub history: Vec<f64>,
    pub cycles: usize,
    pub stop: StopReason,
}

fn diverged(history: &[f64], w: usize, factor: f64) -> bool {
    let n = history.len();
    if !history[n - 1].is_finite() {
        return true;
    }
    if w == 0 || n < 2 * w {
        return false;
    }
    let floor = history[n - 2 * w..n - w].iter().copied().fold(f64::INFINITY, f64::min);
    history[n - w..].iter().all(|&e| e > factor * floor)
}

fn stagnated(history: &[f64], s: &Stagnation) -> bool {
    let n = history.len();
    if s.window == 0 || n <= s.window {
        return false;
    }
    let (before, last) = history.split_at(n - s.window);
    let best_before = before.iter().copied().fold(f64::INFINITY, f64::min);
    let best_last = last.iter().copied().fold(f64::INFINITY, f64::min);
    best_before - best_last < s.rel_change * best_before
}

impl<T: Real> Hierarchy<T> {
    /// One V(1,0)-cycle on levels `1..=j` approximating `A_j^{-1} r`.
    pub fn vcycle(&self, j: usize, r: &[T]) -> Result<Vector<T>> {
        let lev = self.level(j)?;
        if r.len() != lev.dim() {
            return Err(Error::DimensionMismatch { expected: lev.dim(), got: r.len() });
        }
        let y = self.vcycle_rec(j, r)?;
        Ok(Vector::new(y).quantize(lev.prec.eps_dot))
    }

    fn vcycle_rec(&self, j: usize, r: &[T]) -> Result<Vec<T>> {
        let lev = &self.levels[j - 1];
        let bits = lev.prec.eps_dot.bits();
        let r = round_all(r, bits);
        let y = smooth_zero(lev, &r, bits)?;
        if j == 1 {
            return Ok(y);
        }
        let ay = lev.a_dot.matvec_at_bits(&y, bits);
        let rv = sub_at(&ay, &r, bits);
        let rc = lev.pt.matvec_at_bits(&rv, bits);
        let dc = self.vcycle_rec(j - 1, &rc)?;
        let coarse_bits = self.levels[j - 2].prec.eps_dot.bits();
        let d = lev.p.matvec_at_bits(&dc, coarse_bits);
        Ok(sub_at(&y, &d, bits))
    }

    /// Refinement residual `A_check x - b_check` in `eps_bar`, rounded to `eps`.
    pub fn ir_residual(&self, j: usize, x: &[T]) -> Result<Vector<T>> {
        let lev = self.level(j)?;
        let hb = lev.prec.eps_bar.bits();
        let ax = lev.a_check.matvec_rounded(x, lev.prec.eps_bar)?;
        let r = sub_at(&ax, &lev.b_check, hb);
        Ok(Vector::new(r).quantize(lev.prec.eps))
    }

    /// Iterative refinement on level `j` with one V-cycle as the inner solver.
    ///
    /// With `reference` the per-cycle relative energy error is recorded, and
    /// growth by `divergence_factor` within `divergence_window` cycles
    /// aborts with [`Error::Divergence`].
    pub fn ir_solve(&self, j: usize, x0: &[T], opts: &IrOptions, reference: Option<&[T]>) -> Result<IrOutcome<T>> {
        let lev = self.level(j)?;
        let n = lev.dim();
        if x0.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: x0.len() });
        }
        let eps = lev.prec.eps;
        let ref_norm = match reference {
            Some(xr) => Some(energy_norm(&lev.a, xr)?.to_f()),
            None => None,
        };
        let rel_err = |x: &[T]| -> Result<f64> {
            let xr = reference.expect("reference present");
            let e = energy_norm(&lev.a, &Vector::new(x.to_vec()).sub(xr))?.to_f();
            let rn = ref_norm.expect("reference present");
            Ok(if rn > 0.0 { e / rn } else { e })
        };
        let mut x = Vector::new(x0.to_vec()).quantize(eps);
        let mut history = Vec::new();
        if reference.is_some() {
            history.push(rel_err(&x)?);
        }
        let mut stop = StopReason::MaxCycles;
        let mut cycles = 0;
        while cycles < opts.max_cycles {
            let r = self.ir_residual(j, &x)?;
            if opts.tol > 0.0 && r.norm2().to_f() < opts.tol {
                stop = StopReason::Tolerance;
                break;
            }
            let y = self.vcycle(j, &r)?;
            x = Vector::new(sub_at(&x, &y, eps.bits())).quantize(eps);
            cycles += 1;
            if reference.is_some() {
                history.push(rel_err(&x)?);
                if diverged(&history, opts.divergence_window, opts.divergence_factor) {
                    return Err(Error::Divergence { history });
                }
                if let Some(s) = &opts.stagnation {
                    if stagnated(&history, s) {
                        stop = StopReason::Stagnated;
                        break;
                    }
                }
            }
        }
        Ok(IrOutcome { x, history, cycles, stop })
    }

    /// FMG on levels `1..=n_levels()` with `n_cycles` refinement steps per
    /// level; returns the final iterate of every level.
    pub fn fmg(&self, n_cycles: usize) -> Result<Vec<Vector<T>>> {
        if n_cycles == 0 {
            return Err(Error::Invalid("FMG needs at least one cycle per level".into()));
        }
        let opts = IrOptions::cycles(n_cycles);
        let mut out: Vec<Vector<T>> = Vec::with_capacity(self.n_levels());
        for j in 1..=self.n_levels() {
            let lev = self.level(j)?;
            let x0 = match out.last() {
                None => Vector::zeros(lev.dim()),
                Some(xc) => lev.p.matvec_rounded(xc, lev.prec.eps)?,
            };
            out.push(self.ir_solve(j, &x0, &opts, None)?.x);
        }
        Ok(out)
    }
}
