//! Error decomposition and the experiment sweeps.
//!
//! An iterate `x_i` of the quantized system is compared against three
//! references: the exact-coefficient solution `x_h`, the exact solution
//! `x_check` of the quantized system, and `fl(x_h)`. All algebraic norms use
//! the unquantized `A_h`.

mod experiments;
mod io;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::mg_core::LevelData;
use crate::sparse_linalg::{direct_solve_ref, energy_norm, Vector};
use crate::spline_fem::{continuous_error, ErrorNorm, Reference};
use crate::vprec::{PrecisionCtx, Real};

pub use experiments::{
    walk_constants, minimal_fmg_cycles, random_guess, run_experiment, scaling_fits, tuned_fraction, ExperimentId,
    ExperimentSpec, SweepResult, FRACTION_GRID,
};
pub use io::{write_csv, Manifest, ManifestStatus, Row, CSV_COLUMNS};

/// Reference solutions of one level under quantization to `ctx`.
#[derive(Clone, Debug)]
pub struct References<T> {
    pub ctx: PrecisionCtx,
    pub x_h: Vector<T>,
    /// `None` when the quantized system is numerically singular.
    pub x_check: Option<Vector<T>>,
    pub fl_x: Vector<T>,
}

pub fn reference_solutions<T: Real>(lev: &LevelData<T>, ctx: PrecisionCtx) -> Result<References<T>> {
    let x_h = direct_solve_ref(&lev.a, &lev.b)?;
    // the quantized data is already exact in the base format, so solving at
    // base precision is the trailing-zeros extension
    let x_check = if ctx.is_base() {
        Some(x_h.clone())
    } else {
        direct_solve_ref(&lev.a.quantize(ctx), &lev.b.quantize(ctx)).ok()
    };
    let fl_x = x_h.quantize(ctx);
    Ok(References { ctx, x_h, x_check, fl_x })
}

/// Absolute error components in the energy norm.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub level: usize,
    pub h: f64,
    /// `||x_h||_A`, the normalization of relative errors.
    pub norm: f64,
    pub e_disc: Option<f64>,
    pub e_quant: Option<f64>,
    pub e_iter: Option<f64>,
    pub e_round: Option<f64>,
    /// Set when `x_inf` was not a stagnated iterate, so `e_round` only bounds
    /// the limiting error from below.
    pub e_round_lower_bound: bool,
    pub e_fl: f64,
    /// `||x_i - x_check||_A`.
    pub e_alg: Option<f64>,
    pub e_total: Option<f64>,
}

impl ErrorReport {
    /// Every component divided by `||x_h||_A`.
    pub fn relative(&self) -> ErrorReport {
        let s = |v: Option<f64>| v.map(|v| v / self.norm);
        ErrorReport {
            e_disc: s(self.e_disc),
            e_quant: s(self.e_quant),
            e_iter: s(self.e_iter),
            e_round: s(self.e_round),
            e_fl: self.e_fl / self.norm,
            e_alg: s(self.e_alg),
            e_total: s(self.e_total),
            ..*self
        }
    }
}

fn dist<T: Real>(lev: &LevelData<T>, x: &[T], y: &[T]) -> Result<f64> {
    Ok(energy_norm(&lev.a, &Vector::new(x.to_vec()).sub(y))?.to_f())
}

/// Splits the error of iterate `x_i`. `x_inf` is the limiting iterate and
/// whether it was taken at stagnation; `exact` enables the continuous terms.
pub fn decompose<T: Real>(
    lev: &LevelData<T>,
    x_i: &[T],
    x_inf: Option<(&[T], bool)>,
    refs: &References<T>,
    exact: Option<fn(T, usize) -> T>,
) -> Result<ErrorReport> {
    let continuous = |x: &[T]| -> Result<Option<f64>> {
        match exact {
            Some(u) => Ok(Some(continuous_error(&lev.space, x, Reference::Exact(&u), ErrorNorm::Energy)?.to_f())),
            None => Ok(None),
        }
    };
    let xc = refs.x_check.as_ref();
    let e_iter = x_inf.map(|(xi, _)| dist(lev, x_i, xi)).transpose()?;
    let e_round = match (x_inf, xc) {
        (Some((xi, _)), Some(xc)) => Some(dist(lev, xi, xc)?),
        _ => None,
    };
    Ok(ErrorReport {
        level: lev.level(),
        h: lev.h,
        norm: energy_norm(&lev.a, &refs.x_h)?.to_f(),
        e_disc: continuous(&refs.x_h)?,
        e_quant: xc.map(|xc| dist(lev, xc, &refs.x_h)).transpose()?,
        e_iter,
        e_round,
        e_round_lower_bound: x_inf.is_some_and(|(_, stagnated)| !stagnated),
        e_fl: dist(lev, &refs.fl_x, &refs.x_h)?,
        e_alg: xc.map(|xc| dist(lev, x_i, xc)).transpose()?,
        e_total: continuous(x_i)?,
    })
}
