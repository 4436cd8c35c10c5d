use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::precision_plan::{schedule_level, TheoryConstants};
use crate::sparse_linalg::{energy_norm, Vector};
use crate::vprec::Real;

use super::{Hierarchy, IrOptions, LevelPrecision, Problem};

/// First level at which the discretization constant is estimated; below it
/// the schedule runs with `C = 1`.
pub const PFMG_FIRST_CHECK: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PfmgOptions {
    pub e_goal: f64,
    /// Refinement cycles per level.
    pub n: usize,
    pub max_levels: usize,
    pub constants: TheoryConstants,
    pub spectrum_fraction: f64,
}

/// What happened on one level.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PfmgStep {
    pub level: usize,
    pub h: f64,
    pub prec: LevelPrecision,
    /// Constant used for this level's schedule.
    pub c_used: f64,
    /// Fresh estimate of `C` and the level `L` it asks for, from the check level on.
    pub c_estimate: Option<f64>,
    pub target_level: Option<usize>,
}

pub struct PfmgOutcome<T> {
    pub x: Vector<T>,
    pub level: usize,
    pub c_estimate: f64,
    pub steps: Vec<PfmgStep>,
    pub hierarchy: Hierarchy<T>,
}

/// Level `L = 1 + ceil(log_theta(C / e_goal) / q)` whose discretization error
/// `C h_L^q` meets `e_goal`.
pub fn target_level(c: f64, e_goal: f64, q: usize, theta: f64) -> usize {
    let l = ((c / e_goal).ln() / theta.ln() / q as f64).ceil();
    1 + l.max(0.0) as usize
}

/// Progressive-precision FMG: each new level is discretized with precisions
/// scheduled from the current estimate of `C`, initialized from the
/// prolongated coarse solution and refined `n` times. From level
/// [`PFMG_FIRST_CHECK`] on, `C` is re-estimated as
/// `||P x_{j-1} - x_j||_A / (h_{j-1}^q ||x_j||_A)` (stored operators) and the
/// run stops once `L <= j`.
pub fn pfmg<T: Real>(p: usize, problem: Problem<T>, opts: &PfmgOptions) -> Result<PfmgOutcome<T>> {
    if !(opts.e_goal > 0.0 && opts.e_goal < 1.0) {
        return Err(Error::Invalid(format!("e_goal = {} outside (0, 1)", opts.e_goal)));
    }
    if opts.n == 0 {
        return Err(Error::Invalid("PFMG needs at least one cycle per level".into()));
    }
    let cst = opts.constants;
    let q = cst.q;
    let mut hier = Hierarchy::new(p, problem)?;
    hier.frac = opts.spectrum_fraction;
    let mut c_cur = 1.0;
    let mut steps = Vec::new();
    let mut x_prev: Option<Vector<T>> = None;
    for j in 1..=opts.max_levels {
        let h = cst.theta.powi(-(j as i32 - 1));
        let entry = schedule_level(&cst.with_big_c(c_cur), j, h)?;
        hier.push_level(entry.prec)?;
        let lev = hier.level(j)?;
        let x0 = match &x_prev {
            None => Vector::zeros(lev.dim()),
            Some(xc) => lev.p.matvec_rounded(xc, lev.prec.eps)?,
        };
        let x = hier.ir_solve(j, &x0, &IrOptions::cycles(opts.n), None)?.x;
        let mut step =
            PfmgStep { level: j, h, prec: entry.prec, c_used: c_cur, c_estimate: None, target_level: None };
        if j >= PFMG_FIRST_CHECK {
            let xc = x_prev.as_ref().expect("coarse iterate exists above level 1");
            let px = lev.p.matvec(xc)?;
            let num = energy_norm(&lev.a_check, &px.sub(&x))?.to_f();
            let den = energy_norm(&lev.a_check, &x)?.to_f();
            let hc = cst.theta.powi(-(j as i32 - 2));
            c_cur = num / (hc.powi(q as i32) * den);
            let l = target_level(c_cur, opts.e_goal, q, cst.theta);
            step.c_estimate = Some(c_cur);
            step.target_level = Some(l);
            steps.push(step);
            if l <= j {
                return Ok(PfmgOutcome { x, level: j, c_estimate: c_cur, steps, hierarchy: hier });
            }
        } else {
            steps.push(step);
        }
        x_prev = Some(x);
    }
    Err(Error::LevelCap(opts.max_levels))
}
