use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mg_core::LevelPrecision;
use crate::vprec::{PrecisionCtx, QUAD_BITS};

use super::bounds::n_cycles;

/// Default `tau_dot = kappa^{1/2} eps_dot` aimed for inside the V-cycle.
pub const TAU_DOT_TOL: f64 = 0.1;

/// Constants of the precision-balancing rules.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoryConstants {
    /// Discretization constant in `e_disc <= C h^q`.
    pub big_c: f64,
    pub c: f64,
    pub c_bar: f64,
    pub c_check: f64,
    pub c_dot: f64,
    /// `kappa <= c_kappa h^{-2m}`.
    pub c_kappa: f64,
    pub k: usize,
    pub m: usize,
    pub q: usize,
    pub theta: f64,
    /// V-cycles per FMG level.
    pub n: usize,
    pub tau_dot_tol: f64,
    pub m_a: usize,
}

impl TheoryConstants {
    /// Every prefactor derived from `c_kappa` as the constants algorithm does,
    /// with `C = 1` and `N` left at 1.
    pub fn from_c_kappa(p: usize, m: usize, c_kappa: f64, tau_dot_tol: f64) -> Self {
        let k = p + 1;
        let m_a = 2 * p + 1;
        TheoryConstants {
            big_c: 1.0,
            c: c_kappa.sqrt(),
            c_bar: 4.0 * m_a as f64 * c_kappa,
            c_check: c_kappa,
            c_dot: tau_dot_tol / c_kappa.sqrt(),
            c_kappa,
            k,
            m,
            q: k - m,
            theta: 2.0,
            n: 1,
            tau_dot_tol,
            m_a,
        }
    }

    pub fn with_big_c(mut self, c: f64) -> Self {
        self.big_c = c;
        self
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = n;
        self
    }
}

/// Real-valued unit-roundoff targets before conversion to bits.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundoffTargets {
    pub eps: f64,
    pub eps_bar: f64,
    pub eps_check: f64,
    pub eps_dot: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduleEntry {
    pub level: usize,
    pub h: f64,
    pub targets: RoundoffTargets,
    pub prec: LevelPrecision,
}

/// Smallest bit count whose unit roundoff `2^-bits` does not exceed `target`.
pub fn bits_for_target(target: f64, level: usize) -> Result<u32> {
    if !(target > 0.0) || target.is_nan() {
        return Err(Error::Invalid(format!("roundoff target {target} at level {level}")));
    }
    let b = (-target.log2()).ceil();
    if b > QUAD_BITS as f64 {
        return Err(Error::PrecisionBudgetExceeded { level });
    }
    Ok((b.max(PrecisionCtx::MIN_BITS as f64)) as u32)
}

/// Precisions of level `level` with mesh size `h`:
/// `eps = C/(2c) h^k`, `eps_bar = C/(2 c_bar) h^{k+m}`,
/// `eps_check = C/c_check h^{k+m}`, `eps_dot = c_dot h^m`, converted to bits
/// and then tightened so that `eps_bar <= eps <= eps_dot` and
/// `eps_bar <= eps_check`.
pub fn schedule_level(cst: &TheoryConstants, level: usize, h: f64) -> Result<ScheduleEntry> {
    let (k, m) = (cst.k as i32, cst.m as i32);
    let targets = RoundoffTargets {
        eps: 0.5 * cst.big_c / cst.c * h.powi(k),
        eps_bar: 0.5 * cst.big_c / cst.c_bar * h.powi(k + m),
        eps_check: cst.big_c / cst.c_check * h.powi(k + m),
        eps_dot: cst.c_dot * h.powi(m),
    };
    let dot = bits_for_target(targets.eps_dot, level)?;
    let eps = bits_for_target(targets.eps, level)?.max(dot);
    let check = bits_for_target(targets.eps_check, level)?;
    let bar = bits_for_target(targets.eps_bar, level)?.max(eps).max(check);
    let ctx = |b: u32| PrecisionCtx::new(b).expect("bits within range");
    let prec = LevelPrecision { eps: ctx(eps), eps_bar: ctx(bar), eps_check: ctx(check), eps_dot: ctx(dot) };
    Ok(ScheduleEntry { level, h, targets, prec })
}

/// Schedule for levels `1..=levels` with `h_j = theta^{-(j-1)}`.
pub fn schedule(cst: &TheoryConstants, levels: usize) -> Result<Vec<ScheduleEntry>> {
    (1..=levels).map(|j| schedule_level(cst, j, cst.theta.powi(-(j as i32 - 1)))).collect()
}

/// Result of the constants walk.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantsEstimate {
    pub constants: TheoryConstants,
    /// Level at which the condition-number ratio stabilized.
    pub level: usize,
    pub kappa: f64,
    pub rho: f64,
}

/// Walks `kappas` (pairs `(level, kappa)` with consecutive levels, coarsest
/// first) until `|kappa_j / kappa_{j-1} theta^{-2m} - 1| < tol`, then sets
/// `c_kappa = kappa_j h_j^{2m}` and derives the prefactors; `rho_at(level)`
/// supplies the convergence factor that fixes `N`.
pub fn estimate_constants(
    kappas: &[(usize, f64)],
    p: usize,
    m: usize,
    theta: f64,
    tol: f64,
    tau_dot_tol: f64,
    rho_at: impl FnOnce(usize) -> Result<f64>,
) -> Result<ConstantsEstimate> {
    if kappas.len() < 2 {
        return Err(Error::Invalid("need condition numbers on at least two levels".into()));
    }
    let scale = theta.powi(-2 * m as i32);
    let hit = kappas.windows(2).find(|w| {
        assert_eq!(w[1].0, w[0].0 + 1, "levels must be consecutive");
        (w[1].1 / w[0].1 * scale - 1.0).abs() < tol
    });
    let (level, kappa) = match hit {
        Some(w) => w[1],
        None => return Err(Error::NoStabilization(kappas.last().expect("nonempty").0)),
    };
    let h = theta.powi(-(level as i32 - 1));
    let c_kappa = kappa * h.powi(2 * m as i32);
    let rho = rho_at(level)?;
    let base = TheoryConstants::from_c_kappa(p, m, c_kappa, tau_dot_tol);
    let base = TheoryConstants { theta, ..base };
    let n = n_cycles(rho, base.q as f64, theta)?;
    Ok(ConstantsEstimate { constants: base.with_n(n), level, kappa, rho })
}

/// Least-squares fit of `log(e / eps) = -alpha log(h) + log(c)` over samples
/// `(h, eps, e)`; returns `(c, alpha)`.
pub fn regress_constants(samples: &[(f64, f64, f64)]) -> Result<(f64, f64)> {
    if samples.len() < 4 {
        return Err(Error::Invalid(format!("{} samples, need at least 4", samples.len())));
    }
    let pts: Vec<(f64, f64)> = samples.iter().map(|&(h, eps, e)| (h.ln(), (e / eps).ln())).collect();
    if pts.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(Error::Invalid("nonpositive sample".into()));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx <= 1e-12 * n * (1.0 + mx * mx) {
        return Err(Error::RankDeficient);
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    Ok(((my - slope * mx).exp(), -slope))
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Result<f64> {
    let s: Vec<(f64, f64, f64)> = points.iter().map(|&(x, y)| (1.0 / x, 1.0, y)).collect();
    if s.len() < 2 {
        return Err(Error::Invalid("need at least two points".into()));
    }
    let pts: Vec<(f64, f64)> = s.iter().map(|&(h, _, e)| (-(h.ln()), e.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::RankDeficient);
    }
    Ok(pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / sxx)
}
