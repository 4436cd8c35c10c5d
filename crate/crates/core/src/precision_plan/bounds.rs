use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `m / (1 - m u)`, the accumulation factor of an `m`-term rounded sum.
pub fn m_plus(m: f64, u: f64) -> f64 {
    m / (1.0 - m * u)
}

/// Scalars the perturbation bounds are evaluated from. Roundoffs are unit
/// roundoffs (`2^-bits`), not bit counts.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundInputs {
    pub kappa: f64,
    /// `||A^{-1}|| * || |A| ||`.
    pub kappa_underbar: f64,
    /// Largest `kappa(P^T P)` over the levels.
    pub kappa_ptp: f64,
    /// Nonzeros per row of `A` and per row or column of `P`.
    pub m_a: f64,
    pub m_p: f64,
    /// Convergence factor of the inner solver.
    pub rho: f64,
    pub eps: f64,
    pub eps_bar: f64,
    pub eps_dot: f64,
    pub eps_check: f64,
    /// `eps_dot` on the coarsest level.
    pub eps_dot_1: f64,
    /// Precision coarsening factor `eps_dot_{j-1} / eps_dot_j`.
    pub zeta_dot: f64,
    /// Energy order: the operator has order `2m`.
    pub m: f64,
    /// Coarsening ratio `min_j theta_j zeta_j^{-1/m}`.
    pub vartheta: f64,
    pub sigma: f64,
}

impl Default for BoundInputs {
    fn default() -> Self {
        BoundInputs {
            kappa: 1.0,
            kappa_underbar: 1.0,
            kappa_ptp: 1.0,
            m_a: 1.0,
            m_p: 1.0,
            rho: 0.0,
            eps: 0.0,
            eps_bar: 0.0,
            eps_dot: 0.0,
            eps_check: 0.0,
            eps_dot_1: 0.0,
            zeta_dot: 1.0,
            m: 2.0,
            vartheta: 2.0,
            sigma: 1.0,
        }
    }
}

impl BoundInputs {
    /// `tau = kappa^{1/2} eps`
    pub fn tau(&self) -> f64 {
        self.kappa.sqrt() * self.eps
    }

    /// `tau_bar = kappa eps_bar`
    pub fn tau_bar(&self) -> f64 {
        self.kappa * self.eps_bar
    }

    /// `tau_dot = kappa^{1/2} eps_dot`
    pub fn tau_dot(&self) -> f64 {
        self.kappa.sqrt() * self.eps_dot
    }

    /// `tau_check = kappa eps_check`
    pub fn tau_check(&self) -> f64 {
        self.kappa * self.eps_check
    }

    /// `gamma = (kappa^{1/2} + kappa_underbar) / kappa`
    pub fn gamma(&self) -> f64 {
        (self.kappa.sqrt() + self.kappa_underbar) / self.kappa
    }

    pub fn m_bar_a(&self) -> f64 {
        m_plus(self.m_a, self.eps_bar)
    }

    pub fn m_dot_a(&self) -> f64 {
        m_plus(self.m_a, self.eps_dot)
    }

    pub fn m_dot_p(&self) -> f64 {
        m_plus(self.m_p, self.eps_dot)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IrBounds {
    pub delta_rho_ir: f64,
    pub chi: f64,
    pub rho_ir: f64,
    /// Limiting relative error `chi / (1 - rho_ir)`.
    pub limit: f64,
}

/// Refinement perturbation `delta_rho_ir`, floor `chi` and the limiting
/// error. With `quantized`, the residual term `(1 + eps) m_bar tau_bar`
/// becomes `(1 + eps)(tau_check + (1 + eps_check) m_bar tau_bar)`.
pub fn ir_bounds(inp: &BoundInputs, quantized: bool) -> Result<IrBounds> {
    let tau = inp.tau();
    if tau >= 1.0 {
        return Err(Error::Invalid(format!("tau = {tau} is not below 1")));
    }
    let rho = inp.rho;
    let mbar_taubar = inp.m_bar_a() * inp.tau_bar();
    let resid = if quantized {
        (1.0 + inp.eps) * (inp.tau_check() + (1.0 + inp.eps_check) * mbar_taubar)
    } else {
        (1.0 + inp.eps) * mbar_taubar
    };
    let g = inp.gamma() * (1.0 + rho) * resid;
    let delta_rho_ir = ((1.0 + 2.0 * rho) * tau + g) / (1.0 - tau);
    let chi = (tau + g) / (1.0 - tau);
    let rho_ir = rho + delta_rho_ir;
    if rho_ir >= 1.0 {
        return Err(Error::IrDivergent(rho_ir));
    }
    Ok(IrBounds { delta_rho_ir, chi, rho_ir, limit: chi / (1.0 - rho_ir) })
}

/// `beta = 2 + 3 sigma + 2 m_dot (1 + sigma)`, with `m_dot` replaced by
/// `(m_dot + 1)(1 + eps_dot_1)` for quantized operators.
pub fn v_beta(inp: &BoundInputs, quantized: bool) -> f64 {
    let md = if quantized { (inp.m_dot_a() + 1.0) * (1.0 + inp.eps_dot_1) } else { inp.m_dot_a() };
    2.0 + 3.0 * inp.sigma + 2.0 * md * (1.0 + inp.sigma)
}

/// Perturbation `delta_rho_v` of the V-cycle factor, a quadratic in `tau_dot`.
pub fn v_bound(inp: &BoundInputs, quantized: bool) -> Result<f64> {
    if inp.vartheta <= 1.0 {
        return Err(Error::VarthetaNotAboveOne(inp.vartheta));
    }
    let td = inp.tau_dot();
    let beta = v_beta(inp, quantized);
    let mu = 3.0 * inp.zeta_dot * inp.kappa_ptp.sqrt() * inp.m_dot_p() * td;
    let phi = 2.0 * td * td + (4.0 + beta) * mu * td + 2.0 * mu * td * td;
    let vm = inp.vartheta.powf(inp.m);
    Ok(vm / (vm - 1.0) * (4.0 * td + (2.0 + beta) * mu + phi))
}

/// `vartheta = min_j theta_j zeta_j^{-1/m}`.
pub fn vartheta(thetas: &[f64], zetas: &[f64], m: f64) -> Result<f64> {
    if thetas.len() != zetas.len() || thetas.is_empty() {
        return Err(Error::DimensionMismatch { expected: thetas.len(), got: zetas.len() });
    }
    Ok(thetas.iter().zip(zetas).map(|(&t, &z)| t * z.powf(-1.0 / m)).fold(f64::INFINITY, f64::min))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantBound {
    pub phi: f64,
    /// `phi * eps_check`, the relative energy-norm error of the quantized solution.
    pub bound: f64,
}

/// `phi = (kappa_underbar + kappa^{1/2}) / (1 - kappa_underbar eps_check)`.
pub fn quantization_bound(kappa_underbar: f64, kappa: f64, eps_check: f64) -> Result<QuantBound> {
    let k = kappa_underbar * eps_check;
    if k >= 1.0 {
        return Err(Error::NoSpdGuarantee(k));
    }
    let phi = (kappa_underbar + kappa.sqrt()) / (1.0 - k);
    Ok(QuantBound { phi, bound: phi * eps_check })
}

/// Per-level data entering the FMG quantization constants.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelStats {
    pub kappa: f64,
    pub kappa_underbar: f64,
    pub eps_check: f64,
    pub h: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FmgQuantBounds {
    pub c_check: f64,
    pub c_c: f64,
    pub mu_c: f64,
}

/// Extended approximation constant `C_check`, `C_c` and `mu_c` as maxima
/// over adjacent level pairs of `levels` (coarsest first).
pub fn fmg_quant_bounds(levels: &[LevelStats], c: f64, q: f64, m: f64) -> Result<FmgQuantBounds> {
    if levels.len() < 2 {
        return Err(Error::Invalid("need at least two levels".into()));
    }
    let phi = |l: &LevelStats| -> Result<f64> { Ok(quantization_bound(l.kappa_underbar, l.kappa, l.eps_check)?.phi) };
    let mut c_check = f64::NEG_INFINITY;
    for w in levels.windows(2) {
        let (lc, lf) = (&w[0], &w[1]);
        let (pc, pf) = (phi(lc)?, phi(lf)?);
        let kj = lf.kappa.sqrt() * lc.kappa_underbar.sqrt();
        let inner = pc * lc.eps_check + pf * lf.eps_check + kj * lf.eps_check * (1.0 + pc * lc.eps_check);
        let v = (c + lc.kappa.powf(q / (2.0 * m)) * inner) * (1.0 + pf * lf.eps_check);
        c_check = c_check.max(v);
    }
    let mut c_c = f64::NEG_INFINITY;
    let mut mu_c = f64::NEG_INFINITY;
    for w in levels.windows(2) {
        let (lc, lf) = (&w[0], &w[1]);
        let (pc, pf) = (phi(lc)?, phi(lf)?);
        let grow = (1.0 + pc * lc.eps_check) * (1.0 + pf * lf.eps_check);
        c_c = c_c.max((1.0 + lf.kappa.sqrt() * lf.eps_check) * grow * c + c_check);
        let mu = lf.eps_check * (1.0 + lf.eps_check) * lf.kappa.sqrt() * (1.0 + c * lc.h.powf(q)) * grow;
        mu_c = mu_c.max(mu);
    }
    Ok(FmgQuantBounds { c_check, c_c, mu_c })
}

/// V-cycles per FMG level, `ceil((log2 5 + q log2 theta) / |log2 rho|)`, at least 1.
pub fn n_cycles(rho: f64, q: f64, theta: f64) -> Result<usize> {
    if !(rho < 1.0) || rho < 0.0 || rho.is_nan() {
        return Err(Error::RhoNotBelowOne(rho));
    }
    if rho == 0.0 {
        return Ok(1);
    }
    let n = (5f64.log2() + q * theta.log2()) / rho.log2().abs();
    Ok((n.ceil() as usize).max(1))
}

/// `sigma >= (1 + eps_dot) max{alpha_M ||A||, || |A| || alpha_M, || |A| || ||M||}`.
pub fn sigma_from(alpha_m: f64, norm_a: f64, abs_norm_a: f64, norm_m: f64, eps_dot: f64) -> f64 {
    (1.0 + eps_dot) * (alpha_m * norm_a).max(abs_norm_a * alpha_m).max(abs_norm_a * norm_m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_arithmetic_collapse() {
        let inp = BoundInputs { rho: 0.3, kappa: 1e6, kappa_underbar: 2e6, ..Default::default() };
        let b = ir_bounds(&inp, false).unwrap();
        assert_eq!((b.delta_rho_ir, b.chi, b.limit), (0.0, 0.0, 0.0));
        assert_eq!(ir_bounds(&inp, true).unwrap().chi, 0.0);
        assert_eq!(v_bound(&inp, false).unwrap(), 0.0);
        assert_eq!(quantization_bound(1e6, 1e6, 0.0).unwrap().bound, 0.0);
    }

    #[test]
    fn ir_divergence_and_tau_guard() {
        let inp = BoundInputs { rho: 0.9, kappa: 1e8, eps: 1e-5, ..Default::default() };
        assert!(matches!(ir_bounds(&inp, false), Err(Error::IrDivergent(_))));
        let inp = BoundInputs { kappa: 1e8, eps: 1e-3, ..Default::default() };
        assert!(ir_bounds(&inp, false).is_err());
    }

    #[test]
    fn v_bound_monotone_in_tau_dot() {
        let mut inp = BoundInputs { kappa: 1e6, kappa_ptp: 4.0, m_a: 9.0, m_p: 6.0, zeta_dot: 4.0, ..Default::default() };
        let mut prev = -1.0;
        for k in 0..20 {
            inp.eps_dot = 1e-8 * k as f64;
            let d = v_bound(&inp, false).unwrap();
            assert!(d > prev);
            prev = d;
        }
        inp.eps_dot_1 = 1e-3;
        assert!(v_beta(&inp, true) > v_beta(&inp, false));
        inp.vartheta = 1.0;
        assert!(matches!(v_bound(&inp, false), Err(Error::VarthetaNotAboveOne(_))));
    }

    #[test]
    fn quantization_guard() {
        assert!(matches!(quantization_bound(1e4, 1e4, 1e-3), Err(Error::NoSpdGuarantee(_))));
        let b = quantization_bound(1e4, 1e4, 2f64.powi(-24)).unwrap();
        let want = (1e4 + 1e2) * 2f64.powi(-24) / (1.0 - 1e4 * 2f64.powi(-24));
        assert!((b.bound - want).abs() <= 1e-15 * want);
    }

    #[test]
    fn fmg_constants_collapse() {
        let lv = |k: f64, h: f64| LevelStats { kappa: k, kappa_underbar: k, eps_check: 0.0, h };
        let b = fmg_quant_bounds(&[lv(10.0, 0.5), lv(160.0, 0.25), lv(2560.0, 0.125)], 3.0, 3.0, 2.0).unwrap();
        assert_eq!(b.c_check, 3.0);
        assert_eq!(b.c_c, 6.0);
        assert_eq!(b.mu_c, 0.0);
        assert!(fmg_quant_bounds(&[lv(1.0, 1.0)], 1.0, 3.0, 2.0).is_err());
    }

    #[test]
    fn n_cycles_examples() {
        assert_eq!(n_cycles(0.5, 3.0, 2.0).unwrap(), 6);
        assert_eq!(n_cycles(1e-300, 3.0, 2.0).unwrap(), 1);
        assert_eq!(n_cycles(0.0, 3.0, 2.0).unwrap(), 1);
        assert!(n_cycles(1.0, 3.0, 2.0).is_err());
    }

    #[test]
    fn vartheta_of_default_schedule_is_one() {
        let v = vartheta(&[2.0, 2.0], &[4.0, 4.0], 2.0).unwrap();
        assert_eq!(v, 1.0);
        assert_eq!(vartheta(&[2.0], &[1.0], 2.0).unwrap(), 2.0);
    }
}
