use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::mg_core::{
    pfmg, rho_v, tune_spectrum_fraction, Hierarchy, IrOptions, LevelData, LevelPrecision, PfmgOptions, Problem,
    Stagnation, StopReason,
};
use crate::precision_plan::{
    estimate_constants, n_cycles, quantization_bound, regress_constants, ConstantsEstimate, TAU_DOT_TOL,
};
use crate::sparse_linalg::{energy_norm, extreme_eigs, Vector};
use crate::vprec::{PrecisionCtx, Quad, Real};

use super::io::Row;
use super::{decompose, reference_solutions};

/// Candidate spectrum fractions `0.05, 0.10, ..., 0.95`.
pub const FRACTION_GRID: [f64; 19] =
    [0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95];

/// Finest level for solve experiments and for dense propagation matrices.
const SOLVE_LEVEL_CAP: usize = 12;
const RHO_LEVEL_CAP: usize = 9;
/// Number of trailing cycles over which the limiting error is the maximum.
const LIMIT_WINDOW: usize = 50;
/// Regression keeps samples with `1/h` above this.
const REGRESSION_MIN_H_INV: u64 = 16;
const WALK_TOL: f64 = 0.01;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentId {
    FixedFmg,
    CondGrowth,
    SmootherTuning,
    IrvHistory,
    RoundQuantScaling,
    EigQuant,
    Constants,
    NTable,
    PfmgAccuracy,
}

impl ExperimentId {
    pub const ALL: [ExperimentId; 9] = [
        ExperimentId::FixedFmg,
        ExperimentId::CondGrowth,
        ExperimentId::SmootherTuning,
        ExperimentId::IrvHistory,
        ExperimentId::RoundQuantScaling,
        ExperimentId::EigQuant,
        ExperimentId::Constants,
        ExperimentId::NTable,
        ExperimentId::PfmgAccuracy,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentId::FixedFmg => "fixed_fmg",
            ExperimentId::CondGrowth => "cond_growth",
            ExperimentId::SmootherTuning => "smoother_tuning",
            ExperimentId::IrvHistory => "irv_history",
            ExperimentId::RoundQuantScaling => "round_quant_scaling",
            ExperimentId::EigQuant => "eig_quant",
            ExperimentId::Constants => "constants",
            ExperimentId::NTable => "n_table",
            ExperimentId::PfmgAccuracy => "pfmg_accuracy",
        }
    }

    fn is_rho(self) -> bool {
        matches!(self, ExperimentId::SmootherTuning | ExperimentId::NTable)
    }

    /// Whether cells are split by precision as well as degree.
    fn per_bits(self) -> bool {
        matches!(
            self,
            ExperimentId::FixedFmg | ExperimentId::IrvHistory | ExperimentId::RoundQuantScaling | ExperimentId::EigQuant
        )
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExperimentId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExperimentId::ALL
            .into_iter()
            .find(|e| e.as_str() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown experiment '{s}'")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub experiment: ExperimentId,
    pub p: Vec<usize>,
    /// Inclusive level range.
    pub levels: (usize, usize),
    pub bits: Vec<u32>,
    /// Cycles per FMG level; `None` uses the experiment's default.
    pub n: Option<usize>,
    pub max_cycles: usize,
    pub seed: u64,
    pub e_goals: Vec<f64>,
    pub fractions: Vec<f64>,
}

impl ExperimentSpec {
    pub fn default_for(experiment: ExperimentId) -> Self {
        use ExperimentId::*;
        let (p, levels, bits) = match experiment {
            FixedFmg => (vec![3, 4, 5], (1, 12), vec![24]),
            CondGrowth => (vec![3, 4, 5], (1, 12), vec![]),
            SmootherTuning => (vec![3, 4, 5], (2, 8), vec![]),
            IrvHistory => (vec![4], (1, 12), vec![24]),
            RoundQuantScaling => (vec![3, 4, 5], (2, 12), vec![11, 24, 37]),
            EigQuant => (vec![4], (2, 12), vec![11, 24, 37]),
            Constants => (vec![3, 4, 5], (2, 12), vec![24, 37]),
            NTable => ((3..=8).collect(), (2, 8), vec![]),
            PfmgAccuracy => (vec![3, 4, 5], (1, 12), vec![]),
        };
        ExperimentSpec {
            experiment,
            p,
            levels,
            bits,
            n: None,
            max_cycles: 1000,
            seed: 0,
            e_goals: vec![1e-2, 1e-3, 1e-4, 1e-5, 1e-6],
            fractions: FRACTION_GRID.to_vec(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Invalid(m));
        let (lo, hi) = self.levels;
        if self.p.is_empty() || self.p.iter().any(|&p| p < 1) {
            return bad("degree list must be nonempty and positive".into());
        }
        if lo < 1 || lo > hi {
            return bad(format!("empty level range {lo}..={hi}"));
        }
        let cap = if self.experiment.is_rho() { RHO_LEVEL_CAP } else { SOLVE_LEVEL_CAP };
        if hi > cap {
            return bad(format!("{} is capped at level {cap}", self.experiment));
        }
        if self.experiment.is_rho() && lo < 2 {
            return bad("convergence factors need at least two levels".into());
        }
        if self.bits.iter().any(|b| !(PrecisionCtx::MIN_BITS..=crate::vprec::QUAD_BITS).contains(b)) {
            return bad("bit counts must lie in [2, 113]".into());
        }
        let needs_bits = self.experiment.per_bits() || self.experiment == ExperimentId::Constants;
        if needs_bits && self.bits.is_empty() {
            return bad(format!("{} needs a precision grid", self.experiment));
        }
        if self.fractions.is_empty() || self.fractions.iter().any(|&f| !(f > 0.0 && f < 1.0)) {
            return bad("spectrum fractions must lie in (0, 1)".into());
        }
        if self.experiment == ExperimentId::PfmgAccuracy
            && (self.e_goals.is_empty() || self.e_goals.iter().any(|&e| !(e > 0.0 && e < 1.0)))
        {
            return bad("e_goal values must lie in (0, 1)".into());
        }
        if self.n == Some(0) {
            return bad("N must be at least 1".into());
        }
        Ok(())
    }
}

/// Result of a sweep: rows in spec order plus per-degree details.
#[derive(Clone, Debug)]
pub struct SweepResult {
    pub rows: Vec<Row>,
    /// Cells or sub-runs that failed; their rows carry an `error:` label.
    pub failures: usize,
    pub details: serde_json::Value,
}

/// Tuned spectrum fraction for degree `p`, probing `rho_v` on level `probe`.
pub fn tuned_fraction(p: usize, probe: usize, candidates: &[f64]) -> Result<(f64, Vec<(f64, f64)>)> {
    let h = Hierarchy::<Quad>::build_base(p, probe, candidates[0])?;
    tune_spectrum_fraction(&h, probe, candidates)
}

/// Constants from the asymptotic-region level walk on a base-precision hierarchy of up to `max_level` levels.
pub fn walk_constants(p: usize, frac: f64, max_level: usize) -> Result<ConstantsEstimate> {
    let h = Hierarchy::<Quad>::build_base(p, max_level, frac)?;
    let kappas = (1..=max_level).map(|j| Ok((j, h.level(j)?.kappa()?))).collect::<Result<Vec<_>>>()?;
    estimate_constants(&kappas, p, h.m(), 2.0, WALK_TOL, TAU_DOT_TOL, |j| rho_v(&h.truncated(j)?, j))
}

fn cell_seed(seed: u64, p: usize, bits: u32, level: usize) -> u64 {
    seed ^ ((p as u64) << 40) ^ ((bits as u64) << 24) ^ level as u64
}

/// Entries uniform in `[-1, 1]`, scaled to the energy norm of `x_h`.
pub fn random_guess<T: Real>(lev: &LevelData<T>, x_h: &[T], seed: u64) -> Result<Vector<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x: Vec<T> = (0..lev.dim()).map(|_| T::from_f(rng.gen_range(-1.0..=1.0))).collect();
    let s = energy_norm(&lev.a, x_h)? / energy_norm(&lev.a, &x)?;
    Ok(Vector::new(x.into_iter().map(|v| v * s).collect()))
}

fn tail_max(history: &[f64]) -> f64 {
    history[history.len().saturating_sub(LIMIT_WINDOW)..].iter().copied().fold(0.0, f64::max)
}

fn precision_for(mode: &str, ctx: PrecisionCtx) -> LevelPrecision {
    match mode {
        "fixed" => LevelPrecision::uniform(ctx),
        _ => LevelPrecision::mixed(ctx),
    }
}

struct Ctx<'a> {
    spec: &'a ExperimentSpec,
    fracs: &'a BTreeMap<usize, f64>,
}

impl Ctx<'_> {
    fn name(&self) -> &'static str {
        self.spec.experiment.as_str()
    }

    fn row(&self, p: usize, level: usize) -> Row {
        Row::new(self.name(), p, level, self.spec.seed)
    }

    fn frac(&self, p: usize) -> f64 {
        self.fracs.get(&p).copied().unwrap_or(self.spec.fractions[0])
    }

    fn base(&self, p: usize) -> Result<Hierarchy<Quad>> {
        Hierarchy::build_base(p, self.spec.levels.1, self.frac(p))
    }

    fn levels(&self) -> std::ops::RangeInclusive<usize> {
        self.spec.levels.0..=self.spec.levels.1
    }
}

type CellOut = (Vec<Row>, usize, serde_json::Value);

fn fixed_fmg(cx: &Ctx, p: usize, bits: u32) -> Result<CellOut> {
    let ctx = PrecisionCtx::new(bits)?;
    let n = cx.spec.n.unwrap_or(2);
    let hier = cx.base(p)?.with_precisions(|_| LevelPrecision::uniform(ctx));
    let xs = hier.fmg(n)?;
    let mut rows = Vec::new();
    for j in cx.levels() {
        let lev = hier.level(j)?;
        let refs = reference_solutions(lev, ctx)?;
        let rep = decompose(lev, &xs[j - 1], None, &refs, hier.problem().exact)?.relative();
        let mut r = cx.row(p, j).with_prec(&lev.prec).param(n as f64);
        r.e_disc = rep.e_disc;
        r.e_quant = rep.e_quant;
        r.e_fl = Some(rep.e_fl);
        r.e_total = rep.e_total;
        r.e_alg = rep.e_alg;
        rows.push(r);
    }
    Ok((rows, 0, serde_json::Value::Null))
}

fn cond_growth(cx: &Ctx, p: usize) -> Result<CellOut> {
    let hier = cx.base(p)?;
    let mut rows = Vec::new();
    for j in cx.levels() {
        let lev = hier.level(j)?;
        let refs = reference_solutions(lev, PrecisionCtx::BASE)?;
        let rep = decompose(lev, &refs.x_h, None, &refs, hier.problem().exact)?.relative();
        let mut r = cx.row(p, j);
        r.kappa = Some(lev.kappa()?);
        r.lambda_min = Some(extreme_eigs(&lev.a)?.lambda_min);
        r.e_disc = rep.e_disc;
        r.param = Some(lev.kappa()? * lev.h.powi(2 * hier.m() as i32));
        rows.push(r.label("c_kappa"));
    }
    Ok((rows, 0, serde_json::Value::Null))
}

fn smoother_tuning(cx: &Ctx, p: usize) -> Result<CellOut> {
    let mut hier = cx.base(p)?;
    let (lo, hi) = cx.spec.levels;
    let mut rows = Vec::new();
    let mut best = (cx.spec.fractions[0], f64::INFINITY);
    for &f in &cx.spec.fractions {
        hier.set_spectrum_fraction(f)?;
        for j in lo..=hi {
            let rho = rho_v(&hier, j)?;
            if j == hi && rho < best.1 {
                best = (f, rho);
            }
            let mut r = cx.row(p, j).param(f);
            r.rho_v = Some(rho);
            rows.push(r);
        }
    }
    let mut sel = cx.row(p, hi).param(best.0).label("selected");
    sel.rho_v = Some(best.1);
    rows.push(sel);
    Ok((rows, 0, json!({ "selected_fraction": best.0, "rho_v": best.1 })))
}

fn irv_history(cx: &Ctx, p: usize, bits: u32) -> Result<CellOut> {
    let ctx = PrecisionCtx::new(bits)?;
    let base = cx.base(p)?;
    let mut rows = Vec::new();
    let mut failures = 0;
    for mode in ["fixed", "mixed"] {
        let hier = base.with_precisions(|_| precision_for(mode, ctx));
        for j in cx.levels() {
            let lev = hier.level(j)?;
            let refs = reference_solutions(lev, lev.prec.eps_check)?;
            let Some(xc) = refs.x_check.clone() else {
                rows.push(cx.row(p, j).with_prec(&lev.prec).label(format!("{mode}:singular")));
                continue;
            };
            let x0 = random_guess(lev, &refs.x_h, cell_seed(cx.spec.seed, p, bits, j))?;
            let opts = IrOptions::cycles(cx.spec.max_cycles);
            let (history, label) = match hier.ir_solve(j, &x0, &opts, Some(&xc)) {
                Ok(o) => (o.history, mode.to_string()),
                Err(Error::Divergence { history }) => (history, format!("{mode}:diverged")),
                Err(e) => {
                    failures += 1;
                    rows.push(cx.row(p, j).with_prec(&lev.prec).label(format!("error: {e}")));
                    continue;
                }
            };
            for (i, e) in history.into_iter().enumerate() {
                let mut r = cx.row(p, j).with_prec(&lev.prec).label(label.clone());
                r.cycle = Some(i);
                r.e_alg = Some(e);
                rows.push(r);
            }
        }
    }
    Ok((rows, failures, serde_json::Value::Null))
}

fn round_quant_scaling(cx: &Ctx, p: usize, bits: u32) -> Result<CellOut> {
    let ctx = PrecisionCtx::new(bits)?;
    let base = cx.base(p)?;
    let mut rows = Vec::new();
    let mut failures = 0;
    for j in cx.levels() {
        let lev = base.level(j)?;
        let refs = reference_solutions(lev, ctx)?;
        let cond = lev.condition()?;
        let quant_prec = LevelPrecision { eps_check: ctx, ..LevelPrecision::base() };
        let mut r = cx.row(p, j).with_prec(&quant_prec);
        r.kappa = Some(cond.kappa);
        r.e_quant = decompose(lev, &refs.x_h, None, &refs, None)?.relative().e_quant;
        r.param = quantization_bound(cond.kappa_underbar, cond.kappa, ctx.unit_roundoff()).ok().map(|q| q.bound);
        rows.push(r.label(if refs.x_check.is_some() { "quant" } else { "quant:singular" }));
    }
    for mode in ["fixed", "mixed"] {
        let hier = base.with_precisions(|_| precision_for(mode, ctx));
        for j in cx.levels() {
            let lev = hier.level(j)?;
            let refs = reference_solutions(lev, lev.prec.eps_check)?;
            let row = cx.row(p, j).with_prec(&lev.prec);
            let Some(xc) = refs.x_check.clone() else {
                rows.push(row.label(format!("{mode}:singular")));
                continue;
            };
            let x0 = random_guess(lev, &refs.x_h, cell_seed(cx.spec.seed, p, bits, j))?;
            let opts = IrOptions {
                max_cycles: cx.spec.max_cycles,
                stagnation: Some(Stagnation::default()),
                ..IrOptions::default()
            };
            let mut r = row;
            r.kappa = Some(lev.kappa()?);
            match hier.ir_solve(j, &x0, &opts, Some(&xc)) {
                Ok(o) => {
                    let lim = tail_max(&o.history);
                    r.e_round = Some(lim);
                    r.e_alg = o.history.last().copied();
                    r.cycle = Some(o.cycles);
                    let tag = if o.stop == StopReason::Stagnated { mode.to_string() } else { format!("{mode}:nostag") };
                    rows.push(r.label(tag));
                }
                Err(Error::Divergence { history }) => {
                    r.cycle = Some(history.len() - 1);
                    r.e_alg = history.last().copied();
                    rows.push(r.label(format!("{mode}:diverged")));
                }
                Err(e) => {
                    failures += 1;
                    rows.push(r.label(format!("error: {e}")));
                }
            }
        }
    }
    Ok((rows, failures, serde_json::Value::Null))
}

fn eig_quant(cx: &Ctx, p: usize, bits: u32) -> Result<CellOut> {
    let ctx = PrecisionCtx::new(bits)?;
    let base = cx.base(p)?;
    let mut rows = Vec::new();
    for j in cx.levels() {
        let lev = base.level(j)?;
        let cond = lev.condition()?;
        let ee = extreme_eigs(&lev.a.quantize(ctx))?;
        let prec = LevelPrecision { eps_check: ctx, ..LevelPrecision::base() };
        let mut r = cx.row(p, j).with_prec(&prec).param(cond.kappa_underbar * ctx.unit_roundoff());
        r.kappa = Some(cond.kappa);
        r.lambda_min = Some(ee.lambda_min);
        rows.push(r.label(if ee.negative > 0 { "indefinite" } else { "spd" }));
    }
    Ok((rows, 0, serde_json::Value::Null))
}

/// Least-squares constant of one series from scaling rows with `1/h` past the
/// pre-asymptotic window; `value` extracts the relative error.
fn fit_series(rows: &[Row], label: &str, bits_of: fn(&Row) -> u32, value: fn(&Row) -> Option<f64>) -> Option<(f64, f64)> {
    let samples: Vec<(f64, f64, f64)> = rows
        .iter()
        .filter(|r| r.label == label && r.h_inv > REGRESSION_MIN_H_INV)
        .filter_map(|r| value(r).filter(|v| *v > 0.0 && *v < 1.0).map(|v| (1.0 / r.h_inv as f64, 2f64.powi(-(bits_of(r) as i32)), v)))
        .collect();
    regress_constants(&samples).ok()
}

/// Fits of the scaling data: `c` from mixed-precision rounding (`eps`),
/// `c_bar` from fixed-precision rounding and `c_check` from quantization.
pub fn scaling_fits(rows: &[Row]) -> BTreeMap<&'static str, (f64, f64)> {
    let mut out = BTreeMap::new();
    let fits = [
        ("c_fit", fit_series(rows, "mixed", |r| r.bits_eps, |r| r.e_round)),
        ("c_bar_fit", fit_series(rows, "fixed", |r| r.bits_epsbar, |r| r.e_round)),
        ("c_check_fit", fit_series(rows, "quant", |r| r.bits_epscheck, |r| r.e_quant)),
    ];
    for (k, v) in fits {
        if let Some(v) = v {
            out.insert(k, v);
        }
    }
    out
}

fn constants(cx: &Ctx, p: usize) -> Result<CellOut> {
    let hier = cx.base(p)?;
    let m = hier.m() as i32;
    let m_a = (2 * p + 1) as f64;
    let mut rows = Vec::new();
    for j in cx.levels() {
        let lev = hier.level(j)?;
        let ck = lev.kappa()? * lev.h.powi(2 * m);
        for (name, v) in [("c", ck.sqrt()), ("c_bar", 4.0 * m_a * ck), ("c_check", ck)] {
            let mut r = cx.row(p, j).param(v).label(name);
            r.kappa = Some(lev.kappa()?);
            rows.push(r);
        }
    }
    let mut scaling = Vec::new();
    let mut failures = 0;
    for &b in &cx.spec.bits {
        let (r, f, _) = round_quant_scaling(cx, p, b)?;
        scaling.extend(r);
        failures += f;
    }
    let fits = scaling_fits(&scaling);
    for (name, (c, alpha)) in &fits {
        rows.push(cx.row(p, 0).param(*c).label(*name));
        rows.push(cx.row(p, 0).param(*alpha).label(format!("alpha_{name}")));
    }
    let walk = walk_constants(p, cx.frac(p), cx.spec.levels.1.min(SOLVE_LEVEL_CAP));
    let walk_json = match &walk {
        Ok(est) => {
            rows.push(cx.row(p, est.level).param(est.constants.c_kappa).label("walk_c_kappa"));
            serde_json::to_value(est)?
        }
        Err(e) => {
            failures += 1;
            rows.push(cx.row(p, 0).label(format!("error: {e}")));
            json!(null)
        }
    };
    Ok((rows, failures, json!({ "walk": walk_json, "fits": fits })))
}

/// Smallest `N <= cap` for which base-precision FMG leaves an algebraic error
/// no larger than the discretization error on every level of `levels`.
pub fn minimal_fmg_cycles(hier: &Hierarchy<Quad>, levels: std::ops::RangeInclusive<usize>, cap: usize) -> Result<Option<usize>> {
    let exact = hier.problem().exact;
    let mut refs = Vec::new();
    for j in levels.clone() {
        let lev = hier.level(j)?;
        let r = reference_solutions(lev, PrecisionCtx::BASE)?;
        let d = decompose(lev, &r.x_h, None, &r, exact)?.e_disc.ok_or(Error::Invalid("no exact solution".into()))?;
        refs.push((j, r, d));
    }
    for n in 1..=cap {
        let xs = hier.fmg(n)?;
        let ok = refs.iter().all(|(j, r, d)| {
            let lev = &hier.levels()[j - 1];
            energy_norm(&lev.a, &xs[j - 1].sub(&r.x_h)).map(|e| e.to_f() <= *d).unwrap_or(false)
        });
        if ok {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

fn n_table(cx: &Ctx, p: usize) -> Result<CellOut> {
    let hier = cx.base(p)?;
    let (lo, hi) = cx.spec.levels;
    let rho = (lo..=hi).map(|j| rho_v(&hier, j)).collect::<Result<Vec<f64>>>()?.into_iter().fold(0.0, f64::max);
    let q = hier.q() as f64;
    let mut rows = Vec::new();
    let n_th = n_cycles(rho, q, 2.0)?;
    let mut r = cx.row(p, hi).param(n_th as f64).label("theoretical");
    r.rho_v = Some(rho);
    rows.push(r);
    let n_emp = minimal_fmg_cycles(&hier, lo..=hi, n_th.max(1))?;
    let mut r = cx.row(p, hi).label(if n_emp.is_some() { "empirical" } else { "empirical:above_theoretical" });
    r.param = n_emp.map(|n| n as f64);
    r.rho_v = Some(rho);
    rows.push(r);
    Ok((rows, 0, json!({ "rho_v": rho, "n_theoretical": n_th, "n_empirical": n_emp, "fraction": cx.frac(p) })))
}

fn pfmg_accuracy(cx: &Ctx, p: usize) -> Result<CellOut> {
    let frac = cx.frac(p);
    let est = walk_constants(p, frac, cx.spec.levels.1.clamp(3, 10))?;
    let n = cx.spec.n.unwrap_or(est.constants.n);
    let mut rows = Vec::new();
    let mut failures = 0;
    let mut runs = Vec::new();
    for &e_goal in &cx.spec.e_goals {
        let opts = PfmgOptions {
            e_goal,
            n,
            max_levels: cx.spec.levels.1,
            constants: est.constants,
            spectrum_fraction: frac,
        };
        match pfmg::<Quad>(p, Problem::model(), &opts) {
            Ok(out) => {
                for s in &out.steps {
                    let mut r = cx.row(p, s.level).with_prec(&s.prec).param(e_goal).label("step");
                    r.cycle = Some(n);
                    rows.push(r);
                }
                let lev = out.hierarchy.finest()?;
                let refs = reference_solutions(lev, PrecisionCtx::BASE)?;
                let rep = decompose(lev, &out.x, None, &refs, out.hierarchy.problem().exact)?.relative();
                let mut r = cx.row(p, out.level).with_prec(&lev.prec).param(e_goal).label("final");
                r.e_disc = rep.e_disc;
                r.e_total = rep.e_total;
                r.e_alg = rep.e_alg;
                r.cycle = Some(n);
                rows.push(r);
                runs.push(json!({ "e_goal": e_goal, "level": out.level, "c_estimate": out.c_estimate, "steps": out.steps }));
            }
            Err(e) => {
                failures += 1;
                rows.push(cx.row(p, 0).param(e_goal).label(format!("error: {e}")));
                runs.push(json!({ "e_goal": e_goal, "error": e.to_string() }));
            }
        }
    }
    Ok((rows, failures, json!({ "constants": est, "n": n, "runs": runs })))
}

fn run_cell(cx: &Ctx, p: usize, bits: Option<u32>) -> Result<CellOut> {
    use ExperimentId::*;
    let b = bits.unwrap_or(crate::vprec::QUAD_BITS);
    match cx.spec.experiment {
        FixedFmg => fixed_fmg(cx, p, b),
        CondGrowth => cond_growth(cx, p),
        SmootherTuning => smoother_tuning(cx, p),
        IrvHistory => irv_history(cx, p, b),
        RoundQuantScaling => round_quant_scaling(cx, p, b),
        EigQuant => eig_quant(cx, p, b),
        Constants => constants(cx, p),
        NTable => n_table(cx, p),
        PfmgAccuracy => pfmg_accuracy(cx, p),
    }
}

fn needs_tuning(e: ExperimentId) -> bool {
    !matches!(e, ExperimentId::CondGrowth | ExperimentId::EigQuant | ExperimentId::SmootherTuning)
}

/// Runs every cell of `spec` on up to `jobs` threads. Rows come back in spec
/// order regardless of scheduling; a failing cell contributes one
/// `error:` row and the sweep continues.
pub fn run_experiment(spec: &ExperimentSpec, jobs: usize) -> Result<SweepResult> {
    spec.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Invalid(format!("thread pool: {e}")))?;
    pool.install(|| {
        let mut fracs = BTreeMap::new();
        if needs_tuning(spec.experiment) {
            let probe = spec.levels.1.clamp(2, 7);
            let tuned: Vec<(usize, Result<(f64, Vec<(f64, f64)>)>)> =
                spec.p.par_iter().map(|&p| (p, tuned_fraction(p, probe, &spec.fractions))).collect();
            for (p, t) in tuned {
                fracs.insert(p, t?.0);
            }
        }
        let cx = Ctx { spec, fracs: &fracs };
        let cells: Vec<(usize, Option<u32>)> = if spec.experiment.per_bits() {
            spec.p.iter().flat_map(|&p| spec.bits.iter().map(move |&b| (p, Some(b)))).collect()
        } else {
            spec.p.iter().map(|&p| (p, None)).collect()
        };
        let outs: Vec<Result<CellOut>> = cells.par_iter().map(|&(p, b)| run_cell(&cx, p, b)).collect();
        let mut rows = Vec::new();
        let mut failures = 0;
        let mut details = serde_json::Map::new();
        for (&(p, b), out) in cells.iter().zip(outs) {
            let key = match b {
                Some(b) => format!("p{p}_b{b}"),
                None => format!("p{p}"),
            };
            match out {
                Ok((r, f, d)) => {
                    rows.extend(r);
                    failures += f;
                    if !d.is_null() {
                        details.insert(key, d);
                    }
                }
                Err(e) => {
                    failures += 1;
                    let mut r = cx.row(p, 0).label(format!("error: {e}"));
                    if let Some(b) = b {
                        r = r.with_prec(&LevelPrecision::uniform(PrecisionCtx::clamped(b)));
                    }
                    rows.push(r);
                    details.insert(key, json!({ "error": e.to_string() }));
                }
            }
        }
        details.insert("spectrum_fractions".into(), serde_json::to_value(&fracs)?);
        Ok(SweepResult { rows, failures, details: serde_json::Value::Object(details) })
    })
}
