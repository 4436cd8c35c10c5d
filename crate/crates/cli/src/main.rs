//! `ppmg` command-line driver: PFMG solves, experiment sweeps, precision
//! schedules, constants estimation and smoother tuning.
//!
//! Every command writes a JSON manifest into the output directory before it
//! starts computing and rewrites it with the final status on exit.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use ppmg::error_lab::{
    walk_constants, reference_solutions, run_experiment, scaling_fits, tuned_fraction, write_csv, ExperimentId,
    ExperimentSpec, Manifest, ManifestStatus, Row, FRACTION_GRID,
};
use ppmg::mg_core::{pfmg, target_level, PfmgOptions, Problem};
use ppmg::precision_plan::{schedule_level, TheoryConstants, TAU_DOT_TOL};
use ppmg::vprec::digits_to_bits;
use ppmg::{Error, PrecisionCtx, Quad, Result};

/// Probe level for smoother tuning.
const TUNE_PROBE: usize = 7;
/// Levels examined by the constants walk.
const WALK_LEVELS: usize = 10;

#[derive(Parser)]
#[command(name = "ppmg", version, about = "Progressive-precision multigrid laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Output directory.
    #[arg(long, env = "PPMG_OUT_DIR", default_value = "ppmg-out")]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads for sweep cells.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConstantsSource {
    #[value(alias = "alg4")]
    Walk,
    Regression,
    File,
}

#[derive(Args, Clone)]
struct ConstantsArgs {
    /// Where the precision constants come from.
    #[arg(long, value_enum, default_value_t = ConstantsSource::Walk)]
    constants_source: ConstantsSource,
    /// Constants file written by `ppmg constants` (for `--constants-source file`).
    #[arg(long)]
    constants_file: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// One PFMG run: level reached, C estimate and achieved errors.
    Solve {
        #[arg(long, default_value_t = 4)]
        p: usize,
        #[arg(long, default_value_t = 1e-4)]
        e_goal: f64,
        /// Cycles per level; defaults to the constants' N.
        #[arg(long)]
        n: Option<usize>,
        /// Level cap.
        #[arg(long, default_value_t = 12)]
        levels: usize,
        #[command(flatten)]
        constants: ConstantsArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Runs one experiment and writes `<experiment>.csv`.
    Sweep {
        experiment: String,
        /// Degrees, comma separated.
        #[arg(long, value_delimiter = ',')]
        p: Option<Vec<usize>>,
        /// Levels as `lo:hi` or just the finest level.
        #[arg(long)]
        levels: Option<String>,
        /// Precision grid in bits, comma separated.
        #[arg(long, value_delimiter = ',', conflicts_with = "digits")]
        bits: Option<Vec<u32>>,
        /// Precision grid in decimal digits, comma separated.
        #[arg(long, value_delimiter = ',')]
        digits: Option<Vec<u32>>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        max_cycles: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        e_goal: Option<Vec<f64>>,
        /// Candidate spectrum fractions, comma separated.
        #[arg(long, value_delimiter = ',')]
        fractions: Option<Vec<f64>>,
        #[command(flatten)]
        common: Common,
    },
    /// Prints the per-level precision schedule.
    Plan {
        #[arg(long, default_value_t = 4)]
        p: usize,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 10)]
        levels: usize,
        #[arg(long, default_value_t = 2.0)]
        theta: f64,
        /// Marks the level whose discretization error meets this goal.
        #[arg(long)]
        e_goal: Option<f64>,
        /// Discretization constant C.
        #[arg(long, default_value_t = 1.0)]
        big_c: f64,
        /// Uses this `c_kappa` instead of estimating it.
        #[arg(long)]
        c_kappa: Option<f64>,
        #[command(flatten)]
        constants: ConstantsArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Estimates the precision constants and writes `constants.json`.
    Constants {
        #[arg(long, value_delimiter = ',', default_value = "3,4,5")]
        p: Vec<usize>,
        /// `walk`, `regression`, or both when omitted.
        #[arg(long, value_enum)]
        source: Option<ConstantsSource>,
        /// Finest level of the regression sweep.
        #[arg(long, default_value_t = 12)]
        levels: usize,
        #[arg(long, value_delimiter = ',', default_value = "24,37")]
        bits: Vec<u32>,
        #[command(flatten)]
        common: Common,
    },
    /// Smoother tuning and the table of V-cycle convergence factors.
    Rho {
        #[arg(long, value_delimiter = ',', default_value = "3,4,5")]
        p: Vec<usize>,
        #[arg(long, default_value = "2:8")]
        levels: String,
        #[arg(long, value_delimiter = ',')]
        fractions: Option<Vec<f64>>,
        #[command(flatten)]
        common: Common,
    },
}

fn parse_levels(s: &str, default_lo: usize) -> Result<(usize, usize)> {
    let bad = || Error::Invalid(format!("level range '{s}' is not 'lo:hi' or 'hi'"));
    match s.split_once(':') {
        Some((a, b)) => Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?)),
        None => Ok((default_lo, s.trim().parse().map_err(|_| bad())?)),
    }
}

/// Runs `body` between the initial and the final manifest write.
fn with_manifest(
    common: &Common,
    name: &str,
    spec: Option<ExperimentSpec>,
    body: impl FnOnce(&mut Manifest) -> Result<usize>,
) -> Result<ExitCode> {
    fs::create_dir_all(&common.out)?;
    let path = common.out.join(format!("{name}.manifest.json"));
    let mut manifest = Manifest::new(name, spec);
    manifest.write(&path)?;
    let result = body(&mut manifest);
    let code = match &result {
        Ok(0) => {
            manifest.status = ManifestStatus::Complete;
            ExitCode::SUCCESS
        }
        Ok(n) => {
            manifest.status = ManifestStatus::Failed;
            manifest.error = Some(format!("{n} cells failed"));
            ExitCode::FAILURE
        }
        Err(e) => {
            manifest.status = ManifestStatus::Failed;
            manifest.error = Some(e.to_string());
            ExitCode::FAILURE
        }
    };
    manifest.write(&path)?;
    result.map(|_| code)
}

fn read_constants_file(path: &Path, p: usize) -> Result<TheoryConstants> {
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(path)?)?;
    let entry = v.get(format!("p{p}")).cloned().unwrap_or(v);
    // a constants file maps degrees to sources; take the walk unless only a fit exists
    let picked = ["walk", "regression"].iter().find_map(|k| entry.get(*k).cloned()).unwrap_or(entry);
    Ok(serde_json::from_value(picked)?)
}

/// Precision constants from the level walk with the fitted prefactors
/// substituted where a fit is available.
fn regression_constants(p: usize, frac: f64, levels: usize, bits: &[u32], seed: u64, jobs: usize) -> Result<TheoryConstants> {
    let base = walk_constants(p, frac, WALK_LEVELS)?.constants;
    let mut spec = ExperimentSpec::default_for(ExperimentId::RoundQuantScaling);
    spec.p = vec![p];
    spec.levels = (2, levels);
    spec.bits = bits.to_vec();
    spec.seed = seed;
    let fits = scaling_fits(&run_experiment(&spec, jobs)?.rows);
    let get = |k: &str, d: f64| fits.get(k).map(|f| f.0).unwrap_or(d);
    Ok(TheoryConstants { c: get("c_fit", base.c), c_bar: get("c_bar_fit", base.c_bar), c_check: get("c_check_fit", base.c_check), ..base })
}

fn load_constants(args: &ConstantsArgs, p: usize, common: &Common) -> Result<(TheoryConstants, f64)> {
    let (frac, _) = tuned_fraction(p, TUNE_PROBE, &FRACTION_GRID)?;
    let c = match args.constants_source {
        ConstantsSource::Walk => walk_constants(p, frac, WALK_LEVELS)?.constants,
        ConstantsSource::Regression => regression_constants(p, frac, 12, &[24, 37], common.seed, common.jobs)?,
        ConstantsSource::File => {
            let path = args
                .constants_file
                .as_ref()
                .ok_or_else(|| Error::Invalid("--constants-source file needs --constants-file".into()))?;
            read_constants_file(path, p)?
        }
    };
    Ok((c, frac))
}

fn solve(p: usize, e_goal: f64, n: Option<usize>, levels: usize, cargs: &ConstantsArgs, common: &Common) -> Result<ExitCode> {
    with_manifest(common, "solve", None, |m| {
        let (constants, frac) = load_constants(cargs, p, common)?;
        let n = n.unwrap_or(constants.n);
        let opts = PfmgOptions { e_goal, n, max_levels: levels, constants, spectrum_fraction: frac };
        m.details = json!({ "p": p, "seed": common.seed, "options": opts });
        let out = pfmg::<Quad>(p, Problem::model(), &opts)?;
        let lev = out.hierarchy.finest()?;
        let refs = reference_solutions(lev, PrecisionCtx::BASE)?;
        let rep = ppmg::error_lab::decompose(lev, &out.x, None, &refs, out.hierarchy.problem().exact)?.relative();
        println!("level reached: {}", out.level);
        println!("C estimate: {:.6e}", out.c_estimate);
        println!("N: {n}");
        println!("relative e_total: {:.6e}", rep.e_total.unwrap_or(f64::NAN));
        println!("relative e_disc:  {:.6e}", rep.e_disc.unwrap_or(f64::NAN));
        println!("relative e_alg:   {:.6e}", rep.e_alg.unwrap_or(f64::NAN));
        println!("{:>5} {:>8} {:>10} {:>12} {:>9} {:>12} {:>4}", "level", "bits_eps", "bits_epsbar", "bits_epscheck", "bits_epsdot", "C_used", "L");
        let mut rows = Vec::new();
        for s in &out.steps {
            let l = s.target_level.map(|l| l.to_string()).unwrap_or_else(|| "-".into());
            println!(
                "{:>5} {:>8} {:>10} {:>12} {:>9} {:>12.4e} {:>4}",
                s.level,
                s.prec.eps.bits(),
                s.prec.eps_bar.bits(),
                s.prec.eps_check.bits(),
                s.prec.eps_dot.bits(),
                s.c_used,
                l
            );
            rows.push(Row::new("solve", p, s.level, common.seed).with_prec(&s.prec).param(e_goal).label("step"));
        }
        let mut fin = Row::new("solve", p, out.level, common.seed).with_prec(&lev.prec).param(e_goal).label("final");
        fin.e_total = rep.e_total;
        fin.e_disc = rep.e_disc;
        fin.e_alg = rep.e_alg;
        rows.push(fin);
        let csv = common.out.join("solve.csv");
        write_csv(&csv, &rows)?;
        m.details["level"] = json!(out.level);
        m.details["c_estimate"] = json!(out.c_estimate);
        m.details["steps"] = json!(out.steps);
        m.details["errors"] = json!(rep);
        m.outputs.push(csv);
        m.rows = rows.len();
        Ok(0)
    })
}

#[allow(clippy::too_many_arguments)]
fn sweep(
    experiment: &str,
    p: Option<Vec<usize>>,
    levels: Option<String>,
    bits: Option<Vec<u32>>,
    digits: Option<Vec<u32>>,
    n: Option<usize>,
    max_cycles: Option<usize>,
    e_goal: Option<Vec<f64>>,
    fractions: Option<Vec<f64>>,
    common: &Common,
) -> Result<ExitCode> {
    let id: ExperimentId = experiment.parse()?;
    let mut spec = ExperimentSpec::default_for(id);
    if let Some(p) = p {
        spec.p = p;
    }
    if let Some(l) = levels {
        spec.levels = parse_levels(&l, spec.levels.0)?;
    }
    if let Some(b) = bits {
        spec.bits = b;
    }
    if let Some(d) = &digits {
        spec.bits = d.iter().map(|&d| digits_to_bits(d)).collect();
    }
    spec.n = n.or(spec.n);
    if let Some(c) = max_cycles {
        spec.max_cycles = c;
    }
    if let Some(e) = e_goal {
        spec.e_goals = e;
    }
    if let Some(f) = fractions {
        spec.fractions = f;
    }
    spec.seed = common.seed;
    spec.validate()?;
    with_manifest(common, id.as_str(), Some(spec.clone()), |m| {
        let res = run_experiment(&spec, common.jobs)?;
        let csv = common.out.join(format!("{}.csv", id.as_str()));
        write_csv(&csv, &res.rows)?;
        m.details = res.details;
        if let Some(d) = digits {
            m.details["digits"] = json!(d);
        }
        m.outputs.push(csv.clone());
        m.rows = res.rows.len();
        println!("{} rows written to {}", res.rows.len(), csv.display());
        Ok(res.failures)
    })
}

#[allow(clippy::too_many_arguments)]
fn plan(
    p: usize,
    m: usize,
    levels: usize,
    theta: f64,
    e_goal: Option<f64>,
    big_c: f64,
    c_kappa: Option<f64>,
    cargs: &ConstantsArgs,
    common: &Common,
) -> Result<ExitCode> {
    if m != 2 {
        return Err(Error::Invalid("the biharmonic hierarchy has m = 2".into()));
    }
    if !(theta > 1.0) {
        return Err(Error::Invalid("theta must exceed 1".into()));
    }
    if e_goal.is_some_and(|e| !(e > 0.0 && e < 1.0)) {
        return Err(Error::Invalid("e_goal must lie in (0, 1)".into()));
    }
    with_manifest(common, "plan", None, |man| {
        let base = match c_kappa {
            Some(ck) => TheoryConstants::from_c_kappa(p, m, ck, TAU_DOT_TOL),
            None => load_constants(cargs, p, common)?.0,
        };
        let cst = TheoryConstants { theta, ..base }.with_big_c(big_c);
        let goal_level = e_goal.map(|e| target_level(cst.big_c, e, cst.q, theta));
        println!(
            "{:>5} {:>10} {:>8} {:>10} {:>12} {:>9} {:>11} {:>11} {:>11} {:>11}",
            "level", "h", "bits_eps", "bits_epsbar", "bits_epscheck", "bits_epsdot", "eps", "eps_bar", "eps_check", "eps_dot"
        );
        let mut rows = Vec::new();
        let mut entries = Vec::new();
        for j in 1..=levels {
            let h = theta.powi(-(j as i32 - 1));
            let e = schedule_level(&cst, j, h)?;
            let mark = if goal_level == Some(j) { "  <- e_goal" } else { "" };
            println!(
                "{:>5} {:>10.3e} {:>8} {:>10} {:>12} {:>9} {:>11.3e} {:>11.3e} {:>11.3e} {:>11.3e}{mark}",
                j,
                h,
                e.prec.eps.bits(),
                e.prec.eps_bar.bits(),
                e.prec.eps_check.bits(),
                e.prec.eps_dot.bits(),
                e.targets.eps,
                e.targets.eps_bar,
                e.targets.eps_check,
                e.targets.eps_dot
            );
            let mut r = Row::new("plan", p, j, common.seed).with_prec(&e.prec);
            r.h_inv = (1.0 / h).round() as u64;
            rows.push(r);
            entries.push(e);
        }
        let csv = common.out.join("plan.csv");
        write_csv(&csv, &rows)?;
        man.details = json!({ "constants": cst, "schedule": entries, "e_goal": e_goal, "goal_level": goal_level });
        man.outputs.push(csv);
        man.rows = rows.len();
        Ok(0)
    })
}

fn constants(p: Vec<usize>, source: Option<ConstantsSource>, levels: usize, bits: Vec<u32>, common: &Common) -> Result<ExitCode> {
    if source == Some(ConstantsSource::File) {
        return Err(Error::Invalid("constants are estimated from walk or regression".into()));
    }
    let mut spec = ExperimentSpec::default_for(ExperimentId::Constants);
    spec.p = p.clone();
    spec.levels = (2, levels);
    spec.bits = bits.clone();
    spec.seed = common.seed;
    spec.validate()?;
    with_manifest(common, "constants", Some(spec.clone()), |m| {
        let mut out = BTreeMap::new();
        let mut failures = 0;
        let do_walk = source != Some(ConstantsSource::Regression);
        let do_reg = source != Some(ConstantsSource::Walk);
        if do_reg {
            let res = run_experiment(&spec, common.jobs)?;
            failures += res.failures;
            let csv = common.out.join("constants.csv");
            write_csv(&csv, &res.rows)?;
            m.outputs.push(csv);
            m.rows = res.rows.len();
            m.details = res.details;
        }
        for &p in &p {
            let (frac, _) = tuned_fraction(p, TUNE_PROBE, &FRACTION_GRID)?;
            let mut entry = serde_json::Map::new();
            let walk = walk_constants(p, frac, WALK_LEVELS)?;
            if do_walk {
                entry.insert("walk".into(), json!(walk.constants));
                entry.insert("walk_level".into(), json!(walk.level));
            }
            if do_reg {
                let rows = m.details.get(format!("p{p}")).and_then(|d| d.get("fits")).cloned();
                let fit = |k: &str| rows.as_ref().and_then(|f| f.get(k)).and_then(|v| v.get(0)).and_then(|v| v.as_f64());
                let c = &walk.constants;
                let reg = TheoryConstants {
                    c: fit("c_fit").unwrap_or(c.c),
                    c_bar: fit("c_bar_fit").unwrap_or(c.c_bar),
                    c_check: fit("c_check_fit").unwrap_or(c.c_check),
                    ..*c
                };
                entry.insert("regression".into(), json!(reg));
            }
            println!("p={p}: {}", serde_json::Value::Object(entry.clone()));
            out.insert(format!("p{p}"), serde_json::Value::Object(entry));
        }
        let path = common.out.join("constants.json");
        fs::write(&path, serde_json::to_string_pretty(&out)? + "\n")?;
        m.outputs.push(path);
        Ok(failures)
    })
}

fn rho(p: Vec<usize>, levels: &str, fractions: Option<Vec<f64>>, common: &Common) -> Result<ExitCode> {
    let mut spec = ExperimentSpec::default_for(ExperimentId::SmootherTuning);
    spec.p = p;
    spec.levels = parse_levels(levels, 2)?;
    if let Some(f) = fractions {
        spec.fractions = f;
    }
    spec.seed = common.seed;
    spec.validate()?;
    with_manifest(common, "rho", Some(spec.clone()), |m| {
        let res = run_experiment(&spec, common.jobs)?;
        let csv = common.out.join("rho.csv");
        write_csv(&csv, &res.rows)?;
        for &p in &spec.p {
            let sel = res.rows.iter().find(|r| r.p == p && r.label == "selected");
            let Some(sel) = sel else { continue };
            let f = sel.param.unwrap_or(f64::NAN);
            print!("p={p} fraction={f}");
            for r in res.rows.iter().filter(|r| r.p == p && r.label.is_empty() && r.param == Some(f)) {
                print!(" rho[{}]={:.4}", r.level, r.rho_v.unwrap_or(f64::NAN));
            }
            println!();
        }
        m.details = res.details;
        m.outputs.push(csv);
        m.rows = res.rows.len();
        Ok(res.failures)
    })
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Solve { p, e_goal, n, levels, constants, common } => solve(p, e_goal, n, levels, &constants, &common),
        Command::Sweep { experiment, p, levels, bits, digits, n, max_cycles, e_goal, fractions, common } => {
            sweep(&experiment, p, levels, bits, digits, n, max_cycles, e_goal, fractions, &common)
        }
        Command::Plan { p, m, levels, theta, e_goal, big_c, c_kappa, constants, common } => {
            plan(p, m, levels, theta, e_goal, big_c, c_kappa, &constants, &common)
        }
        Command::Constants { p, source, levels, bits, common } => constants(p, source, levels, bits, &common),
        Command::Rho { p, levels, fractions, common } => rho(p, &levels, fractions, &common),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
