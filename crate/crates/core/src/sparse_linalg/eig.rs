use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vprec::Real;

use super::{inertia_below, BandCholesky, BandLu, DenseMatrix, SparseMatrix};

/// Relative change in the eigenvalue estimate that stops a power iteration.
pub const EIG_REL_TOL: f64 = 1e-6;
pub const EIG_MAX_ITERS: usize = 10_000;

const START_SEED: u64 = 0x5eed_0f_e16e;

fn random_start(n: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(START_SEED);
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Largest `|lambda|` of a symmetric matrix by power iteration on the
/// norm ratio `||A x|| / ||x||`.
fn power_abs(mut apply: impl FnMut(&[f64]) -> Vec<f64>, n: usize, what: &'static str) -> Result<f64> {
    if n == 0 {
        return Ok(0.0);
    }
    let mut x = random_start(n);
    let s = norm(&x);
    x.iter_mut().for_each(|v| *v /= s);
    let mut est = 0.0;
    for it in 0..EIG_MAX_ITERS {
        let y = apply(&x);
        let ny = norm(&y);
        if ny == 0.0 {
            return Ok(0.0);
        }
        let prev = est;
        est = ny;
        x = y.into_iter().map(|v| v / ny).collect();
        if it > 2 && (est - prev).abs() <= EIG_REL_TOL * est {
            return Ok(est);
        }
    }
    Err(Error::NoConvergence { what, iterations: EIG_MAX_ITERS, estimate: est })
}

/// `||A||_2` of a symmetric matrix by power iteration.
pub fn lambda_max_power<T: Real>(a: &SparseMatrix<T>) -> Result<f64> {
    let af = a.to_f64();
    power_abs(|x| af.matvec(x).expect("square").into_inner(), a.nrows(), "power iteration")
}

/// `||A^{-1}||_2` by inverse iteration with base-precision banded LU solves.
pub fn spd_inverse_norm<T: Real>(a: &SparseMatrix<T>) -> Result<f64> {
    let lu = BandLu::factor(a)?;
    power_abs(
        |x| {
            let xt: Vec<T> = x.iter().map(|&v| T::from_f(v)).collect();
            lu.solve(&xt).expect("square").to_f64()
        },
        a.nrows(),
        "inverse iteration",
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionInfo {
    pub norm2: f64,
    pub inv_norm: f64,
    pub kappa: f64,
    /// `psi = || |A| ||_2`
    pub abs_norm: f64,
    /// `psi * ||A^{-1}||`
    pub kappa_underbar: f64,
}

pub fn norm_and_cond<T: Real>(a: &SparseMatrix<T>) -> Result<ConditionInfo> {
    let norm2 = lambda_max_power(a)?;
    let inv_norm = spd_inverse_norm(a)?;
    let abs_norm = lambda_max_power(&a.abs())?;
    Ok(ConditionInfo { norm2, inv_norm, kappa: norm2 * inv_norm, abs_norm, kappa_underbar: abs_norm * inv_norm })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremeEigs {
    pub lambda_min: f64,
    pub lambda_max: f64,
    /// Number of negative eigenvalues.
    pub negative: usize,
}

/// Smallest eigenvalue of a symmetric matrix to relative accuracy `rel_tol`,
/// by bisection on Sylvester inertia counts.
pub fn lambda_min_bisect<T: Real>(a: &SparseMatrix<T>, rel_tol: f64) -> Result<f64> {
    let n = a.nrows();
    if n == 0 {
        return Ok(0.0);
    }
    let r = a.norm_inf();
    if r.is_zero() {
        return Ok(0.0);
    }
    let count = |x: T| inertia_below(a, x);
    let negative = count(T::zero()) > 0;
    // Bracket |lambda_min| in [x, 2x] by halving.
    let mut x = r;
    let inside = |x: T| if negative { count(-x) > 0 } else { count(x) == 0 };
    let mut halvings = 0;
    while !inside(x) {
        x = x.ldexp(-1);
        halvings += 1;
        if halvings > 4 * T::BASE_BITS as usize + 64 {
            return Ok(0.0);
        }
    }
    // negative: count(-x) > 0 and count(-2x) == 0 -> lambda in [-2x, -x)
    // positive: count(x) == 0 and count(2x) >= 1 -> lambda in [x, 2x)
    let (mut lo, mut hi) = if negative { (-(x.ldexp(1)), -x) } else { (x, x.ldexp(1)) };
    let tol = T::from_f(rel_tol);
    for _ in 0..200 {
        let mid = (lo + hi).ldexp(-1);
        if count(mid) > 0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if (hi - lo) <= tol * lo.abs().max_of(hi.abs()) {
            break;
        }
    }
    Ok((lo + hi).ldexp(-1).to_f())
}

/// `lambda_max` by power iteration, `lambda_min` by inertia bisection.
pub fn extreme_eigs<T: Real>(a: &SparseMatrix<T>) -> Result<ExtremeEigs> {
    let lambda_min = lambda_min_bisect(a, EIG_REL_TOL)?;
    let dominant = lambda_max_power(a)?;
    let negative = inertia_below(a, T::zero());
    // The dominant eigenvalue is negative only when every eigenvalue is.
    let lambda_max = if negative == a.nrows() { -dominant } else { dominant };
    Ok(ExtremeEigs { lambda_min, lambda_max, negative })
}

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `alpha`
/// and off-diagonal `beta`, ascending.
pub fn symmetric_tridiag_eigs(alpha: &[f64], beta: &[f64]) -> Vec<f64> {
    let k = alpha.len();
    let t = DenseMatrix::from_fn(k, k, |i, j| {
        if i == j {
            alpha[i]
        } else if i + 1 == j {
            beta[i]
        } else if j + 1 == i {
            beta[j]
        } else {
            0.0
        }
    });
    t.symmetric_eigenvalues().expect("square")
}

/// Energy norm `||V||_A`, the square root of the largest eigenvalue of
/// `V^T A V x = lambda A x`, by Lanczos with full reorthogonalization on
/// `L^T V L^{-T}` where `A = L L^T`.
pub fn rho_v_energy<T: Real>(v: &DenseMatrix<T>, a: &SparseMatrix<T>) -> Result<T> {
    let n = a.nrows();
    if v.nrows() != n || v.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, got: v.nrows() });
    }
    if n == 0 {
        return Ok(T::zero());
    }
    let ch = BandCholesky::factor(a)?;
    // B = (L^T V L^{-T})^T (L^T V L^{-T}) = L^{-1} V^T L L^T V L^{-T}
    let apply = |x: &[T]| -> Vec<T> {
        let w = ch.solve_lt(x);
        let z = v.matvec(&w).expect("square");
        let y = ch.mul_lt(&z);
        let u = ch.mul_l(&y);
        let s = v.matvec_transpose(&u).expect("square");
        ch.solve_l(&s)
    };
    let dot = |a: &[T], b: &[T]| a.iter().zip(b).fold(T::zero(), |s, (&x, &y)| s + x * y);
    let start: Vec<T> = random_start(n).into_iter().map(T::from_f).collect();
    let s = dot(&start, &start).sqrt();
    let mut q: Vec<Vec<T>> = vec![start.iter().map(|&x| x / s).collect()];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut est = 0.0f64;
    let max_steps = n.min(120);
    for step in 0..max_steps {
        let mut w = apply(&q[step]);
        let a_k = dot(&w, &q[step]);
        alpha.push(a_k.to_f());
        // two passes of classical Gram-Schmidt against all previous vectors
        for _ in 0..2 {
            for qi in &q {
                let c = dot(&w, qi);
                for (wj, &qj) in w.iter_mut().zip(qi) {
                    *wj -= c * qj;
                }
            }
        }
        let b_k = dot(&w, &w).sqrt();
        let ritz = symmetric_tridiag_eigs(&alpha, &beta);
        let top = ritz.last().copied().unwrap_or(0.0).max(0.0);
        let converged = step > 3 && (top - est).abs() <= 1e-12 * top.max(f64::MIN_POSITIVE);
        est = top;
        if converged || b_k.to_f() <= 1e-28 * top.max(1e-300) || b_k.is_zero() {
            break;
        }
        beta.push(b_k.to_f());
        q.push(w.iter().map(|&x| x / b_k).collect());
    }
    Ok(T::from_f(est).sqrt())
}
