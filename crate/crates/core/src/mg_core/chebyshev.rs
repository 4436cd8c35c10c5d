use crate::error::{Error, Result};
use crate::sparse_linalg::Vector;
use crate::vprec::{PrecisionCtx, Real};

use super::ops::{add_at, hadamard_at, round_all, scale_at, sub_at};
use super::LevelData;

/// Three scalars of the degree-2 Chebyshev iteration on `[lo, hi]` started
/// from zero:
/// `x1 = c0 D^{-1} r`, `x2 = x1 + c1 x1 + c2 D^{-1} (r - A x1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChebyshevCoeffs<T> {
    pub c0: T,
    pub c1: T,
    pub c2: T,
}

impl<T: Real> ChebyshevCoeffs<T> {
    pub fn new(lo: T, hi: T) -> Result<Self> {
        if !(lo > T::zero() && hi > lo) {
            return Err(Error::Invalid(format!("Chebyshev interval [{}, {}]", lo.to_f(), hi.to_f())));
        }
        let two = T::from_int(2);
        let theta = (hi + lo) / two;
        let delta = (hi - lo) / two;
        let sigma = theta / delta;
        let rho0 = T::one() / sigma;
        let rho1 = T::one() / (two * sigma - rho0);
        Ok(ChebyshevCoeffs { c0: T::one() / theta, c1: rho1 * rho0, c2: two * rho1 / delta })
    }

    /// Value of the error polynomial `1 - lambda * s(lambda)` after both steps.
    pub fn error_polynomial(&self, lambda: T) -> T {
        let e1 = T::one() - self.c0 * lambda;
        e1 + self.c1 * (e1 - T::one()) - self.c2 * lambda * e1
    }
}

/// `M r` with a zero initial guess, every operation rounded to `bits`.
pub(crate) fn smooth_zero<T: Real>(level: &LevelData<T>, r: &[T], bits: u32) -> Result<Vec<T>> {
    let n = level.dim();
    if r.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: r.len() });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let cf = level.chebyshev().ok_or(Error::UnsetSpectrum)?;
    let c0 = cf.c0.round_to(bits);
    let c1 = cf.c1.round_to(bits);
    let c2 = cf.c2.round_to(bits);
    let d_inv = round_all(&level.d_inv, bits);
    let z = hadamard_at(&d_inv, r, bits);
    let x1 = scale_at(c0, &z, bits);
    let ax = level.a_dot.matvec_at_bits(&x1, bits);
    let res = sub_at(r, &ax, bits);
    let z1 = hadamard_at(&d_inv, &res, bits);
    let t = add_at(&x1, &scale_at(c1, &x1, bits), bits);
    Ok(add_at(&t, &scale_at(c2, &z1, bits), bits))
}

/// One degree-2 Chebyshev sweep for `A y = r` from the guess `y`, with
/// arithmetic rounded to `ctx`.
pub fn chebyshev_smooth<T: Real>(level: &LevelData<T>, y: &[T], r: &[T], ctx: PrecisionCtx) -> Result<Vector<T>> {
    let bits = ctx.bits();
    if y.len() != level.dim() {
        return Err(Error::DimensionMismatch { expected: level.dim(), got: y.len() });
    }
    let y = round_all(y, bits);
    let r = round_all(r, bits);
    let ay = level.a_dot.matvec_at_bits(&y, bits);
    let res = sub_at(&r, &ay, bits);
    let d = smooth_zero(level, &res, bits)?;
    Ok(Vector::new(add_at(&y, &d, bits)).quantize(ctx))
}
