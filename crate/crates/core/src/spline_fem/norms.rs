use crate::error::{Error, Result};
use crate::vprec::Real;

use super::{extend_constrained, gauss_legendre, SplineSpace};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorNorm {
    /// `(int (u_h'' - u'')^2)^(1/2)`
    Energy,
    L2,
}

/// What a discrete solution is compared against.
pub enum Reference<'a, T> {
    /// A function of `(xi, derivative order)` returning order 0 or 2.
    Exact(&'a dyn Fn(T, usize) -> T),
    /// Constrained coefficients in the same space.
    Coeffs(&'a [T]),
}

/// `sum_i c_i B_i^{(deriv)}(xi)` for full (unconstrained) coefficients.
pub fn eval_spline<T: Real>(space: &SplineSpace, full: &[T], xi: T, deriv: usize) -> T {
    let s = space.find_span(xi);
    let d = space.ders_basis(s, xi, deriv);
    let p = space.degree();
    (0..=p).fold(T::zero(), |acc, r| acc + full[s - p + r] * d[deriv][r])
}

/// Continuous-norm distance between the spline with constrained coefficients
/// `coeffs` and `reference`, with `k^2` Gauss points per element.
pub fn continuous_error<T: Real>(
    space: &SplineSpace,
    coeffs: &[T],
    reference: Reference<'_, T>,
    norm: ErrorNorm,
) -> Result<T> {
    let full = extend_constrained(space, coeffs)?;
    let other = match reference {
        Reference::Coeffs(c) => {
            if c.len() != coeffs.len() {
                return Err(Error::DimensionMismatch { expected: coeffs.len(), got: c.len() });
            }
            Some(extend_constrained(space, c)?)
        }
        Reference::Exact(_) => None,
    };
    let deriv = match norm {
        ErrorNorm::Energy => 2,
        ErrorNorm::L2 => 0,
    };
    let k = space.order();
    let (gx, gw) = gauss_legendre::<T>(k * k);
    let p = space.degree();
    let half = space.h::<T>().ldexp(-1);
    let mut acc = T::zero();
    for e in 0..space.n_elem() {
        let s = e + p;
        let mid = space.knot::<T>(s) + half;
        for (&x, &w) in gx.iter().zip(&gw) {
            let xi = mid + half * x;
            let d = space.ders_basis(s, xi, deriv);
            let mut diff = (0..=p).fold(T::zero(), |a, r| a + full[s - p + r] * d[deriv][r]);
            match (&reference, &other) {
                (Reference::Exact(u), _) => diff -= u(xi, deriv),
                (_, Some(o)) => diff -= (0..=p).fold(T::zero(), |a, r| a + o[s - p + r] * d[deriv][r]),
                _ => unreachable!(),
            }
            acc += w * half * diff * diff;
        }
    }
    Ok(acc.sqrt())
}
