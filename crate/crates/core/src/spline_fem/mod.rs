//! B-spline finite elements for `u'''' = f` on `(0, 1)` with `u = u' = 0` at
//! both ends.
//!
//! Level `j` has `2^(j-1)` uniform elements and an open knot vector of order
//! `k = p + 1`. Basis indices in the public API are 1-based, matching the
//! usual `B_1 .. B_n` numbering; storage is 0-based.

mod assembly;
mod norms;
mod prolongation;
mod quadrature;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vprec::Real;

pub use assembly::{apply_dirichlet, assemble_load, assemble_stiffness, constrained_indices, extend_constrained};
pub use norms::{continuous_error, eval_spline, ErrorNorm, Reference};
pub use prolongation::{build_prolongation, build_prolongation_full, prolongation_rational};
pub use quadrature::gauss_legendre;

/// Uniform open-knot B-spline space on level `level`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SplineSpace {
    p: usize,
    level: usize,
}

impl SplineSpace {
    /// Degree `p >= 3` (order `k = p + 1 >= 4`), level `>= 1`.
    pub fn new(p: usize, level: usize) -> Result<Self> {
        if p < 3 {
            return Err(Error::Invalid(format!("degree {p} below 3")));
        }
        if level < 1 || level > 40 {
            return Err(Error::Invalid(format!("level {level} outside 1..=40")));
        }
        Ok(SplineSpace { p, level })
    }

    pub fn degree(&self) -> usize {
        self.p
    }

    pub fn order(&self) -> usize {
        self.p + 1
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn n_elem(&self) -> usize {
        1 << (self.level - 1)
    }

    pub fn n_basis(&self) -> usize {
        self.n_elem() + self.p
    }

    /// Dimension after removing the four boundary functions.
    pub fn n_constrained(&self) -> usize {
        self.n_basis().saturating_sub(4)
    }

    pub fn h<T: Real>(&self) -> T {
        T::one().ldexp(-(self.level as i64 - 1))
    }

    pub fn h_f64(&self) -> f64 {
        (-(self.level as f64 - 1.0)).exp2()
    }

    /// The level below, or `None` on level 1.
    pub fn coarser(&self) -> Option<Self> {
        (self.level > 1).then(|| SplineSpace { p: self.p, level: self.level - 1 })
    }

    pub fn finer(&self) -> Self {
        SplineSpace { p: self.p, level: self.level + 1 }
    }

    /// Knot `t_i` (0-based) as the integer numerator over `n_elem`.
    pub fn knot_numerator(&self, i: usize) -> usize {
        i.saturating_sub(self.p).min(self.n_elem())
    }

    pub fn knot<T: Real>(&self, i: usize) -> T {
        T::from_int(self.knot_numerator(i) as i64) * self.h::<T>()
    }

    pub fn knots<T: Real>(&self) -> Vec<T> {
        (0..self.n_basis() + self.p + 1).map(|i| self.knot(i)).collect()
    }

    /// Knot span `s` with `t_s <= xi < t_{s+1}`; `xi = 1` falls in the last span.
    pub fn find_span<T: Real>(&self, xi: T) -> usize {
        let n = self.n_elem();
        let scaled = (xi * T::from_int(n as i64)).to_f();
        let mut e = if scaled <= 0.0 { 0 } else { (scaled.floor() as usize).min(n - 1) };
        // guard the f64 floor against values a hair below an integer
        if e + 1 < n && xi >= self.knot::<T>(self.p + e + 1) {
            e += 1;
        }
        if e > 0 && xi < self.knot::<T>(self.p + e) {
            e -= 1;
        }
        e + self.p
    }

    /// Values and derivatives up to `nder` of the `p + 1` nonzero basis
    /// functions at `xi` in span `s`: `out[d][r]` is the `d`th derivative of
    /// `B_{s-p+r}` (0-based index).
    pub fn ders_basis<T: Real>(&self, s: usize, xi: T, nder: usize) -> Vec<Vec<T>> {
        let p = self.p;
        let knot = |i: usize| self.knot::<T>(i);
        let mut ndu = vec![vec![T::zero(); p + 1]; p + 1];
        let mut left = vec![T::zero(); p + 1];
        let mut right = vec![T::zero(); p + 1];
        ndu[0][0] = T::one();
        for j in 1..=p {
            left[j] = xi - knot(s + 1 - j);
            right[j] = knot(s + j) - xi;
            let mut saved = T::zero();
            for r in 0..j {
                ndu[j][r] = right[r + 1] + left[j - r];
                let temp = ndu[r][j - 1] / ndu[j][r];
                ndu[r][j] = saved + right[r + 1] * temp;
                saved = left[j - r] * temp;
            }
            ndu[j][j] = saved;
        }
        let nder = nder.min(p);
        let mut ders = vec![vec![T::zero(); p + 1]; nder + 1];
        for j in 0..=p {
            ders[0][j] = ndu[j][p];
        }
        let mut a = vec![vec![T::zero(); p + 1]; 2];
        for r in 0..=p {
            let (mut s1, mut s2) = (0usize, 1usize);
            a[0][0] = T::one();
            for k in 1..=nder {
                let mut d = T::zero();
                let rk = r as isize - k as isize;
                let pk = p - k;
                if r >= k {
                    a[s2][0] = a[s1][0] / ndu[pk + 1][rk as usize];
                    d = a[s2][0] * ndu[rk as usize][pk];
                }
                let j1 = if rk >= -1 { 1 } else { (-rk) as usize };
                let j2 = if (r as isize - 1) <= pk as isize { k - 1 } else { p - r };
                for j in j1..=j2 {
                    let idx = (rk + j as isize) as usize;
                    a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][idx];
                    d += a[s2][j] * ndu[idx][pk];
                }
                if r as isize <= pk as isize {
                    a[s2][k] = -a[s1][k - 1] / ndu[pk + 1][r];
                    d += a[s2][k] * ndu[r][pk];
                }
                ders[k][r] = d;
                std::mem::swap(&mut s1, &mut s2);
            }
        }
        let mut fac = T::from_int(p as i64);
        for (k, row) in ders.iter_mut().enumerate().skip(1) {
            for v in row.iter_mut() {
                *v *= fac;
            }
            fac *= T::from_int((p - k) as i64);
        }
        ders
    }
}

/// `B_i^{(deriv)}(xi)` for the 1-based index `i`, `deriv <= 2`.
pub fn basis_eval<T: Real>(space: &SplineSpace, i: usize, xi: T, deriv: usize) -> Result<T> {
    let n = space.n_basis();
    if i < 1 || i > n {
        return Err(Error::IndexOutOfRange { index: i, len: n });
    }
    if deriv > 2 {
        return Err(Error::Invalid(format!("derivative order {deriv} above 2")));
    }
    if xi < T::zero() || xi > T::one() {
        return Err(Error::Invalid(format!("point {} outside [0, 1]", xi.to_f())));
    }
    let s = space.find_span(xi);
    let first = s - space.p;
    let idx = i - 1;
    if idx < first || idx > s {
        return Ok(T::zero());
    }
    Ok(space.ders_basis(s, xi, deriv)[deriv][idx - first])
}

/// Right-hand side of the model problem, `f = -16 pi^4 cos(2 pi xi)`.
pub fn model_load<T: Real>(xi: T) -> T {
    let pi = T::pi();
    let two_pi_xi = T::from_int(2) * pi * xi;
    let pi2 = pi * pi;
    -(T::from_int(16) * pi2 * pi2) * two_pi_xi.cos()
}

/// Exact solution `u = 1 - cos(2 pi xi)` and its second derivative.
pub fn model_exact<T: Real>(xi: T, deriv: usize) -> T {
    let pi = T::pi();
    let c = (T::from_int(2) * pi * xi).cos();
    match deriv {
        0 => T::one() - c,
        2 => T::from_int(4) * pi * pi * c,
        _ => panic!("exact solution derivative {deriv} not provided"),
    }
}
