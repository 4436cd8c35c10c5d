use crate::error::{Error, Result};
use crate::sparse_linalg::{SparseMatrix, Vector};
use crate::vprec::Real;

use super::{gauss_legendre, SplineSpace};

/// Longest sub-interval used for the load integral; coarse elements are split.
const LOAD_SUBINTERVAL_LOG2: usize = 5;

/// Unconstrained `A_ij = int B_i'' B_j''` with `p - 1` Gauss points per element.
pub fn assemble_stiffness<T: Real>(space: &SplineSpace) -> SparseMatrix<T> {
    let p = space.degree();
    let n = space.n_basis();
    let (gx, gw) = gauss_legendre::<T>((p - 1).max(1));
    let h = space.h::<T>();
    let half_h = h.ldexp(-1);
    let mut band: Vec<Vec<T>> = vec![vec![T::zero(); 2 * p + 1]; n];
    for e in 0..space.n_elem() {
        let s = e + p;
        let a = space.knot::<T>(s);
        let mid = a + half_h;
        let mut local = vec![vec![T::zero(); p + 1]; p + 1];
        for (&x, &w) in gx.iter().zip(&gw) {
            let xi = mid + half_h * x;
            let d = space.ders_basis(s, xi, 2);
            let wt = w * half_h;
            for r in 0..=p {
                let wr = wt * d[2][r];
                for c in r..=p {
                    local[r][c] += wr * d[2][c];
                }
            }
        }
        for r in 0..=p {
            for c in r..=p {
                let (i, j) = (s - p + r, s - p + c);
                band[i][j + p - i] += local[r][c];
                if c != r {
                    band[j][i + p - j] += local[r][c];
                }
            }
        }
    }
    let rows = band
        .into_iter()
        .enumerate()
        .map(|(i, row)| {
            row.into_iter()
                .enumerate()
                .filter_map(|(o, v)| {
                    let j = (i + o).checked_sub(p)?;
                    (j < n && (i.abs_diff(j) <= p)).then_some((j, v))
                })
                .collect()
        })
        .collect();
    SparseMatrix::from_rows(n, n, rows, true)
}

/// Unconstrained `b_i = int f B_i` with `p + 4` Gauss points per
/// sub-interval; elements longer than `1/32` are split into equal parts.
pub fn assemble_load<T: Real>(space: &SplineSpace, f: &dyn Fn(T) -> T) -> Vector<T> {
    let p = space.degree();
    let n = space.n_basis();
    let (gx, gw) = gauss_legendre::<T>(p + 4);
    let h = space.h::<T>();
    let level0 = space.level() - 1;
    let nsub_log2 = LOAD_SUBINTERVAL_LOG2.saturating_sub(level0);
    let nsub = 1usize << nsub_log2;
    let sub_h = h.ldexp(-(nsub_log2 as i64));
    let half = sub_h.ldexp(-1);
    let mut b = vec![T::zero(); n];
    for e in 0..space.n_elem() {
        let s = e + p;
        let a = space.knot::<T>(s);
        for k in 0..nsub {
            let mid = a + sub_h * T::from_int(k as i64) + half;
            for (&x, &w) in gx.iter().zip(&gw) {
                let xi = mid + half * x;
                let d = space.ders_basis(s, xi, 0);
                let fw = f(xi) * w * half;
                for r in 0..=p {
                    b[s - p + r] += fw * d[0][r];
                }
            }
        }
    }
    Vector::new(b)
}

/// 0-based indices of the basis functions kept by the boundary conditions.
pub fn constrained_indices(space: &SplineSpace) -> Vec<usize> {
    let n = space.n_basis();
    if n < 4 {
        return Vec::new();
    }
    (2..n - 2).collect()
}

/// Removes the two leftmost and two rightmost basis functions.
pub fn apply_dirichlet<T: Real>(
    space: &SplineSpace,
    a: &SparseMatrix<T>,
    b: &[T],
) -> Result<(SparseMatrix<T>, Vector<T>)> {
    let n = space.n_basis();
    if n < 4 {
        return Err(Error::TooFewBasis);
    }
    if a.nrows() != n || b.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: a.nrows().min(b.len()) });
    }
    let keep = constrained_indices(space);
    let ac = a.submatrix(&keep, &keep);
    let bc = Vector::new(keep.iter().map(|&i| b[i]).collect());
    Ok((ac, bc))
}

/// Full coefficient vector with zeros in the four boundary slots.
pub fn extend_constrained<T: Real>(space: &SplineSpace, x: &[T]) -> Result<Vec<T>> {
    let m = space.n_constrained();
    if x.len() != m {
        return Err(Error::DimensionMismatch { expected: m, got: x.len() });
    }
    let mut full = vec![T::zero(); space.n_basis()];
    full[2..2 + m].copy_from_slice(x);
    Ok(full)
}
