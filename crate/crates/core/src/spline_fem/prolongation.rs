use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::sparse_linalg::SparseMatrix;
use crate::vprec::{ratio_to_quad, Real};

use super::{constrained_indices, SplineSpace};

type Row = Vec<(usize, BigRational)>;

fn combine(a: &BigRational, ra: &Row, b: &BigRational, rb: &Row) -> Row {
    let mut out: Row = Vec::with_capacity(ra.len() + 1);
    let (mut i, mut j) = (0, 0);
    while i < ra.len() || j < rb.len() {
        let ci = ra.get(i).map(|e| e.0).unwrap_or(usize::MAX);
        let cj = rb.get(j).map(|e| e.0).unwrap_or(usize::MAX);
        let (c, v) = if ci < cj {
            i += 1;
            (ci, a * &ra[i - 1].1)
        } else if cj < ci {
            j += 1;
            (cj, b * &rb[j - 1].1)
        } else {
            i += 1;
            j += 1;
            (ci, a * &ra[i - 1].1 + b * &rb[j - 1].1)
        };
        if !v.is_zero() {
            out.push((c, v));
        }
    }
    out
}

/// Unconstrained prolongation as exact rationals, one row per fine basis
/// function, built by inserting every element midpoint of `coarse` one knot
/// at a time.
pub fn prolongation_rational(coarse: &SplineSpace, fine: &SplineSpace) -> Result<Vec<Row>> {
    if coarse.degree() != fine.degree() || fine.level() != coarse.level() + 1 {
        return Err(Error::NotNested);
    }
    let p = coarse.degree();
    let nc = coarse.n_elem() as i64;
    let mut knots: Vec<BigRational> = (0..coarse.n_basis() + p + 1)
        .map(|i| BigRational::new(BigInt::from(coarse.knot_numerator(i) as i64), BigInt::from(nc)))
        .collect();
    let mut rows: Vec<Row> = (0..coarse.n_basis()).map(|i| vec![(i, BigRational::one())]).collect();
    for e in 0..coarse.n_elem() {
        let t = BigRational::new(BigInt::from(2 * e as i64 + 1), BigInt::from(2 * nc));
        // span l with knots[l] <= t < knots[l+1]
        let l = (p..knots.len() - p - 1).rev().find(|&l| knots[l] <= t).ok_or(Error::NotNested)?;
        let n = rows.len();
        let mut next: Vec<Row> = Vec::with_capacity(n + 1);
        for i in 0..=n {
            if i + p <= l {
                next.push(rows[i].clone());
            } else if i <= l {
                let alpha = (&t - &knots[i]) / (&knots[i + p] - &knots[i]);
                let beta = BigRational::one() - &alpha;
                next.push(combine(&alpha, &rows[i], &beta, &rows[i - 1]));
            } else {
                next.push(rows[i - 1].clone());
            }
        }
        rows = next;
        knots.insert(l + 1, t);
    }
    let nf = fine.n_elem() as i64;
    let expected: Vec<BigRational> = (0..fine.n_basis() + p + 1)
        .map(|i| BigRational::new(BigInt::from(fine.knot_numerator(i) as i64), BigInt::from(nf)))
        .collect();
    if knots != expected || rows.len() != fine.n_basis() {
        return Err(Error::NotNested);
    }
    Ok(rows)
}

fn to_real<T: Real>(r: &BigRational) -> T {
    T::from_quad(ratio_to_quad(r.numer(), r.denom(), 113).expect("nonzero denominator"))
}

/// Unconstrained prolongation `P` with `B^coarse = P^T`-weighted fine functions.
pub fn build_prolongation_full<T: Real>(coarse: &SplineSpace, fine: &SplineSpace) -> Result<SparseMatrix<T>> {
    let rows = prolongation_rational(coarse, fine)?;
    let n = rows.len();
    let rows = rows.iter().map(|r| r.iter().map(|(c, v)| (*c, to_real::<T>(v))).collect()).collect();
    Ok(SparseMatrix::from_rows(n, coarse.n_basis(), rows, false))
}

/// Prolongation between the constrained spaces.
pub fn build_prolongation<T: Real>(coarse: &SplineSpace, fine: &SplineSpace) -> Result<SparseMatrix<T>> {
    let full = build_prolongation_full::<T>(coarse, fine)?;
    Ok(full.submatrix(&constrained_indices(fine), &constrained_indices(coarse)))
}
