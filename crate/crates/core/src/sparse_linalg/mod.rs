//! Sparse and dense linear algebra with explicit per-operation rounding.

mod band;
mod dense;
mod eig;

use std::ops::{Deref, DerefMut};

use crate::error::{Error, Result};
use crate::vprec::{PrecisionCtx, Real};

pub use band::{inertia_below, BandCholesky, BandLu};
pub use dense::DenseMatrix;
pub use eig::{
    extreme_eigs, lambda_max_power, lambda_min_bisect, norm_and_cond, rho_v_energy, spd_inverse_norm,
    symmetric_tridiag_eigs, ConditionInfo, ExtremeEigs, EIG_MAX_ITERS, EIG_REL_TOL,
};

/// Dense vector tagged with the precision its entries were last rounded to.
#[derive(Clone, Debug, PartialEq)]
pub struct Vector<T> {
    data: Vec<T>,
    storage: PrecisionCtx,
}

impl<T: Real> Vector<T> {
    pub fn new(data: Vec<T>) -> Self {
        Vector { data, storage: PrecisionCtx::BASE }
    }

    pub fn zeros(n: usize) -> Self {
        Vector::new(vec![T::zero(); n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.data[i] = T::one();
        v
    }

    pub fn storage_ctx(&self) -> PrecisionCtx {
        self.storage
    }

    pub fn into_inner(self) -> Vec<T> {
        self.data
    }

    pub fn quantize(&self, ctx: PrecisionCtx) -> Self {
        Vector { data: self.data.iter().map(|v| v.round_to(ctx.bits())).collect(), storage: ctx }
    }

    pub fn dot(&self, other: &[T]) -> T {
        self.data.iter().zip(other).fold(T::zero(), |acc, (&a, &b)| acc + a * b)
    }

    pub fn norm2(&self) -> T {
        self.dot(&self.data).sqrt()
    }

    pub fn norm_inf(&self) -> T {
        self.data.iter().fold(T::zero(), |m, v| m.max_of(v.abs()))
    }

    /// `self - other` at base precision.
    pub fn sub(&self, other: &[T]) -> Self {
        Vector::new(self.data.iter().zip(other).map(|(&a, &b)| a - b).collect())
    }

    pub fn add(&self, other: &[T]) -> Self {
        Vector::new(self.data.iter().zip(other).map(|(&a, &b)| a + b).collect())
    }

    pub fn scale(&self, s: T) -> Self {
        Vector::new(self.data.iter().map(|&a| a * s).collect())
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.data.iter().map(|v| v.to_f()).collect()
    }
}

impl<T> Deref for Vector<T> {
    type Target = [T];
    fn deref(&self) -> &[T] {
        &self.data
    }
}

impl<T> DerefMut for Vector<T> {
    fn deref_mut(&mut self) -> &mut [T] {
        &mut self.data
    }
}

impl<T: Real> From<Vec<T>> for Vector<T> {
    fn from(v: Vec<T>) -> Self {
        Vector::new(v)
    }
}

/// Compressed-row sparse matrix with a storage precision tag.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix<T> {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    vals: Vec<T>,
    storage: PrecisionCtx,
    symmetric: bool,
}

impl<T: Real> SparseMatrix<T> {
    /// Builds from per-row `(col, value)` lists; columns are sorted and
    /// duplicates summed in the order given.
    pub fn from_rows(nrows: usize, ncols: usize, rows: Vec<Vec<(usize, T)>>, symmetric: bool) -> Self {
        assert_eq!(rows.len(), nrows);
        let mut row_ptr = Vec::with_capacity(nrows + 1);
        let mut col_idx = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for mut row in rows {
            row.sort_by_key(|e| e.0);
            let mut last: Option<usize> = None;
            for (c, v) in row {
                assert!(c < ncols, "column {c} out of range");
                if last == Some(c) {
                    let k = vals.len() - 1;
                    vals[k] += v;
                } else {
                    col_idx.push(c);
                    vals.push(v);
                    last = Some(c);
                }
            }
            row_ptr.push(col_idx.len());
        }
        SparseMatrix { nrows, ncols, row_ptr, col_idx, vals, storage: PrecisionCtx::BASE, symmetric }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diagonal(&vec![T::one(); n])
    }

    pub fn from_diagonal(d: &[T]) -> Self {
        let rows = d.iter().enumerate().map(|(i, &v)| vec![(i, v)]).collect();
        Self::from_rows(d.len(), d.len(), rows, true)
    }

    pub fn from_dense(a: &DenseMatrix<T>, symmetric: bool) -> Self {
        let rows = (0..a.nrows())
            .map(|i| (0..a.ncols()).filter(|&j| !a[(i, j)].is_zero()).map(|j| (j, a[(i, j)])).collect())
            .collect();
        Self::from_rows(a.nrows(), a.ncols(), rows, symmetric)
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn is_symmetric_flagged(&self) -> bool {
        self.symmetric
    }

    pub fn storage_ctx(&self) -> PrecisionCtx {
        self.storage
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, T)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[r.clone()].iter().copied().zip(self.vals[r].iter().copied())
    }

    pub fn row_nnz(&self, i: usize) -> usize {
        self.row_ptr[i + 1] - self.row_ptr[i]
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.col_idx[r.clone()].binary_search(&j) {
            Ok(k) => self.vals[r.start + k],
            Err(_) => T::zero(),
        }
    }

    pub fn values(&self) -> &[T] {
        &self.vals
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.nrows.min(self.ncols)).map(|i| self.get(i, i)).collect()
    }

    /// `(lower, upper)` bandwidth.
    pub fn bandwidth(&self) -> (usize, usize) {
        let (mut lo, mut up) = (0, 0);
        for i in 0..self.nrows {
            for (j, _) in self.row(i) {
                if j < i {
                    lo = lo.max(i - j);
                } else {
                    up = up.max(j - i);
                }
            }
        }
        (lo, up)
    }

    /// Entry-wise equality with the transpose.
    pub fn is_symmetric(&self) -> bool {
        if self.nrows != self.ncols {
            return false;
        }
        (0..self.nrows).all(|i| self.row(i).all(|(j, v)| self.get(j, i) == v))
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        SparseMatrix { vals: self.vals.iter().map(|&v| f(v)).collect(), ..self.clone() }
    }

    pub fn quantize(&self, ctx: PrecisionCtx) -> Self {
        let bits = ctx.bits();
        SparseMatrix { storage: ctx, ..self.map(|v| v.round_to(bits)) }
    }

    /// Entry-wise absolute value `|A|`.
    pub fn abs(&self) -> Self {
        self.map(|v| v.abs())
    }

    pub fn transpose(&self) -> Self {
        let mut rows: Vec<Vec<(usize, T)>> = vec![Vec::new(); self.ncols];
        for i in 0..self.nrows {
            for (j, v) in self.row(i) {
                rows[j].push((i, v));
            }
        }
        SparseMatrix { storage: self.storage, ..Self::from_rows(self.ncols, self.nrows, rows, self.symmetric) }
    }

    /// Keeps the listed rows and columns, in the given order.
    pub fn submatrix(&self, keep_rows: &[usize], keep_cols: &[usize]) -> Self {
        let mut colmap = vec![usize::MAX; self.ncols];
        for (new, &old) in keep_cols.iter().enumerate() {
            colmap[old] = new;
        }
        let rows = keep_rows
            .iter()
            .map(|&i| self.row(i).filter(|(j, _)| colmap[*j] != usize::MAX).map(|(j, v)| (colmap[j], v)).collect())
            .collect();
        SparseMatrix {
            storage: self.storage,
            ..Self::from_rows(keep_rows.len(), keep_cols.len(), rows, self.symmetric && keep_rows == keep_cols)
        }
    }

    fn check_dim(&self, x: &[T]) -> Result<()> {
        if x.len() != self.ncols {
            return Err(Error::DimensionMismatch { expected: self.ncols, got: x.len() });
        }
        Ok(())
    }

    /// `A x` at base precision.
    pub fn matvec(&self, x: &[T]) -> Result<Vector<T>> {
        self.check_dim(x)?;
        let y = (0..self.nrows).map(|i| self.row(i).fold(T::zero(), |acc, (j, a)| acc + a * x[j])).collect();
        Ok(Vector::new(y))
    }

    /// `A x` with every product and every partial sum rounded to `ctx`,
    /// accumulated left to right along each row.
    pub fn matvec_rounded(&self, x: &[T], ctx: PrecisionCtx) -> Result<Vector<T>> {
        self.check_dim(x)?;
        Ok(Vector { data: self.matvec_at_bits(x, ctx.bits()), storage: ctx })
    }

    pub(crate) fn matvec_at_bits(&self, x: &[T], bits: u32) -> Vec<T> {
        (0..self.nrows)
            .map(|i| {
                let mut it = self.row(i);
                match it.next() {
                    None => T::zero(),
                    Some((j, a)) => {
                        let first = a.mul_at(x[j], bits);
                        it.fold(first, |acc, (j, a)| acc.add_at(a.mul_at(x[j], bits), bits))
                    }
                }
            })
            .collect()
    }

    /// `A^T x` at base precision.
    pub fn matvec_transpose(&self, x: &[T]) -> Result<Vector<T>> {
        if x.len() != self.nrows {
            return Err(Error::DimensionMismatch { expected: self.nrows, got: x.len() });
        }
        let mut y = vec![T::zero(); self.ncols];
        for (i, &xi) in x.iter().enumerate() {
            for (j, a) in self.row(i) {
                y[j] += a * xi;
            }
        }
        Ok(Vector::new(y))
    }

    /// Sparse product `self * other` at base precision.
    pub fn matmul(&self, other: &SparseMatrix<T>) -> Result<SparseMatrix<T>> {
        if self.ncols != other.nrows {
            return Err(Error::DimensionMismatch { expected: self.ncols, got: other.nrows });
        }
        let rows = (0..self.nrows)
            .map(|i| {
                let mut acc: Vec<(usize, T)> = Vec::new();
                for (k, a) in self.row(i) {
                    for (j, b) in other.row(k) {
                        acc.push((j, a * b));
                    }
                }
                acc
            })
            .collect();
        Ok(SparseMatrix::from_rows(self.nrows, other.ncols, rows, false))
    }

    pub fn to_dense(&self) -> DenseMatrix<T> {
        let mut d = DenseMatrix::zeros(self.nrows, self.ncols);
        for i in 0..self.nrows {
            for (j, v) in self.row(i) {
                d[(i, j)] = v;
            }
        }
        d
    }

    pub fn frobenius(&self) -> T {
        self.vals.iter().fold(T::zero(), |acc, &v| acc + v * v).sqrt()
    }

    /// Max absolute row sum.
    pub fn norm_inf(&self) -> T {
        (0..self.nrows).fold(T::zero(), |m, i| m.max_of(self.row(i).fold(T::zero(), |s, (_, v)| s + v.abs())))
    }

    /// `self - other` at base precision over the union pattern.
    pub fn sub(&self, other: &SparseMatrix<T>) -> Result<SparseMatrix<T>> {
        if self.nrows != other.nrows || self.ncols != other.ncols {
            return Err(Error::DimensionMismatch { expected: self.nrows, got: other.nrows });
        }
        let rows = (0..self.nrows)
            .map(|i| self.row(i).chain(other.row(i).map(|(j, v)| (j, -v))).collect())
            .collect();
        Ok(SparseMatrix::from_rows(self.nrows, self.ncols, rows, self.symmetric && other.symmetric))
    }

    pub fn to_f64(&self) -> SparseMatrix<f64> {
        SparseMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            row_ptr: self.row_ptr.clone(),
            col_idx: self.col_idx.clone(),
            vals: self.vals.iter().map(|v| v.to_f()).collect(),
            storage: PrecisionCtx::FP64,
            symmetric: self.symmetric,
        }
    }
}

/// `sqrt(x^T A x)` at base precision.
pub fn energy_norm<T: Real>(a: &SparseMatrix<T>, x: &[T]) -> Result<T> {
    let ax = a.matvec(x)?;
    let q = ax.dot(x);
    if q < T::zero() {
        return Err(Error::NegativeQuadraticForm(q.to_f()));
    }
    Ok(q.sqrt())
}

/// `x^T A y` at base precision.
pub fn bilinear<T: Real>(a: &SparseMatrix<T>, x: &[T], y: &[T]) -> Result<T> {
    Ok(a.matvec(y)?.dot(x))
}

/// Solves `A x = b` by banded LU with partial pivoting at base precision and
/// asserts a normwise backward error no larger than `1e-25` (for the 113-bit
/// base format).
pub fn direct_solve_ref<T: Real>(a: &SparseMatrix<T>, b: &[T]) -> Result<Vector<T>> {
    let lu = BandLu::factor(a)?;
    let x = lu.solve(b)?;
    let r = a.matvec(&x)?.sub(b);
    let denom = a.norm_inf() * x.norm_inf() + b.iter().fold(T::zero(), |m, v| m.max_of(v.abs()));
    if !denom.is_zero() {
        let eta = (r.norm_inf() / denom).to_f();
        assert!(eta <= backward_tol::<T>(), "direct solve backward error {eta:e} above tolerance");
    }
    Ok(x)
}

pub(crate) fn backward_tol<T: Real>() -> f64 {
    if T::BASE_BITS >= 113 {
        1e-25
    } else {
        (-(T::BASE_BITS as f64) + 30.0).exp2()
    }
}
