use crate::error::{Error, Result};
use crate::vprec::Real;

use super::{SparseMatrix, Vector};

/// Banded LU factorization with partial pivoting, `P A = L U`.
///
/// `U` has upper bandwidth `kl + ku`; the multipliers of each elimination
/// step are stored separately.
#[derive(Clone, Debug)]
pub struct BandLu<T> {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    u: Vec<T>,
    mult: Vec<T>,
    piv: Vec<usize>,
}

impl<T: Real> BandLu<T> {
    pub fn factor(a: &SparseMatrix<T>) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: a.ncols() });
        }
        let (kl, ku) = a.bandwidth();
        let width = 2 * kl + ku + 1;
        let mut lu = BandLu { n, kl, ku, width, u: vec![T::zero(); n * width], mult: vec![T::zero(); n * kl], piv: vec![0; n] };
        for i in 0..n {
            for (j, v) in a.row(i) {
                *lu.at_mut(i, j) = v;
            }
        }
        for k in 0..n {
            let last_row = (k + kl).min(n - 1);
            let last_col = (k + kl + ku).min(n - 1);
            let mut p = k;
            let mut best = lu.at(k, k).abs();
            for i in k + 1..=last_row {
                let v = lu.at(i, k).abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best.is_zero() {
                return Err(Error::Singular);
            }
            lu.piv[k] = p;
            if p != k {
                for c in k..=last_col {
                    let t = lu.at(k, c);
                    *lu.at_mut(k, c) = lu.at(p, c);
                    *lu.at_mut(p, c) = t;
                }
            }
            let pivot = lu.at(k, k);
            for i in k + 1..=last_row {
                let l = lu.at(i, k) / pivot;
                lu.mult[k * kl + (i - k - 1)] = l;
                *lu.at_mut(i, k) = T::zero();
                if l.is_zero() {
                    continue;
                }
                for c in k + 1..=last_col {
                    let ukc = lu.at(k, c);
                    *lu.at_mut(i, c) -= l * ukc;
                }
            }
        }
        Ok(lu)
    }

    #[inline]
    fn idx(&self, i: usize, c: usize) -> usize {
        debug_assert!(c + self.kl >= i && c <= i + self.kl + self.ku);
        i * self.width + (c + self.kl - i)
    }

    #[inline]
    fn at(&self, i: usize, c: usize) -> T {
        self.u[self.idx(i, c)]
    }

    #[inline]
    fn at_mut(&mut self, i: usize, c: usize) -> &mut T {
        let k = self.idx(i, c);
        &mut self.u[k]
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn solve(&self, b: &[T]) -> Result<Vector<T>> {
        let n = self.n;
        if b.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: b.len() });
        }
        let mut x = b.to_vec();
        for k in 0..n {
            let p = self.piv[k];
            if p != k {
                x.swap(k, p);
            }
            let xk = x[k];
            for i in k + 1..=(k + self.kl).min(n.saturating_sub(1)) {
                x[i] -= self.mult[k * self.kl + (i - k - 1)] * xk;
            }
        }
        for k in (0..n).rev() {
            let mut s = x[k];
            for c in k + 1..=(k + self.kl + self.ku).min(n - 1) {
                s -= self.at(k, c) * x[c];
            }
            x[k] = s / self.at(k, k);
        }
        Ok(Vector::new(x))
    }
}

/// Banded Cholesky factor `A = L L^T` of an SPD matrix.
#[derive(Clone, Debug)]
pub struct BandCholesky<T> {
    n: usize,
    b: usize,
    l: Vec<T>,
}

impl<T: Real> BandCholesky<T> {
    pub fn factor(a: &SparseMatrix<T>) -> Result<Self> {
        let n = a.nrows();
        let (lo, up) = a.bandwidth();
        let b = lo.max(up);
        let mut ch = BandCholesky { n, b, l: vec![T::zero(); n * (b + 1)] };
        for i in 0..n {
            for (j, v) in a.row(i) {
                if j <= i {
                    *ch.at_mut(i, j) = v;
                }
            }
        }
        for i in 0..n {
            let j0 = i.saturating_sub(b);
            for j in j0..=i {
                let mut s = ch.at(i, j);
                let k0 = j0.max(j.saturating_sub(b));
                for k in k0..j {
                    s -= ch.at(i, k) * ch.at(j, k);
                }
                if i == j {
                    if s <= T::zero() {
                        return Err(Error::NotSpd);
                    }
                    *ch.at_mut(i, i) = s.sqrt();
                } else {
                    *ch.at_mut(i, j) = s / ch.at(j, j);
                }
            }
        }
        Ok(ch)
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> T {
        self.l[i * (self.b + 1) + (j + self.b - i)]
    }

    #[inline]
    fn at_mut(&mut self, i: usize, j: usize) -> &mut T {
        &mut self.l[i * (self.b + 1) + (j + self.b - i)]
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// `L x`.
    pub fn mul_l(&self, x: &[T]) -> Vec<T> {
        (0..self.n).map(|i| (i.saturating_sub(self.b)..=i).fold(T::zero(), |s, k| s + self.at(i, k) * x[k])).collect()
    }

    /// `L^T x`.
    pub fn mul_lt(&self, x: &[T]) -> Vec<T> {
        let mut y = vec![T::zero(); self.n];
        for (i, &xi) in x.iter().enumerate() {
            for k in i.saturating_sub(self.b)..=i {
                y[k] += self.at(i, k) * xi;
            }
        }
        y
    }

    /// Solves `L y = b`.
    pub fn solve_l(&self, b: &[T]) -> Vec<T> {
        let mut y = b.to_vec();
        for i in 0..self.n {
            let mut s = y[i];
            for k in i.saturating_sub(self.b)..i {
                s -= self.at(i, k) * y[k];
            }
            y[i] = s / self.at(i, i);
        }
        y
    }

    /// Solves `L^T x = y`.
    pub fn solve_lt(&self, y: &[T]) -> Vec<T> {
        let mut x = y.to_vec();
        for i in (0..self.n).rev() {
            let xi = x[i] / self.at(i, i);
            x[i] = xi;
            for k in i.saturating_sub(self.b)..i {
                x[k] -= self.at(i, k) * xi;
            }
        }
        x
    }

    pub fn solve(&self, b: &[T]) -> Vec<T> {
        self.solve_lt(&self.solve_l(b))
    }
}

/// Number of eigenvalues of the symmetric matrix `A` strictly below `sigma`,
/// from the signs of the pivots of `A - sigma I = L D L^T`.
pub fn inertia_below<T: Real>(a: &SparseMatrix<T>, sigma: T) -> usize {
    let n = a.nrows();
    let (lo, up) = a.bandwidth();
    let b = lo.max(up);
    let w = b + 1;
    // Row i holds L(i, i-b..i) with D(i) on the diagonal slot.
    let mut l = vec![T::zero(); n * w];
    let at = |i: usize, j: usize| i * w + (j + b - i);
    for i in 0..n {
        for (j, v) in a.row(i) {
            if j <= i {
                l[at(i, j)] = v;
            }
        }
        l[at(i, i)] -= sigma;
    }
    let tiny = a.norm_inf().max_of(sigma.abs()).ldexp(-(T::BASE_BITS as i64) - 10);
    let mut neg = 0;
    for i in 0..n {
        let j0 = i.saturating_sub(b);
        for j in j0..i {
            let k0 = j0.max(j.saturating_sub(b));
            let mut s = l[at(i, j)];
            for k in k0..j {
                s -= l[at(i, k)] * l[at(j, k)] * l[at(k, k)];
            }
            l[at(i, j)] = s / l[at(j, j)];
        }
        let mut d = l[at(i, i)];
        for k in j0..i {
            let lik = l[at(i, k)];
            d -= lik * lik * l[at(k, k)];
        }
        if d.is_zero() {
            d = tiny;
        }
        if d < T::zero() {
            neg += 1;
        }
        l[at(i, i)] = d;
    }
    neg
}
