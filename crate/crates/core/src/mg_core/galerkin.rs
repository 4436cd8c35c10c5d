use crate::error::{Error, Result};
use crate::sparse_linalg::SparseMatrix;
use crate::vprec::{exact_dot_rounded, PrecisionCtx, Real, QUAD_BITS};

/// Entries of `a * b` computed exactly and rounded once to `bits`.
fn product_rounded<T: Real>(a: &SparseMatrix<T>, b: &SparseMatrix<T>, bits: u32, upper_only: bool) -> Vec<Vec<(usize, T)>> {
    let bt = b.transpose();
    (0..a.nrows())
        .map(|i| {
            let row: Vec<(usize, T)> = a.row(i).collect();
            let mut cols: Vec<usize> = row.iter().flat_map(|&(k, _)| b.row(k).map(|(c, _)| c)).collect();
            cols.sort_unstable();
            cols.dedup();
            cols.into_iter()
                .filter(|&c| !upper_only || c >= i)
                .map(|c| {
                    let col: Vec<(usize, T)> = bt.row(c).collect();
                    let mut pairs = Vec::new();
                    let (mut x, mut y) = (0, 0);
                    while x < row.len() && y < col.len() {
                        match row[x].0.cmp(&col[y].0) {
                            std::cmp::Ordering::Less => x += 1,
                            std::cmp::Ordering::Greater => y += 1,
                            std::cmp::Ordering::Equal => {
                                pairs.push((row[x].1.to_quad(), col[y].1.to_quad()));
                                x += 1;
                                y += 1;
                            }
                        }
                    }
                    (c, T::from_quad(exact_dot_rounded(pairs, bits)))
                })
                .collect()
        })
        .collect()
}

fn mirror_upper<T: Real>(n: usize, upper: Vec<Vec<(usize, T)>>) -> SparseMatrix<T> {
    let mut rows: Vec<Vec<(usize, T)>> = vec![Vec::new(); n];
    for (i, r) in upper.into_iter().enumerate() {
        for (j, v) in r {
            if j != i {
                rows[j].push((i, v));
            }
            rows[i].push((j, v));
        }
    }
    SparseMatrix::from_rows(n, n, rows, true)
}

/// Coarse operator `P^T (A P)` in `ctx`: every entry of `A P` is rounded
/// once, then every entry of `P^T (A P)` on and above the diagonal is
/// rounded once and mirrored, so the result is exactly symmetric.
pub fn galerkin_coarse<T: Real>(a: &SparseMatrix<T>, p: &SparseMatrix<T>, ctx: PrecisionCtx) -> Result<SparseMatrix<T>> {
    if a.ncols() != p.nrows() || a.nrows() != a.ncols() {
        return Err(Error::DimensionMismatch { expected: a.ncols(), got: p.nrows() });
    }
    let bits = ctx.bits();
    let ap = SparseMatrix::from_rows(a.nrows(), p.ncols(), product_rounded(a, p, bits, false), false);
    let pt = p.transpose();
    let upper = product_rounded(&pt, &ap, bits, true);
    Ok(mirror_upper(p.ncols(), upper).quantize(ctx))
}

/// `(P^T A P, P^T |A| P)` with entries correct to base precision.
pub fn galerkin_exact_abs<T: Real>(a: &SparseMatrix<T>, p: &SparseMatrix<T>) -> Result<(SparseMatrix<T>, SparseMatrix<T>)> {
    if a.ncols() != p.nrows() {
        return Err(Error::DimensionMismatch { expected: a.ncols(), got: p.nrows() });
    }
    let pt = p.transpose();
    let exact = |m: &SparseMatrix<T>| -> SparseMatrix<T> {
        // P^T M P as sums of triple products, evaluated exactly
        let n = p.ncols();
        let rows = (0..n)
            .map(|c| {
                let mut out: Vec<(usize, T)> = Vec::new();
                let mut cols: Vec<usize> = pt
                    .row(c)
                    .flat_map(|(i, _)| m.row(i).flat_map(|(k, _)| p.row(k).map(|(d, _)| d)))
                    .collect();
                cols.sort_unstable();
                cols.dedup();
                for d in cols {
                    let mut terms = Vec::new();
                    for (i, pic) in pt.row(c) {
                        for (k, mik) in m.row(i) {
                            let pkd = p.get(k, d);
                            if !pkd.is_zero() {
                                let (hi, lo) = pic.to_quad().two_prod(mik.to_quad());
                                terms.push((hi, pkd.to_quad()));
                                terms.push((lo, pkd.to_quad()));
                            }
                        }
                    }
                    out.push((d, T::from_quad(exact_dot_rounded(terms, QUAD_BITS))));
                }
                out
            })
            .collect();
        SparseMatrix::from_rows(n, n, rows, true)
    };
    Ok((exact(a), exact(&a.abs())))
}
