use crate::error::{Error, Result};
use crate::sparse_linalg::{rho_v_energy, DenseMatrix, Vector};
use crate::vprec::Real;

use super::Hierarchy;

/// Largest level dimension for which the dense propagation matrix is formed.
pub const PROPAGATION_DIM_CAP: usize = 2000;

/// Error propagation `V = I - B A` of one V-cycle on level `j`, built column
/// by column from the canonical errors `e_c`: the cycle is applied to the
/// residual `A e_c` and column `c` is `e_c` minus the result.
pub fn build_error_propagation<T: Real>(hier: &Hierarchy<T>, j: usize) -> Result<DenseMatrix<T>> {
    let lev = hier.level(j)?;
    let n = lev.dim();
    if n > PROPAGATION_DIM_CAP {
        return Err(Error::DimensionCap { n, cap: PROPAGATION_DIM_CAP });
    }
    let mut v = DenseMatrix::zeros(n, n);
    for c in 0..n {
        let e = Vector::<T>::unit(n, c);
        let r = lev.a.matvec(&e)?;
        let y = hier.vcycle(j, &r)?;
        v.set_column(c, &e.sub(&y));
    }
    Ok(v)
}

/// Energy-norm convergence factor `||V||_A` of the V-cycle on level `j`.
pub fn rho_v<T: Real>(hier: &Hierarchy<T>, j: usize) -> Result<f64> {
    let v = build_error_propagation(hier, j)?;
    Ok(rho_v_energy(&v, &hier.level(j)?.a)?.to_f())
}

/// Measures `rho_v` on level `probe` for every candidate fraction and
/// returns the minimizer (the first one on ties) with the whole curve.
pub fn tune_spectrum_fraction<T: Real>(
    hier: &Hierarchy<T>,
    probe: usize,
    candidates: &[f64],
) -> Result<(f64, Vec<(f64, f64)>)> {
    if candidates.is_empty() {
        return Err(Error::Invalid("no candidate spectrum fractions".into()));
    }
    if candidates.iter().any(|&f| !(f > 0.0 && f < 1.0)) {
        return Err(Error::Invalid("spectrum fractions must lie in (0, 1)".into()));
    }
    if candidates.len() == 1 {
        return Ok((candidates[0], Vec::new()));
    }
    let mut h = hier.truncated(probe)?;
    let mut curve = Vec::with_capacity(candidates.len());
    let mut best = (candidates[0], f64::INFINITY);
    for &f in candidates {
        h.set_spectrum_fraction(f)?;
        let r = rho_v(&h, probe)?;
        curve.push((f, r));
        if r < best.1 {
            best = (f, r);
        }
    }
    Ok((best.0, curve))
}
