//! Element-wise vector kernels with every operation rounded to `bits`.

use crate::vprec::Real;

pub(crate) fn round_all<T: Real>(x: &[T], bits: u32) -> Vec<T> {
    x.iter().map(|v| v.round_to(bits)).collect()
}

/// `a - b`
pub(crate) fn sub_at<T: Real>(a: &[T], b: &[T], bits: u32) -> Vec<T> {
    a.iter().zip(b).map(|(&x, &y)| x.sub_at(y, bits)).collect()
}

pub(crate) fn add_at<T: Real>(a: &[T], b: &[T], bits: u32) -> Vec<T> {
    a.iter().zip(b).map(|(&x, &y)| x.add_at(y, bits)).collect()
}

pub(crate) fn scale_at<T: Real>(s: T, x: &[T], bits: u32) -> Vec<T> {
    x.iter().map(|&v| s.mul_at(v, bits)).collect()
}

/// Entry-wise product `d .* x`.
pub(crate) fn hadamard_at<T: Real>(d: &[T], x: &[T], bits: u32) -> Vec<T> {
    d.iter().zip(x).map(|(&a, &b)| a.mul_at(b, bits)).collect()
}
