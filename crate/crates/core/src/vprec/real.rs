use std::fmt::{Debug, Display};
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_traits::{FromPrimitive, One, ToPrimitive, Zero};

use super::quad::{Quad, QUAD_BITS};

/// Scalar type everything numeric in the crate is generic over.
///
/// `BASE_BITS` is the significand width of the storage format. The `*_at`
/// methods round the result to `bits <= BASE_BITS` significant bits. For
/// [`Quad`] that rounding is applied to the exact result; for `f64` the
/// operation is first rounded to 53 bits, so results can differ from a
/// correctly rounded value when `bits < 53`.
pub trait Real:
    Copy
    + Send
    + Sync
    + Debug
    + Display
    + PartialOrd
    + Zero
    + One
    + FromPrimitive
    + ToPrimitive
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + 'static
{
    const BASE_BITS: u32;

    fn round_to(self, bits: u32) -> Self;
    fn add_at(self, rhs: Self, bits: u32) -> Self;
    fn sub_at(self, rhs: Self, bits: u32) -> Self;
    fn mul_at(self, rhs: Self, bits: u32) -> Self;
    fn div_at(self, rhs: Self, bits: u32) -> Self;

    fn abs(self) -> Self;
    fn sqrt(self) -> Self;
    fn cos(self) -> Self;
    fn pi() -> Self;
    fn ldexp(self, k: i64) -> Self;

    /// Exact for every finite `f64` when `BASE_BITS >= 53`.
    fn from_f(x: f64) -> Self;
    fn to_f(self) -> f64;
    fn from_quad(q: Quad) -> Self;
    fn to_quad(self) -> Quad;

    fn from_int(n: i64) -> Self {
        Self::from_quad(Quad::from_i64(n))
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl Real for Quad {
    const BASE_BITS: u32 = QUAD_BITS;

    #[inline]
    fn round_to(self, bits: u32) -> Self {
        self.round_to_bits(bits)
    }
    #[inline]
    fn add_at(self, rhs: Self, bits: u32) -> Self {
        self.add_bits(rhs, bits)
    }
    #[inline]
    fn sub_at(self, rhs: Self, bits: u32) -> Self {
        self.sub_bits(rhs, bits)
    }
    #[inline]
    fn mul_at(self, rhs: Self, bits: u32) -> Self {
        self.mul_bits(rhs, bits)
    }
    #[inline]
    fn div_at(self, rhs: Self, bits: u32) -> Self {
        self.div_bits(rhs, bits)
    }
    fn abs(self) -> Self {
        Quad::abs(self)
    }
    fn sqrt(self) -> Self {
        Quad::sqrt(self)
    }
    fn cos(self) -> Self {
        Quad::cos(self)
    }
    fn pi() -> Self {
        Quad::PI
    }
    fn ldexp(self, k: i64) -> Self {
        Quad::ldexp(self, k)
    }
    fn from_f(x: f64) -> Self {
        Quad::from_f64(x)
    }
    fn to_f(self) -> f64 {
        Quad::to_f64(self)
    }
    fn from_quad(q: Quad) -> Self {
        q
    }
    fn to_quad(self) -> Quad {
        self
    }
    fn from_int(n: i64) -> Self {
        Quad::from_i64(n)
    }
}

/// Round-to-nearest-even of a normal `f64` to `bits` significand bits.
fn round_f64(x: f64, bits: u32) -> f64 {
    if bits >= 53 || x == 0.0 || !x.is_finite() {
        return x;
    }
    let u = x.to_bits();
    if (u >> 52) & 0x7ff == 0 {
        // subnormal: take the exact route
        return Quad::from_f64(x).round_to_bits(bits).to_f64();
    }
    let sh = 53 - bits;
    let mask = (1u64 << sh) - 1;
    let half = 1u64 << (sh - 1);
    let rem = u & mask;
    let mut t = u & !mask;
    if rem > half || (rem == half && (t >> sh) & 1 == 1) {
        t += 1 << sh;
    }
    f64::from_bits(t)
}

impl Real for f64 {
    const BASE_BITS: u32 = 53;

    #[inline]
    fn round_to(self, bits: u32) -> Self {
        round_f64(self, bits)
    }
    #[inline]
    fn add_at(self, rhs: Self, bits: u32) -> Self {
        round_f64(self + rhs, bits)
    }
    #[inline]
    fn sub_at(self, rhs: Self, bits: u32) -> Self {
        round_f64(self - rhs, bits)
    }
    #[inline]
    fn mul_at(self, rhs: Self, bits: u32) -> Self {
        round_f64(self * rhs, bits)
    }
    #[inline]
    fn div_at(self, rhs: Self, bits: u32) -> Self {
        round_f64(self / rhs, bits)
    }
    fn abs(self) -> Self {
        f64::abs(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn pi() -> Self {
        std::f64::consts::PI
    }
    fn ldexp(self, k: i64) -> Self {
        self * 2f64.powi(k as i32)
    }
    fn from_f(x: f64) -> Self {
        x
    }
    fn to_f(self) -> f64 {
        self
    }
    fn from_quad(q: Quad) -> Self {
        q.to_f64()
    }
    fn to_quad(self) -> Quad {
        Quad::from_f64(self)
    }
    fn from_int(n: i64) -> Self {
        n as f64
    }
}
