//! Variable-precision arithmetic on top of a 113-bit software float.
//!
//! A [`PrecisionCtx`] names a significand width. Values are always stored in
//! the base format; rounding to a context is an explicit operation, either on
//! a single result ([`round_to`], [`arith`]) or through the `*_at` methods of
//! [`Real`].

mod quad;
mod real;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use quad::{Quad, QUAD_BITS};
pub use real::Real;

/// A named working precision: `bits` significand bits, unit roundoff `2^-bits`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PrecisionCtx {
    bits: u32,
}

impl PrecisionCtx {
    pub const MIN_BITS: u32 = 2;
    pub const FP16: PrecisionCtx = PrecisionCtx { bits: 11 };
    pub const FP32: PrecisionCtx = PrecisionCtx { bits: 24 };
    pub const FP64: PrecisionCtx = PrecisionCtx { bits: 53 };
    pub const FP128: PrecisionCtx = PrecisionCtx { bits: 112 };
    pub const BASE: PrecisionCtx = PrecisionCtx { bits: QUAD_BITS };

    pub fn new(bits: u32) -> Result<Self> {
        if (Self::MIN_BITS..=QUAD_BITS).contains(&bits) {
            Ok(PrecisionCtx { bits })
        } else {
            Err(Error::InvalidPrecision(bits))
        }
    }

    /// Like [`PrecisionCtx::new`] but clamps into the valid range.
    pub fn clamped(bits: u32) -> Self {
        PrecisionCtx { bits: bits.clamp(Self::MIN_BITS, QUAD_BITS) }
    }

    pub fn from_digits(digits: u32) -> Self {
        PrecisionCtx { bits: digits_to_bits(digits) }
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn unit_roundoff(self) -> f64 {
        (-(self.bits as f64)).exp2()
    }

    pub fn is_base(self) -> bool {
        self.bits == QUAD_BITS
    }

    pub fn label(self) -> String {
        match self.bits {
            11 => "fp16".into(),
            24 => "fp32".into(),
            53 => "fp64".into(),
            112 => "fp128".into(),
            QUAD_BITS => "base".into(),
            b => format!("b{b}"),
        }
    }

    /// The narrower (lower precision) of two contexts.
    pub fn min(self, other: Self) -> Self {
        if self.bits <= other.bits {
            self
        } else {
            other
        }
    }
}

impl Default for PrecisionCtx {
    fn default() -> Self {
        Self::BASE
    }
}

impl fmt::Debug for PrecisionCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PrecisionCtx({} bits)", self.bits)
    }
}

impl fmt::Display for PrecisionCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// `ceil(d * log2(10))` clamped to the supported range.
pub fn digits_to_bits(d: u32) -> u32 {
    let d = d.max(1) as f64;
    let b = (d * std::f64::consts::LOG2_10).ceil() as u32;
    b.clamp(PrecisionCtx::MIN_BITS, QUAD_BITS)
}

/// A base-format value tagged with the context it was last rounded to.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VNum {
    value: Quad,
    ctx: PrecisionCtx,
}

impl VNum {
    /// Wraps a base-precision value without rounding.
    pub fn base(value: Quad) -> Self {
        VNum { value, ctx: PrecisionCtx::BASE }
    }

    pub fn value(self) -> Quad {
        self.value
    }

    pub fn ctx(self) -> PrecisionCtx {
        self.ctx
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Nearest value (ties to even) with `ctx.bits()` significand bits.
pub fn round_to(x: Quad, ctx: PrecisionCtx) -> VNum {
    VNum { value: x.round_to_bits(ctx.bits), ctx }
}

/// Like [`round_to`] for an `f64` input; NaN and infinities are rejected.
pub fn round_f64_to(x: f64, ctx: PrecisionCtx) -> Result<VNum> {
    Ok(round_to(Quad::try_from_f64(x)?, ctx))
}

/// `a op b` rounded once, correctly, to `ctx`.
pub fn arith(op: ArithOp, a: VNum, b: VNum, ctx: PrecisionCtx) -> Result<VNum> {
    let bits = ctx.bits;
    let value = match op {
        ArithOp::Add => a.value.add_bits(b.value, bits),
        ArithOp::Sub => a.value.sub_bits(b.value, bits),
        ArithOp::Mul => a.value.mul_bits(b.value, bits),
        ArithOp::Div => a.value.checked_div_bits(b.value, bits)?,
    };
    Ok(VNum { value, ctx })
}

/// `sum_i a_i b_i` evaluated exactly and rounded once to `bits`.
pub fn exact_dot_rounded(pairs: impl IntoIterator<Item = (Quad, Quad)>, bits: u32) -> Quad {
    let mut terms: Vec<(BigInt, i64)> = Vec::new();
    for (a, b) in pairs {
        if a.is_zero() || b.is_zero() {
            continue;
        }
        let (na, ma, ea) = a.to_parts();
        let (nb, mb, eb) = b.to_parts();
        let mut m = BigInt::from(ma) * BigInt::from(mb);
        if na != nb {
            m = -m;
        }
        terms.push((m, ea + eb));
    }
    exact_sum_rounded(terms, bits)
}

/// Rounds `sum_i m_i 2^{e_i}` once to `bits`.
pub fn exact_sum_rounded(terms: Vec<(BigInt, i64)>, bits: u32) -> Quad {
    let Some(emin) = terms.iter().map(|t| t.1).min() else {
        return Quad::ZERO;
    };
    let mut acc = BigInt::zero();
    for (m, e) in terms {
        acc += m << ((e - emin) as usize);
    }
    bigint_to_quad(&acc, emin, bits)
}

/// Correctly rounded `m * 2^e` for an arbitrary integer `m`.
pub fn bigint_to_quad(m: &BigInt, e: i64, bits: u32) -> Quad {
    if m.is_zero() {
        return Quad::ZERO;
    }
    let neg = m.is_negative();
    let mag = m.abs();
    let len = mag.bits() as i64;
    let keep = 120i64;
    if len <= keep {
        let v: u128 = u128::try_from(&mag).expect("fits");
        return Quad::from_parts(neg, v, e, bits);
    }
    let sh = (len - keep) as usize;
    let top: BigInt = &mag >> sh;
    let sticky = (&top << sh) != mag;
    let mut v: u128 = u128::try_from(&top).expect("fits");
    // Fold the sticky bit into the lowest guard position; 120 bits leave at
    // least 7 guard bits below any width up to 113.
    v = (v << 1) | sticky as u128;
    Quad::from_parts(neg, v, e + sh as i64 - 1, bits)
}

/// Correctly rounded `num / den`.
pub fn ratio_to_quad(num: &BigInt, den: &BigInt, bits: u32) -> Result<Quad> {
    if den.is_zero() {
        return Err(Error::SingularOperand);
    }
    if num.is_zero() {
        return Ok(Quad::ZERO);
    }
    let neg = num.is_negative() != den.is_negative();
    let (n, d) = (num.abs(), den.abs());
    // Scale so the quotient has about 125 bits.
    let shift = 125 + d.bits() as i64 - n.bits() as i64;
    let (q, r) = if shift >= 0 {
        let s = &n << (shift as usize);
        (&s / &d, &s % &d)
    } else {
        let ds = &d << ((-shift) as usize);
        (&n / &ds, &n % &ds)
    };
    let mut q = if neg { -q } else { q };
    let sticky = !r.is_zero();
    // Mark inexactness one position below the quotient's lowest bit.
    q <<= 1usize;
    if sticky {
        if neg {
            q -= 1;
        } else {
            q += 1;
        }
    }
    Ok(bigint_to_quad(&q, -shift - 1, bits))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digits_mapping() {
        assert_eq!(digits_to_bits(34), 113);
        assert_eq!(digits_to_bits(7), 24);
        assert_eq!(digits_to_bits(1), 4);
        assert_eq!(digits_to_bits(3), 10);
        assert_eq!(digits_to_bits(11), 37);
        assert_eq!(digits_to_bits(16), 54);
        assert_eq!(digits_to_bits(40), 113);
    }

    #[test]
    fn ctx_validation_and_roundoff() {
        assert!(PrecisionCtx::new(1).is_err());
        assert!(PrecisionCtx::new(114).is_err());
        assert_eq!(PrecisionCtx::FP32.unit_roundoff(), 2f64.powi(-24));
        assert_eq!(PrecisionCtx::FP16.label(), "fp16");
        assert_eq!(PrecisionCtx::clamped(7).label(), "b7");
    }

    #[test]
    fn round_to_examples() {
        let one = Quad::ONE;
        let x = one + one.ldexp(-120);
        assert_eq!(round_to(x, PrecisionCtx::FP32).value(), one);
        let y = Quad::from_f64(0.1) / Quad::from_i64(3);
        assert_eq!(round_to(y, PrecisionCtx::BASE).value(), y);
        let z = one + Quad::from_i64(3).ldexp(-25);
        assert_eq!(round_to(z, PrecisionCtx::FP32).value(), one + one.ldexp(-23));
        assert!(round_f64_to(f64::NAN, PrecisionCtx::FP32).is_err());
    }

    #[test]
    fn arith_examples() {
        let one = VNum::base(Quad::ONE);
        let tiny = VNum::base(Quad::ONE.ldexp(-25));
        let r = arith(ArithOp::Add, one, tiny, PrecisionCtx::FP32).unwrap();
        assert_eq!(r.value(), Quad::ONE);
        let x = round_to(Quad::from_f64(0.3), PrecisionCtx::FP32);
        let r = arith(ArithOp::Mul, x, one, PrecisionCtx::FP32).unwrap();
        assert_eq!(r, x);
        let e = arith(ArithOp::Div, one, VNum::base(Quad::ZERO), PrecisionCtx::FP32);
        assert!(matches!(e, Err(Error::SingularOperand)));
    }

    #[test]
    fn ratio_rounding() {
        let q = ratio_to_quad(&BigInt::from(1), &BigInt::from(3), 113).unwrap();
        assert_eq!(q, Quad::ONE / Quad::from_i64(3));
        let q = ratio_to_quad(&BigInt::from(-5), &BigInt::from(8), 113).unwrap();
        assert_eq!(q.to_f64(), -0.625);
        let q = ratio_to_quad(&BigInt::from(2), &BigInt::from(3), 4).unwrap();
        assert_eq!(q.to_f64(), 0.6875);
    }

    #[test]
    fn exact_dot_cancels() {
        let a = Quad::ONE + Quad::ONE.ldexp(-100);
        let pairs = vec![(a, a), (-Quad::ONE, Quad::ONE)];
        let d = exact_dot_rounded(pairs, 113);
        // (1+2^-100)^2 - 1 = 2^-99 + 2^-200
        assert_eq!(d, Quad::ONE.ldexp(-99) + Quad::ONE.ldexp(-200));
    }
}
