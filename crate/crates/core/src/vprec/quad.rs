//! Software binary floating point with a 113-bit significand and a 64-bit
//! exponent.
//!
//! Every arithmetic operation is correctly rounded (round to nearest, ties to
//! even) directly to the requested significand width, so a result produced at
//! `b` bits is exactly what an infinitely precise evaluation followed by one
//! rounding to `b` bits would give. Subnormals, infinities and NaN do not
//! exist; the exponent range is wide enough that nothing in this crate
//! overflows.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_traits::{FromPrimitive, One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Significand width of the base format.
pub const QUAD_BITS: u32 = 113;

const TOP: u128 = 1 << (QUAD_BITS - 1);
const LOW64: u128 = (1u128 << 64) - 1;

/// A 113-bit binary floating-point number.
///
/// The value is `(-1)^neg * mant * 2^exp` with `mant` either zero or in
/// `[2^112, 2^113)`. Zero is always stored as `(false, 0, 0)` so derived
/// equality is value equality.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Quad {
    neg: bool,
    exp: i64,
    mant: u128,
}

impl Quad {
    pub const ZERO: Quad = Quad { neg: false, exp: 0, mant: 0 };
    pub const ONE: Quad = Quad { neg: false, exp: -112, mant: TOP };

    /// pi rounded to 113 bits.
    pub const PI: Quad = Quad { neg: false, exp: -111, mant: 0x1921fb54442d18469898cc51701b8 };

    /// Builds `(-1)^neg * m * 2^exp` rounded to `bits` significant bits.
    pub fn from_parts(neg: bool, m: u128, exp: i64, bits: u32) -> Quad {
        round_pack(neg, m, exp, false, bits)
    }

    /// Exact decomposition `(neg, mant, exp)` with `mant` normalized to 113 bits.
    pub fn to_parts(self) -> (bool, u128, i64) {
        (self.neg, self.mant, self.exp)
    }

    pub fn try_from_f64(x: f64) -> Result<Quad> {
        if !x.is_finite() {
            return Err(Error::NonFinite);
        }
        if x == 0.0 {
            return Ok(Quad::ZERO);
        }
        let bits = x.to_bits();
        let neg = bits >> 63 == 1;
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = (bits & ((1u64 << 52) - 1)) as u128;
        let (m, e) = if biased == 0 { (frac, -1074) } else { (frac | (1u128 << 52), biased - 1075) };
        Ok(round_pack(neg, m, e, false, QUAD_BITS))
    }

    /// Exact conversion of any finite `f64`.
    ///
    /// Panics on NaN or infinity; use [`Quad::try_from_f64`] for fallible input.
    pub fn from_f64(x: f64) -> Quad {
        Quad::try_from_f64(x).expect("non-finite f64")
    }

    pub fn from_i64(v: i64) -> Quad {
        if v == 0 {
            return Quad::ZERO;
        }
        round_pack(v < 0, v.unsigned_abs() as u128, 0, false, QUAD_BITS)
    }

    /// Nearest `f64` (ties to even). Results outside the `f64` range saturate
    /// to infinity or flush to zero.
    pub fn to_f64(self) -> f64 {
        if self.mant == 0 {
            return 0.0;
        }
        let r = self.round_to_bits(53);
        let m53 = (r.mant >> 60) as u64;
        let e = r.exp + 60;
        let mag = ldexp_f64(m53 as f64, e);
        if r.neg {
            -mag
        } else {
            mag
        }
    }

    pub fn is_zero(self) -> bool {
        self.mant == 0
    }

    pub fn is_sign_negative(self) -> bool {
        self.neg
    }

    pub fn abs(self) -> Quad {
        Quad { neg: false, ..self }
    }

    /// Binary exponent `e` with `2^e <= |self| < 2^(e+1)`; `None` for zero.
    pub fn exponent(self) -> Option<i64> {
        if self.mant == 0 {
            None
        } else {
            Some(self.exp + (QUAD_BITS as i64 - 1))
        }
    }

    /// Multiplies by `2^k` exactly.
    pub fn ldexp(self, k: i64) -> Quad {
        if self.mant == 0 {
            self
        } else {
            Quad { exp: self.exp + k, ..self }
        }
    }

    /// Rounds to the nearest number with `bits` significant bits.
    pub fn round_to_bits(self, bits: u32) -> Quad {
        if self.mant == 0 || bits >= QUAD_BITS {
            return self;
        }
        round_pack(self.neg, self.mant, self.exp, false, bits)
    }

    /// Number of significant bits actually used (0 for zero).
    pub fn significant_bits(self) -> u32 {
        if self.mant == 0 {
            0
        } else {
            QUAD_BITS - self.mant.trailing_zeros()
        }
    }

    pub fn add_bits(self, rhs: Quad, bits: u32) -> Quad {
        add_signed(self, rhs, false, bits)
    }

    pub fn sub_bits(self, rhs: Quad, bits: u32) -> Quad {
        add_signed(self, rhs, true, bits)
    }

    pub fn mul_bits(self, rhs: Quad, bits: u32) -> Quad {
        if self.mant == 0 || rhs.mant == 0 {
            return Quad::ZERO;
        }
        let (hi, lo) = mul_wide(self.mant, rhs.mant);
        // The 225/226-bit product is cut to 125 bits plus a sticky flag.
        let hlen = 128 - hi.leading_zeros();
        let s = hlen + 3;
        let m = (hi << (128 - s)) | (lo >> s);
        let sticky = lo & ((1u128 << s) - 1) != 0;
        round_pack(self.neg != rhs.neg, m, self.exp + rhs.exp + s as i64, sticky, bits)
    }

    pub fn checked_div_bits(self, rhs: Quad, bits: u32) -> Result<Quad> {
        if rhs.mant == 0 {
            return Err(Error::SingularOperand);
        }
        if self.mant == 0 {
            return Ok(Quad::ZERO);
        }
        // Long division in 14-bit digits, each estimated in f64 and fixed up
        // by at most one step, giving q = floor(a * 2^119 / b).
        const QBITS: u32 = 120;
        let d = rhs.mant;
        let df = d as f64;
        let mut r = self.mant;
        let mut q: u128 = (r >= d) as u128;
        if q == 1 {
            r -= d;
        }
        let mut got = 1;
        while got < QBITS {
            let k = (QBITS - got).min(14);
            r <<= k;
            let mut dq = ((r as f64) / df) as u128;
            let mut prod = dq * d;
            if prod > r {
                dq -= 1;
                prod -= d;
            }
            r -= prod;
            if r >= d {
                dq += 1;
                r -= d;
            }
            q = (q << k) | dq;
            got += k;
        }
        let exp = self.exp - rhs.exp - (QBITS as i64 - 1);
        Ok(round_pack(self.neg != rhs.neg, q, exp, r != 0, bits))
    }

    pub fn div_bits(self, rhs: Quad, bits: u32) -> Quad {
        self.checked_div_bits(rhs, bits).expect("division by zero")
    }

    /// Error-free product: `self * rhs == hi + lo` exactly.
    pub fn two_prod(self, rhs: Quad) -> (Quad, Quad) {
        let hi = self.mul_bits(rhs, QUAD_BITS);
        if hi.mant == 0 {
            return (hi, Quad::ZERO);
        }
        // lo = self*rhs - hi is representable in 113 bits; recover it from the
        // wide product.
        let (ph, pl) = mul_wide(self.mant, rhs.mant);
        let pexp = self.exp + rhs.exp;
        let shift = hi.exp - pexp;
        debug_assert!((0..256).contains(&shift));
        let (hh, hl) = shl_wide(hi.mant, shift as u32);
        let pneg = self.neg != rhs.neg;
        // Difference of two 256-bit magnitudes with the same sign.
        let (dneg, dh, dl) = if (ph, pl) >= (hh, hl) {
            let (l, b) = pl.overflowing_sub(hl);
            (pneg, ph - hh - b as u128, l)
        } else {
            let (l, b) = hl.overflowing_sub(pl);
            (!pneg, hh - ph - b as u128, l)
        };
        debug_assert!(dh == 0);
        let _ = dh;
        let lo = if dl == 0 { Quad::ZERO } else { round_pack(dneg, dl, pexp, false, QUAD_BITS) };
        (hi, lo)
    }

    /// Error-free sum: `self + rhs == s + e` exactly.
    pub fn two_sum(self, rhs: Quad) -> (Quad, Quad) {
        let s = self + rhs;
        let bp = s - self;
        let ap = s - bp;
        let e = (self - ap) + (rhs - bp);
        (s, e)
    }

    pub fn sqrt(self) -> Quad {
        assert!(!self.neg || self.mant == 0, "sqrt of a negative number");
        if self.mant == 0 {
            return Quad::ZERO;
        }
        let e = self.exponent().unwrap();
        let half = e.div_euclid(2);
        let scaled = self.ldexp(-2 * half);
        let mut y = Quad::from_f64(scaled.to_f64().sqrt());
        let two = Quad::from_i64(2);
        for _ in 0..3 {
            y = (y + scaled / y) / two;
        }
        y.ldexp(half)
    }

    /// Largest integer not greater than `self`.
    pub fn floor(self) -> Quad {
        if self.mant == 0 || self.exp >= 0 {
            return self;
        }
        let sh = (-self.exp) as u32;
        if sh >= QUAD_BITS {
            return if self.neg { -Quad::ONE } else { Quad::ZERO };
        }
        let int = self.mant >> sh;
        let frac = self.mant & ((1u128 << sh) - 1);
        let mut v = if int == 0 { Quad::ZERO } else { round_pack(self.neg, int, 0, false, QUAD_BITS) };
        if self.neg && frac != 0 {
            v = v - Quad::ONE;
        }
        v
    }

    pub fn cos(self) -> Quad {
        let (k, t) = reduce_half_pi(self);
        match k.rem_euclid(4) {
            0 => cos_series(t),
            1 => -sin_series(t),
            2 => -cos_series(t),
            _ => sin_series(t),
        }
    }

    pub fn sin(self) -> Quad {
        let (k, t) = reduce_half_pi(self);
        match k.rem_euclid(4) {
            0 => sin_series(t),
            1 => cos_series(t),
            2 => -sin_series(t),
            _ => -cos_series(t),
        }
    }

    pub fn powi(self, n: i32) -> Quad {
        let mut base = if n < 0 { Quad::ONE / self } else { self };
        let mut e = n.unsigned_abs();
        let mut acc = Quad::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// Scientific notation with `digits` significant decimal digits.
    pub fn to_sci_string(self, digits: usize) -> String {
        if self.mant == 0 {
            return "0e0".to_string();
        }
        let ten = Quad::from_i64(10);
        let mag = self.abs();
        let mut e10 = mag.to_f64().log10().floor() as i32;
        let mut y = mag / ten.powi(e10);
        if y >= ten {
            y = y / ten;
            e10 += 1;
        } else if y < Quad::ONE {
            y = y * ten;
            e10 -= 1;
        }
        let mut out = String::new();
        if self.neg {
            out.push('-');
        }
        for i in 0..digits.max(1) {
            let d = y.floor();
            let dv = d.to_f64() as u8;
            out.push((b'0' + dv.min(9)) as char);
            if i == 0 && digits > 1 {
                out.push('.');
            }
            y = (y - d) * ten;
        }
        out.push('e');
        out.push_str(&e10.to_string());
        out
    }
}

fn ldexp_f64(mut v: f64, mut e: i64) -> f64 {
    while e > 1000 {
        v *= 2f64.powi(1000);
        e -= 1000;
        if v.is_infinite() {
            return v;
        }
    }
    while e < -1000 {
        v *= 2f64.powi(-1000);
        e += 1000;
        if v == 0.0 {
            return v;
        }
    }
    v * 2f64.powi(e as i32)
}

/// Rounds `(-1)^neg * (m + sticky) * 2^exp` to `bits` significant bits.
///
/// When `sticky` is set the caller guarantees `m` carries at least `bits + 2`
/// significant bits, so the sticky part lies strictly below the rounding bit.
fn round_pack(neg: bool, m: u128, exp: i64, sticky: bool, bits: u32) -> Quad {
    debug_assert!((1..=QUAD_BITS).contains(&bits));
    if m == 0 {
        return Quad::ZERO;
    }
    let len = 128 - m.leading_zeros();
    let (q, e) = if len <= bits {
        debug_assert!(!sticky, "sticky rounding without guard bits");
        (m, exp)
    } else {
        let sh = len - bits;
        let q = m >> sh;
        let rem = m & ((1u128 << sh) - 1);
        let half = 1u128 << (sh - 1);
        let up = rem > half || (rem == half && (sticky || q & 1 == 1));
        let mut q = q + up as u128;
        let mut e = exp + sh as i64;
        if q >> bits != 0 {
            q >>= 1;
            e += 1;
        }
        (q, e)
    };
    let qlen = 128 - q.leading_zeros();
    let norm = QUAD_BITS - qlen;
    Quad { neg, exp: e - norm as i64, mant: q << norm }
}

fn add_signed(a: Quad, b: Quad, negate_b: bool, bits: u32) -> Quad {
    let b_neg = b.neg != negate_b;
    if b.mant == 0 {
        return a.round_to_bits(bits);
    }
    if a.mant == 0 {
        return Quad { neg: b_neg, ..b }.round_to_bits(bits);
    }
    let (x, x_neg, y, y_neg) =
        if (a.exp, a.mant) >= (b.exp, b.mant) { (a, a.neg, b, b_neg) } else { (b, b_neg, a, a.neg) };
    const GUARD: u32 = 14;
    let d = (x.exp - y.exp) as u64;
    let xm = x.mant << GUARD;
    let ym_full = y.mant << GUARD;
    let (ym, sticky) = if d >= 128 {
        (0, true)
    } else {
        let d = d as u32;
        let lost = if d == 0 { 0 } else { ym_full & ((1u128 << d) - 1) };
        (ym_full >> d, lost != 0)
    };
    let exp = x.exp - GUARD as i64;
    if x_neg == y_neg {
        round_pack(x_neg, xm + ym, exp, sticky, bits)
    } else {
        let mut s = xm - ym;
        if sticky {
            s -= 1;
        }
        round_pack(x_neg, s, exp, sticky, bits)
    }
}

/// Full 256-bit product of two 113-bit significands as `(hi, lo)`.
fn mul_wide(a: u128, b: u128) -> (u128, u128) {
    let (a1, a0) = (a >> 64, a & LOW64);
    let (b1, b0) = (b >> 64, b & LOW64);
    let p00 = a0 * b0;
    let mid = a0 * b1 + a1 * b0;
    let p11 = a1 * b1;
    let (lo, carry) = p00.overflowing_add(mid << 64);
    let hi = p11 + (mid >> 64) + carry as u128;
    (hi, lo)
}

fn shl_wide(m: u128, s: u32) -> (u128, u128) {
    match s {
        0 => (0, m),
        1..=127 => (m >> (128 - s), m << s),
        _ => (m << (s - 128), 0),
    }
}

/// Returns `(k, t)` with `x = k*pi/2 + t` and `|t| <= pi/4` (approximately).
fn reduce_half_pi(x: Quad) -> (i64, Quad) {
    let half_pi = Quad::PI.ldexp(-1);
    let k = (x.to_f64() / std::f64::consts::FRAC_PI_2).round() as i64;
    if k == 0 {
        return (0, x);
    }
    // Low-order part of pi: pi = PI + PI_LO to about 226 bits.
    const PI_LO: Quad = Quad { neg: false, exp: -226, mant: 0x1cd129024e088a67cc74020bbea64 };
    let kq = Quad::from_i64(k);
    let (p_hi, p_lo) = kq.two_prod(half_pi);
    let t = ((x - p_hi) - p_lo) - kq * PI_LO.ldexp(-1);
    (k, t)
}

fn cos_series(t: Quad) -> Quad {
    let t2 = t * t;
    let mut term = Quad::ONE;
    let mut sum = Quad::ONE;
    let tiny = Quad::ONE.ldexp(-124);
    let mut n = 0i64;
    loop {
        n += 2;
        term = -(term * t2) / Quad::from_i64(n * (n - 1));
        sum = sum + term;
        if term.abs() < tiny {
            break;
        }
    }
    sum
}

fn sin_series(t: Quad) -> Quad {
    if t.is_zero() {
        return t;
    }
    let t2 = t * t;
    let mut term = t;
    let mut sum = t;
    let tiny = t.abs().ldexp(-124);
    let mut n = 1i64;
    loop {
        n += 2;
        term = -(term * t2) / Quad::from_i64(n * (n - 1));
        sum = sum + term;
        if term.abs() < tiny {
            break;
        }
    }
    sum
}

impl PartialOrd for Quad {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Quad {
    fn cmp(&self, other: &Self) -> Ordering {
        let sa = if self.mant == 0 { 0 } else if self.neg { -1 } else { 1 };
        let sb = if other.mant == 0 { 0 } else if other.neg { -1 } else { 1 };
        if sa != sb || sa == 0 {
            return sa.cmp(&sb);
        }
        let mag = (self.exp, self.mant).cmp(&(other.exp, other.mant));
        if sa > 0 {
            mag
        } else {
            mag.reverse()
        }
    }
}

impl Neg for Quad {
    type Output = Quad;
    fn neg(self) -> Quad {
        if self.mant == 0 {
            self
        } else {
            Quad { neg: !self.neg, ..self }
        }
    }
}

impl Add for Quad {
    type Output = Quad;
    fn add(self, rhs: Quad) -> Quad {
        self.add_bits(rhs, QUAD_BITS)
    }
}

impl Sub for Quad {
    type Output = Quad;
    fn sub(self, rhs: Quad) -> Quad {
        self.sub_bits(rhs, QUAD_BITS)
    }
}

impl Mul for Quad {
    type Output = Quad;
    fn mul(self, rhs: Quad) -> Quad {
        self.mul_bits(rhs, QUAD_BITS)
    }
}

impl Div for Quad {
    type Output = Quad;
    fn div(self, rhs: Quad) -> Quad {
        self.div_bits(rhs, QUAD_BITS)
    }
}

impl AddAssign for Quad {
    fn add_assign(&mut self, rhs: Quad) {
        *self = *self + rhs;
    }
}

impl SubAssign for Quad {
    fn sub_assign(&mut self, rhs: Quad) {
        *self = *self - rhs;
    }
}

impl MulAssign for Quad {
    fn mul_assign(&mut self, rhs: Quad) {
        *self = *self * rhs;
    }
}

impl DivAssign for Quad {
    fn div_assign(&mut self, rhs: Quad) {
        *self = *self / rhs;
    }
}

impl std::iter::Sum for Quad {
    fn sum<I: Iterator<Item = Quad>>(iter: I) -> Quad {
        iter.fold(Quad::ZERO, |a, b| a + b)
    }
}

impl Zero for Quad {
    fn zero() -> Quad {
        Quad::ZERO
    }
    fn is_zero(&self) -> bool {
        self.mant == 0
    }
}

impl One for Quad {
    fn one() -> Quad {
        Quad::ONE
    }
}

impl FromPrimitive for Quad {
    fn from_i64(n: i64) -> Option<Quad> {
        Some(Quad::from_i64(n))
    }
    fn from_u64(n: u64) -> Option<Quad> {
        Some(if n == 0 { Quad::ZERO } else { round_pack(false, n as u128, 0, false, QUAD_BITS) })
    }
    fn from_f64(n: f64) -> Option<Quad> {
        Quad::try_from_f64(n).ok()
    }
}

impl ToPrimitive for Quad {
    fn to_i64(&self) -> Option<i64> {
        let f = self.floor();
        let v = f.to_f64();
        if v.abs() < 9.0e18 {
            Some(v as i64)
        } else {
            None
        }
    }
    fn to_u64(&self) -> Option<u64> {
        self.to_i64().and_then(|v| u64::try_from(v).ok())
    }
    fn to_f64(&self) -> Option<f64> {
        Some(Quad::to_f64(*self))
    }
}

impl From<f64> for Quad {
    fn from(x: f64) -> Quad {
        Quad::from_f64(x)
    }
}

impl From<i32> for Quad {
    fn from(x: i32) -> Quad {
        Quad::from_i64(x as i64)
    }
}

impl fmt::Debug for Quad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Quad({})", self.to_sci_string(36))
    }
}

impl fmt::Display for Quad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().map(|p| p + 1).unwrap_or(34);
        f.write_str(&self.to_sci_string(digits))
    }
}
