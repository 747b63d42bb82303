//! Arbitrary-precision real and complex scalars.
//!
//! A thin layer over `astro-float`: the [`Rf`] newtype carries a binary
//! precision with each value (operators work at the larger operand
//! precision), [`Cf`] is the matching rectangular complex type, and the free
//! functions provide exact conversions to and from `BigRational`, decimal
//! formatting for reports, and certified geometric/polynomial tail bounds
//! used by every numeric evaluator in the crate.

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cell::RefCell;
use std::cmp::Ordering;
use std::ops::{Add, Div, Mul, Neg, Sub};

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constants cache"));
}

fn with_cc<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Working precision in bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Prec(pub usize);

impl Prec {
    /// Precision comfortably exceeding `digits` decimal digits (64 guard bits).
    pub fn from_digits(digits: u32) -> Self {
        Prec((digits as f64 * 3.3220).ceil() as usize + 64)
    }

    /// Number of bits.
    pub fn bits(self) -> usize {
        self.0
    }

    /// A wider precision for intermediate work.
    pub fn widen(self, extra: usize) -> Self {
        Prec(self.0 + extra)
    }
}

/// Arbitrary-precision real number; each value carries its precision.
///
/// Binary operators round to the larger operand precision, matching the
/// usual behaviour of precision-carrying float types.
#[derive(Clone, Debug)]
pub struct Rf(pub BigFloat);

// Zero values report precision 0, which the backend rejects; floor to a
// usable width (zeros and their unary images are exact, so nothing is lost).
fn usable_prec(x: &BigFloat) -> usize {
    match x.precision() {
        Some(p) if p > 0 => p,
        _ => 64,
    }
}

fn op_prec(a: &Rf, b: &Rf) -> usize {
    usable_prec(&a.0).max(usable_prec(&b.0))
}

impl Rf {
    /// The integer `k` at precision `p`.
    pub fn int(k: i64, p: Prec) -> Rf {
        Rf(BigFloat::from_i64(k, p.0))
    }

    /// Zero at precision `p`.
    pub fn zero(p: Prec) -> Rf {
        Rf(BigFloat::from_i64(0, p.0))
    }

    /// Exact power of two `2^e`.
    pub fn pow2(e: i32, p: Prec) -> Rf {
        let mut x = BigFloat::from_i64(1, p.0);
        x.set_exponent(1 + e);
        Rf(x)
    }

    /// Rounded value of a rational at precision `p`.
    pub fn rat(r: &BigRational, p: Prec) -> Rf {
        let wide = Prec(p.0 + 32);
        let num = bigint_to_rf(r.numer(), wide);
        let den = bigint_to_rf(r.denom(), wide);
        Rf(num.0.div(&den.0, p.0, RM))
    }

    /// Rounded value of `n/d` at precision `p`.
    pub fn frac(n: i64, d: i64, p: Prec) -> Rf {
        Rf(BigFloat::from_i64(n, p.0).div(&BigFloat::from_i64(d, p.0), p.0, RM))
    }

    /// Pi at precision `p`.
    pub fn pi(p: Prec) -> Rf {
        Rf(with_cc(|cc| cc.pi(p.0, RM)))
    }

    /// Precision of this value in bits.
    pub fn prec(&self) -> Prec {
        Prec(usable_prec(&self.0))
    }

    /// Square root (NaN for negative input).
    pub fn sqrt(&self) -> Rf {
        let p = self.prec().0;
        Rf(self.0.sqrt(p, RM))
    }

    /// Natural exponential.
    pub fn exp(&self) -> Rf {
        let p = self.prec().0;
        Rf(with_cc(|cc| self.0.exp(p, RM, cc)))
    }

    /// Natural logarithm (NaN for non-positive input).
    pub fn ln(&self) -> Rf {
        let p = self.prec().0;
        Rf(with_cc(|cc| self.0.ln(p, RM, cc)))
    }

    /// Sine.
    pub fn sin(&self) -> Rf {
        let p = self.prec().0;
        Rf(with_cc(|cc| self.0.sin(p, RM, cc)))
    }

    /// Cosine.
    pub fn cos(&self) -> Rf {
        let p = self.prec().0;
        Rf(with_cc(|cc| self.0.cos(p, RM, cc)))
    }

    /// Integer power by binary exponentiation (32 internal guard bits).
    pub fn powi(&self, k: i64) -> Rf {
        let p = self.prec().0;
        let pw = p + 32;
        if k == 0 {
            return Rf::int(1, Prec(p));
        }
        let mut base = if k < 0 {
            BigFloat::from_i64(1, pw).div(&self.0, pw, RM)
        } else {
            self.0.clone()
        };
        let mut n = k.unsigned_abs();
        let mut acc = BigFloat::from_i64(1, pw);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base, pw, RM);
            }
            base = base.mul(&base, pw, RM);
            n >>= 1;
        }
        Rf(round_to(acc, p))
    }

    /// Rational power `self^(n/d)` for positive base.
    pub fn pow_rat(&self, n: i64, d: i64) -> Rf {
        assert!(d != 0, "zero denominator in exponent");
        let p = self.prec().0;
        let pw = Prec(p + 32);
        let ln = Rf(with_cc(|cc| self.0.ln(pw.0, RM, cc)));
        let e = ln * Rf::frac(n, d, pw);
        Rf(round_to(with_cc(|cc| e.0.exp(pw.0, RM, cc)), p))
    }

    /// Absolute value.
    pub fn abs(&self) -> Rf {
        Rf(self.0.abs())
    }

    /// Reciprocal.
    pub fn recip(&self) -> Rf {
        let p = self.prec().0;
        Rf(BigFloat::from_i64(1, p).div(&self.0, p, RM))
    }

    /// Fractional part (same sign as the value).
    pub fn fract(&self) -> Rf {
        Rf(self.0.fract())
    }

    /// True for NaN or infinity.
    pub fn is_bad(&self) -> bool {
        self.0.is_nan() || self.0.is_inf()
    }

    /// True for an exact zero.
    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Sign of the value (`None` for NaN).
    pub fn signum(&self) -> Option<i32> {
        match self.0.sign()? {
            Sign::Pos => Some(if self.0.is_zero() { 0 } else { 1 }),
            Sign::Neg => Some(-1),
        }
    }

    /// Exact conversion to a rational (`None` for NaN/infinity).
    pub fn to_rational(&self) -> Option<BigRational> {
        if self.0.is_nan() || self.0.is_inf() {
            return None;
        }
        if self.0.is_zero() {
            return Some(BigRational::zero());
        }
        let (words, nbits, sign, exp, _inexact) = self.0.as_raw_parts()?;
        let mut mant = BigUint::zero();
        for (i, w) in words.iter().enumerate() {
            mant += BigUint::from(*w) << (64 * i);
        }
        let mut num = BigInt::from(mant);
        if sign == Sign::Neg {
            num = -num;
        }
        let shift = exp as i64 - nbits as i64;
        let r = if shift >= 0 {
            BigRational::from_integer(num << shift as usize)
        } else {
            BigRational::new(num, BigInt::one() << (-shift) as usize)
        };
        Some(r)
    }

    /// Round to nearest `BigInt` (ties toward even are irrelevant for our uses).
    pub fn round_to_int(&self) -> Option<BigInt> {
        let r = self.to_rational()?;
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        Some(if r.is_negative() {
            -(-r + half).floor().to_integer()
        } else {
            (r + half).floor().to_integer()
        })
    }

    /// Compare, treating NaN as incomparable.
    pub fn cmp_val(&self, other: &Rf) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }

    /// `self < other` (false when incomparable).
    pub fn lt(&self, other: &Rf) -> bool {
        matches!(self.cmp_val(other), Some(Ordering::Less))
    }

    /// Approximate f64 value (for diagnostics only).
    pub fn to_f64(&self) -> f64 {
        // astro-float's f64 conversion; precision loss is fine here.
        let s = format!("{}", self.0);
        s.parse::<f64>().unwrap_or(f64::NAN)
    }

    /// Decimal string with `digits` significant digits.
    pub fn fmt_decimal(&self, digits: usize) -> String {
        fmt_decimal(self, digits)
    }
}

fn round_to(x: BigFloat, p: usize) -> BigFloat {
    // Re-rounding via addition of zero at the target precision.
    x.add(&BigFloat::from_i64(0, p), p, RM)
}

fn bigint_to_rf(n: &BigInt, p: Prec) -> Rf {
    if let Some(k) = n.to_i64() {
        return Rf::int(k, p);
    }
    let bits = n.bits() as usize + 8;
    let s = n.to_string();
    let parsed = with_cc(|cc| {
        BigFloat::parse(&s, astro_float::Radix::Dec, bits.max(p.0), RM, cc)
    });
    Rf(round_to(parsed, p.0))
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident, $af:ident) => {
        impl $trait for &Rf {
            type Output = Rf;
            fn $method(self, rhs: &Rf) -> Rf {
                let p = op_prec(self, rhs);
                Rf(self.0.$af(&rhs.0, p, RM))
            }
        }
        impl $trait for Rf {
            type Output = Rf;
            fn $method(self, rhs: Rf) -> Rf {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Rf> for Rf {
            type Output = Rf;
            fn $method(self, rhs: &Rf) -> Rf {
                (&self).$method(rhs)
            }
        }
        impl $trait<Rf> for &Rf {
            type Output = Rf;
            fn $method(self, rhs: Rf) -> Rf {
                self.$method(&rhs)
            }
        }
    };
}

impl_binop!(Add, add, add);
impl_binop!(Sub, sub, sub);
impl_binop!(Mul, mul, mul);
impl_binop!(Div, div, div);

impl Neg for &Rf {
    type Output = Rf;
    fn neg(self) -> Rf {
        Rf(self.0.clone().neg())
    }
}

impl Neg for Rf {
    type Output = Rf;
    fn neg(self) -> Rf {
        Rf(self.0.neg())
    }
}

/// Rectangular complex number over [`Rf`].
#[derive(Clone, Debug)]
pub struct Cf {
    /// Real part.
    pub re: Rf,
    /// Imaginary part.
    pub im: Rf,
}

impl Cf {
    /// Complex number from parts.
    pub fn new(re: Rf, im: Rf) -> Cf {
        Cf { re, im }
    }

    /// Real number as a complex value.
    pub fn real(re: Rf) -> Cf {
        let p = re.prec();
        Cf { re, im: Rf::zero(p) }
    }

    /// Purely imaginary value.
    pub fn imag(im: Rf) -> Cf {
        let p = im.prec();
        Cf { re: Rf::zero(p), im }
    }

    /// Zero.
    pub fn zero(p: Prec) -> Cf {
        Cf { re: Rf::zero(p), im: Rf::zero(p) }
    }

    /// One.
    pub fn one(p: Prec) -> Cf {
        Cf { re: Rf::int(1, p), im: Rf::zero(p) }
    }

    /// Complex modulus.
    pub fn abs(&self) -> Rf {
        (&(&self.re * &self.re) + &(&self.im * &self.im)).sqrt()
    }

    /// Multiply by `i^k` (exact rotation).
    pub fn mul_i_pow(&self, k: i64) -> Cf {
        match k.rem_euclid(4) {
            0 => self.clone(),
            1 => Cf { re: -&self.im, im: self.re.clone() },
            2 => Cf { re: -&self.re, im: -&self.im },
            _ => Cf { re: self.im.clone(), im: -&self.re },
        }
    }

    /// Integer power by binary exponentiation (non-negative exponent).
    pub fn powi(&self, k: u64) -> Cf {
        let p = self.re.prec().max(self.im.prec());
        let mut acc = Cf::one(p);
        let mut base = self.clone();
        let mut n = k;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            n >>= 1;
        }
        acc
    }

    /// Scale by a real factor.
    pub fn scale(&self, s: &Rf) -> Cf {
        Cf { re: &self.re * s, im: &self.im * s }
    }

    /// `e^{i theta}` for real `theta`.
    pub fn cis(theta: &Rf) -> Cf {
        Cf { re: theta.cos(), im: theta.sin() }
    }
}

impl Add for &Cf {
    type Output = Cf;
    fn add(self, rhs: &Cf) -> Cf {
        Cf { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Sub for &Cf {
    type Output = Cf;
    fn sub(self, rhs: &Cf) -> Cf {
        Cf { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Mul for &Cf {
    type Output = Cf;
    fn mul(self, rhs: &Cf) -> Cf {
        Cf {
            re: &(&self.re * &rhs.re) - &(&self.im * &rhs.im),
            im: &(&self.re * &rhs.im) + &(&self.im * &rhs.re),
        }
    }
}

impl Div for &Cf {
    type Output = Cf;
    fn div(self, rhs: &Cf) -> Cf {
        let d = &(&rhs.re * &rhs.re) + &(&rhs.im * &rhs.im);
        Cf {
            re: &(&(&self.re * &rhs.re) + &(&self.im * &rhs.im)) / &d,
            im: &(&(&self.im * &rhs.re) - &(&self.re * &rhs.im)) / &d,
        }
    }
}

/// Certified bound for the tail `sum_{n >= t0} c (1+n)^g x^n` with `0 <= x < 1`.
///
/// Uses `(1+n)^g <= (1+t0)^g e^{g (n-t0)/(1+t0)}`, which turns the tail into a
/// geometric series with ratio `x e^{g/(1+t0)}`. Returns `None` when that
/// ratio is not provably below 1 (the caller should increase `t0`).
pub fn poly_tail_bound(c: &Rf, g: u32, x: &Rf, t0: i64) -> Option<Rf> {
    let p = x.prec();
    if x.signum()? < 0 || t0 < 0 {
        return None;
    }
    let ratio = x * &Rf::frac(g as i64, t0 + 1, p).exp();
    if !ratio.lt(&Rf::int(1, p)) {
        return None;
    }
    let lead = c * &Rf::int(t0 + 1, p).powi(g as i64) * x.powi(t0);
    let bound = &lead / &(Rf::int(1, p) - &ratio);
    // Small inflation absorbs the floating-point rounding of the bound itself.
    Some(&bound * &Rf::frac(1025, 1024, p))
}

/// Decimal string with `digits` significant digits.
///
/// Plain positional notation for moderate magnitudes, otherwise `d.dd...e±k`.
/// Trailing zeros after the decimal point are trimmed.
pub fn fmt_decimal(x: &Rf, digits: usize) -> String {
    let digits = digits.max(1);
    if x.0.is_nan() {
        return "nan".into();
    }
    if x.0.is_inf() {
        return if x.signum() == Some(-1) { "-inf".into() } else { "inf".into() };
    }
    let r = match x.to_rational() {
        Some(r) => r,
        None => return "nan".into(),
    };
    if r.is_zero() {
        return "0".into();
    }
    let neg = r.is_negative();
    let a = r.abs();
    // Decimal exponent e with 10^(e-1) <= a < 10^e.
    let ten = BigRational::from_integer(BigInt::from(10));
    let mut e: i64 = {
        let nb = a.numer().bits() as i64;
        let db = a.denom().bits() as i64;
        (((nb - db) as f64) * 0.30103) as i64
    };
    let pow10 = |k: i64| -> BigRational {
        let p = BigInt::from(10u32).pow(k.unsigned_abs() as u32);
        if k >= 0 {
            BigRational::from_integer(p)
        } else {
            BigRational::new(BigInt::one(), p)
        }
    };
    while a >= pow10(e) {
        e += 1;
    }
    while a < pow10(e - 1) {
        e -= 1;
    }
    let _ = &ten;
    // Mantissa with `digits` digits: round(a * 10^(digits - e)).
    let scaled = &a * pow10(digits as i64 - e);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut mant = (scaled + half).floor().to_integer();
    let cap = BigInt::from(10u32).pow(digits as u32);
    if mant >= cap {
        mant /= BigInt::from(10u32);
        e += 1;
    }
    let mut ds = mant.to_string();
    while ds.len() < digits {
        ds.insert(0, '0');
    }
    let sign = if neg { "-" } else { "" };
    let out = if e >= 1 && (e as usize) <= digits.max(6) + 4 && e as usize <= 21 {
        // Integer part has e digits.
        if (e as usize) >= ds.len() {
            let mut s = ds.clone();
            s.push_str(&"0".repeat(e as usize - ds.len()));
            format!("{sign}{s}")
        } else {
            let (ip, fp) = ds.split_at(e as usize);
            let fp = fp.trim_end_matches('0');
            if fp.is_empty() {
                format!("{sign}{ip}")
            } else {
                format!("{sign}{ip}.{fp}")
            }
        }
    } else if e <= 0 && e >= -4 {
        let zeros = "0".repeat((-e) as usize);
        let fp = format!("{zeros}{ds}");
        let fp = fp.trim_end_matches('0');
        format!("{sign}0.{fp}")
    } else {
        let (first, rest) = ds.split_at(1);
        let rest = rest.trim_end_matches('0');
        if rest.is_empty() {
            format!("{sign}{first}e{}", e - 1)
        } else {
            format!("{sign}{first}.{rest}e{}", e - 1)
        }
    };
    out
}
