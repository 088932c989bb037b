//! Numeric carriers for eigenvalues and series coefficients.
//!
//! Two modes are provided behind the [`Scalar`] trait:
//!
//! * [`GaussianRational`]: exact `(a + b i) / d` with arbitrary-precision integers.
//!   Equality is decidable, so resonance tests are exact.
//! * [`FloatComplex`]: a pair of binary big floats at a configured precision `p`,
//!   paired with a zero tolerance `ε = 2^-e` carried by [`FloatCtx`].
//!
//! Quantities that only depend on moduli (divisor sizes, θ, ω) are handled through
//! the associated [`Scalar::Real`] type, which holds *squared* moduli. In exact mode
//! that is a [`BigRational`], so comparisons such as `|δ| < θ ω` stay exact.

use std::fmt;
use std::str::FromStr;

use dashu_base::SquareRoot;
use dashu_float::round::mode::HalfEven;
use dashu_float::{DBig, FBig};
use dashu_int::{IBig, UBig};
use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Binary big float used for every inexact real quantity in the crate.
pub type Float = FBig<HalfEven, 2>;

/// Default working precision in bits.
pub const DEFAULT_PRECISION: usize = 128;

/// Which scalar carrier a computation runs in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exact => f.write_str("exact"),
            Mode::Float => f.write_str("float"),
        }
    }
}

/// Squared moduli and other non-negative reals attached to a scalar mode.
pub trait RealValue: Clone + fmt::Debug + PartialOrd + Send + Sync {
    fn mul(&self, other: &Self) -> Self;
    fn is_exact_zero(&self) -> bool;
    fn to_float(&self, precision: usize) -> Float;
    /// Decimal (or exact rational) rendering for reports.
    fn render(&self) -> String;
    /// Rendering of the square root: exact when it is rational.
    fn render_sqrt(&self, precision: usize) -> String {
        render_float(&float_sqrt(&self.to_float(precision)))
    }
}

impl RealValue for BigRational {
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn is_exact_zero(&self) -> bool {
        self.is_zero()
    }
    fn to_float(&self, precision: usize) -> Float {
        rational_to_float(self, precision)
    }
    fn render(&self) -> String {
        render_rational(self)
    }
    fn render_sqrt(&self, precision: usize) -> String {
        match rational_sqrt(self) {
            Some(r) => render_rational(&r),
            None => render_float(&float_sqrt(&self.to_float(precision))),
        }
    }
}

impl RealValue for Float {
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn is_exact_zero(&self) -> bool {
        *self == Float::ZERO
    }
    fn to_float(&self, precision: usize) -> Float {
        self.clone().with_precision(precision).value()
    }
    fn render(&self) -> String {
        render_float(self)
    }
}

/// Coefficient field used by series, matrices and all algorithms.
pub trait Scalar: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    /// Per-mode configuration (precision and tolerance in float mode).
    type Ctx: Clone + fmt::Debug + PartialEq + Send + Sync + Default;
    /// Carrier of squared moduli.
    type Real: RealValue;

    const MODE: Mode;

    fn zero(ctx: &Self::Ctx) -> Self;
    fn one(ctx: &Self::Ctx) -> Self;
    fn from_ratio(re: &BigRational, im: &BigRational, ctx: &Self::Ctx) -> Self;

    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn conj(&self) -> Self;
    /// Multiplicative inverse; `None` for an exact zero.
    fn inv(&self) -> Option<Self>;

    /// Structural zero: never stored in sparse tables.
    fn is_exact_zero(&self) -> bool;
    /// Mode-aware zero test: exact equality, or modulus below ε.
    fn is_negligible(&self, ctx: &Self::Ctx) -> bool;

    fn norm_sqr(&self) -> Self::Real;
    fn real_from_ratio(r: &BigRational, ctx: &Self::Ctx) -> Self::Real;
    /// Whether a squared modulus counts as zero.
    fn real_is_negligible(r: &Self::Real, ctx: &Self::Ctx) -> bool;
    /// Equality of two squared moduli (exact, or within relative ε).
    fn reals_tied(a: &Self::Real, b: &Self::Real, ctx: &Self::Ctx) -> bool;

    /// Working precision for derived floating quantities (logarithms, majorants).
    fn precision(ctx: &Self::Ctx) -> usize;
    /// Tolerance exponent `e` with `ε = 2^-e`, used by certificate comparisons.
    fn tolerance_bits(ctx: &Self::Ctx) -> usize;

    fn parse(re: &str, im: &str, ctx: &Self::Ctx) -> Result<Self>;
    /// `(re, im)` strings in the term-literal format of this mode.
    fn to_literal(&self) -> (String, String);

    fn modulus(&self, precision: usize) -> Float {
        float_sqrt(&self.norm_sqr().to_float(precision))
    }

    fn pow(&self, exp: u32, ctx: &Self::Ctx) -> Self {
        let mut acc = Self::one(ctx);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

// ---------------------------------------------------------------------------
// Exact mode
// ---------------------------------------------------------------------------

/// Context of the exact mode. Carries only the precision used when exact
/// quantities have to be turned into floats (logarithms, square roots).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactCtx {
    pub precision: usize,
}

impl Default for ExactCtx {
    fn default() -> Self {
        ExactCtx {
            precision: DEFAULT_PRECISION,
        }
    }
}

/// Exact complex number `(re + im·i) / den` with `den > 0` and
/// `gcd(re, im, den) = 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    re: BigInt,
    im: BigInt,
    den: BigInt,
}

impl GaussianRational {
    pub fn new(re: BigInt, im: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut z = GaussianRational { re, im, den };
        z.normalize();
        z
    }

    pub fn from_rationals(re: &BigRational, im: &BigRational) -> Self {
        let den = re.denom().lcm(im.denom());
        let a = re.numer() * (&den / re.denom());
        let b = im.numer() * (&den / im.denom());
        GaussianRational::new(a, b, den)
    }

    pub fn from_i64(re: i64, im: i64) -> Self {
        GaussianRational::new(re.into(), im.into(), BigInt::one())
    }

    /// `(re_num/re_den) + (im_num/im_den) i`.
    pub fn from_fractions(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Self {
        GaussianRational::from_rationals(
            &BigRational::new(re_num.into(), re_den.into()),
            &BigRational::new(im_num.into(), im_den.into()),
        )
    }

    pub fn re(&self) -> BigRational {
        BigRational::new(self.re.clone(), self.den.clone())
    }

    pub fn im(&self) -> BigRational {
        BigRational::new(self.im.clone(), self.den.clone())
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.re = -&self.re;
            self.im = -&self.im;
            self.den = -&self.den;
        }
        if self.re.is_zero() && self.im.is_zero() {
            self.den = BigInt::one();
            return;
        }
        if self.den.is_one() {
            return;
        }
        let g = self.re.gcd(&self.im).gcd(&self.den);
        if !g.is_one() {
            self.re /= &g;
            self.im /= &g;
            self.den /= &g;
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_literal();
        write!(f, "({re} + {im}i)")
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Scalar for GaussianRational {
    type Ctx = ExactCtx;
    type Real = BigRational;

    const MODE: Mode = Mode::Exact;

    fn zero(_: &ExactCtx) -> Self {
        GaussianRational {
            re: BigInt::zero(),
            im: BigInt::zero(),
            den: BigInt::one(),
        }
    }

    fn one(_: &ExactCtx) -> Self {
        GaussianRational {
            re: BigInt::one(),
            im: BigInt::zero(),
            den: BigInt::one(),
        }
    }

    fn from_ratio(re: &BigRational, im: &BigRational, _: &ExactCtx) -> Self {
        GaussianRational::from_rationals(re, im)
    }

    fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return GaussianRational::new(&self.re + &o.re, &self.im + &o.im, self.den.clone());
        }
        GaussianRational::new(
            &self.re * &o.den + &o.re * &self.den,
            &self.im * &o.den + &o.im * &self.den,
            &self.den * &o.den,
        )
    }

    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    fn mul(&self, o: &Self) -> Self {
        if self.is_exact_zero() || o.is_exact_zero() {
            return GaussianRational::zero(&ExactCtx::default());
        }
        GaussianRational::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
            &self.den * &o.den,
        )
    }

    fn neg(&self) -> Self {
        GaussianRational {
            re: -&self.re,
            im: -&self.im,
            den: self.den.clone(),
        }
    }

    fn conj(&self) -> Self {
        GaussianRational {
            re: self.re.clone(),
            im: -&self.im,
            den: self.den.clone(),
        }
    }

    fn inv(&self) -> Option<Self> {
        if self.is_exact_zero() {
            return None;
        }
        // (a + bi)/d inverted is (a - bi) d / (a^2 + b^2)
        let norm = &self.re * &self.re + &self.im * &self.im;
        Some(GaussianRational::new(
            &self.re * &self.den,
            -&self.im * &self.den,
            norm,
        ))
    }

    fn is_exact_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn is_negligible(&self, _: &ExactCtx) -> bool {
        self.is_exact_zero()
    }

    fn norm_sqr(&self) -> BigRational {
        BigRational::new(
            &self.re * &self.re + &self.im * &self.im,
            &self.den * &self.den,
        )
    }

    fn real_from_ratio(r: &BigRational, _: &ExactCtx) -> BigRational {
        r.clone()
    }

    fn real_is_negligible(r: &BigRational, _: &ExactCtx) -> bool {
        r.is_zero()
    }

    fn reals_tied(a: &BigRational, b: &BigRational, _: &ExactCtx) -> bool {
        a == b
    }

    fn precision(ctx: &ExactCtx) -> usize {
        ctx.precision
    }

    fn tolerance_bits(ctx: &ExactCtx) -> usize {
        ctx.precision / 2
    }

    fn parse(re: &str, im: &str, _: &ExactCtx) -> Result<Self> {
        Ok(GaussianRational::from_rationals(
            &parse_rational(re)?,
            &parse_rational(im)?,
        ))
    }

    fn to_literal(&self) -> (String, String) {
        (render_rational(&self.re()), render_rational(&self.im()))
    }
}

/// Parses `"p"` or `"p/q"`. Decimal points are rejected: exact mode only takes
/// rational literals.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let bad = || Error::Parse(format!("invalid rational literal {s:?}"));
    let (num, den) = match t.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (t, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

pub fn render_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact square root of a non-negative rational when it is a perfect square.
pub fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// Float mode
// ---------------------------------------------------------------------------

/// Precision `p` (bits) and tolerance `ε = 2^-eps_bits` of the float mode.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FloatCtx {
    pub precision: usize,
    pub eps_bits: usize,
}

impl FloatCtx {
    /// Precision `p` with the default tolerance `ε = 2^-(p/2)`.
    pub fn with_precision(precision: usize) -> Self {
        FloatCtx {
            precision,
            eps_bits: precision / 2,
        }
    }

    pub fn epsilon(&self) -> Float {
        pow2(-(self.eps_bits as isize), self.precision)
    }
}

impl Default for FloatCtx {
    fn default() -> Self {
        FloatCtx::with_precision(DEFAULT_PRECISION)
    }
}

/// Complex number as a pair of big floats.
#[derive(Clone, PartialEq)]
pub struct FloatComplex {
    re: Float,
    im: Float,
}

impl FloatComplex {
    pub fn new(re: Float, im: Float) -> Self {
        FloatComplex { re, im }
    }

    pub fn re(&self) -> &Float {
        &self.re
    }

    pub fn im(&self) -> &Float {
        &self.im
    }
}

impl fmt::Debug for FloatComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_literal();
        write!(f, "({re} + {im}i)")
    }
}

impl Scalar for FloatComplex {
    type Ctx = FloatCtx;
    type Real = Float;

    const MODE: Mode = Mode::Float;

    fn zero(ctx: &FloatCtx) -> Self {
        let z = float_zero(ctx.precision);
        FloatComplex {
            re: z.clone(),
            im: z,
        }
    }

    fn one(ctx: &FloatCtx) -> Self {
        FloatComplex {
            re: float_int(1, ctx.precision),
            im: float_zero(ctx.precision),
        }
    }

    fn from_ratio(re: &BigRational, im: &BigRational, ctx: &FloatCtx) -> Self {
        FloatComplex {
            re: rational_to_float(re, ctx.precision),
            im: rational_to_float(im, ctx.precision),
        }
    }

    fn add(&self, o: &Self) -> Self {
        FloatComplex {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }

    fn sub(&self, o: &Self) -> Self {
        FloatComplex {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }

    fn mul(&self, o: &Self) -> Self {
        FloatComplex {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    fn neg(&self) -> Self {
        FloatComplex {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }

    fn conj(&self) -> Self {
        FloatComplex {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    fn inv(&self) -> Option<Self> {
        if self.is_exact_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(FloatComplex {
            re: &self.re / &n,
            im: -(&self.im / &n),
        })
    }

    fn is_exact_zero(&self) -> bool {
        self.re == Float::ZERO && self.im == Float::ZERO
    }

    fn is_negligible(&self, ctx: &FloatCtx) -> bool {
        Self::real_is_negligible(&self.norm_sqr(), ctx)
    }

    fn norm_sqr(&self) -> Float {
        &self.re * &self.re + &self.im * &self.im
    }

    fn real_from_ratio(r: &BigRational, ctx: &FloatCtx) -> Float {
        rational_to_float(r, ctx.precision)
    }

    fn real_is_negligible(r: &Float, ctx: &FloatCtx) -> bool {
        *r < pow2(-2 * ctx.eps_bits as isize, ctx.precision)
    }

    fn reals_tied(a: &Float, b: &Float, ctx: &FloatCtx) -> bool {
        let diff = if a > b { a - b } else { b - a };
        let scale = if a > b { a.clone() } else { b.clone() };
        let one = float_int(1, ctx.precision);
        let scale = if scale > one { scale } else { one };
        diff <= scale * pow2(-(ctx.eps_bits as isize), ctx.precision)
    }

    fn precision(ctx: &FloatCtx) -> usize {
        ctx.precision
    }

    fn tolerance_bits(ctx: &FloatCtx) -> usize {
        ctx.eps_bits
    }

    fn parse(re: &str, im: &str, ctx: &FloatCtx) -> Result<Self> {
        Ok(FloatComplex {
            re: parse_float(re, ctx.precision)?,
            im: parse_float(im, ctx.precision)?,
        })
    }

    fn to_literal(&self) -> (String, String) {
        (render_float(&self.re), render_float(&self.im))
    }
}

/// Parses a decimal literal (`"-1.25"`, `"3e-4"`) or a rational `"p/q"`.
pub fn parse_float(s: &str, precision: usize) -> Result<Float> {
    let t = s.trim();
    if t.contains('/') {
        return Ok(rational_to_float(&parse_rational(t)?, precision));
    }
    let d = DBig::from_str(t).map_err(|_| Error::Parse(format!("invalid decimal literal {s:?}")))?;
    Ok(d.with_rounding::<HalfEven>()
        .with_base_and_precision::<2>(precision)
        .value())
}

pub fn float_zero(precision: usize) -> Float {
    Float::ZERO.with_precision(precision).value()
}

pub fn float_int(v: i64, precision: usize) -> Float {
    Float::from(v).with_precision(precision).value()
}

/// `2^e` at the given precision.
pub fn pow2(e: isize, precision: usize) -> Float {
    Float::from_parts(IBig::ONE, e).with_precision(precision).value()
}

fn bigint_to_ibig(v: &BigInt) -> IBig {
    let (sign, bytes) = v.to_bytes_le();
    let mag = IBig::from(UBig::from_le_bytes(&bytes));
    if sign == Sign::Minus {
        -mag
    } else {
        mag
    }
}

pub fn rational_to_float(r: &BigRational, precision: usize) -> Float {
    let num = Float::from(bigint_to_ibig(r.numer()))
        .with_precision(precision)
        .value();
    let den = Float::from(bigint_to_ibig(r.denom()))
        .with_precision(precision)
        .value();
    num / den
}

/// Decimal rendering with enough digits to round-trip the binary precision.
pub fn render_float(x: &Float) -> String {
    if *x == Float::ZERO {
        return "0".to_string();
    }
    let bits = x.precision().max(53);
    let digits = bits * 30103 / 100000 + 2;
    x.clone()
        .with_base_and_precision::<10>(digits)
        .value()
        .to_string()
}

pub fn float_sqrt(x: &Float) -> Float {
    x.sqrt()
}

pub fn float_to_f64(x: &Float) -> f64 {
    x.to_f64().value()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn gaussian_arithmetic_is_exact() {
        let ctx = ExactCtx::default();
        let b = GaussianRational::from_fractions(3, 5, 4, 5);
        let prod = b.mul(&b.conj());
        assert_eq!(prod, GaussianRational::one(&ctx));
        assert_eq!(b.inv().unwrap(), b.conj());
        let i = GaussianRational::from_i64(0, 1);
        assert_eq!(i.pow(4, &ctx), GaussianRational::one(&ctx));
        assert_eq!(i.pow(5, &ctx), i);
    }

    #[test]
    fn gaussian_is_canonical() {
        let a = GaussianRational::new(2.into(), 4.into(), 6.into());
        let b = GaussianRational::new((-1).into(), (-2).into(), (-3).into());
        assert_eq!(a, b);
        assert_eq!(a.to_literal(), ("1/3".to_string(), "2/3".to_string()));
        let zero = GaussianRational::new(0.into(), 0.into(), 7.into());
        assert!(zero.is_exact_zero());
        assert_eq!(zero, GaussianRational::zero(&ExactCtx::default()));
    }

    #[test]
    fn parse_rational_literals() {
        assert_eq!(parse_rational("-7/4").unwrap(), q(-7, 4));
        assert_eq!(parse_rational("3").unwrap(), q(3, 1));
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn exact_square_roots() {
        assert_eq!(rational_sqrt(&q(1, 16)), Some(q(1, 4)));
        assert_eq!(rational_sqrt(&q(2, 1)), None);
    }

    #[test]
    fn float_mode_tolerance() {
        let ctx = FloatCtx::with_precision(128);
        let a = FloatComplex::parse("0.1", "0", &ctx).unwrap();
        let b = FloatComplex::parse("1/10", "0", &ctx).unwrap();
        assert!(a.sub(&b).is_negligible(&ctx));
        let one = FloatComplex::one(&ctx);
        assert!(!one.is_negligible(&ctx));
        let tiny = FloatComplex::new(pow2(-70, 128), float_zero(128));
        assert!(tiny.is_negligible(&ctx));
        let inv = FloatComplex::parse("3/5", "4/5", &ctx).unwrap();
        let prod = inv.mul(&inv.inv().unwrap()).sub(&one);
        assert!(prod.is_negligible(&ctx));
    }

    #[test]
    fn float_rendering_is_decimal() {
        let x = parse_float("0.25", 128).unwrap();
        assert_eq!(render_float(&x).parse::<f64>().unwrap(), 0.25);
        assert!(parse_float("abc", 64).is_err());
    }
}
