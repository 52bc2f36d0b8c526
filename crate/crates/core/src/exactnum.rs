//! Exact arithmetic in quadratic fields `Q(sqrt(d))`.
//!
//! [`QuadNum`] is an element `a + b*sqrt(d)` with rational `a`, `b` and a
//! square-free `d`; `d = 1` is the plain rational case and then `b = 0`.
//! [`SqrtExpr`] is a looser `a + b*sqrt(s)` with any rational `s >= 0`, used
//! where values from different fields must be ordered against each other
//! (circle intersection coordinates).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn sign_of(r: &Rational) -> i32 {
    match r.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

fn ord_of(s: i32) -> Ordering {
    s.cmp(&0)
}

/// Largest integer `<= r`.
pub fn floor_rational(r: &Rational) -> BigInt {
    r.numer().div_floor(r.denom())
}

/// Splits `n > 0` as `k^2 * m` with `m` square-free; returns `(k, m)`.
pub fn square_free_split(n: &BigInt) -> Result<(BigInt, BigInt)> {
    if !n.is_positive() {
        return Err(Error::InvalidInput(format!("radicand must be positive, got {n}")));
    }
    let Some(mut rest) = n.to_u128() else {
        return Err(Error::RadicandTooLarge(n.to_string()));
    };
    let mut k: u128 = 1;
    let mut m: u128 = 1;
    let mut p: u128 = 2;
    const TRIAL_LIMIT: u128 = 1_000_000;
    while p * p <= rest && p <= TRIAL_LIMIT {
        let mut e = 0u32;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        k *= p.pow(e / 2);
        if e % 2 == 1 {
            m *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        if p * p > rest {
            m *= rest;
        } else {
            let r = rest.sqrt();
            if r * r == rest {
                k *= r;
            } else if rest < 1_000_000_000_000_000_000 {
                // every prime factor exceeds the trial limit, so at most two remain
                m *= rest;
            } else {
                return Err(Error::RadicandTooLarge(n.to_string()));
            }
        }
    }
    Ok((BigInt::from(k), BigInt::from(m)))
}

/// Rational bounds `lo <= sqrt(s) <= hi` with `hi - lo <= 2^-bits`.
fn sqrt_bounds(s: &Rational, bits: u32) -> (Rational, Rational) {
    debug_assert!(!s.is_negative());
    // sqrt(p/q) = sqrt(p*q)/q
    let pq = s.numer() * s.denom();
    let scale = BigInt::one() << (2 * bits as usize);
    let root = (pq * &scale).sqrt();
    let denom = s.denom() * (BigInt::one() << bits as usize);
    let lo = Rational::new(root.clone(), denom.clone());
    let hi = Rational::new(root + 1, denom);
    (lo, hi)
}

fn term_bounds(a: &Rational, b: &Rational, s: &Rational, bits: u32) -> (Rational, Rational) {
    if b.is_zero() || s.is_zero() {
        return (a.clone(), a.clone());
    }
    let extra = b.abs().to_integer().bits() as u32 + 2;
    let (lo, hi) = sqrt_bounds(s, bits + extra);
    let (x, y) = (a + b * &lo, a + b * &hi);
    if b.is_positive() {
        (x, y)
    } else {
        (y, x)
    }
}

/// Exact sign of `a + b*sqrt(s)` for rational `s >= 0`.
fn surd_sign(a: &Rational, b: &Rational, s: &Rational) -> i32 {
    let sa = sign_of(a);
    let sb = if s.is_zero() { 0 } else { sign_of(b) };
    if sb == 0 {
        return sa;
    }
    if sa == 0 || sa == sb {
        return sb;
    }
    match (a * a).cmp(&(b * b * s)) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => 0,
    }
}

/// An element `rat + irr*sqrt(d)` of `Q(sqrt(d))`, always in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadNum {
    rat: Rational,
    irr: Rational,
    d: BigInt,
}

impl QuadNum {
    pub fn new(rat: Rational, irr: Rational, d: BigInt) -> Result<Self> {
        if irr.is_zero() {
            return Ok(Self::rational(rat));
        }
        let (k, m) = square_free_split(&d)?;
        let irr = irr * Rational::from_integer(k);
        if m.is_one() {
            return Ok(Self::rational(rat + irr));
        }
        Ok(QuadNum { rat, irr, d: m })
    }

    pub fn rational(rat: Rational) -> Self {
        QuadNum {
            rat,
            irr: Rational::zero(),
            d: BigInt::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::rational(int(n))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::rational(Rational::from_integer(n))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// `sqrt(d)` for a positive integer `d`.
    pub fn sqrt_of(d: i64) -> Result<Self> {
        Self::new(Rational::zero(), Rational::one(), BigInt::from(d))
    }

    pub fn rat(&self) -> &Rational {
        &self.rat
    }

    pub fn irr(&self) -> &Rational {
        &self.irr
    }

    pub fn field_d(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.irr.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.irr.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.rat)
    }

    /// The field both operands live in, if they are compatible.
    pub fn common_field(&self, other: &QuadNum) -> Result<BigInt> {
        if self.d.is_one() {
            Ok(other.d.clone())
        } else if other.d.is_one() || self.d == other.d {
            Ok(self.d.clone())
        } else {
            Err(Error::IncompatibleFields(self.d.to_string(), other.d.to_string()))
        }
    }

    pub fn try_add(&self, other: &QuadNum) -> Result<QuadNum> {
        let d = self.common_field(other)?;
        Ok(Self::from_canonical(&self.rat + &other.rat, &self.irr + &other.irr, d))
    }

    pub fn try_sub(&self, other: &QuadNum) -> Result<QuadNum> {
        let d = self.common_field(other)?;
        Ok(Self::from_canonical(&self.rat - &other.rat, &self.irr - &other.irr, d))
    }

    pub fn try_mul(&self, other: &QuadNum) -> Result<QuadNum> {
        let d = self.common_field(other)?;
        let dr = Rational::from_integer(d.clone());
        let rat = &self.rat * &other.rat + &self.irr * &other.irr * dr;
        let irr = &self.rat * &other.irr + &self.irr * &other.rat;
        Ok(Self::from_canonical(rat, irr, d))
    }

    pub fn try_div(&self, other: &QuadNum) -> Result<QuadNum> {
        self.try_mul(&other.recip()?)
    }

    pub fn recip(&self) -> Result<QuadNum> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // 1/(a + b√d) = (a - b√d)/(a² - b²d); the norm is nonzero because √d is irrational
        let dr = Rational::from_integer(self.d.clone());
        let norm = &self.rat * &self.rat - &self.irr * &self.irr * dr;
        Ok(Self::from_canonical(
            &self.rat / &norm,
            -&self.irr / &norm,
            self.d.clone(),
        ))
    }

    pub fn scale(&self, k: &Rational) -> QuadNum {
        Self::from_canonical(&self.rat * k, &self.irr * k, self.d.clone())
    }

    pub fn conjugate(&self) -> QuadNum {
        Self::from_canonical(self.rat.clone(), -&self.irr, self.d.clone())
    }

    fn from_canonical(rat: Rational, irr: Rational, d: BigInt) -> QuadNum {
        if irr.is_zero() || d.is_one() {
            QuadNum::rational(rat)
        } else {
            QuadNum { rat, irr, d }
        }
    }

    /// Exact sign in {-1, 0, 1}.
    pub fn sign(&self) -> i32 {
        surd_sign(&self.rat, &self.irr, &Rational::from_integer(self.d.clone()))
    }

    pub fn cmp_exact(&self, other: &QuadNum) -> Result<Ordering> {
        Ok(ord_of(self.try_sub(other)?.sign()))
    }

    pub fn abs(&self) -> QuadNum {
        if self.sign() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Largest integer `<= self`.
    pub fn floor(&self) -> BigInt {
        if self.is_rational() {
            return floor_rational(&self.rat);
        }
        let (lo, _) = self.approx_bounds(8);
        let mut f = floor_rational(&lo);
        loop {
            let below = self.try_sub(&QuadNum::from_bigint(f.clone())).expect("rational");
            if below.sign() < 0 {
                f -= 1;
                continue;
            }
            let above = self
                .try_sub(&QuadNum::from_bigint(&f + 1))
                .expect("rational");
            if above.sign() >= 0 {
                f += 1;
                continue;
            }
            return f;
        }
    }

    /// Rational bounds on the value, at most `2^-bits` apart (for |irr| < 1).
    pub fn approx_bounds(&self, bits: u32) -> (Rational, Rational) {
        term_bounds(&self.rat, &self.irr, &Rational::from_integer(self.d.clone()), bits)
    }

    pub fn to_f64(&self) -> f64 {
        let r = self.rat.to_f64().unwrap_or(f64::NAN);
        if self.is_rational() {
            return r;
        }
        r + self.irr.to_f64().unwrap_or(f64::NAN) * self.d.to_f64().unwrap_or(f64::NAN).sqrt()
    }

    pub fn to_sqrt_expr(&self) -> SqrtExpr {
        SqrtExpr::from_parts(
            self.rat.clone(),
            self.irr.clone(),
            Rational::from_integer(self.d.clone()),
        )
    }

    /// Short human form, e.g. `sqrt(2)`, `1/2-3*sqrt(5)`. Parses back with [`FromStr`].
    pub fn pretty(&self) -> String {
        let rat = pretty_rational(&self.rat);
        if self.is_rational() {
            return rat;
        }
        let coeff = if self.irr.abs().is_one() {
            String::new()
        } else {
            format!("{}*", pretty_rational(&self.irr.abs()))
        };
        let radical = format!("{coeff}sqrt({})", self.d);
        match (self.rat.is_zero(), self.irr.is_negative()) {
            (true, false) => radical,
            (true, true) => format!("-{radical}"),
            (false, false) => format!("{rat}+{radical}"),
            (false, true) => format!("{rat}-{radical}"),
        }
    }
}

fn pretty_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn canonical_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

impl fmt::Display for QuadNum {
    /// Canonical literal: `P/Q` or `P/Q+R/S*sqrt(D)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", canonical_rational(&self.rat))?;
        if !self.is_rational() {
            let sep = if self.irr.is_negative() { "-" } else { "+" };
            write!(f, "{sep}{}*sqrt({})", canonical_rational(&self.irr.abs()), self.d)?;
        }
        Ok(())
    }
}

impl PartialOrd for QuadNum {
    /// `None` when the operands live in different quadratic fields.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.cmp_exact(other).ok()
    }
}

impl From<Rational> for QuadNum {
    fn from(r: Rational) -> Self {
        QuadNum::rational(r)
    }
}

impl From<i64> for QuadNum {
    fn from(n: i64) -> Self {
        QuadNum::from_int(n)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&QuadNum> for &QuadNum {
            type Output = QuadNum;
            /// Panics if the operands live in different quadratic fields.
            fn $method(self, rhs: &QuadNum) -> QuadNum {
                self.$checked(rhs).expect(concat!("QuadNum::", stringify!($method)))
            }
        }
        impl $trait<QuadNum> for QuadNum {
            type Output = QuadNum;
            fn $method(self, rhs: QuadNum) -> QuadNum {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&QuadNum> for QuadNum {
            type Output = QuadNum;
            fn $method(self, rhs: &QuadNum) -> QuadNum {
                (&self).$method(rhs)
            }
        }
        impl $trait<QuadNum> for &QuadNum {
            type Output = QuadNum;
            fn $method(self, rhs: QuadNum) -> QuadNum {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);
forward_binop!(Div, div, try_div);

impl Neg for &QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        QuadNum::from_canonical(-&self.rat, -&self.irr, self.d.clone())
    }
}

impl Neg for QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        -&self
    }
}

/// Whether `num / den` is rational: true iff `b*c - a*e = 0` for
/// `num = a + b√d`, `den = c + e√d`.
pub fn ratio_is_rational(num: &QuadNum, den: &QuadNum) -> Result<bool> {
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    num.common_field(den)?;
    Ok((num.irr() * den.rat() - num.rat() * den.irr()).is_zero())
}

// ---------------------------------------------------------------------------
// Literal grammar

impl FromStr for QuadNum {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_literal(s).map_err(|(col, msg)| Error::parse(1, col, msg))
    }
}

/// Parses a number literal. On failure returns the 1-based column and a message.
///
/// Accepted: sums of terms `[+-]coef`, `[+-]coef*sqrt(D)`, `[+-]sqrt(D)` where
/// `coef` is `P` or `P/Q`; all radicals must share one `D`.
pub fn parse_literal(s: &str) -> std::result::Result<QuadNum, (usize, String)> {
    let bytes = s.as_bytes();
    let mut pos = 0usize;
    let mut rat_sum = Rational::zero();
    let mut irr_sum = Rational::zero();
    let mut radicand: Option<BigInt> = None;
    let mut first = true;
    if bytes.is_empty() {
        return Err((1, "empty number literal".into()));
    }
    while pos < bytes.len() {
        let mut negative = false;
        let mut saw_sign = false;
        while pos < bytes.len() && (bytes[pos] == b'+' || bytes[pos] == b'-') {
            negative ^= bytes[pos] == b'-';
            saw_sign = true;
            pos += 1;
        }
        if !first && !saw_sign {
            return Err((pos + 1, "expected '+' or '-' between terms".into()));
        }
        first = false;
        let (coef, had_coef) = if s[pos..].starts_with("sqrt(") {
            (Rational::one(), false)
        } else {
            let (c, next) = parse_rational(s, pos)?;
            pos = next;
            (c, true)
        };
        let coef = if negative { -coef } else { coef };
        let radical = if had_coef {
            if s[pos..].starts_with("*sqrt(") {
                pos += 1;
                true
            } else {
                false
            }
        } else {
            true
        };
        if radical {
            pos += "sqrt(".len();
            let start = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            if start == pos {
                return Err((pos + 1, "expected integer radicand".into()));
            }
            let d: BigInt = s[start..pos].parse().map_err(|_| (start + 1, "bad radicand".into()))?;
            if pos >= bytes.len() || bytes[pos] != b')' {
                return Err((pos + 1, "expected ')'".into()));
            }
            pos += 1;
            if d.is_zero() {
                continue;
            }
            let (k, m) = square_free_split(&d).map_err(|e| (start + 1, e.to_string()))?;
            let coef = coef * Rational::from_integer(k);
            if m.is_one() {
                rat_sum += coef;
            } else {
                match &radicand {
                    Some(r) if *r != m => {
                        return Err((start + 1, format!("mixed radicands sqrt({r}) and sqrt({m})")))
                    }
                    _ => radicand = Some(m),
                }
                irr_sum += coef;
            }
        } else {
            rat_sum += coef;
        }
    }
    match radicand {
        Some(d) if !irr_sum.is_zero() => Ok(QuadNum { rat: rat_sum, irr: irr_sum, d }),
        _ => Ok(QuadNum::rational(rat_sum)),
    }
}

fn parse_rational(s: &str, start: usize) -> std::result::Result<(Rational, usize), (usize, String)> {
    let bytes = s.as_bytes();
    let digits = |from: usize| {
        let mut p = from;
        while p < bytes.len() && bytes[p].is_ascii_digit() {
            p += 1;
        }
        p
    };
    let end = digits(start);
    if end == start {
        return Err((start + 1, "expected digits".into()));
    }
    let numer: BigInt = s[start..end].parse().map_err(|_| (start + 1, "bad integer".into()))?;
    if end < bytes.len() && bytes[end] == b'/' {
        let dend = digits(end + 1);
        if dend == end + 1 {
            return Err((end + 2, "expected denominator".into()));
        }
        let denom: BigInt = s[end + 1..dend]
            .parse()
            .map_err(|_| (end + 2, "bad denominator".into()))?;
        if denom.is_zero() {
            return Err((end + 2, "zero denominator".into()));
        }
        Ok((Rational::new(numer, denom), dend))
    } else {
        Ok((Rational::from_integer(numer), end))
    }
}

// ---------------------------------------------------------------------------
// SqrtExpr

/// `a + b*sqrt(s)` with rational `a`, `b` and rational `s >= 0`; `s` need not be
/// square-free, and different values may carry different `s`.
///
/// Equality and ordering are by value.
#[derive(Clone, Debug)]
pub struct SqrtExpr {
    a: Rational,
    b: Rational,
    s: Rational,
    /// Floating-point value and an error bound for it, used only to short-cut
    /// comparisons that are far apart.
    approx: f64,
    err: f64,
}

impl SqrtExpr {
    /// `(p + q*sqrt(s)) / r`.
    pub fn new(p: Rational, q: Rational, r: Rational, s: Rational) -> Result<Self> {
        if r.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if s.is_negative() {
            return Err(Error::InvalidInput(format!("negative radicand {s}")));
        }
        Ok(Self::from_parts(p / &r, q / &r, s))
    }

    pub fn from_parts(a: Rational, b: Rational, s: Rational) -> Self {
        debug_assert!(!s.is_negative());
        if b.is_zero() || s.is_zero() {
            let approx = a.to_f64().unwrap_or(f64::NAN);
            SqrtExpr {
                a,
                b: Rational::zero(),
                s: Rational::zero(),
                approx,
                err: approx.abs() * 1e-12,
            }
        } else {
            let fa = a.to_f64().unwrap_or(f64::NAN);
            let fb = b.to_f64().unwrap_or(f64::NAN) * s.to_f64().unwrap_or(f64::NAN).sqrt();
            let approx = fa + fb;
            SqrtExpr {
                a,
                b,
                s,
                approx,
                err: (fa.abs() + fb.abs()) * 1e-12,
            }
        }
    }

    pub fn rational(a: Rational) -> Self {
        Self::from_parts(a, Rational::zero(), Rational::zero())
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn radicand(&self) -> &Rational {
        &self.s
    }

    pub fn is_rational_form(&self) -> bool {
        self.b.is_zero()
    }

    pub fn sign(&self) -> i32 {
        surd_sign(&self.a, &self.b, &self.s)
    }

    pub fn approx_bounds(&self, bits: u32) -> (Rational, Rational) {
        term_bounds(&self.a, &self.b, &self.s, bits)
    }

    pub fn to_f64(&self) -> f64 {
        self.approx
    }

    /// Radicand shared with `other`, if both can be written over a single one.
    fn shared_radicand(&self, other: &SqrtExpr) -> Option<Rational> {
        if self.b.is_zero() {
            Some(other.s.clone())
        } else if other.b.is_zero() || self.s == other.s {
            Some(self.s.clone())
        } else {
            None
        }
    }

    /// Sum, when both operands share a radicand.
    pub fn add_same(&self, other: &SqrtExpr) -> Option<SqrtExpr> {
        let s = self.shared_radicand(other)?;
        Some(Self::from_parts(&self.a + &other.a, &self.b + &other.b, s))
    }

    pub fn sub_same(&self, other: &SqrtExpr) -> Option<SqrtExpr> {
        self.add_same(&other.neg_expr())
    }

    pub fn mul_same(&self, other: &SqrtExpr) -> Option<SqrtExpr> {
        let s = self.shared_radicand(other)?;
        let a = &self.a * &other.a + &self.b * &other.b * &s;
        let b = &self.a * &other.b + &self.b * &other.a;
        Some(Self::from_parts(a, b, s))
    }

    pub fn add_rational(&self, r: &Rational) -> SqrtExpr {
        Self::from_parts(&self.a + r, self.b.clone(), self.s.clone())
    }

    pub fn scale(&self, k: &Rational) -> SqrtExpr {
        Self::from_parts(&self.a * k, &self.b * k, self.s.clone())
    }

    pub fn neg_expr(&self) -> SqrtExpr {
        Self::from_parts(-&self.a, -&self.b, self.s.clone())
    }
}

impl fmt::Display for SqrtExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", canonical_rational(&self.a))
        } else {
            write!(
                f,
                "{}+{}*sqrt({})",
                canonical_rational(&self.a),
                canonical_rational(&self.b),
                canonical_rational(&self.s)
            )
        }
    }
}

/// Exact comparison of two square-root expressions, possibly over different
/// radicands. Resolves `sign((a1 - a2) + b1√s1 - b2√s2)` with at most two squarings.
pub fn cmp_quadratic(x1: &SqrtExpr, x2: &SqrtExpr) -> Ordering {
    if let Some(ord) = float_filter(x1, x2) {
        return ord;
    }
    let a = &x1.a - &x2.a;
    if x1.b.is_zero() {
        return ord_of(surd_sign(&a, &-&x2.b, &x2.s));
    }
    if x2.b.is_zero() {
        return ord_of(surd_sign(&a, &x1.b, &x1.s));
    }
    if x1.s == x2.s {
        return ord_of(surd_sign(&a, &(&x1.b - &x2.b), &x1.s));
    }
    // X = a + b1√s1 against Y = b2√s2
    let sx = surd_sign(&a, &x1.b, &x1.s);
    let sy = sign_of(&x2.b);
    if sx != sy {
        return sx.cmp(&sy);
    }
    let rat = &a * &a + &x1.b * &x1.b * &x1.s - &x2.b * &x2.b * &x2.s;
    let irr = Rational::from_integer(BigInt::from(2)) * &a * &x1.b;
    ord_of(sx * surd_sign(&rat, &irr, &x1.s))
}

/// Ordering of two approximations when their gap dwarfs any rounding error.
fn float_filter(x: &SqrtExpr, y: &SqrtExpr) -> Option<Ordering> {
    let (u, v) = (x.approx, y.approx);
    let tol = x.err + y.err + 1e-300;
    if !u.is_finite() || !v.is_finite() || !tol.is_finite() {
        return None;
    }
    if (u - v).abs() > 2.0 * tol {
        u.partial_cmp(&v)
    } else {
        None
    }
}

impl PartialEq for SqrtExpr {
    fn eq(&self, other: &Self) -> bool {
        cmp_quadratic(self, other) == Ordering::Equal
    }
}

impl Eq for SqrtExpr {}

impl PartialOrd for SqrtExpr {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SqrtExpr {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_quadratic(self, other)
    }
}

/// Short dyadic rational between two well-separated values, found in floating point and checked exactly.
fn float_between(lo: &SqrtExpr, hi: &SqrtExpr) -> Option<Rational> {
    let (u, v) = (lo.approx, hi.approx);
    if !u.is_finite() || !v.is_finite() || v - u < 1e-6 * (1.0 + u.abs().max(v.abs())) + lo.err + hi.err {
        return None;
    }
    let mid = (u + v) / 2.0;
    for shift in 0..40 {
        let scale = (1u64 << shift) as f64;
        let k = (mid * scale).floor();
        for cand in [k, k + 1.0] {
            let c = Rational::from_float(cand / scale)?;
            let e = SqrtExpr::rational(c.clone());
            if lo < &e && &e < hi {
                return Some(c);
            }
        }
    }
    None
}

/// A rational strictly between `lo < hi`.
pub fn rational_between(lo: &SqrtExpr, hi: &SqrtExpr) -> Rational {
    debug_assert!(lo < hi);
    if let Some(c) = float_between(lo, hi) {
        return c;
    }
    let mut bits = 12;
    loop {
        let (_, lo_up) = lo.approx_bounds(bits);
        let (hi_down, _) = hi.approx_bounds(bits);
        if lo_up < hi_down {
            let mid = (lo_up + hi_down) / int(2);
            // prefer a short representative when one fits
            for shift in 0..bits {
                let scale = Rational::from_integer(BigInt::one() << shift as usize);
                let cand = Rational::from_integer(floor_rational(&(&mid * &scale))) / &scale;
                let cand_hi = (Rational::from_integer(floor_rational(&(&mid * &scale))) + int(1)) / &scale;
                for c in [cand, cand_hi] {
                    let e = SqrtExpr::rational(c.clone());
                    if lo < &e && &e < hi {
                        return c;
                    }
                }
            }
            return mid;
        }
        bits *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> QuadNum {
        s.parse().unwrap()
    }

    #[test]
    fn conjugate_product_is_rational() {
        let x = q("1+sqrt(2)");
        let y = q("1-sqrt(2)");
        assert_eq!(&x * &y, QuadNum::from_int(-1));
        let r = q("sqrt(2)");
        assert_eq!(&r * &r, QuadNum::from_int(2));
        assert_eq!(q("1/2") + q("1/2+sqrt(2)"), q("1+sqrt(2)"));
    }

    #[test]
    fn signs() {
        assert_eq!(q("1-sqrt(2)").sign(), -1);
        assert_eq!(QuadNum::zero().sign(), 0);
        assert_eq!(q("3-2*sqrt(2)").sign(), 1);
        assert_eq!(q("-3+2*sqrt(2)").sign(), -1);
    }

    #[test]
    fn incompatible_fields_and_division() {
        let a = q("sqrt(2)");
        let b = q("sqrt(3)");
        assert!(matches!(a.try_add(&b), Err(Error::IncompatibleFields(..))));
        assert_eq!(a.partial_cmp(&b), None);
        assert_eq!(a.try_div(&QuadNum::zero()), Err(Error::DivisionByZero));
        // a rational operand mixes with any field
        assert!(a.try_add(&q("1/3")).is_ok());
        assert!(b.try_mul(&q("7")).is_ok());
    }

    #[test]
    fn canonical_radicand() {
        assert_eq!(q("sqrt(8)"), q("2*sqrt(2)"));
        assert_eq!(q("sqrt(9)"), QuadNum::from_int(3));
        assert_eq!(QuadNum::sqrt_of(12).unwrap().to_string(), "0/1+2/1*sqrt(3)");
        assert_eq!(square_free_split(&BigInt::from(72)).unwrap(), (BigInt::from(6), BigInt::from(2)));
    }

    #[test]
    fn cmp_quadratic_examples() {
        let e = |p: i64, qq: i64, s: i64| {
            SqrtExpr::new(int(p), int(qq), int(1), int(s)).unwrap()
        };
        assert_eq!(cmp_quadratic(&e(0, 1, 2), &e(0, 1, 3)), Ordering::Less);
        assert_eq!(cmp_quadratic(&e(1, 1, 2), &e(0, 1, 6)), Ordering::Less);
        assert_eq!(cmp_quadratic(&e(3, 0, 2), &e(0, 1, 9)), Ordering::Equal);
        assert_eq!(cmp_quadratic(&e(0, -1, 2), &e(-1, -1, 3)), Ordering::Greater);
    }

    #[test]
    fn ratio_rationality() {
        assert!(ratio_is_rational(&q("2+2*sqrt(2)"), &q("1+sqrt(2)")).unwrap());
        assert!(!ratio_is_rational(&q("sqrt(2)"), &q("1")).unwrap());
        assert!(!ratio_is_rational(&q("1+sqrt(2)"), &q("1-sqrt(2)")).unwrap());
        assert!(ratio_is_rational(&q("0"), &q("sqrt(2)")).unwrap());
        assert_eq!(ratio_is_rational(&q("1"), &q("0")), Err(Error::DivisionByZero));
    }

    #[test]
    fn literal_round_trip_and_errors() {
        let x = q("1/2+3/1*sqrt(2)");
        assert_eq!(x.to_string(), "1/2+3/1*sqrt(2)");
        assert_eq!(q("-1/2-3/1*sqrt(2)").to_string(), "-1/2-3/1*sqrt(2)");
        assert_eq!(q("sqrt(2)").pretty(), "sqrt(2)");
        assert_eq!(q("1/2-3*sqrt(5)").pretty(), "1/2-3*sqrt(5)");
        assert!(matches!("1/0".parse::<QuadNum>(), Err(Error::Parse { column: 3, .. })));
        assert!("1+sqrt(2)+sqrt(3)".parse::<QuadNum>().is_err());
        assert!("abc".parse::<QuadNum>().is_err());
        assert!("1 2".parse::<QuadNum>().is_err());
    }

    #[test]
    fn floor_and_between() {
        assert_eq!(q("sqrt(2)").floor(), BigInt::from(1));
        assert_eq!(q("-sqrt(2)").floor(), BigInt::from(-2));
        assert_eq!(q("7/2").floor(), BigInt::from(3));
        assert_eq!(q("3-2*sqrt(2)").floor(), BigInt::from(0));
        let lo = q("sqrt(2)").to_sqrt_expr();
        let hi = SqrtExpr::new(int(0), int(1), int(1), rat(20001, 10000)).unwrap();
        let mid = SqrtExpr::rational(rational_between(&lo, &hi));
        assert!(lo < mid && mid < hi);
    }

    #[test]
    fn comparison_survives_cancellation() {
        // 1414213562373095 - 10^15*sqrt(2) is about -0.0488, far below f64 resolution of either term
        let big = Rational::from_integer(BigInt::from(10u64).pow(15));
        let x = SqrtExpr::from_parts(Rational::from_integer(1414213562373095u64.into()), -big, int(2));
        assert!(x < SqrtExpr::rational(int(0)));
        assert!(x > SqrtExpr::rational(rat(-1, 10)));
        assert!(x < SqrtExpr::rational(rat(-1, 25)));
    }
}
