use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact element `a + b * q^{-1/2}` of the real quadratic field Q(sqrt q).
///
/// Every central value and derivative of the L-polynomials handled here
/// lands in this ring, because q^{-n/2} is rational for even n and a
/// rational multiple of q^{-1/2} for odd n. Keeping the two components as
/// exact rationals turns "two formulas agree" into exact equality tests;
/// the float embedding is only used at report boundaries.
#[derive(Clone, PartialEq, Eq)]
pub struct QuadValue {
    q: u64,
    a: BigRational,
    b: BigRational,
}

impl QuadValue {
    pub fn new(q: u64, a: BigRational, b: BigRational) -> Self {
        QuadValue { q, a, b }
    }

    pub fn zero(q: u64) -> Self {
        Self::new(q, BigRational::zero(), BigRational::zero())
    }

    pub fn one(q: u64) -> Self {
        Self::new(q, BigRational::one(), BigRational::zero())
    }

    pub fn from_int(q: u64, n: i64) -> Self {
        Self::from_rational(q, BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(q: u64, a: BigRational) -> Self {
        Self::new(q, a, BigRational::zero())
    }

    /// q^{-n/2} as an exact element: rational for even n, rational times
    /// q^{-1/2} for odd n.
    pub fn q_pow_neg_half(q: u64, n: u32) -> Self {
        let half = BigRational::new(BigInt::one(), BigInt::from(q).pow(n / 2));
        if n.is_multiple_of(2) {
            Self::new(q, half, BigRational::zero())
        } else {
            Self::new(q, BigRational::zero(), half)
        }
    }

    /// q^{n/2} for n >= 0.
    pub fn q_pow_half(q: u64, n: u32) -> Self {
        let big = BigRational::from_integer(BigInt::from(q).pow(n / 2));
        if n.is_multiple_of(2) {
            Self::new(q, big, BigRational::zero())
        } else {
            // q^{n/2} = q^{(n+1)/2} * q^{-1/2}
            Self::new(
                q,
                BigRational::zero(),
                BigRational::from_integer(BigInt::from(q).pow(n / 2 + 1)),
            )
        }
    }

    #[inline]
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn surd_part(&self) -> &BigRational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    #[inline]
    fn check(&self, rhs: &QuadValue) {
        assert_eq!(self.q, rhs.q, "mixed Q(sqrt q) fields");
    }

    pub fn add(&self, rhs: &QuadValue) -> QuadValue {
        self.check(rhs);
        QuadValue::new(self.q, &self.a + &rhs.a, &self.b + &rhs.b)
    }

    pub fn sub(&self, rhs: &QuadValue) -> QuadValue {
        self.check(rhs);
        QuadValue::new(self.q, &self.a - &rhs.a, &self.b - &rhs.b)
    }

    pub fn neg(&self) -> QuadValue {
        QuadValue::new(self.q, -&self.a, -&self.b)
    }

    /// (a + b s)(c + d s) = (ac + bd/q) + (ad + bc) s, where s^2 = 1/q.
    pub fn mul(&self, rhs: &QuadValue) -> QuadValue {
        self.check(rhs);
        let qr = BigRational::from_integer(BigInt::from(self.q));
        let a = &self.a * &rhs.a + &self.b * &rhs.b / &qr;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        QuadValue::new(self.q, a, b)
    }

    pub fn mul_rational(&self, c: &BigRational) -> QuadValue {
        QuadValue::new(self.q, &self.a * c, &self.b * c)
    }

    pub fn mul_int(&self, c: i64) -> QuadValue {
        self.mul_rational(&BigRational::from_integer(BigInt::from(c)))
    }

    /// Division via the conjugate: the norm a^2 - b^2/q vanishes only at 0
    /// since q^{-1/2} is irrational.
    pub fn div(&self, rhs: &QuadValue) -> Result<QuadValue> {
        self.check(rhs);
        let qr = BigRational::from_integer(BigInt::from(self.q));
        let norm = &rhs.a * &rhs.a - &rhs.b * &rhs.b / &qr;
        if norm.is_zero() {
            return Err(Error::QuadDivisionByZero);
        }
        let conj = QuadValue::new(self.q, rhs.a.clone(), -&rhs.b);
        Ok(self.mul(&conj).mul_rational(&norm.recip()))
    }

    pub fn pow(&self, n: u32) -> QuadValue {
        let mut acc = QuadValue::one(self.q);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b / (self.q as f64).sqrt()
    }

    pub fn abs_f64(&self) -> f64 {
        self.to_f64().abs()
    }
}

impl fmt::Display for QuadValue {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(out, "{}", self.a)
        } else if self.a.is_zero() {
            write!(out, "{}*{}^(-1/2)", self.b, self.q)
        } else {
            let sign = if self.b.is_negative() { "-" } else { "+" };
            write!(
                out,
                "{} {} {}*{}^(-1/2)",
                self.a,
                sign,
                self.b.abs(),
                self.q
            )
        }
    }
}

impl fmt::Debug for QuadValue {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "QuadValue({}, {}; q={})", self.a, self.b, self.q)
    }
}

/// Format a rational as `numerator/denominator`, always with the slash, so
/// report files round-trip exactly.
pub fn rational_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}
