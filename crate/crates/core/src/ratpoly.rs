use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::quad::QuadValue;

/// Dense polynomial over Q, lowest degree first, trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().map(Zero::is_zero) == Some(true) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        RatPoly::new(vec![BigRational::one()])
    }

    pub fn x() -> Self {
        RatPoly::new(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        RatPoly::new(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn add(&self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }

    pub fn sub(&self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }

    pub fn mul(&self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::new(out)
    }

    pub fn scale(&self, c: &BigRational) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn divrem(&self, rhs: &RatPoly) -> Result<(RatPoly, RatPoly)> {
        let d = rhs.degree().ok_or(Error::DivisionByZero)?;
        let n = match self.degree() {
            None => return Ok((RatPoly::zero(), RatPoly::zero())),
            Some(n) if n < d => return Ok((RatPoly::zero(), self.clone())),
            Some(n) => n,
        };
        let lc = rhs.coeff(d);
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigRational::zero(); n - d + 1];
        for k in (d..=n).rev() {
            if rem[k].is_zero() {
                continue;
            }
            let c = &rem[k] / &lc;
            for (i, b) in rhs.coeffs.iter().enumerate() {
                let v = &c * b;
                rem[k - d + i] -= v;
            }
            quot[k - d] = c;
        }
        rem.truncate(d);
        Ok((RatPoly::new(quot), RatPoly::new(rem)))
    }

    /// Monic gcd over Q.
    pub fn gcd(&self, rhs: &RatPoly) -> RatPoly {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let r = a.divrem(&b).expect("nonzero divisor").1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> RatPoly {
        match self.degree() {
            None => RatPoly::zero(),
            Some(d) => self.scale(&self.coeff(d).recip()),
        }
    }

    pub fn derivative(&self) -> RatPoly {
        if self.coeffs.len() <= 1 {
            return RatPoly::zero();
        }
        RatPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn eval_quad(&self, x: &QuadValue) -> QuadValue {
        let mut acc = QuadValue::zero(x.q());
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(&QuadValue::from_rational(x.q(), c.clone()));
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.to_f64().unwrap_or(f64::NAN);
        }
        acc
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Square-free factorization over Q (characteristic zero, so the plain
    /// gcd ladder works). Returns (factor, multiplicity) pairs with
    /// pairwise-coprime square-free factors.
    pub fn squarefree_decomposition(&self) -> Vec<(RatPoly, u32)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let mut c = f.gcd(&f.derivative());
        let mut w = f.divrem(&c).expect("gcd divides").0;
        let mut mult = 1u32;
        while w.degree().unwrap_or(0) > 0 {
            let y = w.gcd(&c);
            let piece = w.divrem(&y).expect("gcd divides").0;
            if piece.degree().unwrap_or(0) > 0 {
                out.push((piece, mult));
            }
            w = y;
            c = c.divrem(&w).expect("gcd divides").0;
            mult += 1;
        }
        out
    }
}

/// Quotient of two rational polynomials. Only what the Euler-operator
/// calculus needs: derivative, x * d/dx, and exact evaluation.
#[derive(Debug, Clone)]
pub struct RatFunc {
    pub num: RatPoly,
    pub den: RatPoly,
}

impl RatFunc {
    pub fn new(num: RatPoly, den: RatPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        RatFunc { num, den }.reduced()
    }

    fn reduced(self) -> Self {
        let g = self.num.gcd(&self.den);
        if g.degree().unwrap_or(0) == 0 {
            return self;
        }
        let num = self.num.divrem(&g).expect("gcd divides").0;
        let den = self.den.divrem(&g).expect("gcd divides").0;
        RatFunc { num, den }
    }

    /// Quotient-rule derivative.
    pub fn derivative(&self) -> RatFunc {
        let num = self
            .num
            .derivative()
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative()));
        let den = self.den.mul(&self.den);
        RatFunc::new(num, den)
    }

    /// The Euler operator x * d/dx.
    pub fn euler(&self) -> RatFunc {
        let d = self.derivative();
        RatFunc::new(d.num.mul(&RatPoly::x()), d.den)
    }

    pub fn eval_quad(&self, x: &QuadValue) -> Result<QuadValue> {
        self.num.eval_quad(x).div(&self.den.eval_quad(x))
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.num.eval_f64(x) / self.den.eval_f64(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn divrem_and_gcd() {
        // (x^2 - 1) = (x - 1)(x + 1)
        let f = RatPoly::from_i64(&[-1, 0, 1]);
        let g = RatPoly::from_i64(&[-1, 1]);
        let (q, rem) = f.divrem(&g).unwrap();
        assert_eq!(q, RatPoly::from_i64(&[1, 1]));
        assert!(rem.is_zero());
        assert_eq!(f.gcd(&g), g.monic());
    }

    #[test]
    fn squarefree_decomposition_splits_multiplicities() {
        // (x - 1)^2 (x + 2)
        let f = RatPoly::from_i64(&[-1, 1]);
        let g = RatPoly::from_i64(&[2, 1]);
        let prod = f.mul(&f).mul(&g);
        let parts = prod.squarefree_decomposition();
        assert_eq!(parts, vec![(g.clone(), 1), (f.clone(), 2)]);
    }

    #[test]
    fn euler_operator_on_quotient() {
        // x d/dx of 1/(1 - x) is x/(1 - x)^2
        let f = RatFunc::new(RatPoly::one(), RatPoly::from_i64(&[1, -1]));
        let e = f.euler();
        let at = r(1, 3);
        let expect = r(1, 3) / (r(2, 3) * r(2, 3));
        assert_eq!(e.num.eval_rational(&at) / e.den.eval_rational(&at), expect);
    }
}
