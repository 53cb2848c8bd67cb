use std::fmt;

use crate::error::{Error, Result};
use crate::field::FieldCtx;

/// Polynomial over F_q, coefficients stored lowest degree first.
///
/// The zero polynomial is the empty coefficient vector, so `degree()`
/// returns `None` for it rather than a numeric sentinel.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FqPoly {
    q: u64,
    coeffs: Vec<u64>,
}

impl FqPoly {
    pub fn new(field: FieldCtx, coeffs: Vec<u64>) -> Self {
        let q = field.q();
        let mut coeffs: Vec<u64> = coeffs.into_iter().map(|c| c % q).collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FqPoly { q, coeffs }
    }

    pub fn zero(field: FieldCtx) -> Self {
        FqPoly {
            q: field.q(),
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: FieldCtx) -> Self {
        Self::constant(field, 1)
    }

    pub fn constant(field: FieldCtx, c: u64) -> Self {
        Self::new(field, vec![c])
    }

    /// The monomial `t`.
    pub fn t(field: FieldCtx) -> Self {
        Self::new(field, vec![0, 1])
    }

    /// The linear polynomial `t + a`.
    pub fn t_plus(field: FieldCtx, a: u64) -> Self {
        Self::new(field, vec![a, 1])
    }

    pub fn field(&self) -> FieldCtx {
        // Valid by construction.
        FieldCtx::new(self.q).expect("field validated at construction")
    }

    #[inline]
    pub fn q(&self) -> u64 {
        self.q
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    #[inline]
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    #[inline]
    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn leading_coeff(&self) -> Option<u64> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff() == Some(1)
    }

    #[inline]
    fn check_field(&self, other: &FqPoly) {
        assert_eq!(self.q, other.q, "polynomial operands over different fields");
    }

    pub fn add(&self, rhs: &FqPoly) -> FqPoly {
        self.check_field(rhs);
        let f = self.field();
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| f.add(self.coeff(i), rhs.coeff(i))).collect();
        FqPoly::new(f, coeffs)
    }

    pub fn sub(&self, rhs: &FqPoly) -> FqPoly {
        self.check_field(rhs);
        let f = self.field();
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| f.sub(self.coeff(i), rhs.coeff(i))).collect();
        FqPoly::new(f, coeffs)
    }

    pub fn neg(&self) -> FqPoly {
        let f = self.field();
        FqPoly::new(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn mul(&self, rhs: &FqPoly) -> FqPoly {
        self.check_field(rhs);
        let f = self.field();
        if self.is_zero() || rhs.is_zero() {
            return FqPoly::zero(f);
        }
        let mut coeffs = vec![0u64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = f.add(coeffs[i + j], f.mul(a, b));
            }
        }
        FqPoly::new(f, coeffs)
    }

    pub fn mul_scalar(&self, c: u64) -> FqPoly {
        let f = self.field();
        FqPoly::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// Euclidean division: `self = quot * rhs + rem` with `deg rem < deg rhs`.
    pub fn divrem(&self, rhs: &FqPoly) -> Result<(FqPoly, FqPoly)> {
        self.check_field(rhs);
        let f = self.field();
        let d = rhs.degree().ok_or(Error::DivisionByZero)?;
        let n = match self.degree() {
            None => return Ok((FqPoly::zero(f), FqPoly::zero(f))),
            Some(n) if n < d => return Ok((FqPoly::zero(f), self.clone())),
            Some(n) => n,
        };
        let lc_inv = f.inv(rhs.leading_coeff().unwrap());
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; n - d + 1];
        for k in (d..=n).rev() {
            let c = f.mul(rem[k], lc_inv);
            if c == 0 {
                continue;
            }
            quot[k - d] = c;
            for (i, &b) in rhs.coeffs.iter().enumerate() {
                rem[k - d + i] = f.sub(rem[k - d + i], f.mul(c, b));
            }
        }
        rem.truncate(d);
        Ok((FqPoly::new(f, quot), FqPoly::new(f, rem)))
    }

    pub fn rem(&self, rhs: &FqPoly) -> Result<FqPoly> {
        Ok(self.divrem(rhs)?.1)
    }

    /// Monic greatest common divisor; gcd(0, 0) = 0.
    pub fn gcd(&self, rhs: &FqPoly) -> FqPoly {
        self.check_field(rhs);
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Scale to leading coefficient 1 (identity on the zero polynomial).
    pub fn monic(&self) -> FqPoly {
        match self.leading_coeff() {
            None | Some(1) => self.clone(),
            Some(lc) => self.mul_scalar(self.field().inv(lc)),
        }
    }

    /// Formal derivative. In characteristic p the term `c t^n` dies when p | n.
    pub fn derivative(&self) -> FqPoly {
        let f = self.field();
        if self.coeffs.len() <= 1 {
            return FqPoly::zero(f);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(c, i as u64 % self.q))
            .collect();
        FqPoly::new(f, coeffs)
    }

    /// Evaluate at a field element by Horner's rule.
    pub fn eval(&self, x: u64) -> u64 {
        let f = self.field();
        let x = x % self.q;
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = f.add(f.mul(acc, x), c);
        }
        acc
    }

    /// Square-free test via gcd(f, f').
    ///
    /// If f' = 0 then f lies in F_q[t^p], hence is a p-th power: square-free
    /// only when constant.
    pub fn is_squarefree(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if self.degree() == Some(0) {
            return Ok(true);
        }
        let d = self.derivative();
        if d.is_zero() {
            return Ok(false);
        }
        Ok(self.gcd(&d).degree() == Some(0))
    }

    /// Exact square root of a monic polynomial, if one exists.
    ///
    /// Coefficients are matched from the top down; since q is odd, 2 is
    /// invertible and each coefficient of the root is determined uniquely.
    pub fn sqrt(&self) -> Option<FqPoly> {
        if !self.is_monic() {
            return None;
        }
        let f = self.field();
        let n = self.degree()?;
        if n % 2 != 0 {
            return None;
        }
        let m = n / 2;
        let inv2 = f.inv(2);
        let mut h = vec![0u64; m + 1];
        h[m] = 1;
        for k in (0..m).rev() {
            // Coefficient of t^{m+k} in h^2 is 2 h_k h_m + sum over interior pairs.
            let mut interior = 0u64;
            for i in (k + 1)..m {
                let j = m + k - i;
                if j <= i {
                    break;
                }
                // i < j guaranteed; count the symmetric pair once, doubled.
                interior = f.add(interior, f.mul(2, f.mul(h[i], h[j])));
            }
            if (m + k) % 2 == 0 {
                let mid = (m + k) / 2;
                if mid > k && mid < m {
                    interior = f.add(interior, f.mul(h[mid], h[mid]));
                }
            }
            h[k] = f.mul(f.sub(self.coeff(m + k), interior), inv2);
        }
        let root = FqPoly::new(f, h);
        if root.mul(&root) == *self {
            Some(root)
        } else {
            None
        }
    }
}

impl fmt::Display for FqPoly {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(out, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(out, " + ")?;
            }
            first = false;
            match i {
                0 => write!(out, "{c}")?,
                1 if c == 1 => write!(out, "t")?,
                1 => write!(out, "{c}t")?,
                _ if c == 1 => write!(out, "t^{i}")?,
                _ => write!(out, "{c}t^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for FqPoly {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{self} (mod {})", self.q)
    }
}
