use crate::error::{Error, Result};

/// The prime coefficient field F_q. Only odd prime q is supported; the
/// ensembles and character theory below all assume odd characteristic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldCtx {
    q: u64,
}

impl FieldCtx {
    pub fn new(q: u64) -> Result<Self> {
        if q < 3 || q.is_multiple_of(2) || !is_prime(q) {
            return Err(Error::BadField(q));
        }
        Ok(FieldCtx { q })
    }

    #[inline]
    pub fn q(&self) -> u64 {
        self.q
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        // q stays far below 2^32 in practice, so the product cannot overflow.
        (a * b) % self.q
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.q;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by Fermat's little theorem.
    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(!a.is_multiple_of(self.q), "inverse of zero");
        self.pow(a, self.q - 2)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_odd_primes() {
        for q in [3, 5, 7, 11, 101] {
            assert!(FieldCtx::new(q).is_ok());
        }
    }

    #[test]
    fn rejects_non_odd_primes() {
        for q in [0, 1, 2, 4, 9, 15, 21] {
            assert!(FieldCtx::new(q).is_err());
        }
    }

    #[test]
    fn inverse_round_trips() {
        let f = FieldCtx::new(7).unwrap();
        for a in 1..7 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
    }
}
