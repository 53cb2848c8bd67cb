use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::combin::int_pow;

/// Second Bernoulli numbers B^+_0..=n (the convention with B^+_1 = +1/2).
pub fn second_bernoulli(n: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(n + 1);
    b.push(BigRational::one());
    for m in 1..=n {
        // Standard recurrence for the first convention, sign-flipped at 1.
        let mut acc = BigRational::zero();
        for (j, bj) in b.iter().enumerate() {
            acc += BigRational::from_integer(big_binomial(m as u64 + 1, j as u64)) * bj;
        }
        let val = -acc / BigRational::from_integer(BigInt::from(m as i64 + 1));
        b.push(val);
    }
    if n >= 1 {
        b[1] = BigRational::new(BigInt::one(), BigInt::from(2));
    }
    b
}

pub fn bernoulli_plus(l: usize) -> BigRational {
    second_bernoulli(l).pop().unwrap()
}

pub fn big_binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Coefficients of the power-sum polynomial: sum_{l=1}^{n} l^m =
/// sum_{a=1}^{m+1} j_m(a) n^a, with zero constant term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaulhaberCoeffs {
    pub m: u32,
    /// j[a-1] is the coefficient of n^a, a = 1..=m+1.
    pub j: Vec<BigRational>,
}

pub fn faulhaber(m: u32) -> FaulhaberCoeffs {
    let b = second_bernoulli(m as usize);
    let denom = BigRational::from_integer(BigInt::from(m as i64 + 1));
    let mut j = vec![BigRational::zero(); m as usize + 1];
    for (l, bl) in b.iter().enumerate() {
        // Power of n is m + 1 - l.
        let a = m as usize + 1 - l;
        j[a - 1] = BigRational::from_integer(big_binomial(m as u64 + 1, l as u64)) * bl / &denom;
    }
    FaulhaberCoeffs { m, j }
}

impl FaulhaberCoeffs {
    /// j_m(a), 1-based; zero outside 1..=m+1.
    pub fn coeff(&self, a: usize) -> BigRational {
        if a == 0 || a > self.j.len() {
            BigRational::zero()
        } else {
            self.j[a - 1].clone()
        }
    }

    /// J_m(n): the power sum evaluated through the coefficients.
    pub fn eval(&self, n: u64) -> BigRational {
        let nr = BigInt::from(n);
        let mut acc = BigRational::zero();
        let mut pow = BigInt::one();
        for c in &self.j {
            pow = &pow * &nr;
            acc += c * BigRational::from_integer(pow.clone());
        }
        acc
    }
}

/// Brute-force power sum, the oracle for the coefficient route.
pub fn power_sum_brute(m: u32, n: u64) -> BigRational {
    let mut acc = BigInt::zero();
    for l in 1..=n as i128 {
        acc += BigInt::from(int_pow(l, m));
    }
    BigRational::from_integer(acc)
}

/// Exact check of the three-term rearrangement
/// sum_{d <= l <= H} l^m = J_m(H) + d^m - sum_a j_m(a) d^a
/// used when a degree-limited sum is completed to a full one.
pub fn faulhaber_split_check(m: u32, h: u64, l_deg: u64) -> bool {
    let hh = h / 2;
    if l_deg > hh {
        return true;
    }
    let mut lhs = BigInt::zero();
    for l in l_deg as i128..=hh as i128 {
        lhs += BigInt::from(int_pow(l, m));
    }
    let fa = faulhaber(m);
    let mut rhs = fa.eval(hh) + BigRational::from_integer(BigInt::from(int_pow(l_deg as i128, m)));
    let dr = BigInt::from(l_deg);
    let mut pow = BigInt::one();
    for a in 1..=(m as usize + 1) {
        pow = &pow * &dr;
        rhs -= fa.coeff(a) * BigRational::from_integer(pow.clone());
    }
    rhs == BigRational::from_integer(lhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli_plus(0), r(1, 1));
        assert_eq!(bernoulli_plus(1), r(1, 2));
        assert_eq!(bernoulli_plus(2), r(1, 6));
        assert_eq!(bernoulli_plus(3), r(0, 1));
        assert_eq!(bernoulli_plus(4), r(-1, 30));
    }

    #[test]
    fn faulhaber_coefficient_vectors() {
        assert_eq!(faulhaber(1).j, vec![r(1, 2), r(1, 2)]);
        assert_eq!(faulhaber(2).j, vec![r(1, 6), r(1, 2), r(1, 3)]);
        assert_eq!(faulhaber(3).j, vec![r(0, 1), r(1, 4), r(1, 2), r(1, 4)]);
    }

    #[test]
    fn power_sum_example() {
        // 1 + 4 + 9 + 16
        assert_eq!(faulhaber(2).eval(4), r(30, 1));
    }

    #[test]
    fn matches_brute_force() {
        for m in 0..=6 {
            let fa = faulhaber(m);
            for n in 0..=100 {
                assert_eq!(fa.eval(n), power_sum_brute(m, n), "m={m} n={n}");
            }
        }
    }

    #[test]
    fn split_identity() {
        // m = 0: both sides count the range.
        assert!(faulhaber_split_check(0, 9, 0));
        // m = 2, h = 9, l_deg = 2: 4 + 9 + 16 = 29 both ways.
        assert!(faulhaber_split_check(2, 9, 2));
        for m in 0..=4 {
            for h in 0..=12 {
                for l_deg in 0..=h / 2 {
                    assert!(faulhaber_split_check(m, h, l_deg), "m={m} h={h} d={l_deg}");
                }
            }
        }
    }
}
