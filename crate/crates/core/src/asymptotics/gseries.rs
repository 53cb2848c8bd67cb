use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::faulhaber::big_binomial;
use crate::combin::int_pow;
use crate::factor::irreducible_counts;

/// Exact truncation of the normalized m-th derivative at s = 1 of the
/// square-free Dirichlet series
///   G(s) = sum_L mu(L) / (|L|^s prod_{P|L} (1 + |P|)),
/// namely sum over square-free monic L with deg L <= cutoff of
/// mu(L) deg(L)^m / (|L| prod(1+|P|)).
#[derive(Debug, Clone)]
pub struct GSeriesValue {
    pub m: u32,
    pub cutoff: usize,
    pub partial: BigRational,
    pub tail_bound: f64,
}

fn mul_trunc(a: &[BigRational], b: &[BigRational], n: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); n + 1];
    for (i, ai) in a.iter().enumerate().take(n + 1) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(n + 1 - i) {
            if !bj.is_zero() {
                out[i + j] += ai * bj;
            }
        }
    }
    out
}

/// Per-degree aggregation of mu(L) / prod_{P|L}(1+|P|) over square-free
/// monic L: coefficient of z^l in the product over irreducibles of
/// (1 - z^{deg P} / (1 + |P|)), grouped by degree so each degree d
/// contributes one binomially expanded factor.
pub fn mu_weight_by_degree(q: u64, n: usize) -> Vec<BigRational> {
    let counts = irreducible_counts(q, n);
    let mut acc = vec![BigRational::zero(); n + 1];
    acc[0] = BigRational::one();
    for d in 1..=n {
        let x = BigRational::new(BigInt::one(), BigInt::from(q.pow(d as u32) + 1));
        let mut factor = vec![BigRational::zero(); n + 1];
        for j in 0..=(n / d) {
            let c = BigRational::from_integer(big_binomial(counts[d], j as u64));
            let sign = if j.is_multiple_of(2) { 1 } else { -1 };
            factor[j * d] = c * x.pow(j as i32) * BigRational::from_integer(BigInt::from(sign));
        }
        acc = mul_trunc(&acc, &factor, n);
    }
    acc
}

/// Per-degree aggregation of prod_{P|L}(1 + |P|^{-1})^{-1} over all monic
/// L: coefficient of z^l in the product over irreducibles of
/// 1 + (|P|/(1+|P|)) (z^d + z^{2d} + ...). An independent generating
/// product from [`mu_weight_by_degree`]; the closed identity tying the two
/// together is what `coprime_weight_identity` tests.
pub fn coprime_weight_by_degree(q: u64, n: usize) -> Vec<BigRational> {
    let counts = irreducible_counts(q, n);
    let mut acc = vec![BigRational::zero(); n + 1];
    acc[0] = BigRational::one();
    for d in 1..=n {
        let x = BigRational::new(
            BigInt::from(q.pow(d as u32)),
            BigInt::from(q.pow(d as u32) + 1),
        );
        // a_d(z) = x * (z^d + z^{2d} + ...)
        let mut a_d = vec![BigRational::zero(); n + 1];
        let mut k = d;
        while k <= n {
            a_d[k] = x.clone();
            k += d;
        }
        // (1 + a_d)^{pi_d} truncated; a_d has valuation d so only
        // j <= n/d powers contribute.
        let mut factor = vec![BigRational::zero(); n + 1];
        factor[0] = BigRational::one();
        let mut power = vec![BigRational::zero(); n + 1];
        power[0] = BigRational::one();
        for j in 1..=(n / d) {
            power = mul_trunc(&power, &a_d, n);
            let c = BigRational::from_integer(big_binomial(counts[d], j as u64));
            if c.is_zero() {
                break;
            }
            for (f, p) in factor.iter_mut().zip(&power) {
                *f += &c * p;
            }
        }
        acc = mul_trunc(&acc, &factor, n);
    }
    acc
}

/// Upper bound for |sum_{l > cutoff} l^m c_l q^{-l}|, using |c_l| < 1
/// (each of the < q^l square-free terms is below q^{-l} in size).
pub fn g_tail_bound(q: u64, m: u32, cutoff: usize) -> f64 {
    let mut total = 0.0f64;
    let mut last = 0.0f64;
    for l in (cutoff + 1)..(cutoff + 600) {
        last = (l as f64).powi(m as i32) * (q as f64).powi(-(l as i32));
        total += last;
        if last < total * 1e-18 {
            break;
        }
    }
    total + last
}

pub fn g_deriv_series(q: u64, m: u32, cutoff: usize) -> GSeriesValue {
    let c = mu_weight_by_degree(q, cutoff);
    GSeriesValue {
        m,
        cutoff,
        partial: dirichlet_partial_exact(q, &c, m),
        tail_bound: g_tail_bound(q, m, cutoff),
    }
}

/// sum_l l^m c_l q^{-l} as an exact rational (l^0 = 1 at l = 0).
pub fn dirichlet_partial_exact(q: u64, c: &[BigRational], m: u32) -> BigRational {
    let mut acc = BigRational::zero();
    for (l, cl) in c.iter().enumerate() {
        if cl.is_zero() {
            continue;
        }
        let weight = BigRational::new(
            BigInt::from(int_pow(l as i128, m)),
            BigInt::from(q).pow(l as u32),
        );
        acc += cl * weight;
    }
    acc
}

/// Float evaluation of the same truncation at arbitrary s, for
/// finite-difference cross-checks.
pub fn dirichlet_partial_f64(q: u64, c: &[BigRational], m: u32, s: f64) -> f64 {
    let mut acc = 0.0;
    for (l, cl) in c.iter().enumerate() {
        if cl.is_zero() {
            continue;
        }
        // powi(0) = 1.0 even at the l = 0 term, matching l^0 = 1.
        acc += (l as f64).powi(m as i32)
            * cl.to_f64().unwrap_or(f64::NAN)
            * (q as f64).powf(-(l as f64) * s);
    }
    acc
}

/// Truncated Euler product for G(1) over irreducibles of degree <= cutoff,
/// with a heuristic-geometric bound on the omitted factors. Independent
/// route against the Dirichlet-series truncation.
pub fn euler_product_g1(q: u64, cutoff: usize) -> (f64, f64) {
    let counts = irreducible_counts(q, cutoff);
    let mut log_value = 0.0f64;
    for d in 1..=cutoff {
        let norm = (q as f64).powi(d as i32);
        let x = 1.0 / (norm * (1.0 + norm));
        log_value += counts[d] as f64 * (-x).ln_1p();
    }
    let value = log_value.exp();
    // Omitted: sum_{d > cutoff} pi_d |ln(1 - x_d)| with pi_d <= q^d / d and
    // x_d < q^{-2d}.
    let qf = q as f64;
    let log_tail = 2.0 * qf.powi(-(cutoff as i32 + 1)) / ((cutoff as f64 + 1.0) * (1.0 - 1.0 / qf));
    (value, value.abs() * log_tail * 2.0)
}

/// Exact two-route identity: the coprime-weight sum at a single degree
/// equals q^l times the mu-weight Dirichlet partial up to degree l.
pub fn coprime_weight_identity(q: u64, l: usize) -> bool {
    let lhs = coprime_weight_by_degree(q, l)[l].clone();
    let c = mu_weight_by_degree(q, l);
    let mut rhs = BigRational::zero();
    for (j, cj) in c.iter().enumerate() {
        rhs += cj / BigRational::from_integer(BigInt::from(q).pow(j as u32));
    }
    rhs *= BigRational::from_integer(BigInt::from(q).pow(l as u32));
    lhs == rhs
}
