use std::collections::BTreeMap;

use crate::factor::irreducible_counts;
use crate::ratpoly::{RatFunc, RatPoly};

/// Kernel of the n-th log-derivative sum as a rational function of
/// f = |P|^s (|P| + 1): starting from 1/(1 - f), each step applies
/// -f d/df, which is what dividing d/ds by -ln q does per prime.
pub fn h_kernel(n: u32) -> RatFunc {
    assert!(n >= 1);
    let mut r = RatFunc::new(RatPoly::one(), RatPoly::from_i64(&[1, -1]));
    for _ in 1..n {
        let d = r.derivative();
        r = RatFunc::new(d.num.mul(&RatPoly::from_i64(&[0, -1])), d.den);
    }
    r
}

/// H_n(s) truncated over irreducibles of degree <= cutoff:
/// sum_P deg(P)^n R_n(f_P(s)), with all primes of one degree sharing the
/// same kernel value.
pub fn h_n_eval(q: u64, n: u32, s: f64, cutoff: usize) -> f64 {
    let kernel = h_kernel(n);
    h_eval_with_kernel(q, &kernel, n, s, cutoff)
}

fn h_eval_with_kernel(q: u64, kernel: &RatFunc, n: u32, s: f64, cutoff: usize) -> f64 {
    let counts = irreducible_counts(q, cutoff);
    let qf = q as f64;
    let mut acc = 0.0;
    for d in 1..=cutoff {
        let norm = qf.powi(d as i32);
        let f = qf.powf(s * d as f64) * (norm + 1.0);
        acc += counts[d] as f64 * (d as f64).powi(n as i32) * kernel.eval_f64(f);
    }
    acc
}

/// The first five sums in closed form, hard-coded independently of the
/// kernel recursion.
pub fn h_closed_eval(q: u64, n: u32, s: f64, cutoff: usize) -> f64 {
    let counts = irreducible_counts(q, cutoff);
    let qf = q as f64;
    let mut acc = 0.0;
    for d in 1..=cutoff {
        let norm = qf.powi(d as i32);
        let f = qf.powf(s * d as f64) * (norm + 1.0);
        let om = 1.0 - f;
        let val = match n {
            1 => 1.0 / om,
            2 => -f / (om * om),
            3 => f * (1.0 + f) / om.powi(3),
            4 => -f * (1.0 + 4.0 * f + f * f) / om.powi(4),
            5 => f * (1.0 + 11.0 * f + 11.0 * f * f + f.powi(3)) / om.powi(5),
            _ => panic!("closed forms recorded through n = 5"),
        };
        acc += counts[d] as f64 * (d as f64).powi(n as i32) * val;
    }
    acc
}

/// Formal element G * sum coeff * prod H_i, encoded as a map from the
/// sorted multiset of H-indices to its integer coefficient.
pub type PhiExpr = BTreeMap<Vec<u32>, i128>;

/// n-fold application of the derivation phi with phi(G) = G H_1 and
/// phi(H_i) = H_{i+1}, starting from G (the empty product).
pub fn phi_power_expr(n: u32) -> PhiExpr {
    let mut expr: PhiExpr = BTreeMap::new();
    expr.insert(Vec::new(), 1);
    for _ in 0..n {
        let mut next: PhiExpr = BTreeMap::new();
        for (monomial, coef) in &expr {
            // Product rule across the leading G: G -> G H_1.
            let mut with_h1 = monomial.clone();
            with_h1.push(1);
            with_h1.sort_unstable();
            *next.entry(with_h1).or_insert(0) += coef;
            // And across each H factor: H_i -> H_{i+1}.
            for pos in 0..monomial.len() {
                if pos > 0 && monomial[pos] == monomial[pos - 1] {
                    continue; // count each distinct index once...
                }
                let count = monomial.iter().filter(|&&x| x == monomial[pos]).count() as i128;
                let mut bumped = monomial.clone();
                bumped[pos] += 1;
                bumped.sort_unstable();
                *next.entry(bumped).or_insert(0) += coef * count;
            }
        }
        expr = next;
    }
    expr
}

/// Numeric value of phi^n(G)(s) = G^{(n)}(s) / (-ln q)^n from the operator
/// expansion, given a truncated value for G(s) itself.
pub fn phi_g_eval(q: u64, n: u32, s: f64, cutoff: usize, g_value: f64) -> f64 {
    let expr = phi_power_expr(n);
    let max_order = expr.keys().flatten().copied().max().unwrap_or(0);
    let h: Vec<f64> = (0..=max_order)
        .map(|k| {
            if k == 0 {
                0.0
            } else {
                h_n_eval(q, k, s, cutoff)
            }
        })
        .collect();
    let mut acc = 0.0;
    for (monomial, coef) in &expr {
        let prod: f64 = monomial.iter().map(|&i| h[i as usize]).product();
        acc += *coef as f64 * prod;
    }
    g_value * acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_degree_one_value() {
        // Only the three linear primes at q = 3, s = 1: f = 3 * 4 = 12,
        // H_1 restricted there is 3 / (1 - 12) = -3/11.
        let v = h_n_eval(3, 1, 1.0, 1);
        assert!((v - (-3.0 / 11.0)).abs() < 1e-15);
    }

    #[test]
    fn kernel_matches_closed_forms() {
        for n in 1..=5u32 {
            for &s in &[0.8f64, 1.0, 1.5] {
                let a = h_n_eval(3, n, s, 12);
                let b = h_closed_eval(3, n, s, 12);
                assert!(
                    (a - b).abs() <= 1e-10 * (1.0 + b.abs()),
                    "n={n} s={s}: {a} vs {b}"
                );
            }
        }
    }

    #[test]
    fn phi_expansion_small_orders() {
        // phi(G) = G H_1; phi^2(G) = G (H_1^2 + H_2);
        // phi^3(G) = G (H_1^3 + 3 H_1 H_2 + H_3).
        let e1 = phi_power_expr(1);
        assert_eq!(e1.into_iter().collect::<Vec<_>>(), vec![(vec![1], 1)]);
        let e2 = phi_power_expr(2);
        assert_eq!(
            e2.into_iter().collect::<Vec<_>>(),
            vec![(vec![1, 1], 1), (vec![2], 1)]
        );
        let e3 = phi_power_expr(3);
        assert_eq!(
            e3.into_iter().collect::<Vec<_>>(),
            vec![(vec![1, 1, 1], 1), (vec![1, 2], 3), (vec![3], 1)]
        );
    }
}
