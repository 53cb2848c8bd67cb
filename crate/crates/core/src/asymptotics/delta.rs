use num_bigint::BigInt;
use num_rational::BigRational;

use crate::quad::QuadValue;
use crate::ratpoly::{RatFunc, RatPoly};

/// Normalized central derivatives of the even-parity correction factor
/// delta(s) = (1 - q^{-s}) / (1 - q^{s-1}): terms[m] = delta^(m)(1/2) /
/// (-ln q)^m, exact in Q(sqrt q).
#[derive(Debug, Clone)]
pub struct DeltaJet {
    q: u64,
    terms: Vec<QuadValue>,
}

impl DeltaJet {
    pub fn q(&self) -> u64 {
        self.q
    }

    /// Highest derivative order available.
    pub fn order(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn get(&self, m: usize) -> &QuadValue {
        &self.terms[m]
    }
}

/// delta as a rational function of X = q^{-s}: q X (1 - X) / (q X - 1).
fn delta_rational(q: u64) -> RatFunc {
    let qi = q as i64;
    RatFunc::new(
        RatPoly::from_i64(&[0, qi, -qi]),
        RatPoly::from_i64(&[-1, qi]),
    )
}

/// Build the jet up to order mu by repeated application of the Euler
/// operator X d/dX, which realizes d/ds / (-ln q) exactly on rational
/// functions of X; each order is then evaluated at X = q^{-1/2}.
pub fn delta_jet(q: u64, mu: u32) -> DeltaJet {
    let x0 = QuadValue::q_pow_neg_half(q, 1);
    let mut f = delta_rational(q);
    let mut terms = Vec::with_capacity(mu as usize + 1);
    for _ in 0..=mu {
        terms.push(
            f.eval_quad(&x0)
                .expect("pole at X = 1/q is never hit at X = q^{-1/2}"),
        );
        f = f.euler();
    }
    DeltaJet { q, terms }
}

/// delta(s) in floats, for spot checks.
pub fn delta_f64(q: u64, s: f64) -> f64 {
    let qf = q as f64;
    (1.0 - qf.powf(-s)) / (1.0 - qf.powf(s - 1.0))
}

/// Finite-difference estimate of delta^(m)(1/2) / (-ln q)^m, independent
/// of the Euler-operator route.
///
/// The grid is geometric in X: nodes X_0 rho^j are exact elements of
/// Q(sqrt q) when rho is rational, and a geometric grid in X is a uniform
/// grid in t = -s ln q + const, so a central difference in t of step
/// h = ln rho estimates exactly the normalized derivative. The stencil
/// combinations are computed in exact arithmetic (no cancellation noise)
/// and only the final division by h^m happens in floats; one Richardson
/// step removes the h^2 error term.
pub fn delta_jet_fd(q: u64, m: u32, step_denom: u64) -> f64 {
    let d = delta_rational(q);
    let rho = BigRational::new(BigInt::from(step_denom + 1), BigInt::from(step_denom));
    let x0 = QuadValue::q_pow_neg_half(q, 1);
    // F(j) = delta(X_0 rho^j), exact.
    let f = |j: i32| -> QuadValue {
        let x = x0.mul_rational(&rho.pow(j));
        d.eval_quad(&x).expect("off the pole")
    };
    let h = ((step_denom + 1) as f64 / step_denom as f64).ln();
    let stencil = |scale: i32| -> f64 {
        // Exact central combinations for the m-th derivative, O(h^2).
        let c = |j: i32| f(j * scale);
        let combo = match m {
            0 => c(0),
            1 => c(1).sub(&c(-1)),
            2 => c(1).sub(&c(0).mul_int(2)).add(&c(-1)),
            3 => c(2)
                .sub(&c(1).mul_int(2))
                .add(&c(-1).mul_int(2))
                .sub(&c(-2)),
            4 => c(2)
                .sub(&c(1).mul_int(4))
                .add(&c(0).mul_int(6))
                .sub(&c(-1).mul_int(4))
                .add(&c(-2)),
            _ => panic!("finite-difference stencils implemented through order 4"),
        };
        let hh = h * scale as f64;
        let denom = match m {
            0 => 1.0,
            1 => 2.0 * hh,
            2 => hh * hh,
            3 => 2.0 * hh.powi(3),
            4 => hh.powi(4),
            _ => unreachable!(),
        };
        combo.to_f64() / denom
    };
    if m == 0 {
        return stencil(1);
    }
    let d1 = stencil(1);
    let d2 = stencil(2);
    (4.0 * d1 - d2) / 3.0
}
