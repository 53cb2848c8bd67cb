use num_bigint::BigInt;
use num_rational::BigRational;

use crate::asymptotics::delta::DeltaJet;
use crate::characters::CharCache;
use crate::combin::{binomial, compositions3, int_pow, multinomial3};
use crate::error::{Error, Result};
use crate::poly::FqPoly;
use crate::quad::QuadValue;
use crate::ratpoly::RatPoly;
use crate::roots::complex_roots;

/// Whether the discriminant has odd degree 2g+1 or even degree 2g+2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub fn discriminant_degree(&self, g: usize) -> usize {
        match self {
            Parity::Odd => 2 * g + 1,
            Parity::Even => 2 * g + 2,
        }
    }

    pub fn l_degree(&self, g: usize) -> usize {
        match self {
            Parity::Odd => 2 * g,
            Parity::Even => 2 * g + 1,
        }
    }
}

impl std::fmt::Display for Parity {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Parity::Odd => write!(out, "odd"),
            Parity::Even => write!(out, "even"),
        }
    }
}

/// Direct even-parity construction needs all 2g+2 coefficient sums, whose
/// cost grows like q^{2g+1}; past this genus the validated shifted-sum
/// evaluation is the authoritative route and the full polynomial is only
/// an oracle.
pub const EVEN_DIRECT_MAX_GENUS: usize = 2;

/// The L-polynomial of chi_D in the variable u = q^{-s}: coefficient n is
/// A(n, chi_D), the character sum over monic polynomials of degree n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LData {
    d: FqPoly,
    parity: Parity,
    g: usize,
    coeffs: Vec<i64>,
}

impl LData {
    pub fn discriminant(&self) -> &FqPoly {
        &self.d
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn q(&self) -> u64 {
        self.d.q()
    }

    /// A(0..=deg L), complete.
    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }
}

fn classify(d: &FqPoly) -> Result<(Parity, usize)> {
    let deg = match d.degree() {
        Some(n) => n,
        None => return Err(Error::ZeroPolynomial),
    };
    if deg % 2 == 1 {
        if deg < 3 {
            return Err(Error::DegreeTooSmall(deg, 3));
        }
        Ok((Parity::Odd, (deg - 1) / 2))
    } else {
        if deg < 2 {
            return Err(Error::DegreeTooSmall(deg, 2));
        }
        Ok((Parity::Even, deg / 2 - 1))
    }
}

/// Build the L-polynomial of chi_D.
///
/// Odd parity computes A(n) for n <= g by character sums and completes the
/// upper half through the functional-equation symmetry A(2g-n) = q^{g-n}
/// A(n). Even parity has no symmetry shortcut here, so every coefficient
/// comes from a direct sum; see [`EVEN_DIRECT_MAX_GENUS`].
pub fn build_l(cache: &CharCache, d: &FqPoly) -> Result<LData> {
    let (parity, g) = classify(d)?;
    let q = d.q() as i64;
    match parity {
        Parity::Odd => {
            let mut a = cache.a_coeffs(d, g)?;
            a.resize(2 * g + 1, 0);
            for n in 0..g {
                a[2 * g - n] = q.pow((g - n) as u32) * a[n];
            }
            debug_assert!(a
                .iter()
                .enumerate()
                .all(|(n, &v)| v.unsigned_abs() <= d.q().pow(n as u32)));
            Ok(LData {
                d: d.clone(),
                parity,
                g,
                coeffs: a,
            })
        }
        Parity::Even => {
            if g > EVEN_DIRECT_MAX_GENUS {
                return Err(Error::EvenDirectGated {
                    g,
                    max: EVEN_DIRECT_MAX_GENUS,
                });
            }
            let a = cache.a_coeffs(d, 2 * g + 1)?;
            Ok(LData {
                d: d.clone(),
                parity,
                g,
                coeffs: a,
            })
        }
    }
}

/// Check A(2g-n) = q^{g-n} A(n) with every coefficient recomputed from
/// direct character sums -- no symmetry completion on either side.
pub fn fe_symmetry_check(cache: &CharCache, d: &FqPoly) -> Result<bool> {
    let (parity, g) = classify(d)?;
    if parity != Parity::Odd {
        return Err(Error::EvenParityUnsupported);
    }
    let a = cache.a_coeffs(d, 2 * g)?;
    let q = d.q() as i64;
    for n in 0..=g {
        if a[2 * g - n] != q.pow((g - n) as u32) * a[n] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Root-location report for one L-polynomial.
#[derive(Debug, Clone)]
pub struct RhReport {
    /// Max of ||u| - q^{-1/2}| over roots not classified as unit-modulus.
    pub max_circle_dev: f64,
    /// Roots (counted with multiplicity) within tol of |u| = 1.
    pub unit_root_count: usize,
    pub root_count: usize,
    pub pass: bool,
}

/// Locate all roots of the L-polynomial and measure their distance from
/// the Weil circle |u| = q^{-1/2}.
///
/// Odd parity passes when every root sits on the circle; even parity when
/// exactly one root (the unit-modulus zero) sits at |u| = 1 and the rest
/// on the circle. Repeated factors are split off exactly over Q first, so
/// the iteration only ever sees simple roots.
pub fn rh_roots_check(l: &LData, tol: f64) -> Result<RhReport> {
    let poly = RatPoly::from_i64(&l.coeffs);
    let circle = 1.0 / (l.q() as f64).sqrt();
    let mut max_circle_dev = 0.0f64;
    let mut unit_root_count = 0usize;
    let mut root_count = 0usize;
    for (piece, mult) in poly.squarefree_decomposition() {
        let coeffs: Vec<f64> = piece
            .coeffs()
            .iter()
            .map(|c| {
                use num_traits::ToPrimitive;
                c.to_f64().unwrap_or(f64::NAN)
            })
            .collect();
        for root in complex_roots(&coeffs)? {
            root_count += mult as usize;
            if (root.norm() - 1.0).abs() <= tol {
                unit_root_count += mult as usize;
            } else {
                max_circle_dev = max_circle_dev.max((root.norm() - circle).abs());
            }
        }
    }
    debug_assert_eq!(root_count, poly.degree().unwrap_or(0));
    let pass = match l.parity {
        Parity::Odd => unit_root_count == 0 && max_circle_dev <= tol,
        Parity::Even => unit_root_count == 1 && max_circle_dev <= tol,
    };
    Ok(RhReport {
        max_circle_dev,
        unit_root_count,
        root_count,
        pass,
    })
}

fn quad_term(q: u64, coeff: i128, n: usize) -> QuadValue {
    QuadValue::q_pow_neg_half(q, n as u32)
        .mul_rational(&BigRational::from_integer(BigInt::from(coeff)))
}

/// mu-th derivative at the central point from the full coefficient list,
/// normalized by (ln q)^mu for odd parity and (-ln q)^mu for even parity:
/// sum of (-n)^mu A_n q^{-n/2}, resp. n^mu A_n q^{-n/2}.
pub fn deriv_half_direct(l: &LData, mu: u32) -> QuadValue {
    let q = l.q();
    let mut acc = QuadValue::zero(q);
    for (n, &a) in l.coeffs.iter().enumerate() {
        let base = match l.parity {
            Parity::Odd => -(n as i128),
            Parity::Even => n as i128,
        };
        let c = int_pow(base, mu) * a as i128;
        if c != 0 {
            acc = acc.add(&quad_term(q, c, n));
        }
    }
    acc
}

/// Integer weight attached to A_n in the odd shifted-sum expansion of the
/// normalized mu-th derivative at 1/2.
pub fn odd_afe_weight(g: usize, mu: u32, n: usize) -> i128 {
    let mut c = int_pow(-(n as i128), mu);
    if n < g {
        for m in 0..=mu {
            c += binomial(mu, m) * int_pow(-2 * g as i128, mu - m) * int_pow(n as i128, m);
        }
    }
    c
}

/// Per-coefficient weights w_n with L^(mu)(1/2)/(ln q)^mu =
/// sum_{n<=g} w_n A_n for odd parity. Linear in the A_n, so ensemble
/// averages can apply the same weights to coefficient sums.
pub fn odd_afe_weights(q: u64, g: usize, mu: u32) -> Vec<QuadValue> {
    (0..=g)
        .map(|n| quad_term(q, odd_afe_weight(g, mu, n), n))
        .collect()
}

/// Normalized mu-th derivative at 1/2 for odd-parity D from only the lower
/// half A(0..=g), via the exact shifted functional-equation expansion.
/// Agrees with [`deriv_half_direct`] as an exact identity.
pub fn afe_odd_from_coeffs(q: u64, g: usize, mu: u32, a: &[i64]) -> QuadValue {
    assert!(a.len() > g, "need A(0..=g)");
    dot_weights(q, &odd_afe_weights(q, g, mu), a)
}

fn dot_weights(q: u64, weights: &[QuadValue], a: &[i64]) -> QuadValue {
    let mut acc = QuadValue::zero(q);
    for (w, &an) in weights.iter().zip(a) {
        if an != 0 {
            acc = acc.add(&w.mul_int(an));
        }
    }
    acc
}

pub fn deriv_half_afe_odd(cache: &CharCache, d: &FqPoly, mu: u32) -> Result<QuadValue> {
    let (parity, g) = classify(d)?;
    if parity != Parity::Odd {
        return Err(Error::EvenParityUnsupported);
    }
    let a = cache.a_coeffs(d, g)?;
    Ok(afe_odd_from_coeffs(d.q(), g, mu, &a))
}

/// Per-coefficient weights with L^(mu)(1/2)/(-ln q)^mu = sum_{n<=g} w_n
/// A_n for even parity. The four blocks of the shifted expansion all enter
/// linearly in the A_n: the n^mu block, the unit-zero correction at
/// q^{-(g+1)/2}, the jet-weighted multinomial block, and the jet-weighted
/// correction at q^{-g/2}.
pub fn even_afe_weights(q: u64, g: usize, mu: u32, jets: &DeltaJet) -> Result<Vec<QuadValue>> {
    if jets.order() < mu as usize {
        return Err(Error::JetOrderTooSmall {
            have: jets.order(),
            need: mu as usize,
        });
    }
    // Jet-weighted pieces shared by every n.
    let unit_term = quad_term(q, -int_pow(g as i128 + 1, mu), g + 1);
    let mut jet_mix = QuadValue::zero(q);
    for m in 0..=mu {
        let coef = binomial(mu, m) * int_pow(g as i128, mu - m);
        jet_mix = jet_mix.add(
            &jets
                .get(m as usize)
                .mul_rational(&BigRational::from_integer(BigInt::from(coef))),
        );
    }
    let lower_corr = jet_mix.mul(&quad_term(q, -1, g));

    let weights = (0..=g)
        .map(|n| {
            let mut w = quad_term(q, int_pow(n as i128, mu), n).add(&unit_term);
            if n < g {
                let mut multi = QuadValue::zero(q);
                for (aa, bb, cc) in compositions3(mu) {
                    let coef = multinomial3(mu, aa, bb, cc)
                        * int_pow(2 * g as i128, aa)
                        * int_pow(-(n as i128), cc);
                    if coef != 0 {
                        multi = multi.add(
                            &jets
                                .get(bb as usize)
                                .mul_rational(&BigRational::from_integer(BigInt::from(coef))),
                        );
                    }
                }
                w = w
                    .add(&multi.mul(&QuadValue::q_pow_neg_half(q, n as u32)))
                    .add(&lower_corr);
            }
            w
        })
        .collect();
    Ok(weights)
}

/// Even-parity twin of [`afe_odd_from_coeffs`], normalized by (-ln q)^mu.
/// Needs the delta jet (normalized derivatives of the even-parity
/// correction factor) up to order mu.
pub fn afe_even_from_coeffs(
    q: u64,
    g: usize,
    mu: u32,
    a: &[i64],
    jets: &DeltaJet,
) -> Result<QuadValue> {
    assert!(a.len() > g, "need A(0..=g)");
    Ok(dot_weights(q, &even_afe_weights(q, g, mu, jets)?, a))
}

pub fn deriv_half_afe_even(
    cache: &CharCache,
    d: &FqPoly,
    mu: u32,
    jets: &DeltaJet,
) -> Result<QuadValue> {
    let (parity, g) = classify(d)?;
    if parity != Parity::Even {
        return Err(Error::EvenParityUnsupported);
    }
    let a = cache.a_coeffs(d, g)?;
    afe_even_from_coeffs(d.q(), g, mu, &a, jets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::delta::delta_jet;
    use crate::enumerate::squarefree_polys;
    use crate::field::FieldCtx;

    fn f3() -> FieldCtx {
        FieldCtx::new(3).unwrap()
    }

    fn p3(coeffs: &[u64]) -> FqPoly {
        FqPoly::new(f3(), coeffs.to_vec())
    }

    #[test]
    fn build_l_examples() {
        let cache = CharCache::build(f3(), 3);
        // D = t^3 + 2t, genus 1: A = [1, 0, 3].
        let l = build_l(&cache, &p3(&[0, 2, 0, 1])).unwrap();
        assert_eq!(l.parity(), Parity::Odd);
        assert_eq!(l.coeffs(), &[1, 0, 3]);
        // D = t^2 + 1, even with g = 0: A = [1, -1].
        let l = build_l(&cache, &p3(&[1, 0, 1])).unwrap();
        assert_eq!(l.parity(), Parity::Even);
        assert_eq!(l.coeffs(), &[1, -1]);
    }

    #[test]
    fn build_l_rejects_bad_discriminants() {
        let cache = CharCache::build(f3(), 3);
        assert!(build_l(&cache, &p3(&[0, 0, 1])).is_err()); // t^2 not square-free
        assert!(build_l(&cache, &p3(&[1, 1])).is_err()); // degree 1 too small
    }

    #[test]
    fn fe_symmetry_exhaustive_h3() {
        let cache = CharCache::build(f3(), 2);
        for d in squarefree_polys(f3(), 3) {
            assert!(fe_symmetry_check(&cache, &d).unwrap(), "D={d}");
        }
    }

    #[test]
    fn direct_derivative_examples() {
        let cache = CharCache::build(f3(), 3);
        let l = build_l(&cache, &p3(&[0, 2, 0, 1])).unwrap();
        // L'(1/2)/ln 3 = -2.
        assert_eq!(deriv_half_direct(&l, 1), QuadValue::from_int(3, -2));
        // L(1/2) = 1 + 3/3 = 2.
        assert_eq!(deriv_half_direct(&l, 0), QuadValue::from_int(3, 2));
        // Even example: L'(1/2)/(-ln 3) = -1/sqrt(3).
        let l = build_l(&cache, &p3(&[1, 0, 1])).unwrap();
        assert_eq!(
            deriv_half_direct(&l, 1),
            QuadValue::q_pow_neg_half(3, 1).neg()
        );
    }

    #[test]
    fn afe_odd_matches_direct_exhaustively() {
        let cache = CharCache::build(f3(), 4);
        for n in [3usize, 5] {
            for d in squarefree_polys(f3(), n) {
                let l = build_l(&cache, &d).unwrap();
                for mu in 0..=3 {
                    assert_eq!(
                        deriv_half_afe_odd(&cache, &d, mu).unwrap(),
                        deriv_half_direct(&l, mu),
                        "D={d} mu={mu}"
                    );
                }
            }
        }
    }

    #[test]
    fn afe_odd_term_bookkeeping() {
        // For D = t^3 + 2t (g = 1, A_1 = 0), the mu = 1 value collapses to
        // the n = 0 shifted term (-2g)^1 * A_0 = -2.
        let a = [1i64, 0];
        assert_eq!(afe_odd_from_coeffs(3, 1, 1, &a), QuadValue::from_int(3, -2));
    }

    #[test]
    fn afe_even_matches_direct_exhaustively() {
        let cache = CharCache::build(f3(), 5);
        let jets = delta_jet(3, 3);
        for n in [2usize, 4] {
            for d in squarefree_polys(f3(), n) {
                let l = build_l(&cache, &d).unwrap();
                for mu in 0..=2 {
                    assert_eq!(
                        deriv_half_afe_even(&cache, &d, mu, &jets).unwrap(),
                        deriv_half_direct(&l, mu),
                        "D={d} mu={mu}"
                    );
                }
            }
        }
    }

    #[test]
    fn afe_even_needs_enough_jets() {
        let cache = CharCache::build(f3(), 2);
        let jets = delta_jet(3, 1);
        assert!(deriv_half_afe_even(&cache, &p3(&[1, 0, 1]), 2, &jets).is_err());
    }

    #[test]
    fn even_direct_is_gated() {
        let cache = CharCache::build(f3(), 8);
        // degree 8 discriminant => g = 3 > gate
        let d = squarefree_polys(f3(), 8).next().unwrap();
        match build_l(&cache, &d) {
            Err(Error::EvenDirectGated { g: 3, .. }) => {}
            other => panic!("expected gate, got {other:?}"),
        }
    }

    #[test]
    fn rh_closed_form_case() {
        let cache = CharCache::build(f3(), 3);
        // L(u) = 1 + 3u^2 for D = t^3 + 2t: roots at +-i/sqrt(3).
        let l = build_l(&cache, &p3(&[0, 2, 0, 1])).unwrap();
        let report = rh_roots_check(&l, 1e-8).unwrap();
        assert!(report.pass);
        assert_eq!(report.unit_root_count, 0);
        assert!(report.max_circle_dev < 1e-12);
    }

    #[test]
    fn rh_even_has_one_unit_root() {
        let cache = CharCache::build(f3(), 4);
        for d in squarefree_polys(f3(), 4) {
            let l = build_l(&cache, &d).unwrap();
            let report = rh_roots_check(&l, 1e-8).unwrap();
            assert!(report.pass, "D={d} report={report:?}");
            assert_eq!(report.unit_root_count, 1, "D={d}");
        }
    }
}
