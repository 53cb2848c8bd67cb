use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use crate::asymptotics::delta::delta_jet;
use crate::asymptotics::gseries::coprime_weight_by_degree;
use crate::asymptotics::predict::{
    even_mean_prediction, odd_mean_prediction, scaled_ensemble_size, AsymPrediction,
};
use crate::characters::CharCache;
use crate::combin::int_pow;
use crate::enumerate::squarefree_count;
use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::lfunction::{even_afe_weights, odd_afe_weights, Parity};
use crate::poly::FqPoly;
use crate::quad::QuadValue;

/// One ensemble/average to compute: all square-free monic D of degree
/// 2g+1 (odd) or 2g+2 (even) over F_q, with derivative order mu.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnsembleSpec {
    pub q: u64,
    pub parity: Parity,
    pub g: usize,
    pub mu: u32,
}

impl EnsembleSpec {
    pub fn discriminant_degree(&self) -> usize {
        self.parity.discriminant_degree(self.g)
    }

    pub fn ensemble_size(&self) -> u64 {
        squarefree_count(self.q, self.discriminant_degree())
    }
}

/// Execution knobs for the exhaustive sweeps.
#[derive(Debug, Clone, Copy)]
pub struct ExecOpts {
    /// Worker threads; `None` takes the machine's available parallelism.
    pub workers: Option<usize>,
    /// Refusal threshold, in estimated character evaluations.
    pub budget: u128,
}

impl Default for ExecOpts {
    fn default() -> Self {
        ExecOpts {
            workers: None,
            budget: 5_000_000_000,
        }
    }
}

impl ExecOpts {
    fn worker_count(&self) -> usize {
        self.workers.unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
    }
}

/// Estimated character evaluations for a sweep: ensemble size times the
/// number of monic f of degree <= nmax.
pub fn estimate_symbol_evals(q: u64, deg_d: usize, nmax: usize) -> u128 {
    let ensemble = squarefree_count(q, deg_d) as u128;
    let mut f_count = 0u128;
    for n in 0..=nmax {
        f_count += (q as u128).pow(n as u32);
    }
    ensemble * f_count
}

/// Exact per-degree coefficient sums over one ensemble:
/// returns (|H_N|, [sum_D A_n(D) for n = 0..=nmax]).
///
/// The sweep is chunked over contiguous index ranges of the monic
/// enumeration; every reduction is exact integer addition, so the result
/// is identical for any worker count or chunking.
pub fn ensemble_a_sums(
    q: u64,
    parity: Parity,
    g: usize,
    nmax: usize,
    opts: &ExecOpts,
) -> Result<(u64, Vec<i128>)> {
    let field = FieldCtx::new(q)?;
    let deg_d = parity.discriminant_degree(g);
    let estimate = estimate_symbol_evals(q, deg_d, nmax);
    if estimate > opts.budget {
        return Err(Error::BudgetExceeded {
            estimate,
            budget: opts.budget,
        });
    }
    let cache = CharCache::build(field, nmax);
    let workers = opts.worker_count();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool");

    let total = q.pow(deg_d as u32);
    let nchunks = (workers * 8).max(1).min(total as usize).max(1) as u64;
    let per = total.div_ceil(nchunks);
    let bounds: Vec<(u64, u64)> = (0..nchunks)
        .map(|i| (i * per, ((i + 1) * per).min(total)))
        .filter(|(s, e)| s < e)
        .collect();

    let partials: Vec<(u64, Vec<i128>)> = pool.install(|| {
        bounds
            .par_iter()
            .map(|&(start, end)| sweep_range(&cache, deg_d, nmax, start, end))
            .collect()
    });

    let mut count = 0u64;
    let mut sums = vec![0i128; nmax + 1];
    for (c, s) in partials {
        count += c;
        for (acc, v) in sums.iter_mut().zip(s) {
            *acc += v;
        }
    }
    Ok((count, sums))
}

fn sweep_range(
    cache: &CharCache,
    deg_d: usize,
    nmax: usize,
    start: u64,
    end: u64,
) -> (u64, Vec<i128>) {
    let field = cache.field();
    let q = field.q();
    let mut digits = vec![0u64; deg_d];
    let mut k = start;
    for d in digits.iter_mut() {
        *d = k % q;
        k /= q;
    }
    let mut coeffs = vec![0u64; deg_d + 1];
    let mut scratch: Vec<u64> = Vec::with_capacity(deg_d + 1);
    let mut chis: Vec<i8> = Vec::with_capacity(cache.prime_count());
    let mut count = 0u64;
    let mut sums = vec![0i128; nmax + 1];
    for idx in start..end {
        coeffs[..deg_d].copy_from_slice(&digits);
        coeffs[deg_d] = 1;
        let dpoly = FqPoly::new(field, coeffs.clone());
        if dpoly.is_squarefree().expect("monic, nonzero") {
            count += 1;
            cache.chi_vector_into(&mut scratch, &dpoly, &mut chis);
            for (n, acc) in sums.iter_mut().enumerate() {
                *acc += if n == 0 {
                    1
                } else {
                    cache.coeff_a_from_vector(&chis, n) as i128
                };
            }
        }
        if idx + 1 < end {
            for d in digits.iter_mut() {
                *d += 1;
                if *d < q {
                    break;
                }
                *d = 0;
            }
        }
    }
    (count, sums)
}

fn weights_for(spec: &EnsembleSpec) -> Result<Vec<QuadValue>> {
    match spec.parity {
        Parity::Odd => Ok(odd_afe_weights(spec.q, spec.g, spec.mu)),
        Parity::Even => {
            let jets = delta_jet(spec.q, spec.mu);
            even_afe_weights(spec.q, spec.g, spec.mu, &jets)
        }
    }
}

/// Recombine per-degree coefficient sums into the ensemble moment. The
/// per-discriminant derivative value is linear in A_0..A_g, so applying
/// the same weights to the summed coefficients is exactly the sum of the
/// per-discriminant values.
pub fn moment_from_sums(spec: &EnsembleSpec, sums: &[i128]) -> Result<QuadValue> {
    let weights = weights_for(spec)?;
    assert!(sums.len() > spec.g, "need coefficient sums through n = g");
    let mut acc = QuadValue::zero(spec.q);
    for (w, &s) in weights.iter().zip(sums) {
        if s != 0 {
            acc = acc.add(&w.mul_rational(&BigRational::from_integer(BigInt::from(s))));
        }
    }
    Ok(acc)
}

/// Sum over the ensemble of L^(mu)(1/2, chi_D), normalized by (ln q)^mu
/// for odd parity and (-ln q)^mu for even parity. Exact.
pub fn empirical_moment(spec: &EnsembleSpec, opts: &ExecOpts) -> Result<QuadValue> {
    let (_, sums) = ensemble_a_sums(spec.q, spec.parity, spec.g, spec.g, opts)?;
    moment_from_sums(spec, &sums)
}

/// The shifted component sum: sum_{n=0}^{h} n^m q^{-n/2} sum_D A_n(D),
/// over the ensemble selected by (parity, g). Exact.
pub fn empirical_s(
    q: u64,
    parity: Parity,
    g: usize,
    h: usize,
    m: u32,
    opts: &ExecOpts,
) -> Result<QuadValue> {
    check_h(g, h)?;
    let (_, sums) = ensemble_a_sums(q, parity, g, h, opts)?;
    Ok(s_from_sums(q, h, m, &sums))
}

pub fn s_from_sums(q: u64, h: usize, m: u32, sums: &[i128]) -> QuadValue {
    let mut acc = QuadValue::zero(q);
    for (n, &s) in sums.iter().enumerate().take(h + 1) {
        let c = int_pow(n as i128, m) * s;
        if c != 0 {
            acc = acc.add(
                &QuadValue::q_pow_neg_half(q, n as u32)
                    .mul_rational(&BigRational::from_integer(BigInt::from(c))),
            );
        }
    }
    acc
}

/// The unweighted tail sum: q^{-(h+1)/2} sum_{n=0}^{h} sum_D A_n(D) over
/// the even ensemble. Exact.
pub fn empirical_t(q: u64, g: usize, h: usize, opts: &ExecOpts) -> Result<QuadValue> {
    check_h(g, h)?;
    let (_, sums) = ensemble_a_sums(q, Parity::Even, g, h, opts)?;
    Ok(t_from_sums(q, h, &sums))
}

pub fn t_from_sums(q: u64, h: usize, sums: &[i128]) -> QuadValue {
    let total: i128 = sums.iter().take(h + 1).sum();
    QuadValue::q_pow_neg_half(q, h as u32 + 1)
        .mul_rational(&BigRational::from_integer(BigInt::from(total)))
}

fn check_h(g: usize, h: usize) -> Result<()> {
    if h == g || h + 1 == g {
        Ok(())
    } else {
        Err(Error::BadComponentRange { h, g })
    }
}

/// Defining finite sum of the weighted coprime-count quantity:
/// (2^m |D| / zeta(2)) sum_{l=0}^{floor(h/2)} l^m q^{-l} w_l, where w_l
/// aggregates prod_{P|L}(1+|P|^{-1})^{-1} over monic L of degree l. Exact.
pub fn exact_m_sum(q: u64, parity: Parity, g: usize, h: usize, m: u32) -> Result<BigRational> {
    check_h(g, h)?;
    let deg = parity.discriminant_degree(g);
    let w = coprime_weight_by_degree(q, h / 2);
    let mut inner = BigRational::zero();
    for (l, wl) in w.iter().enumerate() {
        inner += wl
            * BigRational::new(
                BigInt::from(int_pow(l as i128, m)),
                BigInt::from(q).pow(l as u32),
            );
    }
    Ok(scaled_ensemble_size(q, deg) * BigRational::from_integer(BigInt::from(2).pow(m)) * inner)
}

/// Defining finite sum of the unweighted coprime-count quantity:
/// (|D| / zeta(2)) q^{-(h+1)/2} sum_{l=0}^{floor(h/2)} w_l, carried in
/// Q(sqrt q) since the prefactor is a half power for even h. Exact.
pub fn exact_n_sum(q: u64, parity: Parity, g: usize, h: usize) -> Result<QuadValue> {
    check_h(g, h)?;
    let deg = parity.discriminant_degree(g);
    let w = coprime_weight_by_degree(q, h / 2);
    let total: BigRational = w.iter().sum();
    Ok(QuadValue::q_pow_neg_half(q, h as u32 + 1)
        .mul_rational(&(scaled_ensemble_size(q, deg) * total)))
}

/// One empirical-vs-predicted comparison row.
#[derive(Debug, Clone)]
pub struct MomentReport {
    pub spec: EnsembleSpec,
    pub ensemble_size: u64,
    pub empirical: QuadValue,
    pub empirical_f64: f64,
    pub predicted: f64,
    pub abs_dev: f64,
    pub rel_dev: f64,
    /// abs_dev / (|D|^{7/8} (log_q |D|)^mu), the error-term scaling.
    pub norm_dev: f64,
    pub error_budget: f64,
    /// Set when the nominal error envelope is as large as the main term
    /// itself (small genus); such rows carry no trend claim.
    pub error_dominated: bool,
    pub runtime_ms: u64,
}

pub fn prediction_for(spec: &EnsembleSpec, cutoff: usize) -> AsymPrediction {
    match spec.parity {
        Parity::Odd => odd_mean_prediction(spec.q, spec.g, spec.mu, cutoff),
        Parity::Even => even_mean_prediction(spec.q, spec.g, spec.mu, cutoff),
    }
}

/// Scale of the theorem-level error term, |D|^{7/8} (log_q |D|)^mu.
pub fn error_scale(spec: &EnsembleSpec) -> f64 {
    let deg = spec.discriminant_degree() as f64;
    (spec.q as f64).powf(deg * 7.0 / 8.0) * deg.powi(spec.mu as i32)
}

/// Join the empirical moment with its prediction. `fitted_c` scales the
/// reported error budget; it is fitted over a run and never asserted as
/// ground truth.
pub fn compare(
    spec: &EnsembleSpec,
    cutoff: usize,
    fitted_c: f64,
    opts: &ExecOpts,
) -> Result<MomentReport> {
    let start = Instant::now();
    let empirical = empirical_moment(spec, opts)?;
    Ok(finish_report(spec, cutoff, fitted_c, empirical, start))
}

fn finish_report(
    spec: &EnsembleSpec,
    cutoff: usize,
    fitted_c: f64,
    empirical: QuadValue,
    start: Instant,
) -> MomentReport {
    let prediction = prediction_for(spec, cutoff);
    let empirical_f64 = empirical.to_f64();
    let abs_dev = (empirical_f64 - prediction.value).abs();
    let rel_dev = if prediction.value != 0.0 {
        abs_dev / prediction.value.abs()
    } else {
        f64::INFINITY
    };
    let scale = error_scale(spec);
    MomentReport {
        spec: *spec,
        ensemble_size: spec.ensemble_size(),
        empirical,
        empirical_f64,
        predicted: prediction.value,
        abs_dev,
        rel_dev,
        norm_dev: abs_dev / scale,
        error_budget: fitted_c * scale,
        error_dominated: scale >= prediction.value.abs(),
        runtime_ms: start.elapsed().as_millis() as u64,
    }
}

/// Reports for a (g, mu) grid at fixed parity, sweeping each ensemble
/// once and reusing its coefficient sums across the mu values.
pub fn moment_reports(
    q: u64,
    parity: Parity,
    g_range: impl IntoIterator<Item = usize>,
    mu_range: impl IntoIterator<Item = u32> + Clone,
    cutoff: usize,
    opts: &ExecOpts,
) -> Result<Vec<MomentReport>> {
    let mut rows = Vec::new();
    for g in g_range {
        let start = Instant::now();
        let (_, sums) = ensemble_a_sums(q, parity, g, g, opts)?;
        for mu in mu_range.clone() {
            let spec = EnsembleSpec { q, parity, g, mu };
            let empirical = moment_from_sums(&spec, &sums)?;
            rows.push(finish_report(&spec, cutoff, 0.0, empirical, start));
        }
    }
    Ok(rows)
}

/// Largest normalized deviation over a set of rows: the fitted constant
/// for the error-budget column.
pub fn fit_error_constant(rows: &[MomentReport]) -> f64 {
    rows.iter().map(|r| r.norm_dev).fold(0.0, f64::max)
}

/// Apply a fitted constant to the budget column of finished rows.
pub fn apply_error_constant(rows: &mut [MomentReport], c: f64) {
    for r in rows.iter_mut() {
        r.error_budget = c * error_scale(&r.spec);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::squarefree_polys;
    use crate::lfunction::{build_l, deriv_half_direct};

    fn opts() -> ExecOpts {
        ExecOpts {
            workers: Some(2),
            ..Default::default()
        }
    }

    #[test]
    fn even_genus_zero_moment() {
        // Over the 6 square-free monic quadratics at q = 3 the first
        // derivative sums to -2 sqrt 3, i.e. -6 * 3^{-1/2}.
        let spec = EnsembleSpec {
            q: 3,
            parity: Parity::Even,
            g: 0,
            mu: 1,
        };
        let v = empirical_moment(&spec, &opts()).unwrap();
        assert_eq!(v, QuadValue::q_pow_neg_half(3, 1).mul_int(-6));
    }

    #[test]
    fn odd_moment_matches_direct_oracle() {
        // Genus 1 at q = 3: sum the 18 per-discriminant direct
        // derivatives of the full L-polynomials.
        let field = FieldCtx::new(3).unwrap();
        let cache = CharCache::build(field, 2);
        for mu in [0u32, 1] {
            let mut oracle = QuadValue::zero(3);
            for d in squarefree_polys(field, 3) {
                let l = build_l(&cache, &d).unwrap();
                oracle = oracle.add(&deriv_half_direct(&l, mu));
            }
            let spec = EnsembleSpec {
                q: 3,
                parity: Parity::Odd,
                g: 1,
                mu,
            };
            assert_eq!(empirical_moment(&spec, &opts()).unwrap(), oracle, "mu={mu}");
        }
    }

    #[test]
    fn s_examples() {
        // h = 0, m = 0 counts the odd genus-1 ensemble.
        let v = empirical_s(3, Parity::Odd, 1, 0, 0, &opts()).unwrap();
        assert_eq!(v, QuadValue::from_int(3, 18));
        // h = 0, m = 1 vanishes since 0^1 = 0.
        let v = empirical_s(3, Parity::Odd, 1, 0, 1, &opts()).unwrap();
        assert!(v.is_zero());
    }

    #[test]
    fn s_matches_triple_sum_oracle() {
        // Brute triple sum over (n, f, D) for the even g = 1, h = 1 case.
        let field = FieldCtx::new(3).unwrap();
        let cache = CharCache::build(field, 1);
        let mut oracle = QuadValue::zero(3);
        for n in 0..=1usize {
            let mut inner = 0i64;
            for f in crate::enumerate::monic_polys(field, n) {
                for d in squarefree_polys(field, 4) {
                    inner += cache.chi(&d, &f).unwrap() as i64;
                }
            }
            oracle = oracle.add(&QuadValue::q_pow_neg_half(3, n as u32).mul_int(inner));
        }
        let v = empirical_s(3, Parity::Even, 1, 1, 0, &opts()).unwrap();
        assert_eq!(v, oracle);
    }

    #[test]
    fn t_example_h0() {
        // T_0 over the even genus-1 ensemble is |H_4| q^{-1/2} = 54/sqrt 3.
        let v = empirical_t(3, 1, 0, &opts()).unwrap();
        assert_eq!(v, QuadValue::q_pow_neg_half(3, 1).mul_int(54));
    }

    #[test]
    fn h_range_is_validated() {
        assert!(empirical_s(3, Parity::Odd, 3, 1, 0, &opts()).is_err());
        assert!(empirical_t(3, 3, 5, &opts()).is_err());
    }

    #[test]
    fn m_n_degenerate_cases() {
        // floor(h/2) = 0 leaves only L = 1: M = 2^m |D|/zeta * [m = 0],
        // because the single l = 0 term carries weight 0^m.
        let m0 = exact_m_sum(3, Parity::Odd, 1, 1, 0).unwrap();
        assert_eq!(m0, scaled_ensemble_size(3, 3));
        for m in 1..=3 {
            assert!(exact_m_sum(3, Parity::Odd, 1, 1, m).unwrap().is_zero());
            assert!(exact_m_sum(3, Parity::Odd, 1, 0, m).unwrap().is_zero());
        }
        // N at h = 0: (|D|/zeta) q^{-1/2}.
        let n0 = exact_n_sum(3, Parity::Even, 1, 0).unwrap();
        assert_eq!(
            n0,
            QuadValue::q_pow_neg_half(3, 1).mul_rational(&scaled_ensemble_size(3, 4))
        );
    }

    #[test]
    fn determinism_across_worker_counts() {
        let mut results = Vec::new();
        for workers in [1usize, 2, 8] {
            let o = ExecOpts {
                workers: Some(workers),
                ..Default::default()
            };
            let spec = EnsembleSpec {
                q: 3,
                parity: Parity::Odd,
                g: 2,
                mu: 1,
            };
            results.push(empirical_moment(&spec, &o).unwrap());
        }
        assert_eq!(results[0], results[1]);
        assert_eq!(results[1], results[2]);
    }

    #[test]
    fn error_domination_flagged_at_small_genus() {
        let small = compare(
            &EnsembleSpec {
                q: 3,
                parity: Parity::Odd,
                g: 1,
                mu: 3,
            },
            12,
            0.0,
            &opts(),
        )
        .unwrap();
        assert!(small.error_dominated);
        let large = compare(
            &EnsembleSpec {
                q: 3,
                parity: Parity::Odd,
                g: 4,
                mu: 1,
            },
            12,
            0.0,
            &opts(),
        )
        .unwrap();
        assert!(!large.error_dominated);
    }

    #[test]
    fn budget_refusal_carries_estimate() {
        let spec = EnsembleSpec {
            q: 3,
            parity: Parity::Odd,
            g: 5,
            mu: 1,
        };
        let tiny = ExecOpts {
            workers: Some(1),
            budget: 10,
        };
        match empirical_moment(&spec, &tiny) {
            Err(Error::BudgetExceeded { estimate, budget }) => {
                assert_eq!(budget, 10);
                assert_eq!(estimate, estimate_symbol_evals(3, 11, 5));
            }
            other => panic!("expected budget refusal, got {other:?}"),
        }
    }
}
