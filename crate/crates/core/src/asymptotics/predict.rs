use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::delta::delta_jet;
use super::faulhaber::{faulhaber, FaulhaberCoeffs};
use super::gseries::{dirichlet_partial_exact, g_tail_bound, mu_weight_by_degree};
use crate::combin::{binomial, compositions3, int_pow, multinomial3};
use crate::error::{Error, Result};
use crate::lfunction::Parity;
use crate::quad::QuadValue;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PredictionKind {
    /// Ensemble mean of normalized mu-th derivatives, odd parity.
    OddMean,
    /// Ensemble mean of normalized mu-th derivatives, even parity.
    EvenMean,
    /// Weighted coprime-count sum M_{h,m}.
    ComponentM,
    /// Unweighted coprime-count sum N_h.
    ComponentN,
}

impl PredictionKind {
    pub fn label(&self) -> &'static str {
        match self {
            PredictionKind::OddMean => "odd_mean",
            PredictionKind::EvenMean => "even_mean",
            PredictionKind::ComponentM => "M",
            PredictionKind::ComponentN => "N",
        }
    }
}

/// One assembled main-term evaluation with its labeled term breakdown.
/// `value` is always the plain sum of `terms`.
#[derive(Debug, Clone)]
pub struct AsymPrediction {
    pub kind: PredictionKind,
    pub q: u64,
    pub g: usize,
    pub mu: Option<u32>,
    pub h: Option<usize>,
    pub m: Option<u32>,
    pub cutoff: usize,
    pub value: f64,
    pub terms: Vec<(String, f64)>,
    pub error_budget: f64,
}

impl AsymPrediction {
    fn from_terms(
        kind: PredictionKind,
        q: u64,
        g: usize,
        cutoff: usize,
        terms: Vec<(String, f64)>,
    ) -> Self {
        let value = terms.iter().map(|(_, v)| v).sum();
        AsymPrediction {
            kind,
            q,
            g,
            mu: None,
            h: None,
            m: None,
            cutoff,
            value,
            terms,
            error_budget: 0.0,
        }
    }
}

/// |D| / zeta_A(2) = q^{deg - 1} (q - 1), exact.
pub fn scaled_ensemble_size(q: u64, deg_d: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(q).pow(deg_d as u32 - 1) * BigInt::from(q - 1))
}

/// Normalized derivative truncations Ghat_k = G^{(k)}(1) / (-ln q)^k for
/// k = 0..=maxm, all from one weight vector.
pub fn ghat_exact(q: u64, cutoff: usize, maxm: u32) -> Vec<BigRational> {
    let c = mu_weight_by_degree(q, cutoff);
    (0..=maxm)
        .map(|m| dirichlet_partial_exact(q, &c, m))
        .collect()
}

/// Main term shared by the shifted component sums and the coprime-count
/// sums M_{h,m}:
///   (2^m |D| / zeta(2)) (G(1) J_m(floor(h/2)) + Ghat_m
///                        - sum_{a=1}^{m+1} j_m(a) Ghat_a),
/// exact apart from the series truncation inside Ghat.
pub fn s_main_exact(q: u64, deg_d: usize, h: usize, m: u32, ghat: &[BigRational]) -> BigRational {
    assert!(ghat.len() > m as usize + 1, "need Ghat through order m+1");
    let fa = faulhaber(m);
    let pref = scaled_ensemble_size(q, deg_d) * BigRational::from_integer(BigInt::from(2).pow(m));
    let mut inner = &ghat[0] * fa.eval((h / 2) as u64) + &ghat[m as usize];
    for a in 1..=(m as usize + 1) {
        inner -= fa.coeff(a) * &ghat[a];
    }
    pref * inner
}

/// Exactly-computed budget for |M_exact - M_main|: the difference equals
/// the same Faulhaber combination applied to the series tail above
/// floor(h/2), so we evaluate that tail exactly up to the cutoff and cap
/// the remainder geometrically.
pub fn m_tail_budget(
    q: u64,
    deg_d: usize,
    h: usize,
    m: u32,
    cutoff: usize,
    c: &[BigRational],
) -> Result<f64> {
    let hh = h / 2;
    if cutoff < hh {
        return Err(Error::CutoffTooSmall { cutoff, need: hh });
    }
    let fa = faulhaber(m);
    let tail_exact = |k: u32| -> BigRational {
        let mut acc = BigRational::zero();
        for (l, cl) in c.iter().enumerate().take(cutoff + 1).skip(hh + 1) {
            acc += cl
                * BigRational::new(
                    BigInt::from(int_pow(l as i128, k)),
                    BigInt::from(q).pow(l as u32),
                );
        }
        acc
    };
    let mut combo = tail_exact(0) * fa.eval(hh as u64) + tail_exact(m);
    for a in 1..=(m as usize + 1) {
        combo -= fa.coeff(a) * tail_exact(a as u32);
    }
    // Beyond-cutoff caps for each Faulhaber weight.
    let mut caps = g_tail_bound(q, m, cutoff)
        + fa.eval(hh as u64).abs().to_f64().unwrap() * g_tail_bound(q, 0, cutoff);
    for a in 1..=(m as usize + 1) {
        caps += fa.coeff(a).abs().to_f64().unwrap() * g_tail_bound(q, a as u32, cutoff);
    }
    let pref = scaled_ensemble_size(q, deg_d).to_f64().unwrap() * 2f64.powi(m as i32);
    Ok(pref * (combo.abs().to_f64().unwrap() + caps))
}

/// Main term of the unweighted sums N_h and T_h:
/// G(1) |D| q^{floor(h/2) - (h+1)/2}, exact in Q(sqrt q).
pub fn n_main_exact(q: u64, deg_d: usize, h: usize, ghat0: &BigRational) -> QuadValue {
    // exponent floor(h/2) - (h+1)/2 = -1 (h odd) or -1/2 (h even), shifted
    // by deg_d from |D|.
    let num = 2 * (deg_d + h / 2) as i64 - (h as i64 + 1); // twice the exponent
    assert!(num >= 0, "main term exponent went negative");
    QuadValue::q_pow_half(q, num as u32).mul_rational(ghat0)
}

fn j_sum_f64(fa: &FaulhaberCoeffs, ghat: &[f64]) -> f64 {
    (1..=(fa.m as usize + 1))
        .map(|a| fa.coeff(a).to_f64().unwrap() * ghat[a])
        .sum()
}

/// Assemble the odd-parity mean-value main terms.
pub fn odd_mean_prediction(q: u64, g: usize, mu: u32, cutoff: usize) -> AsymPrediction {
    assert!(g >= 1, "mean-value main terms need genus >= 1");
    let deg = 2 * g + 1;
    let ghat: Vec<f64> = ghat_exact(q, cutoff, mu + 1)
        .iter()
        .map(|v| v.to_f64().unwrap())
        .collect();
    let pref = scaled_ensemble_size(q, deg).to_f64().unwrap() * 2f64.powi(mu as i32);
    let sign = if mu.is_multiple_of(2) { 1.0 } else { -1.0 };
    let fa_mu = faulhaber(mu);

    let principal =
        sign * pref * (ghat[0] * fa_mu.eval((g / 2) as u64).to_f64().unwrap() + ghat[mu as usize]);
    let principal_jsum = -sign * pref * j_sum_f64(&fa_mu, &ghat);

    let mut shifted = 0.0;
    let mut shifted_jsum = 0.0;
    for m in 0..=mu {
        let fa = faulhaber(m);
        let w = binomial(mu, m) as f64 * int_pow(-(g as i128), mu - m) as f64;
        shifted += pref
            * w
            * (ghat[0] * fa.eval(((g - 1) / 2) as u64).to_f64().unwrap() + ghat[m as usize]);
        shifted_jsum -= pref * w * j_sum_f64(&fa, &ghat);
    }

    let mut pred = AsymPrediction::from_terms(
        PredictionKind::OddMean,
        q,
        g,
        cutoff,
        vec![
            ("principal".into(), principal),
            ("principal_jsum".into(), principal_jsum),
            ("shifted".into(), shifted),
            ("shifted_jsum".into(), shifted_jsum),
        ],
    );
    pred.mu = Some(mu);
    pred
}

/// Assemble the even-parity mean-value main terms, including the jet
/// factors and the two unit-correction groups.
pub fn even_mean_prediction(q: u64, g: usize, mu: u32, cutoff: usize) -> AsymPrediction {
    assert!(g >= 1, "mean-value main terms need genus >= 1");
    let deg = 2 * g + 2;
    let ghat: Vec<f64> = ghat_exact(q, cutoff, mu + 1)
        .iter()
        .map(|v| v.to_f64().unwrap())
        .collect();
    let abs_d = (q as f64).powi(deg as i32);
    let pref = scaled_ensemble_size(q, deg).to_f64().unwrap() * 2f64.powi(mu as i32);
    let jets = delta_jet(q, mu);
    let d_f64: Vec<f64> = (0..=mu as usize).map(|b| jets.get(b).to_f64()).collect();
    let fa_mu = faulhaber(mu);
    let qf = q as f64;

    let principal =
        pref * (ghat[0] * fa_mu.eval((g / 2) as u64).to_f64().unwrap() + ghat[mu as usize]);
    let principal_jsum = -pref * j_sum_f64(&fa_mu, &ghat);
    let unit_corr = -int_pow(g as i128 + 1, mu) as f64
        * ghat[0]
        * abs_d
        * qf.powf((g / 2) as f64 - (g as f64 + 1.0) / 2.0);

    let mut jet_shifted = 0.0;
    let mut jet_shifted_jsum = 0.0;
    for (a, b, c) in compositions3(mu) {
        let fa = faulhaber(c);
        let sign = if c % 2 == 0 { 1.0 } else { -1.0 };
        let w =
            sign * multinomial3(mu, a, b, c) as f64 * (g as f64).powi(a as i32) * d_f64[b as usize]
                / 2f64.powi(b as i32);
        jet_shifted += pref
            * w
            * (ghat[0] * fa.eval(((g - 1) / 2) as u64).to_f64().unwrap() + ghat[c as usize]);
        jet_shifted_jsum -= pref * w * j_sum_f64(&fa, &ghat);
    }

    let mut jet_mix = 0.0;
    for m in 0..=mu {
        jet_mix += binomial(mu, m) as f64 * (g as f64).powi((mu - m) as i32) * d_f64[m as usize];
    }
    let jet_unit_corr = -ghat[0] * abs_d * qf.powf(((g - 1) / 2) as f64 - g as f64 / 2.0) * jet_mix;

    let mut pred = AsymPrediction::from_terms(
        PredictionKind::EvenMean,
        q,
        g,
        cutoff,
        vec![
            ("principal".into(), principal),
            ("principal_jsum".into(), principal_jsum),
            ("unit_correction".into(), unit_corr),
            ("jet_shifted".into(), jet_shifted),
            ("jet_shifted_jsum".into(), jet_shifted_jsum),
            ("jet_unit_correction".into(), jet_unit_corr),
        ],
    );
    pred.mu = Some(mu);
    pred
}

/// Lemma-level main terms for the M and N coprime-count sums.
pub fn component_main(
    kind: PredictionKind,
    q: u64,
    parity: Parity,
    g: usize,
    h: usize,
    m: u32,
    cutoff: usize,
) -> Result<AsymPrediction> {
    if h + 1 != g && h != g {
        return Err(Error::BadComponentRange { h, g });
    }
    let deg = parity.discriminant_degree(g);
    match kind {
        PredictionKind::ComponentM => {
            let ghat = ghat_exact(q, cutoff, m + 1);
            let value = s_main_exact(q, deg, h, m, &ghat).to_f64().unwrap();
            let c = mu_weight_by_degree(q, cutoff);
            let budget = m_tail_budget(q, deg, h, m, cutoff, &c)?;
            let mut pred = AsymPrediction::from_terms(
                PredictionKind::ComponentM,
                q,
                g,
                cutoff,
                vec![("main".into(), value)],
            );
            pred.h = Some(h);
            pred.m = Some(m);
            pred.error_budget = budget;
            Ok(pred)
        }
        PredictionKind::ComponentN => {
            let ghat = ghat_exact(q, cutoff, 0);
            let value = n_main_exact(q, deg, h, &ghat[0]).to_f64();
            let mut pred = AsymPrediction::from_terms(
                PredictionKind::ComponentN,
                q,
                g,
                cutoff,
                vec![("main".into(), value)],
            );
            pred.h = Some(h);
            // O(g |D|^{3/4}) scale with unit constant; consumers report the
            // fitted ratio against this.
            pred.error_budget = g as f64 * (q as f64).powf(deg as f64 * 0.75);
            Ok(pred)
        }
        _ => panic!("component_main covers the M and N component kinds"),
    }
}
