//! Scaling and structural invariants that run over larger grids than the
//! per-module unit tests.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use proptest::prelude::*;

use lfmoments::asymptotics::{g_tail_bound, mu_weight_by_degree, scaled_ensemble_size};
use lfmoments::{
    coprime_squarefree_count, monic_polys, squarefree_polys, CharCache, FieldCtx, FqPoly,
    IrreducibleTable, QuadValue,
};

fn f3() -> FieldCtx {
    FieldCtx::new(3).unwrap()
}

/// Character-sum cancellation over the ensemble: for non-square f the
/// normalized sums |sum_D chi_D(f)| / (q^{(2g+1)/2} |f|^{1/4}) stay
/// bounded as g grows; the largest genus must not set a new maximum.
#[test]
fn char_sum_cancellation_scaling() {
    let q = 3u64;
    let field = f3();
    let mut per_g_max = Vec::new();
    for g in 1..=4usize {
        let cache = CharCache::build(field, g);
        // Mark which (degree, index) pairs are squares.
        let mut is_square: Vec<Vec<bool>> = Vec::new();
        for n in 0..=g {
            is_square.push(monic_polys(field, n).map(|f| f.sqrt().is_some()).collect());
        }
        let mut sums: Vec<Vec<i64>> = (0..=g)
            .map(|n| vec![0i64; q.pow(n as u32) as usize])
            .collect();
        for d in squarefree_polys(field, 2 * g + 1) {
            let chis = cache.chi_vector(&d);
            for n in 1..=g {
                for k in 0..sums[n].len() {
                    if !is_square[n][k] {
                        sums[n][k] += cache.chi_from_vector(&chis, n, k) as i64;
                    }
                }
            }
        }
        let mut worst = 0.0f64;
        for n in 1..=g {
            for (k, &s) in sums[n].iter().enumerate() {
                if is_square[n][k] {
                    continue;
                }
                let scale =
                    (q as f64).powf((2 * g + 1) as f64 / 2.0) * (q as f64).powf(n as f64 / 4.0);
                worst = worst.max(s.abs() as f64 / scale);
            }
        }
        per_g_max.push(worst);
    }
    let last = *per_g_max.last().unwrap();
    let earlier = per_g_max[..per_g_max.len() - 1]
        .iter()
        .fold(0.0f64, |a, &b| a.max(b));
    assert!(
        last <= earlier,
        "normalized character sums grew: {per_g_max:?}"
    );
}

/// Sieve count of coprime square-free discriminants against its main term
/// |D|/zeta(2) prod_{P|f} (1+|P|^{-1})^{-1}: the square-root-scaled error
/// stays bounded over the grid, with the largest degree not a new max.
#[test]
fn coprime_count_error_scaling() {
    let q = 3u64;
    let field = f3();
    let table = IrreducibleTable::build(field, 3);
    let mut fs: Vec<FqPoly> = vec![FqPoly::one(field)];
    for deg in 1..=3 {
        fs.extend(monic_polys(field, deg));
    }
    let mut per_n_max = Vec::new();
    for n in 2..=6usize {
        let mut worst = 0.0f64;
        for f in &fs {
            let count = coprime_squarefree_count(field, n, f).unwrap();
            let mut main = scaled_ensemble_size(q, n);
            for (p, _) in &table.factor(f).unwrap().factors {
                let norm = q.pow(p.degree().unwrap() as u32);
                main *= BigRational::new(BigInt::from(norm), BigInt::from(norm + 1));
            }
            let err = (count as f64 - main.to_f64().unwrap()).abs();
            let scale = (q as f64).powf(n as f64 / 2.0) * (f.degree().unwrap_or(0) as f64 + 1.0);
            worst = worst.max(err / scale);
        }
        per_n_max.push(worst);
    }
    let last = *per_n_max.last().unwrap();
    let earlier = per_n_max[..per_n_max.len() - 1]
        .iter()
        .fold(0.0f64, |a, &b| a.max(b));
    assert!(last <= earlier, "coprime-count errors grew: {per_n_max:?}");
}

/// The square-free series tail beyond floor(g/2), computed exactly up to a
/// deep cutoff, decays like g^m q^{-g/2}.
#[test]
fn series_tail_decay() {
    let q = 3u64;
    let deep = 18usize;
    let c = mu_weight_by_degree(q, deep);
    for m in 0..=3u32 {
        let mut ratios = Vec::new();
        for g in 2..=10usize {
            let from = g / 2 + 1;
            let mut tail = BigRational::zero();
            for (l, cl) in c.iter().enumerate().skip(from) {
                tail += cl
                    * BigRational::new(
                        BigInt::from((l as i64).pow(m)),
                        BigInt::from(q).pow(l as u32),
                    );
            }
            let tail = tail.abs().to_f64().unwrap() + g_tail_bound(q, m, deep);
            let scale = (g as f64).powi(m as i32).max(1.0) * (q as f64).powf(-(g as f64) / 2.0);
            ratios.push(tail / scale);
        }
        let last = *ratios.last().unwrap();
        let earlier = ratios[..ratios.len() - 1]
            .iter()
            .fold(0.0f64, |a, &b| a.max(b));
        assert!(last <= earlier, "m={m}: tail ratios grew: {ratios:?}");
    }
}

/// Splitting the shifted component sum over square / non-square f and
/// recomputing the square block through coprime counts reproduces the
/// direct sum exactly: chi_D(e^2) is the coprimality indicator.
#[test]
fn component_sum_square_split() {
    use lfmoments::ensemble::{empirical_s, ExecOpts};
    let q = 3u64;
    let field = f3();
    let g = 2usize; // odd ensemble over H_5
    let n_deg = 5usize;
    let cache = CharCache::build(field, g);
    let opts = ExecOpts::default();
    for h in [1usize, 2] {
        for m in 0..=1u32 {
            let direct = empirical_s(q, lfmoments::Parity::Odd, g, h, m, &opts).unwrap();
            let mut split = QuadValue::zero(q);
            for n in 0..=h {
                let mut layer = 0i64;
                if n % 2 == 0 {
                    for e in monic_polys(field, n / 2) {
                        layer += coprime_squarefree_count(field, n_deg, &e).unwrap() as i64;
                    }
                }
                for f in monic_polys(field, n) {
                    if f.sqrt().is_none() {
                        layer += cache.char_sum_over_h(&f, n_deg).unwrap();
                    }
                }
                let weight = (n as i64).pow(m); // 0^0 = 1
                split = split.add(&QuadValue::q_pow_neg_half(q, n as u32).mul_int(weight * layer));
            }
            assert_eq!(direct, split, "h={h} m={m}");
        }
    }
}

fn small_rational() -> impl Strategy<Value = BigRational> {
    (-50i64..50, 1i64..20).prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

fn quad_value() -> impl Strategy<Value = QuadValue> {
    (small_rational(), small_rational()).prop_map(|(a, b)| QuadValue::new(3, a, b))
}

proptest! {
    #[test]
    fn quad_mul_associates(x in quad_value(), y in quad_value(), z in quad_value()) {
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
    }

    #[test]
    fn quad_mul_distributes(x in quad_value(), y in quad_value(), z in quad_value()) {
        prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
    }

    #[test]
    fn quad_float_embedding_consistent(x in quad_value()) {
        // The embedding must agree with evaluating the two components
        // separately at double precision.
        let direct = x.rational_part().to_f64().unwrap()
            + x.surd_part().to_f64().unwrap() / 3f64.sqrt();
        prop_assert!((x.to_f64() - direct).abs() <= 1e-14 * (1.0 + direct.abs()));
    }

    #[test]
    fn poly_divrem_reconstructs(a in prop::collection::vec(0u64..3, 0..9),
                                b in prop::collection::vec(0u64..3, 1..6)) {
        let field = f3();
        let fa = FqPoly::new(field, a);
        let fb = FqPoly::new(field, b);
        prop_assume!(!fb.is_zero());
        let (q, r) = fa.divrem(&fb).unwrap();
        prop_assert_eq!(q.mul(&fb).add(&r), fa);
        if let (Some(rd), Some(bd)) = (r.degree(), fb.degree()) {
            prop_assert!(rd < bd);
        }
    }

    #[test]
    fn poly_gcd_divides_both(a in prop::collection::vec(0u64..3, 1..8),
                             b in prop::collection::vec(0u64..3, 1..8)) {
        let field = f3();
        let fa = FqPoly::new(field, a);
        let fb = FqPoly::new(field, b);
        prop_assume!(!fa.is_zero() && !fb.is_zero());
        let g = fa.gcd(&fb);
        prop_assert!(fa.rem(&g).unwrap().is_zero());
        prop_assert!(fb.rem(&g).unwrap().is_zero());
    }

    #[test]
    fn factor_reconstructs_product(a in prop::collection::vec(0u64..3, 0..6)) {
        let field = f3();
        let mut f = FqPoly::new(field, a);
        if f.is_zero() {
            f = FqPoly::one(field);
        }
        let f = f.monic();
        let table = IrreducibleTable::build(field, 6);
        let fac = table.factor(&f).unwrap();
        prop_assert_eq!(fac.product(field), f);
    }
}
