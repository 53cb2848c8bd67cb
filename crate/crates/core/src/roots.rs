use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_ITERS: usize = 400;

/// All complex roots of a real-coefficient polynomial (ascending
/// coefficients), by Aberth-Ehrlich simultaneous iteration.
///
/// Callers pass square-free polynomials, so the roots are simple and the
/// iteration converges to near machine precision for the small degrees in
/// play here.
pub fn complex_roots(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let mut c: Vec<f64> = coeffs.to_vec();
    while c.last() == Some(&0.0) {
        c.pop();
    }
    assert!(!c.is_empty(), "zero polynomial has no root set");
    let deg = c.len() - 1;
    if deg == 0 {
        return Ok(Vec::new());
    }
    // Monic normalization.
    let lead = c[deg];
    for v in c.iter_mut() {
        *v /= lead;
    }

    // Cauchy bound on root modulus, with spread initial angles.
    let radius = 1.0 + c[..deg].iter().map(|v| v.abs()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * (k as f64) / (deg as f64) + 0.3617;
            Complex64::from_polar(radius * 0.7, theta)
        })
        .collect();

    for _ in 0..MAX_ITERS {
        let mut max_step = 0.0f64;
        for k in 0..deg {
            let (p, dp) = horner_with_derivative(&c, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let w = if dp.norm() == 0.0 {
                // Sitting on a critical point: nudge off it.
                Complex64::new(1e-8, 1e-8)
            } else {
                p / dp
            };
            let mut repulsion = Complex64::new(0.0, 0.0);
            for (j, zj) in z.iter().enumerate() {
                if j != k {
                    repulsion += (z[k] - zj).inv();
                }
            }
            let denom = Complex64::new(1.0, 0.0) - w * repulsion;
            let step = if denom.norm() < 1e-12 { w } else { w / denom };
            z[k] -= step;
            max_step = max_step.max(step.norm() / (1.0 + z[k].norm()));
        }
        if max_step < 1e-15 {
            // Final Newton polish.
            for zk in z.iter_mut() {
                for _ in 0..3 {
                    let (p, dp) = horner_with_derivative(&c, *zk);
                    if dp.norm() > 0.0 {
                        *zk -= p / dp;
                    }
                }
            }
            return Ok(z);
        }
    }
    Err(Error::RootsDiverged(MAX_ITERS))
}

fn horner_with_derivative(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}
