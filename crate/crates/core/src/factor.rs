use crate::enumerate::monic_polys;
use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::poly::FqPoly;

/// Complete factorization of a monic polynomial into distinct monic
/// irreducibles with multiplicities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub factors: Vec<(FqPoly, u32)>,
}

impl Factorization {
    pub fn product(&self, field: FieldCtx) -> FqPoly {
        let mut acc = FqPoly::one(field);
        for (p, e) in &self.factors {
            for _ in 0..*e {
                acc = acc.mul(p);
            }
        }
        acc
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|(_, e)| *e == 1)
    }
}

/// Monic irreducibles of F_q[t] up to a degree bound, grouped by degree.
///
/// Built once by a sieve (divisibility against the smaller irreducibles),
/// then used read-only: factorization here is plain trial division, which
/// is the right tool at the degrees this crate ever touches.
#[derive(Debug, Clone)]
pub struct IrreducibleTable {
    field: FieldCtx,
    max_degree: usize,
    by_degree: Vec<Vec<FqPoly>>,
}

impl IrreducibleTable {
    pub fn build(field: FieldCtx, max_degree: usize) -> Self {
        let mut by_degree: Vec<Vec<FqPoly>> = vec![Vec::new()];
        for d in 1..=max_degree {
            let mut irr = Vec::new();
            'cand: for f in monic_polys(field, d) {
                for lower in 1..=d / 2 {
                    for p in &by_degree[lower] {
                        if f.rem(p).expect("nonzero divisor").is_zero() {
                            continue 'cand;
                        }
                    }
                }
                irr.push(f);
            }
            by_degree.push(irr);
        }
        IrreducibleTable {
            field,
            max_degree,
            by_degree,
        }
    }

    pub fn field(&self) -> FieldCtx {
        self.field
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Irreducibles of exactly the given degree, in enumeration order.
    pub fn of_degree(&self, d: usize) -> &[FqPoly] {
        &self.by_degree[d]
    }

    pub fn count_of_degree(&self, d: usize) -> usize {
        self.by_degree[d].len()
    }

    /// All irreducibles of degree at most `d`, ascending by degree.
    pub fn up_to(&self, d: usize) -> impl Iterator<Item = &FqPoly> {
        self.by_degree[1..=d.min(self.max_degree)].iter().flatten()
    }

    /// Trial-division factorization of a monic nonzero polynomial.
    ///
    /// Requires the table to cover degree `deg(f) / 2`; whatever remains
    /// after stripping those divisors is itself irreducible.
    pub fn factor(&self, f: &FqPoly) -> Result<Factorization> {
        if f.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if !f.is_monic() {
            return Err(Error::NotMonic(f.to_string()));
        }
        let deg = f.degree().unwrap();
        assert!(
            deg / 2 <= self.max_degree,
            "irreducible table covers degree {} but factoring degree {}",
            self.max_degree,
            deg
        );
        let mut factors = Vec::new();
        let mut rest = f.clone();
        'outer: for d in 1..=self.max_degree {
            for p in &self.by_degree[d] {
                let rest_deg = match rest.degree() {
                    Some(r) => r,
                    None => break 'outer,
                };
                if 2 * d > rest_deg {
                    break 'outer;
                }
                let mut mult = 0u32;
                loop {
                    let (quot, rem) = rest.divrem(p).expect("nonzero divisor");
                    if rem.is_zero() {
                        mult += 1;
                        rest = quot;
                    } else {
                        break;
                    }
                }
                if mult > 0 {
                    factors.push((p.clone(), mult));
                }
            }
        }
        if rest.degree().unwrap_or(0) > 0 {
            factors.push((rest, 1));
        }
        factors.sort_by_key(|(p, _)| (p.degree().unwrap(), p.coeffs().to_vec()));
        Ok(Factorization { factors })
    }

    /// Moebius function: 0 on non-square-free input, else (-1)^{#factors}.
    pub fn moebius(&self, f: &FqPoly) -> Result<i8> {
        let fac = self.factor(f)?;
        if !fac.is_squarefree() {
            return Ok(0);
        }
        Ok(if fac.factors.len().is_multiple_of(2) {
            1
        } else {
            -1
        })
    }
}

/// Number of monic irreducibles of each degree up to `n`, by the necklace
/// counting formula (1/d) * sum_{e | d} mu(e) q^{d/e}.
///
/// Independent of [`IrreducibleTable`]; the two are checked against each
/// other in tests.
pub fn irreducible_counts(q: u64, n: usize) -> Vec<u64> {
    let mut counts = vec![0u64; n + 1];
    for d in 1..=n {
        let mut total: i128 = 0;
        for e in 1..=d {
            if d.is_multiple_of(e) {
                let m = int_moebius(e as u64);
                if m != 0 {
                    total += m as i128 * (q as i128).pow((d / e) as u32);
                }
            }
        }
        counts[d] = (total / d as i128) as u64;
    }
    counts
}

fn int_moebius(mut n: u64) -> i8 {
    let mut factors = 0u32;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            factors += 1;
        }
        d += 1;
    }
    if n > 1 {
        factors += 1;
    }
    if factors.is_multiple_of(2) {
        1
    } else {
        -1
    }
}
