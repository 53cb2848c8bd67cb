use crate::enumerate::{monic_polys, squarefree_polys};
use crate::error::{Error, Result};
use crate::factor::{Factorization, IrreducibleTable};
use crate::field::FieldCtx;
use crate::poly::FqPoly;

/// Value of the quadratic character: -1, 0, or +1.
pub type CharValue = i8;

/// Evaluation context for the quadratic residue character chi_D.
///
/// For an irreducible P, chi_D(P) is 0 when P | D and otherwise +-1
/// according to whether D is a square in F_q[t]/(P); chi_D extends to all
/// monic f multiplicatively. The ensemble sweeps re-evaluate chi_D(f) for
/// every monic f up to a degree bound q^{2g+1} times over, so this cache
/// precomputes, per irreducible P, a quadratic-residue lookup table indexed
/// by residue, and per monic f its factorization into table indices. Both
/// structures are immutable after construction; readers share them freely.
pub struct CharCache {
    field: FieldCtx,
    max_degree: usize,
    primes: Vec<FqPoly>,
    prime_degrees: Vec<usize>,
    /// Per prime, chi of every residue (indexed by base-q digits).
    qr_tables: Vec<Vec<i8>>,
    /// fact_lists[n][k] = factorization of the k-th monic degree-n
    /// polynomial as (prime index, multiplicity) pairs.
    fact_lists: Vec<Vec<Vec<(u32, u8)>>>,
    table: IrreducibleTable,
}

impl CharCache {
    /// Build the cache for all monic f of degree <= `max_degree`.
    pub fn build(field: FieldCtx, max_degree: usize) -> Self {
        let q = field.q();
        let table = IrreducibleTable::build(field, max_degree.max(1));
        let mut primes = Vec::new();
        let mut prime_degrees = Vec::new();
        for d in 1..=max_degree.max(1) {
            for p in table.of_degree(d) {
                primes.push(p.clone());
                prime_degrees.push(d);
            }
        }

        let qr_tables = primes
            .iter()
            .map(|p| Self::qr_table(field, p))
            .collect::<Vec<_>>();

        // Index of each prime for factorization lookups.
        let prime_index: std::collections::HashMap<Vec<u64>, u32> = primes
            .iter()
            .enumerate()
            .map(|(i, p)| (p.coeffs().to_vec(), i as u32))
            .collect();

        let mut fact_lists: Vec<Vec<Vec<(u32, u8)>>> = Vec::with_capacity(max_degree + 1);
        for n in 0..=max_degree {
            let mut per_degree = Vec::with_capacity(q.pow(n as u32) as usize);
            for f in monic_polys(field, n) {
                let fac = table.factor(&f).expect("monic nonzero");
                let list = fac
                    .factors
                    .iter()
                    .map(|(p, e)| (prime_index[p.coeffs()], *e as u8))
                    .collect();
                per_degree.push(list);
            }
            fact_lists.push(per_degree);
        }

        CharCache {
            field,
            max_degree,
            primes,
            prime_degrees,
            qr_tables,
            fact_lists,
            table,
        }
    }

    /// chi(. mod P) for every residue, built by marking the image of the
    /// squaring map. Index 0 is the zero residue.
    fn qr_table(field: FieldCtx, p: &FqPoly) -> Vec<i8> {
        let q = field.q();
        let d = p.degree().unwrap();
        let size = q.pow(d as u32) as usize;
        let mut tab = vec![-1i8; size];
        tab[0] = 0;
        let mut r = vec![0u64; d];
        let mut scratch = vec![0u64; 2 * d];
        for _idx in 1..size {
            // Advance the residue odometer.
            let mut j = 0;
            loop {
                r[j] += 1;
                if r[j] < q {
                    break;
                }
                r[j] = 0;
                j += 1;
            }
            // Square r modulo p.
            scratch.clear();
            scratch.resize(2 * d, 0);
            for (i, &a) in r.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for (j2, &b) in r.iter().enumerate() {
                    scratch[i + j2] = field.add(scratch[i + j2], field.mul(a, b));
                }
            }
            reduce_in_place(field, &mut scratch, p.coeffs());
            let sq_idx = encode_residue(q, &scratch);
            tab[sq_idx] = 1;
        }
        tab
    }

    pub fn field(&self) -> FieldCtx {
        self.field
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn irreducibles(&self) -> &IrreducibleTable {
        &self.table
    }

    pub fn prime_count(&self) -> usize {
        self.primes.len()
    }

    /// chi_D(P) for the idx-th cached prime, via residue lookup.
    /// `scratch` must be reusable storage owned by the caller.
    pub fn chi_prime_at(&self, scratch: &mut Vec<u64>, d: &FqPoly, idx: usize) -> i8 {
        let q = self.field.q();
        let p = &self.primes[idx];
        let pd = self.prime_degrees[idx];
        scratch.clear();
        scratch.extend_from_slice(d.coeffs());
        reduce_in_place(self.field, scratch, p.coeffs());
        debug_assert!(scratch.len() <= pd);
        let code = encode_residue(q, scratch);
        self.qr_tables[idx][code]
    }

    /// chi_D(P) for every cached prime in order.
    pub fn chi_vector(&self, d: &FqPoly) -> Vec<i8> {
        let mut scratch = Vec::with_capacity(d.coeffs().len() + 1);
        let mut out = Vec::with_capacity(self.primes.len());
        self.chi_vector_into(&mut scratch, d, &mut out);
        out
    }

    /// Allocation-free variant of [`Self::chi_vector`] for sweep loops.
    pub fn chi_vector_into(&self, scratch: &mut Vec<u64>, d: &FqPoly, out: &mut Vec<i8>) {
        out.clear();
        out.extend((0..self.primes.len()).map(|i| self.chi_prime_at(scratch, d, i)));
    }

    /// chi_D(f) from a precomputed chi vector, using the cached
    /// factorization of the k-th monic polynomial of degree n.
    #[inline]
    pub fn chi_from_vector(&self, chis: &[i8], n: usize, k: usize) -> i8 {
        let mut sign = 1i8;
        for &(pi, e) in &self.fact_lists[n][k] {
            let c = chis[pi as usize];
            if c == 0 {
                return 0;
            }
            if c < 0 && e % 2 == 1 {
                sign = -sign;
            }
        }
        sign
    }

    fn validate_d(&self, d: &FqPoly) -> Result<()> {
        if !d.is_monic() {
            return Err(Error::NotMonic(d.to_string()));
        }
        if !d.is_squarefree()? {
            return Err(Error::NotSquarefree(d.to_string()));
        }
        Ok(())
    }

    /// The quadratic character chi_D(f) for monic square-free D and monic
    /// nonzero f, extended multiplicatively over the factorization of f.
    pub fn chi(&self, d: &FqPoly, f: &FqPoly) -> Result<CharValue> {
        self.validate_d(d)?;
        if !f.is_monic() {
            return Err(Error::NotMonic(f.to_string()));
        }
        let fac = self.table.factor(f)?;
        let mut scratch = Vec::new();
        let mut sign = 1i8;
        for (p, e) in &fac.factors {
            let idx = self
                .primes
                .iter()
                .position(|c| c == p)
                .expect("factor within cached degree range");
            let c = self.chi_prime_at(&mut scratch, d, idx);
            if c == 0 {
                return Ok(0);
            }
            if c < 0 && e % 2 == 1 {
                sign = -sign;
            }
        }
        Ok(sign)
    }

    /// A(n, chi_D) = sum of chi_D(f) over monic f of degree n.
    pub fn coeff_a(&self, d: &FqPoly, n: usize) -> Result<i64> {
        self.validate_d(d)?;
        if n == 0 {
            return Ok(1);
        }
        assert!(
            n <= self.max_degree,
            "cache covers degree {} but degree {} requested",
            self.max_degree,
            n
        );
        let chis = self.chi_vector(d);
        Ok(self.coeff_a_from_vector(&chis, n))
    }

    #[inline]
    pub fn coeff_a_from_vector(&self, chis: &[i8], n: usize) -> i64 {
        let mut sum = 0i64;
        for k in 0..self.fact_lists[n].len() {
            sum += self.chi_from_vector(chis, n, k) as i64;
        }
        debug_assert!(sum.unsigned_abs() <= self.field.q().pow(n as u32));
        sum
    }

    /// A(0..=nmax, chi_D) in one pass over the cached factorizations.
    pub fn a_coeffs(&self, d: &FqPoly, nmax: usize) -> Result<Vec<i64>> {
        self.validate_d(d)?;
        let chis = self.chi_vector(d);
        Ok(self.a_coeffs_from_vector(&chis, nmax))
    }

    pub fn a_coeffs_from_vector(&self, chis: &[i8], nmax: usize) -> Vec<i64> {
        (0..=nmax)
            .map(|n| {
                if n == 0 {
                    1
                } else {
                    self.coeff_a_from_vector(chis, n)
                }
            })
            .collect()
    }

    /// Sum of chi_D(f) over all square-free monic D of degree n.
    pub fn char_sum_over_h(&self, f: &FqPoly, n: usize) -> Result<i64> {
        if !f.is_monic() {
            return Err(Error::NotMonic(f.to_string()));
        }
        let fac = self.table.factor(f)?;
        let idxs: Vec<(usize, u8)> = fac
            .factors
            .iter()
            .map(|(p, e)| {
                (
                    self.primes
                        .iter()
                        .position(|c| c == p)
                        .expect("factor within cached degree range"),
                    *e as u8,
                )
            })
            .collect();
        let mut scratch = Vec::new();
        let mut sum = 0i64;
        for d in squarefree_polys(self.field, n) {
            let mut sign = 1i64;
            for &(pi, e) in &idxs {
                let c = self.chi_prime_at(&mut scratch, &d, pi);
                if c == 0 {
                    sign = 0;
                    break;
                }
                if c < 0 && e % 2 == 1 {
                    sign = -sign;
                }
            }
            sum += sign;
        }
        Ok(sum)
    }
}

/// Plain Euler-criterion evaluation of chi_D(P): the residue D mod P raised
/// to (|P| - 1)/2 in F_q[t]/(P). Reference route for the cached tables.
pub fn chi_prime_euler(field: FieldCtx, d: &FqPoly, p: &FqPoly) -> i8 {
    let r = d.rem(p).expect("nonzero modulus");
    if r.is_zero() {
        return 0;
    }
    let pd = p.degree().unwrap();
    let exp = (field.q().pow(pd as u32) - 1) / 2;
    let mut acc = FqPoly::one(field);
    let mut base = r;
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&base).rem(p).expect("nonzero modulus");
        }
        base = base.mul(&base).rem(p).expect("nonzero modulus");
        e >>= 1;
    }
    if acc == FqPoly::one(field) {
        1
    } else {
        -1
    }
}

/// Count of square-free monic D of degree n coprime to f.
pub fn coprime_squarefree_count(field: FieldCtx, n: usize, f: &FqPoly) -> Result<u64> {
    if !f.is_monic() {
        return Err(Error::NotMonic(f.to_string()));
    }
    let mut count = 0u64;
    for d in squarefree_polys(field, n) {
        if d.gcd(f).degree() == Some(0) {
            count += 1;
        }
    }
    Ok(count)
}

/// Divide distinct irreducible factors out of a factorization.
pub fn distinct_primes(fac: &Factorization) -> Vec<&FqPoly> {
    fac.factors.iter().map(|(p, _)| p).collect()
}

#[inline]
fn encode_residue(q: u64, coeffs: &[u64]) -> usize {
    let mut idx = 0u64;
    for &c in coeffs.iter().rev() {
        idx = idx * q + c;
    }
    idx as usize
}

/// In-place remainder of `buf` modulo the monic polynomial `m`.
fn reduce_in_place(field: FieldCtx, buf: &mut Vec<u64>, m: &[u64]) {
    let d = m.len() - 1;
    while buf.last() == Some(&0) {
        buf.pop();
    }
    if buf.len() <= d {
        return;
    }
    for k in (d..buf.len()).rev() {
        let c = buf[k];
        if c == 0 {
            continue;
        }
        buf[k] = 0;
        for (i, &b) in m.iter().enumerate().take(d) {
            buf[k - d + i] = field.sub(buf[k - d + i], field.mul(c, b));
        }
    }
    buf.truncate(d);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> FieldCtx {
        FieldCtx::new(3).unwrap()
    }

    fn p3(coeffs: &[u64]) -> FqPoly {
        FqPoly::new(f3(), coeffs.to_vec())
    }

    #[test]
    fn chi_examples() {
        let cache = CharCache::build(f3(), 2);
        // P | D
        assert_eq!(cache.chi(&p3(&[0, 1]), &p3(&[0, 1])).unwrap(), 0);
        // t mod (t+1) = 2, a non-square mod 3
        assert_eq!(cache.chi(&p3(&[0, 1]), &p3(&[1, 1])).unwrap(), -1);
        // (t+1) mod t = 1, a square
        assert_eq!(cache.chi(&p3(&[1, 1]), &p3(&[0, 1])).unwrap(), 1);
        // chi(D, 1) = 1
        assert_eq!(cache.chi(&p3(&[0, 1]), &p3(&[1])).unwrap(), 1);
    }

    #[test]
    fn chi_rejects_bad_inputs() {
        let cache = CharCache::build(f3(), 2);
        // D = t^2 is not square-free
        assert!(cache.chi(&p3(&[0, 0, 1]), &p3(&[0, 1])).is_err());
        // f = 2t is not monic
        assert!(cache.chi(&p3(&[0, 1]), &p3(&[0, 2])).is_err());
    }

    #[test]
    fn tables_match_euler_criterion() {
        for q in [3u64, 5] {
            let field = FieldCtx::new(q).unwrap();
            let cache = CharCache::build(field, 3);
            let mut scratch = Vec::new();
            for d in monic_polys(field, 4) {
                if !d.is_squarefree().unwrap() {
                    continue;
                }
                for (i, p) in cache.primes.iter().enumerate() {
                    assert_eq!(
                        cache.chi_prime_at(&mut scratch, &d, i),
                        chi_prime_euler(field, &d, p),
                        "q={q} D={d} P={p}"
                    );
                }
            }
        }
    }

    #[test]
    fn coeff_a_examples() {
        let cache = CharCache::build(f3(), 2);
        // Only f = 1 at n = 0.
        assert_eq!(cache.coeff_a(&p3(&[1, 0, 1]), 0).unwrap(), 1);
        // D = t^2 + 1: chi over the three monic linears sums to -1.
        assert_eq!(cache.coeff_a(&p3(&[1, 0, 1]), 1).unwrap(), -1);
        // D = t^3 + 2t vanishes at every point of F_3.
        assert_eq!(cache.coeff_a(&p3(&[0, 2, 0, 1]), 1).unwrap(), 0);
    }

    #[test]
    fn char_sum_examples() {
        let cache = CharCache::build(f3(), 2);
        // f = 1 counts the ensemble.
        assert_eq!(cache.char_sum_over_h(&p3(&[1]), 3).unwrap(), 18);
        // Frozen from direct enumeration of the 6 square-free monic
        // quadratics over F_3.
        assert_eq!(cache.char_sum_over_h(&p3(&[0, 1]), 2).unwrap(), -2);
        // f = t^2 counts D coprime to t, with sign +1.
        assert_eq!(cache.char_sum_over_h(&p3(&[0, 0, 1]), 2).unwrap(), 4);
    }

    #[test]
    fn char_sum_brute_force_agreement() {
        // Independent route: factor-free evaluation through chi().
        let cache = CharCache::build(f3(), 3);
        for f in monic_polys(f3(), 2) {
            let mut brute = 0i64;
            for d in squarefree_polys(f3(), 3) {
                brute += cache.chi(&d, &f).unwrap() as i64;
            }
            assert_eq!(cache.char_sum_over_h(&f, 3).unwrap(), brute, "f={f}");
        }
    }

    #[test]
    fn coprime_count_examples() {
        assert_eq!(coprime_squarefree_count(f3(), 3, &p3(&[1])).unwrap(), 18);
        assert_eq!(coprime_squarefree_count(f3(), 2, &p3(&[0, 1])).unwrap(), 4);
        // f = t(t+1)(t+2): D must avoid every root, i.e. be irreducible.
        let f = p3(&[0, 1]).mul(&p3(&[1, 1])).mul(&p3(&[2, 1]));
        assert_eq!(coprime_squarefree_count(f3(), 2, &f).unwrap(), 3);
    }

    #[test]
    fn multiplicativity_exhaustive() {
        // chi(D, fg) = chi(D, f) chi(D, g) over all of H_3 and all monic
        // f, g of degree <= 2.
        let cache = CharCache::build(f3(), 4);
        let mut fs = Vec::new();
        for d in 0..=2 {
            fs.extend(monic_polys(f3(), d));
        }
        for d in squarefree_polys(f3(), 3) {
            for f in &fs {
                for g in &fs {
                    let lhs = cache.chi(&d, &f.mul(g)).unwrap();
                    let rhs = cache.chi(&d, f).unwrap() * cache.chi(&d, g).unwrap();
                    assert_eq!(lhs, rhs, "D={d} f={f} g={g}");
                }
            }
        }
    }

    #[test]
    fn chi_depends_only_on_residue() {
        let cache = CharCache::build(f3(), 2);
        let p = p3(&[1, 0, 1]); // t^2 + 1, irreducible
                                // D' = D + k P, both monic square-free, give equal chi values.
        let d1 = p3(&[0, 1]); // t
        let d2 = d1.add(&p.mul(&p3(&[0, 1]))); // t + t(t^2+1) = t^3 + 2t
        assert!(d2.is_squarefree().unwrap());
        assert_eq!(cache.chi(&d1, &p).unwrap(), cache.chi(&d2, &p).unwrap());
    }

    #[test]
    fn chi_on_squares_detects_coprimality() {
        // chi(D, h^2) is 1 exactly when gcd(D, h) = 1, else 0.
        let cache = CharCache::build(f3(), 4);
        for d in squarefree_polys(f3(), 3) {
            for h in monic_polys(f3(), 2) {
                let v = cache.chi(&d, &h.mul(&h)).unwrap();
                let coprime = d.gcd(&h).degree() == Some(0);
                assert_eq!(v == 1, coprime, "D={d} h={h}");
                assert!(v == 0 || v == 1);
            }
        }
    }
}
