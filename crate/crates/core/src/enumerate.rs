use crate::field::FieldCtx;
use crate::poly::FqPoly;

/// Deterministic stream of the q^n monic polynomials of degree `n`,
/// ordered lexicographically by coefficient vector with the constant term
/// cycling fastest. Index k maps to the base-q digits of k.
#[derive(Debug, Clone)]
pub struct MonicRange {
    field: FieldCtx,
    degree: usize,
    next: u64,
    end: u64,
}

impl MonicRange {
    pub fn all(field: FieldCtx, degree: usize) -> Self {
        let total = field.q().pow(degree as u32);
        Self::slice(field, degree, 0, total)
    }

    /// The contiguous sub-stream of indices `[start, end)`. Slices with the
    /// same bounds always yield the same polynomials, so parallel consumers
    /// can partition the index space without coordination.
    pub fn slice(field: FieldCtx, degree: usize, start: u64, end: u64) -> Self {
        let total = field.q().pow(degree as u32);
        assert!(start <= end && end <= total, "slice out of range");
        MonicRange {
            field,
            degree,
            next: start,
            end,
        }
    }

    /// Split `0..q^n` into `chunks` contiguous slices covering everything.
    pub fn chunks(field: FieldCtx, degree: usize, chunks: usize) -> Vec<MonicRange> {
        let total = field.q().pow(degree as u32);
        let chunks = chunks.max(1) as u64;
        let per = total.div_ceil(chunks);
        let mut out = Vec::new();
        let mut start = 0;
        while start < total {
            let end = (start + per).min(total);
            out.push(Self::slice(field, degree, start, end));
            start = end;
        }
        out
    }

    pub fn remaining(&self) -> u64 {
        self.end - self.next
    }
}

impl Iterator for MonicRange {
    type Item = FqPoly;

    fn next(&mut self) -> Option<FqPoly> {
        if self.next >= self.end {
            return None;
        }
        let poly = index_to_monic(self.field, self.degree, self.next);
        self.next += 1;
        Some(poly)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.remaining() as usize;
        (n, Some(n))
    }
}

/// Monic polynomial of degree `n` whose lower coefficients are the base-q
/// digits of `index` (least significant digit = constant term).
pub fn index_to_monic(field: FieldCtx, degree: usize, index: u64) -> FqPoly {
    let q = field.q();
    let mut coeffs = vec![0u64; degree + 1];
    let mut k = index;
    for c in coeffs.iter_mut().take(degree) {
        *c = k % q;
        k /= q;
    }
    debug_assert_eq!(k, 0, "index out of range for degree");
    coeffs[degree] = 1;
    FqPoly::new(field, coeffs)
}

pub fn monic_polys(field: FieldCtx, degree: usize) -> MonicRange {
    MonicRange::all(field, degree)
}

/// The square-free members of the degree-`n` stream, in the same order.
pub fn squarefree_polys(field: FieldCtx, degree: usize) -> impl Iterator<Item = FqPoly> {
    monic_polys(field, degree).filter(|f| f.is_squarefree().expect("nonzero"))
}

/// |H_n|: q^n - q^{n-1} for n >= 2, else q^n.
pub fn squarefree_count(q: u64, degree: usize) -> u64 {
    match degree {
        0 | 1 => q.pow(degree as u32),
        n => q.pow(n as u32) - q.pow(n as u32 - 1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> FieldCtx {
        FieldCtx::new(3).unwrap()
    }

    #[test]
    fn monic_counts() {
        assert_eq!(monic_polys(f3(), 0).count(), 1);
        assert_eq!(monic_polys(f3(), 2).count(), 9);
        assert_eq!(monic_polys(f3(), 3).count(), 27);
        let only: Vec<_> = monic_polys(f3(), 0).collect();
        assert_eq!(only, vec![FqPoly::one(f3())]);
    }

    #[test]
    fn constant_term_cycles_fastest() {
        let first: Vec<Vec<u64>> = monic_polys(f3(), 2)
            .take(4)
            .map(|f| f.coeffs().to_vec())
            .collect();
        // t^2, t^2+1, t^2+2, t^2+t
        assert_eq!(
            first,
            vec![vec![0, 0, 1], vec![1, 0, 1], vec![2, 0, 1], vec![0, 1, 1],]
        );
    }

    #[test]
    fn chunks_cover_everything_in_order() {
        for chunks in [1, 2, 8] {
            let split: Vec<_> = MonicRange::chunks(f3(), 3, chunks)
                .into_iter()
                .flatten()
                .collect();
            let whole: Vec<_> = monic_polys(f3(), 3).collect();
            assert_eq!(split, whole, "chunks={chunks}");
        }
    }

    #[test]
    fn squarefree_counts_match_formula() {
        for q in [3u64, 5] {
            let field = FieldCtx::new(q).unwrap();
            let max = 7;
            for n in 2..=max {
                assert_eq!(
                    squarefree_polys(field, n).count() as u64,
                    squarefree_count(q, n),
                    "q={q} n={n}"
                );
            }
        }
    }

    #[test]
    fn squarefree_small_degrees() {
        assert_eq!(squarefree_polys(f3(), 1).count(), 3);
        assert_eq!(squarefree_polys(f3(), 2).count(), 6);
        assert_eq!(squarefree_polys(f3(), 3).count(), 18);
    }
}
