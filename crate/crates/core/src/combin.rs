/// Integer power with the convention 0^0 = 1, matching the meaning of the
/// n^m factors in the shifted derivative sums.
pub fn int_pow(base: i128, exp: u32) -> i128 {
    let mut acc = 1i128;
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

pub fn binomial(n: u32, k: u32) -> i128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1i128;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc
}

/// mu! / (a! b! c!) for a + b + c = mu.
pub fn multinomial3(mu: u32, a: u32, b: u32, c: u32) -> i128 {
    debug_assert_eq!(a + b + c, mu);
    binomial(mu, a) * binomial(mu - a, b)
}

/// All compositions (a, b, c) of mu into three nonnegative parts.
pub fn compositions3(mu: u32) -> Vec<(u32, u32, u32)> {
    let mut out = Vec::new();
    for a in 0..=mu {
        for b in 0..=(mu - a) {
            out.push((a, b, mu - a - b));
        }
    }
    out
}
