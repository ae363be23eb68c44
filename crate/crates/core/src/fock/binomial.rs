use statrs::function::gamma::ln_gamma;

/// Largest `n` for which binomials are computed with exact integer arithmetic.
const EXACT_LIMIT: u64 = 60;

/// Binomial coefficient C(n, k) as a float; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    if n <= EXACT_LIMIT {
        exact_binomial(n, k) as f64
    } else {
        ln_binomial(n, k).exp()
    }
}

/// Natural log of C(n, k); `-inf` when `k > n`.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    if n <= EXACT_LIMIT {
        return (exact_binomial(n, k) as f64).ln();
    }
    ln_gamma((n + 1) as f64) - ln_gamma((k + 1) as f64) - ln_gamma((n - k + 1) as f64)
}

fn exact_binomial(n: u64, k: u64) -> u128 {
    let k = k.min(n - k);
    // each partial product is itself a binomial coefficient, so the division is exact
    (0..k).fold(1u128, |acc, i| acc * u128::from(n - i) / u128::from(i + 1))
}
