//! Factorials and friends in log space.

/// `ln(n!)` by direct summation; exact enough for the `n <= 10^4` used here.
pub fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

pub fn factorial(n: usize) -> f64 {
    (2..=n).map(|k| k as f64).product()
}

/// `Gamma(n + 1/2) = (2n)! sqrt(pi) / (4^n n!)`.
pub fn gamma_half_integer(n: usize) -> f64 {
    (ln_factorial(2 * n) - ln_factorial(n) - (n as f64) * 4f64.ln()).exp()
        * std::f64::consts::PI.sqrt()
}

/// `sqrt((2n)!) / (2^n n!)`, built by the ratio `sqrt((2k-1)/(2k))`.
pub fn even_coefficient(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| {
        acc * ((2 * k - 1) as f64 / (2 * k) as f64).sqrt()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(factorial(5), 120.0);
        assert!((ln_factorial(10) - 3628800f64.ln()).abs() < 1e-12);
        assert!((gamma_half_integer(0) - std::f64::consts::PI.sqrt()).abs() < 1e-15);
        // Gamma(5/2) = 3 sqrt(pi) / 4
        assert!((gamma_half_integer(2) - 0.75 * std::f64::consts::PI.sqrt()).abs() < 1e-14);
        // sqrt(4!)/(4*2) = sqrt(24)/8
        assert!((even_coefficient(2) - 24f64.sqrt() / 8.0).abs() < 1e-15);
    }
}
