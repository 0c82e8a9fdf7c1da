//! Normal distribution and binomial confidence intervals.
//!
//! The normal CDF uses `libm::erfc` (the FreeBSD/musl rational
//! approximation, sub-ulp error). The quantile starts from the Boost
//! `erfc_inv` approximation in `statrs` and is polished with Newton steps
//! against that CDF, giving absolute error well under 1e-12. Both the enumeration oracles
//! and the circuit builders call these same functions.

use statrs::function::beta::inv_beta_reg;
use statrs::function::erf::erfc_inv;

use std::f64::consts::{PI, SQRT_2};

/// Standard normal density.
pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// Standard normal CDF `F`.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / SQRT_2)
}

/// Standard normal quantile `F⁻¹`; returns ∓∞ at 0 and 1.
pub fn normal_quantile(p: f64) -> f64 {
    if p <= 0.0 {
        f64::NEG_INFINITY
    } else if p >= 1.0 {
        f64::INFINITY
    } else if p > 0.5 {
        -lower_quantile(1.0 - p)
    } else {
        lower_quantile(p)
    }
}

fn lower_quantile(p: f64) -> f64 {
    let mut x = -SQRT_2 * erfc_inv(2.0 * p);
    for _ in 0..3 {
        let density = normal_pdf(x);
        if density == 0.0 {
            break;
        }
        x -= (normal_cdf(x) - p) / density;
    }
    x
}

/// Two-sided normal critical value `z` with `P(|Z| > z) = alpha`.
pub fn normal_critical(alpha: f64) -> f64 {
    normal_quantile(1.0 - alpha / 2.0)
}

/// Clopper–Pearson interval for a binomial proportion at confidence `1 − alpha`.
pub fn clopper_pearson(hits: u64, trials: u64, alpha: f64) -> (f64, f64) {
    assert!(trials > 0 && hits <= trials, "invalid binomial counts");
    let (k, n) = (hits as f64, trials as f64);
    let lo = if hits == 0 {
        0.0
    } else {
        inv_beta_reg(k, n - k + 1.0, alpha / 2.0)
    };
    let hi = if hits == trials {
        1.0
    } else {
        inv_beta_reg(k + 1.0, n - k, 1.0 - alpha / 2.0)
    };
    (lo.clamp(0.0, 1.0), hi.clamp(0.0, 1.0))
}

/// One-sided Clopper–Pearson upper bound for `hits == 0`, i.e. `1 − alpha^{1/n}`.
pub fn zero_hits_upper(trials: u64, alpha: f64) -> f64 {
    1.0 - alpha.powf(1.0 / trials as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values from scipy.stats (norm.cdf / norm.ppf / beta.ppf).
    #[test]
    fn normal_reference_values() {
        assert!((normal_quantile(0.15) - -1.0364333894937898).abs() < 1e-12);
        assert!((normal_quantile(0.25) - -0.6744897501960817).abs() < 1e-12);
        assert!(
            (normal_cdf(-1.0364333894937898 / 0.9f64.sqrt()) - 0.13730741614191166).abs() < 1e-12
        );
        assert!((normal_cdf(1.0) - 0.8413447460685429).abs() < 1e-14);
        assert_eq!(normal_quantile(0.5), 0.0);
        assert!((normal_critical(0.05) - 1.959963984540054).abs() < 1e-12);
    }

    #[test]
    fn cdf_quantile_round_trip() {
        for i in 1..1000 {
            let p = i as f64 / 1000.0;
            assert!((normal_cdf(normal_quantile(p)) - p).abs() < 1e-12);
        }
    }

    #[test]
    fn clopper_pearson_reference() {
        // scipy: beta.ppf(0.025, 30, 71), beta.ppf(0.975, 31, 70)
        let (lo, hi) = clopper_pearson(30, 100, 0.05);
        assert!((lo - 0.21240642048953667).abs() < 1e-9, "{lo}");
        assert!((hi - 0.3998146761798041).abs() < 1e-9, "{hi}");
        assert_eq!(clopper_pearson(0, 10, 0.05).0, 0.0);
        assert_eq!(clopper_pearson(10, 10, 0.05).1, 1.0);
    }

    #[test]
    fn wider_alpha_never_narrows() {
        let (a_lo, a_hi) = clopper_pearson(37, 200, 0.01);
        let (b_lo, b_hi) = clopper_pearson(37, 200, 0.1);
        assert!(a_lo <= b_lo && a_hi >= b_hi);
    }
}
