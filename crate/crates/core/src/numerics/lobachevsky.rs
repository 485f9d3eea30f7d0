//! Lobachevsky function kernel.
//!
//! Integrating the product expansion of `ln(2 sin t)` term by term gives
//!
//! ```text
//! Λ(θ) = θ (1 - ln 2θ) + θ Σ_{n≥1} ζ(2n) / (n (2n+1)) · (θ/π)^{2n}
//! ```
//!
//! which converges geometrically with ratio `(θ/π)^2 ≤ 1/4` on `(0, π/2]`.
//! The coefficients `d_n = ζ(2n) (2n)! / π^{2n}` are rationals with small
//! denominators, generated exactly from the convolution identity
//! `Σ_{k=1}^{n-1} ζ(2k) ζ(2n-2k) = (n + 1/2) ζ(2n)`.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::fixed::{self, pow10};

const INTERNAL_GUARD: u32 = 10;
const ZETA_TWO: f64 = 1.644_934_066_848_226_5;

static ZETA_COEFFICIENTS: Mutex<Vec<BigRational>> = Mutex::new(Vec::new());

/// `d_1 .. d_count`, extending the shared table as needed.
fn zeta_coefficients(count: usize) -> Vec<BigRational> {
    let mut table = ZETA_COEFFICIENTS
        .lock()
        .unwrap_or_else(|poisoned| poisoned.into_inner());
    if table.is_empty() {
        table.push(BigRational::new(BigInt::one(), BigInt::from(3)));
    }
    while table.len() < count {
        let n = table.len() + 1;
        let two_n = 2 * n as u64;
        let mut binomial = BigInt::one();
        let mut acc = BigRational::zero();
        for k in 1..n {
            // binomial = C(2n, 2k), built from C(2n, 2k-2)
            let j = 2 * k as u64;
            binomial = binomial * (two_n - j + 2) * (two_n - j + 1) / ((j - 1) * j);
            acc += &table[k - 1] * &table[n - k - 1] * BigRational::from_integer(binomial.clone());
        }
        let d = acc * BigRational::new(BigInt::from(2), BigInt::from(two_n + 1));
        table.push(d);
    }
    table[..count].to_vec()
}

/// Terms needed so the series tail drops below `10^-(scale+2)`.
fn terms_needed(theta: &BigInt, scale: u32) -> usize {
    let theta_f = theta.to_f64().unwrap_or(f64::MAX) / 10f64.powi(scale as i32);
    let ratio = (theta_f * (1.0 + 1e-12) / std::f64::consts::PI).powi(2);
    assert!(ratio < 0.3, "series ratio out of range");
    let log_ratio = ratio.log10();
    let base = (theta_f * ZETA_TWO / (1.0 - ratio)).log10();
    let target = -(scale as f64) - 2.0;
    let mut n = 1usize;
    loop {
        let nf = n as f64;
        let bound = base + (nf + 1.0) * log_ratio - ((nf + 1.0) * (2.0 * nf + 3.0)).log10();
        if bound < target {
            return n;
        }
        n += 1;
    }
}

/// Λ(θ) with θ and the result as fixed-point integers at `scale`.
pub(crate) fn lobachevsky_raw(theta: &BigInt, scale: u32) -> BigInt {
    if theta.is_zero() {
        return BigInt::zero();
    }
    // small angles lose relative precision in the fixed-point powers
    let shortfall = scale.saturating_sub(fixed::integer_digits(theta));
    let s = scale + INTERNAL_GUARD + shortfall.min(scale);
    let theta = fixed::rescale(theta, scale, s);
    let one = pow10(s);

    let two_theta = &theta * 2u32;
    let lead = fixed::mul(&theta, &(&one - fixed::ln(&two_theta, s)), s);

    let count = terms_needed(&theta, s);
    let coefficients = zeta_coefficients(count);
    let theta_sq = fixed::mul(&theta, &theta, s);
    let mut power = theta_sq.clone();
    let mut factorial = BigInt::from(2u32);
    let mut series = BigInt::zero();
    for (i, d) in coefficients.iter().enumerate() {
        let n = i as u64 + 1;
        if n > 1 {
            power = fixed::mul(&power, &theta_sq, s);
            factorial = factorial * (2 * n - 1) * (2 * n);
        }
        let den = d.denom() * &factorial * (n * (2 * n + 1));
        series += fixed::div_round(&(&power * d.numer()), &den);
    }
    let raw = lead + fixed::mul(&theta, &series, s);
    fixed::rescale(&raw, s, scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    #[test]
    fn coefficients_match_bernoulli_numbers() {
        // d_n = 2^{2n-1} |B_{2n}|
        let d = zeta_coefficients(4);
        let expect = [(1, 3), (4, 15), (16, 21), (64, 15)];
        for (got, (p, q)) in d.iter().zip(expect) {
            assert_eq!(got, &BigRational::new(BigInt::from(p), BigInt::from(q)));
        }
    }

    #[test]
    fn vanishes_at_half_pi() {
        let s = 40;
        let half_pi = fixed::pi(s) / 2u32;
        let v = lobachevsky_raw(&half_pi, s);
        assert!(v.abs() <= BigInt::from(2), "{v}");
    }

    #[test]
    fn tiny_angle_matches_leading_term() {
        // Λ(θ) ≈ θ(1 - ln 2θ) + θ^3/18 for small θ
        let s = 30;
        let theta = pow10(s - 6); // 1e-6
        let got = lobachevsky_raw(&theta, s).to_f64().unwrap() / 1e30;
        let t = 1e-6f64;
        let want = t * (1.0 - (2.0 * t).ln());
        assert!((got - want).abs() < 1e-18, "{got} vs {want}");
    }
}
