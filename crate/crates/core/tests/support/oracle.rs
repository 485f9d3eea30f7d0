//! Independent reference values.
//!
//! Λ(θ) is obtained by tanh-sinh quadrature of -ln(2 sin t) over [0, θ], with
//! its own fixed-point elementary functions: pi from the Gauss-Legendre AGM,
//! exp and sin from Taylor series, ln from Halley iteration on exp. None of
//! it shares code with the library kernels.

use bigdecimal::BigDecimal;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

struct Fixed {
    scale: u32,
    one: BigInt,
    inv_e: BigInt,
}

impl Fixed {
    fn new(scale: u32) -> Self {
        let mut fx = Self {
            scale,
            one: BigInt::from(10u32).pow(scale),
            inv_e: BigInt::zero(),
        };
        fx.inv_e = fx.div(&fx.one, &fx.exp_small(&fx.one));
        fx
    }

    fn int(&self, n: i64) -> BigInt {
        &self.one * n
    }

    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        (a * b).div_floor(&self.one)
    }

    fn div(&self, a: &BigInt, b: &BigInt) -> BigInt {
        (a * &self.one).div_floor(b)
    }

    fn sqrt(&self, a: &BigInt) -> BigInt {
        (a * &self.one).sqrt()
    }

    fn from_f64(&self, x: f64) -> BigInt {
        // exact enough as a Newton seed
        let s = format!("{:.17e}", x);
        let d: BigDecimal = s.parse().unwrap();
        let (digits, exp) = d.as_bigint_and_exponent();
        let shift = self.scale as i64 - exp;
        if shift >= 0 {
            digits * BigInt::from(10u32).pow(shift as u32)
        } else {
            digits / BigInt::from(10u32).pow((-shift) as u32)
        }
    }

    fn to_f64(&self, a: &BigInt) -> f64 {
        let digits = a.to_string();
        let negative = digits.starts_with('-');
        let digits = digits.trim_start_matches('-');
        let s = self.scale as usize;
        let padded = format!("{:0>width$}", digits, width = s + 1);
        let (int, frac) = padded.split_at(padded.len() - s);
        let v: f64 = format!("{int}.{frac}").parse().unwrap();
        if negative {
            -v
        } else {
            v
        }
    }

    /// Gauss-Legendre arithmetic-geometric mean iteration.
    fn pi(&self) -> BigInt {
        let mut a = self.one.clone();
        let mut b = self.div(&self.one, &self.sqrt(&self.int(2)));
        let mut t = &self.one / 4u32;
        let mut p = BigInt::one();
        let eps = BigInt::from(10u32);
        loop {
            let next_a = (&a + &b) / 2u32;
            b = self.sqrt(&self.mul(&a, &b));
            let d = &a - &next_a;
            t -= &p * self.mul(&d, &d);
            p *= 2u32;
            a = next_a;
            if (&a - &b).abs() < eps {
                break;
            }
        }
        let s = &a + &b;
        self.div(&self.mul(&s, &s), &(t * 4u32))
    }

    /// exp(x) for 0 <= x <= 8 by direct Taylor summation.
    fn exp_small(&self, x: &BigInt) -> BigInt {
        let mut term = self.one.clone();
        let mut sum = self.one.clone();
        let mut k = 1u32;
        while !term.is_zero() {
            term = self.mul(&term, x) / k;
            sum += &term;
            k += 1;
        }
        sum
    }

    /// exp(x) for any x that keeps the result representable.
    fn exp(&self, x: &BigInt) -> BigInt {
        if !x.is_negative() && x <= &self.int(8) {
            return self.exp_small(x);
        }
        if x.is_negative() {
            // e^{-y} = (e^{-1})^n * e^{-f}
            let y = -x;
            let (n, f) = y.div_mod_floor(&self.one);
            let mut power = self.one.clone();
            let mut base = self.inv_e.clone();
            let mut n = n.to_u64().unwrap();
            while n > 0 && !power.is_zero() {
                if n & 1 == 1 {
                    power = self.mul(&power, &base);
                }
                base = self.mul(&base, &base);
                n >>= 1;
            }
            let frac = self.div(&self.one, &self.exp_small(&f));
            return self.mul(&power, &frac);
        }
        let half = self.exp(&(x / 2u32));
        self.mul(&half, &half)
    }

    fn sin(&self, x: &BigInt) -> BigInt {
        let x2 = self.mul(x, x);
        let mut term = x.clone();
        let mut sum = x.clone();
        let mut k = 1u32;
        while !term.is_zero() {
            term = -self.mul(&term, &x2) / ((2 * k) * (2 * k + 1));
            sum += &term;
            k += 1;
        }
        sum
    }

    /// ln(y) for y > 0 by Halley iteration z <- z + 2(y - e^z)/(y + e^z).
    fn ln(&self, y: &BigInt) -> BigInt {
        let mut z = self.from_f64(self.to_f64(y).ln());
        for _ in 0..4 {
            let e = self.exp(&z);
            let step = self.div(&((y - &e) * 2u32), &(y + &e));
            z += &step;
            if step.abs() < BigInt::from(4) {
                break;
            }
        }
        z
    }
}

/// Λ(p/q · π) to `digits` places, by tanh-sinh quadrature.
pub fn lobachevsky_quadrature(p: i64, q: i64, digits: u32) -> BigDecimal {
    let fx = Fixed::new(digits + 15);
    let pi = fx.pi();
    let theta = &pi * p / q;
    let half_pi = &pi / 2u32;
    let cutoff = BigInt::from(10u32).pow(10); // nodes closer than 10^-(scale-10) to 0 are dropped
    let tiny = BigInt::from(10u32);

    let integrand = |x: &BigInt| -> BigInt { -fx.ln(&(fx.sin(x) * 2u32)) };

    // contribution of the node at t (t given as a fixed-point value)
    let node = |t: &BigInt| -> Option<BigInt> {
        let et = fx.exp(&t.abs());
        let inv_et = fx.div(&fx.one, &et);
        let sinh = (&et - &inv_et) / 2u32;
        let cosh = (&et + &inv_et) / 2u32;
        let u = fx.mul(&half_pi, &sinh);
        let e = fx.exp(&(-(u * 2u32)));
        let one_plus_e = &fx.one + &e;
        // distance from the nearer endpoint, as a fraction of θ
        let near = fx.div(&e, &one_plus_e);
        let weight = fx.div(
            &fx.mul(&fx.mul(&half_pi, &cosh), &(&e * 4u32)),
            &fx.mul(&one_plus_e, &one_plus_e),
        );
        if weight < tiny {
            return None;
        }
        let x = if t.is_negative() {
            fx.mul(&theta, &near)
        } else {
            &theta - fx.mul(&theta, &near)
        };
        if x < cutoff {
            return None;
        }
        // dx = θ/2 · weight dt
        Some(fx.mul(&(fx.mul(&theta, &weight) / 2u32), &integrand(&x)))
    };

    let sweep = |h: &BigInt, odd_only: bool| -> BigInt {
        let mut total = BigInt::zero();
        if !odd_only {
            total += node(&BigInt::zero()).unwrap_or_default();
        }
        for sign in [1i32, -1] {
            let mut j = 1u64;
            loop {
                if odd_only && j % 2 == 0 {
                    j += 1;
                    continue;
                }
                let t = h * j * sign;
                match node(&t) {
                    Some(v) => total += v,
                    None => break,
                }
                j += 1;
            }
        }
        total
    };

    let mut h = &fx.one / 8u32;
    let mut sum = sweep(&h, false);
    let mut estimate = fx.mul(&sum, &h);
    let threshold = BigInt::from(10u32).pow(10);
    for _ in 0..8 {
        h /= 2u32;
        sum += sweep(&h, true);
        let next = fx.mul(&sum, &h);
        let change = (&next - &estimate).abs();
        estimate = next;
        if change < threshold {
            break;
        }
    }
    BigDecimal::new(estimate, i64::from(fx.scale)).with_scale_round(
        i64::from(digits),
        bigdecimal::RoundingMode::HalfUp,
    )
}

/// Best rational approximations of the second kind with denominator at most
/// `max_den`, found by scanning every denominator.
///
/// A fraction p/q is recorded when |q r - p| is strictly smaller than for
/// every smaller denominator. Fractions with p = 0 are skipped.
pub fn brute_force_best_approximations(r: &BigRational, max_den: u64) -> Vec<(u64, u64)> {
    let mut best: Option<BigRational> = None;
    let mut out = Vec::new();
    for q in 1..=max_den {
        let qr = r * BigRational::from_integer(q.into());
        let p = qr.round().to_integer();
        let err = (&qr - BigRational::from_integer(p.clone())).abs();
        if best.as_ref().is_none_or(|b| &err < b) {
            best = Some(err);
            if p.is_positive() {
                out.push((p.to_u64().unwrap(), q));
            }
        }
    }
    out
}
