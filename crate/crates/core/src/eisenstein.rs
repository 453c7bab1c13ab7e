//! Bernoulli and Euler numbers, the special values built from them, and the
//! q-expansions of the Eisenstein series used by the construction.
//!
//! Bernoulli numbers follow the generating function
//! `x/2 + x/(e^x − 1) = Σ B_n x^n/n!`, so every odd-index value (including
//! `B_1`) vanishes. Euler numbers are the secant numbers with alternating
//! sign (`sech x = Σ E_n x^n/n!`), which gives `L(−2k, χ) = E_{2k}/2` for the
//! odd character of conductor 4.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{int, is_prime, Rational};
use crate::qseries::QSeries;

/// The odd Dirichlet character of conductor 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ChiMod4;

impl ChiMod4 {
    pub fn eval(self, n: u64) -> i64 {
        match n % 4 {
            1 => 1,
            3 => -1,
            _ => 0,
        }
    }
}

// Even-index caches: entry i holds the value at index 2i.
static BERNOULLI_EVEN: Mutex<Vec<Rational>> = Mutex::new(Vec::new());
static EULER_EVEN: Mutex<Vec<BigInt>> = Mutex::new(Vec::new());

fn extend_bernoulli(cache: &mut Vec<Rational>, upto_half: usize) {
    if cache.is_empty() {
        cache.push(Rational::one());
    }
    while cache.len() <= upto_half {
        let m = 2 * cache.len();
        // Σ_{j=0}^{m} C(m+1, j) B_j = 0 in the B_1 = -1/2 normalization.
        let mut binom = BigInt::one(); // C(m+1, 0)
        let mut acc = Rational::zero();
        for j in 0..m {
            if j % 2 == 0 {
                acc += Rational::from_integer(binom.clone()) * &cache[j / 2];
            }
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        acc -= Rational::new(BigInt::from(m + 1), BigInt::from(2));
        cache.push(-acc / int(m as u64 + 1));
    }
}

/// `B_n` under the `x/2 + x/(e^x − 1)` convention.
pub fn bernoulli(n: u64) -> Rational {
    if n % 2 == 1 {
        return Rational::zero();
    }
    let half = (n / 2) as usize;
    let mut cache = BERNOULLI_EVEN.lock().expect("bernoulli cache poisoned");
    extend_bernoulli(&mut cache, half);
    cache[half].clone()
}

fn extend_euler(cache: &mut Vec<BigInt>, upto_half: usize) {
    if cache.is_empty() {
        cache.push(BigInt::one());
    }
    while cache.len() <= upto_half {
        let n = 2 * cache.len();
        // sech·cosh = 1: Σ_{j even} C(n, j) E_j = 0 for n > 0.
        let mut binom = BigInt::one();
        let mut acc = BigInt::zero();
        for j in 0..n {
            if j % 2 == 0 {
                acc += &binom * &cache[j / 2];
            }
            binom = binom * BigInt::from(n - j) / BigInt::from(j + 1);
        }
        cache.push(-acc);
    }
}

/// The Euler number `E_n` for even `n`.
pub fn euler_number(n: u64) -> Result<BigInt> {
    if n % 2 == 1 {
        return Err(Error::invalid(format!("Euler number index {n} is odd")));
    }
    let half = (n / 2) as usize;
    let mut cache = EULER_EVEN.lock().expect("euler cache poisoned");
    extend_euler(&mut cache, half);
    Ok(cache[half].clone())
}

fn check_even_weight(w: u64) -> Result<()> {
    if w < 2 || w % 2 == 1 {
        return Err(Error::invalid(format!("weight {w} must be even and >= 2")));
    }
    Ok(())
}

fn check_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    Ok(())
}

/// `ζ(1 − w) = −B_w / w` for even `w ≥ 2`.
pub fn zeta_neg(w: u64) -> Result<Rational> {
    check_even_weight(w)?;
    Ok(-bernoulli(w) / int(w))
}

/// `ζ*_p(1 − w) = (1 − p^{w−1}) ζ(1 − w)`.
pub fn zeta_star(p: u64, w: u64) -> Result<Rational> {
    check_prime(p)?;
    let z = zeta_neg(w)?;
    let euler = Rational::one() - int(num_traits::pow(BigInt::from(p), (w - 1) as usize));
    Ok(euler * z)
}

/// `L(−2k, χ) = E_{2k}/2` for the character mod 4, given `w = 2k ≥ 0`.
pub fn l_chi_neg(w: u64) -> Result<Rational> {
    Ok(Rational::new(euler_number(w)?, BigInt::from(2)))
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// `d^w` as an exact rational, for any integer `w`.
fn power(d: u64, w: i64) -> Rational {
    let mag = num_traits::pow(BigInt::from(d), w.unsigned_abs() as usize);
    if w >= 0 {
        Rational::from_integer(mag)
    } else {
        Rational::new(BigInt::one(), mag)
    }
}

fn weighted_divisor_sum(n: u64, w: i64, weight: impl Fn(u64) -> i64) -> Rational {
    divisors(n)
        .into_iter()
        .filter_map(|d| match weight(d) {
            0 => None,
            c => Some(power(d, w) * int(c)),
        })
        .fold(Rational::zero(), |a, b| a + b)
}

/// `σ_w(n)`, the full divisor power sum.
pub fn sigma(n: u64, w: i64) -> Result<Rational> {
    if n == 0 {
        return Err(Error::invalid("divisor sums need n >= 1"));
    }
    Ok(weighted_divisor_sum(n, w, |_| 1))
}

/// `Σ_{d | n, gcd(d, p) = 1} d^w`.
pub fn sigma_star(n: u64, p: u64, w: i64) -> Result<Rational> {
    check_prime(p)?;
    if n == 0 {
        return Err(Error::invalid("divisor sums need n >= 1"));
    }
    Ok(weighted_divisor_sum(n, w, |d| i64::from(d % p != 0)))
}

/// `Σ_{d | n} χ(d) d^w`.
pub fn sigma_chi(n: u64, w: i64) -> Result<Rational> {
    if n == 0 {
        return Err(Error::invalid("divisor sums need n >= 1"));
    }
    Ok(weighted_divisor_sum(n, w, |d| ChiMod4.eval(d)))
}

fn with_constant(constant: Rational, prec: usize, coeff: impl Fn(u64) -> Rational) -> QSeries {
    QSeries::from_fn(prec, |i| {
        if i == 0 {
            constant.clone()
        } else {
            coeff(i as u64)
        }
    })
}

/// Level-one `E_w = ζ(1 − w)/2 + Σ σ_{w−1}(n) q^n`.
pub fn series_e(w: u64, prec: usize) -> Result<QSeries> {
    let c = zeta_neg(w)? / int(2);
    Ok(with_constant(c, prec, |n| {
        weighted_divisor_sum(n, w as i64 - 1, |_| 1)
    }))
}

/// p-deprived `E*_w = ζ*_p(1 − w)/2 + Σ σ*_{w−1}(n) q^n`.
pub fn series_e_star(p: u64, w: u64, prec: usize) -> Result<QSeries> {
    let c = zeta_star(p, w)? / int(2);
    Ok(with_constant(c, prec, |n| {
        weighted_divisor_sum(n, w as i64 - 1, |d| i64::from(d % p != 0))
    }))
}

/// The evil twin `E_w(τ) − E_w(pτ)`, cuspidal at infinity.
pub fn series_evil(p: u64, w: u64, prec: usize) -> Result<QSeries> {
    check_prime(p)?;
    let e = series_e(w, prec)?;
    Ok(e.sub(&e.substitute_power(p as usize)))
}

/// `E′_{−2k}` for `w = 2k`: coefficient `σ*_{−(2k+1)}(n)` at `q^n` and zero
/// constant term, so that `θ^{2k+1} E′_{−2k} = E^{evil}_{2k+2}`.
pub fn series_e_prime(p: u64, w: u64, prec: usize) -> Result<QSeries> {
    check_prime(p)?;
    check_even_weight(w)?;
    let exp = -(w as i64 + 1);
    Ok(with_constant(Rational::zero(), prec, |n| {
        weighted_divisor_sum(n, exp, |d| i64::from(d % p != 0))
    }))
}

fn check_odd_weight(w: u64) -> Result<()> {
    if w % 2 == 0 {
        return Err(Error::invalid(format!("weight {w} must be odd and >= 1")));
    }
    Ok(())
}

/// `F_w = L(1 − w, χ)/2 + Σ (Σ_{d|n} χ(d) d^{w−1}) q^n` for odd `w ≥ 1`.
pub fn series_f(w: u64, prec: usize) -> Result<QSeries> {
    check_odd_weight(w)?;
    let c = l_chi_neg(w - 1)? / int(2);
    Ok(with_constant(c, prec, |n| {
        weighted_divisor_sum(n, w as i64 - 1, |d| ChiMod4.eval(d))
    }))
}

/// `F_w` via its Lambert form `L(1−w, χ)/2 + Σ_{m≥0} (−1)^m (2m+1)^{w−1} q^{2m+1}/(1 − q^{2m+1})`.
pub fn series_f_lambert(w: u64, prec: usize) -> Result<QSeries> {
    check_odd_weight(w)?;
    let mut coeffs = vec![Rational::zero(); prec];
    coeffs[0] = l_chi_neg(w - 1)? / int(2);
    let mut m = 0u64;
    while ((2 * m + 1) as usize) < prec {
        let step = (2 * m + 1) as usize;
        let sign = if m % 2 == 0 { 1 } else { -1 };
        let c = int(num_traits::pow(BigInt::from(step), (w - 1) as usize)) * int(sign);
        // q^step + q^{2 step} + ...
        for k in (step..prec).step_by(step) {
            coeffs[k] += &c;
        }
        m += 1;
    }
    QSeries::new(coeffs)
}

/// `F′_{−1} = Σ (Σ_{d|n} χ(d) d^{−2}) q^n`, the nonconstant part of `F_{−1}`.
pub fn series_f_prime(prec: usize) -> QSeries {
    with_constant(Rational::zero(), prec, |n| {
        weighted_divisor_sum(n, -2, |d| ChiMod4.eval(d))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(0), int(1));
        assert_eq!(bernoulli(1), int(0));
        assert_eq!(bernoulli(2), rat(1, 6));
        assert_eq!(bernoulli(4), rat(-1, 30));
        assert_eq!(bernoulli(12), rat(-691, 2730));
        assert_eq!(bernoulli(14), rat(7, 6));
        for m in 1..20 {
            assert!(bernoulli(2 * m + 1).is_zero());
        }
    }

    /// Independent route: `B_n = Σ_k (−1)^k k!·S(n, k)/(k + 1)` via Stirling
    /// numbers of the second kind (standard convention, valid for n ≥ 2).
    fn bernoulli_stirling(n: usize) -> Rational {
        let mut s = vec![vec![BigInt::zero(); n + 1]; n + 1];
        s[0][0] = BigInt::one();
        for i in 1..=n {
            for k in 1..=i {
                s[i][k] = &s[i - 1][k - 1] + BigInt::from(k) * &s[i - 1][k];
            }
        }
        let mut fact = BigInt::one();
        let mut acc = Rational::zero();
        for k in 0..=n {
            if k > 0 {
                fact *= BigInt::from(k);
            }
            let sign = if k % 2 == 0 { 1 } else { -1 };
            acc += Rational::new(&fact * &s[n][k] * BigInt::from(sign), BigInt::from(k + 1));
        }
        acc
    }

    #[test]
    fn bernoulli_matches_stirling_route() {
        for n in (2..=40).step_by(2) {
            assert_eq!(bernoulli(n as u64), bernoulli_stirling(n), "B_{n}");
        }
    }

    #[test]
    fn euler_values() {
        assert_eq!(euler_number(0).unwrap(), BigInt::from(1));
        assert_eq!(euler_number(2).unwrap(), BigInt::from(-1));
        assert_eq!(euler_number(4).unwrap(), BigInt::from(5));
        assert_eq!(euler_number(6).unwrap(), BigInt::from(-61));
        assert_eq!(euler_number(8).unwrap(), BigInt::from(1385));
        assert!(euler_number(3).is_err());
        assert_eq!(l_chi_neg(0).unwrap(), rat(1, 2));
    }

    #[test]
    fn zeta_values() {
        assert_eq!(zeta_neg(2).unwrap(), rat(-1, 12));
        assert_eq!(zeta_neg(4).unwrap(), rat(1, 120));
        assert_eq!(zeta_neg(14).unwrap(), rat(-1, 12));
        assert_eq!(zeta_neg(12).unwrap(), rat(691, 32760));
        assert!(zeta_neg(3).is_err());
        assert_eq!(zeta_star(2, 2).unwrap(), rat(1, 12));
        assert_eq!(zeta_star(3, 2).unwrap(), rat(1, 6));
        assert_eq!(zeta_star(2, 4).unwrap(), rat(-7, 120));
        assert_eq!(zeta_star(2, 14).unwrap(), rat(8191, 12));
        assert!(zeta_star(4, 2).is_err());
    }

    #[test]
    fn divisor_sums() {
        assert_eq!(sigma_star(1, 7, 5).unwrap(), int(1));
        assert_eq!(sigma_star(2, 2, 1).unwrap(), int(1));
        assert_eq!(sigma_star(3, 2, -3).unwrap(), rat(28, 27));
        assert_eq!(sigma_chi(1, 9).unwrap(), int(1));
        assert_eq!(sigma_chi(3, 0).unwrap(), int(0));
        assert_eq!(sigma_chi(3, -2).unwrap(), rat(8, 9));
        assert_eq!(sigma(12, 1).unwrap(), int(28));
    }

    #[test]
    fn series_examples() {
        let e = series_e_star(2, 2, 4).unwrap();
        assert_eq!(e.coeffs(), &[rat(1, 24), int(1), int(1), int(4)]);
        let f = series_f(1, 4).unwrap();
        assert_eq!(f.coeffs(), &[rat(1, 4), int(1), int(1), int(0)]);
        let evil = series_evil(2, 4, 3).unwrap();
        assert_eq!(evil.coeffs(), &[int(0), int(1), int(8)]);
        assert!(series_f(2, 4).is_err());
        assert!(series_e_prime(2, 3, 4).is_err());
    }

    #[test]
    fn level_lowering_identity() {
        for &p in &[2u64, 3, 5] {
            for w in [2u64, 4, 6] {
                let n = 40;
                let e = series_e(w, n).unwrap();
                let lowered = e.sub(
                    &e.substitute_power(p as usize)
                        .scale(&int(num_traits::pow(BigInt::from(p), (w - 1) as usize))),
                );
                assert_eq!(series_e_star(p, w, n).unwrap(), lowered, "p={p} w={w}");
            }
        }
    }

    #[test]
    fn evil_twin_cuspidal_and_theta_identity() {
        for &p in &[2u64, 3] {
            for k in 1..=3u64 {
                let n = 32;
                let evil = series_evil(p, 2 * k + 2, n).unwrap();
                assert!(evil.coeff(0).is_zero());
                let ep = series_e_prime(p, 2 * k, n).unwrap();
                assert_eq!(ep.theta_power(2 * k as u32 + 1), evil, "p={p} k={k}");
            }
        }
    }

    #[test]
    fn theta_inverse_of_evil_twin() {
        let evil = series_evil(2, 4, 8).unwrap();
        let back = evil.theta_inverse_power(3).unwrap();
        assert_eq!(back.coeff(3), &rat(28, 27));
        assert_eq!(back.coeff(3), &sigma_star(3, 2, -3).unwrap());
    }

    #[test]
    fn f_forms_agree() {
        for w in [1u64, 3, 5] {
            assert_eq!(series_f(w, 48).unwrap(), series_f_lambert(w, 48).unwrap());
        }
    }
}
