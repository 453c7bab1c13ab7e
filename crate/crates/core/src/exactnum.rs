//! Exact integers and rationals, p-adic valuations and digit expansions.
//!
//! `Rational` is `num_rational::BigRational`, which is always kept in lowest
//! terms with a positive denominator, so integrality of a value is simply a
//! check that its denominator is one.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// A p-adic valuation: an integer exponent, or infinity for zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinity)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => f.write_str("inf"),
        }
    }
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::invalid(format!("{p} is not prime")))
    }
}

/// Exponent of `p` in a nonzero integer, and the cofactor.
fn strip_int(n: &BigInt, p: u64) -> (i64, BigInt) {
    debug_assert!(!n.is_zero());
    if p == 2 {
        let tz = n.trailing_zeros().unwrap_or(0);
        return (tz as i64, n >> tz);
    }
    let pb = BigInt::from(p);
    let mut v = 0i64;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            return (v, m);
        }
        m = q;
        v += 1;
    }
}

/// Exponent of the prime `p` in a nonzero integer.
pub fn vp_int(n: &BigInt, p: u64) -> Valuation {
    if n.is_zero() {
        return Valuation::Infinity;
    }
    Valuation::Finite(strip_int(n, p).0)
}

/// p-adic valuation of a rational.
pub fn vp(x: &Rational, p: u64) -> Result<Valuation> {
    check_prime(p)?;
    Ok(vp_unchecked(x, p))
}

/// `vp` for callers that have already validated `p`.
pub(crate) fn vp_unchecked(x: &Rational, p: u64) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinity;
    }
    let (vn, _) = strip_int(x.numer(), p);
    let (vd, _) = strip_int(x.denom(), p);
    Valuation::Finite(vn - vd)
}

/// `p^e` as a rational, for any integer `e`.
pub fn pow_p(p: u64, e: i64) -> Rational {
    let base = BigInt::from(p);
    let mag = num_traits::pow(base, e.unsigned_abs() as usize);
    if e >= 0 {
        Rational::from_integer(mag)
    } else {
        Rational::new(BigInt::one(), mag)
    }
}

/// The first `count` nonzero digits of the canonical p-adic expansion of `x`,
/// as `(exponent, digit)` pairs with digits in `1..p`.
///
/// Zero has the empty expansion; a finite expansion may yield fewer than
/// `count` pairs.
pub fn padic_digits(x: &Rational, p: u64, count: usize) -> Result<Vec<(i64, u64)>> {
    check_prime(p)?;
    if count == 0 {
        return Err(Error::invalid("digit count must be positive"));
    }
    let mut out = Vec::with_capacity(count);
    let Valuation::Finite(v) = vp_unchecked(x, p) else {
        return Ok(out);
    };
    let pb = BigInt::from(p);
    // unit part u = x / p^v, kept as num/den with den coprime to p
    let u = x * pow_p(p, -v);
    let mut num = u.numer().clone();
    let den = u.denom().clone();
    let den_inv = den.modinv(&pb).expect("denominator is a p-adic unit");
    let mut exp = v;
    while out.len() < count && !num.is_zero() {
        let d = (&num * &den_inv).mod_floor(&pb);
        if !d.is_zero() {
            out.push((exp, d.to_u64().expect("digit < p")));
            num -= &d * &den;
        }
        // num is now divisible by p
        num /= &pb;
        exp += 1;
    }
    Ok(out)
}

/// Rebuild `Σ digit·p^exponent` from a digit list.
pub fn from_digits(digits: &[(i64, u64)], p: u64) -> Rational {
    digits
        .iter()
        .fold(Rational::zero(), |acc, &(e, d)| acc + pow_p(p, e) * int(d))
}

/// Truncate the p-adic expansion of `x` below `p^precision`: the unique
/// rational `Σ_{e < precision} d_e p^e` with `vp(x - r) ≥ precision`.
pub fn truncate_padic(x: &Rational, p: u64, precision: i64) -> Rational {
    let Valuation::Finite(v) = vp_unchecked(x, p) else {
        return Rational::zero();
    };
    if v >= precision {
        return Rational::zero();
    }
    // x·p^{-v} mod p^{precision - v}, scaled back.
    let width = (precision - v) as usize;
    let modulus = num_traits::pow(BigInt::from(p), width);
    let u = x * pow_p(p, -v);
    let den_inv = u
        .denom()
        .modinv(&modulus)
        .expect("denominator is a p-adic unit");
    let r = (u.numer() * den_inv).mod_floor(&modulus);
    Rational::from_integer(r) * pow_p(p, v)
}

/// Least common multiple of `1..=n`.
pub fn lcm_upto(n: u64) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::invalid("lcm_upto requires n >= 1"));
    }
    Ok((2..=n).fold(BigInt::one(), |acc, k| acc.lcm(&BigInt::from(k))))
}

/// `ln |n|` for a nonzero integer, accurate to double precision.
pub fn ln_abs_int(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 64 {
        return n.abs().to_f64().expect("small integer").ln();
    }
    let shift = bits - 64;
    let top = (n.abs() >> shift).to_f64().expect("64-bit head");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of `max(|numerator|, denominator)`.
pub fn log_size(x: &Rational) -> Result<f64> {
    if x.is_zero() {
        return Err(Error::invalid("log_size of zero"));
    }
    let n = x.numer().abs();
    let big = if &n >= x.denom() { n } else { x.denom().clone() };
    Ok(ln_abs_int(&big))
}

/// Sign of a nonzero integer as ±1.
pub fn sign_of(n: &BigInt) -> i32 {
    match n.sign() {
        Sign::Minus => -1,
        _ => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn valuation_examples() {
        assert_eq!(vp(&Rational::zero(), 2).unwrap(), Valuation::Infinity);
        assert_eq!(vp(&rat(1, 12), 2).unwrap(), Valuation::Finite(-2));
        assert_eq!(vp(&rat(783269, 13060350), 2).unwrap(), Valuation::Finite(-1));
        assert_eq!(vp(&rat(-8072, 27), 3).unwrap(), Valuation::Finite(-3));
        assert!(matches!(vp(&rat(1, 2), 4), Err(Error::InvalidArgument(_))));
        assert!(vp(&rat(1, 2), 1).is_err());
    }

    #[test]
    fn digits_examples() {
        assert_eq!(padic_digits(&int(1), 2, 1).unwrap(), vec![(0, 1)]);
        assert_eq!(
            padic_digits(&rat(1, 3), 2, 3).unwrap(),
            vec![(0, 1), (1, 1), (3, 1)]
        );
        let exps: Vec<i64> = padic_digits(&rat(783269, 13060350), 2, 10)
            .unwrap()
            .into_iter()
            .map(|(e, _)| e)
            .collect();
        assert_eq!(exps, vec![-1, 0, 2, 3, 5, 6, 7, 9, 13, 18]);
        assert!(padic_digits(&Rational::zero(), 3, 4).unwrap().is_empty());
        // finite expansion stops early
        assert_eq!(padic_digits(&int(5), 2, 10).unwrap(), vec![(0, 1), (2, 1)]);
    }

    #[test]
    fn digits_base_three() {
        // -1 = 2 + 2·3 + 2·3² + ...
        let d = padic_digits(&int(-1), 3, 4).unwrap();
        assert_eq!(d, vec![(0, 2), (1, 2), (2, 2), (3, 2)]);
    }

    #[test]
    fn lcm_examples() {
        assert_eq!(lcm_upto(1).unwrap(), BigInt::from(1));
        assert_eq!(lcm_upto(5).unwrap(), BigInt::from(60));
        assert_eq!(lcm_upto(10).unwrap(), BigInt::from(2520));
        assert!(lcm_upto(0).is_err());
    }

    #[test]
    fn log_size_examples() {
        assert_eq!(log_size(&int(1)).unwrap(), 0.0);
        assert!((log_size(&int(1024)).unwrap() - 6.931_471_805_599_453).abs() < 1e-12);
        assert!((log_size(&rat(-8072, 27)).unwrap() - 8072f64.ln()).abs() < 1e-12);
        assert!(log_size(&Rational::zero()).is_err());
        // beyond f64 range of exact integers
        let big = num_traits::pow(BigInt::from(3), 200);
        let expect = 200.0 * 3f64.ln();
        assert!((ln_abs_int(&big) - expect).abs() / expect < 1e-13);
    }

    #[test]
    fn truncation_matches_digits() {
        let x = rat(783269, 13060350);
        let t = truncate_padic(&x, 2, 14);
        let d = padic_digits(&x, 2, 9).unwrap();
        assert_eq!(t, from_digits(&d, 2));
        assert!(vp(&(x - t), 2).unwrap() >= Valuation::Finite(14));
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-5000i64..5000, 1i64..5000).prop_map(|(n, d)| rat(n, d))
    }

    proptest! {
        #[test]
        fn valuation_is_additive(x in small_rational(), y in small_rational(), pi in 0usize..3) {
            let p = [2u64, 3, 5][pi];
            prop_assume!(!x.is_zero() && !y.is_zero());
            let vx = vp(&x, p).unwrap().finite().unwrap();
            let vy = vp(&y, p).unwrap().finite().unwrap();
            prop_assert_eq!(vp(&(&x * &y), p).unwrap(), Valuation::Finite(vx + vy));
            let vs = vp(&(&x + &y), p).unwrap();
            prop_assert!(vs >= Valuation::Finite(vx.min(vy)));
            if vx != vy {
                prop_assert_eq!(vs, Valuation::Finite(vx.min(vy)));
            }
        }

        #[test]
        fn digits_round_trip(x in small_rational(), pi in 0usize..3, m in 1usize..12) {
            let p = [2u64, 3, 5][pi];
            prop_assume!(!x.is_zero());
            let d = padic_digits(&x, p, m).unwrap();
            let r = from_digits(&d, p);
            let last = d.last().unwrap().0;
            prop_assert!(vp(&(&x - &r), p).unwrap() > Valuation::Finite(last));
            prop_assert!(d.windows(2).all(|w| w[0].0 < w[1].0));
            prop_assert!(d.iter().all(|&(_, dig)| dig >= 1 && dig < p));
        }

        #[test]
        fn lcm_divisibility(n in 1u64..60) {
            let l = lcm_upto(n).unwrap();
            for k in 1..=n {
                prop_assert!((&l % BigInt::from(k)).is_zero());
            }
            for p in (2..=n).filter(|&p| is_prime(p)) {
                let mut pk = p;
                while pk <= n { pk *= p; }
                prop_assert!(!(&l % BigInt::from(pk)).is_zero());
            }
        }
    }
}
