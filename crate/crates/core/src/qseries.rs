//! Truncated power series in `q` with exact rational coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::Rational;

/// `Σ_{i < prec} c_i q^i + O(q^prec)`.
///
/// Binary operations narrow to the smaller precision of their operands.
#[derive(Clone, PartialEq, Eq)]
pub struct QSeries {
    coeffs: Vec<Rational>,
}

impl QSeries {
    pub fn new(coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::invalid("series precision must be positive"));
        }
        Ok(QSeries { coeffs })
    }

    pub fn from_fn(prec: usize, f: impl FnMut(usize) -> Rational) -> Self {
        assert!(prec > 0, "series precision must be positive");
        QSeries {
            coeffs: (0..prec).map(f).collect(),
        }
    }

    pub fn zero(prec: usize) -> Self {
        Self::from_fn(prec, |_| Rational::zero())
    }

    pub fn constant(c: Rational, prec: usize) -> Self {
        let mut s = Self::zero(prec);
        s.coeffs[0] = c;
        s
    }

    pub fn one(prec: usize) -> Self {
        Self::constant(Rational::one(), prec)
    }

    /// `c·q^k` (zero when `k ≥ prec`).
    pub fn monomial(c: Rational, k: usize, prec: usize) -> Self {
        let mut s = Self::zero(prec);
        if k < prec {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn prec(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Rational {
        &self.coeffs[i]
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    pub fn truncate(&self, prec: usize) -> Self {
        assert!(prec > 0 && prec <= self.prec(), "cannot extend a truncated series");
        QSeries {
            coeffs: self.coeffs[..prec].to_vec(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.prec().min(other.prec());
        Self::from_fn(n, |i| &self.coeffs[i] + &other.coeffs[i])
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.prec().min(other.prec());
        Self::from_fn(n, |i| &self.coeffs[i] - &other.coeffs[i])
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_fn(self.prec(), |i| &self.coeffs[i] * c)
    }

    /// Cauchy product, truncated to the smaller precision.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.prec().min(other.prec());
        let mut out = vec![Rational::zero(); n];
        for (i, a) in self.coeffs[..n].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..n - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        QSeries { coeffs: out }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.prec());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn invert(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::NotInvertible);
        }
        let inv0 = c0.recip();
        let n = self.prec();
        let mut out: Vec<Rational> = Vec::with_capacity(n);
        out.push(inv0.clone());
        for k in 1..n {
            let mut s = Rational::zero();
            for j in 1..=k {
                let a = &self.coeffs[j];
                if !a.is_zero() {
                    s += a * &out[k - j];
                }
            }
            out.push(-s * &inv0);
        }
        Ok(QSeries { coeffs: out })
    }

    /// `θ = q·d/dq`: multiplies the `i`-th coefficient by `i`.
    pub fn theta(&self) -> Self {
        Self::from_fn(self.prec(), |i| &self.coeffs[i] * Rational::from_integer(BigInt::from(i)))
    }

    pub fn theta_power(&self, m: u32) -> Self {
        Self::from_fn(self.prec(), |i| {
            &self.coeffs[i] * Rational::from_integer(num_traits::pow(BigInt::from(i), m as usize))
        })
    }

    /// Formal `θ^{-m}`: divides the `n`-th coefficient by `n^m`. The input
    /// must have zero constant term; the output has zero constant term.
    pub fn theta_inverse_power(&self, m: u32) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::invalid(
                "theta_inverse_power needs a zero constant term",
            ));
        }
        if m == 0 {
            return Err(Error::invalid("theta_inverse_power needs m >= 1"));
        }
        Ok(Self::from_fn(self.prec(), |i| {
            if i == 0 {
                Rational::zero()
            } else {
                &self.coeffs[i] / Rational::from_integer(num_traits::pow(BigInt::from(i), m as usize))
            }
        }))
    }

    /// The substitution `q ↦ q^k`, keeping the same precision.
    pub fn substitute_power(&self, k: usize) -> Self {
        assert!(k >= 1);
        Self::from_fn(self.prec(), |i| {
            if i % k == 0 {
                self.coeffs[i / k].clone()
            } else {
                Rational::zero()
            }
        })
    }

    /// True if every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// The index of the first nonzero coefficient, if any.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }
}

impl fmt::Debug for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QSeries[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "; O(q^{})]", self.prec())
    }
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        QSeries::add(self, rhs)
    }
}

impl Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        QSeries::sub(self, rhs)
    }
}

impl Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        QSeries::mul(self, rhs)
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries::from_fn(self.prec(), |i| -&self.coeffs[i])
    }
}

/// One factor family `∏_{n≥1} (1 + sign·q^{stride·n})^{exponent}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProductFactor {
    pub sign: i8,
    pub stride: usize,
    pub exponent: i32,
}

/// `q^{leading_power} · ∏ factors`; the eta-quotient shape used for modular
/// units and uniformizers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductRecipe {
    pub leading_power: usize,
    pub factors: Vec<ProductFactor>,
}

impl ProductRecipe {
    pub fn new(leading_power: usize, factors: &[(i8, usize, i32)]) -> Result<Self> {
        let factors = factors
            .iter()
            .map(|&(sign, stride, exponent)| {
                if sign != 1 && sign != -1 {
                    return Err(Error::invalid("factor sign must be +1 or -1"));
                }
                if stride == 0 {
                    return Err(Error::invalid("factor stride must be positive"));
                }
                Ok(ProductFactor { sign, stride, exponent })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ProductRecipe { leading_power, factors })
    }

    /// `Δ(mτ)/Δ(τ)` as `q^{m-1} ∏ (1-q^{mn})^{24} (1-q^n)^{-24}`.
    pub fn delta_ratio(m: usize) -> Self {
        assert!(m >= 2);
        ProductRecipe::new(m - 1, &[(-1, m, 24), (-1, 1, -24)]).expect("valid recipe")
    }
}

/// Multiply `s` in place by `(1 + sign·q^k)^e` for any integer `e`.
fn apply_binomial(s: &mut [Rational], sign: i8, k: usize, e: i32) {
    let n = s.len();
    if k >= n || e == 0 {
        return;
    }
    let sgn = Rational::from_integer(BigInt::from(sign));
    for _ in 0..e.unsigned_abs() {
        if e > 0 {
            // descending so s[i-k] is still the old value
            for i in (k..n).rev() {
                let t = &s[i - k] * &sgn;
                s[i] += t;
            }
        } else {
            for i in k..n {
                let t = &s[i - k] * &sgn;
                s[i] -= t;
            }
        }
    }
}

/// Truncated expansion of a product recipe.
pub fn expand_product(recipe: &ProductRecipe, prec: usize) -> Result<QSeries> {
    if prec == 0 {
        return Err(Error::invalid("precision must be positive"));
    }
    let mut s = vec![Rational::zero(); prec];
    if recipe.leading_power >= prec {
        return Ok(QSeries { coeffs: s });
    }
    // Expand the unit part to the precision needed after the q-shift.
    let width = prec - recipe.leading_power;
    let mut unit = vec![Rational::zero(); width];
    unit[0] = Rational::one();
    for f in &recipe.factors {
        let mut n = 1;
        while f.stride * n < width {
            apply_binomial(&mut unit, f.sign, f.stride * n, f.exponent);
            n += 1;
        }
    }
    for (i, c) in unit.into_iter().enumerate() {
        s[i + recipe.leading_power] = c;
    }
    Ok(QSeries { coeffs: s })
}
