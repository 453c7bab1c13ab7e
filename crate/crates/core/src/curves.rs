//! The modular-curve cases: uniformizers, radius and denominator exponents,
//! and the q-series identities that pin down their normalization.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::eisenstein;
use crate::error::{Error, Result};
use crate::exactnum::{int, rat, Rational};
use crate::qseries::{expand_product, ProductRecipe, QSeries};

/// Which p-adic L-value a case approximates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseId {
    /// `ζ_2(1 + 2k)` on `X_0(2)`.
    ZetaP2(u32),
    /// `ζ_3(1 + 2k)` on `X_0(3)`.
    ZetaP3(u32),
    /// `ζ_5(1 + 2k)` on `X_0(5)`; the exponent comparison fails here.
    ZetaP5(u32),
    /// `L_2(2, χ)` on `X_1(4)`.
    CatalanP2,
}

impl CaseId {
    /// Parse a command-line case name (`zeta-p2`, `zeta-p3`, `zeta-p5`,
    /// `catalan-p2`) together with `k` for the zeta families.
    pub fn parse(name: &str, k: u32) -> Result<Self> {
        let case = match name {
            "zeta-p2" => CaseId::ZetaP2(k),
            "zeta-p3" => CaseId::ZetaP3(k),
            "zeta-p5" => CaseId::ZetaP5(k),
            "catalan-p2" => CaseId::CatalanP2,
            other => return Err(Error::invalid(format!("unknown case '{other}'"))),
        };
        if k == 0 {
            return Err(Error::invalid("k must be at least 1"));
        }
        Ok(case)
    }

    pub fn name(self) -> &'static str {
        match self {
            CaseId::ZetaP2(_) => "zeta-p2",
            CaseId::ZetaP3(_) => "zeta-p3",
            CaseId::ZetaP5(_) => "zeta-p5",
            CaseId::CatalanP2 => "catalan-p2",
        }
    }

    pub fn prime(self) -> u64 {
        match self {
            CaseId::ZetaP2(_) | CaseId::CatalanP2 => 2,
            CaseId::ZetaP3(_) => 3,
            CaseId::ZetaP5(_) => 5,
        }
    }

    /// `k` for zeta cases (target `ζ_p(1 + 2k)`); `None` for Catalan.
    pub fn k(self) -> Option<u32> {
        match self {
            CaseId::ZetaP2(k) | CaseId::ZetaP3(k) | CaseId::ZetaP5(k) => Some(k),
            CaseId::CatalanP2 => None,
        }
    }

    pub fn is_catalan(self) -> bool {
        matches!(self, CaseId::CatalanP2)
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.k() {
            Some(k) => write!(f, "{}(k={k})", self.name()),
            None => f.write_str(self.name()),
        }
    }
}

impl FromStr for CaseId {
    type Err = Error;

    /// Accepts `catalan-p2` or `zeta-pN:K` (`K` defaults to 1).
    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(':') {
            Some((name, k)) => {
                let k = k
                    .parse()
                    .map_err(|_| Error::invalid(format!("bad k in '{s}'")))?;
                CaseId::parse(name, k)
            }
            None => CaseId::parse(s, 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseConfig {
    pub case_id: CaseId,
    pub p: u64,
    /// Weight of the holomorphic factor: `2k` for zeta cases, 1 for Catalan.
    pub weight: u64,
    pub uniformizer: ProductRecipe,
    /// Multiplier applied to the weight series before re-expansion.
    pub lambda: Rational,
    /// The p-adic radius of the overconvergent expansion is at least `p^v`.
    pub v: Rational,
    /// The nearest Archimedean singularity sits at `|uniformizer| = p^{-e}`.
    pub e: Rational,
    /// `lcm(1..n)^D · a_n` is integral.
    pub d: u32,
    /// Value of the uniformizer at the point that limits the Archimedean
    /// radius (for reference only; it enters only through `e`).
    pub branch_point: &'static str,
}

/// Normalization of the weight series: the sign of its constant term times
/// the constant's denominator. When the constant is `±1/m` this is exactly
/// its reciprocal, so the scaled series starts with 1.
fn normalizing_lambda(constant: &Rational) -> Rational {
    let sign = if constant.is_negative() { -1 } else { 1 };
    Rational::from_integer(constant.denom() * BigInt::from(sign))
}

/// Recipe for `(Δ(pτ)/Δ(τ))^{1/(p−1)} = q ∏ ((1 − q^{pn})/(1 − q^n))^{24/(p−1)}`.
fn deprived_root_recipe(p: usize) -> ProductRecipe {
    let e = (24 / (p - 1)) as i32;
    ProductRecipe::new(1, &[(-1, p, e), (-1, 1, -e)]).expect("valid recipe")
}

pub fn catalog(case_id: CaseId) -> Result<CaseConfig> {
    if let Some(0) = case_id.k() {
        return Err(Error::invalid("k must be at least 1"));
    }
    let cfg = match case_id {
        CaseId::ZetaP2(k) => {
            let w = 2 * k as u64;
            CaseConfig {
                case_id,
                p: 2,
                weight: w,
                uniformizer: ProductRecipe::new(1, &[(1, 1, 24)])?,
                lambda: normalizing_lambda(&(eisenstein::zeta_star(2, w)? / int(2))),
                v: int(12),
                e: int(6),
                d: 2 * k + 1,
                branch_point: "f((1+i)/2) = -2^-6",
            }
        }
        CaseId::ZetaP3(k) => {
            let w = 2 * k as u64;
            CaseConfig {
                case_id,
                p: 3,
                weight: w,
                uniformizer: deprived_root_recipe(3),
                lambda: normalizing_lambda(&(eisenstein::zeta_star(3, w)? / int(2))),
                v: int(6),
                e: int(3),
                d: 2 * k + 1,
                branch_point: "f(1/2 + sqrt(-3)/6) = -3^-3",
            }
        }
        CaseId::ZetaP5(k) => {
            let w = 2 * k as u64;
            CaseConfig {
                case_id,
                p: 5,
                weight: w,
                uniformizer: deprived_root_recipe(5),
                lambda: normalizing_lambda(&(eisenstein::zeta_star(5, w)? / int(2))),
                v: int(3),
                e: rat(3, 2),
                d: 2 * k + 1,
                branch_point: "elliptic points of X_0(5) at |f| = 5^-3/2",
            }
        }
        CaseId::CatalanP2 => CaseConfig {
            case_id,
            p: 2,
            weight: 1,
            uniformizer: ProductRecipe::new(1, &[(1, 1, 8), (1, 2, 8)])?,
            lambda: normalizing_lambda(&(eisenstein::l_chi_neg(0)? / int(2))),
            v: int(8),
            e: int(4),
            d: 2,
            branch_point: "z(1/2) = -2^-4",
        },
    };
    Ok(cfg)
}

impl CaseConfig {
    pub fn uniformizer_series(&self, prec: usize) -> Result<QSeries> {
        if prec < 2 {
            return Err(Error::invalid("uniformizer needs precision >= 2"));
        }
        expand_product(&self.uniformizer, prec)
    }

    /// The holomorphic factor: `E*_{2k}` for zeta cases, `F_1` for Catalan.
    pub fn weight_series(&self, prec: usize) -> Result<QSeries> {
        if self.case_id.is_catalan() {
            eisenstein::series_f(1, prec)
        } else {
            eisenstein::series_e_star(self.p, self.weight, prec)
        }
    }

    /// The nonconstant part of the negative-weight form: `E′_{−2k}` or `F′_{−1}`.
    pub fn companion_series(&self, prec: usize) -> Result<QSeries> {
        if self.case_id.is_catalan() {
            Ok(eisenstein::series_f_prime(prec))
        } else {
            eisenstein::series_e_prime(self.p, self.weight, prec)
        }
    }

    /// The weight-2 series that `θf/f` must be a multiple of: `E*_2`, or
    /// `F_1²` for Catalan.
    fn log_derivative_target(&self, prec: usize) -> Result<QSeries> {
        if self.case_id.is_catalan() {
            Ok(eisenstein::series_f(1, prec)?.pow(2))
        } else {
            eisenstein::series_e_star(self.p, 2, prec)
        }
    }
}

pub fn uniformizer_series(case_id: CaseId, prec: usize) -> Result<QSeries> {
    catalog(case_id)?.uniformizer_series(prec)
}

/// `θf/f` for a series `f = q + O(q²)`, at one less precision.
pub fn log_derivative(f: &QSeries) -> Result<QSeries> {
    if f.prec() < 2 || !f.coeff(0).is_zero() || f.coeff(1).is_zero() {
        return Err(Error::invalid("log_derivative needs f = c·q + O(q^2)"));
    }
    // f = q·u with u(0) ≠ 0, so θf/f = 1 + θu/u.
    let u = QSeries::new(f.coeffs()[1..].to_vec())?;
    let ratio = u.theta().mul(&u.invert()?);
    Ok(ratio.add(&QSeries::one(ratio.prec())))
}

/// The unique `μ` with `lhs = μ·rhs`, or an identity violation.
fn proportionality(lhs: &QSeries, rhs: &QSeries, what: &str) -> Result<Rational> {
    let Some(i) = rhs.order() else {
        return Err(Error::IdentityViolation(format!("{what}: reference series vanishes")));
    };
    let mu = lhs.coeff(i) / rhs.coeff(i);
    if lhs.sub(&rhs.scale(&mu)).order().is_some() {
        return Err(Error::IdentityViolation(format!(
            "{what}: no constant multiple matches"
        )));
    }
    Ok(mu)
}

/// Check `θf/f = μ·E*_2` (or `μ·F_1²` for Catalan) and return `μ`.
pub fn check_logderivative(case_id: CaseId, prec: usize) -> Result<Rational> {
    if prec < 8 {
        return Err(Error::invalid("check_logderivative needs precision >= 8"));
    }
    let cfg = catalog(case_id)?;
    let f = cfg.uniformizer_series(prec + 1)?;
    let lhs = log_derivative(&f)?;
    let rhs = cfg.log_derivative_target(prec)?;
    proportionality(&lhs, &rhs, "theta f / f")
}

fn exact_root(x: &BigInt, n: u32) -> Option<BigInt> {
    let r = x.nth_root(n);
    (num_traits::pow(r.clone(), n as usize) == *x).then_some(r)
}

/// Check `(μ·E*_2)^6/Δ = (1 + 2^6 f)^3/f` on `X_0(2)` and return `μ > 0`.
///
/// Both sides are multiplied through by `f`, which turns `f/Δ` into the
/// pole-free product `∏ (1 − q^{2n})^{24} (1 − q^n)^{−48}`.
pub fn check_elliptic_identity(prec: usize) -> Result<Rational> {
    if prec < 16 {
        return Err(Error::invalid("check_elliptic_identity needs precision >= 16"));
    }
    let e2 = eisenstein::series_e_star(2, 2, prec)?;
    let f = uniformizer_series(CaseId::ZetaP2(1), prec)?;
    let f_over_delta = expand_product(&ProductRecipe::new(0, &[(-1, 2, 24), (-1, 1, -48)])?, prec)?;
    let lhs_unit = e2.pow(6).mul(&f_over_delta);
    let rhs = QSeries::one(prec).add(&f.scale(&int(64))).pow(3);

    let ratio = rhs.coeff(0) / lhs_unit.coeff(0);
    let invalid = || Error::IdentityViolation("E2^6/Delta: constant ratio is not a sixth power".into());
    if !ratio.is_positive() {
        return Err(invalid());
    }
    let num = exact_root(ratio.numer(), 6).ok_or_else(invalid)?;
    let den = exact_root(ratio.denom(), 6).ok_or_else(invalid)?;
    let mu = Rational::new(num, den);
    let mu6 = num_traits::pow(mu.clone(), 6);
    if lhs_unit.scale(&mu6) != rhs {
        return Err(Error::IdentityViolation(
            "E2^6/Delta = (1 + 2^6 f)^3/f fails beyond the constant term".into(),
        ));
    }
    Ok(mu)
}
