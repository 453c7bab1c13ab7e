//! Irrationality-exponent witnesses for the approximants `p_n/q_n`.
//!
//! Everything here is a finite-range witness computation: the criterion is
//! checked at finitely many `n` against a certified oracle value, and the
//! asymptotic exponent is reported separately from its closed form.

use std::fmt;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::curves::{catalog, CaseId};
use crate::error::{Error, Result};
use crate::exactnum::{int, ln_abs_int, vp, vp_unchecked, Rational, Valuation};
use crate::expansion::{sequences, SequenceTable};
use crate::oracle::{evaluate, OracleParams, OracleTarget, PadicValue};

/// Tolerance on every real-valued threshold comparison.
pub const GUARD: f64 = 1e-6;

/// Default exponent each row must reach.
pub const DEFAULT_THETA_REQUIRED: f64 = 1.01;

pub const DEFAULT_WINDOW: RangeInclusive<usize> = 3..=12;

/// `θ = v·log p/(e·log p + D)`.
pub fn theta_closed(case_id: CaseId) -> Result<f64> {
    let cfg = catalog(case_id)?;
    let lp = (cfg.p as f64).ln();
    let v = rational_to_f64(&cfg.v);
    let e = rational_to_f64(&cfg.e);
    Ok(v * lp / (e * lp + cfg.d as f64))
}

/// Natural-log growth rate `e·log p + D` of the approximants.
pub fn expected_growth(case_id: CaseId) -> Result<f64> {
    let cfg = catalog(case_id)?;
    Ok(rational_to_f64(&cfg.e) * (cfg.p as f64).ln() + cfg.d as f64)
}

fn rational_to_f64(x: &Rational) -> f64 {
    x.to_f64().expect("small rational")
}

fn check_window(t: &SequenceTable, window: &RangeInclusive<usize>, extra: usize) -> Result<()> {
    if window.is_empty() {
        return Err(Error::invalid("empty window"));
    }
    if *window.start() == 0 {
        return Err(Error::invalid("window must start at n >= 1"));
    }
    if window.end() + extra >= t.len() {
        return Err(Error::invalid(format!(
            "window ends at {} but the table has {} rows",
            window.end(),
            t.len()
        )));
    }
    Ok(())
}

fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// `vp(a_n b_{n+1} − a_{n+1} b_n)`, or `None` if it vanishes.
pub fn cross_difference_valuation(t: &SequenceTable, n: usize, p: u64) -> Result<Option<i64>> {
    let (r0, r1) = (
        t.row(n).ok_or_else(|| Error::invalid("row out of range"))?,
        t.row(n + 1).ok_or_else(|| Error::invalid("row out of range"))?,
    );
    let x = &r0.a * &r1.b - &r1.a * &r0.b;
    Ok(vp(&x, p)?.finite())
}

/// Least-squares slope of the cross-difference valuations over `window`.
pub fn slope_empirical(t: &SequenceTable, p: u64, window: RangeInclusive<usize>) -> Result<f64> {
    check_window(t, &window, 1)?;
    let mut points = Vec::new();
    for n in window {
        if t.rows[n].is_degenerate() {
            return Err(Error::invalid(format!("row {n} is degenerate")));
        }
        if let Some(v) = cross_difference_valuation(t, n, p)? {
            points.push((n as f64, v as f64));
        }
    }
    if points.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "{} usable points, need 3",
            points.len()
        )));
    }
    Ok(least_squares_slope(&points))
}

/// Least-squares slope of `log max(|p_n|, q_n)` against `n`.
pub fn growth_rate(t: &SequenceTable, window: RangeInclusive<usize>) -> Result<f64> {
    check_window(t, &window, 0)?;
    let points: Vec<(f64, f64)> = window
        .map(|n| log_max_size(t, n).map(|l| (n as f64, l)))
        .collect::<Result<_>>()?;
    if points.len() < 3 {
        return Err(Error::InsufficientData("need 3 rows".into()));
    }
    Ok(least_squares_slope(&points))
}

fn approximant(t: &SequenceTable, n: usize) -> Result<&Rational> {
    t.rows[n]
        .approximant
        .as_ref()
        .ok_or_else(|| Error::invalid(format!("row {n} is degenerate")))
}

fn log_max_size(t: &SequenceTable, n: usize) -> Result<f64> {
    let r = approximant(t, n)?;
    Ok(ln_abs_int(r.numer()).max(ln_abs_int(r.denom())))
}

/// The sign `σ` for which `vp(η̂ − σ·p_n/q_n)` grows, judged at the two
/// smallest window indices.
pub fn resolve_sign(t: &SequenceTable, eta: &PadicValue, window: &RangeInclusive<usize>) -> Result<i32> {
    check_window(t, window, 0)?;
    let n0 = *window.start();
    let n1 = (n0 + 1).min(*window.end());
    let score = |sigma: i32| -> Result<(i64, i64)> {
        let d0 = eta.distance_to(&(approximant(t, n0)? * int(sigma))).0;
        let d1 = eta.distance_to(&(approximant(t, n1)? * int(sigma))).0;
        Ok((d1, d0))
    };
    let (plus, minus) = (score(1)?, score(-1)?);
    match plus.cmp(&minus) {
        std::cmp::Ordering::Greater => Ok(1),
        std::cmp::Ordering::Less => Ok(-1),
        std::cmp::Ordering::Equal => Err(Error::Inconsistent(format!(
            "sign unresolved at n = {n0}, {n1}"
        ))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowStatus {
    /// Finite certified gap meeting the required exponent.
    Pass,
    /// Finite certified gap below the required exponent.
    Fail,
    /// The approximant equals the reference value: the strict inequality fails.
    ZeroGap,
    /// The gap reaches the oracle precision, so only a lower bound is known.
    Uncertified,
}

impl RowStatus {
    pub fn is_certified(self) -> bool {
        matches!(self, RowStatus::Pass | RowStatus::Fail)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub case_id: CaseId,
    pub n: usize,
    pub p_n: BigInt,
    pub q_n: BigInt,
    /// Certified lower bound on `vp(η − σ·p_n/q_n)`, never above the
    /// oracle's agreement exponent.
    pub valuation_gap: i64,
    pub log_max_size: f64,
    pub implied_exponent: f64,
    pub sign: i32,
    pub agreement_exponent: i64,
    pub status: RowStatus,
}

/// One certificate per `n` in the window.
pub fn criterion_check(
    t: &SequenceTable,
    eta: &PadicValue,
    sign: i32,
    theta_required: f64,
    window: RangeInclusive<usize>,
) -> Result<Vec<Certificate>> {
    check_window(t, &window, 0)?;
    if sign.abs() != 1 {
        return Err(Error::invalid("sign must be +1 or -1"));
    }
    let lp = (eta.p as f64).ln();
    let mut out = Vec::new();
    for n in window {
        let approx = approximant(t, n)? * int(sign);
        let log_max = log_max_size(t, n)?;
        let (gap, capped) = eta.distance_to(&approx);
        let status = if approx == eta.representative {
            RowStatus::ZeroGap
        } else if capped {
            RowStatus::Uncertified
        } else if gap as f64 * lp >= (theta_required - GUARD) * log_max {
            RowStatus::Pass
        } else {
            RowStatus::Fail
        };
        let r = approximant(t, n)?;
        out.push(Certificate {
            case_id: t.case_id,
            n,
            p_n: r.numer().clone(),
            q_n: r.denom().clone(),
            valuation_gap: gap,
            log_max_size: log_max,
            implied_exponent: if log_max > 0.0 { gap as f64 * lp / log_max } else { 0.0 },
            sign,
            agreement_exponent: eta.agreement_exponent,
            status,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    WitnessPass,
    WitnessFail,
    Uncertified,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::WitnessPass => "WITNESS_PASS",
            Verdict::WitnessFail => "WITNESS_FAIL",
            Verdict::Uncertified => "UNCERTIFIED",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub case_id: CaseId,
    pub theta_closed: f64,
    pub theta_required: f64,
    /// Largest implied exponent over certified rows.
    pub max_theta: Option<f64>,
    pub passed: usize,
    pub failed: usize,
    pub uncertified: usize,
    pub verdict: Verdict,
}

/// Combine the closed-form exponent with the per-row results.
pub fn summarize(case_id: CaseId, certs: &[Certificate], theta_required: f64) -> Result<Summary> {
    let theta = theta_closed(case_id)?;
    let count = |s: RowStatus| certs.iter().filter(|c| c.status == s).count();
    let passed = count(RowStatus::Pass);
    let failed = count(RowStatus::Fail) + count(RowStatus::ZeroGap);
    let uncertified = count(RowStatus::Uncertified);
    let max_theta = certs
        .iter()
        .filter(|c| c.status.is_certified())
        .map(|c| c.implied_exponent)
        .fold(None, |m: Option<f64>, x| Some(m.map_or(x, |m| m.max(x))));
    let verdict = if theta <= 1.0 + GUARD || failed > 0 {
        Verdict::WitnessFail
    } else if passed == 0 {
        Verdict::Uncertified
    } else {
        Verdict::WitnessPass
    };
    Ok(Summary {
        case_id,
        theta_closed: theta,
        theta_required,
        max_theta,
        passed,
        failed,
        uncertified,
        verdict,
    })
}

/// The oracle target whose value the approximants of `case_id` approach.
pub fn oracle_target(case_id: CaseId) -> Result<OracleTarget> {
    Ok(match case_id {
        CaseId::CatalanP2 => OracleTarget::Catalan,
        other => OracleTarget::Zeta {
            p: other.prime(),
            n: other.k().ok_or_else(|| Error::invalid("missing k"))?,
        },
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertifyParams {
    pub count: usize,
    pub oracle: OracleParams,
    pub theta_required: f64,
    pub window: RangeInclusive<usize>,
}

impl Default for CertifyParams {
    fn default() -> Self {
        CertifyParams {
            count: 25,
            oracle: OracleParams::default(),
            theta_required: DEFAULT_THETA_REQUIRED,
            window: DEFAULT_WINDOW,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertifyReport {
    pub eta: PadicValue,
    pub certificates: Vec<Certificate>,
    pub summary: Summary,
}

/// Sequences, oracle, sign resolution and the per-row criterion, end to end.
pub fn certify(case_id: CaseId, params: &CertifyParams) -> Result<CertifyReport> {
    let table = sequences(case_id, params.count)?;
    let eta = evaluate(oracle_target(case_id)?, &params.oracle)?.value;
    let sign = resolve_sign(&table, &eta, &params.window)?;
    let certificates = criterion_check(&table, &eta, sign, params.theta_required, params.window.clone())?;
    let summary = summarize(case_id, &certificates, params.theta_required)?;
    Ok(CertifyReport {
        eta,
        certificates,
        summary,
    })
}

/// Check `max(|c|, |d|) ≥ p^n/(|a| + |b|)` for distinct `x = a/b`,
/// `y = c/d` with `vp(x − y) ≥ n`.
pub fn lemma1_bound(x: &Rational, y: &Rational, p: u64, n: i64) -> Result<bool> {
    if x == y {
        return Err(Error::invalid("fractions must be distinct"));
    }
    if n < 0 {
        return Err(Error::invalid("n must be non-negative"));
    }
    match vp_unchecked(&(x - y), p) {
        Valuation::Finite(v) if v >= n => {}
        _ => return Err(Error::invalid("hypothesis |x - y|_p <= p^-n does not hold")),
    }
    let lhs = y.numer().abs().max(y.denom().abs()) * (x.numer().abs() + x.denom().abs());
    let rhs = num_traits::pow(BigInt::from(p), n as usize);
    Ok(!lhs.is_zero() && lhs >= rhs)
}
