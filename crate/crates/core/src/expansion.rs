//! Re-expansion of `H = λ·E*·(E′ + η)` in powers of the uniformizer, and the
//! Apéry-like sequences `a_n`, `b_n` read off from it.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::curves::{catalog, CaseConfig, CaseId};
use crate::error::{Error, Result};
use crate::exactnum::{int, lcm_upto, Rational};
use crate::qseries::QSeries;

/// Default number of retained q-coefficients.
pub const DEFAULT_PREC: usize = 64;

/// Working q-precision for a table of `count` rows.
pub fn working_prec(count: usize) -> usize {
    DEFAULT_PREC.max(2 * count + 8)
}

/// Coefficients `c_0..c_{count-1}` with `h = Σ c_m f^m + O(q^count)`, for a
/// local parameter `f = q + O(q²)`.
pub fn reexpand(h: &QSeries, f: &QSeries, count: usize) -> Result<Vec<Rational>> {
    if f.prec() < 2 || !f.coeff(0).is_zero() || !f.coeff(1).is_one() {
        return Err(Error::invalid("uniformizer must be q + O(q^2)"));
    }
    let prec = h.prec().min(f.prec());
    if count > prec {
        return Err(Error::invalid(format!(
            "cannot extract {count} coefficients from precision {prec}"
        )));
    }
    let mut rest = h.truncate(prec).into_coeffs();
    let f = f.truncate(prec);
    let mut power = QSeries::one(prec);
    let mut out = Vec::with_capacity(count);
    for m in 0..count {
        // power = f^m = q^m + O(q^{m+1}), so rest[m] is the next coefficient
        let c = rest[m].clone();
        if !c.is_zero() {
            for (r, fm) in rest.iter_mut().zip(power.coeffs()).skip(m) {
                if !fm.is_zero() {
                    *r -= &c * fm;
                }
            }
        }
        out.push(c);
        if m + 1 < count {
            power = power.mul(&f);
        }
    }
    Ok(out)
}

/// Sign flags `(sign_a, sign_b)` relating the raw expansion `Σ (A_n + η B_n) f^n`
/// to the published tables `a_n = sign_a·A_n`, `b_n = sign_b·B_n`.
pub fn sign_convention(case_id: CaseId) -> (i32, i32) {
    match case_id {
        CaseId::CatalanP2 => (1, -1),
        _ => (1, 1),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SequenceRow {
    pub n: usize,
    pub a: Rational,
    pub b: Rational,
    /// `2a_n/b_n` in lowest terms; `None` when `b_n = 0`.
    pub approximant: Option<Rational>,
}

impl SequenceRow {
    pub fn p_n(&self) -> Option<&BigInt> {
        self.approximant.as_ref().map(|r| r.numer())
    }

    pub fn q_n(&self) -> Option<&BigInt> {
        self.approximant.as_ref().map(|r| r.denom())
    }

    pub fn is_degenerate(&self) -> bool {
        self.approximant.is_none()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SequenceTable {
    pub case_id: CaseId,
    pub sign_a: i32,
    pub sign_b: i32,
    pub prec: usize,
    pub rows: Vec<SequenceRow>,
}

impl SequenceTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn a(&self) -> Vec<Rational> {
        self.rows.iter().map(|r| r.a.clone()).collect()
    }

    pub fn b(&self) -> Vec<Rational> {
        self.rows.iter().map(|r| r.b.clone()).collect()
    }

    pub fn row(&self, n: usize) -> Option<&SequenceRow> {
        self.rows.get(n)
    }
}

/// The raw coefficient lists `(A, B)` of `λ·E*·E′` and `λ·E*` in powers of
/// the uniformizer.
pub fn raw_expansion(cfg: &CaseConfig, count: usize, prec: usize) -> Result<(Vec<Rational>, Vec<Rational>)> {
    let f = cfg.uniformizer_series(prec)?;
    let weight = cfg.weight_series(prec)?.scale(&cfg.lambda);
    let companion = cfg.companion_series(prec)?;
    let b = reexpand(&weight, &f, count)?;
    let a = reexpand(&weight.mul(&companion), &f, count)?;
    Ok((a, b))
}

/// Coefficients of `H = λ·E*·(E′ + η)` itself, for a probe value `η`.
pub fn expand_h(cfg: &CaseConfig, eta: &Rational, count: usize, prec: usize) -> Result<Vec<Rational>> {
    let f = cfg.uniformizer_series(prec)?;
    let weight = cfg.weight_series(prec)?.scale(&cfg.lambda);
    let shifted = cfg
        .companion_series(prec)?
        .add(&QSeries::constant(eta.clone(), prec));
    reexpand(&weight.mul(&shifted), &f, count)
}

pub fn sequences(case_id: CaseId, count: usize) -> Result<SequenceTable> {
    sequences_with_prec(case_id, count, working_prec(count))
}

pub fn sequences_with_prec(case_id: CaseId, count: usize, prec: usize) -> Result<SequenceTable> {
    if 2 * count > prec {
        return Err(Error::invalid(format!(
            "{count} rows need q-precision of at least {}",
            2 * count
        )));
    }
    let cfg = catalog(case_id)?;
    let (a_raw, b_raw) = raw_expansion(&cfg, count, prec)?;
    let (sign_a, sign_b) = sign_convention(case_id);
    let rows = a_raw
        .into_iter()
        .zip(b_raw)
        .enumerate()
        .map(|(n, (a, b))| {
            let a = a * int(sign_a);
            let b = b * int(sign_b);
            let approximant = (!b.is_zero()).then(|| int(2) * &a / &b);
            SequenceRow { n, a, b, approximant }
        })
        .collect();
    Ok(SequenceTable {
        case_id,
        sign_a,
        sign_b,
        prec,
        rows,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegralityRow {
    pub n: usize,
    pub a_denominator: BigInt,
    /// `lcm(1..n)^D`, which the denominator must divide.
    pub bound: BigInt,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegralityReport {
    pub case_id: CaseId,
    pub d: u32,
    pub rows: Vec<IntegralityRow>,
}

/// Check `b_n ∈ Z` and `lcm(1..n)^D·a_n ∈ Z` for every row.
pub fn integrality_report(table: &SequenceTable) -> Result<IntegralityReport> {
    let cfg = catalog(table.case_id)?;
    let mut rows = Vec::with_capacity(table.len());
    for row in &table.rows {
        if !row.b.is_integer() {
            return Err(Error::Integrality(format!(
                "{}: b_{} = {} is not an integer",
                table.case_id, row.n, row.b
            )));
        }
        let bound = num_traits::pow(lcm_upto(row.n.max(1) as u64)?, cfg.d as usize);
        let den = row.a.denom().clone();
        if !(&bound % &den).is_zero() {
            return Err(Error::Integrality(format!(
                "{}: denominator {den} of a_{} does not divide lcm(1..{})^{}",
                table.case_id, row.n, row.n, cfg.d
            )));
        }
        rows.push(IntegralityRow {
            n: row.n,
            a_denominator: den,
            bound,
        });
    }
    Ok(IntegralityReport {
        case_id: table.case_id,
        d: cfg.d,
        rows,
    })
}
