//! P-finite recurrences `Σ_{i=0}^{r} P_i(n) u(n+1−i) = 0` with integer
//! polynomial coefficients: checking, guessing and unrolling.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::Rational;

/// Coefficients `P_0, …, P_r`, each an ascending list of integer
/// coefficients in `n`. `P_0` multiplies the highest-index term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrenceSpec {
    pub polys: Vec<Vec<BigInt>>,
}

fn eval_poly(poly: &[BigInt], n: i64) -> BigInt {
    let x = BigInt::from(n);
    poly.iter().rev().fold(BigInt::zero(), |acc, c| acc * &x + c)
}

fn trim(poly: &mut Vec<BigInt>) {
    while poly.last().is_some_and(Zero::is_zero) {
        poly.pop();
    }
}

impl RecurrenceSpec {
    /// Build from coefficient lists, normalizing to content 1 with a
    /// positive leading coefficient in `P_0`.
    pub fn new(polys: Vec<Vec<BigInt>>) -> Result<Self> {
        if polys.len() < 2 {
            return Err(Error::invalid("a recurrence needs order at least 1"));
        }
        let mut polys = polys;
        polys.iter_mut().for_each(trim);
        let content = polys
            .iter()
            .flatten()
            .fold(BigInt::zero(), |g, c| g.gcd(c));
        if content.is_zero() {
            return Err(Error::invalid("all recurrence coefficients are zero"));
        }
        let Some(lead) = polys[0].last() else {
            return Err(Error::invalid("leading polynomial P_0 is identically zero"));
        };
        let content = if lead.is_negative() { -content } else { content };
        for c in polys.iter_mut().flatten() {
            *c /= &content;
        }
        Ok(RecurrenceSpec { polys })
    }

    pub fn from_i64(polys: &[&[i64]]) -> Result<Self> {
        Self::new(
            polys
                .iter()
                .map(|p| p.iter().map(|&c| BigInt::from(c)).collect())
                .collect(),
        )
    }

    pub fn order(&self) -> usize {
        self.polys.len() - 1
    }

    pub fn degree(&self) -> usize {
        self.polys.iter().map(|p| p.len().saturating_sub(1)).max().unwrap_or(0)
    }

    /// `Σ P_i(n) u(n+1−i)`.
    pub fn residual(&self, seq: &[Rational], n: usize) -> Result<Rational> {
        let r = self.order();
        if n + 1 < r || n + 1 >= seq.len() {
            return Err(Error::invalid(format!(
                "index {n} out of range for order {r} and {} terms",
                seq.len()
            )));
        }
        Ok(self
            .polys
            .iter()
            .enumerate()
            .map(|(i, p)| Rational::from(eval_poly(p, n as i64)) * &seq[n + 1 - i])
            .sum())
    }
}

fn fmt_poly(poly: &[BigInt]) -> String {
    let mut terms = Vec::new();
    for (j, c) in poly.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mono = match j {
            0 => String::new(),
            1 => "n".to_string(),
            _ => format!("n^{j}"),
        };
        let coef = if j > 0 && c.abs().is_one() {
            if c.is_negative() { "-".into() } else { String::new() }
        } else {
            c.to_string()
        };
        terms.push(format!("{coef}{mono}"));
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ").replace("+ -", "- ")
    }
}

impl fmt::Display for RecurrenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .polys
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_empty())
            .map(|(i, p)| {
                let idx = match i {
                    0 => "n+1".to_string(),
                    1 => "n".to_string(),
                    _ => format!("n-{}", i - 1),
                };
                format!("({}) u({idx})", fmt_poly(p))
            })
            .collect();
        write!(f, "{} = 0", parts.join(" + "))
    }
}

/// The order-2 recurrence of the 2-adic Catalan denominators.
pub fn catalan_recurrence() -> RecurrenceSpec {
    // (n+1)^2, 32n^2 - 4, 256(n-1)^2
    RecurrenceSpec::from_i64(&[&[1, 2, 1], &[-4, 0, 32], &[256, -512, 256]]).expect("valid")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub n: usize,
    pub residual: String,
}

/// Indices `n` in `start..=end` where the recurrence fails.
pub fn verify(spec: &RecurrenceSpec, seq: &[Rational], start: usize, end: usize) -> Result<Vec<Violation>> {
    if start > end {
        return Err(Error::invalid("empty verification range"));
    }
    let mut bad = Vec::new();
    for n in start..=end {
        let res = spec.residual(seq, n)?;
        if !res.is_zero() {
            bad.push(Violation {
                n,
                residual: res.to_string(),
            });
        }
    }
    Ok(bad)
}

/// Terms needed to fit order `r`, degree `d`.
pub fn terms_needed(r: usize, d: usize) -> usize {
    (r + 1) * (d + 1) + r + 4
}

/// Row-reduce in place; returns pivot columns.
fn rref(m: &mut [Vec<Rational>]) -> Vec<usize> {
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(pr) = (row..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(row, pr);
        let inv = m[row][col].recip();
        for c in m[row].iter_mut() {
            *c *= &inv;
        }
        for i in 0..m.len() {
            if i != row && !m[i][col].is_zero() {
                let factor = m[i][col].clone();
                for c in 0..cols {
                    let t = &factor * &m[row][c];
                    m[i][c] -= t;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    pivots
}

/// Guess a recurrence of order `r` and degree at most `d` from the terms
/// of `seq`, using equations for every `n ≥ r−1`. When several fit, the
/// one with the lexicographically smallest degree profile
/// `(deg P_0, deg P_1, …)` is returned. `None` when no recurrence of that
/// shape with `P_0 ≠ 0` fits.
pub fn fit(seq: &[Rational], r: usize, d: usize) -> Result<Option<RecurrenceSpec>> {
    if r == 0 {
        return Err(Error::invalid("order must be at least 1"));
    }
    let need = terms_needed(r, d);
    if seq.len() < need {
        return Err(Error::invalid(format!(
            "order {r}, degree {d} needs {need} terms, got {}",
            seq.len()
        )));
    }
    // unknown (i, j) sits in column i(d + 1) + (d − j): P_0 first, high degree first
    let cols = (r + 1) * (d + 1);
    let col = |i: usize, j: usize| i * (d + 1) + (d - j);
    let mut rows = Vec::new();
    for n in (r - 1)..(seq.len() - 1) {
        let mut row = vec![Rational::zero(); cols];
        let mut pw = Rational::one();
        for j in 0..=d {
            for i in 0..=r {
                row[col(i, j)] = &pw * &seq[n + 1 - i];
            }
            pw *= Rational::from(BigInt::from(n));
        }
        rows.push(row);
    }
    let pivots = rref(&mut rows);
    if pivots.len() == cols {
        return Ok(None);
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis: Vec<Vec<Rational>> = free
        .iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (k, &pc) in pivots.iter().enumerate() {
                v[pc] = -rows[k][f].clone();
            }
            v
        })
        .collect();
    // in reduced form, the last basis row pivoting inside the P_0 block has
    // the fewest leading nonzeros among solutions with P_0 ≠ 0
    let basis_pivots = rref(&mut basis);
    let Some(k) = basis_pivots.iter().rposition(|&c| c <= d) else {
        return Ok(None);
    };
    let best = &basis[k];
    let den = best
        .iter()
        .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let polys = (0..=r)
        .map(|i| {
            (0..=d)
                .map(|j| (&best[col(i, j)] * Rational::from(den.clone())).to_integer())
                .collect()
        })
        .collect();
    RecurrenceSpec::new(polys).map(Some)
}

/// Extend `initial` to `count` terms by unrolling the recurrence.
pub fn generate(spec: &RecurrenceSpec, initial: &[Rational], count: usize) -> Result<Vec<Rational>> {
    let r = spec.order();
    if initial.len() < r {
        return Err(Error::invalid(format!("order {r} needs {r} initial terms")));
    }
    let mut out = initial.to_vec();
    while out.len() < count {
        let n = out.len() - 1;
        let lead = eval_poly(&spec.polys[0], n as i64);
        if lead.is_zero() {
            return Err(Error::invalid(format!("leading coefficient vanishes at n = {n}")));
        }
        let rest: Rational = (1..=r)
            .filter(|&i| n + 1 >= i)
            .map(|i| Rational::from(eval_poly(&spec.polys[i], n as i64)) * &out[n + 1 - i])
            .sum();
        out.push(-rest / Rational::from(lead));
    }
    out.truncate(count.max(initial.len()));
    Ok(out)
}
