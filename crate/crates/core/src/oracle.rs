//! Independent p-adic reference values for `ζ_p(1 + 2n)` and `L_2(2, χ)`.
//!
//! Both targets are limits of classical special values along weights
//! `s = 2k` that converge p-adically to a negative even integer (the
//! characters `a ↦ a^{2k}` converge to `a ↦ a^{−2n}`). Two routes are
//! computed and must agree:
//!
//! * **direct**: the special value at one node per modulus `(p−1)p^t`,
//!   for increasing `t`. Converges by roughly one digit per modulus step.
//! * **accelerated**: Newton forward differences over an arithmetic
//!   progression of nodes, extrapolated back to the target weight. The
//!   node function is p-adic analytic along the progression, so its
//!   differences shrink geometrically and each node adds several digits.
//!
//! Certification is by stabilization: an exponent `m` is certified once two
//! successive refinements leave everything below `p^m` unchanged. This is
//! empirical evidence, not a proven error bound.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::eisenstein::{bernoulli, euler_number};
use crate::error::{Error, Result};
use crate::exactnum::{int, is_prime, padic_digits, pow_p, truncate_padic, vp_unchecked, Rational, Valuation};

/// A p-adic number known to agree with `representative` to order
/// `p^agreement_exponent`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicValue {
    pub representative: Rational,
    pub agreement_exponent: i64,
    pub p: u64,
}

impl PadicValue {
    pub fn new(representative: Rational, agreement_exponent: i64, p: u64) -> Self {
        PadicValue {
            representative,
            agreement_exponent,
            p,
        }
    }

    /// `vp(x − representative)`, capped at the agreement exponent. The
    /// second component is true when the cap was hit, i.e. the true
    /// distance is only bounded below.
    pub fn distance_to(&self, x: &Rational) -> (i64, bool) {
        match vp_unchecked(&(x - &self.representative), self.p) {
            Valuation::Finite(v) if v < self.agreement_exponent => (v, false),
            _ => (self.agreement_exponent, true),
        }
    }

    /// Nonzero digits below the agreement exponent.
    pub fn digits(&self) -> Vec<(i64, u64)> {
        let max = (self.agreement_exponent.max(0) as usize + 64).max(1);
        padic_digits(&self.representative, self.p, max)
            .expect("prime checked at construction")
            .into_iter()
            .filter(|&(e, _)| e < self.agreement_exponent)
            .collect()
    }

    /// True if the value is certified nonzero (its valuation is below the
    /// agreement exponent).
    pub fn is_certified_nonzero(&self) -> bool {
        !self.distance_to(&Rational::zero()).1
    }

    /// Merge two estimates of the same quantity; their representatives
    /// must agree to the smaller of the two exponents.
    pub fn combine(&self, other: &PadicValue) -> Result<PadicValue> {
        if self.p != other.p {
            return Err(Error::invalid("cannot combine values for different primes"));
        }
        let need = self.agreement_exponent.min(other.agreement_exponent);
        let gap = vp_unchecked(&(&self.representative - &other.representative), self.p);
        if gap < Valuation::Finite(need) {
            return Err(Error::Inconsistent(format!(
                "estimates differ at p-adic order {gap}, expected agreement to {need}"
            )));
        }
        Ok(if self.agreement_exponent >= other.agreement_exponent {
            self.clone()
        } else {
            other.clone()
        })
    }
}

/// Which limit is being evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleTarget {
    /// `ζ_p(1 + 2n)`.
    Zeta { p: u64, n: u32 },
    /// `L_2(2, χ)`, χ the character mod 4.
    Catalan,
}

impl OracleTarget {
    pub fn prime(self) -> u64 {
        match self {
            OracleTarget::Zeta { p, .. } => p,
            OracleTarget::Catalan => 2,
        }
    }

    /// The weight the node weights converge to.
    fn limit_weight(self) -> i64 {
        match self {
            OracleTarget::Zeta { n, .. } => -2 * n as i64,
            OracleTarget::Catalan => -2,
        }
    }

    /// Smallest usable node weight.
    fn min_weight(self) -> i64 {
        match self {
            OracleTarget::Zeta { .. } => 2,
            OracleTarget::Catalan => 0,
        }
    }

    /// Modulus of the weight progression at level `t`: `2^t` for `p = 2`
    /// (even weights already kill `(Z/4)^×`), `(p−1)p^t` otherwise.
    fn modulus(self, t: u32) -> i64 {
        let p = self.prime() as i64;
        if p == 2 {
            1 << t
        } else {
            (p - 1) * p.pow(t)
        }
    }

    /// The classical special value at weight `s`: `ζ*_p(1 − s)` or `L(−s, χ)`.
    pub fn special_value(self, s: u64) -> Rational {
        match self {
            OracleTarget::Zeta { .. } => self.analytic_node(s) / int(s),
            OracleTarget::Catalan => Rational::new(euler_number(s).expect("even weight"), BigInt::from(2)),
        }
    }

    /// The node function used for extrapolation. For zeta targets this is
    /// `s·ζ*_p(1 − s) = −(1 − p^{s−1}) B_s`, which removes the pole at
    /// `s = 0`; for Catalan it is `L(−s, χ)` itself.
    fn analytic_node(self, s: u64) -> Rational {
        match self {
            OracleTarget::Zeta { p, .. } => {
                let euler = Rational::one() - pow_p(p, s as i64 - 1);
                -(euler * bernoulli(s))
            }
            OracleTarget::Catalan => self.special_value(s),
        }
    }

    /// Convert an extrapolated node value back to the target quantity.
    fn finish(self, node_value: Rational) -> Rational {
        match self {
            OracleTarget::Zeta { .. } => node_value / int(self.limit_weight()),
            OracleTarget::Catalan => node_value,
        }
    }

    fn validate(self) -> Result<()> {
        if let OracleTarget::Zeta { p, n } = self {
            if !is_prime(p) {
                return Err(Error::invalid(format!("{p} is not prime")));
            }
            if n == 0 {
                return Err(Error::invalid("zeta oracle needs n >= 1"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleParams {
    pub target_bits: i64,
    /// Largest `target_bits` accepted.
    pub cap_bits: i64,
    /// Progression level used by the accelerated route.
    pub step_level: u32,
    /// Most nodes the accelerated route may use.
    pub max_nodes: usize,
    /// Largest weight evaluated by the direct route.
    pub direct_max_weight: u64,
}

pub const DEFAULT_TARGET_BITS: i64 = 40;

impl Default for OracleParams {
    fn default() -> Self {
        OracleParams {
            target_bits: DEFAULT_TARGET_BITS,
            cap_bits: DEFAULT_TARGET_BITS,
            step_level: 1,
            max_nodes: 80,
            direct_max_weight: 512,
        }
    }
}

impl OracleParams {
    pub fn with_target(target_bits: i64) -> Self {
        OracleParams {
            target_bits,
            ..Default::default()
        }
    }
}

/// Result of one route.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RouteEstimate {
    pub value: PadicValue,
    /// Node weights used, in order.
    pub weights: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub target: OracleTarget,
    /// The certified value (from the accelerated route, cross-checked
    /// against the direct route).
    pub value: PadicValue,
    pub accelerated: RouteEstimate,
    pub direct: RouteEstimate,
    pub reached_target: bool,
}

impl OracleReport {
    /// Turn a shortfall into an error.
    pub fn require_target(self, requested: i64) -> Result<Self> {
        if self.reached_target {
            Ok(self)
        } else {
            Err(Error::PrecisionUnreachable {
                requested,
                achieved: self.value.agreement_exponent,
            })
        }
    }
}

fn distance(x: &Rational, y: &Rational, p: u64) -> i64 {
    match vp_unchecked(&(x - y), p) {
        Valuation::Finite(v) => v,
        Valuation::Infinity => i64::MAX,
    }
}

/// Newton forward extrapolation of equally spaced `values` (at offsets
/// `0, 1, …`) to the integer offset `x`.
pub fn newton_extrapolate(values: &[Rational], x: i64) -> Rational {
    let mut diffs = values.to_vec();
    let mut total = Rational::zero();
    let mut binom = Rational::one(); // C(x, m)
    let xr = int(x);
    for m in 0..values.len() {
        total += &binom * &diffs[0];
        binom = binom * (&xr - int(m as i64)) / int(m as i64 + 1);
        for i in 0..diffs.len() - 1 - m {
            diffs[i] = &diffs[i + 1] - &diffs[i];
        }
    }
    total
}

/// Certified exponent from the last three refinements.
fn stabilized(history: &[Rational], p: u64) -> Option<i64> {
    let n = history.len();
    if n < 3 {
        return None;
    }
    let d1 = distance(&history[n - 1], &history[n - 2], p);
    let d2 = distance(&history[n - 2], &history[n - 3], p);
    Some(d1.min(d2))
}

fn accelerated(target: OracleTarget, params: &OracleParams) -> Result<(RouteEstimate, bool)> {
    let p = target.prime();
    let step = target.modulus(params.step_level);
    let s0 = target.limit_weight();
    // first node index with a usable weight
    let mut j0 = 1i64;
    while s0 + step * j0 < target.min_weight() {
        j0 += 1;
    }
    let mut weights = Vec::new();
    let mut nodes = Vec::new();
    let mut history: Vec<Rational> = Vec::new();
    let mut best: Option<(Rational, i64, usize)> = None;
    for i in 0..params.max_nodes as i64 {
        let s = (s0 + step * (j0 + i)) as u64;
        weights.push(s);
        nodes.push(target.analytic_node(s));
        history.push(target.finish(newton_extrapolate(&nodes, -j0)));
        if let Some(m) = stabilized(&history, p) {
            let m = m.min(2 * params.cap_bits.max(params.target_bits) + 64);
            if best.as_ref().is_none_or(|b| m > b.1) {
                best = Some((history.last().unwrap().clone(), m, weights.len()));
            }
            if m >= params.target_bits {
                break;
            }
        }
    }
    let (raw, m, used) = best.ok_or_else(|| Error::invalid("accelerated route needs at least three nodes"))?;
    weights.truncate(used);
    let value = PadicValue::new(truncate_padic(&raw, p, m), m, p);
    let reached = m >= params.target_bits;
    Ok((RouteEstimate { value, weights }, reached))
}

fn direct(target: OracleTarget, params: &OracleParams) -> Result<RouteEstimate> {
    let p = target.prime();
    let s0 = target.limit_weight();
    let mut weights: Vec<u64> = Vec::new();
    let mut values: Vec<Rational> = Vec::new();
    let mut t = 1;
    loop {
        let modulus = target.modulus(t);
        let floor = weights
            .last()
            .map_or(target.min_weight(), |&w| w as i64 + 1);
        // smallest weight ≥ floor congruent to s0 mod modulus
        let s = s0 + modulus * (floor - s0 + modulus - 1).div_euclid(modulus);
        if s as u64 > params.direct_max_weight {
            break;
        }
        weights.push(s as u64);
        values.push(target.special_value(s as u64));
        t += 1;
    }
    let m = stabilized(&values, p)
        .ok_or_else(|| Error::invalid("direct route needs at least three weights; raise direct_max_weight"))?;
    let last = values.last().unwrap();
    Ok(RouteEstimate {
        value: PadicValue::new(truncate_padic(last, p, m), m, p),
        weights,
    })
}

/// Evaluate a target by both routes and cross-check them.
pub fn evaluate(target: OracleTarget, params: &OracleParams) -> Result<OracleReport> {
    target.validate()?;
    if params.target_bits < 1 {
        return Err(Error::invalid("target_bits must be positive"));
    }
    if params.target_bits > params.cap_bits {
        return Err(Error::invalid(format!(
            "target_bits {} exceeds the cap {}",
            params.target_bits, params.cap_bits
        )));
    }
    let (acc, reached) = accelerated(target, params)?;
    let dir = direct(target, params)?;
    // mandatory agreement; the accelerated estimate carries the certificate
    acc.value.combine(&dir.value)?;
    let value = acc.value.clone();
    Ok(OracleReport {
        target,
        value,
        accelerated: acc,
        direct: dir,
        reached_target: reached,
    })
}

/// `ζ_p(1 + 2n)` to `target_bits` p-adic digits.
pub fn zeta_p_oracle(p: u64, n: u32, target_bits: i64) -> Result<OracleReport> {
    evaluate(OracleTarget::Zeta { p, n }, &OracleParams::with_target(target_bits))
}

/// `L_2(2, χ)` to `target_bits` 2-adic digits.
pub fn catalan_2adic_oracle(target_bits: i64) -> Result<OracleReport> {
    evaluate(OracleTarget::Catalan, &OracleParams::with_target(target_bits))
}
