//! Continued fractions of quadratic surds (P + √D)/Q, computed exactly.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

use crate::arith::{exact_sqrt, isqrt};
use crate::error::{Error, Result};
use crate::serde_big;

/// The surd (p + √d)/q with q | d − p².
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticSurd {
    pub p: BigInt,
    pub d: BigInt,
    pub q: BigInt,
}

impl QuadraticSurd {
    pub fn new(p: BigInt, d: BigInt, q: BigInt) -> Result<Self> {
        if !d.is_positive() || exact_sqrt(&d).is_some() {
            return Err(Error::InvalidArgument(format!("{d} is not a positive non-square")));
        }
        if q.is_zero() || !(&d - &p * &p).is_multiple_of(&q) {
            return Err(Error::InvalidArgument("q must divide d − p²".into()));
        }
        Ok(QuadraticSurd { p, d, q })
    }

    /// ⌊(p + √d)/q⌋ given r = ⌊√d⌋.
    fn floor_with(&self, r: &BigInt) -> BigInt {
        let num = &self.p + r;
        if self.q.is_positive() {
            num.div_floor(&self.q)
        } else {
            -(num.div_floor(&-&self.q)) - 1
        }
    }

    /// Complete quotient after removing the partial quotient a.
    fn next(&self, a: &BigInt) -> QuadraticSurd {
        let p = a * &self.q - &self.p;
        let q = (&self.d - &p * &p) / &self.q;
        QuadraticSurd { p, d: self.d.clone(), q }
    }
}

/// Partial quotients with the complete quotient that produced each one.
#[derive(Clone, Debug)]
pub struct Expansion {
    pub quotients: Vec<BigInt>,
    pub states: Vec<QuadraticSurd>,
    pub period_start: usize,
    pub period_len: usize,
}

/// Expand through the pre-period and `periods` full periods (at least one).
pub fn expand(start: &QuadraticSurd, periods: usize) -> Expansion {
    let r = isqrt(&start.d);
    let mut seen: HashMap<(BigInt, BigInt), usize> = HashMap::new();
    let mut quotients = Vec::new();
    let mut states = Vec::new();
    let mut cur = start.clone();
    let mut period: Option<(usize, usize)> = None;
    loop {
        let i = quotients.len();
        if let Some((j, l)) = period {
            if i >= j + periods.max(1) * l {
                break;
            }
        } else if let Some(&j) = seen.get(&(cur.p.clone(), cur.q.clone())) {
            period = Some((j, i - j));
            continue;
        } else {
            seen.insert((cur.p.clone(), cur.q.clone()), i);
        }
        let a = cur.floor_with(&r);
        let nxt = cur.next(&a);
        quotients.push(a);
        states.push(cur);
        cur = nxt;
    }
    let (period_start, period_len) = period.expect("loop exits after detecting the period");
    Expansion { quotients, states, period_start, period_len }
}

/// Convergents h_k/k_k from the recurrence h_k = a_k h_{k−1} + h_{k−2}.
pub fn convergents(quotients: &[BigInt]) -> Vec<(BigInt, BigInt)> {
    let (mut h1, mut h2) = (BigInt::one(), BigInt::zero());
    let (mut k1, mut k2) = (BigInt::zero(), BigInt::one());
    let mut out = Vec::with_capacity(quotients.len());
    for a in quotients {
        let h = a * &h1 + &h2;
        let k = a * &k1 + &k2;
        h2 = std::mem::replace(&mut h1, h.clone());
        k2 = std::mem::replace(&mut k1, k.clone());
        out.push((h, k));
    }
    out
}

/// Continued fraction of √p / q.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurdCF {
    #[serde(with = "serde_big::scalar")]
    pub p: BigInt,
    #[serde(with = "serde_big::scalar")]
    pub q: BigInt,
    #[serde(with = "serde_big::vec")]
    pub partial_quotients: Vec<BigInt>,
    pub period_start: usize,
    pub period_len: usize,
    /// (numerator, denominator)
    #[serde(with = "serde_big::pairs")]
    pub convergents: Vec<(BigInt, BigInt)>,
}

impl SurdCF {
    pub fn period(&self) -> &[BigInt] {
        &self.partial_quotients[self.period_start..self.period_start + self.period_len]
    }
}

/// The expansion of √p / q with at least `count` terms and at least one full period.
pub fn surd_cf(p: &BigInt, q: &BigInt, count: usize) -> Result<SurdCF> {
    if !p.is_positive() || !q.is_positive() {
        return Err(Error::InvalidArgument("p and q must be positive".into()));
    }
    if exact_sqrt(p).is_some() {
        return Err(Error::InvalidArgument(format!("√{p}/{q} is rational")));
    }
    // √p/q = √(p q²)/q²
    let q2 = q * q;
    let start = QuadraticSurd::new(BigInt::zero(), p * &q2, q2)?;
    let mut periods = 1;
    let ex = loop {
        let ex = expand(&start, periods);
        if ex.quotients.len() >= count {
            break ex;
        }
        periods += 1;
    };
    let len = count.max(ex.period_start + ex.period_len);
    let quotients: Vec<BigInt> = ex.quotients[..len].to_vec();
    Ok(SurdCF {
        p: p.clone(),
        q: q.clone(),
        convergents: convergents(&quotients),
        partial_quotients: quotients,
        period_start: ex.period_start,
        period_len: ex.period_len,
    })
}
