use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{ArithError, QuadExt};

/// Simple continued fraction `[a0; a1, ..., (period)]` of a quadratic irrational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuedFraction {
    /// Partial quotients before the periodic part.
    pub preperiod: Vec<BigInt>,
    /// One full period, repeated forever.
    pub period: Vec<BigInt>,
}

impl ContinuedFraction {
    /// The `i`-th partial quotient.
    pub fn term(&self, i: usize) -> &BigInt {
        if i < self.preperiod.len() {
            &self.preperiod[i]
        } else {
            &self.period[(i - self.preperiod.len()) % self.period.len()]
        }
    }

    pub fn terms(&self, count: usize) -> Vec<BigInt> {
        (0..count).map(|i| self.term(i).clone()).collect()
    }

    /// First `count` convergents `p_n / q_n`.
    pub fn convergents(&self, count: usize) -> Vec<(BigInt, BigInt)> {
        let mut out = Vec::with_capacity(count);
        let (mut p_prev, mut p) = (BigInt::zero(), BigInt::one());
        let (mut q_prev, mut q) = (BigInt::one(), BigInt::zero());
        for i in 0..count {
            let a = self.term(i);
            let p_next = a * &p + &p_prev;
            let q_next = a * &q + &q_prev;
            p_prev = std::mem::replace(&mut p, p_next);
            q_prev = std::mem::replace(&mut q, q_next);
            out.push((p.clone(), q.clone()));
        }
        out
    }
}

/// Expands an irrational quadratic surd by exact floor / subtract / invert steps
/// until a complete quotient repeats.
pub fn cf_expand(x: &QuadExt, max_terms: usize) -> Result<ContinuedFraction, ArithError> {
    if x.is_rational() {
        return Err(ArithError::NotQuadraticIrrational);
    }
    let mut seen: HashMap<QuadExt, usize> = HashMap::new();
    let mut terms = Vec::new();
    let mut current = x.clone();
    for index in 0..max_terms {
        if let Some(&start) = seen.get(&current) {
            let period = terms.split_off(start);
            return Ok(ContinuedFraction {
                preperiod: terms,
                period,
            });
        }
        seen.insert(current.clone(), index);
        let a = current.floor();
        let fractional = &current - &QuadExt::from_bigint(a.clone());
        terms.push(a);
        current = fractional.inverse()?;
    }
    Err(ArithError::MaxTermsExceeded { terms: max_terms })
}
