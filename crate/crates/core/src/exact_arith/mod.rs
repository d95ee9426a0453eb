//! Exact arithmetic over `Q` and real quadratic fields `Q(sqrt d)`.
//!
//! Rationals are [`num_rational::BigRational`] values (always reduced, with a
//! positive denominator). [`QuadExt`] holds `a + b*sqrt(d)` in canonical form.

mod cf;
mod lattice;
mod quad;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use cf::{cf_expand, ContinuedFraction};
pub use lattice::lattice_member;
pub use quad::{as_p_sqrt_q, quad_arith, quad_normalize, PSqrtQForm, QuadExt, QuadOp};

pub type Rat = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("operands live in different quadratic fields Q(sqrt {left}) and Q(sqrt {right})")]
    MixedField { left: u64, right: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("value is rational, expected a quadratic irrational")]
    NotQuadraticIrrational,
    #[error("radicand must be positive")]
    NonPositiveRadicand,
    #[error("squarefree part of the radicand does not fit in 64 bits")]
    RadicandTooLarge,
    #[error("no period detected within {terms} partial quotients")]
    MaxTermsExceeded { terms: usize },
}

/// Builds the rational `num/den`. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(value: i64) -> Rat {
    Rat::from_integer(BigInt::from(value))
}

/// Parses `"num/den"` or `"num"`.
pub fn parse_rat(text: &str) -> Option<Rat> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rat::new(num, den))
}

/// Text encoding `num/den`, with the denominator omitted when it is one.
pub fn format_rat(value: &Rat) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn rat_to_f64(value: &Rat) -> f64 {
    match (value.numer().to_f64(), value.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Very large parts: scale both down by the same power of two.
            let shift = value
                .denom()
                .bits()
                .max(value.numer().bits())
                .saturating_sub(900);
            let n = (value.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (value.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

pub fn is_integer(value: &Rat) -> bool {
    value.denom().is_one()
}

/// Splits `n = square^2 * free` with `free` squarefree, by trial division.
pub(crate) fn squarefree_split(n: &BigUint) -> (BigUint, BigUint) {
    let mut rest = n.clone();
    let mut square = BigUint::one();
    let mut free = BigUint::one();
    let mut p = BigUint::from(2u32);
    while &p * &p <= rest {
        let mut exponent = 0u32;
        while (&rest % &p).is_zero() {
            rest /= &p;
            exponent += 1;
        }
        if exponent > 0 {
            square *= p.pow(exponent / 2);
            if exponent % 2 == 1 {
                free *= &p;
            }
        }
        p += if p == BigUint::from(2u32) { 1u32 } else { 2u32 };
    }
    free *= rest;
    (square, free)
}

pub(crate) fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let root = n.sqrt();
    &root * &root == *n
}

/// `Some(r)` with `r >= 0` and `r*r == value` when the rational has a rational square root.
pub fn rational_sqrt(value: &Rat) -> Option<Rat> {
    if value.is_negative() {
        return None;
    }
    let (n, d) = (value.numer(), value.denom());
    if is_perfect_square(n) && is_perfect_square(d) {
        Some(Rat::new(n.sqrt(), d.sqrt()))
    } else {
        None
    }
}
