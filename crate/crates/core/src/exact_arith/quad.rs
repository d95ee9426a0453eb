use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{format_rat, rat_to_f64, squarefree_split, ArithError, Rat};

/// An element `a + b*sqrt(d)` of a real quadratic field, in canonical form.
///
/// `d` is squarefree and `b == 0` forces `d == 1`, so two values are equal
/// exactly when their components are.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadExt {
    a: Rat,
    b: Rat,
    d: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// `p + sign*sqrt(q)` with `q > 0` and `sqrt(q)` irrational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PSqrtQForm {
    pub p: Rat,
    pub q: Rat,
    pub sign: i8,
}

impl PSqrtQForm {
    pub fn reconstruct(&self) -> QuadExt {
        quad_normalize(&self.p, &Rat::from_integer(self.sign.into()), &self.q)
            .expect("q > 0 by construction")
    }
}

/// Canonical form of `a + b*sqrt(d_raw)` for a positive rational `d_raw`.
///
/// Square factors of the numerator and denominator of `d_raw` move into `b`.
pub fn quad_normalize(a: &Rat, b: &Rat, d_raw: &Rat) -> Result<QuadExt, ArithError> {
    if !d_raw.is_positive() {
        return Err(ArithError::NonPositiveRadicand);
    }
    if b.is_zero() {
        return Ok(QuadExt::from_rat(a.clone()));
    }
    // sqrt(n/m) = sqrt(n*m)/m
    let n = d_raw.numer().magnitude().clone();
    let m = d_raw.denom().magnitude().clone();
    let (square, free) = squarefree_split(&(&n * &m));
    let scale = Rat::new(
        BigInt::from_biguint(Sign::Plus, square),
        BigInt::from_biguint(Sign::Plus, m),
    );
    let b = b * scale;
    if free == BigUint::one() {
        return Ok(QuadExt::from_rat(a + b));
    }
    let d = free.to_u64().ok_or(ArithError::RadicandTooLarge)?;
    Ok(QuadExt { a: a.clone(), b, d })
}

pub fn quad_arith(x: &QuadExt, y: &QuadExt, op: QuadOp) -> Result<QuadExt, ArithError> {
    match op {
        QuadOp::Add => x.checked_add(y),
        QuadOp::Sub => x.checked_sub(y),
        QuadOp::Mul => x.checked_mul(y),
        QuadOp::Div => x.checked_div(y),
    }
}

/// Rewrites an irrational `a + b*sqrt(d)` as `p ± sqrt(q)` with `p = a`, `q = b^2 d`.
pub fn as_p_sqrt_q(x: &QuadExt) -> Result<PSqrtQForm, ArithError> {
    if x.is_rational() {
        return Err(ArithError::NotQuadraticIrrational);
    }
    Ok(PSqrtQForm {
        p: x.a.clone(),
        q: &x.b * &x.b * Rat::from_integer(x.d.into()),
        sign: if x.b.is_positive() { 1 } else { -1 },
    })
}

impl QuadExt {
    pub fn from_rat(value: Rat) -> Self {
        QuadExt {
            a: value,
            b: Rat::zero(),
            d: 1,
        }
    }

    pub fn from_int(value: i64) -> Self {
        Self::from_rat(Rat::from_integer(value.into()))
    }

    pub fn from_bigint(value: BigInt) -> Self {
        Self::from_rat(Rat::from_integer(value))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// `a + b*sqrt(d)` for an integer radicand, normalized.
    pub fn new(a: Rat, b: Rat, d: u64) -> Result<Self, ArithError> {
        quad_normalize(&a, &b, &Rat::from_integer(d.into()))
    }

    /// `sqrt(d)` as a field element.
    pub fn sqrt(d: u64) -> Result<Self, ArithError> {
        Self::new(Rat::zero(), Rat::one(), d)
    }

    /// Builds from components that are already canonical (`d` squarefree, `d > 1`
    /// unless `b == 0`). Returns `None` otherwise.
    pub fn from_canonical_parts(a: Rat, b: Rat, d: u64) -> Option<Self> {
        if b.is_zero() {
            return (d == 1).then(|| Self::from_rat(a));
        }
        if d <= 1 {
            return None;
        }
        let (_, free) = squarefree_split(&BigUint::from(d));
        (free == BigUint::from(d)).then_some(QuadExt { a, b, d })
    }

    pub fn a(&self) -> &Rat {
        &self.a
    }

    pub fn b(&self) -> &Rat {
        &self.b
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rat> {
        self.is_rational().then_some(&self.a)
    }

    /// The radicand of the field this value lives in, or `None` for rationals.
    pub fn field(&self) -> Option<u64> {
        (!self.is_rational()).then_some(self.d)
    }

    /// Radicand shared by both operands (1 when both are rational).
    pub fn common_field(&self, other: &QuadExt) -> Result<u64, ArithError> {
        match (self.field(), other.field()) {
            (None, None) => Ok(1),
            (Some(d), None) | (None, Some(d)) => Ok(d),
            (Some(l), Some(r)) if l == r => Ok(l),
            (Some(l), Some(r)) => Err(ArithError::MixedField { left: l, right: r }),
        }
    }

    fn with(a: Rat, b: Rat, d: u64) -> Self {
        if b.is_zero() {
            QuadExt::from_rat(a)
        } else {
            QuadExt { a, b, d }
        }
    }

    pub fn checked_add(&self, other: &QuadExt) -> Result<QuadExt, ArithError> {
        let d = self.common_field(other)?;
        Ok(Self::with(&self.a + &other.a, &self.b + &other.b, d))
    }

    pub fn checked_sub(&self, other: &QuadExt) -> Result<QuadExt, ArithError> {
        let d = self.common_field(other)?;
        Ok(Self::with(&self.a - &other.a, &self.b - &other.b, d))
    }

    pub fn checked_mul(&self, other: &QuadExt) -> Result<QuadExt, ArithError> {
        let d = self.common_field(other)?;
        let dr = Rat::from_integer(d.into());
        let a = &self.a * &other.a + &self.b * &other.b * dr;
        let b = &self.a * &other.b + &self.b * &other.a;
        Ok(Self::with(a, b, d))
    }

    pub fn checked_div(&self, other: &QuadExt) -> Result<QuadExt, ArithError> {
        self.common_field(other)?;
        let inverse = other.inverse()?;
        self.checked_mul(&inverse)
    }

    pub fn inverse(&self) -> Result<QuadExt, ArithError> {
        let norm = self.norm();
        if norm.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Self::with(&self.a / &norm, -(&self.b / &norm), self.d))
    }

    pub fn conjugate(&self) -> QuadExt {
        Self::with(self.a.clone(), -self.b.clone(), self.d)
    }

    /// `a^2 - b^2 d`
    pub fn norm(&self) -> Rat {
        &self.a * &self.a - &self.b * &self.b * Rat::from_integer(self.d.into())
    }

    pub fn scale(&self, factor: &Rat) -> QuadExt {
        Self::with(&self.a * factor, &self.b * factor, self.d)
    }

    /// Exact sign of `a + b*sqrt(d)` without floating point.
    pub fn signum(&self) -> i8 {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // Opposite signs: compare a^2 with b^2 d.
        let lhs = &self.a * &self.a;
        let rhs = &self.b * &self.b * Rat::from_integer(self.d.into());
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> QuadExt {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Ordering of two values in a shared field.
    pub fn try_cmp(&self, other: &QuadExt) -> Result<Ordering, ArithError> {
        let diff = self.checked_sub(other)?;
        Ok(diff.signum().cmp(&0))
    }

    /// Largest integer not exceeding the value, computed exactly.
    pub fn floor(&self) -> BigInt {
        if self.is_rational() {
            return self.a.floor().to_integer();
        }
        // |b| sqrt(d) = sqrt(N/M) lies in [s, s+1) with s = floor(isqrt(N M) / M).
        let radicand = &self.b * &self.b * Rat::from_integer(self.d.into());
        let (n, m) = (radicand.numer(), radicand.denom());
        let s = Rat::from_integer((n * m).sqrt()) / Rat::from_integer(m.clone());
        let s = s.floor();
        let guess = if self.b.is_positive() {
            &self.a + s
        } else {
            &self.a - s
        };
        let mut candidate: BigInt = guess.floor().to_integer() - 1;
        while self
            .checked_sub(&QuadExt::from_bigint(candidate.clone()))
            .unwrap()
            .signum()
            < 0
        {
            candidate -= 1;
        }
        loop {
            let next: BigInt = &candidate + 1;
            if self
                .checked_sub(&QuadExt::from_bigint(next.clone()))
                .unwrap()
                .signum()
                >= 0
            {
                candidate = next;
            } else {
                return candidate;
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        rat_to_f64(&self.a) + rat_to_f64(&self.b) * (self.d as f64).sqrt()
    }
}

fn sign_of(value: &Rat) -> i8 {
    if value.is_positive() {
        1
    } else if value.is_negative() {
        -1
    } else {
        0
    }
}

impl PartialOrd for QuadExt {
    /// `None` when the two values live in different quadratic fields.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.try_cmp(other).ok()
    }
}

impl From<Rat> for QuadExt {
    fn from(value: Rat) -> Self {
        QuadExt::from_rat(value)
    }
}

impl From<i64> for QuadExt {
    fn from(value: i64) -> Self {
        QuadExt::from_int(value)
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", format_rat(&self.a));
        }
        let root = format!("√{}", self.d);
        let coefficient = |b: &Rat| -> String {
            if b.is_one() {
                root.clone()
            } else {
                format!("{}{}", format_rat(b), root)
            }
        };
        if self.a.is_zero() {
            if self.b.is_negative() {
                return write!(f, "-{}", coefficient(&-self.b.clone()));
            }
            return write!(f, "{}", coefficient(&self.b));
        }
        if self.b.is_negative() {
            write!(
                f,
                "{} - {}",
                format_rat(&self.a),
                coefficient(&-self.b.clone())
            )
        } else {
            write!(f, "{} + {}", format_rat(&self.a), coefficient(&self.b))
        }
    }
}

// Operator forms panic on mixed fields or division by zero, like integer
// division does; callers that cannot rule those out use the `checked_*` forms.
macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&QuadExt> for &QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: &QuadExt) -> QuadExt {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{}", e))
            }
        }
        impl $trait<QuadExt> for QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: QuadExt) -> QuadExt {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&QuadExt> for QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: &QuadExt) -> QuadExt {
                (&self).$method(rhs)
            }
        }
        impl $trait<QuadExt> for &QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: QuadExt) -> QuadExt {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);

impl Neg for &QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt::with(-self.a.clone(), -self.b.clone(), self.d)
    }
}

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        -&self
    }
}
