//! Pell's equation and the hyperbolic monomial automorphisms it produces.
//!
//! For `alpha = p/n ± sqrt(q/n^2)` (integers `p`, `q`, `n`), every positive
//! solution of `x^2 - n^2 q y^2 = 1` gives an integer matrix
//!
//! ```text
//! ( x - p n y    y (q - p^2) )
//! ( n^2 y        x + p n y   )
//! ```
//!
//! of determinant one whose action fixes the direction `(1, alpha)`. Its trace
//! is `2x`, so it is hyperbolic as soon as `x > 1`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::exact_arith::{
    as_p_sqrt_q, cf_expand, is_perfect_square, quad_normalize, rational_sqrt, ArithError, QuadExt,
    Rat,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PellError {
    #[error("D = {0} is a perfect square")]
    SquareInput(u64),
    #[error("expected the fundamental solution (index 1), got index {0}")]
    NotFundamental(u32),
    #[error("sqrt(q) is rational")]
    RationalSqrt,
    #[error("q must be positive")]
    NonPositiveQ,
    #[error("solution solves x^2 - {found} y^2 = 1 but the exponent needs D = {expected}")]
    IncompatiblePell { expected: BigInt, found: u64 },
    #[error("Pell parameter n^2 q = {0} does not fit in 64 bits")]
    ParameterTooLarge(BigInt),
    #[error("internal consistency failure: {0}")]
    ConstraintViolation(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// A positive solution of `x^2 - D y^2 = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PellSolution {
    pub d: u64,
    pub x: BigInt,
    pub y: BigInt,
    /// Power of the fundamental unit `x1 + y1 sqrt(D)` this solution equals.
    pub index: u32,
}

impl PellSolution {
    pub fn satisfies_identity(&self) -> bool {
        &self.x * &self.x - BigInt::from(self.d) * &self.y * &self.y == BigInt::one()
    }
}

/// Minimal positive solution, read off the convergents of the continued fraction of `sqrt(D)`.
pub fn pell_fundamental(d: u64) -> Result<PellSolution, PellError> {
    if d == 0 || is_perfect_square(&BigInt::from(d)) {
        return Err(PellError::SquareInput(d));
    }
    let root = QuadExt::sqrt(d)?;
    // Period of sqrt(D) is below 2 sqrt(D) ln D + small; this is generous.
    let budget = 64 + 4 * (d as f64).sqrt() as usize * (64 - d.leading_zeros() as usize);
    let cf = cf_expand(&root, budget)?;
    let horizon = cf.preperiod.len() + 2 * cf.period.len();
    let target = BigInt::from(d);
    for (x, y) in cf.convergents(horizon) {
        if &x * &x - &target * &y * &y == BigInt::one() {
            let solution = PellSolution { d, x, y, index: 1 };
            debug_assert!(solution.satisfies_identity());
            return Ok(solution);
        }
    }
    Err(PellError::ConstraintViolation(format!(
        "no Pell solution among the first {horizon} convergents of sqrt({d})"
    )))
}

/// Solutions of indices `1..=count`, via `(x1 + y1 sqrt D)^n`.
pub fn pell_iterate(fund: &PellSolution, count: u32) -> Result<Vec<PellSolution>, PellError> {
    if fund.index != 1 {
        return Err(PellError::NotFundamental(fund.index));
    }
    let d = BigInt::from(fund.d);
    let mut out = Vec::with_capacity(count as usize);
    let (mut x, mut y) = (fund.x.clone(), fund.y.clone());
    for index in 1..=count {
        let solution = PellSolution {
            d: fund.d,
            x: x.clone(),
            y: y.clone(),
            index,
        };
        if !solution.satisfies_identity() {
            return Err(PellError::ConstraintViolation(format!(
                "index {index} fails the Pell identity"
            )));
        }
        out.push(solution);
        let next_x = &fund.x * &x + &d * &fund.y * &y;
        let next_y = &fund.x * &y + &fund.y * &x;
        x = next_x;
        y = next_y;
    }
    Ok(out)
}

/// Integer data `(p, q, n)` with `alpha = p/n ± sqrt(q/n^2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PNQData {
    pub p_int: BigInt,
    pub q_int: BigInt,
    pub n: BigInt,
}

impl PNQData {
    /// Parameter of the Pell equation `x^2 - n^2 q y^2 = 1`.
    pub fn pell_parameter(&self) -> BigInt {
        &self.n * &self.n * &self.q_int
    }

    pub fn p(&self) -> Rat {
        Rat::new(self.p_int.clone(), self.n.clone())
    }

    pub fn q(&self) -> Rat {
        Rat::new(self.q_int.clone(), &self.n * &self.n)
    }

    /// `p/n + sign * sqrt(q)/n`
    pub fn alpha(&self, sign: i8) -> QuadExt {
        let coefficient = Rat::new(BigInt::from(sign), self.n.clone());
        quad_normalize(
            &self.p(),
            &coefficient,
            &Rat::from_integer(self.q_int.clone()),
        )
        .expect("q > 0")
    }
}

/// Clears denominators: the least `n` with `n p` and `n^2 q` integral.
pub fn alpha_to_pnq(p: &Rat, q: &Rat) -> Result<PNQData, PellError> {
    if !q.is_positive() {
        return Err(PellError::NonPositiveQ);
    }
    if rational_sqrt(q).is_some() {
        return Err(PellError::RationalSqrt);
    }
    let step = p.denom().clone();
    let mut n = step.clone();
    // Terminates at the latest at lcm(den p, den q).
    while !(&n * &n % q.denom()).is_zero() {
        n += &step;
    }
    let p_int = (p * Rat::from_integer(n.clone())).to_integer();
    let q_int = (q * Rat::from_integer(&n * &n)).to_integer();
    Ok(PNQData { p_int, q_int, n })
}

/// Exponent matrix `(k1 k2; l1 l2)` of a monomial map `(z1^k1 z2^k2, z1^l1 z2^l2)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AutMatrix {
    pub k1: BigInt,
    pub k2: BigInt,
    pub l1: BigInt,
    pub l2: BigInt,
}

impl AutMatrix {
    pub fn new(k1: i64, k2: i64, l1: i64, l2: i64) -> Self {
        AutMatrix {
            k1: k1.into(),
            k2: k2.into(),
            l1: l1.into(),
            l2: l2.into(),
        }
    }

    pub fn identity() -> Self {
        Self::new(1, 0, 0, 1)
    }

    pub fn det(&self) -> BigInt {
        &self.k1 * &self.l2 - &self.k2 * &self.l1
    }

    pub fn trace(&self) -> BigInt {
        &self.k1 + &self.l2
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs().is_one()
    }

    pub fn mul(&self, rhs: &AutMatrix) -> AutMatrix {
        AutMatrix {
            k1: &self.k1 * &rhs.k1 + &self.k2 * &rhs.l1,
            k2: &self.k1 * &rhs.k2 + &self.k2 * &rhs.l2,
            l1: &self.l1 * &rhs.k1 + &self.l2 * &rhs.l1,
            l2: &self.l1 * &rhs.k2 + &self.l2 * &rhs.l2,
        }
    }

    pub fn pow(&self, exponent: u32) -> AutMatrix {
        (0..exponent).fold(AutMatrix::identity(), |acc, _| acc.mul(self))
    }

    /// Inverse of a unimodular matrix.
    pub fn inverse(&self) -> Option<AutMatrix> {
        let det = self.det();
        if !det.abs().is_one() {
            return None;
        }
        Some(AutMatrix {
            k1: &self.l2 * &det,
            k2: -&self.k2 * &det,
            l1: -&self.l1 * &det,
            l2: &self.k1 * &det,
        })
    }

    /// `k1 + l1 alpha`, the factor by which `t + alpha s` is scaled.
    pub fn multiplier(&self, alpha: &QuadExt) -> QuadExt {
        &QuadExt::from_bigint(self.k1.clone()) + &(&QuadExt::from_bigint(self.l1.clone()) * alpha)
    }

    /// `alpha (k1 + l1 alpha) = k2 + l2 alpha`
    pub fn fixes_direction(&self, alpha: &QuadExt) -> bool {
        let lhs = alpha * &self.multiplier(alpha);
        let rhs = &QuadExt::from_bigint(self.k2.clone())
            + &(&QuadExt::from_bigint(self.l2.clone()) * alpha);
        lhs == rhs
    }

    pub fn entries(&self) -> [i64; 4] {
        [&self.k1, &self.k2, &self.l1, &self.l2].map(|v| v.to_i64().unwrap_or(i64::MAX))
    }
}

impl fmt::Display for AutMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{};{},{})", self.k1, self.k2, self.l1, self.l2)
    }
}

fn check_contract(matrix: &AutMatrix, data: &PNQData) -> Result<(), PellError> {
    if !matrix.is_unimodular() {
        return Err(PellError::ConstraintViolation(format!(
            "{matrix} has determinant {}",
            matrix.det()
        )));
    }
    let n2 = &data.n * &data.n;
    // k2 = l1 (q - p^2)/n^2 and l2 = k1 + 2 p l1 / n
    let k2_expected = Rat::new(&matrix.l1 * (&data.q_int - &data.p_int * &data.p_int), n2);
    let l2_expected = Rat::from_integer(matrix.k1.clone())
        + Rat::new(BigInt::from(2) * &data.p_int * &matrix.l1, data.n.clone());
    if k2_expected != Rat::from_integer(matrix.k2.clone())
        || l2_expected != Rat::from_integer(matrix.l2.clone())
    {
        return Err(PellError::ConstraintViolation(format!(
            "{matrix} violates the stabilizer relations"
        )));
    }
    for sign in [1, -1] {
        let alpha = data.alpha(sign);
        if !matrix.fixes_direction(&alpha) {
            return Err(PellError::ConstraintViolation(format!(
                "{matrix} does not fix (1, {alpha})"
            )));
        }
        if !matrix.multiplier(&alpha).is_positive() {
            return Err(PellError::ConstraintViolation(format!(
                "k1 + l1 alpha <= 0 for alpha = {alpha}"
            )));
        }
    }
    Ok(())
}

/// The automorphism exponent matrix attached to a Pell solution.
///
/// The same matrix serves both conjugates `p/n ± sqrt(q)/n`; both are checked.
pub fn matrix_from_pell(data: &PNQData, sol: &PellSolution) -> Result<AutMatrix, PellError> {
    let expected = data.pell_parameter();
    if BigInt::from(sol.d) != expected {
        return Err(PellError::IncompatiblePell {
            expected,
            found: sol.d,
        });
    }
    if !sol.satisfies_identity() {
        return Err(PellError::ConstraintViolation(
            "solution fails the Pell identity".into(),
        ));
    }
    let (p, q, n) = (&data.p_int, &data.q_int, &data.n);
    let (x, y) = (&sol.x, &sol.y);
    let matrix = AutMatrix {
        k1: x - p * n * y,
        k2: y * (q - p * p),
        l1: n * n * y,
        l2: x + p * n * y,
    };
    check_contract(&matrix, data)?;
    Ok(matrix)
}

/// `alpha -> pnq -> fundamental solution -> matrix` in one step.
pub fn pell_generator(alpha: &QuadExt) -> Result<(PNQData, PellSolution, AutMatrix), PellError> {
    let form = as_p_sqrt_q(alpha)?;
    let data = alpha_to_pnq(&form.p, &form.q)?;
    let parameter = data.pell_parameter();
    let d = parameter
        .to_u64()
        .ok_or_else(|| PellError::ParameterTooLarge(parameter.clone()))?;
    let sol = pell_fundamental(d)?;
    let matrix = matrix_from_pell(&data, &sol)?;
    Ok((data, sol, matrix))
}

/// Position of `matrix` in the Pell-generated family for `data`: `Some(n)` when
/// it equals the `n`-th power of the fundamental matrix (negative `n` for
/// inverses). The family is not claimed to exhaust the stabilizer.
pub fn pell_family_index(data: &PNQData, matrix: &AutMatrix) -> Result<Option<i64>, PellError> {
    let n2 = &data.n * &data.n;
    let (y, rem) = matrix.l1.div_rem(&n2);
    if !rem.is_zero() {
        return Ok(None);
    }
    let pny = &data.p_int * &data.n * &y;
    let x = &matrix.k1 + &pny;
    let candidate = AutMatrix {
        k1: matrix.k1.clone(),
        k2: &y * (&data.q_int - &data.p_int * &data.p_int),
        l1: matrix.l1.clone(),
        l2: &x + &pny,
    };
    if &candidate != matrix || !x.is_positive() {
        return Ok(None);
    }
    let parameter = data.pell_parameter();
    if &x * &x - &parameter * &y * &y != BigInt::one() {
        return Ok(None);
    }
    if y.is_zero() {
        return Ok(Some(0));
    }
    let d = parameter
        .to_u64()
        .ok_or_else(|| PellError::ParameterTooLarge(parameter.clone()))?;
    let fund = pell_fundamental(d)?;
    let target_y = y.abs();
    let dd = BigInt::from(d);
    let (mut xi, mut yi) = (fund.x.clone(), fund.y.clone());
    let mut index = 1i64;
    while yi <= target_y {
        if xi == x && yi == target_y {
            return Ok(Some(if y.is_negative() { -index } else { index }));
        }
        let next_x = &fund.x * &xi + &dd * &fund.y * &yi;
        let next_y = &fund.x * &yi + &fund.y * &xi;
        xi = next_x;
        yi = next_y;
        index += 1;
    }
    Ok(None)
}
