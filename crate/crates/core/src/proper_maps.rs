//! Proper holomorphic maps between irrational-type strip domains.
//!
//! All maps in play are monomial, `(a z1^k1 z2^k2, b z1^l1 z2^l2)`, so each
//! decision reduces to integer data in `Z + beta Z`. Scalars `(a, b)` range
//! over the torus `|a| |b|^beta = 1` and are not enumerated.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::exact_arith::{lattice_member, ArithError, QuadExt, Rat};
use crate::pell::AutMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Refutation {
    FieldMismatch,
    NoLatticePoint,
    SignObstruction,
}

impl Refutation {
    pub fn name(self) -> &'static str {
        match self {
            Refutation::FieldMismatch => "FieldMismatch",
            Refutation::NoLatticePoint => "NoLatticePoint",
            Refutation::SignObstruction => "SignObstruction",
        }
    }
}

/// Integer data realizing a map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// `log R / log r = k1 + l1 beta` and `alpha log R / log r = k2 + l2 beta`.
    Annuli {
        gamma: QuadExt,
        matrix: AutMatrix,
    },
    /// `alpha (k1 + l1 beta) = k2 + l2 beta` with `k1 + l1 beta > 0`.
    Pointed {
        matrix: AutMatrix,
    },
    /// `alpha = p beta`, `p = l/k > 0`.
    PositiveRatio {
        p: Rat,
    },
    /// `alpha = p1 + p2 beta`, `p2 != 0`.
    NegativeAffine {
        p1: Rat,
        p2: Rat,
    },
    Refuted(Refutation),
}

/// One family of maps. `multiples` marks families that also contain every
/// positive integer multiple of the listed exponents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProperFamily {
    pub matrix: AutMatrix,
    /// True when the scalars satisfy `|a| |b|^beta = 1`; false for the pure
    /// monomial maps between full strips.
    pub scalar_torus: bool,
    pub multiples: bool,
}

impl fmt::Display for ProperFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.matrix;
        if self.scalar_torus {
            write!(
                f,
                "(a z1^{} z2^{}, b z1^{} z2^{}), |a||b|^beta = 1",
                m.k1, m.k2, m.l1, m.l2
            )
        } else {
            write!(f, "(z1^{} z2^{}, z1^{} z2^{})", m.k1, m.k2, m.l1, m.l2)?;
            if self.multiples {
                f.write_str(" and positive multiples of the exponents")?;
            }
            Ok(())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossCheck {
    pub bound: u32,
    pub brute_found: bool,
    /// The brute-force search found a solution exactly when the minimal one
    /// fits in the box.
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProperMapAnswer {
    pub exists: bool,
    pub families: Vec<ProperFamily>,
    pub certificate: Certificate,
    pub cross_check: Option<CrossCheck>,
}

impl ProperMapAnswer {
    fn refuted(reason: Refutation) -> Self {
        ProperMapAnswer {
            exists: false,
            families: vec![],
            certificate: Certificate::Refuted(reason),
            cross_check: None,
        }
    }

    pub fn refutation(&self) -> Option<Refutation> {
        match self.certificate {
            Certificate::Refuted(r) => Some(r),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProperError {
    #[error("{0} must be irrational")]
    Rational(&'static str),
    #[error("{0} must be positive")]
    NonPositive(&'static str),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

fn irrational(value: &QuadExt, name: &'static str) -> Result<(), ProperError> {
    if value.is_rational() {
        Err(ProperError::Rational(name))
    } else {
        Ok(())
    }
}

fn int(value: &BigInt) -> QuadExt {
    QuadExt::from_bigint(value.clone())
}

/// `k + l beta`
fn lattice_value(k: &BigInt, l: &BigInt, beta: &QuadExt) -> QuadExt {
    &int(k) + &(&int(l) * beta)
}

/// Writes `alpha = u + v beta` with rationals `u`, `v`; `None` if the fields differ.
pub fn decompose(alpha: &QuadExt, beta: &QuadExt) -> Option<(Rat, Rat)> {
    if let Some(u) = alpha.as_rational() {
        return Some((u.clone(), Rat::zero()));
    }
    if beta.is_rational() || alpha.d() != beta.d() {
        return None;
    }
    let v = alpha.b() / beta.b();
    Some((alpha.a() - &v * beta.a(), v))
}

fn height(m: &AutMatrix) -> BigInt {
    [&m.k1, &m.k2, &m.l1, &m.l2]
        .into_iter()
        .map(|v| v.abs())
        .max()
        .expect("four entries")
}

/// Proper maps `D_(alpha,r) -> D_(beta,R)` between symmetric annulus strips.
pub fn proper_annuli(
    alpha: &QuadExt,
    log_r: &QuadExt,
    beta: &QuadExt,
    log_big_r: &QuadExt,
) -> Result<ProperMapAnswer, ProperError> {
    irrational(alpha, "alpha")?;
    irrational(beta, "beta")?;
    if !log_r.is_positive() {
        return Err(ProperError::NonPositive("log r"));
    }
    if !log_big_r.is_positive() {
        return Err(ProperError::NonPositive("log R"));
    }
    let Ok(gamma) = log_big_r.checked_div(log_r) else {
        return Ok(ProperMapAnswer::refuted(Refutation::FieldMismatch));
    };
    let Some((k1, l1)) = lattice_member(&gamma, beta)? else {
        return Ok(ProperMapAnswer::refuted(Refutation::NoLatticePoint));
    };
    let Ok(alpha_gamma) = alpha.checked_mul(&gamma) else {
        return Ok(ProperMapAnswer::refuted(Refutation::FieldMismatch));
    };
    let Some((k2, l2)) = lattice_member(&alpha_gamma, beta)? else {
        return Ok(ProperMapAnswer::refuted(Refutation::NoLatticePoint));
    };
    let matrix = AutMatrix { k1, k2, l1, l2 };
    let negated = AutMatrix {
        k1: -&matrix.k1,
        k2: -&matrix.k2,
        l1: -&matrix.l1,
        l2: -&matrix.l2,
    };
    let families = [matrix.clone(), negated]
        .into_iter()
        .map(|matrix| ProperFamily {
            matrix,
            scalar_torus: true,
            multiples: false,
        })
        .collect();
    Ok(ProperMapAnswer {
        exists: true,
        families,
        certificate: Certificate::Annuli { gamma, matrix },
        cross_check: None,
    })
}

/// `(k2, l2)` with `alpha (k1 + l1 beta) = k2 + l2 beta`, when integral.
fn pointed_image(
    u: &Rat,
    v: &Rat,
    trace: &Rat,
    norm: &Rat,
    k1: &BigInt,
    l1: &BigInt,
) -> Option<(BigInt, BigInt)> {
    // beta^2 = trace beta - norm
    let (k1, l1) = (Rat::from_integer(k1.clone()), Rat::from_integer(l1.clone()));
    let k2 = u * &k1 - v * norm * &l1;
    let l2 = v * &k1 + (u + v * trace) * &l1;
    (k2.is_integer() && l2.is_integer()).then(|| (k2.to_integer(), l2.to_integer()))
}

/// Proper maps `D*_alpha -> D*_beta`. Returns the solution of least height
/// `max |entry|`, ties broken by `|l1|`, then `|k1|`, then lexicographically.
pub fn proper_pointed(
    alpha: &QuadExt,
    beta: &QuadExt,
    search_bound: u32,
) -> Result<ProperMapAnswer, ProperError> {
    irrational(alpha, "alpha")?;
    irrational(beta, "beta")?;
    let Some((u, v)) = decompose(alpha, beta) else {
        let mut answer = ProperMapAnswer::refuted(Refutation::FieldMismatch);
        let found = brute_pointed(alpha, beta, search_bound).is_some();
        answer.cross_check = Some(CrossCheck {
            bound: search_bound,
            brute_found: found,
            consistent: !found,
        });
        return Ok(answer);
    };
    let trace = beta.a() * Rat::from_integer(2.into());
    let norm = beta.norm();
    let key = |m: &AutMatrix| {
        (
            height(m),
            m.l1.abs(),
            m.k1.abs(),
            m.k1.clone(),
            m.k2.clone(),
            m.l1.clone(),
            m.l2.clone(),
        )
    };
    let mut best: Option<AutMatrix> = None;
    // shells of max(|k1|, |l1|) = h; heights never drop below h
    let mut h = BigInt::one();
    loop {
        if best.as_ref().is_some_and(|b| height(b) < h) {
            break;
        }
        let hi = h.to_i64().expect("search height fits in i64");
        for k1 in -hi..=hi {
            for l1 in -hi..=hi {
                if k1.abs() != hi && l1.abs() != hi {
                    continue;
                }
                let (k1, l1) = (BigInt::from(k1), BigInt::from(l1));
                if !lattice_value(&k1, &l1, beta).is_positive() {
                    continue;
                }
                if let Some((k2, l2)) = pointed_image(&u, &v, &trace, &norm, &k1, &l1) {
                    let m = AutMatrix { k1, k2, l1, l2 };
                    if best.as_ref().map_or(true, |b| key(&m) < key(b)) {
                        best = Some(m);
                    }
                }
            }
        }
        h += 1;
    }
    let matrix = best.expect("a solution exists in a common field");
    debug_assert!(pointed_identity(alpha, beta, &matrix));
    let found = brute_pointed(alpha, beta, search_bound).is_some();
    let fits = height(&matrix) <= BigInt::from(search_bound);
    Ok(ProperMapAnswer {
        exists: true,
        families: vec![ProperFamily {
            matrix: matrix.clone(),
            scalar_torus: true,
            multiples: false,
        }],
        certificate: Certificate::Pointed { matrix },
        cross_check: Some(CrossCheck {
            bound: search_bound,
            brute_found: found,
            consistent: found == fits,
        }),
    })
}

/// Proper maps `D_alpha -> D_beta` between half-plane strips.
pub fn proper_full(alpha: &QuadExt, beta: &QuadExt) -> Result<ProperMapAnswer, ProperError> {
    irrational(alpha, "alpha")?;
    irrational(beta, "beta")?;
    if alpha.signum() != beta.signum() {
        return Ok(ProperMapAnswer::refuted(Refutation::SignObstruction));
    }
    let Some((u, v)) = decompose(alpha, beta) else {
        return Ok(ProperMapAnswer::refuted(Refutation::FieldMismatch));
    };
    if alpha.is_positive() {
        if !u.is_zero() {
            return Ok(ProperMapAnswer::refuted(Refutation::NoLatticePoint));
        }
        // v = l/k in lowest terms, positive since both signs agree
        let matrix = AutMatrix {
            k1: v.denom().clone(),
            k2: BigInt::zero(),
            l1: BigInt::zero(),
            l2: v.numer().clone(),
        };
        return Ok(ProperMapAnswer {
            exists: true,
            families: vec![ProperFamily {
                matrix,
                scalar_torus: false,
                multiples: true,
            }],
            certificate: Certificate::PositiveRatio { p: v },
            cross_check: None,
        });
    }
    let k1 = u.denom().lcm(v.denom());
    let scale = Rat::from_integer(k1.clone());
    let matrix = AutMatrix {
        k2: (&u * &scale).to_integer(),
        l1: BigInt::zero(),
        l2: (&v * &scale).to_integer(),
        k1,
    };
    Ok(ProperMapAnswer {
        exists: true,
        families: vec![ProperFamily {
            matrix,
            scalar_torus: false,
            multiples: true,
        }],
        certificate: Certificate::NegativeAffine { p1: u, p2: v },
        cross_check: None,
    })
}

/// `alpha (k1 + l1 beta) = k2 + l2 beta` and `k1 + l1 beta > 0`.
pub fn pointed_identity(alpha: &QuadExt, beta: &QuadExt, m: &AutMatrix) -> bool {
    let lead = lattice_value(&m.k1, &m.l1, beta);
    let Ok(lhs) = alpha.checked_mul(&lead) else {
        return false;
    };
    lead.is_positive()
        && lhs
            .checked_sub(&lattice_value(&m.k2, &m.l2, beta))
            .is_ok_and(|d| d.is_zero())
}

/// `gamma = k1 + l1 beta` and `alpha gamma = k2 + l2 beta`, up to a global sign.
pub fn annuli_identity(alpha: &QuadExt, gamma: &QuadExt, beta: &QuadExt, m: &AutMatrix) -> bool {
    let Ok(alpha_gamma) = alpha.checked_mul(gamma) else {
        return false;
    };
    let eq = |x: &QuadExt, y: QuadExt| x.checked_sub(&y).is_ok_and(|d| d.is_zero());
    let plus = eq(gamma, lattice_value(&m.k1, &m.l1, beta))
        && eq(&alpha_gamma, lattice_value(&m.k2, &m.l2, beta));
    let minus = eq(&-gamma, lattice_value(&m.k1, &m.l1, beta))
        && eq(&-&alpha_gamma, lattice_value(&m.k2, &m.l2, beta));
    plus || minus
}

/// Exponent data of the full-strip maps: `(z1^k1 z2^k2, z2^l2)` sends
/// `|z1||z2|^alpha` to its `k1`-th power in the target coordinates. Opposite
/// signs of `alpha` and `beta` admit no map at all.
pub fn full_identity(alpha: &QuadExt, beta: &QuadExt, m: &AutMatrix) -> bool {
    if alpha.signum() != beta.signum() || !m.l1.is_zero() || !m.k1.is_positive() || m.l2.is_zero() {
        return false;
    }
    if alpha.is_positive() && (!m.k2.is_zero() || !m.l2.is_positive()) {
        return false;
    }
    let Ok(lhs) = alpha.checked_mul(&int(&m.k1)) else {
        return false;
    };
    lhs.checked_sub(&lattice_value(&m.k2, &m.l2, beta))
        .is_ok_and(|d| d.is_zero())
}

/// Candidates found in floating point, confirmed exactly.
fn float_search<F, G>(ranges: [(i64, i64); 4], approx: F, exact: G) -> Option<AutMatrix>
where
    F: Fn([f64; 4]) -> f64,
    G: Fn(&AutMatrix) -> bool,
{
    let [r0, r1, r2, r3] = ranges;
    for a in r0.0..=r0.1 {
        for b in r1.0..=r1.1 {
            for c in r2.0..=r2.1 {
                for d in r3.0..=r3.1 {
                    if approx([a as f64, b as f64, c as f64, d as f64]).abs() > 1e-6 {
                        continue;
                    }
                    let m = AutMatrix::new(a, b, c, d);
                    if exact(&m) {
                        return Some(m);
                    }
                }
            }
        }
    }
    None
}

/// Exhaustive search over `|k_i|, |l_i| <= bound` for the pointed identity.
pub fn brute_pointed(alpha: &QuadExt, beta: &QuadExt, bound: u32) -> Option<AutMatrix> {
    let b = i64::from(bound);
    let (af, bf) = (alpha.to_f64(), beta.to_f64());
    let full = (-b, b);
    float_search(
        [full; 4],
        |[k1, k2, l1, l2]| {
            let lead = k1 + l1 * bf;
            if lead <= 0.0 {
                f64::INFINITY
            } else {
                af * lead - k2 - l2 * bf
            }
        },
        |m| pointed_identity(alpha, beta, m),
    )
}

/// Exhaustive search for `gamma = k1 + l1 beta`, `alpha gamma = k2 + l2 beta`.
pub fn brute_annuli(
    alpha: &QuadExt,
    log_r: &QuadExt,
    beta: &QuadExt,
    log_big_r: &QuadExt,
    bound: u32,
) -> Option<AutMatrix> {
    let gamma = log_big_r.checked_div(log_r).ok()?;
    let b = i64::from(bound);
    let (gf, agf, bf) = (
        gamma.to_f64(),
        alpha.to_f64() * gamma.to_f64(),
        beta.to_f64(),
    );
    let full = (-b, b);
    float_search(
        [full; 4],
        |[k1, k2, l1, l2]| (gf - k1 - l1 * bf).abs() + (agf - k2 - l2 * bf).abs(),
        |m| annuli_identity(alpha, &gamma, beta, m),
    )
}

/// Exhaustive search for a full-strip map with exponents bounded by `bound`.
pub fn brute_full(alpha: &QuadExt, beta: &QuadExt, bound: u32) -> Option<AutMatrix> {
    let b = i64::from(bound);
    let (af, bf) = (alpha.to_f64(), beta.to_f64());
    float_search(
        [(1, b), (-b, b), (0, 0), (-b, b)],
        |[k1, k2, _, l2]| af * k1 - k2 - l2 * bf,
        |m| full_identity(alpha, beta, m),
    )
}
