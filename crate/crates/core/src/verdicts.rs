//! Serre-class verdicts for non-hyperbolic domains and the exhaustion
//! functions that certify membership for irrational strips and parabolic domains.

use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::automorphisms::{aut_group, AutError, AutFamily, AutGroup};
use crate::domain::{DomainDesc, DomainError, DomainShape, FullType};
use crate::exact_arith::{rat_to_f64, QuadExt, Rat};
use crate::normal_form::{
    normal_form, strip_type, MonomialMap, NormalForm, NormalFormError, NormalFormTag, StripType,
};
use crate::pell::{pell_generator, AutMatrix, PellError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SerreBranch {
    Full,
    StripRationalType,
    StripIrrationalDstarPell,
    StripIrrationalDalpha,
    StripIrrationalAnnulus,
    NoLineThm14,
    NoLineThm16,
    HyperbolicOutOfScope,
}

impl SerreBranch {
    pub fn name(self) -> &'static str {
        match self {
            SerreBranch::Full => "Full",
            SerreBranch::StripRationalType => "StripRationalType",
            SerreBranch::StripIrrationalDstarPell => "StripIrrational_DstarPell",
            SerreBranch::StripIrrationalDalpha => "StripIrrational_Dalpha",
            SerreBranch::StripIrrationalAnnulus => "StripIrrational_Annulus",
            SerreBranch::NoLineThm14 => "NoLine_Thm14",
            SerreBranch::NoLineThm16 => "NoLine_Thm16",
            SerreBranch::HyperbolicOutOfScope => "HyperbolicOutOfScope",
        }
    }
}

impl fmt::Display for SerreBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `in_s` is `None` for hyperbolic domains, which this classification does not cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SerreVerdict {
    pub in_s: Option<bool>,
    pub branch: SerreBranch,
    /// Pell automorphism matrix of `D*_alpha` in normal-form coordinates; its
    /// trace exceeds 2.
    pub witness: Option<AutMatrix>,
    pub normal_form: Option<NormalForm>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerdictError {
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    NormalForm(#[from] NormalFormError),
    #[error(transparent)]
    Pell(#[from] PellError),
    #[error(transparent)]
    Aut(#[from] AutError),
    #[error("point ({t}, {s}) is outside the domain of the exhaustion function")]
    OutsideDomain { t: f64, s: f64 },
    #[error("no exhaustion witness for this domain")]
    NoWitness,
}

pub fn serre_verdict(desc: &DomainDesc) -> Result<SerreVerdict, VerdictError> {
    desc.validate().map_err(DomainError::Invalid)?;
    let verdict = |in_s, branch, witness, normal_form| SerreVerdict {
        in_s,
        branch,
        witness,
        normal_form,
    };
    if desc.hyperbolicity().is_hyperbolic() {
        return Ok(verdict(None, SerreBranch::HyperbolicOutOfScope, None, None));
    }
    if desc.full_type() != FullType::NotFull {
        let nf = normal_form(desc)?;
        return Ok(verdict(Some(false), SerreBranch::Full, None, Some(nf)));
    }
    if desc.contains_line().is_some() {
        let nf = normal_form(desc)?;
        if strip_type(desc)? == StripType::Rational {
            return Ok(verdict(
                Some(true),
                SerreBranch::StripRationalType,
                None,
                Some(nf),
            ));
        }
        return Ok(match &nf.tag {
            // every representable irrational is of the form p + sqrt q
            NormalFormTag::FormB(alpha) => {
                let (_, _, matrix) = pell_generator(alpha)?;
                verdict(
                    Some(false),
                    SerreBranch::StripIrrationalDstarPell,
                    Some(matrix),
                    Some(nf),
                )
            }
            NormalFormTag::FormA(_) => verdict(
                Some(true),
                SerreBranch::StripIrrationalDalpha,
                None,
                Some(nf),
            ),
            NormalFormTag::FormC { .. } => verdict(
                Some(true),
                SerreBranch::StripIrrationalAnnulus,
                None,
                Some(nf),
            ),
            other => {
                return Err(NormalFormError::Internal(format!(
                    "irrational strip reduced to {other}"
                ))
                .into())
            }
        });
    }
    let branch = if desc.dhyp().axis_slices().nonempty == 1 {
        SerreBranch::NoLineThm14
    } else {
        SerreBranch::NoLineThm16
    };
    Ok(verdict(Some(true), branch, None, None))
}

/// Plurisubharmonic exhaustion functions, written in `(t, s) = (log|z1|, log|z2|)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StehleWitness {
    /// `D*_alpha`: `max{1/(1 - e^v), t, -t, s, -s}` with `v = t + alpha s`.
    UStar { alpha: QuadExt },
    /// `D_alpha`, `alpha > 0`: `max{1/(1 - e^v), t, s}`.
    UPlus { alpha: QuadExt },
    /// `D_alpha`, `alpha < 0`: `max{u_plus, -s}`.
    UMinus { alpha: QuadExt },
    /// `D_(alpha,r)`: `max{e^v/(r e^v - 1), 1/(r - e^v), t^2, s^2}`.
    UAnnulus { alpha: QuadExt, log_r: QuadExt },
    /// `t < psi(s)`: `max{s, -s, -1/(t - psi(s))}`.
    UPsi { a: Rat, b: Rat, c: Rat },
}

impl StehleWitness {
    pub fn formula_id(&self) -> &'static str {
        match self {
            StehleWitness::UStar { .. } => "u_star",
            StehleWitness::UPlus { .. } => "u_plus",
            StehleWitness::UMinus { .. } => "u_minus",
            StehleWitness::UAnnulus { .. } => "u_annulus",
            StehleWitness::UPsi { .. } => "u_psi",
        }
    }

    /// The quantity the formula is built on: `t + alpha s`, or `t - psi(s)`.
    pub fn core_f64(&self, t: f64, s: f64) -> f64 {
        match self {
            StehleWitness::UStar { alpha }
            | StehleWitness::UPlus { alpha }
            | StehleWitness::UMinus { alpha } => t + alpha.to_f64() * s,
            StehleWitness::UAnnulus { alpha, .. } => (t + alpha.to_f64() * s).abs(),
            StehleWitness::UPsi { .. } => t - self.psi(s),
        }
    }

    fn psi(&self, s: f64) -> f64 {
        match self {
            StehleWitness::UPsi { a, b, c } => {
                rat_to_f64(a) * s * s + rat_to_f64(b) * s + rat_to_f64(c)
            }
            _ => 0.0,
        }
    }

    /// An interior point drawn with `v` or `t - psi(s)` at distance at least `margin` from the boundary.
    pub fn sample_point<R: Rng>(&self, rng: &mut R, margin: f64) -> (f64, f64) {
        let s = rng.gen_range(-3.0..3.0);
        let v = match self {
            StehleWitness::UAnnulus { log_r, .. } => {
                let l = log_r.to_f64();
                rng.gen_range(-l + margin * l..l - margin * l)
            }
            _ => -rng.gen_range(margin..3.0),
        };
        match self {
            StehleWitness::UStar { alpha }
            | StehleWitness::UPlus { alpha }
            | StehleWitness::UMinus { alpha }
            | StehleWitness::UAnnulus { alpha, .. } => (v - alpha.to_f64() * s, s),
            StehleWitness::UPsi { .. } => (self.psi(s) + v, s),
        }
    }

    /// Points approaching the boundary at `s = s0`, closest last.
    pub fn boundary_sequence(&self, s0: f64, steps: u32) -> Vec<(f64, f64)> {
        (1..=steps)
            .map(|k| {
                let gap = 10f64.powi(-(k as i32));
                match self {
                    StehleWitness::UStar { alpha }
                    | StehleWitness::UPlus { alpha }
                    | StehleWitness::UMinus { alpha } => (-gap - alpha.to_f64() * s0, s0),
                    StehleWitness::UAnnulus { alpha, log_r } => {
                        (log_r.to_f64() - gap - alpha.to_f64() * s0, s0)
                    }
                    StehleWitness::UPsi { .. } => (self.psi(s0) - gap, s0),
                }
            })
            .collect()
    }
}

impl fmt::Display for StehleWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.formula_id())
    }
}

/// Evaluates the exhaustion function at `(t, s)` in double precision.
pub fn stehle_eval(w: &StehleWitness, t: f64, s: f64) -> Result<f64, VerdictError> {
    let outside = || VerdictError::OutsideDomain { t, s };
    // 1/(1 - e^v) = -1/expm1(v), accurate as v -> 0
    let singular = |v: f64| {
        if v < 0.0 {
            Ok(-1.0 / v.exp_m1())
        } else {
            Err(outside())
        }
    };
    match w {
        StehleWitness::UStar { alpha } => {
            let u = singular(t + alpha.to_f64() * s)?;
            Ok(u.max(t).max(-t).max(s).max(-s))
        }
        StehleWitness::UPlus { alpha } => Ok(singular(t + alpha.to_f64() * s)?.max(t).max(s)),
        StehleWitness::UMinus { alpha } => {
            Ok(singular(t + alpha.to_f64() * s)?.max(t).max(s).max(-s))
        }
        StehleWitness::UAnnulus { alpha, log_r } => {
            let (v, l) = (t + alpha.to_f64() * s, log_r.to_f64());
            if !(-l < v && v < l) {
                return Err(outside());
            }
            let (x, r) = (v.exp(), l.exp());
            Ok((x / (r * x - 1.0)).max(1.0 / (r - x)).max(t * t).max(s * s))
        }
        StehleWitness::UPsi { .. } => {
            let v = t - w.psi(s);
            if v >= 0.0 {
                return Err(outside());
            }
            Ok(s.max(-s).max(-1.0 / v))
        }
    }
}

/// The exhaustion function for a domain together with the automorphism
/// families it is tested against, all in normal-form coordinates.
pub fn stehle_witness_for(desc: &DomainDesc) -> Result<(StehleWitness, AutGroup), VerdictError> {
    let verdict = serre_verdict(desc)?;
    let group = aut_group(desc)?;
    let witness = match (&verdict.branch, &desc.shape) {
        (SerreBranch::NoLineThm16, DomainShape::Parabolic { a, b, c }) => StehleWitness::UPsi {
            a: a.clone(),
            b: b.clone(),
            c: c.clone(),
        },
        (SerreBranch::StripIrrationalDalpha, _) => {
            let tag = &verdict.normal_form.as_ref().expect("strip").tag;
            let alpha = tag.beta().expect("FormA").clone();
            if alpha.is_positive() {
                StehleWitness::UPlus { alpha }
            } else {
                StehleWitness::UMinus { alpha }
            }
        }
        (SerreBranch::StripIrrationalAnnulus, _) => {
            match &verdict.normal_form.as_ref().expect("strip").tag {
                NormalFormTag::FormC { beta, log_r } => StehleWitness::UAnnulus {
                    alpha: beta.clone(),
                    log_r: log_r.clone(),
                },
                _ => return Err(VerdictError::NoWitness),
            }
        }
        _ => return Err(VerdictError::NoWitness),
    };
    Ok((witness, group))
}

/// Exact check that `map` preserves the core quantity of `w` (up to sign for
/// the annulus formula, which is even in it).
pub fn core_invariant(w: &StehleWitness, map: &MonomialMap) -> bool {
    let m = &map.matrix;
    let e = |v: &num_bigint::BigInt| QuadExt::from_bigint(v.clone());
    match w {
        StehleWitness::UStar { alpha }
        | StehleWitness::UPlus { alpha }
        | StehleWitness::UMinus { alpha }
        | StehleWitness::UAnnulus { alpha, .. } => {
            // (1, alpha) A = sign (1, alpha) and (1, alpha) . m = 0
            let row1 = &e(&m.k1) + &(alpha * &e(&m.l1));
            let row2 = &e(&m.k2) + &(alpha * &e(&m.l2));
            let shift = &map.log_modulus1 + &(alpha * &map.log_modulus2);
            let allowed: &[i64] = if matches!(w, StehleWitness::UAnnulus { .. }) {
                &[1, -1]
            } else {
                &[1]
            };
            shift.is_zero()
                && allowed.iter().any(|&sign| {
                    let sign = QuadExt::from_int(sign);
                    row1 == sign && row2 == &sign * alpha
                })
        }
        StehleWitness::UPsi { a, b, .. } => {
            // psi(s + mb) - t - k s - ma == psi(s) - t identically in s
            let (Some(ma), Some(mb)) = (
                map.log_modulus1.as_rational(),
                map.log_modulus2.as_rational(),
            ) else {
                return false;
            };
            let k = Rat::from_integer(m.k2.clone());
            let two = Rat::from_integer(2.into());
            let shape_ok = m.k1 == 1.into() && m.l1 == 0.into() && m.l2 == 1.into();
            shape_ok && &two * a * mb == k && a * mb * mb + b * mb == *ma
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvarianceReport {
    pub instances: usize,
    pub exact_checks: usize,
    pub exact_failures: usize,
    /// Float checks of `u` itself, run on instances with zero log-moduli.
    pub float_checks: usize,
    pub max_float_deviation: f64,
    /// Largest `|core(Phi(x)) - core(x)|` over all sampled points.
    pub max_core_deviation: f64,
}

impl InvarianceReport {
    pub fn passed(&self, tolerance: f64) -> bool {
        self.exact_failures == 0
            && self.max_float_deviation <= tolerance
            && self.max_core_deviation <= tolerance
    }
}

/// Samples `instances` members of `family`, checks the core quantity exactly
/// and, for members with zero log-moduli, compares `u` at `points` interior
/// points in floating point.
pub fn stehle_invariance_check<R: Rng>(
    w: &StehleWitness,
    family: &AutFamily,
    instances: usize,
    points: usize,
    rng: &mut R,
) -> InvarianceReport {
    let mut report = InvarianceReport {
        instances,
        exact_checks: 0,
        exact_failures: 0,
        float_checks: 0,
        max_float_deviation: 0.0,
        max_core_deviation: 0.0,
    };
    for _ in 0..instances {
        let map = family.sample(rng);
        report.exact_checks += 1;
        if !core_invariant(w, &map) {
            report.exact_failures += 1;
        }
        let pure = map.log_modulus1.is_zero() && map.log_modulus2.is_zero();
        for _ in 0..points {
            let (t, s) = w.sample_point(rng, 0.05);
            let (t2, s2) = map.apply_log_f64(t, s);
            let core = (w.core_f64(t2, s2) - w.core_f64(t, s)).abs();
            report.max_core_deviation = report.max_core_deviation.max(core);
            if pure {
                report.float_checks += 1;
                let deviation = match (stehle_eval(w, t, s), stehle_eval(w, t2, s2)) {
                    (Ok(u), Ok(u2)) => (u2 - u).abs(),
                    _ => f64::INFINITY,
                };
                report.max_float_deviation = report.max_float_deviation.max(deviation);
            }
        }
    }
    report
}

/// Final value of `u` along `count` boundary-approaching sequences.
pub fn stehle_divergence(w: &StehleWitness, count: usize, steps: u32) -> Vec<f64> {
    (0..count)
        .map(|j| {
            let s0 = -2.0 + 4.0 * j as f64 / count.max(2) as f64;
            let last = *w.boundary_sequence(s0, steps).last().expect("steps > 0");
            stehle_eval(w, last.0, last.1).unwrap_or(f64::NAN)
        })
        .collect()
}
