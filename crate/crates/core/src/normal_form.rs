//! Monomial maps and the reduction of strip domains to normal forms.
//!
//! Every strip is carried to one of `D_beta`, `D*_beta`, `D_{beta,r}` by
//! coordinate swaps, coordinate inversions and translations of the log image,
//! then moved to a fixed representative of its equivalence class.
//! Rational strips continue to a product with `C` or `C_*`, or to one of the
//! two monomial-ball forms `|z|^p |w|^q < 1`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::domain::{DomainDesc, DomainError, FullType, MonomialConstraint};
use crate::exact_arith::{cf_expand, ArithError, QuadExt, Rat};
use crate::pell::AutMatrix;

/// `(z1, z2) -> (a z1^k1 z2^k2, b z1^l1 z2^l2)` with `log|a|`, `log|b|` stored exactly.
///
/// In log coordinates this is the affine map `x -> A x + m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialMap {
    pub matrix: AutMatrix,
    pub log_modulus1: QuadExt,
    pub log_modulus2: QuadExt,
}

impl MonomialMap {
    pub fn new(matrix: AutMatrix, log_modulus1: QuadExt, log_modulus2: QuadExt) -> Self {
        MonomialMap {
            matrix,
            log_modulus1,
            log_modulus2,
        }
    }

    pub fn linear(matrix: AutMatrix) -> Self {
        Self::new(matrix, QuadExt::zero(), QuadExt::zero())
    }

    pub fn identity() -> Self {
        Self::linear(AutMatrix::identity())
    }

    pub fn translation(log_modulus1: QuadExt, log_modulus2: QuadExt) -> Self {
        Self::new(AutMatrix::identity(), log_modulus1, log_modulus2)
    }

    pub fn apply_log(&self, t: &QuadExt, s: &QuadExt) -> (QuadExt, QuadExt) {
        let m = &self.matrix;
        let e = |v: &BigInt| QuadExt::from_bigint(v.clone());
        let t2 = &(&(&e(&m.k1) * t) + &(&e(&m.k2) * s)) + &self.log_modulus1;
        let s2 = &(&(&e(&m.l1) * t) + &(&e(&m.l2) * s)) + &self.log_modulus2;
        (t2, s2)
    }

    pub fn apply_log_f64(&self, t: f64, s: f64) -> (f64, f64) {
        let [k1, k2, l1, l2] = self.matrix.entries().map(|v| v as f64);
        (
            k1 * t + k2 * s + self.log_modulus1.to_f64(),
            l1 * t + l2 * s + self.log_modulus2.to_f64(),
        )
    }

    /// `next` after `self`.
    pub fn then(&self, next: &MonomialMap) -> MonomialMap {
        let (m1, m2) = next.apply_log(&self.log_modulus1, &self.log_modulus2);
        MonomialMap::new(next.matrix.mul(&self.matrix), m1, m2)
    }

    pub fn inverse(&self) -> Option<MonomialMap> {
        let inv = self.matrix.inverse()?;
        let linear = MonomialMap::linear(inv.clone());
        let (m1, m2) = linear.apply_log(&self.log_modulus1, &self.log_modulus2);
        Some(MonomialMap::new(inv, -m1, -m2))
    }

    /// `n`-fold composition; negative `n` iterates the inverse.
    pub fn power(&self, n: i64) -> Option<MonomialMap> {
        let base = if n < 0 { self.inverse()? } else { self.clone() };
        Some((0..n.unsigned_abs()).fold(MonomialMap::identity(), |acc, _| acc.then(&base)))
    }
}

impl fmt::Display for MonomialMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} with log|a| = {}, log|b| = {}",
            self.matrix, self.log_modulus1, self.log_modulus2
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiscFactor {
    Disc,
    PuncturedDisc,
    /// `{1/R < |z| < R}` with `log R` stored.
    Annulus(QuadExt),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fiber {
    C,
    CStar,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NormalFormTag {
    /// `{ z in C x C(beta) : |z1||z2|^beta < 1 }`
    FormA(QuadExt),
    /// `{ z in C_* x C(beta) : 0 < |z1||z2|^beta < 1 }`, `beta >= 0`
    FormB(QuadExt),
    /// `{ z in C x C(beta) : 1/r < |z1||z2|^beta < r }`, `beta >= 0`
    FormC {
        beta: QuadExt,
        log_r: QuadExt,
    },
    ProductD {
        factor: DiscFactor,
        fiber: Fiber,
    },
    /// `{ z in C^2 : |z1|^p |z2|^q < 1 }`
    FormE {
        p: BigInt,
        q: BigInt,
    },
    /// `{ z in C_* x C : |z1|^p |z2|^q < 1 }`
    FormF {
        p: BigInt,
        q: BigInt,
    },
    Full(FullType),
}

impl NormalFormTag {
    pub fn name(&self) -> &'static str {
        match self {
            NormalFormTag::FormA(_) => "FormA",
            NormalFormTag::FormB(_) => "FormB",
            NormalFormTag::FormC { .. } => "FormC",
            NormalFormTag::ProductD { .. } => "ProductD",
            NormalFormTag::FormE { .. } => "FormE",
            NormalFormTag::FormF { .. } => "FormF",
            NormalFormTag::Full(_) => "Full",
        }
    }

    /// The model domain the tag stands for.
    pub fn canonical_desc(&self) -> DomainDesc {
        let below = |a1: QuadExt, a2: QuadExt| MonomialConstraint::below(a1, a2, QuadExt::zero());
        let sym = |a1: QuadExt, a2: QuadExt, l: &QuadExt| {
            MonomialConstraint::between(a1, a2, -l, l.clone())
        };
        let one = QuadExt::one;
        let int = |v: &BigInt| QuadExt::from_bigint(v.clone());
        match self {
            NormalFormTag::FormA(beta) => {
                DomainDesc::polyhedron(vec![below(one(), beta.clone())], true, !beta.is_negative())
            }
            NormalFormTag::FormB(beta) => {
                DomainDesc::polyhedron(vec![below(one(), beta.clone())], false, beta.is_zero())
            }
            NormalFormTag::FormC { beta, log_r } => {
                DomainDesc::polyhedron(vec![sym(one(), beta.clone(), log_r)], false, beta.is_zero())
            }
            NormalFormTag::ProductD { factor, fiber } => {
                let c = match factor {
                    DiscFactor::Disc | DiscFactor::PuncturedDisc => below(one(), QuadExt::zero()),
                    DiscFactor::Annulus(l) => sym(one(), QuadExt::zero(), l),
                };
                DomainDesc::polyhedron(vec![c], *factor == DiscFactor::Disc, *fiber == Fiber::C)
            }
            NormalFormTag::FormE { p, q } => {
                DomainDesc::polyhedron(vec![below(int(p), int(q))], true, true)
            }
            NormalFormTag::FormF { p, q } => {
                DomainDesc::polyhedron(vec![below(int(p), int(q))], false, true)
            }
            NormalFormTag::Full(kind) => {
                let (a1, a2) = match kind {
                    FullType::C2 => (true, true),
                    FullType::CxCStar => (true, false),
                    FullType::CStarxC => (false, true),
                    _ => (false, false),
                };
                DomainDesc::polyhedron(vec![], a1, a2)
            }
        }
    }

    /// `beta` for the three strip forms.
    pub fn beta(&self) -> Option<&QuadExt> {
        match self {
            NormalFormTag::FormA(b)
            | NormalFormTag::FormB(b)
            | NormalFormTag::FormC { beta: b, .. } => Some(b),
            _ => None,
        }
    }
}

impl fmt::Display for NormalFormTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormalFormTag::FormA(b) => write!(f, "D_beta with beta = {b}"),
            NormalFormTag::FormB(b) => write!(f, "D*_beta with beta = {b}"),
            NormalFormTag::FormC { beta, log_r } => {
                write!(f, "D_(beta,r) with beta = {beta}, log r = {log_r}")
            }
            NormalFormTag::ProductD { factor, fiber } => {
                let factor = match factor {
                    DiscFactor::Disc => "disc".to_string(),
                    DiscFactor::PuncturedDisc => "punctured disc".to_string(),
                    DiscFactor::Annulus(l) => format!("annulus with log R = {l}"),
                };
                let fiber = if *fiber == Fiber::C { "C" } else { "C_*" };
                write!(f, "{factor} x {fiber}")
            }
            NormalFormTag::FormE { p, q } => write!(f, "|z1|^{p} |z2|^{q} < 1 in C^2"),
            NormalFormTag::FormF { p, q } => write!(f, "|z1|^{p} |z2|^{q} < 1 in C_* x C"),
            NormalFormTag::Full(kind) => write!(f, "{}", kind.name()),
        }
    }
}

/// A normal form together with a map carrying the source domain onto it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm {
    pub tag: NormalFormTag,
    pub witness: MonomialMap,
    /// The strip form reached before the rational reduction, when one was applied.
    pub strip_form: Option<NormalFormTag>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StripType {
    Rational,
    Irrational,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalFormError {
    #[error("domain is not a strip")]
    NotAStrip,
    #[error("strip parameter is not rational")]
    NotRational,
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error("internal reduction error: {0}")]
    Internal(String),
}

/// The single constraint of a strip, with the normal scaled to `(1, beta)` or `(0, 1)`.
fn strip_constraint(
    desc: &DomainDesc,
) -> Result<(DomainDesc, MonomialConstraint), NormalFormError> {
    let canonical = desc.canonical()?;
    match canonical.constraints() {
        [c] if !canonical.is_parabolic() => {
            let c = c.clone();
            Ok((canonical, c))
        }
        _ => Err(NormalFormError::NotAStrip),
    }
}

fn is_strip(desc: &DomainDesc) -> bool {
    !desc.is_parabolic() && desc.full_type() == FullType::NotFull && desc.contains_line().is_some()
}

pub fn strip_type(desc: &DomainDesc) -> Result<StripType, NormalFormError> {
    if !is_strip(desc) {
        return Err(NormalFormError::NotAStrip);
    }
    let (_, c) = strip_constraint(desc)?;
    Ok(if c.alpha1.is_zero() || c.alpha2.is_rational() {
        StripType::Rational
    } else {
        StripType::Irrational
    })
}

struct Reducer {
    current: DomainDesc,
    witness: MonomialMap,
}

impl Reducer {
    fn apply(&mut self, map: MonomialMap) -> Result<(), NormalFormError> {
        self.current = self.current.transform(&map)?;
        self.witness = self.witness.then(&map);
        Ok(())
    }

    fn constraint(&self) -> Result<MonomialConstraint, NormalFormError> {
        strip_constraint(&self.current).map(|(_, c)| c)
    }

    fn finish(
        self,
        source: &DomainDesc,
        tag: NormalFormTag,
        strip_form: Option<NormalFormTag>,
    ) -> Result<NormalForm, NormalFormError> {
        let image = source.transform(&self.witness)?;
        if !image.same_domain(&tag.canonical_desc())? {
            return Err(NormalFormError::Internal(format!(
                "witness does not reach {tag}: got {image}"
            )));
        }
        Ok(NormalForm {
            tag,
            witness: self.witness,
            strip_form,
        })
    }
}

fn swap() -> MonomialMap {
    MonomialMap::linear(AutMatrix::new(0, 1, 1, 0))
}

fn invert_z1() -> MonomialMap {
    MonomialMap::linear(AutMatrix::new(-1, 0, 0, 1))
}

fn invert_z2() -> MonomialMap {
    MonomialMap::linear(AutMatrix::new(1, 0, 0, -1))
}

/// Normal form of a full domain or a strip.
pub fn normal_form(desc: &DomainDesc) -> Result<NormalForm, NormalFormError> {
    desc.validate()
        .map_err(|v| NormalFormError::Domain(DomainError::Invalid(v)))?;
    match desc.full_type() {
        FullType::NotFull => reduce_strip(desc),
        kind => Ok(NormalForm {
            tag: NormalFormTag::Full(kind),
            witness: MonomialMap::identity(),
            strip_form: None,
        }),
    }
}

/// Reduces a strip to `D_beta`, `D*_beta` or `D_{beta,r}`, continuing to the
/// rational targets when `beta` is rational.
pub fn reduce_strip(desc: &DomainDesc) -> Result<NormalForm, NormalFormError> {
    if !is_strip(desc) {
        return Err(NormalFormError::NotAStrip);
    }
    let (canonical, c) = strip_constraint(desc)?;
    let mut r = Reducer {
        current: canonical,
        witness: MonomialMap::identity(),
    };
    if c.alpha1.is_zero() {
        r.apply(swap())?;
    }
    let mut c = r.constraint()?;
    if c.upper.is_none() {
        // lo < t + beta s: the z1 axis is excluded, so z1 may be inverted
        r.apply(invert_z1())?;
        c = r.constraint()?;
    }
    let two_sided = c.lower.is_some();
    let beta = c.alpha2.clone();
    if beta.is_zero() {
        return product_form(r, desc, two_sided);
    }
    let tag = if two_sided {
        if beta.is_negative() {
            r.apply(invert_z2())?;
        }
        let c = r.constraint()?;
        let (lo, hi) = (
            c.lower.clone().expect("two-sided"),
            c.upper.clone().expect("two-sided"),
        );
        let half = Rat::new(1.into(), 2.into());
        r.apply(MonomialMap::translation(
            -(&lo + &hi).scale(&half),
            QuadExt::zero(),
        ))?;
        NormalFormTag::FormC {
            beta: c.alpha2.clone(),
            log_r: (&hi - &lo).scale(&half),
        }
    } else {
        let hi = c.upper.clone().expect("upper bound");
        r.apply(MonomialMap::translation(-hi, QuadExt::zero()))?;
        match (r.current.axis1, r.current.axis2) {
            (true, true) => NormalFormTag::FormA(beta),
            (true, false) => {
                if beta.is_positive() {
                    r.apply(invert_z2())?;
                }
                NormalFormTag::FormA(-beta.abs())
            }
            (false, true) => {
                r.apply(swap())?;
                r.apply(invert_z2())?;
                NormalFormTag::FormA(
                    -beta
                        .inverse()
                        .map_err(|e| NormalFormError::Domain(e.into()))?,
                )
            }
            (false, false) => {
                if beta.is_negative() {
                    r.apply(invert_z2())?;
                }
                NormalFormTag::FormB(beta.abs())
            }
        }
    };
    let beta = tag.beta().expect("strip form").clone();
    let integral = beta.as_rational().is_some_and(|v| v.is_integer());
    let tag = if matches!(tag, NormalFormTag::FormA(_)) && !integral || !beta.is_rational() {
        canonical_strip(&mut r, tag)?
    } else {
        tag
    };
    let beta = tag.beta().expect("strip form").clone();
    if beta.is_rational() {
        let reduced = rational_reduce(&tag)?;
        r.apply(reduced.witness)?;
        r.finish(desc, reduced.tag, Some(tag))
    } else {
        r.finish(desc, tag, None)
    }
}

fn arith(e: ArithError) -> NormalFormError {
    NormalFormError::Domain(e.into())
}

fn int_matrix(k1: &BigInt, k2: &BigInt, l1: &BigInt, l2: &BigInt) -> AutMatrix {
    AutMatrix {
        k1: k1.clone(),
        k2: k2.clone(),
        l1: l1.clone(),
        l2: l2.clone(),
    }
}

/// `(a, 1; 1, 0)`, one step of a continued fraction as a Moebius map.
fn cf_step(a: &BigInt) -> AutMatrix {
    int_matrix(a, &BigInt::one(), &BigInt::one(), &BigInt::zero())
}

/// Representative of the orbit of an irrational `beta` under
/// `beta -> (a beta + b) / (c beta + d)`: the purely periodic complete quotient
/// whose period is the lexicographically least rotation. Returns
/// `(n, x, p)` with `beta = n(x)` and `x = p(x)`.
fn orbit_representative(
    beta: &QuadExt,
) -> Result<(AutMatrix, QuadExt, AutMatrix), NormalFormError> {
    let cf = cf_expand(beta, 100_000).map_err(arith)?;
    let len = cf.period.len();
    let rotation = (0..len)
        .min_by_key(|&j| {
            (0..len)
                .map(|i| cf.period[(i + j) % len].clone())
                .collect::<Vec<_>>()
        })
        .expect("period is nonempty");
    let mut n = AutMatrix::identity();
    let mut x = beta.clone();
    for i in 0..cf.preperiod.len() + rotation {
        let a = cf.term(i);
        n = n.mul(&cf_step(a));
        x = (&x - &QuadExt::from_bigint(a.clone()))
            .inverse()
            .map_err(arith)?;
    }
    let period = (0..len).fold(AutMatrix::identity(), |m, i| {
        m.mul(&cf_step(&cf.period[(i + rotation) % len]))
    });
    Ok((n, x, period))
}

/// Log-coordinate map carrying the normal `(1, n(x))` to a multiple of `(1, x)`.
fn moebius_to_map(n: &AutMatrix) -> MonomialMap {
    MonomialMap::linear(int_matrix(&n.l2, &n.k2, &n.l1, &n.k1))
}

/// Picks one representative per equivalence class of strips, so
/// equivalent strips share a tag.
///
/// `D_beta` with `beta > 0` only admits the swap, `beta ~ 1/beta`; we keep
/// `beta > 1`. With `beta < 0` the maps `(z1 z2^k, z2)` and `(z1/z2, 1/z2)`
/// give `beta ~ beta - k ~ -1 - beta`; we keep `-1/2 < beta < 0`. `D*_beta`
/// and `D_{beta,r}` admit every unimodular map, and `log r` is only defined up
/// to the multipliers of maps fixing the direction; we keep `1 <= log r < u`
/// for the least multiplier `u > 1`.
fn canonical_strip(r: &mut Reducer, tag: NormalFormTag) -> Result<NormalFormTag, NormalFormError> {
    match tag {
        NormalFormTag::FormA(beta) if beta.is_positive() => {
            if beta < QuadExt::one() {
                r.apply(swap())?;
                return Ok(NormalFormTag::FormA(beta.inverse().map_err(arith)?));
            }
            Ok(NormalFormTag::FormA(beta))
        }
        NormalFormTag::FormA(beta) => {
            let k = -(-&beta).floor();
            r.apply(MonomialMap::linear(int_matrix(
                &BigInt::one(),
                &k,
                &BigInt::zero(),
                &BigInt::one(),
            )))?;
            let mut beta = &beta - &QuadExt::from_bigint(k);
            if beta < QuadExt::from_rat(Rat::new((-1).into(), 2.into())) {
                r.apply(MonomialMap::linear(AutMatrix::new(1, -1, 0, -1)))?;
                beta = -(&beta + &QuadExt::one());
            }
            Ok(NormalFormTag::FormA(beta))
        }
        NormalFormTag::FormB(beta) => {
            let (n, x, _) = orbit_representative(&beta)?;
            r.apply(moebius_to_map(&n))?;
            if r.constraint()?.upper.is_none() {
                r.apply(MonomialMap::linear(AutMatrix::new(-1, 0, 0, -1)))?;
            }
            let hi = r
                .constraint()?
                .upper
                .expect("one-sided strip keeps its bound");
            r.apply(MonomialMap::translation(-hi, QuadExt::zero()))?;
            Ok(NormalFormTag::FormB(x))
        }
        NormalFormTag::FormC { beta, .. } => {
            let (n, x, period) = orbit_representative(&beta)?;
            r.apply(moebius_to_map(&n))?;
            let grow = moebius_to_map(&period);
            let unit = grow.matrix.multiplier(&x).abs();
            let mut log_r = half_width(r)?;
            while log_r >= unit {
                r.apply(grow.inverse().expect("unimodular"))?;
                log_r = half_width(r)?;
            }
            while log_r < QuadExt::one() {
                r.apply(grow.clone())?;
                log_r = half_width(r)?;
            }
            let c = r.constraint()?;
            let centre = (&c.lower.expect("two-sided") + &c.upper.expect("two-sided"))
                .scale(&Rat::new(1.into(), 2.into()));
            r.apply(MonomialMap::translation(-centre, QuadExt::zero()))?;
            Ok(NormalFormTag::FormC { beta: x, log_r })
        }
        other => Ok(other),
    }
}

fn half_width(r: &Reducer) -> Result<QuadExt, NormalFormError> {
    let c = r.constraint()?;
    Ok(
        (&c.upper.expect("two-sided") - &c.lower.expect("two-sided"))
            .scale(&Rat::new(1.into(), 2.into())),
    )
}

/// `beta = 0`: the constraint only involves `t`.
fn product_form(
    mut r: Reducer,
    source: &DomainDesc,
    two_sided: bool,
) -> Result<NormalForm, NormalFormError> {
    let c = r.constraint()?;
    let half = Rat::new(1.into(), 2.into());
    let factor = if two_sided {
        let (lo, hi) = (
            c.lower.clone().expect("two-sided"),
            c.upper.clone().expect("two-sided"),
        );
        r.apply(MonomialMap::translation(
            -(&lo + &hi).scale(&half),
            QuadExt::zero(),
        ))?;
        DiscFactor::Annulus((&hi - &lo).scale(&half))
    } else {
        r.apply(MonomialMap::translation(
            -c.upper.clone().expect("upper bound"),
            QuadExt::zero(),
        ))?;
        if r.current.axis1 {
            DiscFactor::Disc
        } else {
            DiscFactor::PuncturedDisc
        }
    };
    let fiber = if r.current.axis2 {
        Fiber::C
    } else {
        Fiber::CStar
    };
    r.finish(source, NormalFormTag::ProductD { factor, fiber }, None)
}

/// Bezout pair `(m, n)` with `p m + q n = 1` minimizing the entries of the
/// matrix `(q, p; -m, n)`: least max-abs entry, then least absolute entries
/// in row-major order, then nonnegative entries first.
fn bezout_matrix(p: &BigInt, q: &BigInt) -> AutMatrix {
    let egcd = p.extended_gcd(q);
    debug_assert!(egcd.gcd.is_one());
    let (m0, n0) = (egcd.x, egcd.y);
    let centre = (-&m0).div_floor(q);
    let mut best: Option<(AutMatrix, (BigInt, Vec<BigInt>, Vec<BigInt>))> = None;
    for offset in -3i64..=3 {
        let k = &centre + offset;
        let m = &m0 + q * &k;
        let n = &n0 - p * &k;
        let matrix = AutMatrix {
            k1: q.clone(),
            k2: p.clone(),
            l1: -&m,
            l2: n,
        };
        let entries = [&matrix.k1, &matrix.k2, &matrix.l1, &matrix.l2];
        let abs: Vec<BigInt> = entries.iter().map(|v| v.abs()).collect();
        let key = (
            abs.iter().max().expect("four entries").clone(),
            abs,
            entries.iter().map(|v| -*v).collect(),
        );
        if best.as_ref().map_or(true, |(_, k)| key < *k) {
            best = Some((matrix, key));
        }
    }
    best.expect("window is nonempty").0
}

fn rational_parts(beta: &QuadExt) -> Result<(BigInt, BigInt), NormalFormError> {
    let r = beta.as_rational().ok_or(NormalFormError::NotRational)?;
    Ok((r.numer().clone(), r.denom().clone()))
}

/// Carries a strip form with rational `beta` to a product, `FormE` or `FormF`.
pub fn rational_reduce(form: &NormalFormTag) -> Result<NormalForm, NormalFormError> {
    let source = form.canonical_desc();
    let mut r = Reducer {
        current: source.clone(),
        witness: MonomialMap::identity(),
    };
    let beta = form.beta().ok_or(NormalFormError::NotRational)?;
    let (num, den) = rational_parts(beta)?;
    let tag = match form {
        NormalFormTag::FormA(_) if num.is_zero() => NormalFormTag::ProductD {
            factor: DiscFactor::Disc,
            fiber: Fiber::C,
        },
        NormalFormTag::FormA(_) if num.is_positive() => NormalFormTag::FormE { p: den, q: num },
        NormalFormTag::FormA(_) => {
            // beta = -m/n: (t, s) -> (-s, t) gives |z|^m |w|^n < 1 with w = 0 allowed
            let (m, n) = (num.abs(), den);
            r.apply(MonomialMap::linear(AutMatrix::new(0, -1, 1, 0)))?;
            if n.is_one() {
                let to_product = AutMatrix {
                    k1: m,
                    k2: BigInt::one(),
                    l1: BigInt::one(),
                    l2: BigInt::zero(),
                };
                r.apply(MonomialMap::linear(to_product))?;
                NormalFormTag::ProductD {
                    factor: DiscFactor::Disc,
                    fiber: Fiber::CStar,
                }
            } else {
                NormalFormTag::FormF { p: m, q: n }
            }
        }
        NormalFormTag::FormB(_) if num.is_zero() => NormalFormTag::ProductD {
            factor: DiscFactor::PuncturedDisc,
            fiber: Fiber::C,
        },
        NormalFormTag::FormC { log_r, .. } if num.is_zero() => NormalFormTag::ProductD {
            factor: DiscFactor::Annulus(log_r.clone()),
            fiber: Fiber::C,
        },
        NormalFormTag::FormB(_) | NormalFormTag::FormC { .. } => {
            let matrix = bezout_matrix(&num, &den);
            r.apply(MonomialMap::linear(matrix))?;
            let factor = match form {
                NormalFormTag::FormC { log_r, .. } => {
                    DiscFactor::Annulus(log_r.scale(&Rat::from_integer(den.clone())))
                }
                _ => DiscFactor::PuncturedDisc,
            };
            NormalFormTag::ProductD {
                factor,
                fiber: Fiber::CStar,
            }
        }
        _ => return Err(NormalFormError::NotRational),
    };
    r.finish(&source, tag, None)
}
