//! Pseudoconvex Reinhardt domains in `C^2`, described through their logarithmic
//! image in the `(t, s) = (log|z1|, log|z2|)` plane plus two axis flags.
//!
//! A monomial polyhedron is an intersection of strips and half-planes
//! `lower < alpha1 t + alpha2 s < upper`. A parabolic domain is
//! `t < a s^2 + b s + c` with `a < 0`. Every query is exact.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exact_arith::{format_rat, ArithError, QuadExt, Rat};
use crate::normal_form::MonomialMap;

/// `lower < alpha1 t + alpha2 s < upper`, with `None` standing for an infinite bound.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialConstraint {
    pub alpha1: QuadExt,
    pub alpha2: QuadExt,
    pub lower: Option<QuadExt>,
    pub upper: Option<QuadExt>,
}

impl MonomialConstraint {
    pub fn new(
        alpha1: QuadExt,
        alpha2: QuadExt,
        lower: Option<QuadExt>,
        upper: Option<QuadExt>,
    ) -> Self {
        MonomialConstraint {
            alpha1,
            alpha2,
            lower,
            upper,
        }
    }

    /// `alpha1 t + alpha2 s < upper`
    pub fn below(alpha1: QuadExt, alpha2: QuadExt, upper: QuadExt) -> Self {
        Self::new(alpha1, alpha2, None, Some(upper))
    }

    /// `lower < alpha1 t + alpha2 s < upper`
    pub fn between(alpha1: QuadExt, alpha2: QuadExt, lower: QuadExt, upper: QuadExt) -> Self {
        Self::new(alpha1, alpha2, Some(lower), Some(upper))
    }

    pub fn alpha(&self, axis: u8) -> &QuadExt {
        if axis == 1 {
            &self.alpha1
        } else {
            &self.alpha2
        }
    }

    fn values(&self) -> impl Iterator<Item = &QuadExt> {
        [&self.alpha1, &self.alpha2]
            .into_iter()
            .chain(self.lower.iter())
            .chain(self.upper.iter())
    }

    /// `alpha1 t + alpha2 s`
    pub fn eval(&self, t: &QuadExt, s: &QuadExt) -> QuadExt {
        &(&self.alpha1 * t) + &(&self.alpha2 * s)
    }

    pub fn eval_f64(&self, t: f64, s: f64) -> f64 {
        self.alpha1.to_f64() * t + self.alpha2.to_f64() * s
    }

    /// Same half-planes with the normal scaled so its first nonzero entry is 1.
    fn scaled(&self) -> MonomialConstraint {
        let pivot = if self.alpha1.is_zero() {
            &self.alpha2
        } else {
            &self.alpha1
        };
        let div = |v: &QuadExt| v / pivot;
        let (lower, upper) = (self.lower.as_ref().map(div), self.upper.as_ref().map(div));
        let (lower, upper) = if pivot.is_negative() {
            (upper, lower)
        } else {
            (lower, upper)
        };
        MonomialConstraint {
            alpha1: div(&self.alpha1),
            alpha2: div(&self.alpha2),
            lower,
            upper,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DomainShape {
    MonomialPolyhedron {
        constraints: Vec<MonomialConstraint>,
    },
    /// `log D = { t < a s^2 + b s + c }`
    Parabolic { a: Rat, b: Rat, c: Rat },
}

/// A domain: log image plus whether it meets `{z1 = 0}` (`axis1`) and `{z2 = 0}` (`axis2`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainDesc {
    pub shape: DomainShape,
    pub axis1: bool,
    pub axis2: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("constraint {index} has zero exponent vector")]
    ZeroNormal { index: usize },
    #[error("constraint {index} has no finite bound")]
    Unbounded { index: usize },
    #[error("constraint {index} has lower bound not below its upper bound")]
    EmptyBounds { index: usize },
    #[error("values from Q(sqrt {left}) and Q(sqrt {right}) in one description")]
    MixedField { left: u64, right: u64 },
    #[error("logarithmic image has empty interior")]
    EmptyInterior,
    #[error("axis {axis} included but constraint {index} has a negative exponent on z{axis}")]
    AxisNegativeExponent { axis: u8, index: usize },
    #[error("axis {axis} included but constraint {index} has a finite lower bound and a positive exponent on z{axis}")]
    AxisLowerBound { axis: u8, index: usize },
    #[error("axis {axis} included but its slice is empty")]
    AxisSliceEmpty { axis: u8 },
    #[error("parabolic leading coefficient must be negative")]
    ParabolicNotConcave,
    #[error("parabolic domains cannot meet {{z2 = 0}}")]
    ParabolicAxis2,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DomainError {
    #[error("invalid domain: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("map is not unimodular")]
    NotUnimodular,
    #[error("image of axis {axis} is not a coordinate axis")]
    AxisAmbiguity { axis: u8 },
    #[error("unsupported map: {0}")]
    UnsupportedMap(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

fn join_violations(list: &[Violation]) -> String {
    list.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FullType {
    C2,
    CStar2,
    /// `C x C_*`: meets `{z1 = 0}` only.
    CxCStar,
    /// `C_* x C`: meets `{z2 = 0}` only.
    CStarxC,
    NotFull,
}

impl FullType {
    pub fn name(self) -> &'static str {
        match self {
            FullType::C2 => "C2",
            FullType::CStar2 => "CStar2",
            FullType::CxCStar => "CxCStar",
            FullType::CStarxC => "CStarxC",
            FullType::NotFull => "NotFull",
        }
    }
}

/// Log-radius interval of an axis slice; `None` bounds are infinite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SliceInterval {
    Empty,
    Interval {
        lower: Option<QuadExt>,
        upper: Option<QuadExt>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SliceReport {
    pub axis: u8,
    pub interval: SliceInterval,
    pub includes_origin: bool,
    pub hyperbolic: bool,
}

impl SliceReport {
    pub fn is_empty(&self) -> bool {
        self.interval == SliceInterval::Empty
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SliceSummary {
    pub slices: [SliceReport; 2],
    /// Axes whose slice is nonempty and not hyperbolic.
    pub non_hyperbolic: Vec<u8>,
    /// Number of nonempty slices.
    pub nonempty: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NonHyperbolicReason {
    Line { direction: (QuadExt, QuadExt) },
    Slice { axis: u8 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Hyperbolicity {
    Hyperbolic,
    NonHyperbolic(Vec<NonHyperbolicReason>),
}

impl Hyperbolicity {
    pub fn is_hyperbolic(&self) -> bool {
        matches!(self, Hyperbolicity::Hyperbolic)
    }
}

/// `n1 t + n2 s < b`, or `<=` when not strict.
#[derive(Debug, Clone)]
struct HalfPlane {
    n1: QuadExt,
    n2: QuadExt,
    b: QuadExt,
    strict: bool,
}

impl HalfPlane {
    fn negated(&self) -> HalfPlane {
        HalfPlane {
            n1: -&self.n1,
            n2: -&self.n2,
            b: -&self.b,
            strict: !self.strict,
        }
    }
}

/// Fourier-Motzkin: eliminate `s`, then compare the bounds left on `t`.
fn feasible(planes: &[HalfPlane]) -> bool {
    // (c, b, strict) meaning c t < b
    let mut on_t: Vec<(QuadExt, QuadExt, bool)> = Vec::new();
    let (mut pos, mut neg) = (Vec::new(), Vec::new());
    for plane in planes {
        match plane.n2.signum() {
            0 => on_t.push((plane.n1.clone(), plane.b.clone(), plane.strict)),
            1 => pos.push(plane),
            _ => neg.push(plane),
        }
    }
    for p in &pos {
        for q in &neg {
            let (wp, wq) = (
                p.n2.inverse().expect("nonzero"),
                (-&q.n2).inverse().expect("nonzero"),
            );
            let c = &(&p.n1 * &wp) + &(&q.n1 * &wq);
            let b = &(&p.b * &wp) + &(&q.b * &wq);
            on_t.push((c, b, p.strict || q.strict));
        }
    }
    let (mut lowers, mut uppers) = (Vec::new(), Vec::new());
    for (c, b, strict) in on_t {
        match c.signum() {
            0 => {
                let ok = if strict {
                    b.is_positive()
                } else {
                    !b.is_negative()
                };
                if !ok {
                    return false;
                }
            }
            1 => uppers.push((&b / &c, strict)),
            _ => lowers.push((&b / &c, strict)),
        }
    }
    lowers.iter().all(|(l, sl)| {
        uppers.iter().all(|(u, su)| match l.partial_cmp(u) {
            Some(Ordering::Less) => true,
            Some(Ordering::Equal) => !sl && !su,
            _ => false,
        })
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Lower,
    Upper,
}

fn half_planes(constraints: &[MonomialConstraint]) -> Vec<(HalfPlane, usize, Side)> {
    let mut out = Vec::new();
    for (i, c) in constraints.iter().enumerate() {
        if let Some(upper) = &c.upper {
            let plane = HalfPlane {
                n1: c.alpha1.clone(),
                n2: c.alpha2.clone(),
                b: upper.clone(),
                strict: true,
            };
            out.push((plane, i, Side::Upper));
        }
        if let Some(lower) = &c.lower {
            let plane = HalfPlane {
                n1: -&c.alpha1,
                n2: -&c.alpha2,
                b: -lower,
                strict: true,
            };
            out.push((plane, i, Side::Lower));
        }
    }
    out
}

fn max_opt(a: Option<QuadExt>, b: Option<QuadExt>) -> Option<QuadExt> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if x > y { x } else { y }),
        (x, y) => x.or(y),
    }
}

fn min_opt(a: Option<QuadExt>, b: Option<QuadExt>) -> Option<QuadExt> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if x < y { x } else { y }),
        (x, y) => x.or(y),
    }
}

fn cmp_quad(x: &QuadExt, y: &QuadExt) -> Ordering {
    x.partial_cmp(y).expect("single field")
}

impl DomainDesc {
    pub fn polyhedron(constraints: Vec<MonomialConstraint>, axis1: bool, axis2: bool) -> Self {
        DomainDesc {
            shape: DomainShape::MonomialPolyhedron { constraints },
            axis1,
            axis2,
        }
    }

    pub fn parabolic(a: Rat, b: Rat, c: Rat, axis1: bool) -> Self {
        DomainDesc {
            shape: DomainShape::Parabolic { a, b, c },
            axis1,
            axis2: false,
        }
    }

    pub fn axis(&self, axis: u8) -> bool {
        if axis == 1 {
            self.axis1
        } else {
            self.axis2
        }
    }

    pub fn constraints(&self) -> &[MonomialConstraint] {
        match &self.shape {
            DomainShape::MonomialPolyhedron { constraints } => constraints,
            DomainShape::Parabolic { .. } => &[],
        }
    }

    pub fn is_parabolic(&self) -> bool {
        matches!(self.shape, DomainShape::Parabolic { .. })
    }

    /// The quadratic field of the description (`None` when everything is rational).
    pub fn field(&self) -> Result<Option<u64>, ArithError> {
        let mut field: Option<u64> = None;
        for value in self.constraints().iter().flat_map(|c| c.values()) {
            if let Some(d) = value.field() {
                match field {
                    Some(f) if f != d => return Err(ArithError::MixedField { left: f, right: d }),
                    _ => field = Some(d),
                }
            }
        }
        Ok(field)
    }

    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        let mut violations = Vec::new();
        if let Err(ArithError::MixedField { left, right }) = self.field() {
            return Err(vec![Violation::MixedField { left, right }]);
        }
        match &self.shape {
            DomainShape::Parabolic { a, .. } => {
                if !a.is_negative() {
                    violations.push(Violation::ParabolicNotConcave);
                }
                if self.axis2 {
                    violations.push(Violation::ParabolicAxis2);
                }
            }
            DomainShape::MonomialPolyhedron { constraints } => {
                let mut structural = false;
                for (index, c) in constraints.iter().enumerate() {
                    if c.alpha1.is_zero() && c.alpha2.is_zero() {
                        violations.push(Violation::ZeroNormal { index });
                        structural = true;
                    }
                    match (&c.lower, &c.upper) {
                        (None, None) => {
                            violations.push(Violation::Unbounded { index });
                            structural = true;
                        }
                        (Some(lo), Some(hi)) if lo >= hi => {
                            violations.push(Violation::EmptyBounds { index });
                            structural = true;
                        }
                        _ => {}
                    }
                }
                if structural {
                    return Err(violations);
                }
                let planes: Vec<HalfPlane> = half_planes(constraints)
                    .into_iter()
                    .map(|(p, _, _)| p)
                    .collect();
                if !feasible(&planes) {
                    violations.push(Violation::EmptyInterior);
                }
                for axis in [1u8, 2] {
                    if !self.axis(axis) {
                        continue;
                    }
                    let mut sign_ok = true;
                    for (index, c) in constraints.iter().enumerate() {
                        // `lo < alpha.x` alone reads as `-alpha.x < -lo`
                        let flipped = c.upper.is_none();
                        let exponent = if flipped {
                            -c.alpha(axis)
                        } else {
                            c.alpha(axis).clone()
                        };
                        let has_lower = c.lower.is_some() && !flipped;
                        if exponent.is_negative() {
                            violations.push(Violation::AxisNegativeExponent { axis, index });
                            sign_ok = false;
                        } else if exponent.is_positive() && has_lower {
                            violations.push(Violation::AxisLowerBound { axis, index });
                            sign_ok = false;
                        }
                    }
                    if sign_ok && self.slice_interval(axis) == SliceInterval::Empty {
                        violations.push(Violation::AxisSliceEmpty { axis });
                    }
                }
            }
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(violations)
        }
    }

    fn checked(&self) -> Result<(), DomainError> {
        self.validate().map_err(DomainError::Invalid)
    }

    /// Unique representative of the same domain: normals scaled to a leading 1,
    /// parallel constraints merged, redundant bounds dropped, constraints sorted.
    pub fn canonical(&self) -> Result<DomainDesc, DomainError> {
        self.checked()?;
        let constraints = match &self.shape {
            DomainShape::Parabolic { .. } => return Ok(self.clone()),
            DomainShape::MonomialPolyhedron { constraints } => constraints,
        };
        let mut merged: Vec<MonomialConstraint> = Vec::new();
        for c in constraints.iter().map(MonomialConstraint::scaled) {
            match merged
                .iter_mut()
                .find(|m| m.alpha1 == c.alpha1 && m.alpha2 == c.alpha2)
            {
                Some(m) => {
                    m.lower = max_opt(m.lower.take(), c.lower);
                    m.upper = min_opt(m.upper.take(), c.upper);
                }
                None => merged.push(c),
            }
        }
        let mut planes = half_planes(&merged);
        let mut i = 0;
        while i < planes.len() {
            let mut test: Vec<HalfPlane> = planes
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, p)| p.0.clone())
                .collect();
            test.push(planes[i].0.negated());
            if feasible(&test) {
                i += 1;
            } else {
                planes.remove(i);
            }
        }
        let mut out: Vec<MonomialConstraint> = Vec::new();
        for (index, c) in merged.iter().enumerate() {
            let keep = |side| planes.iter().any(|(_, j, s)| *j == index && *s == side);
            let lower = if keep(Side::Lower) {
                c.lower.clone()
            } else {
                None
            };
            let upper = if keep(Side::Upper) {
                c.upper.clone()
            } else {
                None
            };
            if lower.is_some() || upper.is_some() {
                out.push(MonomialConstraint {
                    alpha1: c.alpha1.clone(),
                    alpha2: c.alpha2.clone(),
                    lower,
                    upper,
                });
            }
        }
        out.sort_by(|x, y| {
            cmp_quad(&x.alpha1, &y.alpha1).then_with(|| cmp_quad(&x.alpha2, &y.alpha2))
        });
        Ok(DomainDesc::polyhedron(out, self.axis1, self.axis2))
    }

    /// Whether both descriptions define the same domain.
    pub fn same_domain(&self, other: &DomainDesc) -> Result<bool, DomainError> {
        Ok(self.canonical()? == other.canonical()?)
    }

    /// A direction `(dt, ds)` of a line inside the log image, if there is one.
    pub fn contains_line(&self) -> Option<(QuadExt, QuadExt)> {
        let constraints = match &self.shape {
            DomainShape::Parabolic { .. } => return None,
            DomainShape::MonomialPolyhedron { constraints } => constraints,
        };
        let Some(first) = constraints.first() else {
            return Some((QuadExt::one(), QuadExt::zero()));
        };
        let parallel = constraints
            .iter()
            .all(|c| (&(&first.alpha1 * &c.alpha2) - &(&first.alpha2 * &c.alpha1)).is_zero());
        parallel.then(|| (-&first.alpha2, first.alpha1.clone()))
    }

    pub fn full_type(&self) -> FullType {
        match &self.shape {
            DomainShape::MonomialPolyhedron { constraints } if constraints.is_empty() => {
                match (self.axis1, self.axis2) {
                    (true, true) => FullType::C2,
                    (true, false) => FullType::CxCStar,
                    (false, true) => FullType::CStarxC,
                    (false, false) => FullType::CStar2,
                }
            }
            _ => FullType::NotFull,
        }
    }

    /// Log-radius interval of the slice `{z_axis = 0}` in the other coordinate.
    fn slice_interval(&self, axis: u8) -> SliceInterval {
        if !self.axis(axis) {
            return SliceInterval::Empty;
        }
        let constraints = match &self.shape {
            DomainShape::Parabolic { .. } => {
                return SliceInterval::Interval {
                    lower: None,
                    upper: None,
                };
            }
            DomainShape::MonomialPolyhedron { constraints } => constraints,
        };
        let other = 3 - axis;
        let (mut lower, mut upper) = (None, None);
        for c in constraints.iter().filter(|c| c.alpha(axis).is_zero()) {
            let w = c.alpha(other);
            let lo = c.lower.as_ref().map(|v| v / w);
            let hi = c.upper.as_ref().map(|v| v / w);
            let (lo, hi) = if w.is_negative() { (hi, lo) } else { (lo, hi) };
            lower = max_opt(lower, lo);
            upper = min_opt(upper, hi);
        }
        match (&lower, &upper) {
            (Some(lo), Some(hi)) if lo >= hi => SliceInterval::Empty,
            _ => SliceInterval::Interval { lower, upper },
        }
    }

    pub fn axis_slices(&self) -> SliceSummary {
        let report = |axis: u8| {
            let interval = self.slice_interval(axis);
            let hyperbolic = interval
                != SliceInterval::Interval {
                    lower: None,
                    upper: None,
                };
            SliceReport {
                axis,
                interval,
                includes_origin: self.axis1 && self.axis2,
                hyperbolic,
            }
        };
        let slices = [report(1), report(2)];
        let non_hyperbolic = slices
            .iter()
            .filter(|r| !r.is_empty() && !r.hyperbolic)
            .map(|r| r.axis)
            .collect();
        let nonempty = slices.iter().filter(|r| !r.is_empty()).count();
        SliceSummary {
            slices,
            non_hyperbolic,
            nonempty,
        }
    }

    /// The domain with its non-hyperbolic axis slices removed.
    pub fn dhyp(&self) -> DomainDesc {
        let summary = self.axis_slices();
        let mut out = self.clone();
        for axis in summary.non_hyperbolic {
            if axis == 1 {
                out.axis1 = false;
            } else {
                out.axis2 = false;
            }
        }
        out
    }

    pub fn hyperbolicity(&self) -> Hyperbolicity {
        let mut reasons = Vec::new();
        if let Some(direction) = self.contains_line() {
            reasons.push(NonHyperbolicReason::Line { direction });
        }
        for axis in self.axis_slices().non_hyperbolic {
            reasons.push(NonHyperbolicReason::Slice { axis });
        }
        if reasons.is_empty() {
            Hyperbolicity::Hyperbolic
        } else {
            Hyperbolicity::NonHyperbolic(reasons)
        }
    }

    /// Image of the domain under a monomial map.
    ///
    /// In log coordinates the map is `x -> A x + m`, so a normal `alpha`
    /// becomes `alpha A^-1` and its bounds move by `alpha A^-1 m`. An included
    /// axis must be sent onto a coordinate axis, which holds exactly when the
    /// corresponding column of `A` is a standard basis vector.
    pub fn transform(&self, map: &MonomialMap) -> Result<DomainDesc, DomainError> {
        self.checked()?;
        let a = &map.matrix;
        let inv = a.inverse().ok_or(DomainError::NotUnimodular)?;
        let (m1, m2) = (&map.log_modulus1, &map.log_modulus2);
        let mut axes = [false, false];
        for (axis, column) in [(1u8, (&a.k1, &a.l1)), (2, (&a.k2, &a.l2))] {
            if !self.axis(axis) {
                continue;
            }
            match (
                column.0.is_one(),
                column.0.is_zero(),
                column.1.is_one(),
                column.1.is_zero(),
            ) {
                (true, _, _, true) => axes[0] = true,
                (_, true, true, _) => axes[1] = true,
                _ => return Err(DomainError::AxisAmbiguity { axis }),
            }
        }
        let shape = match &self.shape {
            DomainShape::MonomialPolyhedron { constraints } => {
                if let Some(d) = self.field()? {
                    for m in [m1, m2] {
                        if let Some(e) = m.field() {
                            if e != d {
                                return Err(ArithError::MixedField { left: d, right: e }.into());
                            }
                        }
                    }
                }
                let entry = |v: &num_bigint::BigInt| QuadExt::from_bigint(v.clone());
                let (i11, i12, i21, i22) = (
                    entry(&inv.k1),
                    entry(&inv.k2),
                    entry(&inv.l1),
                    entry(&inv.l2),
                );
                let mut out = Vec::with_capacity(constraints.len());
                for c in constraints {
                    let n1 = &(&c.alpha1 * &i11) + &(&c.alpha2 * &i21);
                    let n2 = &(&c.alpha1 * &i12) + &(&c.alpha2 * &i22);
                    let shift = &(&n1 * m1) + &(&n2 * m2);
                    out.push(MonomialConstraint {
                        alpha1: n1,
                        alpha2: n2,
                        lower: c.lower.as_ref().map(|v| v + &shift),
                        upper: c.upper.as_ref().map(|v| v + &shift),
                    });
                }
                DomainShape::MonomialPolyhedron { constraints: out }
            }
            DomainShape::Parabolic {
                a: pa,
                b: pb,
                c: pc,
            } => {
                let shear = a.k1.is_one() && a.l1.is_zero() && a.l2.abs().is_one();
                let (Some(ma), Some(mb)) = (m1.as_rational(), m2.as_rational()) else {
                    return Err(DomainError::UnsupportedMap(
                        "parabolic domains need rational log-moduli".into(),
                    ));
                };
                if !shear {
                    return Err(DomainError::UnsupportedMap(format!(
                        "parabolic domains only admit matrices (1,k;0,+-1), got {a}"
                    )));
                }
                // psi'(s') = a (s' - mb)^2 + eps (b + k)(s' - mb) + c + ma
                let k = Rat::from_integer(a.k2.clone());
                let eps = Rat::from_integer(a.l2.clone());
                let linear = &eps * (pb + &k);
                let two = Rat::from_integer(2.into());
                DomainShape::Parabolic {
                    a: pa.clone(),
                    b: &linear - &two * pa * mb,
                    c: pa * mb * mb - &linear * mb + pc + ma,
                }
            }
        };
        let image = DomainDesc {
            shape,
            axis1: axes[0],
            axis2: axes[1],
        };
        image.checked()?;
        Ok(image)
    }

    /// Whether `(t, s)` lies in the log image (exact).
    pub fn contains_log_point(&self, t: &QuadExt, s: &QuadExt) -> bool {
        match &self.shape {
            DomainShape::MonomialPolyhedron { constraints } => constraints.iter().all(|c| {
                let v = c.eval(t, s);
                c.lower.as_ref().map_or(true, |lo| lo < &v)
                    && c.upper.as_ref().map_or(true, |hi| &v < hi)
            }),
            DomainShape::Parabolic { a, b, c } => {
                let psi = &(&(&s.scale(a) * s) + &s.scale(b)) + &QuadExt::from_rat(c.clone());
                t < &psi
            }
        }
    }
}

fn fmt_linear(f: &mut fmt::Formatter<'_>, a1: &QuadExt, a2: &QuadExt) -> fmt::Result {
    match (a1.is_zero(), a2.is_zero()) {
        (false, true) => write!(f, "({a1})t"),
        (true, false) => write!(f, "({a2})s"),
        _ => write!(f, "({a1})t + ({a2})s"),
    }
}

impl fmt::Display for MonomialConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(lo) = &self.lower {
            write!(f, "{lo} < ")?;
        }
        fmt_linear(f, &self.alpha1, &self.alpha2)?;
        if let Some(hi) = &self.upper {
            write!(f, " < {hi}")?;
        }
        Ok(())
    }
}

impl fmt::Display for DomainDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.shape {
            DomainShape::MonomialPolyhedron { constraints } if constraints.is_empty() => {
                write!(f, "all (t, s)")?
            }
            DomainShape::MonomialPolyhedron { constraints } => {
                let parts: Vec<String> = constraints.iter().map(|c| c.to_string()).collect();
                write!(f, "{}", parts.join(", "))?;
            }
            DomainShape::Parabolic { a, b, c } => write!(
                f,
                "t < ({})s^2 + ({})s + ({})",
                format_rat(a),
                format_rat(b),
                format_rat(c)
            )?,
        }
        let axes = match (self.axis1, self.axis2) {
            (true, true) => "z1 = 0 and z2 = 0",
            (true, false) => "z1 = 0",
            (false, true) => "z2 = 0",
            (false, false) => "none",
        };
        write!(f, "; axes: {axes}")
    }
}
