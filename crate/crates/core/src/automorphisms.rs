//! Automorphism groups of non-hyperbolic domains in normal form, exact
//! automorphism checks for monomial maps, and the compactness decision.
//!
//! Phases are never stored: every check only sees `log|a|` and `log|b|`, and
//! each family below implicitly carries the rotation torus.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use thiserror::Error;

use crate::domain::{DomainDesc, DomainError, DomainShape, FullType};
use crate::exact_arith::{QuadExt, Rat};
use crate::normal_form::{
    normal_form, DiscFactor, Fiber, MonomialMap, NormalFormError, NormalFormTag,
};
use crate::pell::{pell_generator, AutMatrix, PellError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutError {
    #[error("domain is hyperbolic; its automorphism group is outside this classification")]
    HyperbolicInput,
    #[error("closed-form iteration needs epsilon = 1")]
    FlipIterate,
    #[error("domain is not classified (hyperbolic or outside the description language)")]
    Unclassified,
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    NormalForm(#[from] NormalFormError),
    #[error(transparent)]
    Pell(#[from] PellError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AutFailure {
    NotUnimodular,
    AxisNotPreserved { axis: u8 },
    ImageDiffers,
    Unsupported(String),
}

impl fmt::Display for AutFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AutFailure::NotUnimodular => write!(f, "matrix is not unimodular"),
            AutFailure::AxisNotPreserved { axis } => {
                write!(f, "axis {axis} is not mapped onto an axis of the domain")
            }
            AutFailure::ImageDiffers => write!(f, "image of the log image differs from the domain"),
            AutFailure::Unsupported(why) => write!(f, "{why}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutCheck {
    pub failure: Option<AutFailure>,
}

impl AutCheck {
    pub fn holds(&self) -> bool {
        self.failure.is_none()
    }
}

/// Whether `map` carries the domain exactly onto itself, axes included.
pub fn is_automorphism(desc: &DomainDesc, map: &MonomialMap) -> AutCheck {
    let fail = |f| AutCheck { failure: Some(f) };
    if !map.matrix.is_unimodular() {
        return fail(AutFailure::NotUnimodular);
    }
    let image = match desc.transform(map) {
        Ok(image) => image,
        Err(DomainError::NotUnimodular) => return fail(AutFailure::NotUnimodular),
        Err(DomainError::AxisAmbiguity { axis }) => {
            return fail(AutFailure::AxisNotPreserved { axis })
        }
        Err(DomainError::Invalid(_)) => return fail(AutFailure::ImageDiffers),
        Err(e) => return fail(AutFailure::Unsupported(e.to_string())),
    };
    for axis in [1u8, 2] {
        if image.axis(axis) != desc.axis(axis) {
            return fail(AutFailure::AxisNotPreserved { axis });
        }
    }
    match image.same_domain(desc) {
        Ok(true) => AutCheck { failure: None },
        Ok(false) => fail(AutFailure::ImageDiffers),
        Err(e) => fail(AutFailure::Unsupported(e.to_string())),
    }
}

/// `(z1, z2) -> (a z1 z2^k, b z2^epsilon)`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShearAut {
    pub log_a: QuadExt,
    pub log_b: QuadExt,
    pub k: BigInt,
    pub epsilon: i8,
}

impl ShearAut {
    pub fn to_map(&self) -> MonomialMap {
        let matrix = AutMatrix {
            k1: BigInt::one(),
            k2: self.k.clone(),
            l1: BigInt::zero(),
            l2: self.epsilon.into(),
        };
        MonomialMap::new(matrix, self.log_a.clone(), self.log_b.clone())
    }
}

impl fmt::Display for ShearAut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(a z1 z2^{}, b z2^{}) with log|a| = {}, log|b| = {}",
            self.k, self.epsilon, self.log_a, self.log_b
        )
    }
}

/// Closed form of the `n`-th iterate: `log a -> n log a + k n(n-1)/2 log b`,
/// `log b -> n log b`, `k -> n k`. Valid for every integer `n`.
pub fn iterate_shear(phi: &ShearAut, n: i64) -> Result<ShearAut, AutError> {
    if phi.epsilon != 1 {
        return Err(AutError::FlipIterate);
    }
    let nn = BigInt::from(n);
    let triangle = Rat::from_integer(&phi.k * &nn * (&nn - 1)) / Rat::from_integer(2.into());
    Ok(ShearAut {
        log_a: &phi.log_a.scale(&Rat::from_integer(nn.clone())) + &phi.log_b.scale(&triangle),
        log_b: phi.log_b.scale(&Rat::from_integer(nn.clone())),
        k: &phi.k * &nn,
        epsilon: 1,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CompactnessWitness {
    /// Translation of the log image along a line it contains.
    Translation(MonomialMap),
    Shear(ShearAut),
}

impl CompactnessWitness {
    pub fn to_map(&self) -> MonomialMap {
        match self {
            CompactnessWitness::Translation(map) => map.clone(),
            CompactnessWitness::Shear(shear) => shear.to_map(),
        }
    }

    /// Log-moduli of the `n`-th iterate as `c1 n + c2 n^2` per coordinate:
    /// returns `[(c1, c2) for log|a|, (c1, c2) for log|b|]`.
    pub fn iterate_growth(&self) -> [(QuadExt, QuadExt); 2] {
        match self {
            CompactnessWitness::Translation(map) => [
                (map.log_modulus1.clone(), QuadExt::zero()),
                (map.log_modulus2.clone(), QuadExt::zero()),
            ],
            CompactnessWitness::Shear(s) => {
                let half_k = Rat::new(s.k.clone(), 2.into());
                let quad = s.log_b.scale(&half_k);
                [(&s.log_a - &quad, quad), (s.log_b.clone(), QuadExt::zero())]
            }
        }
    }

    /// Whether some growth coefficient is nonzero, so iterates leave every bounded set.
    pub fn is_unbounded(&self) -> bool {
        self.iterate_growth()
            .iter()
            .any(|(c1, c2)| !c1.is_zero() || !c2.is_zero())
    }

    pub fn iterate(&self, n: i64) -> Result<MonomialMap, AutError> {
        match self {
            CompactnessWitness::Translation(map) => Ok(map.power(n).expect("identity matrix")),
            CompactnessWitness::Shear(s) => Ok(iterate_shear(s, n)?.to_map()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompactnessReason {
    /// The log image contains an affine line.
    Line,
    /// Parabolic boundary `t < a s^2 + b s + c`.
    ParabolicShear,
    /// No line, one nonempty axis slice after removing the non-hyperbolic ones.
    OneAxisSlice,
    /// No line, no nonempty axis slice after the removal; no shear exists for
    /// a polyhedral boundary since its slopes are bounded.
    NoAxisSlice,
}

impl CompactnessReason {
    pub fn name(self) -> &'static str {
        match self {
            CompactnessReason::Line => "Line",
            CompactnessReason::ParabolicShear => "ParabolicShear",
            CompactnessReason::OneAxisSlice => "OneAxisSlice",
            CompactnessReason::NoAxisSlice => "NoAxisSlice",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompactnessVerdict {
    pub compact: bool,
    pub witness: Option<CompactnessWitness>,
    pub reason: CompactnessReason,
}

/// Shear of the parabolic domain `t < a s^2 + b s + c`: with `2a = k/beta`,
/// `psi(s + beta) - psi(s) = (a beta^2 + b beta) + k s`.
pub fn parabolic_shear(a: &Rat, b: &Rat) -> ShearAut {
    let two_a = a * Rat::from_integer(2.into());
    let k = two_a.numer().clone();
    let beta = Rat::from_integer(two_a.denom().clone());
    let log_a = a * &beta * &beta + b * &beta;
    ShearAut {
        log_a: QuadExt::from_rat(log_a),
        log_b: QuadExt::from_rat(beta),
        k,
        epsilon: 1,
    }
}

pub fn compactness(desc: &DomainDesc) -> Result<CompactnessVerdict, AutError> {
    desc.validate()
        .map_err(|v| AutError::Domain(DomainError::Invalid(v)))?;
    if desc.hyperbolicity().is_hyperbolic() {
        return Err(AutError::HyperbolicInput);
    }
    if let Some((dt, ds)) = desc.contains_line() {
        return Ok(CompactnessVerdict {
            compact: false,
            witness: Some(CompactnessWitness::Translation(MonomialMap::translation(
                dt, ds,
            ))),
            reason: CompactnessReason::Line,
        });
    }
    if let DomainShape::Parabolic { a, b, .. } = &desc.shape {
        return Ok(CompactnessVerdict {
            compact: false,
            witness: Some(CompactnessWitness::Shear(parabolic_shear(a, b))),
            reason: CompactnessReason::ParabolicShear,
        });
    }
    let reason = match desc.dhyp().axis_slices().nonempty {
        1 => CompactnessReason::OneAxisSlice,
        _ => CompactnessReason::NoAxisSlice,
    };
    Ok(CompactnessVerdict {
        compact: true,
        witness: None,
        reason,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FunctionalCase {
    /// `{|z1 z2| < 1}`
    BallProduct,
    /// `{|z1|^p |z2|^q < 1}` in `C^2`
    MonomialBall { p: BigInt, q: BigInt },
    /// `{|z1|^p |z2|^q < 1}` in `C_* x C`
    PuncturedMonomialBall { p: BigInt, q: BigInt },
    /// bounded factor times `C` or `C_*`
    Product { factor: DiscFactor, fiber: Fiber },
}

impl FunctionalCase {
    pub fn case_id(&self) -> u8 {
        match self {
            FunctionalCase::BallProduct => 1,
            FunctionalCase::MonomialBall { .. } => 2,
            FunctionalCase::PuncturedMonomialBall { .. } => 3,
            FunctionalCase::Product { .. } => 4,
        }
    }

    /// Names of the holomorphic-function parameters, which stay opaque.
    pub fn slots(&self) -> &'static [&'static str] {
        match self {
            FunctionalCase::BallProduct => &["f in O*(D)", "theta"],
            FunctionalCase::MonomialBall { .. } | FunctionalCase::PuncturedMonomialBall { .. } => {
                &["a in O*(D)", "theta"]
            }
            FunctionalCase::Product {
                fiber: Fiber::C, ..
            } => &["a in Aut(factor)", "b in O*(factor)", "c in O(factor)"],
            FunctionalCase::Product {
                fiber: Fiber::CStar,
                ..
            } => &["a in Aut(factor)", "b in O*(factor)", "epsilon"],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AutFamily {
    /// `(a z1, b z2)` with `log|a| + alpha log|b| = 0`.
    TorusScaling {
        alpha: QuadExt,
    },
    /// `(a z1^eps, b z2^eps)` with `log|a| + alpha log|b| = 0`.
    TorusWithFlip {
        alpha: QuadExt,
    },
    /// Powers of a Pell matrix composed with the scaling torus.
    MonomialHyperbolic {
        alpha: QuadExt,
        generator: AutMatrix,
    },
    Functional(FunctionalCase),
    /// Automorphisms of `C^2`, `C_*^2`, `C x C_*` or `C_* x C`; only their monomial part is sampled.
    FullGroup(FullType),
    /// Iterates of a shear.
    Shear {
        generator: ShearAut,
    },
    /// Compact group: rotations only in log coordinates.
    Rotations,
}

impl AutFamily {
    pub fn name(&self) -> &'static str {
        match self {
            AutFamily::TorusScaling { .. } => "TorusScaling",
            AutFamily::TorusWithFlip { .. } => "TorusWithFlip",
            AutFamily::MonomialHyperbolic { .. } => "MonomialHyperbolic",
            AutFamily::Functional(_) => "FunctionalFamily",
            AutFamily::FullGroup(_) => "FullGroup",
            AutFamily::Shear { .. } => "Shear",
            AutFamily::Rotations => "Rotations",
        }
    }

    /// A concrete member with constant or Laurent-monomial function parameters.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> MonomialMap {
        let sign = |rng: &mut R| if rng.gen_bool(0.5) { 1i64 } else { -1 };
        match self {
            AutFamily::TorusScaling { alpha } => torus(alpha, rng),
            AutFamily::TorusWithFlip { alpha } => {
                let eps = sign(rng);
                MonomialMap::linear(AutMatrix::new(eps, 0, 0, eps)).then(&torus(alpha, rng))
            }
            AutFamily::MonomialHyperbolic { alpha, generator } => {
                let power = rng.gen_range(-2i64..=2);
                let base = if power < 0 {
                    generator.inverse().expect("unimodular")
                } else {
                    generator.clone()
                };
                let matrix = base.pow(power.unsigned_abs() as u32);
                MonomialMap::linear(matrix).then(&torus(alpha, rng))
            }
            AutFamily::Functional(case) => {
                let g = QuadExt::from_rat(small_rat(rng));
                match case {
                    FunctionalCase::BallProduct => {
                        let swap = rng.gen_bool(0.5);
                        let matrix = if swap {
                            AutMatrix::new(0, 1, 1, 0)
                        } else {
                            AutMatrix::identity()
                        };
                        MonomialMap::new(matrix, g.clone(), -g)
                    }
                    FunctionalCase::MonomialBall { p, q }
                    | FunctionalCase::PuncturedMonomialBall { p, q } => {
                        let over = |n: &BigInt| g.scale(&Rat::new(BigInt::one(), n.clone()));
                        MonomialMap::translation(over(p), -over(q))
                    }
                    FunctionalCase::Product { factor, fiber } => {
                        let eps1 = if matches!(factor, DiscFactor::Annulus(_)) {
                            sign(rng)
                        } else {
                            1
                        };
                        let j = if *factor == DiscFactor::Disc {
                            0
                        } else {
                            rng.gen_range(-2i64..=2)
                        };
                        let eps2 = if *fiber == Fiber::CStar { sign(rng) } else { 1 };
                        MonomialMap::new(AutMatrix::new(eps1, 0, j, eps2), QuadExt::zero(), g)
                    }
                }
            }
            AutFamily::FullGroup(kind) => {
                let (g1, g2) = (
                    QuadExt::from_rat(small_rat(rng)),
                    QuadExt::from_rat(small_rat(rng)),
                );
                let k = rng.gen_range(-3i64..=3);
                let matrix = match kind {
                    FullType::C2 => {
                        if rng.gen_bool(0.5) {
                            AutMatrix::new(0, 1, 1, 0)
                        } else {
                            AutMatrix::identity()
                        }
                    }
                    FullType::CxCStar => AutMatrix::new(1, k, 0, sign(rng)),
                    FullType::CStarxC => AutMatrix::new(sign(rng), 0, k, 1),
                    _ => random_unimodular(rng, 3),
                };
                MonomialMap::new(matrix, g1, g2)
            }
            AutFamily::Shear { generator } => {
                let n = rng.gen_range(-3i64..=3);
                iterate_shear(generator, n).expect("epsilon = 1").to_map()
            }
            AutFamily::Rotations => MonomialMap::identity(),
        }
    }
}

fn small_rat<R: Rng>(rng: &mut R) -> Rat {
    Rat::new(
        rng.gen_range(-6i64..=6).into(),
        rng.gen_range(1i64..=4).into(),
    )
}

/// `(a z1, b z2)` with `log|b|` random rational and `log|a| = -alpha log|b|`.
fn torus<R: Rng>(alpha: &QuadExt, rng: &mut R) -> MonomialMap {
    let log_b = QuadExt::from_rat(small_rat(rng));
    MonomialMap::translation(-(alpha * &log_b), log_b)
}

/// A random matrix of determinant `+-1` with entries bounded by `bound`.
pub fn random_unimodular<R: Rng>(rng: &mut R, bound: i64) -> AutMatrix {
    loop {
        let [a, b, c, d] = [(); 4].map(|_| rng.gen_range(-bound..=bound));
        if (a * d - b * c).abs() == 1 {
            return AutMatrix::new(a, b, c, d);
        }
    }
}

/// The families of `Aut(D)` in the coordinates of a model domain, and the map
/// `frame` carrying the source domain onto that model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutGroup {
    pub frame: MonomialMap,
    pub model: DomainDesc,
    pub families: Vec<AutFamily>,
}

impl AutGroup {
    /// Conjugates a model automorphism back to source coordinates.
    pub fn to_source(&self, instance: &MonomialMap) -> MonomialMap {
        let back = self.frame.inverse().expect("unimodular frame");
        self.frame.then(instance).then(&back)
    }
}

pub fn aut_group(desc: &DomainDesc) -> Result<AutGroup, AutError> {
    desc.validate()
        .map_err(|v| AutError::Domain(DomainError::Invalid(v)))?;
    if desc.hyperbolicity().is_hyperbolic() {
        return Err(AutError::Unclassified);
    }
    let same = |families| AutGroup {
        frame: MonomialMap::identity(),
        model: desc.clone(),
        families,
    };
    if let DomainShape::Parabolic { a, b, .. } = &desc.shape {
        return Ok(same(vec![AutFamily::Shear {
            generator: parabolic_shear(a, b),
        }]));
    }
    if desc.contains_line().is_none() {
        return Ok(same(vec![AutFamily::Rotations]));
    }
    let nf = normal_form(desc)?;
    let family = match &nf.tag {
        NormalFormTag::Full(kind) => AutFamily::FullGroup(*kind),
        NormalFormTag::FormA(alpha) => AutFamily::TorusScaling {
            alpha: alpha.clone(),
        },
        NormalFormTag::FormC { beta, .. } => AutFamily::TorusWithFlip {
            alpha: beta.clone(),
        },
        NormalFormTag::FormB(alpha) => {
            let (_, _, generator) = pell_generator(alpha)?;
            AutFamily::MonomialHyperbolic {
                alpha: alpha.clone(),
                generator,
            }
        }
        NormalFormTag::FormE { p, q } if p.is_one() && q.is_one() => {
            AutFamily::Functional(FunctionalCase::BallProduct)
        }
        NormalFormTag::FormE { p, q } => AutFamily::Functional(FunctionalCase::MonomialBall {
            p: p.clone(),
            q: q.clone(),
        }),
        NormalFormTag::FormF { p, q } => {
            AutFamily::Functional(FunctionalCase::PuncturedMonomialBall {
                p: p.clone(),
                q: q.clone(),
            })
        }
        NormalFormTag::ProductD { factor, fiber } => {
            AutFamily::Functional(FunctionalCase::Product {
                factor: factor.clone(),
                fiber: *fiber,
            })
        }
    };
    Ok(AutGroup {
        frame: nf.witness.clone(),
        model: nf.tag.canonical_desc(),
        families: vec![family],
    })
}
