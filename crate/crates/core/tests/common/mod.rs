#![allow(dead_code)]

use rand::Rng;
use reinhardt::automorphisms::random_unimodular;
use reinhardt::exact_arith::{rat, rat_int};
use reinhardt::normal_form::NormalFormTag;
use reinhardt::pell::AutMatrix;
use reinhardt::verdicts::SerreBranch;
use reinhardt::{DomainDesc, MonomialConstraint, MonomialMap, QuadExt};

pub fn q(v: i64) -> QuadExt {
    QuadExt::from_int(v)
}

pub fn qr(n: i64, d: i64) -> QuadExt {
    QuadExt::from_rat(rat(n, d))
}

pub fn sqrt(d: u64) -> QuadExt {
    QuadExt::sqrt(d).unwrap()
}

pub fn qx(a: i64, b: i64, d: u64) -> QuadExt {
    QuadExt::new(rat_int(a), rat_int(b), d).unwrap()
}

pub fn below(a1: QuadExt, a2: QuadExt) -> MonomialConstraint {
    MonomialConstraint::below(a1, a2, q(0))
}

pub fn dstar(beta: QuadExt) -> DomainDesc {
    DomainDesc::polyhedron(vec![below(q(1), beta)], false, false)
}

pub struct Entry {
    pub name: &'static str,
    pub desc: DomainDesc,
    pub in_s: Option<bool>,
    pub branch: SerreBranch,
}

/// Twelve reference domains with their expected Serre-class verdicts.
pub fn corpus() -> Vec<Entry> {
    use SerreBranch::*;
    let entry = |name, desc, in_s, branch| Entry {
        name,
        desc,
        in_s,
        branch,
    };
    vec![
        entry(
            "C^2",
            DomainDesc::polyhedron(vec![], true, true),
            Some(false),
            Full,
        ),
        entry(
            "C x C_*",
            DomainDesc::polyhedron(vec![], true, false),
            Some(false),
            Full,
        ),
        entry(
            "C_*^2",
            DomainDesc::polyhedron(vec![], false, false),
            Some(false),
            Full,
        ),
        entry(
            "polydisc",
            DomainDesc::polyhedron(vec![below(q(1), q(0)), below(q(0), q(1))], true, true),
            None,
            HyperbolicOutOfScope,
        ),
        entry(
            "|z1 z2| < 1",
            DomainDesc::polyhedron(vec![below(q(1), q(1))], true, true),
            Some(true),
            StripRationalType,
        ),
        entry(
            "|z1|^2 |z2|^3 < 1",
            DomainDesc::polyhedron(vec![below(q(2), q(3))], true, true),
            Some(true),
            StripRationalType,
        ),
        entry("D*_(2/3)", dstar(qr(2, 3)), Some(true), StripRationalType),
        entry(
            "D_sqrt2",
            NormalFormTag::FormA(sqrt(2)).canonical_desc(),
            Some(true),
            StripIrrationalDalpha,
        ),
        entry(
            "D*_(1+sqrt2)",
            dstar(qx(1, 1, 2)),
            Some(false),
            StripIrrationalDstarPell,
        ),
        entry(
            "D_(sqrt2,r)",
            NormalFormTag::FormC {
                beta: sqrt(2),
                log_r: q(1),
            }
            .canonical_desc(),
            Some(true),
            StripIrrationalAnnulus,
        ),
        entry(
            "D_1",
            DomainDesc::polyhedron(vec![below(q(1), q(0)), below(q(1), q(1))], true, true),
            Some(true),
            NoLineThm14,
        ),
        entry(
            "psi = -s^2",
            DomainDesc::parabolic(rat_int(-1), rat_int(0), rat_int(0), true),
            Some(true),
            NoLineThm16,
        ),
    ]
}

/// A random monomial map that sends every included axis onto a coordinate
/// axis, so the image is again a description in the same language.
pub fn axis_aware_map<R: Rng>(rng: &mut R, desc: &DomainDesc, bound: i64) -> MonomialMap {
    let sign = |rng: &mut R| if rng.gen_bool(0.5) { 1 } else { -1 };
    if desc.is_parabolic() {
        let matrix = AutMatrix::new(1, rng.gen_range(-bound..=bound), 0, sign(rng));
        let m1 = qr(rng.gen_range(-6..=6), rng.gen_range(1..=3));
        let m2 = qr(rng.gen_range(-6..=6), rng.gen_range(1..=3));
        return MonomialMap::new(matrix, m1, m2);
    }
    let free = rng.gen_range(-bound..=bound);
    let matrix = match (desc.axis(1), desc.axis(2)) {
        (true, true) => {
            if rng.gen_bool(0.5) {
                AutMatrix::identity()
            } else {
                AutMatrix::new(0, 1, 1, 0)
            }
        }
        (true, false) => {
            if rng.gen_bool(0.5) {
                AutMatrix::new(1, free, 0, sign(rng))
            } else {
                AutMatrix::new(0, sign(rng), 1, free)
            }
        }
        (false, true) => {
            if rng.gen_bool(0.5) {
                AutMatrix::new(sign(rng), 0, free, 1)
            } else {
                AutMatrix::new(free, 1, sign(rng), 0)
            }
        }
        (false, false) => random_unimodular(rng, bound),
    };
    let m1 = q(rng.gen_range(-2..=2));
    let m2 = q(rng.gen_range(-2..=2));
    MonomialMap::new(matrix, m1, m2)
}
