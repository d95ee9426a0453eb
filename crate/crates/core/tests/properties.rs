//! Cross-module invariants on randomized domains.

mod common;

use num_integer::Integer;
use num_traits::One;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use reinhardt::automorphisms::{compactness, is_automorphism, AutFamily};
use reinhardt::domain::{DomainError, Hyperbolicity};
use reinhardt::exact_arith::{rat, rat_int};
use reinhardt::normal_form::{normal_form, strip_type, NormalFormTag};
use reinhardt::pell::{pell_generator, AutMatrix};
use reinhardt::proper_maps::{proper_annuli, proper_pointed, Certificate};
use reinhardt::schema::{parse_domain_file, write_domain_file};
use reinhardt::verdicts::serre_verdict;
use reinhardt::{DomainDesc, MonomialConstraint, MonomialMap, QuadExt};

fn random_value<R: Rng>(rng: &mut R, d: u64) -> QuadExt {
    let a = rat(rng.gen_range(-4..=4), rng.gen_range(1..=3));
    if rng.gen_bool(0.4) {
        return QuadExt::from_rat(a);
    }
    let b = rat(
        rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 },
        rng.gen_range(1..=2),
    );
    QuadExt::new(a, b, d).unwrap()
}

/// A valid strip domain in random coordinates.
fn random_strip<R: Rng>(rng: &mut R) -> DomainDesc {
    loop {
        let d = [2, 3, 5][rng.gen_range(0..3)];
        let beta = random_value(rng, d);
        let model = match rng.gen_range(0..3) {
            0 => DomainDesc::polyhedron(vec![below(q(1), beta.clone())], true, !beta.is_negative()),
            1 => DomainDesc::polyhedron(vec![below(q(1), beta.abs())], false, beta.is_zero()),
            _ => {
                let width = qr(rng.gen_range(1..=5), rng.gen_range(1..=2));
                DomainDesc::polyhedron(
                    vec![MonomialConstraint::between(
                        q(1),
                        beta.abs(),
                        -width.clone(),
                        width,
                    )],
                    false,
                    beta.is_zero(),
                )
            }
        };
        if model.validate().is_err() {
            continue;
        }
        if let Ok(image) = model.transform(&axis_aware_map(rng, &model, 4)) {
            return image;
        }
    }
}

/// A valid polyhedral domain with two or three random constraints.
fn random_polyhedron<R: Rng>(rng: &mut R) -> DomainDesc {
    loop {
        let d = [2, 3][rng.gen_range(0..2)];
        let count = rng.gen_range(2..=3);
        let constraints = (0..count)
            .map(|_| {
                let upper = random_value(rng, d);
                MonomialConstraint::below(random_value(rng, d), random_value(rng, d), upper)
            })
            .collect();
        let desc = DomainDesc::polyhedron(constraints, rng.gen_bool(0.5), rng.gen_bool(0.5));
        if desc.validate().is_ok() {
            return desc;
        }
    }
}

fn random_domain<R: Rng>(rng: &mut R) -> DomainDesc {
    match rng.gen_range(0..4) {
        0 | 1 => random_strip(rng),
        2 => random_polyhedron(rng),
        _ => DomainDesc::parabolic(
            rat(-rng.gen_range(1..=4), rng.gen_range(1..=3)),
            rat_int(rng.gen_range(-2..=2)),
            rat_int(0),
            rng.gen_bool(0.5),
        ),
    }
}

fn swap() -> MonomialMap {
    MonomialMap::linear(AutMatrix::new(0, 1, 1, 0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transform_round_trips(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let desc = random_domain(&mut rng);
        let map = axis_aware_map(&mut rng, &desc, 5);
        match desc.transform(&map) {
            Ok(image) => {
                prop_assert!(image.validate().is_ok());
                let back = image.transform(&map.inverse().unwrap()).unwrap();
                prop_assert!(back.same_domain(&desc).unwrap(), "{desc} vs {back}");
            }
            Err(DomainError::AxisAmbiguity { .. }) | Err(DomainError::UnsupportedMap(_)) => {}
            Err(e) => prop_assert!(false, "{desc} under {map}: {e}"),
        }
    }

    #[test]
    fn no_line_means_hyperbolic_core(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let desc = random_polyhedron(&mut rng);
        if desc.contains_line().is_none() {
            prop_assert_eq!(desc.dhyp().hyperbolicity(), Hyperbolicity::Hyperbolic);
        }
    }

    #[test]
    fn axis_slices_follow_the_swap(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let desc = random_polyhedron(&mut rng);
        let swapped = desc.transform(&swap()).unwrap();
        let (a, b) = (desc.axis_slices(), swapped.axis_slices());
        for i in 0..2 {
            let (x, y) = (&a.slices[i], &b.slices[1 - i]);
            prop_assert_eq!(&x.interval, &y.interval);
            prop_assert_eq!(x.includes_origin, y.includes_origin);
            prop_assert_eq!(x.hyperbolic, y.hyperbolic);
        }
        prop_assert_eq!(a.nonempty, b.nonempty);
    }

    #[test]
    fn normal_form_witness_reaches_the_model(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let desc = random_strip(&mut rng);
        let nf = normal_form(&desc).unwrap();
        prop_assert!(nf.witness.matrix.is_unimodular());
        let image = desc.transform(&nf.witness).unwrap();
        prop_assert!(image.same_domain(&nf.tag.canonical_desc()).unwrap(), "{desc}: {image} vs {}", nf.tag);
        if let NormalFormTag::FormE { p, q } | NormalFormTag::FormF { p, q } = &nf.tag {
            prop_assert!(p.gcd(q).is_one());
        }
    }

    #[test]
    fn strip_invariants_under_equivalence(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let desc = random_strip(&mut rng);
        let map = axis_aware_map(&mut rng, &desc, 5);
        let image = desc.transform(&map).unwrap();
        prop_assert_eq!(strip_type(&desc).unwrap(), strip_type(&image).unwrap());
        prop_assert_eq!(normal_form(&desc).unwrap().tag, normal_form(&image).unwrap().tag);
    }

    #[test]
    fn verdicts_invariant_under_equivalence(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let desc = random_domain(&mut rng);
        let map = axis_aware_map(&mut rng, &desc, 5);
        let Ok(image) = desc.transform(&map) else { return Ok(()) };
        let (a, b) = (serre_verdict(&desc).unwrap(), serre_verdict(&image).unwrap());
        prop_assert_eq!((a.in_s, a.branch), (b.in_s, b.branch));
        let key = |d: &DomainDesc| compactness(d).map(|v| (v.compact, v.reason)).ok();
        prop_assert_eq!(key(&desc), key(&image));
    }

    #[test]
    fn verdict_stable_under_coordinate_swap(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let desc = random_strip(&mut rng);
        let swapped = desc.transform(&swap()).unwrap();
        let (a, b) = (serre_verdict(&desc).unwrap(), serre_verdict(&swapped).unwrap());
        prop_assert_eq!((a.in_s, a.branch), (b.in_s, b.branch));
    }

    #[test]
    fn pell_powers_scale_the_core(n in 1u32..4, a in -3i64..=3, p in 0usize..3, sign in prop::bool::ANY) {
        let alpha = QuadExt::new(rat(a, 2), rat_int(if sign { 1 } else { -1 }), [2, 3, 7][p]).unwrap();
        let alpha = alpha.abs();
        let (_, _, m) = pell_generator(&alpha).unwrap();
        let m = m.pow(n);
        // v o M = (k1 + alpha l1) v for v = t + alpha s, checked on the linear coefficients
        let lead = m.multiplier(&alpha);
        let row = (
            &QuadExt::from_bigint(m.k1.clone()) + &(&alpha * &QuadExt::from_bigint(m.l1.clone())),
            &QuadExt::from_bigint(m.k2.clone()) + &(&alpha * &QuadExt::from_bigint(m.l2.clone())),
        );
        prop_assert_eq!(&row.0, &lead);
        prop_assert_eq!(&row.1, &(&lead * &alpha));
        let model = dstar(alpha.clone());
        let shift = qr(a, 3);
        let torus = MonomialMap::new(m.clone(), -(&alpha * &shift), shift);
        prop_assert!(is_automorphism(&model, &torus).holds());
        let off = MonomialMap::new(m, q(1), q(0));
        prop_assert!(!is_automorphism(&model, &off).holds());
    }

    #[test]
    fn sampled_family_members_are_automorphisms(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let desc = random_domain(&mut rng);
        let Ok(group) = reinhardt::automorphisms::aut_group(&desc) else { return Ok(()) };
        for family in &group.families {
            if matches!(family, AutFamily::Functional(_) | AutFamily::FullGroup(_)) {
                continue;
            }
            let member = group.to_source(&family.sample(&mut rng));
            let check = is_automorphism(&desc, &member);
            prop_assert!(check.holds(), "{desc}: {member}: {:?}", check.failure);
        }
    }

    #[test]
    fn unimodular_pointed_certificates_invert(seed in any::<u64>(), p in 0usize..3) {
        let beta = QuadExt::sqrt([2, 3, 5][p]).unwrap();
        let mut m = reinhardt::automorphisms::random_unimodular(&mut ChaCha8Rng::seed_from_u64(seed), 4);
        if m.multiplier(&beta).is_negative() {
            m = m.mul(&AutMatrix::new(-1, 0, 0, -1));
        }
        let lead = m.multiplier(&beta);
        let (k2, l2) = (QuadExt::from_bigint(m.k2.clone()), QuadExt::from_bigint(m.l2.clone()));
        let alpha = (&k2 + &(&l2 * &beta)).checked_div(&lead).unwrap();
        prop_assert!(!alpha.is_rational());
        let forward = proper_pointed(&alpha, &beta, 4).unwrap();
        prop_assert!(forward.exists);
        if let Certificate::Pointed { matrix } = &forward.certificate {
            if matrix.is_unimodular() {
                prop_assert!(proper_pointed(&beta, &alpha, 4).unwrap().exists);
            }
        }
    }

    #[test]
    fn annulus_self_powers_exist(m in 1i64..20, num in 1i64..6, den in 1i64..4, p in 0usize..3) {
        let alpha = QuadExt::sqrt([2, 3, 5][p]).unwrap();
        let log_r = qr(num, den);
        let ans = proper_annuli(&alpha, &log_r, &alpha, &log_r.scale(&rat_int(m))).unwrap();
        prop_assert!(ans.exists);
        prop_assert_eq!(&ans.families[0].matrix, &AutMatrix::new(m, 0, 0, m));
    }

    #[test]
    fn schema_round_trips(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let desc = random_domain(&mut rng);
        let back = parse_domain_file(write_domain_file(&desc).as_bytes()).unwrap();
        prop_assert_eq!(back, desc);
    }
}
