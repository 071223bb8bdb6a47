use num_complex::Complex64;
use perdist::cones::LatticeCone;
use perdist::distributions::CoefficientField;
use perdist::product::cauchy_product_direct;
use perdist::shiftinv::{amalgam_norm, si_product, synthesize, GridFunction, SampledGenerator, ShiftInvariantElement};
use perdist::window::cardinal_bspline;
use perdist::Error;
use proptest::prelude::*;
use std::f64::consts::PI;

fn bspline(m: usize) -> SampledGenerator {
    let h = m as f64 / 2.0;
    SampledGenerator::from_fn(32, -h, h, 0.0, |x| cardinal_bspline(m, x)).unwrap()
}

fn seq(values: &[f64]) -> CoefficientField {
    let r = values.len() / 2;
    let mut it = values.iter().cycle();
    CoefficientField::from_fn(1, r, |_| Complex64::new(*it.next().unwrap(), 0.0)).unwrap()
}

fn dtft(f: &GridFunction, xi: f64) -> Complex64 {
    let m = f.samples_per_unit as f64;
    f.values
        .iter()
        .enumerate()
        .map(|(p, v)| v * Complex64::from_polar(1.0, -2.0 * PI * xi * (f.start_index + p as i64) as f64 / m))
        .sum::<Complex64>()
        / m
}

#[test]
fn disjoint_generators_synthesize_to_the_sum() {
    let a = SampledGenerator::from_fn(32, 0.0, 0.5, 0.0, |x| x).unwrap();
    let b = SampledGenerator::from_fn(32, 0.6, 0.9, 0.0, |x| 1.0 - x).unwrap();
    let c = CoefficientField::from_parts(1, 0, vec![Complex64::new(1.0, 0.0)]).unwrap();
    let both =
        synthesize(&ShiftInvariantElement::new(vec![a.clone(), b.clone()], vec![c.clone(), c.clone()], 0.0).unwrap())
            .unwrap();
    let fa = synthesize(&ShiftInvariantElement::new(vec![a], vec![c.clone()], 0.0).unwrap()).unwrap();
    let fb = synthesize(&ShiftInvariantElement::new(vec![b], vec![c], 0.0).unwrap()).unwrap();
    for q in -40..80 {
        assert_eq!(both.at_index(q), fa.at_index(q) + fb.at_index(q));
    }
}

#[test]
fn product_smoothness_rules() {
    let one = CoefficientField::from_parts(1, 0, vec![Complex64::new(1.0, 0.0)]).unwrap();
    let g1 = ShiftInvariantElement::new(vec![bspline(2)], vec![one.clone()], 1.5).unwrap();
    let g2 = ShiftInvariantElement::new(vec![bspline(3)], vec![one], 0.5).unwrap();
    assert_eq!(si_product(&g1, &g2, None).unwrap().element.s, 0.5);

    let up = LatticeCone::at_origin(1, &[(&[1], true)]).unwrap();
    let down = LatticeCone::at_origin(1, &[(&[-1], true)]).unwrap();
    let right =
        CoefficientField::from_fn(
            1,
            64,
            |k| if k[0] > 0 { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) },
        )
        .unwrap();
    let h1 = ShiftInvariantElement::new(vec![bspline(2)], vec![right.clone()], 0.0).unwrap();
    let p = si_product(&h1, &h1, Some((std::slice::from_ref(&up), std::slice::from_ref(&up)))).unwrap();
    let tau = p.compatibility.as_ref().unwrap().tau.unwrap();
    assert_eq!(p.element.s, -tau);
    assert!(matches!(si_product(&h1, &h1, Some((std::slice::from_ref(&up), &[down]))), Err(Error::Hypothesis(_))));
    assert!(matches!(si_product(&h1, &h1, Some((&[], &[up]))), Err(Error::InvalidArgument(_))));
}

#[test]
fn grids_must_match() {
    let one = CoefficientField::from_parts(1, 0, vec![Complex64::new(1.0, 0.0)]).unwrap();
    let coarse = SampledGenerator::from_fn(16, -1.0, 1.0, 0.0, |x| cardinal_bspline(2, x)).unwrap();
    let g1 = ShiftInvariantElement::new(vec![bspline(2)], vec![one.clone()], 0.0).unwrap();
    let g2 = ShiftInvariantElement::new(vec![coarse.clone()], vec![one.clone()], 0.0).unwrap();
    assert!(matches!(si_product(&g1, &g2, None), Err(Error::GridMismatch(32, 16))));
    assert!(ShiftInvariantElement::new(vec![bspline(2), coarse], vec![one.clone(), one], 0.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn amalgam_norm_is_a_norm(a in prop::collection::vec(-3.0f64..3.0, 1..100), b in prop::collection::vec(-3.0f64..3.0, 1..100),
                             sa in -50i64..50, sb in -50i64..50, e in -3i32..=3, neg in any::<bool>()) {
        let c = if neg { -2f64.powi(e) } else { 2f64.powi(e) };
        let ga = SampledGenerator::new(16, sa, a, 0.0).unwrap();
        let gb = SampledGenerator::new(16, sb, b, 0.0).unwrap();
        let lo = sa.min(sb);
        let hi = (sa + ga.samples.len() as i64).max(sb + gb.samples.len() as i64);
        let sum = SampledGenerator::new(16, lo, (lo..hi).map(|q| ga.at_index(q) + gb.at_index(q)).collect(), 0.0).unwrap();
        prop_assert!(amalgam_norm(&sum) <= amalgam_norm(&ga) + amalgam_norm(&gb) + 1e-12);
        prop_assert_eq!(amalgam_norm(&ga.scaled(c)), c.abs() * amalgam_norm(&ga));
    }

    #[test]
    fn convolution_theorem(c1 in prop::collection::vec(-1.0f64..1.0, 1..9), c2 in prop::collection::vec(-1.0f64..1.0, 1..9),
                           m1 in 2usize..=4, m2 in 2usize..=4, xi in -6.0f64..6.0) {
        let g1 = ShiftInvariantElement::new(vec![bspline(m1)], vec![seq(&c1)], 0.0).unwrap();
        let g2 = ShiftInvariantElement::new(vec![bspline(m2)], vec![seq(&c2)], 0.0).unwrap();
        let p = si_product(&g1, &g2, None).unwrap().element;
        prop_assert_eq!(&p.coefficients[0], &cauchy_product_direct(&g1.coefficients[0], &g2.coefficients[0]).unwrap());
        let (f1, f2, f) = (synthesize(&g1).unwrap(), synthesize(&g2).unwrap(), synthesize(&p).unwrap());
        let lhs = dtft(&f, xi);
        let rhs = dtft(&f1, xi) * dtft(&f2, xi);
        let scale = f.l2_norm().max(1e-12);
        prop_assert!((lhs - rhs).norm() <= 1e-6 * scale);
    }

    #[test]
    fn csv_round_trip(v in prop::collection::vec(-1e6f64..1e6, 2..50), start in -100i64..100, m in 16usize..64) {
        let g = SampledGenerator::new(m, start, v, 0.0).unwrap();
        let back = SampledGenerator::from_csv(&g.to_csv(), 0.0).unwrap();
        prop_assert_eq!(back.samples, g.samples);
        prop_assert_eq!((back.samples_per_unit, back.start_index), (m, start));
    }
}
