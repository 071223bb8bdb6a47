use num_complex::Complex64;
use perdist::compat::{check_compatibility, cone_sum, estimate_decay_exponents};
use perdist::cones::LatticeCone;
use perdist::distributions::{from_closed_form, weighted_trace, ClosedFormSpec};
use perdist::product::cauchy_product_fft;
use perdist::trace::{dyadic_radii, Verdict};
use proptest::prelude::*;

fn supported(cone: &LatticeCone, inside: f64, outside: f64, radius: usize) -> perdist::distributions::CoefficientField {
    from_closed_form(
        &ClosedFormSpec::ConeSupported { cone: cone.clone(), inside_exp: inside, outside_exp: outside },
        radius,
    )
    .unwrap()
}

#[test]
fn compatible_pair_yields_convergent_product() {
    let (g1, g2) = LatticeCone::standard_pair();
    let f1 = supported(&g1, 0.5, -9.0, 64);
    let f2 = supported(&g2, 0.0, -10.0, 64);
    let r = check_compatibility(&f1, &[g1], &f2, &[g2]).unwrap();
    assert!(r.verdict && r.gamma >= 1.0);
    let tau = r.tau.unwrap();
    let t = weighted_trace(&cauchy_product_fft(&f1, &f2).unwrap(), -tau, &dyadic_radii(128)).unwrap();
    assert_eq!(t.verdict, Verdict::Convergent);
}

#[test]
fn same_cone_pair_fails() {
    let (g1, _) = LatticeCone::standard_pair();
    let f = supported(&g1, 0.0, -10.0, 32);
    let r = check_compatibility(&f, std::slice::from_ref(&g1), &f, &[g1.negated()]).unwrap();
    assert!(!r.verdict && r.tau.is_none() && !r.failures.is_empty());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn inside_plus_complement_is_total(s in -2.0f64..1.0, inside in -2.0f64..1.0, outside in -3.0f64..0.0) {
        let (g1, _) = LatticeCone::standard_pair();
        let a = supported(&g1, inside, outside, 32);
        let radii = dyadic_radii(32);
        let i = cone_sum(&a, &g1, s, &radii, false).unwrap();
        let o = cone_sum(&a, &g1, s, &radii, true).unwrap();
        let t = weighted_trace(&a, s, &radii).unwrap();
        for ((x, y), z) in i.sums.iter().zip(&o.sums).zip(&t.sums) {
            prop_assert!((x + y - z).abs() <= 1e-10 * z);
        }
    }

    #[test]
    fn divergence_persists_as_s_grows(inside in -1.0f64..1.0, s in -3.0f64..1.0, ds in 0.0f64..2.0) {
        let (g1, _) = LatticeCone::standard_pair();
        let a = supported(&g1, inside, -6.0, 64);
        let radii = dyadic_radii(64);
        if cone_sum(&a, &g1, s, &radii, false).unwrap().verdict == Verdict::Divergent {
            prop_assert_eq!(cone_sum(&a, &g1, s + ds, &radii, false).unwrap().verdict, Verdict::Divergent);
        }
    }

    #[test]
    fn scaling_changes_nothing(re in -5.0f64..5.0, im in -5.0f64..5.0, inside in -0.5f64..1.0) {
        prop_assume!(re.hypot(im) > 1e-3);
        let (g1, _) = LatticeCone::standard_pair();
        let a = supported(&g1, inside, -9.0, 32);
        let b = a.scaled(Complex64::new(re, im));
        let p = estimate_decay_exponents(&a, &g1).unwrap();
        let q = estimate_decay_exponents(&b, &g1).unwrap();
        prop_assert_eq!((p.alpha, p.beta), (q.alpha, q.beta));
        prop_assert_eq!(p.inside_trace.verdict, q.inside_trace.verdict);
    }
}
