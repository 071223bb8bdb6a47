use num_complex::Complex64;
use perdist::acceptance::oracles::trig_product_quadrature;
use perdist::distributions::{from_closed_form, ClosedFormSpec, CoefficientField};
use perdist::product::{cauchy_product, cauchy_product_direct, cauchy_product_fft, ProductMethod};
use proptest::prelude::*;

fn field(dim: usize, radius: usize, values: &[f64]) -> CoefficientField {
    let mut it = values.iter().cycle();
    CoefficientField::from_fn(dim, radius, |_| Complex64::new(*it.next().unwrap(), *it.next().unwrap())).unwrap()
}

fn values() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0f64..2.0, 7..20)
}

#[test]
fn corpus_pairs_agree_across_methods() {
    let specs = [
        ClosedFormSpec::SquareWave,
        ClosedFormSpec::Sawtooth,
        ClosedFormSpec::DiracComb { dim: 1 },
        ClosedFormSpec::Harmonic { index: vec![3] },
    ];
    for a in &specs {
        for b in &specs {
            let fa = from_closed_form(a, 32).unwrap();
            let fb = from_closed_form(b, 17).unwrap();
            let d = cauchy_product(&fa, &fb, ProductMethod::Fft).unwrap();
            assert!(d.max_abs_diff(&cauchy_product(&fa, &fb, ProductMethod::Direct).unwrap()).unwrap() <= 1e-10);
        }
    }
    let f = from_closed_form(&ClosedFormSpec::square_wave_in_x(), 32).unwrap();
    let g = from_closed_form(&ClosedFormSpec::DiracComb { dim: 2 }, 20).unwrap();
    assert!(
        cauchy_product_fft(&f, &g).unwrap().max_abs_diff(&cauchy_product_direct(&f, &g).unwrap()).unwrap() <= 1e-10
    );
}

#[test]
fn comb_times_comb_is_returned_not_rejected() {
    let comb = from_closed_form(&ClosedFormSpec::DiracComb { dim: 1 }, 8).unwrap();
    let p = cauchy_product_direct(&comb, &comb).unwrap();
    assert_eq!(p.radius(), 16);
    assert_eq!(p.get(&[0]), Complex64::new(17.0, 0.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn direct_product_commutes(dim in 1usize..=2, r1 in 0usize..=6, r2 in 0usize..=6, v in values(), w in values()) {
        let a = field(dim, r1, &v);
        let b = field(dim, r2, &w);
        prop_assert_eq!(cauchy_product_direct(&a, &b).unwrap(), cauchy_product_direct(&b, &a).unwrap());
    }

    #[test]
    fn bilinear(dim in 1usize..=2, r in 1usize..=5, v in values(), w in values(), u in values(), re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let (a, b, c) = (field(dim, r, &v), field(dim, r, &w), field(dim, r, &u));
        let lam = Complex64::new(re, im);
        let lhs = cauchy_product_direct(&a.scaled(lam).add(&b).unwrap(), &c).unwrap();
        let rhs = cauchy_product_direct(&a, &c).unwrap().scaled(lam).add(&cauchy_product_direct(&b, &c).unwrap()).unwrap();
        let scale = rhs.data().iter().map(|c| c.norm()).fold(1.0, f64::max);
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-12 * scale);
    }

    #[test]
    fn fft_matches_direct(dim in 1usize..=2, r1 in 0usize..=12, r2 in 0usize..=12, v in values(), w in values()) {
        let a = field(dim, r1, &v);
        let b = field(dim, r2, &w);
        let d = cauchy_product_direct(&a, &b).unwrap();
        prop_assert!(cauchy_product_fft(&a, &b).unwrap().max_abs_diff(&d).unwrap() <= 1e-10);
    }

    #[test]
    fn matches_pointwise_product_of_partial_sums(r1 in 1usize..=16, r2 in 1usize..=16, v in values(), w in values()) {
        let a = field(1, r1, &v);
        let b = field(1, r2, &w);
        let d = cauchy_product_direct(&a, &b).unwrap();
        for (k, c) in trig_product_quadrature(&a, &b) {
            prop_assert!((d.get(&[k]) - c).norm() <= 1e-10);
        }
    }
}
