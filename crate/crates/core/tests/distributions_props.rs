use num_complex::Complex64;
use perdist::distributions::{
    from_closed_form, order_estimate, periodize_localized, ClosedFormSpec, CoefficientField, GridSamples,
};
use perdist::trace::dyadic_radii;
use perdist::window::LocalizationWindow;
use proptest::prelude::*;

#[test]
fn comb_orders() {
    let c1 = from_closed_form(&ClosedFormSpec::DiracComb { dim: 1 }, 128).unwrap();
    assert_eq!(order_estimate(&c1, &dyadic_radii(128)).unwrap().0, 0.75);
    let c2 = from_closed_form(&ClosedFormSpec::DiracComb { dim: 2 }, 128).unwrap();
    assert_eq!(order_estimate(&c2, &dyadic_radii(128)).unwrap().0, 1.25);
}

#[test]
fn full_window_periodization_reproduces_coefficients() {
    let spec = ClosedFormSpec::Harmonic { index: vec![2, -3] };
    let samples = GridSamples::from_fn(2, 64, |t| spec.sample(t).unwrap()).unwrap();
    let got = periodize_localized(&samples, &LocalizationWindow::full(2), 16).unwrap();
    let expect = from_closed_form(&spec, 16).unwrap();
    assert!(got.max_abs_diff(&expect).unwrap() <= 1e-8);
}

#[test]
fn json_file_round_trip() {
    let dir = std::env::temp_dir().join(format!("perdist-json-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("f.json");
    let f = from_closed_form(&ClosedFormSpec::Sawtooth, 33).unwrap();
    f.write_json(&path).unwrap();
    assert_eq!(CoefficientField::read_json(&path).unwrap(), f);
    std::fs::write(&path, "{\"dim\":1,\"radius\":2,\"coeffs\":[1,2,3]}").unwrap();
    assert!(CoefficientField::read_json(&path).is_err());
    std::fs::remove_dir_all(&dir).unwrap();
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn json_round_trip_is_bit_exact(dim in 1usize..=3, radius in 0usize..=3, bits in prop::collection::vec(any::<u64>(), 2..40)) {
        let vals: Vec<f64> = bits.iter().map(|b| f64::from_bits(*b)).map(|x| if x.is_finite() { x } else { 0.5 }).collect();
        let mut it = vals.iter().cycle();
        let f = CoefficientField::from_fn(dim, radius, |_| Complex64::new(*it.next().unwrap(), *it.next().unwrap())).unwrap();
        let back = CoefficientField::from_json(&f.to_json().unwrap()).unwrap();
        for (a, b) in f.data().iter().zip(back.data()) {
            prop_assert_eq!(a.re.to_bits(), b.re.to_bits());
            prop_assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
    }

    #[test]
    fn enlarging_coefficients_never_lowers_order(growth in 0.0f64..1.5, bump in 0.0f64..1.0) {
        let base = from_closed_form(&ClosedFormSpec::DiracComb { dim: 1 }, 128).unwrap();
        let mut big = base.clone();
        let shape = big.shape();
        for (i, v) in big.data_mut().iter_mut().enumerate() {
            let n = (shape.norm_sq_at(i) as f64).sqrt();
            *v *= bump + n.max(1.0).powf(growth);
        }
        let radii = dyadic_radii(128);
        let k_base = order_estimate(&base, &radii).unwrap().0;
        if let Ok((k_big, _)) = order_estimate(&big, &radii) {
            prop_assert!(k_big >= k_base);
        }
    }
}
