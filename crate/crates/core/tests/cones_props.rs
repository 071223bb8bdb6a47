use perdist::acceptance::oracles::{member, naive_count};
use perdist::cones::{
    check_compact_containment, cone_separation_constant, disjoint_after_negation, intersection_count, HalfSpace,
    LatticeCone,
};
use perdist::Error;
use proptest::prelude::*;

#[test]
fn standard_pair_is_disjoint_and_countable() {
    let (g1, g2) = LatticeCone::standard_pair();
    let d = disjoint_after_negation(&g1, &g2).unwrap();
    assert!(d.disjoint && d.certified && !d.touching);
    assert_eq!(intersection_count(&g1, &g2, &[0, 0]).unwrap(), 0);
    assert!(intersection_count(&g1, &g2, &[10, 10]).unwrap() > 0);
}

#[test]
fn opposite_cones_are_not_disjoint() {
    let (g1, _) = LatticeCone::standard_pair();
    let d = disjoint_after_negation(&g1, &g1.negated()).unwrap();
    assert!(!d.disjoint);
    assert!(matches!(intersection_count(&g1, &g1.negated(), &[3, 0]), Err(Error::UnboundedRegion)));
}

#[test]
fn nested_circular_cones() {
    let inner = LatticeCone::circular(&[1.0, 0.0], 15f64.to_radians()).unwrap();
    let outer = LatticeCone::circular(&[1.0, 0.0], 30f64.to_radians()).unwrap();
    assert!(check_compact_containment(&inner, &outer).unwrap() > 0.0);
    assert!(check_compact_containment(&outer, &inner).is_err());
    let c = cone_separation_constant(&inner, &outer, 50).unwrap();
    assert!(c > 0.2 && c < 0.3, "{c}");
}

#[test]
fn cone_file_round_trip_and_defaults() {
    let text = r#"{"dim":2,"halfspaces":[{"normal":[1,0],"strict":true},{"normal":[1,-2],"strict":false}]}"#;
    let c = LatticeCone::from_json(text).unwrap();
    assert_eq!(c.apex(), &[0, 0]);
    assert_eq!(LatticeCone::from_json(&c.to_json().unwrap()).unwrap(), c);
    assert!(LatticeCone::from_json(r#"{"dim":2,"halfspaces":[{"normal":[0,0],"strict":true}]}"#).is_err());
    let h = &c.halfspaces()[0];
    assert_eq!(h, &HalfSpace { normal: vec![1, 0], strict: true });
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn counts_are_symmetric_and_match_brute_force(x in -40i64..=40, y in -40i64..=40) {
        let (g1, g2) = LatticeCone::standard_pair();
        let c = intersection_count(&g1, &g2, &[x, y]).unwrap();
        prop_assert_eq!(c, intersection_count(&g2, &g1, &[x, y]).unwrap());
        prop_assert_eq!(c, naive_count(&g1, &g2, &[x, y]));
    }

    #[test]
    fn membership_is_exact(axis in 0.0f64..std::f64::consts::TAU, half in 0.1f64..1.2, x in -300i64..=300, y in -300i64..=300) {
        let c = LatticeCone::circular(&[axis.cos(), axis.sin()], half).unwrap();
        prop_assert_eq!(c.contains(&[x, y]), member(&c, &[x, y]));
        prop_assert_eq!(c.negated().contains(&[-x, -y]), c.contains(&[x, y]));
    }
}
