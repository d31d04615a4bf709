use ri_entropy::oracle::{minimize_kl_over_polygon_with, OracleOptions};
use ri_entropy::{
    minimize_kl_ppt, ppt_polygon, ree_3xn_odd, verify_closed_form, Family, NormalizedCoords,
    OptimumPoint, Spin,
};

#[test]
fn identical_seeds_give_identical_reports() {
    let run = || verify_closed_form::<f64>(Family::ThreeByNOdd { n: 7 }, 60, 42, 1e-6).unwrap();
    let (a, b) = (run(), run());
    assert_eq!(a, b);
    assert_eq!(a.max_abs_diff.to_bits(), b.max_abs_diff.to_bits());
    assert!(a.passed);
}

#[test]
fn different_seeds_sample_different_states() {
    let a = verify_closed_form::<f64>(Family::TwoByN { j: Spin::ONE }, 50, 1, 1e-6).unwrap();
    let b = verify_closed_form::<f64>(Family::TwoByN { j: Spin::ONE }, 50, 2, 1e-6).unwrap();
    assert!(a.passed && b.passed);
    assert_ne!(a.worst_state, b.worst_state);
}

#[test]
fn coarse_grid_is_rescued_by_edge_search() {
    let opts = OracleOptions {
        grid: 4,
        ..OracleOptions::default()
    };
    let polygon = ppt_polygon::<f64>(9).unwrap();
    for (x, y) in [(0.9, 0.05), (0.1, 0.85), (0.5, 0.0), (0.2, 0.75)] {
        let c = NormalizedCoords::new(x, y).unwrap();
        let r = minimize_kl_over_polygon_with(9, c, &polygon, &opts).unwrap();
        let closed = ree_3xn_odd(9, c).unwrap().value;
        assert!((r.optimum_value - closed).abs() < 1e-9, "({x}, {y})");
        assert!(r.converged);
        assert!(matches!(r.optimum_point, OptimumPoint::Plane(_)));
    }
}

#[test]
fn single_precision_oracle() {
    let c = NormalizedCoords::<f32>::new(1.0, 0.0).unwrap();
    let r = minimize_kl_ppt(5, c).unwrap();
    assert!((r.optimum_value - (5.0_f32 / 3.0).ln()).abs() < 1e-4);
}
