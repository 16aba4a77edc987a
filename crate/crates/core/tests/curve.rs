use core::f64::consts::PI;

use curvequant_core::curve::{make_segment, make_unit_circle, make_unit_triangle_boundary, mean_and_variance};
use curvequant_core::Point;

#[test]
fn landmark_points() {
    let circle = make_unit_circle();
    assert!(circle.curve().point_at(0.0).unwrap().dist(Point::new(1.0, 0.0)) < 1e-15);
    assert!((circle.curve().length() - 2.0 * PI).abs() < 1e-12);
    let tri = make_unit_triangle_boundary();
    let c = tri.curve();
    assert!(c.is_closed());
    assert!((c.length() - 3.0).abs() < 1e-12);
    assert!(c.point_at(1.0).unwrap().dist(Point::new(1.0, 0.0)) < 1e-15);
    assert!(c.point_at(2.0).unwrap().dist(Point::new(0.5, 3f64.sqrt() / 2.0)) < 1e-15);
    assert!(c.point_at(2.5).unwrap().dist(Point::new(0.25, 3f64.sqrt() / 4.0)) < 1e-15);
    assert!(c.point_at(3.0 + 1e-9).is_err());
    assert!(c.point_at(-1e-9).is_err());
    assert!(!make_segment(0.0, 1.0).unwrap().curve().is_closed());
}

#[test]
fn arc_probability_is_angle_over_two_pi() {
    let circle = make_unit_circle();
    for th in [0.1, 1.0, PI, 5.0] {
        assert!((circle.measure(0.3, 0.3 + th).unwrap() - th / (2.0 * PI)).abs() < 1e-15);
    }
    assert!((circle.total_mass() - 1.0).abs() < 1e-12);
}

#[test]
fn triangle_mean_and_variance() {
    let tri = make_unit_triangle_boundary();
    let (m, v) = mean_and_variance(&tri);
    assert!(m.dist(Point::new(0.5, 3f64.sqrt() / 6.0)) < 1e-9);
    assert!((v - 1.0 / 6.0).abs() < 1e-9);
    let (m2, v2) = mean_and_variance(&tri.with_resolution(2 * tri.node_count()).unwrap());
    assert!(m.dist(m2) < 1e-9 && (v - v2).abs() < 1e-9);
    let (m, v) = mean_and_variance(&make_segment(-1.0, 5.0).unwrap());
    assert!((m.x - 2.0).abs() < 1e-12 && (v - 3.0).abs() < 1e-9);
}
