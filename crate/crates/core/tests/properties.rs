use std::f64::consts::{FRAC_PI_2, PI, TAU};

use kdl_core::distortion::{corner_ratio, distortion_certified, distortion_sampled};
use kdl_core::geom::segment_min_distance;
use kdl_core::plat::{build_plat, component_count, regions_in_row};
use kdl_core::refine::{jittered_polygon, refine};
use kdl_core::{ArcKind, PlatSpec, Point3, PolyCurve, RefineConfig};
use proptest::prelude::*;

fn point() -> impl Strategy<Value = Point3> {
    (-2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64).prop_map(|(x, y, z)| Point3::new(x, y, z))
}

/// Embedded closed curves: vertices at increasing plan angles around the z
/// axis, so the plan projection is a simple star-shaped polygon.
fn star_curve(max_vertices: usize) -> impl Strategy<Value = PolyCurve> {
    (5..=max_vertices)
        .prop_flat_map(|m| prop::collection::vec((-0.4..0.4f64, 0.6..1.4f64, -0.3..0.3f64), m))
        .prop_map(|raw| {
            let m = raw.len() as f64;
            let pts = raw
                .iter()
                .enumerate()
                .map(|(k, &(da, r, z))| {
                    let a = TAU * (k as f64 + da) / m;
                    Point3::new(r * a.cos(), r * a.sin(), z)
                })
                .collect();
            PolyCurve::new(pts).unwrap()
        })
}

/// Rotation from a unit quaternion.
fn rotation() -> impl Strategy<Value = [[f64; 3]; 3]> {
    (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64)
        .prop_filter("non-degenerate quaternion", |(a, b, c, d)| {
            a * a + b * b + c * c + d * d > 0.1
        })
        .prop_map(|(a, b, c, d)| {
            let n = (a * a + b * b + c * c + d * d).sqrt();
            let (w, x, y, z) = (a / n, b / n, c / n, d / n);
            [
                [
                    1.0 - 2.0 * (y * y + z * z),
                    2.0 * (x * y - w * z),
                    2.0 * (x * z + w * y),
                ],
                [
                    2.0 * (x * y + w * z),
                    1.0 - 2.0 * (x * x + z * z),
                    2.0 * (y * z - w * x),
                ],
                [
                    2.0 * (x * z - w * y),
                    2.0 * (y * z + w * x),
                    1.0 - 2.0 * (x * x + y * y),
                ],
            ]
        })
}

fn apply(r: &[[f64; 3]; 3], scale: f64, shift: Point3, p: Point3) -> Point3 {
    let q = Point3::new(
        r[0][0] * p.x + r[0][1] * p.y + r[0][2] * p.z,
        r[1][0] * p.x + r[1][1] * p.y + r[1][2] * p.z,
        r[2][0] * p.x + r[2][1] * p.y + r[2][2] * p.z,
    );
    q * scale + shift
}

fn ternary(lo: f64, hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let (mut a, mut b) = (lo, hi);
    for _ in 0..100 {
        let m1 = a + (b - a) / 3.0;
        let m2 = b - (b - a) / 3.0;
        if f(m1) <= f(m2) {
            b = m2;
        } else {
            a = m1;
        }
    }
    f(0.5 * (a + b))
}

/// Grid of 100×100 parameter pairs, then nested ternary search on the
/// cells around the best grid point. Squared distance is convex in the two
/// parameters, so the refinement converges to the true minimum.
fn segment_oracle(p1: Point3, q1: Point3, p2: Point3, q2: Point3) -> (f64, f64) {
    let at = |u: f64, v: f64| p1.lerp(q1, u).distance(p2.lerp(q2, v));
    let n = 100;
    let mut best = (f64::INFINITY, 0, 0);
    for i in 0..n {
        for j in 0..n {
            let d = at(i as f64 / (n - 1) as f64, j as f64 / (n - 1) as f64);
            if d < best.0 {
                best = (d, i, j);
            }
        }
    }
    let h = 1.0 / (n - 1) as f64;
    let span = |k: usize| (((k as f64) - 1.0) * h).max(0.0)..=(((k as f64) + 1.0) * h).min(1.0);
    let (su, sv) = (span(best.1), span(best.2));
    let refined = ternary(*su.start(), *su.end(), |u| {
        ternary(*sv.start(), *sv.end(), |v| at(u, v))
    });
    (best.0, refined)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn arclength_is_a_metric(c in star_curve(30), a in 0.0..1.0f64, b in 0.0..1.0f64, x in 0.0..1.0f64) {
        let len = c.total_len();
        let (s, t, u) = (a * len, b * len, x * len);
        let st = c.arclength_distance(s, t).unwrap();
        prop_assert_eq!(st, c.arclength_distance(t, s).unwrap());
        prop_assert!(st <= len / 2.0 + 1e-12);
        let su = c.arclength_distance(s, u).unwrap();
        let ut = c.arclength_distance(u, t).unwrap();
        prop_assert!(st <= su + ut + 1e-12);
        prop_assert_eq!(c.arclength_distance(s, s).unwrap(), 0.0);
    }

    #[test]
    fn chord_never_exceeds_arclength(c in star_curve(30), a in 0.0..1.0f64, b in 0.0..1.0f64) {
        let len = c.total_len();
        let (s, t) = (a * len, b * len);
        prop_assert!(c.chord_distance(s, t).unwrap() <= c.arclength_distance(s, t).unwrap() + 1e-12);
    }

    #[test]
    fn vertices_reproduced(c in star_curve(30)) {
        for i in 0..c.num_vertices() {
            prop_assert_eq!(c.point_at(c.cum_len()[i]).unwrap(), c.vertices()[i]);
        }
    }

    #[test]
    fn segment_distance_matches_oracle(p1 in point(), q1 in point(), p2 in point(), q2 in point()) {
        prop_assume!(p1.distance(q1) > 1e-3 && p2.distance(q2) > 1e-3);
        let exact = segment_min_distance(p1, q1, p2, q2);
        let (grid, refined) = segment_oracle(p1, q1, p2, q2);
        prop_assert!(exact <= grid + 1e-12);
        prop_assert!((exact - refined).abs() <= 1e-6, "exact {} oracle {}", exact, refined);
    }

    #[test]
    fn clearance_under_rigid_motion(c in star_curve(40), r in rotation(), shift in point()) {
        let moved = c.transformed(|p| apply(&r, 1.0, shift, p)).unwrap();
        let (a, b) = (c.min_clearance(), moved.min_clearance());
        prop_assert!((a - b).abs() <= 1e-9 * a, "{} vs {}", a, b);
    }

    #[test]
    fn refiner_keeps_floor_and_never_worsens(seed in any::<u64>(), jitter in 0.0..0.08f64) {
        let c = jittered_polygon(32, jitter, seed).unwrap();
        let floor = 0.5 * c.min_clearance();
        let cfg = RefineConfig { iterations: 150, step: floor, clearance_floor: floor, seed, ..RefineConfig::default() };
        let out = refine(&c, &cfg).unwrap();
        prop_assert!(out.best_ratio <= out.initial_ratio);
        prop_assert!(out.min_clearance_seen >= floor);
        prop_assert!(out.curve.min_clearance() >= floor);
        prop_assert!(out.log.windows(2).all(|w| w[1].best_ratio <= w[0].best_ratio && w[0].iteration < w[1].iteration));
        prop_assert!(out.log.iter().all(|e| e.clearance >= floor));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sampled_within_certified(c in star_curve(24), n in 8usize..200, eps in 1e-3..0.1f64) {
        let cert = distortion_certified(&c, eps).unwrap();
        let sampled = distortion_sampled(&c, n).unwrap();
        prop_assert!(sampled.ratio >= 1.0);
        prop_assert!(sampled.ratio <= cert.hi + 1e-12);
        prop_assert!(cert.lo <= cert.hi && cert.hi - cert.lo <= eps);
        prop_assert!(cert.hi >= FRAC_PI_2);
    }

    #[test]
    fn tighter_eps_nests(c in star_curve(24), eps in 1e-3..0.1f64, shrink in 0.05..0.95f64) {
        let wide = distortion_certified(&c, eps).unwrap();
        let narrow = distortion_certified(&c, eps * shrink).unwrap();
        prop_assert!(narrow.lo >= wide.lo - 1e-12 && narrow.hi <= wide.hi + 1e-12);
        prop_assert!(narrow.width() <= wide.width());
    }

    #[test]
    fn similarity_invariance(c in star_curve(24), r in rotation(), shift in point(), scale in 0.1..10.0f64) {
        let moved = c.transformed(|p| apply(&r, scale, shift, p)).unwrap();
        let a = distortion_certified(&c, 1e-3).unwrap();
        let b = distortion_certified(&moved, 1e-3).unwrap();
        prop_assert!((a.lo - b.lo).abs() <= 1e-9 * a.lo, "{:?} {:?}", a, b);
        prop_assert!((a.hi - b.hi).abs() <= 1e-9 * a.hi, "{:?} {:?}", a, b);
        let w = b.witness;
        let ratio = moved.ratio(w.s, w.t).unwrap().unwrap();
        prop_assert!((ratio - a.witness.ratio).abs() <= 1e-9 * ratio);
    }

    #[test]
    fn witness_recomputes(c in star_curve(30), eps in 1e-4..0.1f64) {
        let cert = distortion_certified(&c, eps).unwrap();
        let w = cert.witness;
        let again = c.ratio(w.s, w.t).unwrap().unwrap();
        prop_assert!((again - w.ratio).abs() <= 1e-12 * w.ratio);
        prop_assert!(w.ratio >= cert.lo - 1e-12);
        let sampled = distortion_sampled(&c, 64).unwrap();
        let again = c.ratio(sampled.s, sampled.t).unwrap().unwrap();
        prop_assert!((again - sampled.ratio).abs() <= 1e-12 * sampled.ratio);
    }

    #[test]
    fn knot_parity_specs_build(seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let (b, n) = (3, 13);
        let rows = (1..=n)
            .map(|r| {
                (0..regions_in_row(b, r))
                    .map(|_| {
                        let count = if r == 1 { 3 + 2 * rng.gen_range(0..2) } else { 4 + 2 * rng.gen_range(0..2) };
                        if rng.gen_bool(0.5) { count } else { -count }
                    })
                    .collect()
            })
            .collect();
        let spec = PlatSpec::new(b, n, rows).unwrap();
        prop_assert_eq!(component_count(&spec), 1);
        let curve = build_plat(&spec, 8).unwrap();
        let arcs = curve.arcs().unwrap();
        let count = |k| arcs.iter().filter(|a| a.kind == k).count();
        prop_assert_eq!(count(ArcKind::Bridge), 2 * b);
        prop_assert_eq!(count(ArcKind::Vertical), n + 1);
        prop_assert_eq!(count(ArcKind::Twist), 2 * spec.region_count());
        prop_assert!(curve.min_clearance() > 0.0);
    }
}

/// Isosceles triangle with apex angle `phi` at the origin and unit legs.
fn wedge(phi: f64) -> PolyCurve {
    PolyCurve::new(vec![
        Point3::new(1.0, 0.0, 0.0),
        Point3::ORIGIN,
        Point3::new(phi.cos(), phi.sin(), 0.0),
    ])
    .unwrap()
}

#[test]
fn corner_formula_on_wedges() {
    for phi in [PI / 6.0, PI / 4.0, PI / 2.0, 2.0 * PI / 3.0] {
        let c = wedge(phi);
        let expected = corner_ratio(phi).max(1.0);
        // Dense pairs on the two legs meeting at the apex.
        let n = 2000;
        let len = c.total_len();
        let (apex, a_leg, b_leg) = (c.cum_len()[1], c.edge_len(0), c.edge_len(1));
        let mut local = 0.0f64;
        for i in 1..=n {
            for j in 1..=n {
                let s = apex - a_leg * i as f64 / n as f64;
                let t = apex + b_leg * j as f64 / n as f64;
                if let Some(r) = c.ratio(s.rem_euclid(len), t).unwrap() {
                    local = local.max(r);
                }
            }
        }
        assert!(
            (local - expected).abs() <= 1e-3 * expected,
            "phi {phi}: {local} vs {expected}"
        );
        let eps = 1e-6;
        let cert = distortion_certified(&c, eps).unwrap();
        assert!(cert.hi >= expected - 1e-12);
        if expected > FRAC_PI_2 * 1.2 {
            assert!(cert.lo <= expected + 1e-12 && expected <= cert.hi + 1e-12, "{cert:?}");
        }
    }
}

#[test]
fn circle_like_polygons_respect_gromov_floor() {
    for m in [16usize, 64, 256] {
        let c = jittered_polygon(m, 0.0, 0).unwrap();
        let cert = distortion_certified(&c, 1e-4).unwrap();
        let exact = (m as f64 / 2.0) * (PI / m as f64).tan();
        assert!(cert.lo >= FRAC_PI_2 - 1e-4);
        assert!(
            cert.lo <= exact + 1e-12 && exact <= cert.hi + 1e-12,
            "m = {m}: {cert:?} vs {exact}"
        );
    }
}
