//! Sampling checks of the two geometric estimates behind the upper bound:
//! a single twist arc has distortion at most `2πt`, and a pair of adjacent
//! arcs at most `4πt`.
//!
//! Both checks enumerate vertex pairs of a discretized model. Vertex pairs
//! of a polyline inscribed in a smooth arc see the exact chord and a
//! slightly short arclength, so the sampled maximum never exceeds the
//! smooth value.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{ArcKind, Point3, PolyCurve};
use crate::par::{self, Exec};

/// Produces the canonical twist strand: a helix on the cylinder of radius
/// 1/2 about the `z` axis, from `(-1/2, 0, 0)` down to `z = -1`, turning
/// through `π t` right-handedly with `samples` segments per half-twist.
pub type HelixGenerator = fn(u32, usize) -> Vec<Point3>;

pub fn helix(t: u32, samples: usize) -> Vec<Point3> {
    let segs = (t as usize * samples).max(1);
    let turn = PI * t as f64;
    (0..=segs)
        .map(|k| {
            let u = k as f64 / segs as f64;
            let a = PI - turn * u;
            Point3::new(0.5 * a.cos(), 0.5 * a.sin(), -u)
        })
        .collect()
}

/// A deliberately broken generator that squashes the helix to 1% of its
/// height. Used to exercise the failure path of the checks.
pub fn squashed_helix(t: u32, samples: usize) -> Vec<Point3> {
    helix(t, samples)
        .into_iter()
        .map(|p| Point3::new(p.x, p.y, 0.01 * p.z))
        .collect()
}

/// Exact arclength of the smooth twist strand with `t` half-twists.
pub fn helix_length(t: u32) -> f64 {
    (PI * t as f64 / 2.0).hypot(1.0)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClaimCheck {
    pub claim: &'static str,
    pub half_twists: u32,
    pub bound: f64,
    pub max_ratio: f64,
    /// The vertex pair attaining `max_ratio`.
    pub witness: [Point3; 2],
    pub pass: bool,
}

#[derive(Clone, Copy, Debug)]
struct Best {
    ratio: f64,
    pair: (usize, usize),
}

fn better(a: Best, b: Best) -> Best {
    if b.ratio > a.ratio || (b.ratio == a.ratio && b.pair < a.pair) {
        b
    } else {
        a
    }
}

const NONE: Best = Best {
    ratio: f64::NEG_INFINITY,
    pair: (usize::MAX, usize::MAX),
};

/// Largest `arclength / chord` over vertex pairs `i ∈ xs`, `j ∈ ys`, where
/// `arc(i, j)` supplies the intrinsic distance. Coincident pairs are skipped.
fn max_pair_ratio<F>(
    exec: Exec,
    points: &[Point3],
    xs: std::ops::Range<usize>,
    ys: std::ops::Range<usize>,
    arc: F,
) -> Best
where
    F: Fn(usize, usize) -> f64 + Sync,
{
    par::map_reduce(
        exec,
        xs,
        NONE,
        |i| {
            let mut best = NONE;
            for j in ys.clone() {
                if j == i {
                    continue;
                }
                let chord = points[i].distance(points[j]);
                if chord > 1e-12 {
                    best = better(
                        best,
                        Best {
                            ratio: arc(i, j) / chord,
                            pair: (i, j),
                        },
                    );
                }
            }
            best
        },
        better,
    )
}

fn prefix_lengths(points: &[Point3]) -> Vec<f64> {
    let mut acc = vec![0.0; points.len()];
    for k in 1..points.len() {
        acc[k] = acc[k - 1] + points[k - 1].distance(points[k]);
    }
    acc
}

fn open_chain_max(exec: Exec, points: &[Point3], xs: std::ops::Range<usize>, ys: std::ops::Range<usize>) -> Best {
    let acc = prefix_lengths(points);
    max_pair_ratio(exec, points, xs, ys, |i, j| (acc[j] - acc[i]).abs())
}

fn validate(t: u32, samples: usize) -> Result<()> {
    if t == 0 {
        return Err(Error::InvalidConfig("half-twist count must be positive".into()));
    }
    if samples < 8 {
        return Err(Error::InvalidConfig(format!(
            "need at least 8 samples per half-twist, got {samples}"
        )));
    }
    Ok(())
}

/// Maximum sampled ratio over pairs on a single strand, checked against
/// `2πt`.
pub fn check_helix_claim(t: u32, samples: usize, generator: HelixGenerator) -> Result<ClaimCheck> {
    validate(t, samples)?;
    let pts = generator(t, samples);
    let best = open_chain_max(Exec::default(), &pts, 0..pts.len(), 0..pts.len());
    let bound = 2.0 * PI * t as f64;
    Ok(ClaimCheck {
        claim: "helix",
        half_twists: t,
        bound,
        max_ratio: best.ratio,
        witness: [pts[best.pair.0], pts[best.pair.1]],
        pass: best.ratio <= bound,
    })
}

/// A chain of the arc types that meet in a plat: a bridge, a right-handed
/// strand, the left-handed strand it runs into on the diagonal cylinder
/// below, and a straight unit arc. Returns the points and the first vertex
/// of each arc (the last entry is the final vertex).
pub fn adjacent_chain(t: u32, samples: usize, generator: HelixGenerator) -> (Vec<Point3>, Vec<usize>) {
    let mut pts = Vec::new();
    let mut starts = Vec::new();

    let segs = samples.max(16);
    starts.push(0);
    for k in 0..segs {
        let a = PI * (1.0 - k as f64 / segs as f64);
        pts.push(Point3::new(-1.0 + 0.5 * a.cos(), 0.0, 0.5 * a.sin()));
    }

    let first = generator(t, samples);
    starts.push(pts.len());
    pts.extend_from_slice(&first[..first.len() - 1]);

    // The strand leaves the first cylinder at plan angle 0 or π and enters
    // the next one at the opposite side. Mirroring flips the handedness.
    let exit = *first.last().expect("generator returned no points");
    let second: Vec<Point3> = if exit.x > 0.0 {
        generator(t, samples)
            .into_iter()
            .map(|p| Point3::new(p.x + 1.0, -p.y, p.z - 1.0))
            .collect()
    } else {
        generator(t, samples)
            .into_iter()
            .map(|p| Point3::new(-p.x - 1.0, p.y, p.z - 1.0))
            .collect()
    };
    starts.push(pts.len());
    pts.extend_from_slice(&second[..second.len() - 1]);

    let end = *second.last().expect("generator returned no points");
    starts.push(pts.len());
    pts.push(end);
    pts.push(end - Point3::new(0.0, 0.0, 1.0));
    starts.push(pts.len() - 1);
    (pts, starts)
}

/// Maximum sampled ratio over pairs lying on two consecutive arcs of
/// [`adjacent_chain`], checked against `4πt`.
pub fn check_adjacent_claim(t: u32, samples: usize, generator: HelixGenerator) -> Result<ClaimCheck> {
    validate(t, samples)?;
    let (pts, starts) = adjacent_chain(t, samples, generator);
    let exec = Exec::default();
    let best = (0..starts.len() - 2)
        .map(|a| {
            open_chain_max(
                exec,
                &pts,
                starts[a]..starts[a + 1] + 1,
                starts[a + 1]..starts[a + 2] + 1,
            )
        })
        .fold(NONE, better);
    let bound = 4.0 * PI * t as f64;
    Ok(ClaimCheck {
        claim: "adjacent",
        half_twists: t,
        bound,
        max_ratio: best.ratio,
        witness: [pts[best.pair.0], pts[best.pair.1]],
        pass: best.ratio <= bound,
    })
}

/// Sampled maximum over vertex pairs of a built plat lying on two arcs that
/// follow each other along the curve, using the intrinsic distance of the
/// closed curve. Returns `(ratio, vertex_i, vertex_j)`.
pub fn plat_adjacent_max(curve: &PolyCurve) -> Option<(f64, usize, usize)> {
    let arcs = curve.arcs()?;
    let m = curve.num_vertices();
    let pts = pts_wrapped(curve.vertices());
    let cum = curve.cum_len();
    let total = curve.total_len();
    let exec = Exec::default();
    let mut best = NONE;
    for (a, x) in arcs.iter().enumerate() {
        let y = &arcs[(a + 1) % arcs.len()];
        // Vertex ranges include the far endpoint, which may wrap to 0.
        let xs = x.edges[0]..x.edges[1] + 1;
        let ys = y.edges[0]..y.edges[1] + 1;
        let local = max_pair_ratio(exec, &pts, xs, ys, |i, j| {
            let d = (cum[i] - cum[j]).abs();
            d.min(total - d)
        });
        best = better(
            best,
            Best {
                ratio: local.ratio,
                pair: (local.pair.0 % m, local.pair.1 % m),
            },
        );
    }
    Some((best.ratio, best.pair.0, best.pair.1))
}

fn pts_wrapped(pts: &[Point3]) -> Vec<Point3> {
    let mut v = pts.to_vec();
    v.push(pts[0]);
    v
}

/// Sampled maximum over vertex pairs on each twist arc of a built plat,
/// paired with that arc's exact smooth value `√((π t / 2)² + 1)`.
pub fn plat_twist_maxima(curve: &PolyCurve) -> Vec<(f64, f64)> {
    let Some(arcs) = curve.arcs() else { return Vec::new() };
    let pts = pts_wrapped(curve.vertices());
    let twists: Vec<_> = arcs.iter().filter(|a| a.kind == ArcKind::Twist).collect();
    par::map_collect(Exec::default(), 0..twists.len(), |k| {
        let tag = twists[k];
        let range = tag.edges[0]..tag.edges[1] + 1;
        let best = open_chain_max(Exec::Sequential, &pts, range.clone(), range);
        (best.ratio, tag.nominal_length)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plat::{build_plat, make_alternating_jm_spec};

    #[test]
    fn helix_matches_length_formula() {
        let pts = helix(3, 64);
        let len: f64 = pts.windows(2).map(|w| w[0].distance(w[1])).sum();
        assert!((len - helix_length(3)).abs() / helix_length(3) < 1e-3);
        assert!(pts[0].distance(Point3::new(-0.5, 0.0, 0.0)) < 1e-15);
        assert!(pts.last().unwrap().distance(Point3::new(0.5, 0.0, -1.0)) < 1e-12);
    }

    #[test]
    fn helix_claim_t3() {
        let check = check_helix_claim(3, 64, helix).unwrap();
        assert!(check.pass);
        assert!((check.max_ratio - helix_length(3)).abs() / helix_length(3) < 1e-3);
        assert!((check.bound - 6.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn adjacent_claim_t3() {
        let check = check_adjacent_claim(3, 32, helix).unwrap();
        assert!(check.pass, "{check:?}");
        assert!(check.max_ratio >= helix_length(3) * 0.99);
    }

    #[test]
    fn chain_joins_continuously() {
        for t in [3, 4] {
            let (pts, starts) = adjacent_chain(t, 16, helix);
            let step = pts[..=starts[3]]
                .windows(2)
                .map(|w| w[0].distance(w[1]))
                .fold(0.0, f64::max);
            assert!(step < 0.2, "t = {t}: gap {step}");
            assert_eq!(starts.len(), 5);
            assert_eq!(pts[starts[4]].distance(pts[starts[3]]), 1.0);
        }
    }

    #[test]
    fn squashed_generator_fails_both() {
        let one = check_helix_claim(3, 16, squashed_helix).unwrap();
        assert!(!one.pass);
        assert!(one.max_ratio > one.bound);
        assert!(!check_adjacent_claim(3, 16, squashed_helix).unwrap().pass);
    }

    #[test]
    fn plat_checks() {
        let spec = make_alternating_jm_spec(3, 13, 3).unwrap();
        let curve = build_plat(&spec, 16).unwrap();
        let (ratio, i, j) = plat_adjacent_max(&curve).unwrap();
        assert!(ratio <= 12.0 * PI, "{ratio}");
        let direct = curve.ratio(curve.cum_len()[i], curve.cum_len()[j]).unwrap().unwrap();
        assert!((direct - ratio).abs() <= 1e-9 * ratio);
        let maxima = plat_twist_maxima(&curve);
        assert_eq!(maxima.len(), 64);
        for (got, exact) in maxima {
            assert!(got <= exact * (1.0 + 1e-9));
            assert!(got >= exact * 0.99);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(check_helix_claim(0, 16, helix).is_err());
        assert!(check_adjacent_claim(3, 4, helix).is_err());
    }
}
