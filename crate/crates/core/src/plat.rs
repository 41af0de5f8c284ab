//! Explicit embeddings of highly twisted `2b`-plat knots.
//!
//! Layout: strand position `p ∈ 0..2b` sits at plan coordinate
//! `x = p - 1/2`, `y = 0`. Row `r` (1-based) occupies `z ∈ [-r, -r + 1]`.
//! Odd rows hold `b - 1` twist regions on positions `(2j+1, 2j+2)` with
//! cylinder axis `x = 2j + 1`, leaving the outermost positions to straight
//! vertical arcs; even rows hold `b` regions on `(2j, 2j+1)` with axis
//! `x = 2j`. Every cylinder has radius 1/2 and height 1, so plan circles of
//! diagonally adjacent rows are tangent and the strands pass from one
//! cylinder to the next at the tangency points. Semicircular bridges of
//! radius 1/2 close positions `(2q, 2q+1)` above the first row and below the
//! last.
//!
//! A region with `t` half-twists carries two helices on its cylinder
//! surface whose plan angle advances by `π |t|`; positive `t` is
//! right-handed.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geom::{ArcKind, ArcTag, Point3, PolyCurve};

pub const DEFAULT_SAMPLES_PER_HALF_TWIST: usize = 16;
const MIN_BRIDGE_SEGMENTS: usize = 16;
const RADIUS: f64 = 0.5;

/// Twist data for an `n`-row plat on `2b` strands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlatSpec {
    b: usize,
    n: usize,
    /// `rows[r - 1][j - 1]` is the signed half-twist count of region `j` in
    /// row `r`.
    rows: Vec<Vec<i32>>,
}

/// Smallest integer `>= t` with the given parity.
fn at_least_with_parity(t: i32, odd: bool) -> i32 {
    if (t.rem_euclid(2) == 1) == odd {
        t
    } else {
        t + 1
    }
}

pub fn min_rows(b: usize) -> usize {
    4 * b * b.saturating_sub(2)
}

fn check_shape(b: usize, n: usize) -> Result<()> {
    if b < 3 {
        return Err(Error::InvalidSpec(format!("need b ≥ 3, got b = {b}")));
    }
    if n.is_multiple_of(2) {
        return Err(Error::InvalidSpec(format!(
            "the number of rows n must be odd, got n = {n}"
        )));
    }
    if n < min_rows(b) {
        return Err(Error::InvalidSpec(format!(
            "need n ≥ 4b(b−2) = {} for b = {b}, got n = {n}",
            min_rows(b)
        )));
    }
    Ok(())
}

fn check_crossings(t: i32) -> Result<()> {
    if t.abs() < 3 {
        return Err(Error::InvalidSpec(format!(
            "each twist region must contain at least 3 crossings, got {t}"
        )));
    }
    Ok(())
}

impl PlatSpec {
    pub fn new(b: usize, n: usize, rows: Vec<Vec<i32>>) -> Result<Self> {
        check_shape(b, n)?;
        if rows.len() != n {
            return Err(Error::InvalidSpec(format!(
                "expected {n} rows of twist counts, got {}",
                rows.len()
            )));
        }
        for (r, row) in rows.iter().enumerate() {
            let want = regions_in_row(b, r + 1);
            if row.len() != want {
                return Err(Error::InvalidSpec(format!(
                    "row {} must have {want} twist regions, got {}",
                    r + 1,
                    row.len()
                )));
            }
            for (j, &t) in row.iter().enumerate() {
                check_crossings(t).map_err(|_| {
                    Error::InvalidSpec(format!(
                        "each twist region must contain at least 3 crossings; region ({}, {}) has {t}",
                        r + 1,
                        j + 1
                    ))
                })?;
            }
        }
        Ok(PlatSpec { b, n, rows })
    }

    /// Every region carries `|t|` half-twists; odd rows right-handed, even
    /// rows left-handed.
    pub fn uniform_alternating(b: usize, n: usize, t: i32) -> Result<Self> {
        check_shape(b, n)?;
        check_crossings(t)?;
        let t = t.abs();
        let rows = (1..=n)
            .map(|r| {
                let signed = if r % 2 == 1 { t } else { -t };
                vec![signed; regions_in_row(b, r)]
            })
            .collect();
        PlatSpec::new(b, n, rows)
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<i32>] {
        &self.rows
    }

    /// Signed half-twist count of region `j` in row `row` (both 1-based).
    pub fn twist(&self, row: usize, j: usize) -> i32 {
        self.rows[row - 1][j - 1]
    }

    pub fn region_count(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn max_half_twists(&self) -> u32 {
        self.rows.iter().flatten().map(|t| t.unsigned_abs()).max().unwrap_or(0)
    }

    /// Odd rows share one handedness and even rows the other.
    pub fn is_alternating(&self) -> bool {
        let sign = self.rows[0][0].signum();
        self.rows.iter().enumerate().all(|(r, row)| {
            let want = if r % 2 == 0 { sign } else { -sign };
            row.iter().all(|t| t.signum() == want)
        })
    }

    /// First row odd, every other row even: the parity pattern that makes
    /// the closure a single component.
    pub fn knot_parity_violation(&self) -> Option<String> {
        for (r, row) in self.rows.iter().enumerate() {
            let want_odd = r == 0;
            if let Some(j) = row.iter().position(|t| (t.rem_euclid(2) == 1) != want_odd) {
                return Some(format!(
                    "row {} must have {} crossing counts, region {} has {}",
                    r + 1,
                    if want_odd { "odd" } else { "even" },
                    j + 1,
                    row[j]
                ));
            }
        }
        None
    }
}

pub fn regions_in_row(b: usize, row: usize) -> usize {
    if row % 2 == 1 {
        b - 1
    } else {
        b
    }
}

/// Alternating plat with the knot parity pattern: row 1 carries the
/// smallest odd count `>= t`, every other region the smallest even count
/// `>= t`; odd rows right-handed, even rows left-handed.
pub fn make_alternating_jm_spec(b: usize, n: usize, t: i32) -> Result<PlatSpec> {
    check_shape(b, n)?;
    check_crossings(t)?;
    let odd = at_least_with_parity(t, true);
    let even = at_least_with_parity(t, false);
    let rows = (1..=n)
        .map(|r| {
            let count = if r == 1 { odd } else { even };
            let signed = if r % 2 == 1 { count } else { -count };
            vec![signed; regions_in_row(b, r)]
        })
        .collect();
    PlatSpec::new(b, n, rows)
}

type Port = (usize, usize);

#[derive(Clone, Debug)]
enum Shape {
    Bridge {
        center_x: f64,
        z: f64,
        below: bool,
    },
    Vertical,
    Twist {
        axis_x: f64,
        z_top: f64,
        start_angle: f64,
        turn: f64,
    },
}

#[derive(Clone, Debug)]
struct PlannedArc {
    kind: ArcKind,
    ends: [Port; 2],
    region: Option<[usize; 2]>,
    strand: u8,
    half_twists: Option<i32>,
    shape: Shape,
}

fn port_point((p, k): Port) -> Point3 {
    Point3::new(p as f64 - 0.5, 0.0, 0.0 - k as f64)
}

fn plan_arcs(spec: &PlatSpec) -> Vec<PlannedArc> {
    let (b, n) = (spec.b, spec.n);
    let mut arcs = Vec::new();
    for (k, below, strand) in [(0, false, 1), (n, true, 2)] {
        for q in 0..b {
            arcs.push(PlannedArc {
                kind: ArcKind::Bridge,
                ends: [(2 * q, k), (2 * q + 1, k)],
                region: None,
                strand,
                half_twists: None,
                shape: Shape::Bridge {
                    center_x: 2.0 * q as f64,
                    z: 0.0 - k as f64,
                    below,
                },
            });
        }
    }
    for r in 1..=n {
        let odd_row = r % 2 == 1;
        if odd_row {
            for (p, strand) in [(0, 1), (2 * b - 1, 2)] {
                arcs.push(PlannedArc {
                    kind: ArcKind::Vertical,
                    ends: [(p, r - 1), (p, r)],
                    region: None,
                    strand,
                    half_twists: None,
                    shape: Shape::Vertical,
                });
            }
        }
        for j in 0..regions_in_row(b, r) {
            let t = spec.rows[r - 1][j];
            let left = if odd_row { 2 * j + 1 } else { 2 * j };
            let right = left + 1;
            let swap = t.rem_euclid(2) == 1;
            let axis_x = left as f64;
            // Right-handed: the plan angle decreases going down.
            let turn = -(t.signum() as f64) * PI * t.unsigned_abs() as f64;
            for (strand, top, start_angle) in [(1u8, left, PI), (2u8, right, 0.0)] {
                let bottom = match (swap, top == left) {
                    (false, _) => top,
                    (true, true) => right,
                    (true, false) => left,
                };
                arcs.push(PlannedArc {
                    kind: ArcKind::Twist,
                    ends: [(top, r - 1), (bottom, r)],
                    region: Some([r, j + 1]),
                    strand,
                    half_twists: Some(t),
                    shape: Shape::Twist {
                        axis_x,
                        z_top: 1.0 - r as f64,
                        start_angle,
                        turn,
                    },
                });
            }
        }
    }
    arcs
}

fn port_index(b: usize, (p, k): Port) -> usize {
    k * 2 * b + p
}

/// Number of components of the plat closure, found by union-find over the
/// strand endpoints. An odd half-twist count exchanges the two strands of
/// its region; an even count keeps them.
pub fn component_count(spec: &PlatSpec) -> usize {
    let b = spec.b;
    let ports = 2 * b * (spec.n + 1);
    let mut parent: Vec<usize> = (0..ports).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for arc in plan_arcs(spec) {
        let a = find(&mut parent, port_index(b, arc.ends[0]));
        let c = find(&mut parent, port_index(b, arc.ends[1]));
        parent[a] = c;
    }
    (0..ports).filter(|&x| find(&mut parent, x) == x).count()
}

fn nominal_length(arc: &PlannedArc) -> f64 {
    match arc.shape {
        Shape::Bridge { .. } => PI * RADIUS,
        Shape::Vertical => 1.0,
        Shape::Twist { turn, .. } => (RADIUS * turn).hypot(1.0),
    }
}

/// Points of an arc from `ends[0]` to `ends[1]`, endpoints exact.
fn arc_points(arc: &PlannedArc, samples: usize) -> Vec<Point3> {
    let mut pts = match arc.shape {
        Shape::Vertical => vec![port_point(arc.ends[0]), port_point(arc.ends[1])],
        Shape::Bridge { center_x, z, below } => {
            let segs = samples.max(MIN_BRIDGE_SEGMENTS);
            let dir = if below { -1.0 } else { 1.0 };
            (0..=segs)
                .map(|k| {
                    let a = PI * (1.0 - k as f64 / segs as f64);
                    Point3::new(center_x + RADIUS * a.cos(), 0.0, z + dir * RADIUS * a.sin())
                })
                .collect()
        }
        Shape::Twist {
            axis_x,
            z_top,
            start_angle,
            turn,
        } => {
            let segs = samples * (turn.abs() / PI).round() as usize;
            (0..=segs)
                .map(|k| {
                    let u = k as f64 / segs as f64;
                    let a = start_angle + turn * u;
                    Point3::new(axis_x + RADIUS * a.cos(), RADIUS * a.sin(), z_top - u)
                })
                .collect()
        }
    };
    let last = pts.len() - 1;
    pts[0] = port_point(arc.ends[0]);
    pts[last] = port_point(arc.ends[1]);
    pts
}

/// Builds the closed embedded curve of a plat with its arc inventory.
///
/// Traversal starts at position 0 on the top bridge and follows the closure
/// once around.
pub fn build_plat(spec: &PlatSpec, samples_per_half_twist: usize) -> Result<PolyCurve> {
    if samples_per_half_twist < 8 {
        return Err(Error::InvalidConfig(format!(
            "samples_per_half_twist must be at least 8, got {samples_per_half_twist}"
        )));
    }
    let arcs = plan_arcs(spec);
    let b = spec.b;
    let mut incident: Vec<Vec<(usize, usize)>> = vec![Vec::with_capacity(2); 2 * b * (spec.n + 1)];
    for (idx, arc) in arcs.iter().enumerate() {
        for end in 0..2 {
            incident[port_index(b, arc.ends[end])].push((idx, end));
        }
    }
    debug_assert!(incident.iter().all(|v| v.len() == 2));

    let mut order = Vec::with_capacity(arcs.len());
    let (mut arc, mut entry) = (0usize, 0usize);
    loop {
        order.push((arc, entry));
        let exit_port = port_index(b, arcs[arc].ends[1 - entry]);
        let &(next, next_end) = incident[exit_port]
            .iter()
            .find(|&&(a, e)| (a, e) != (arc, 1 - entry))
            .expect("every port joins two arcs");
        if next == 0 {
            break;
        }
        arc = next;
        entry = next_end;
    }
    if order.len() != arcs.len() {
        let components = component_count(spec);
        let reason = spec
            .knot_parity_violation()
            .unwrap_or_else(|| "twist parities close up into several loops".to_string());
        return Err(Error::NotAKnot { components, reason });
    }

    let mut vertices = Vec::new();
    let mut tags = Vec::with_capacity(arcs.len());
    for &(idx, entry) in &order {
        let a = &arcs[idx];
        let mut pts = arc_points(a, samples_per_half_twist);
        if entry == 1 {
            pts.reverse();
        }
        let start = vertices.len();
        vertices.extend_from_slice(&pts[..pts.len() - 1]);
        tags.push(ArcTag {
            kind: a.kind,
            region: a.region,
            strand: a.strand,
            edges: [start, vertices.len()],
            nominal_length: nominal_length(a),
            half_twists: a.half_twists,
        });
    }
    let expected = vertices.len();
    let curve = PolyCurve::new(vertices)?;
    if curve.num_vertices() != expected {
        return Err(Error::DegenerateCurve("plat layout produced repeated vertices".into()));
    }
    let curve = curve.with_arcs(tags)?;
    if let Some(cl) = curve.clearance() {
        if cl.distance <= 1e-12 {
            return Err(Error::SelfIntersecting(cl.edges.0, cl.edges.1));
        }
    }
    Ok(curve)
}

/// Polyline length of the arc labelled by `tag`.
pub fn arc_length(curve: &PolyCurve, tag: &ArcTag) -> f64 {
    curve.cum_len()[tag.edges[1]] - curve.cum_len()[tag.edges[0]]
}
