//! Closed polygonal curves with an arclength parametrisation.
//!
//! Arclength parameters are canonical in `[0, L)`. Accessors taking a raw
//! parameter reject anything outside that range; [`PolyCurve::point_at_wrapped`]
//! is the one place that reduces modulo `L`.

use std::ops::{Add, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::tree::{Child, EdgeTree};

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const ORIGIN: Point3 = Point3 { x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Point3 { x, y, z }
    }

    pub fn dot(self, o: Point3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Point3) -> Point3 {
        Point3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn distance(self, o: Point3) -> f64 {
        (self - o).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// `self + u * (to - self)`.
    pub fn lerp(self, to: Point3, u: f64) -> Point3 {
        self + (to - self) * u
    }
}

impl From<[f64; 3]> for Point3 {
    fn from(a: [f64; 3]) -> Self {
        Point3::new(a[0], a[1], a[2])
    }
}

impl From<Point3> for [f64; 3] {
    fn from(p: Point3) -> Self {
        [p.x, p.y, p.z]
    }
}

impl Add for Point3 {
    type Output = Point3;
    fn add(self, o: Point3) -> Point3 {
        Point3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Point3 {
    type Output = Point3;
    fn sub(self, o: Point3) -> Point3 {
        Point3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Point3 {
    type Output = Point3;
    fn mul(self, k: f64) -> Point3 {
        Point3::new(self.x * k, self.y * k, self.z * k)
    }
}

impl Neg for Point3 {
    type Output = Point3;
    fn neg(self) -> Point3 {
        Point3::new(-self.x, -self.y, -self.z)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArcKind {
    Bridge,
    Vertical,
    Twist,
}

/// Labels a run of consecutive edges of a built curve.
///
/// `edges` is the half-open edge range `[start, end)`; the arc runs from
/// vertex `start` to vertex `end % m`. `strand` is 1 or 2: for twist arcs the
/// strand entering its cylinder on the left (plan angle π) is 1; vertical arcs
/// use 1 for the left edge of the diagram and 2 for the right; bridge arcs use
/// 1 for the top and 2 for the bottom.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArcTag {
    pub kind: ArcKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region: Option<[usize; 2]>,
    pub strand: u8,
    #[serde(rename = "range")]
    pub edges: [usize; 2],
    pub nominal_length: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub half_twists: Option<i32>,
}

impl ArcTag {
    pub fn edge_count(&self) -> usize {
        self.edges[1] - self.edges[0]
    }
}

/// A closed polygonal curve. Edge `i` joins `v_i` to `v_{(i+1) mod m}`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyCurve {
    vertices: Vec<Point3>,
    cum_len: Vec<f64>,
    arcs: Option<Vec<ArcTag>>,
}

/// Closest non-adjacent edge pair of a curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Clearance {
    pub distance: f64,
    pub edges: (usize, usize),
}

impl PolyCurve {
    /// Builds a closed curve, dropping consecutive duplicate vertices
    /// (including a trailing copy of the first vertex).
    pub fn new(vertices: Vec<Point3>) -> Result<Self> {
        if let Some(i) = vertices.iter().position(|p| !p.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        let mut verts: Vec<Point3> = Vec::with_capacity(vertices.len());
        for p in vertices {
            if verts.last() != Some(&p) {
                verts.push(p);
            }
        }
        while verts.len() > 1 && verts.last() == verts.first() {
            verts.pop();
        }
        if verts.len() < 3 {
            return Err(Error::DegenerateCurve(format!(
                "need at least 3 distinct vertices, got {}",
                verts.len()
            )));
        }

        let m = verts.len();
        let mut cum_len = Vec::with_capacity(m + 1);
        cum_len.push(0.0);
        for i in 0..m {
            let len = verts[i].distance(verts[(i + 1) % m]);
            if len <= 0.0 {
                return Err(Error::DegenerateCurve(format!("edge {i} has zero length")));
            }
            cum_len.push(cum_len[i] + len);
        }
        let total = cum_len[m];
        for i in 0..m {
            if cum_len[i + 1] <= cum_len[i] {
                return Err(Error::DegenerateCurve(format!(
                    "edge {i} is too short to advance arclength"
                )));
            }
            if 2.0 * (cum_len[i + 1] - cum_len[i]) >= total {
                return Err(Error::DegenerateCurve(format!(
                    "edge {i} is at least half the total length"
                )));
            }
        }
        Ok(PolyCurve {
            vertices: verts,
            cum_len,
            arcs: None,
        })
    }

    /// Attaches an arc inventory. Tags must partition the edges in order.
    pub fn with_arcs(mut self, arcs: Vec<ArcTag>) -> Result<Self> {
        let mut next = 0;
        for tag in &arcs {
            if tag.edges[0] != next || tag.edges[1] <= tag.edges[0] {
                return Err(Error::Format(format!(
                    "arc tags must partition the edges; tag {:?} does not start at edge {next}",
                    tag.edges
                )));
            }
            next = tag.edges[1];
        }
        if next != self.num_edges() {
            return Err(Error::Format(format!(
                "arc tags cover {next} of {} edges",
                self.num_edges()
            )));
        }
        self.arcs = Some(arcs);
        Ok(self)
    }

    pub fn vertices(&self) -> &[Point3] {
        &self.vertices
    }

    /// Vertex `i mod m`.
    pub fn vertex(&self, i: usize) -> Point3 {
        self.vertices[i % self.vertices.len()]
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.vertices.len()
    }

    /// Cumulative arclength table of length `m + 1`.
    pub fn cum_len(&self) -> &[f64] {
        &self.cum_len
    }

    pub fn total_len(&self) -> f64 {
        self.cum_len[self.vertices.len()]
    }

    pub fn edge_len(&self, i: usize) -> f64 {
        self.cum_len[i + 1] - self.cum_len[i]
    }

    pub fn edge(&self, i: usize) -> (Point3, Point3) {
        (self.vertex(i), self.vertex(i + 1))
    }

    pub fn arcs(&self) -> Option<&[ArcTag]> {
        self.arcs.as_deref()
    }

    pub fn transformed(&self, f: impl Fn(Point3) -> Point3) -> Result<Self> {
        let curve = PolyCurve::new(self.vertices.iter().map(|&p| f(p)).collect())?;
        match &self.arcs {
            Some(a) => curve.with_arcs(a.clone()),
            None => Ok(curve),
        }
    }

    fn check(&self, s: f64) -> Result<()> {
        if s >= 0.0 && s < self.total_len() {
            Ok(())
        } else {
            Err(Error::OutOfRange {
                value: s,
                len: self.total_len(),
            })
        }
    }

    /// Index of the edge containing arclength `s`, for `s` in `[0, L)`.
    pub(crate) fn edge_of(&self, s: f64) -> usize {
        let i = self.cum_len.partition_point(|&c| c <= s);
        i.saturating_sub(1).min(self.vertices.len() - 1)
    }

    /// Point at distance `u` from `v_i` along edge `i`.
    pub(crate) fn point_on_edge(&self, i: usize, u: f64) -> Point3 {
        let (a, b) = self.edge(i);
        if u == 0.0 {
            return a;
        }
        a.lerp(b, u / self.edge_len(i))
    }

    pub fn point_at(&self, s: f64) -> Result<Point3> {
        self.check(s)?;
        let i = self.edge_of(s);
        Ok(self.point_on_edge(i, s - self.cum_len[i]))
    }

    /// Like [`point_at`](Self::point_at) but first reduces `s` modulo `L`.
    pub fn point_at_wrapped(&self, s: f64) -> Result<Point3> {
        if !s.is_finite() {
            return Err(Error::OutOfRange {
                value: s,
                len: self.total_len(),
            });
        }
        let mut r = s.rem_euclid(self.total_len());
        if r >= self.total_len() {
            r = 0.0;
        }
        self.point_at(r)
    }

    /// Shorter of the two arclength distances between parameters.
    pub fn arclength_distance(&self, s: f64, t: f64) -> Result<f64> {
        self.check(s)?;
        self.check(t)?;
        Ok(circular_distance(s, t, self.total_len()))
    }

    pub fn chord_distance(&self, s: f64, t: f64) -> Result<f64> {
        Ok(self.point_at(s)?.distance(self.point_at(t)?))
    }

    /// Distortion ratio of a single pair; `None` when the chord vanishes.
    pub fn ratio(&self, s: f64, t: f64) -> Result<Option<f64>> {
        let arc = self.arclength_distance(s, t)?;
        let chord = self.chord_distance(s, t)?;
        Ok((chord > 0.0).then(|| arc / chord))
    }

    /// Angle in `(0, π]` between the two edges meeting at `v_i`.
    pub fn interior_angle(&self, i: usize) -> f64 {
        let m = self.vertices.len();
        assert!(i < m, "vertex index {i} out of range for {m} vertices");
        let v = self.vertices[i];
        let a = self.vertices[(i + m - 1) % m] - v;
        let b = self.vertices[(i + 1) % m] - v;
        a.cross(b).norm().atan2(a.dot(b))
    }

    /// Whether edges `i` and `j` share a vertex (or coincide).
    pub fn edges_adjacent(&self, i: usize, j: usize) -> bool {
        let m = self.vertices.len();
        let d = i.abs_diff(j);
        d <= 1 || d == m - 1
    }

    /// Minimum distance between non-adjacent edges; `+∞` when no such pair
    /// exists (triangles). Zero means the curve self-intersects.
    pub fn min_clearance(&self) -> f64 {
        self.clearance_with(Exec::default())
            .map_or(f64::INFINITY, |c| c.distance)
    }

    pub fn clearance(&self) -> Option<Clearance> {
        self.clearance_with(Exec::default())
    }

    pub fn clearance_with(&self, exec: Exec) -> Option<Clearance> {
        clearance(self, exec)
    }
}

pub(crate) fn circular_distance(s: f64, t: f64, len: f64) -> f64 {
    let d = (s - t).abs();
    d.min(len - d)
}

/// Exact minimum distance between closed segments `[p1, q1]` and `[p2, q2]`.
/// Degenerate (zero-length) segments are allowed.
pub fn segment_min_distance(p1: Point3, q1: Point3, p2: Point3, q2: Point3) -> f64 {
    let d1 = q1 - p1;
    let d2 = q2 - p2;
    let r = p1 - p2;
    let a = d1.dot(d1);
    let e = d2.dot(d2);
    let f = d2.dot(r);

    let (s, t) = if a == 0.0 && e == 0.0 {
        (0.0, 0.0)
    } else if a == 0.0 {
        (0.0, (f / e).clamp(0.0, 1.0))
    } else {
        let c = d1.dot(r);
        if e == 0.0 {
            ((-c / a).clamp(0.0, 1.0), 0.0)
        } else {
            let b = d1.dot(d2);
            let denom = a * e - b * b;
            let mut s = if denom > 1e-14 * a * e {
                ((b * f - c * e) / denom).clamp(0.0, 1.0)
            } else {
                0.0
            };
            let mut t = (b * s + f) / e;
            if t < 0.0 {
                t = 0.0;
                s = (-c / a).clamp(0.0, 1.0);
            } else if t > 1.0 {
                t = 1.0;
                s = ((b - c) / a).clamp(0.0, 1.0);
            }
            (s, t)
        }
    };
    let closest = (p1 + d1 * s).distance(p2 + d2 * t);
    // Endpoint candidates guard the clamped solve in near-parallel cases.
    closest
        .min(point_segment_distance(p1, p2, q2))
        .min(point_segment_distance(q1, p2, q2))
        .min(point_segment_distance(p2, p1, q1))
        .min(point_segment_distance(q2, p1, q1))
}

pub fn point_segment_distance(p: Point3, a: Point3, b: Point3) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 == 0.0 {
        return p.distance(a);
    }
    let u = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    p.distance(a + ab * u)
}

fn clearance(curve: &PolyCurve, exec: Exec) -> Option<Clearance> {
    let m = curve.num_edges();
    if m < 4 {
        return None;
    }
    let tree = EdgeTree::build(curve);

    // Seed the shared bound with edges two apart, which are never adjacent
    // once m >= 4.
    let seed = (0..m)
        .map(|i| {
            let (a, b) = curve.edge(i);
            let (c, d) = curve.edge(i + 2);
            segment_min_distance(a, b, c, d)
        })
        .fold(f64::INFINITY, f64::min);
    let best = AtomicU64::new(seed.to_bits());

    // Expand the dual-tree frontier breadth-first to get enough independent
    // tasks, then finish each subtree depth-first.
    let mut frontier = vec![(tree.root, tree.root)];
    while frontier.len() < 256 {
        let mut next = Vec::with_capacity(frontier.len() * 3);
        let mut grew = false;
        for &(a, b) in &frontier {
            match split_pair(&tree, a, b) {
                Some(children) => {
                    grew = true;
                    next.extend(children);
                }
                None => next.push((a, b)),
            }
        }
        frontier = next;
        if !grew {
            break;
        }
    }

    let none: Option<Clearance> = None;
    par::map_reduce(
        exec,
        0..frontier.len(),
        none,
        |k| clearance_subtree(curve, &tree, frontier[k], &best),
        pick_closer,
    )
}

fn pick_closer(a: Option<Clearance>, b: Option<Clearance>) -> Option<Clearance> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => {
            let kx = (x.distance, x.edges);
            let ky = (y.distance, y.edges);
            if kx.partial_cmp(&ky) == Some(std::cmp::Ordering::Greater) {
                Some(y)
            } else {
                Some(x)
            }
        }
    }
}

fn split_pair(tree: &EdgeTree, a: Child, b: Child) -> Option<Vec<(Child, Child)>> {
    match (a, b) {
        (Child::Edge(_), Child::Edge(_)) => None,
        (Child::Node(x), Child::Node(y)) if x == y => {
            let n = tree.node(x);
            Some(vec![(n.left, n.left), (n.left, n.right), (n.right, n.right)])
        }
        (Child::Node(x), Child::Edge(_)) => {
            let n = tree.node(x);
            Some(vec![(n.left, b), (n.right, b)])
        }
        (Child::Edge(_), Child::Node(y)) => {
            let n = tree.node(y);
            Some(vec![(a, n.left), (a, n.right)])
        }
        (Child::Node(x), Child::Node(y)) => {
            let (nx, ny) = (tree.node(x), tree.node(y));
            if nx.hi - nx.lo >= ny.hi - ny.lo {
                Some(vec![(nx.left, b), (nx.right, b)])
            } else {
                Some(vec![(a, ny.left), (a, ny.right)])
            }
        }
    }
}

fn ball_of(curve: &PolyCurve, tree: &EdgeTree, c: Child) -> (Point3, f64) {
    match c {
        Child::Node(x) => {
            let n = tree.node(x);
            (n.center, n.radius)
        }
        Child::Edge(e) => {
            let (a, b) = curve.edge(e as usize);
            ((a + b) * 0.5, 0.5 * a.distance(b) * (1.0 + 1e-12))
        }
    }
}

fn clearance_subtree(curve: &PolyCurve, tree: &EdgeTree, start: (Child, Child), best: &AtomicU64) -> Option<Clearance> {
    let mut found: Option<Clearance> = None;
    let mut stack = vec![start];
    while let Some((a, b)) = stack.pop() {
        let bound = f64::from_bits(best.load(Ordering::Relaxed));
        if a != b {
            let (ca, ra) = ball_of(curve, tree, a);
            let (cb, rb) = ball_of(curve, tree, b);
            if ca.distance(cb) - ra - rb > bound {
                continue;
            }
        }
        if let (Child::Edge(i), Child::Edge(j)) = (a, b) {
            let (i, j) = (i as usize, j as usize);
            if curve.edges_adjacent(i, j) {
                continue;
            }
            let (p1, q1) = curve.edge(i);
            let (p2, q2) = curve.edge(j);
            let d = segment_min_distance(p1, q1, p2, q2);
            if d <= bound {
                best.fetch_min(d.to_bits(), Ordering::Relaxed);
                found = pick_closer(
                    found,
                    Some(Clearance {
                        distance: d,
                        edges: (i.min(j), i.max(j)),
                    }),
                );
            }
            continue;
        }
        if let Some(children) = split_pair(tree, a, b) {
            stack.extend(children);
        }
    }
    found
}
