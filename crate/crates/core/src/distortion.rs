//! Gromov distortion of closed polygonal curves.
//!
//! [`distortion_sampled`] gives a cheap lower estimate.
//! [`distortion_certified`] encloses the supremum in an interval `[lo, hi]`
//! by branch and bound over pairs of arclength intervals:
//!
//! - pieces are nodes of a ball hierarchy over edge ranges, then single
//!   edges, then bisected sub-edges;
//! - the bound of a cell is the largest shorter-arclength distance over the
//!   cell divided by a lower bound on the chord (ball-ball, ball-segment or
//!   exact segment-segment distance);
//! - pairs on one edge have ratio exactly 1;
//! - pairs straddling a shared vertex, with the through-vertex path no longer
//!   than `L/2`, have supremum exactly [`corner_ratio`] of the angle there.
//!
//! Bounds are evaluated in ordinary floating point; the enclosure is exact up
//! to rounding.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{circular_distance, point_segment_distance, segment_min_distance, Point3, PolyCurve};
use crate::par::{self, Exec};
use crate::tree::{Child, EdgeTree};

/// Chords shorter than this are skipped when sampling.
pub const CHORD_GUARD: f64 = 1e-12;

pub const DEFAULT_BUDGET: u64 = 5_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessPair {
    pub s: f64,
    pub t: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistortionCertificate {
    pub lo: f64,
    pub hi: f64,
    #[serde(rename = "eps")]
    pub eps_requested: f64,
    pub witness: WitnessPair,
    #[serde(rename = "cells")]
    pub cells_expanded: u64,
    pub budget_exceeded: bool,
}

impl DistortionCertificate {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, value: f64) -> bool {
        self.lo <= value && value <= self.hi
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CertifyOptions {
    pub eps: f64,
    /// Maximum number of cell expansions before giving up.
    pub budget: u64,
    /// Strategy for the all-vertex-pairs seeding pass.
    pub exec: Exec,
}

impl CertifyOptions {
    pub fn new(eps: f64) -> Self {
        CertifyOptions {
            eps,
            budget: DEFAULT_BUDGET,
            exec: Exec::default(),
        }
    }

    pub fn budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }
}

/// Exact supremum of `(a + b) / |a·u + b·w|` over `a, b > 0` for unit vectors
/// `u, w` at angle `phi`: `1 / sin(phi / 2)`.
pub fn corner_ratio(phi: f64) -> f64 {
    if phi <= 1e-9 {
        return f64::INFINITY;
    }
    1.0 / (0.5 * phi.min(std::f64::consts::PI)).sin()
}

/// Closed-form ratio bound for pairs on one helical twist arc with `t`
/// half-twists on a cylinder of radius 1/2 and height 1:
/// `sqrt(π² t² / 4 + 1)`, which never exceeds `2π t`.
pub fn helix_ratio_bound(t: u32) -> f64 {
    let t = t as f64;
    (std::f64::consts::PI * std::f64::consts::PI * t * t / 4.0 + 1.0).sqrt()
}

/// Largest ratio over all vertices plus `n_samples` points equally spaced in
/// arclength. Pairs whose chord is below [`CHORD_GUARD`] are skipped.
pub fn distortion_sampled(c: &PolyCurve, n_samples: usize) -> Result<WitnessPair> {
    distortion_sampled_with(c, n_samples, Exec::default())
}

pub fn distortion_sampled_with(c: &PolyCurve, n_samples: usize, exec: Exec) -> Result<WitnessPair> {
    if n_samples < 8 {
        return Err(Error::InvalidConfig(format!(
            "n_samples must be at least 8, got {n_samples}"
        )));
    }
    sampled_max(c, n_samples, exec)
}

/// Sample parameters: every vertex plus `n` equally spaced parameters,
/// sorted and deduplicated.
pub(crate) fn sample_params(c: &PolyCurve, n: usize) -> Vec<f64> {
    let len = c.total_len();
    let mut params: Vec<f64> = c.cum_len()[..c.num_vertices()].to_vec();
    params.extend((0..n).map(|k| len * k as f64 / n as f64).filter(|&s| s < len));
    params.sort_by(f64::total_cmp);
    params.dedup();
    params
}

type Best = Option<(f64, usize, usize)>;

fn better(a: Best, b: Best) -> Best {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => match x.0.total_cmp(&y.0) {
            Ordering::Greater => Some(x),
            Ordering::Less => Some(y),
            Ordering::Equal => Some(if (x.1, x.2) <= (y.1, y.2) { x } else { y }),
        },
    }
}

fn sampled_max(c: &PolyCurve, n: usize, exec: Exec) -> Result<WitnessPair> {
    let params = sample_params(c, n);
    let points: Vec<Point3> = params.iter().map(|&s| c.point_at(s)).collect::<Result<_>>()?;
    let len = c.total_len();
    let best = par::map_reduce(
        exec,
        0..params.len(),
        None,
        |i| {
            let mut row: Best = None;
            for j in i + 1..params.len() {
                let chord = points[i].distance(points[j]);
                if chord < CHORD_GUARD {
                    continue;
                }
                let r = circular_distance(params[i], params[j], len) / chord;
                if row.is_none_or(|b| r > b.0) {
                    row = Some((r, i, j));
                }
            }
            row
        },
        better,
    );
    let (ratio, i, j) =
        best.ok_or_else(|| Error::DegenerateCurve("every sampled pair has a vanishing chord".into()))?;
    Ok(WitnessPair {
        s: params[i],
        t: params[j],
        ratio,
    })
}

/// Upper bound on the distortion ratio over `s ∈ [s0, s1] ⊂ edge i`,
/// `t ∈ [t0, t1] ⊂ edge j` (arclength parameters). The numerator is the
/// exact maximum of the shorter arclength distance over the cell, the
/// denominator the exact segment distance. Touching cells give `+∞`.
pub fn cell_upper_bound(c: &PolyCurve, i: usize, (s0, s1): (f64, f64), j: usize, (t0, t1): (f64, f64)) -> f64 {
    let ci = c.cum_len()[i];
    let cj = c.cum_len()[j];
    let p = (c.point_on_edge(i, s0 - ci), c.point_on_edge(i, s1 - ci));
    let q = (c.point_on_edge(j, t0 - cj), c.point_on_edge(j, t1 - cj));
    let den = segment_min_distance(p.0, p.1, q.0, q.1);
    let (a, b) = if s0 <= t0 {
        ((s0, s1), (t0, t1))
    } else {
        ((t0, t1), (s0, s1))
    };
    bound_ratio(max_arc(a, b, c.total_len()), den)
}

fn bound_ratio(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else {
        f64::INFINITY
    }
}

/// Maximum over `s ∈ a, t ∈ b` of the shorter circular arclength distance.
fn max_arc(a: (f64, f64), b: (f64, f64), len: f64) -> f64 {
    let half = 0.5 * len;
    let d0 = b.0 - a.1;
    let d1 = b.1 - a.0;
    if (d0 <= half && half <= d1) || (d0 <= -half && -half <= d1) {
        return half;
    }
    let h = |d: f64| {
        let a = d.abs();
        a.min(len - a)
    };
    h(d0).max(h(d1))
}

pub fn distortion_certified(c: &PolyCurve, eps: f64) -> Result<DistortionCertificate> {
    distortion_certified_with(c, &CertifyOptions::new(eps))
}

/// Branch-and-bound enclosure of the distortion.
///
/// On budget exhaustion returns [`Error::BudgetExceeded`] carrying the
/// partial certificate (with `budget_exceeded` set).
pub fn distortion_certified_with(c: &PolyCurve, opts: &CertifyOptions) -> Result<DistortionCertificate> {
    if opts.eps.is_nan() || opts.eps <= 0.0 {
        return Err(Error::InvalidConfig(format!("eps must be positive, got {}", opts.eps)));
    }
    let len = c.total_len();
    if let Some(cl) = c.clearance_with(opts.exec) {
        if cl.distance <= 1e-12 * len {
            return Err(Error::NotEmbedded(cl.edges.0, cl.edges.1));
        }
    }
    let m = c.num_edges();
    let angles: Vec<f64> = (0..m).map(|i| c.interior_angle(i)).collect();
    if let Some(v) = angles.iter().position(|&phi| phi <= 1e-9) {
        return Err(Error::NotEmbedded((v + m - 1) % m, v));
    }

    let seed = sampled_max(c, 0, opts.exec)?;
    let mut bb = Search {
        c,
        tree: EdgeTree::build(c),
        angles,
        len,
        eps: opts.eps,
        lo: seed.ratio,
        witness: seed,
        resolved_max: 1.0,
        discarded_max: f64::NEG_INFINITY,
        heap: BinaryHeap::new(),
        seq: 0,
    };
    let root = bb.piece(bb.tree.root);
    bb.consider(root, root, f64::INFINITY);

    let mut expanded: u64 = 0;
    let mut budget_exceeded = false;
    let mut frontier_max = f64::NEG_INFINITY;
    while let Some(cell) = bb.heap.pop() {
        if cell.upper <= bb.lo + bb.eps {
            frontier_max = cell.upper;
            break;
        }
        if expanded >= opts.budget {
            frontier_max = cell.upper;
            budget_exceeded = true;
            break;
        }
        expanded += 1;
        bb.expand(&cell);
    }

    let hi = bb.lo.max(bb.resolved_max).max(bb.discarded_max).max(frontier_max);
    let cert = DistortionCertificate {
        lo: bb.lo,
        hi,
        eps_requested: opts.eps,
        witness: bb.witness,
        cells_expanded: expanded,
        budget_exceeded,
    };
    if budget_exceeded {
        Err(Error::BudgetExceeded(Box::new(cert)))
    } else {
        Ok(cert)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Piece {
    Node(u32),
    /// Sub-interval `[u0, u1]` of an edge, measured from its start vertex.
    Seg {
        edge: u32,
        u0: f64,
        u1: f64,
    },
}

struct Cell {
    upper: f64,
    area: f64,
    seq: u64,
    a: Piece,
    b: Piece,
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Cell {}

impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cell {
    // Largest bound first, then the larger cell, then insertion order.
    fn cmp(&self, other: &Self) -> Ordering {
        self.upper
            .total_cmp(&other.upper)
            .then(self.area.total_cmp(&other.area))
            .then(other.seq.cmp(&self.seq))
    }
}

enum Verdict {
    Bound(f64),
    /// Exact supremum over the cell, with a pair realising it.
    Exact(f64, Option<(f64, f64)>),
}

/// Two sub-edges meeting at `vertex`, described by their distance ranges
/// `a`, `b` from it along each edge.
struct Corner {
    vertex: usize,
    a: (f64, f64),
    b: (f64, f64),
    at: f64,
    wraps: bool,
}

impl Corner {
    /// Exact supremum when every pair's shorter path runs through the
    /// vertex. The ratio `(x + y) / sqrt(x² + y² - 2xy cos φ)` depends only
    /// on `x / y` and increases towards `x = y`, so the supremum sits at the
    /// distance ratio closest to 1.
    fn exact(&self, phi: f64, len: f64) -> Verdict {
        let (a0, a1) = self.a;
        let (b0, b1) = self.b;
        let (x, y) = if a0 <= b1 && b0 <= a1 {
            let lo = a0.max(b0);
            let hi = a1.min(b1);
            let h = 0.5 * (lo + hi);
            return Verdict::Exact(corner_ratio(phi), Some(self.params(h, h, len)));
        } else if a1 < b0 {
            (a1, b0)
        } else {
            (a0, b1)
        };
        let chord = (x * x + y * y - 2.0 * x * y * phi.cos()).max(0.0).sqrt();
        Verdict::Exact((x + y) / chord, Some(self.params(x, y, len)))
    }

    fn params(&self, x: f64, y: f64, len: f64) -> (f64, f64) {
        if self.wraps {
            (x, len - y)
        } else {
            (self.at - x, self.at + y)
        }
    }
}

struct Search<'a> {
    c: &'a PolyCurve,
    tree: EdgeTree,
    angles: Vec<f64>,
    len: f64,
    eps: f64,
    lo: f64,
    witness: WitnessPair,
    resolved_max: f64,
    discarded_max: f64,
    heap: BinaryHeap<Cell>,
    seq: u64,
}

impl Search<'_> {
    fn piece(&self, child: Child) -> Piece {
        match child {
            Child::Node(n) => Piece::Node(n),
            Child::Edge(e) => Piece::Seg {
                edge: e,
                u0: 0.0,
                u1: self.c.edge_len(e as usize),
            },
        }
    }

    fn interval(&self, p: Piece) -> (f64, f64) {
        let cum = self.c.cum_len();
        match p {
            Piece::Node(n) => {
                let node = self.tree.node(n);
                (cum[node.lo as usize], cum[node.hi as usize])
            }
            Piece::Seg { edge, u0, u1 } => {
                let base = cum[edge as usize];
                (base + u0, base + u1)
            }
        }
    }

    fn width(&self, p: Piece) -> f64 {
        let (a, b) = self.interval(p);
        b - a
    }

    fn halves(&self, p: Piece) -> (Piece, Piece) {
        match p {
            Piece::Node(n) => {
                let node = self.tree.node(n);
                (self.piece(node.left), self.piece(node.right))
            }
            Piece::Seg { edge, u0, u1 } => {
                let mid = 0.5 * (u0 + u1);
                (Piece::Seg { edge, u0, u1: mid }, Piece::Seg { edge, u0: mid, u1 })
            }
        }
    }

    fn point(&self, p: Piece, frac: f64) -> (f64, Point3) {
        match p {
            Piece::Node(_) => {
                let (a, b) = self.interval(p);
                let s = a + frac * (b - a);
                let s = if s >= self.len { s - self.len } else { s };
                (s, self.c.point_at(s).expect("parameter inside curve"))
            }
            Piece::Seg { edge, u0, u1 } => {
                let u = u0 + frac * (u1 - u0);
                let s = self.c.cum_len()[edge as usize] + u;
                let s = if s >= self.len { s - self.len } else { s };
                (s, self.c.point_on_edge(edge as usize, u))
            }
        }
    }

    fn offer(&mut self, s: f64, t: f64) {
        let wrap = |x: f64| if x >= self.len { x - self.len } else { x };
        let (s, t) = (wrap(s), wrap(t));
        if let Ok(Some(r)) = self.c.ratio(s, t) {
            if r > self.lo {
                self.lo = r;
                self.witness = WitnessPair { s, t, ratio: r };
            }
        }
    }

    fn sample(&mut self, a: Piece, b: Piece) {
        let fracs: &[f64] = match (a, b) {
            (Piece::Seg { .. }, Piece::Seg { .. }) => &[0.5, 0.0, 1.0],
            _ => &[0.5],
        };
        for &fa in fracs {
            for &fb in fracs {
                let (s, p) = self.point(a, fa);
                let (t, q) = self.point(b, fb);
                let chord = p.distance(q);
                if chord < CHORD_GUARD {
                    continue;
                }
                // Cheap local estimate; only promising pairs are re-evaluated
                // through the public accessors.
                if circular_distance(s, t, self.len) / chord > self.lo {
                    self.offer(s, t);
                }
            }
        }
    }

    fn ball(&self, p: Piece) -> Option<(Point3, f64)> {
        match p {
            Piece::Node(n) => {
                let node = self.tree.node(n);
                Some((node.center, node.radius))
            }
            Piece::Seg { .. } => None,
        }
    }

    fn segment(&self, p: Piece) -> (Point3, Point3) {
        match p {
            Piece::Seg { edge, u0, u1 } => {
                let e = edge as usize;
                (self.c.point_on_edge(e, u0), self.c.point_on_edge(e, u1))
            }
            Piece::Node(_) => unreachable!("segment of a node piece"),
        }
    }

    fn chord_lower_bound(&self, a: Piece, b: Piece) -> f64 {
        let d = match (self.ball(a), self.ball(b)) {
            (Some((ca, ra)), Some((cb, rb))) => ca.distance(cb) - ra - rb,
            (Some((ca, ra)), None) => {
                let (p, q) = self.segment(b);
                point_segment_distance(ca, p, q) - ra
            }
            (None, Some((cb, rb))) => {
                let (p, q) = self.segment(a);
                point_segment_distance(cb, p, q) - rb
            }
            (None, None) => {
                let (p, q) = self.segment(a);
                let (r, s) = self.segment(b);
                segment_min_distance(p, q, r, s)
            }
        };
        d.max(0.0)
    }

    /// For sub-edges on adjacent edges (`a` before `b` in edge order):
    /// the shared vertex, each piece's distance range from it, and a map
    /// from those distances back to arclength parameters.
    fn adjacent_extents(&self, a: Piece, b: Piece) -> Option<Corner> {
        let (
            Piece::Seg {
                edge: i,
                u0: a0,
                u1: a1,
            },
            Piece::Seg {
                edge: j,
                u0: b0,
                u1: b1,
            },
        ) = (a, b)
        else {
            return None;
        };
        let (i, j) = (i as usize, j as usize);
        let m = self.c.num_edges();
        let li = self.c.edge_len(i);
        let lj = self.c.edge_len(j);
        if j == i + 1 {
            Some(Corner {
                vertex: j,
                a: (li - a1, li - a0),
                b: (b0, b1),
                at: self.c.cum_len()[j],
                wraps: false,
            })
        } else if i == 0 && j == m - 1 {
            Some(Corner {
                vertex: 0,
                a: (a0, a1),
                b: (lj - b1, lj - b0),
                at: 0.0,
                wraps: true,
            })
        } else {
            None
        }
    }

    fn judge(&self, a: Piece, b: Piece) -> Verdict {
        if let (Piece::Seg { edge: i, .. }, Piece::Seg { edge: j, .. }) = (a, b) {
            if i == j {
                // Collinear and shorter than L/2: ratio exactly 1.
                return Verdict::Exact(1.0, None);
            }
            if let Some(corner) = self.adjacent_extents(a, b) {
                if corner.a.1 + corner.b.1 <= 0.5 * self.len {
                    return corner.exact(self.angles[corner.vertex], self.len);
                }
                if corner.a.0 == 0.0 && corner.b.0 == 0.0 {
                    return Verdict::Bound(f64::INFINITY);
                }
            }
        }
        let num = max_arc(self.interval(a), self.interval(b), self.len);
        Verdict::Bound(bound_ratio(num, self.chord_lower_bound(a, b)))
    }

    fn consider(&mut self, a: Piece, b: Piece, parent_upper: f64) {
        match self.judge(a, b) {
            Verdict::Exact(value, pair) => {
                self.resolved_max = self.resolved_max.max(value);
                if let Some((s, t)) = pair {
                    self.offer(s, t);
                }
            }
            Verdict::Bound(u) => {
                let upper = u.min(parent_upper);
                if upper <= self.lo + self.eps {
                    self.discarded_max = self.discarded_max.max(upper);
                } else {
                    self.seq += 1;
                    let area = self.width(a) * self.width(b);
                    self.heap.push(Cell {
                        upper,
                        area,
                        seq: self.seq,
                        a,
                        b,
                    });
                }
            }
        }
    }

    fn expand(&mut self, cell: &Cell) {
        self.sample(cell.a, cell.b);
        if cell.a == cell.b {
            let (l, r) = self.halves(cell.a);
            self.consider(l, l, cell.upper);
            self.consider(l, r, cell.upper);
            self.consider(r, r, cell.upper);
        } else if self.width(cell.a) >= self.width(cell.b) {
            let (l, r) = self.halves(cell.a);
            self.consider(l, cell.b, cell.upper);
            self.consider(r, cell.b, cell.upper);
        } else {
            let (l, r) = self.halves(cell.b);
            self.consider(cell.a, l, cell.upper);
            self.consider(cell.a, r, cell.upper);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn square() -> PolyCurve {
        PolyCurve::new(vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(1.0, 1.0, 0.0),
            Point3::new(0.0, 1.0, 0.0),
        ])
        .unwrap()
    }

    fn regular_polygon(n: usize) -> PolyCurve {
        PolyCurve::new(
            (0..n)
                .map(|k| {
                    let a = 2.0 * PI * k as f64 / n as f64;
                    Point3::new(a.cos(), a.sin(), 0.0)
                })
                .collect(),
        )
        .unwrap()
    }

    /// Dense-grid maximum of (a+b)/|a u + b w| for the wedge of angle phi.
    fn wedge_oracle(phi: f64) -> f64 {
        let mut best: f64 = 0.0;
        for i in 1..=400 {
            for j in 1..=400 {
                let (a, b) = (i as f64 / 400.0, j as f64 / 400.0);
                let chord = (a * a + b * b - 2.0 * a * b * phi.cos()).sqrt();
                best = best.max((a + b) / chord);
            }
        }
        best
    }

    #[test]
    fn corner_ratio_values() {
        assert!((corner_ratio(PI) - 1.0).abs() < 1e-15);
        assert!((corner_ratio(PI / 2.0) - 2f64.sqrt()).abs() < 1e-15);
        assert!((corner_ratio(PI / 3.0) - 2.0).abs() < 1e-14);
        assert!((corner_ratio(PI / 2.0) - wedge_oracle(PI / 2.0)).abs() < 1e-9);
        assert!((corner_ratio(PI / 3.0) - wedge_oracle(PI / 3.0)).abs() < 1e-9);
        assert_eq!(corner_ratio(1e-10), f64::INFINITY);
    }

    #[test]
    fn helix_bound_values() {
        assert!((helix_ratio_bound(3) - 4.817_32).abs() < 1e-5);
        assert!((helix_ratio_bound(1) - 1.862_1).abs() < 1e-4);
        assert!(helix_ratio_bound(4) > helix_ratio_bound(3));
        for t in 1..50 {
            assert!(helix_ratio_bound(t) <= 2.0 * PI * t as f64);
        }
    }

    #[test]
    fn max_arc_matches_corner_enumeration() {
        let len = 10.0;
        let cases = [
            ((0.0, 1.0), (2.0, 3.0)),
            ((0.0, 1.0), (4.5, 7.0)),
            ((1.0, 2.0), (8.0, 9.5)),
            ((0.0, 4.0), (0.0, 4.0)),
        ];
        for (a, b) in cases {
            let mut brute: f64 = 0.0;
            for i in 0..=200 {
                for j in 0..=200 {
                    let s = a.0 + (a.1 - a.0) * i as f64 / 200.0;
                    let t = b.0 + (b.1 - b.0) * j as f64 / 200.0;
                    brute = brute.max(circular_distance(s, t, len));
                }
            }
            assert!((max_arc(a, b, len) - brute).abs() < 1e-12, "{a:?} {b:?}");
        }
    }

    #[test]
    fn cell_bound_examples() {
        let c = square();
        assert_eq!(cell_upper_bound(&c, 0, (0.0, 1.0), 2, (2.0, 3.0)), 2.0);
        assert_eq!(cell_upper_bound(&c, 0, (0.0, 1.0), 1, (1.0, 2.0)), f64::INFINITY);
        let long = regular_polygon(64);
        let u = cell_upper_bound(&long, 0, (0.0, 0.01), 0, (0.05, 0.06));
        assert!(u >= 1.0);
    }

    #[test]
    fn sampled_square_and_polygon() {
        let w = distortion_sampled(&square(), 400).unwrap();
        assert!((w.ratio - 2.0).abs() < 1e-2);
        let w = distortion_sampled(&regular_polygon(1000), 4000).unwrap();
        assert!((w.ratio - PI / 2.0).abs() < 1e-3);
        assert!(distortion_sampled(&square(), 4).is_err());
    }

    #[test]
    fn sampled_strategies_agree() {
        let c = regular_polygon(257)
            .transformed(|p| Point3::new(p.x, p.y * 0.6, 0.2 * (5.0 * p.x).sin()))
            .unwrap();
        let a = distortion_sampled_with(&c, 300, Exec::Sequential).unwrap();
        let b = distortion_sampled_with(&c, 300, Exec::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn certified_square() {
        let cert = distortion_certified(&square(), 1e-4).unwrap();
        assert!(cert.contains(2.0), "{cert:?}");
        assert!(cert.width() <= 1e-4);
        assert!(!cert.budget_exceeded);
    }

    #[test]
    fn certified_triangle_is_its_corner() {
        let h = 3f64.sqrt() / 2.0;
        let tri = PolyCurve::new(vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(0.5, h, 0.0),
        ])
        .unwrap();
        let cert = distortion_certified(&tri, 1e-6).unwrap();
        assert!(cert.lo <= 2.0 + 1e-12 && 2.0 <= cert.hi + 1e-12, "{cert:?}");
    }

    #[test]
    fn certified_rejects_self_intersection() {
        let eight = PolyCurve::new(vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 1.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(0.0, 1.0, 0.0),
        ])
        .unwrap();
        assert!(matches!(
            distortion_certified(&eight, 1e-3),
            Err(Error::NotEmbedded(0, 2))
        ));
    }

    #[test]
    fn budget_exhaustion_is_soft() {
        let c = regular_polygon(512);
        match distortion_certified_with(&c, &CertifyOptions::new(1e-9).budget(10)) {
            Err(Error::BudgetExceeded(cert)) => {
                assert!(cert.budget_exceeded);
                assert_eq!(cert.cells_expanded, 10);
                assert!(cert.lo <= cert.hi);
            }
            other => panic!("expected budget failure, got {other:?}"),
        }
    }

    #[test]
    fn certificate_json_shape() {
        let cert = distortion_certified(&square(), 1e-3).unwrap();
        let v: serde_json::Value = serde_json::to_value(&cert).unwrap();
        for key in ["lo", "hi", "eps", "witness", "cells", "budget_exceeded"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        for key in ["s", "t", "ratio"] {
            assert!(v["witness"].get(key).is_some());
        }
    }
}
