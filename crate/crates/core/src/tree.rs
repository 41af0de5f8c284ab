//! Balanced hierarchy over contiguous edge ranges of a closed polyline.
//!
//! Each internal node covers edges `lo..hi` and carries a ball that contains
//! every vertex `v_lo ..= v_hi`, hence the whole sub-polyline. Ball centres
//! are vertex centroids, so the hierarchy transforms with the curve under
//! similarities.

use crate::geom::{Point3, PolyCurve};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Child {
    Node(u32),
    Edge(u32),
}

#[derive(Clone, Debug)]
pub(crate) struct Node {
    pub lo: u32,
    pub hi: u32,
    pub center: Point3,
    pub radius: f64,
    pub left: Child,
    pub right: Child,
}

#[derive(Clone, Debug)]
pub(crate) struct EdgeTree {
    pub nodes: Vec<Node>,
    pub root: Child,
}

impl EdgeTree {
    pub fn build(curve: &PolyCurve) -> Self {
        let mut nodes = Vec::with_capacity(curve.num_edges());
        let root = build_range(curve, 0, curve.num_edges(), &mut nodes);
        EdgeTree { nodes, root }
    }

    pub fn node(&self, idx: u32) -> &Node {
        &self.nodes[idx as usize]
    }
}

fn build_range(curve: &PolyCurve, lo: usize, hi: usize, nodes: &mut Vec<Node>) -> Child {
    if hi - lo == 1 {
        return Child::Edge(lo as u32);
    }
    let mid = (lo + hi) / 2;
    let left = build_range(curve, lo, mid, nodes);
    let right = build_range(curve, mid, hi, nodes);

    let count = (hi - lo + 1) as f64;
    let mut center = Point3::ORIGIN;
    for k in lo..=hi {
        center = center + curve.vertex(k);
    }
    center = center * (1.0 / count);
    let radius = (lo..=hi).map(|k| curve.vertex(k).distance(center)).fold(0.0, f64::max);

    nodes.push(Node {
        lo: lo as u32,
        hi: hi as u32,
        center,
        // Absorb rounding in the centroid/distance computation.
        radius: radius * (1.0 + 1e-12),
        left,
        right,
    });
    Child::Node((nodes.len() - 1) as u32)
}
