//! Planar convex regions: hulls and intersections with snapping tolerance.
//!
//! A region collapses by dimension, polygon -> segment -> point -> empty, so
//! degenerate intersections keep an exact description.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

/// Vertex snap tolerance.
pub const SNAP_TOL: f64 = 1e-9;

/// Half-plane slack used while clipping; far below [`SNAP_TOL`].
const CLIP_EPS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl From<[f64; 2]> for Point2 {
    fn from([x, y]: [f64; 2]) -> Self {
        Point2 { x, y }
    }
}

impl From<Point2> for [f64; 2] {
    fn from(p: Point2) -> Self {
        [p.x, p.y]
    }
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }

    fn dot(self, o: Point2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    fn cross(self, o: Point2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Point2) -> f64 {
        self.sub(o).norm()
    }

    fn lex_cmp(&self, o: &Point2) -> Ordering {
        self.x.total_cmp(&o.x).then(self.y.total_cmp(&o.y))
    }
}

/// Signed area test: positive when `c` is left of the directed line `a -> b`.
fn orient(a: Point2, b: Point2, c: Point2) -> f64 {
    b.sub(a).cross(c.sub(a))
}

fn dist_to_segment(p: Point2, a: Point2, b: Point2) -> f64 {
    let ab = b.sub(a);
    let len2 = ab.dot(ab);
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = (p.sub(a).dot(ab) / len2).clamp(0.0, 1.0);
    p.dist(Point2::new(a.x + t * ab.x, a.y + t * ab.y))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegionKind {
    Empty,
    Point,
    Segment,
    Polygon,
}

/// Convex subset of the plane. Polygon vertices are counter-clockwise and
/// strictly convex; segments store their two endpoints.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvexRegion {
    pub kind: RegionKind,
    pub vertices: Vec<Point2>,
}

impl ConvexRegion {
    pub fn empty() -> Self {
        Self {
            kind: RegionKind::Empty,
            vertices: Vec::new(),
        }
    }

    pub fn point(p: Point2) -> Self {
        Self {
            kind: RegionKind::Point,
            vertices: vec![p],
        }
    }

    /// Convex hull of `points` snapped at [`SNAP_TOL`].
    pub fn hull(points: &[Point2]) -> Self {
        hull_with_tol(points, SNAP_TOL)
    }

    pub fn is_empty(&self) -> bool {
        self.kind == RegionKind::Empty
    }

    pub fn contains(&self, p: Point2, tol: f64) -> bool {
        let v = &self.vertices;
        match self.kind {
            RegionKind::Empty => false,
            RegionKind::Point => v[0].dist(p) <= tol,
            RegionKind::Segment => dist_to_segment(p, v[0], v[1]) <= tol,
            RegionKind::Polygon => (0..v.len()).all(|i| {
                let (a, b) = (v[i], v[(i + 1) % v.len()]);
                orient(a, b, p) >= -tol * a.dist(b)
            }),
        }
    }

    /// Whether every vertex of `other` lies in `self`.
    pub fn contains_region(&self, other: &ConvexRegion, tol: f64) -> bool {
        other.vertices.iter().all(|&p| self.contains(p, tol))
    }

    /// Same kind and same vertices, up to cyclic rotation (polygons) or
    /// endpoint order (segments), within `tol`.
    pub fn approx_eq(&self, other: &ConvexRegion, tol: f64) -> bool {
        if self.kind != other.kind || self.vertices.len() != other.vertices.len() {
            return false;
        }
        let (a, b) = (&self.vertices, &other.vertices);
        let close = |p: Point2, q: Point2| p.dist(q) <= tol;
        match self.kind {
            RegionKind::Empty => true,
            RegionKind::Point => close(a[0], b[0]),
            RegionKind::Segment => {
                (close(a[0], b[0]) && close(a[1], b[1])) || (close(a[0], b[1]) && close(a[1], b[0]))
            }
            RegionKind::Polygon => {
                let n = a.len();
                (0..n).any(|shift| (0..n).all(|i| close(a[i], b[(i + shift) % n])))
            }
        }
    }

    /// Area of a polygon, zero otherwise.
    pub fn area(&self) -> f64 {
        if self.kind != RegionKind::Polygon {
            return 0.0;
        }
        let v = &self.vertices;
        0.5 * (0..v.len()).map(|i| v[i].cross(v[(i + 1) % v.len()])).sum::<f64>()
    }

    /// Copy with near-zero coordinates written as exact zeros.
    pub fn cleaned(&self) -> ConvexRegion {
        let snap = |x: f64| if x.abs() < 1e-12 { 0.0 } else { x };
        ConvexRegion {
            kind: self.kind,
            vertices: self
                .vertices
                .iter()
                .map(|p| Point2::new(snap(p.x), snap(p.y)))
                .collect(),
        }
    }

    /// Half-planes `n . x <= c` whose intersection is this region (polygon
    /// or segment only).
    fn half_planes(&self) -> Vec<(Point2, f64)> {
        let left_of = |a: Point2, b: Point2| {
            let d = b.sub(a);
            let n = Point2::new(d.y, -d.x);
            (n, n.dot(a))
        };
        let v = &self.vertices;
        match self.kind {
            RegionKind::Polygon => (0..v.len()).map(|i| left_of(v[i], v[(i + 1) % v.len()])).collect(),
            RegionKind::Segment => {
                let (a, b) = (v[0], v[1]);
                let d = b.sub(a);
                let neg = Point2::new(-d.x, -d.y);
                vec![
                    left_of(a, b),
                    left_of(b, a),
                    (neg, neg.dot(a)),
                    (d, d.dot(b)),
                ]
            }
            _ => Vec::new(),
        }
    }
}

/// Hull of `points` with dedup, collinearity and flatness tolerance `tol`.
pub fn hull_with_tol(points: &[Point2], tol: f64) -> ConvexRegion {
    let mut pts: Vec<Point2> = Vec::with_capacity(points.len());
    let mut sorted = points.to_vec();
    sorted.sort_by(Point2::lex_cmp);
    for p in sorted {
        if !pts.iter().any(|q| q.dist(p) <= tol) {
            pts.push(p);
        }
    }
    match pts.len() {
        0 => return ConvexRegion::empty(),
        1 => return ConvexRegion::point(pts[0]),
        _ => {}
    }

    // Andrew's monotone chain, dropping vertices within `tol` of a chord.
    let keep = |chain: &Vec<Point2>, p: Point2| {
        let (o, a) = (chain[chain.len() - 2], chain[chain.len() - 1]);
        orient(o, a, p) > tol * o.dist(p)
    };
    let mut lower: Vec<Point2> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && !keep(&lower, p) {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point2> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && !keep(&upper, p) {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    let hull = lower;

    // Flatness: the polygon may still be a sliver of width <= tol.
    let (mut ia, mut ib, mut best) = (0, 0, -1.0);
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let d = pts[i].dist(pts[j]);
            if d > best {
                (ia, ib, best) = (i, j, d);
            }
        }
    }
    let (a, b) = (pts[ia], pts[ib]);
    let flat = pts.iter().all(|&p| orient(a, b, p).abs() <= tol * best);
    if hull.len() < 3 || flat {
        let (a, b) = if a.lex_cmp(&b) == Ordering::Greater { (b, a) } else { (a, b) };
        return ConvexRegion {
            kind: RegionKind::Segment,
            vertices: vec![a, b],
        };
    }
    // start at the lexicographically smallest vertex
    let start = (0..hull.len())
        .min_by(|&i, &j| hull[i].lex_cmp(&hull[j]))
        .unwrap_or(0);
    let mut vertices = hull[start..].to_vec();
    vertices.extend_from_slice(&hull[..start]);
    ConvexRegion {
        kind: RegionKind::Polygon,
        vertices,
    }
}

/// Sutherland-Hodgman step against `n . x <= c`, treating the input as a
/// closed polygon (a 2-vertex input is a segment traversed both ways).
fn clip(points: &[Point2], n: Point2, c: f64) -> Vec<Point2> {
    let slack = CLIP_EPS * n.norm().max(1.0);
    let value = |p: Point2| n.dot(p) - c;
    if points.len() == 1 {
        return if value(points[0]) <= slack { points.to_vec() } else { Vec::new() };
    }
    let mut out = Vec::with_capacity(points.len() + 1);
    for i in 0..points.len() {
        let cur = points[i];
        let next = points[(i + 1) % points.len()];
        let (vc, vn) = (value(cur), value(next));
        let (in_c, in_n) = (vc <= slack, vn <= slack);
        if in_c {
            out.push(cur);
        }
        if in_c != in_n {
            let t = vc / (vc - vn);
            out.push(Point2::new(cur.x + t * (next.x - cur.x), cur.y + t * (next.y - cur.y)));
        }
    }
    out
}

/// Exact convex intersection, snapped at [`SNAP_TOL`].
pub fn intersect_convex(a: &ConvexRegion, b: &ConvexRegion) -> ConvexRegion {
    match (a.kind, b.kind) {
        (RegionKind::Empty, _) | (_, RegionKind::Empty) => ConvexRegion::empty(),
        (_, RegionKind::Point) => {
            if a.contains(b.vertices[0], SNAP_TOL) {
                b.clone()
            } else {
                ConvexRegion::empty()
            }
        }
        (RegionKind::Point, _) => intersect_convex(b, a),
        _ => {
            let mut pts = a.vertices.clone();
            for (n, c) in b.half_planes() {
                pts = clip(&pts, n, c);
                if pts.is_empty() {
                    return ConvexRegion::empty();
                }
            }
            ConvexRegion::hull(&pts)
        }
    }
}

/// Intersection of a sequence of regions; `None` for an empty sequence.
pub fn intersect_all<'a>(regions: impl IntoIterator<Item = &'a ConvexRegion>) -> Option<ConvexRegion> {
    let mut iter = regions.into_iter();
    let first = iter.next()?.clone();
    Some(iter.fold(first, |acc, r| {
        if acc.is_empty() {
            acc
        } else {
            intersect_convex(&acc, r)
        }
    }))
}
