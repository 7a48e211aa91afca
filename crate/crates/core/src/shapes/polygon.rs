use nalgebra::Vector2;

use super::frame::Iso2;
use super::planar::{normalize_crossings, Crossing};
use super::BoundaryPoint;
use crate::error::{Error, Result};

type V2 = Vector2<f64>;

/// Simple polygon with counter-clockwise vertex loop.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    vertices: Vec<V2>,
}

fn cross(a: V2, b: V2) -> f64 {
    a.x * b.y - a.y * b.x
}

fn signed_area(v: &[V2]) -> f64 {
    let n = v.len();
    0.5 * (0..n).map(|i| cross(v[i], v[(i + 1) % n])).sum::<f64>()
}

/// Proper or touching intersection parameters `(t, u)` of `p + t d` and `q + u f`.
fn segment_intersection(p: V2, d: V2, q: V2, f: V2) -> Option<(f64, f64)> {
    let den = cross(d, f);
    if den.abs() <= 1e-300 {
        return None;
    }
    let w = q - p;
    let t = cross(w, f) / den;
    let u = cross(w, d) / den;
    ((0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u)).then_some((t, u))
}

impl Polygon {
    /// Validated constructor: at least three distinct vertices, nonzero area and
    /// no self-intersections. Clockwise input is reoriented.
    pub fn new(vertices: Vec<[f64; 2]>) -> Result<Self> {
        let mut v: Vec<V2> = vertices.iter().map(|p| V2::new(p[0], p[1])).collect();
        if v.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Err(Error::InvalidParameter("polygon vertices must be finite".into()));
        }
        v.dedup();
        while v.len() > 1 && v.first() == v.last() {
            v.pop();
        }
        if v.len() < 3 {
            return Err(Error::InvalidParameter("polygon needs at least 3 distinct vertices".into()));
        }
        let poly = Self::from_loop(v)?;
        if !poly.is_simple() {
            return Err(Error::InvalidParameter("polygon boundary self-intersects".into()));
        }
        Ok(poly)
    }

    /// Constructor for internally generated loops that are simple by construction.
    pub(crate) fn from_loop(mut v: Vec<V2>) -> Result<Self> {
        let a = signed_area(&v);
        if !(a.abs() > 0.0) {
            return Err(Error::InvalidParameter("polygon has zero area".into()));
        }
        if a < 0.0 {
            v.reverse();
        }
        Ok(Self { vertices: v })
    }

    pub fn vertices(&self) -> &[V2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    fn edge(&self, i: usize) -> (V2, V2) {
        let n = self.vertices.len();
        let p = self.vertices[i];
        (p, self.vertices[(i + 1) % n] - p)
    }

    fn edges(&self) -> impl Iterator<Item = (V2, V2)> + '_ {
        (0..self.vertices.len()).map(|i| self.edge(i))
    }

    fn is_simple(&self) -> bool {
        let n = self.len();
        for i in 0..n {
            let (p, d) = self.edge(i);
            for j in (i + 1)..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                let (q, f) = self.edge(j);
                if adjacent {
                    // adjacent edges may only share their common vertex
                    if cross(d, f).abs() <= 1e-14 * d.norm() * f.norm() && d.dot(&f) < 0.0 {
                        return false;
                    }
                    continue;
                }
                if segment_intersection(p, d, q, f).is_some() {
                    return false;
                }
            }
        }
        true
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn perimeter(&self) -> f64 {
        self.edges().map(|(_, d)| d.norm()).sum()
    }

    /// Crossing-number test; points on the boundary may go either way.
    pub fn contains(&self, p: V2) -> bool {
        let mut inside = false;
        let n = self.len();
        let mut j = n - 1;
        for i in 0..n {
            let (a, b) = (self.vertices[i], self.vertices[j]);
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
                if p.x < x {
                    inside = !inside;
                }
            }
            j = i;
        }
        inside
    }

    /// Distance to the boundary and the index of the nearest edge.
    pub fn nearest_edge(&self, p: V2) -> (f64, usize) {
        let mut best = (f64::INFINITY, 0);
        for (i, (a, d)) in self.edges().enumerate() {
            let t = ((p - a).dot(&d) / d.norm_squared()).clamp(0.0, 1.0);
            let dist = (a + t * d - p).norm();
            if dist < best.0 {
                best = (dist, i);
            }
        }
        best
    }

    pub fn signed_distance(&self, p: V2) -> f64 {
        let d = self.nearest_edge(p).0;
        if self.contains(p) {
            -d
        } else {
            d
        }
    }

    pub fn transformed(&self, g: &Iso2) -> Self {
        Self::from_loop(self.vertices.iter().map(|p| g.apply(p)).collect()).expect("isometry preserves area")
    }

    pub fn support(&self, e: V2) -> f64 {
        self.vertices.iter().map(|p| p.dot(&e)).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn farthest_distance(&self, x: V2) -> f64 {
        self.vertices.iter().map(|p| (p - x).norm()).fold(0.0, f64::max)
    }

    pub fn diameter(&self) -> f64 {
        let v = &self.vertices;
        let mut best = 0.0f64;
        for i in 0..v.len() {
            for j in (i + 1)..v.len() {
                best = best.max((v[i] - v[j]).norm_squared());
            }
        }
        best.sqrt()
    }

    /// Largest exterior turning angle at a vertex.
    pub fn max_turning_angle(&self) -> f64 {
        let n = self.len();
        (0..n)
            .map(|i| {
                let d0 = self.edge((i + n - 1) % n).1;
                let d1 = self.edge(i).1;
                cross(d0, d1).atan2(d0.dot(&d1)).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Boundary point at arc-length position `t` (taken modulo the perimeter).
    pub fn boundary_point(&self, t: f64) -> BoundaryPoint {
        let per = self.perimeter();
        let mut rest = t.rem_euclid(per);
        let mut chosen = self.edge(self.len() - 1);
        let mut along = chosen.1.norm();
        for (a, d) in self.edges() {
            let l = d.norm();
            if rest < l {
                chosen = (a, d);
                along = rest;
                break;
            }
            rest -= l;
        }
        let (a, d) = chosen;
        let tan = d / d.norm();
        let p = a + along * tan;
        BoundaryPoint {
            position: vec![p.x, p.y],
            param: vec![t],
            normal: vec![tan.y, -tan.x],
            tangents: vec![vec![tan.x, tan.y]],
            velocity: None,
        }
    }

    /// Points at arc-length positions `(k + 1/2) P / n`.
    pub fn boundary_sample(&self, n: usize) -> Vec<BoundaryPoint> {
        let per = self.perimeter();
        (0..n)
            .map(|k| self.boundary_point((k as f64 + 0.5) * per / n as f64))
            .collect()
    }

    /// Crossings of `S_s(x)` with the half-open edges `[v_i, v_{i+1})`.
    pub(crate) fn crossings(&self, x: V2, s: f64, out: &mut Vec<Crossing>) {
        out.clear();
        for (p, d) in self.edges() {
            let w = p - x;
            let a = d.norm_squared();
            let b = w.dot(&d);
            let c = w.norm_squared() - s * s;
            let disc = b * b - a * c;
            if disc < 0.0 {
                continue;
            }
            let sq = disc.sqrt();
            // numerically stable pair of roots
            let q = -(b + sq.copysign(b));
            let (t1, t2) = if q != 0.0 { (q / a, c / q) } else { (0.0, 0.0) };
            for t in [t1, t2] {
                if (0.0..1.0).contains(&t) {
                    let z = w + t * d;
                    if z.norm() > 0.0 {
                        out.push(Crossing::from_offset(z));
                    }
                }
            }
        }
        normalize_crossings(out);
    }

    /// Vertex distances and interior perpendicular-foot distances from `x`.
    pub(crate) fn critical_radii(&self, x: V2) -> Vec<f64> {
        let mut out: Vec<f64> = self.vertices.iter().map(|p| (p - x).norm()).collect();
        for (a, d) in self.edges() {
            let t = (x - a).dot(&d) / d.norm_squared();
            if t > 0.0 && t < 1.0 {
                out.push((a + t * d - x).norm());
            }
        }
        out.retain(|r| *r > 0.0);
        out.sort_by(f64::total_cmp);
        out.dedup_by(|b, a| (*b - *a).abs() <= 1e-14 * a.abs().max(1.0));
        out
    }

    /// Points where the boundary meets `{p . e = lambda}` with the normal of the edge hit.
    pub(crate) fn line_crossings(&self, e: V2, lambda: f64) -> Vec<(V2, V2)> {
        let mut out = Vec::new();
        for (a, d) in self.edges() {
            let fa = a.dot(&e) - lambda;
            let fb = (a + d).dot(&e) - lambda;
            if fa == 0.0 || ((fa < 0.0) != (fb < 0.0) && fb != 0.0) {
                let t = if fa == 0.0 { 0.0 } else { fa / (fa - fb) };
                let tan = d / d.norm();
                out.push((a + t * d, V2::new(tan.y, -tan.x)));
            }
        }
        out
    }

    /// Boundary points: all vertices plus evenly spaced edge points, at least `m` in total.
    pub(crate) fn dense_boundary(&self, m: usize) -> Vec<V2> {
        let per = self.perimeter();
        let mut out = Vec::with_capacity(m + self.len());
        for (a, d) in self.edges() {
            let k = ((d.norm() / per) * m as f64).ceil().max(1.0) as usize;
            out.extend((0..k).map(|i| a + (i as f64 / k as f64) * d));
        }
        out
    }

    /// Area of `self ∩ other` from Green's theorem: the boundary of the
    /// intersection consists of the pieces of each boundary lying inside the
    /// other polygon, plus shared same-direction edges counted once.
    pub fn intersection_area(&self, other: &Polygon) -> f64 {
        let scale = self.diameter().max(other.diameter());
        contribution(self, other, true, scale) + contribution(other, self, false, scale)
    }
}

fn contribution(a: &Polygon, b: &Polygon, owner: bool, scale: f64) -> f64 {
    let tol = 1e-11 * scale;
    let mut total = 0.0;
    for (p, d) in a.edges() {
        let mut ts = vec![0.0, 1.0];
        for (q, f) in b.edges() {
            if let Some((t, _)) = segment_intersection(p, d, q, f) {
                ts.push(t);
            }
        }
        ts.sort_by(f64::total_cmp);
        ts.dedup();
        for w in ts.windows(2) {
            if w[1] - w[0] <= 1e-15 {
                continue;
            }
            let (p0, p1) = (p + w[0] * d, p + w[1] * d);
            let mid = 0.5 * (p0 + p1);
            let (dist, k) = b.nearest_edge(mid);
            let keep = if dist <= tol {
                owner && b.edge(k).1.dot(&d) > 0.0
            } else {
                b.contains(mid)
            };
            if keep {
                total += 0.5 * cross(p0, p1);
            }
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes::planar::integrate_arcs;

    fn square(c: [f64; 2], h: f64) -> Polygon {
        Polygon::new(vec![
            [c[0] - h, c[1] - h],
            [c[0] + h, c[1] - h],
            [c[0] + h, c[1] + h],
            [c[0] - h, c[1] + h],
        ])
        .unwrap()
    }

    #[test]
    fn orientation_and_area() {
        let p = Polygon::new(vec![[0.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, 0.0]]).unwrap();
        assert!((p.area() - 1.0).abs() < 1e-15);
        assert!(p.contains(V2::new(0.5, 0.5)));
        assert!(!p.contains(V2::new(1.5, 0.5)));
        assert!((p.signed_distance(V2::new(0.5, 0.25)) + 0.25).abs() < 1e-15);
    }

    #[test]
    fn rejects_bowtie_and_degenerate() {
        assert!(Polygon::new(vec![[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]]).is_err());
        assert!(Polygon::new(vec![[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]).is_err());
        assert!(Polygon::new(vec![[0.0, 0.0], [1.0, 0.0]]).is_err());
    }

    #[test]
    fn edge_midpoint_samples() {
        let p = square([0.0, 0.0], 1.0);
        let pts = p.boundary_sample(4);
        assert_eq!(pts[0].position, vec![0.0, -1.0]);
        assert_eq!(pts[0].normal, vec![0.0, -1.0]);
        assert_eq!(pts[1].position, vec![1.0, 0.0]);
        assert_eq!(pts[1].normal, vec![1.0, 0.0]);
    }

    #[test]
    fn moments_of_square_against_angular_sampling() {
        let p = square([0.0, 0.0], 1.0);
        let x = V2::new(0.4, 0.9);
        for s in [0.05, 0.3, 1.0, 1.6, 2.5] {
            let mut c = Vec::new();
            p.crossings(x, s, &mut c);
            let m = integrate_arcs(x, s, &c, |q| p.contains(q));
            let n = 400_000;
            let (mut m0, mut m1) = (0.0, V2::zeros());
            for k in 0..n {
                let phi = std::f64::consts::TAU * (k as f64 + 0.5) / n as f64;
                let u = V2::new(phi.cos(), phi.sin());
                let chi = if p.contains(x + s * u) { -1.0 } else { 1.0 };
                m0 += chi * s * std::f64::consts::TAU / n as f64;
                m1 += chi * s * s * u * std::f64::consts::TAU / n as f64;
            }
            assert!((m.m0 - m0).abs() < 1e-4 * s, "s = {s}");
            assert!((m.m1[0] - m1.x).abs() < 1e-4 * s * s && (m.m1[1] - m1.y).abs() < 1e-4 * s * s);
        }
    }

    #[test]
    fn intersection_area_of_squares() {
        let a = square([0.0, 0.0], 1.0);
        let b = square([1.0, 0.5], 1.0);
        assert!((a.intersection_area(&b) - 1.0 * 1.5).abs() < 1e-14);
        // identical polygons: shared edges counted once
        assert!((a.intersection_area(&a) - 4.0).abs() < 1e-14);
        let far = square([5.0, 0.0], 1.0);
        assert!(a.intersection_area(&far).abs() < 1e-15);
        let inner = square([0.1, 0.0], 0.2);
        assert!((a.intersection_area(&inner) - 0.16).abs() < 1e-14);
    }

    #[test]
    fn critical_radii_of_square_center() {
        let r = square([0.0, 0.0], 1.0).critical_radii(V2::zeros());
        assert_eq!(r.len(), 2);
        assert!((r[0] - 1.0).abs() < 1e-15 && (r[1] - 2f64.sqrt()).abs() < 1e-15);
    }
}
