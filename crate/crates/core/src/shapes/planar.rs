use std::f64::consts::TAU;

use nalgebra::Vector2;

use super::RawMoments;

/// Crossings closer than this (radians) are merged.
pub(crate) const MERGE_ANGLE: f64 = 1e-12;

/// A point where the circle `S_s(x)` meets the boundary, stored as its
/// polar angle about `x` and the unit direction.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Crossing {
    pub angle: f64,
    pub u: Vector2<f64>,
}

impl Crossing {
    pub fn from_offset(z: Vector2<f64>) -> Self {
        let u = z / z.norm();
        Self {
            angle: u.y.atan2(u.x),
            u,
        }
    }

    pub fn from_angle(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        let u = Vector2::new(c, s);
        Self {
            angle: u.y.atan2(u.x),
            u,
        }
    }
}

/// Sorts crossings by angle and merges near-coincident ones (including across
/// the branch cut at +-pi).
pub(crate) fn normalize_crossings(crossings: &mut Vec<Crossing>) {
    crossings.sort_by(|a, b| a.angle.total_cmp(&b.angle));
    crossings.dedup_by(|b, a| b.angle - a.angle < MERGE_ANGLE);
    while crossings.len() > 1 {
        let first = crossings[0].angle;
        let last = crossings[crossings.len() - 1].angle;
        if first + TAU - last < MERGE_ANGLE {
            crossings.pop();
        } else {
            break;
        }
    }
}

/// One arc of `S_s(x)` between consecutive crossings, counter-clockwise.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Arc {
    pub start: f64,
    pub sweep: f64,
    pub ua: Vector2<f64>,
    pub ub: Vector2<f64>,
}

impl Arc {
    pub fn mid_direction(&self) -> Vector2<f64> {
        let (s, c) = (self.start + 0.5 * self.sweep).sin_cos();
        Vector2::new(c, s)
    }
}

/// Arcs delimited by normalized crossings. No crossings yields the full circle.
pub(crate) fn arcs(crossings: &[Crossing]) -> Vec<Arc> {
    let n = crossings.len();
    if n == 0 {
        let u = Vector2::new(1.0, 0.0);
        return vec![Arc {
            start: 0.0,
            sweep: TAU,
            ua: u,
            ub: u,
        }];
    }
    (0..n)
        .map(|k| {
            let a = crossings[k];
            let b = crossings[(k + 1) % n];
            let mut sweep = b.angle - a.angle;
            if k + 1 == n {
                sweep += TAU;
            }
            Arc {
                start: a.angle,
                sweep,
                ua: a.u,
                ub: b.u,
            }
        })
        .collect()
}

/// Closed-form arc integrals of `chi` and `chi z` over the circle, with each arc
/// classified by `inside` at its midpoint.
pub(crate) fn integrate_arcs<F: FnMut(Vector2<f64>) -> bool>(
    x: Vector2<f64>,
    s: f64,
    crossings: &[Crossing],
    mut inside: F,
) -> RawMoments {
    let mut m0 = 0.0;
    let mut m1 = Vector2::zeros();
    for arc in arcs(crossings) {
        let chi = if inside(x + s * arc.mid_direction()) { -1.0 } else { 1.0 };
        m0 += chi * s * arc.sweep;
        if crossings.len() > 1 {
            m1 += chi * s * s * Vector2::new(arc.ub.y - arc.ua.y, arc.ua.x - arc.ub.x);
        }
    }
    RawMoments {
        m0,
        m1: [m1.x, m1.y, 0.0],
    }
}

/// Circle-circle crossings of `S_s(x)` with the circle of radius `r` about `c`.
/// Returns `None` when the circles do not meet; the caller decides inside/outside.
pub(crate) fn circle_circle(x: Vector2<f64>, s: f64, c: Vector2<f64>, r: f64) -> Option<[Crossing; 2]> {
    let w = c - x;
    let d = w.norm();
    if d == 0.0 || d >= s + r || s >= d + r || r >= d + s {
        return None;
    }
    let cos_delta = ((s * s + d * d - r * r) / (2.0 * s * d)).clamp(-1.0, 1.0);
    let delta = cos_delta.acos();
    let psi = w.y.atan2(w.x);
    Some([Crossing::from_angle(psi - delta), Crossing::from_angle(psi + delta)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn full_circle_outside() {
        let m = integrate_arcs(Vector2::zeros(), 2.0, &[], |_| false);
        assert!((m.m0 - 4.0 * PI).abs() < 1e-14);
        assert_eq!(m.m1, [0.0; 3]);
    }

    #[test]
    fn half_plane_split() {
        // circle of radius 1 about the origin, inside = {y < 0}
        let mut c = vec![Crossing::from_angle(0.0), Crossing::from_angle(PI)];
        normalize_crossings(&mut c);
        let m = integrate_arcs(Vector2::zeros(), 1.0, &c, |p| p.y < 0.0);
        assert!(m.m0.abs() < 1e-14);
        // integral of chi*z over the circle: upper half minus lower half in y
        assert!(m.m1[0].abs() < 1e-14);
        assert!((m.m1[1] - 4.0).abs() < 1e-14);
    }

    #[test]
    fn merges_across_branch_cut() {
        let mut c = vec![
            Crossing::from_angle(PI - 1e-14),
            Crossing::from_angle(-PI + 1e-14),
            Crossing::from_angle(0.5),
        ];
        normalize_crossings(&mut c);
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn circle_circle_geometry() {
        let [a, b] = circle_circle(Vector2::zeros(), 1.0, Vector2::new(1.0, 0.0), 1.0).unwrap();
        assert!((a.angle + PI / 3.0).abs() < 1e-14);
        assert!((b.angle - PI / 3.0).abs() < 1e-14);
        assert!(circle_circle(Vector2::zeros(), 1.0, Vector2::new(5.0, 0.0), 1.0).is_none());
    }
}
