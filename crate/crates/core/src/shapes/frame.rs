use nalgebra::{SMatrix, SVector};

/// Rigid motion `p -> q p + t` with orthogonal `q` (rotations and reflections).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Isometry<const D: usize> {
    pub q: SMatrix<f64, D, D>,
    pub t: SVector<f64, D>,
}

impl<const D: usize> Default for Isometry<D> {
    fn default() -> Self {
        Self::identity()
    }
}

impl<const D: usize> Isometry<D> {
    pub fn identity() -> Self {
        Self {
            q: SMatrix::identity(),
            t: SVector::zeros(),
        }
    }

    pub fn translation(t: SVector<f64, D>) -> Self {
        Self {
            q: SMatrix::identity(),
            t,
        }
    }

    /// Reflection across the hyperplane `{x . e = lambda}`:
    /// `x -> x - 2 (x . e - lambda) e`.
    pub fn reflection(e: SVector<f64, D>, lambda: f64) -> Self {
        let q = SMatrix::<f64, D, D>::identity() - 2.0 * e * e.transpose();
        Self { q, t: 2.0 * lambda * e }
    }

    pub fn apply(&self, p: &SVector<f64, D>) -> SVector<f64, D> {
        self.q * p + self.t
    }

    pub fn apply_inverse(&self, p: &SVector<f64, D>) -> SVector<f64, D> {
        self.q.tr_mul(&(p - self.t))
    }

    pub fn rotate(&self, v: &SVector<f64, D>) -> SVector<f64, D> {
        self.q * v
    }

    pub fn rotate_inverse(&self, v: &SVector<f64, D>) -> SVector<f64, D> {
        self.q.tr_mul(v)
    }

    /// `self` followed by `outer`.
    pub fn then(&self, outer: &Self) -> Self {
        Self {
            q: outer.q * self.q,
            t: outer.q * self.t + outer.t,
        }
    }
}

pub type Iso2 = Isometry<2>;
pub type Iso3 = Isometry<3>;

impl Iso3 {
    pub fn is_orientation_reversing(&self) -> bool {
        self.q.determinant() < 0.0
    }
}

impl Iso2 {
    pub fn is_orientation_reversing(&self) -> bool {
        self.q.determinant() < 0.0
    }

    pub fn rotation(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self {
            q: SMatrix::<f64, 2, 2>::new(c, -s, s, c),
            t: SVector::zeros(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Vector2;

    #[test]
    fn reflection_example_and_involution() {
        let r = Iso2::reflection(Vector2::new(1.0, 0.0), 0.0);
        let p = Vector2::new(3.0, 2.0);
        assert_eq!(r.apply(&p), Vector2::new(-3.0, 2.0));
        let e = Vector2::new(0.6, 0.8);
        let r = Iso2::reflection(e, 0.37);
        let q = Vector2::new(-1.2, 5.5);
        assert!((r.apply(&r.apply(&q)) - q).norm() < 1e-14);
        assert!(r.is_orientation_reversing());
    }

    #[test]
    fn composition_order() {
        let a = Iso2::rotation(0.3);
        let b = Iso2::translation(Vector2::new(1.0, 2.0));
        let p = Vector2::new(0.5, -0.25);
        assert!((a.then(&b).apply(&p) - b.apply(&a.apply(&p))).norm() < 1e-15);
        assert!((a.apply_inverse(&a.apply(&p)) - p).norm() < 1e-15);
    }
}
