use nalgebra::{Matrix3, SymmetricEigen, Vector2, Vector3};
use serde::{Deserialize, Serialize};

use super::GeometryError;

/// Tolerance on `1 - |cos angle|` used for up-to-scale equality.
pub const HOM_EQ_TOL: f64 = 1e-9;

/// Homogeneous 2D point. A zero third component is a point at infinity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct HomPoint(Vector3<f64>);

/// Homogeneous 2D line `a x + b y + c = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct HomLine(Vector3<f64>);

fn check_nonzero(v: &Vector3<f64>) -> Result<(), GeometryError> {
    if !v.iter().all(|c| c.is_finite()) {
        return Err(GeometryError::NonFinite);
    }
    if v.iter().all(|&c| c == 0.0) {
        return Err(GeometryError::ZeroVector);
    }
    Ok(())
}

fn same_up_to_scale(a: &Vector3<f64>, b: &Vector3<f64>, tol: f64) -> bool {
    let cos = a.dot(b) / (a.norm() * b.norm());
    1.0 - cos.abs() <= tol
}

macro_rules! homogeneous_common {
    ($ty:ident) => {
        impl $ty {
            pub fn new(x: f64, y: f64, w: f64) -> Result<Self, GeometryError> {
                Self::from_vector(Vector3::new(x, y, w))
            }

            pub fn from_vector(v: Vector3<f64>) -> Result<Self, GeometryError> {
                check_nonzero(&v)?;
                Ok(Self(v))
            }

            pub fn coords(&self) -> &Vector3<f64> {
                &self.0
            }

            /// Unit-length representative.
            pub fn normalized(&self) -> Self {
                Self(self.0 / self.0.norm())
            }

            pub fn neg(&self) -> Self {
                Self(-self.0)
            }

            /// Equality up to nonzero scale (sign included), via `|cos angle|`.
            pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
                same_up_to_scale(&self.0, &other.0, tol)
            }

            pub fn to_array(&self) -> [f64; 3] {
                [self.0.x, self.0.y, self.0.z]
            }

            /// Unit-length coordinates as a plain array.
            pub fn to_unit_array(&self) -> [f64; 3] {
                self.normalized().to_array()
            }
        }

        impl TryFrom<[f64; 3]> for $ty {
            type Error = GeometryError;

            fn try_from(v: [f64; 3]) -> Result<Self, Self::Error> {
                Self::new(v[0], v[1], v[2])
            }
        }

        impl From<$ty> for [f64; 3] {
            fn from(p: $ty) -> Self {
                p.to_array()
            }
        }
    };
}

homogeneous_common!(HomPoint);
homogeneous_common!(HomLine);

impl HomPoint {
    pub fn from_pixel(x: f64, y: f64) -> Self {
        Self(Vector3::new(x, y, 1.0))
    }

    /// Direction `(dx, dy)` at infinity.
    pub fn at_infinity(dx: f64, dy: f64) -> Result<Self, GeometryError> {
        Self::new(dx, dy, 0.0)
    }

    /// Dehomogenized pixel position, `None` for points at infinity.
    pub fn to_pixel(&self) -> Option<Vector2<f64>> {
        let w = self.0.z;
        if w.abs() <= f64::EPSILON * self.0.norm() {
            None
        } else {
            Some(Vector2::new(self.0.x / w, self.0.y / w))
        }
    }

    pub fn is_at_infinity(&self) -> bool {
        self.to_pixel().is_none()
    }

    /// Intersection of two lines; fails when they are the same line.
    pub fn intersection(a: &HomLine, b: &HomLine) -> Result<Self, GeometryError> {
        Self::from_vector(a.0.cross(&b.0)).map_err(|_| GeometryError::CoincidentLines)
    }
}

impl HomLine {
    pub fn through(p0: &HomPoint, p1: &HomPoint) -> Result<Self, GeometryError> {
        Self::from_vector(p0.0.cross(&p1.0)).map_err(|_| GeometryError::DegenerateSegment)
    }

    /// Whether the line is (numerically) parallel to the image y axis.
    pub fn is_vertical(&self) -> bool {
        self.0.y.abs() <= 1e-12 * self.0.xy().norm()
    }
}

/// Pixel-space segment, y axis pointing down.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineSegment {
    pub p0: Vector2<f64>,
    pub p1: Vector2<f64>,
}

impl LineSegment {
    pub fn new(p0: Vector2<f64>, p1: Vector2<f64>) -> Result<Self, GeometryError> {
        if !(p0.iter().chain(p1.iter()).all(|c| c.is_finite())) {
            return Err(GeometryError::NonFinite);
        }
        if p0 == p1 {
            return Err(GeometryError::DegenerateSegment);
        }
        Ok(Self { p0, p1 })
    }

    pub fn from_coords(x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Self, GeometryError> {
        Self::new(Vector2::new(x0, y0), Vector2::new(x1, y1))
    }

    pub fn length(&self) -> f64 {
        (self.p1 - self.p0).norm()
    }

    /// Supporting line, see [`line_from_endpoints`].
    pub fn line(&self) -> HomLine {
        // endpoints are distinct by construction
        HomLine(self.p0.push(1.0).cross(&self.p1.push(1.0)))
    }
}

/// Line through two pixel points as the cross product of their homogeneous
/// coordinates.
pub fn line_from_endpoints(p0: Vector2<f64>, p1: Vector2<f64>) -> Result<HomLine, GeometryError> {
    LineSegment::new(p0, p1).map(|s| s.line())
}

/// `|vᵀl| / (‖l‖‖v‖)`, in `[0, 1]` and invariant to rescaling either argument.
pub fn point_line_distance(l: &HomLine, v: &HomPoint) -> f64 {
    let d = (v.0.dot(&l.0) / (l.0.norm() * v.0.norm())).abs();
    d.min(1.0)
}

/// Upper triangle of `l lᵀ` for the unit-normalized line: `(a², ab, ac, b², bc, c²)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineFeature(pub [f64; 6]);

impl LineFeature {
    pub fn as_array(&self) -> &[f64; 6] {
        &self.0
    }

    /// Symmetric 3x3 matrix reassembled from the upper triangle.
    pub fn matrix(&self) -> Matrix3<f64> {
        let [aa, ab, ac, bb, bc, cc] = self.0;
        Matrix3::new(aa, ab, ac, ab, bb, bc, ac, bc, cc)
    }

    /// Recovers the unit line (up to sign) from the dominant eigenvector.
    pub fn to_line(&self) -> HomLine {
        let eig = SymmetricEigen::new(self.matrix());
        let i = eig.eigenvalues.imax();
        HomLine(eig.eigenvectors.column(i).into_owned())
    }
}

pub fn line_feature(l: &HomLine) -> LineFeature {
    let u = l.0 / l.0.norm();
    let (a, b, c) = (u.x, u.y, u.z);
    LineFeature([a * a, a * b, a * c, b * b, b * c, c * c])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn v2(x: f64, y: f64) -> Vector2<f64> {
        Vector2::new(x, y)
    }

    #[test]
    fn x_axis_line() {
        let l = line_from_endpoints(v2(0.0, 0.0), v2(1.0, 0.0)).unwrap();
        assert!(l.approx_eq(&HomLine::new(0.0, 1.0, 0.0).unwrap(), HOM_EQ_TOL));
    }

    #[test]
    fn vertical_line() {
        let l = line_from_endpoints(v2(50.0, 0.0), v2(50.0, 7.0)).unwrap();
        assert!(l.approx_eq(&HomLine::new(1.0, 0.0, -50.0).unwrap(), HOM_EQ_TOL));
        assert!(l.is_vertical());
    }

    #[test]
    fn endpoints_lie_on_line() {
        let l = line_from_endpoints(v2(1.0, 2.0), v2(3.0, 5.0)).unwrap();
        assert_abs_diff_eq!(l.coords().dot(&Vector3::new(1.0, 2.0, 1.0)), 0.0);
        assert_abs_diff_eq!(l.coords().dot(&Vector3::new(3.0, 5.0, 1.0)), 0.0);
    }

    #[test]
    fn coincident_endpoints_rejected() {
        assert_eq!(
            line_from_endpoints(v2(4.0, 4.0), v2(4.0, 4.0)),
            Err(GeometryError::DegenerateSegment)
        );
    }

    #[test]
    fn distance_examples() {
        let d = point_line_distance(
            &HomLine::new(0.0, 1.0, 0.0).unwrap(),
            &HomPoint::new(0.0, 0.0, 1.0).unwrap(),
        );
        assert_eq!(d, 0.0);
        let d = point_line_distance(
            &HomLine::new(1.0, 0.0, 0.0).unwrap(),
            &HomPoint::new(1.0, 0.0, 0.0).unwrap(),
        );
        assert_eq!(d, 1.0);
        let s = 2f64.sqrt();
        let d = point_line_distance(
            &HomLine::new(1.0 / s, 1.0 / s, 0.0).unwrap(),
            &HomPoint::new(1.0, 0.0, 0.0).unwrap(),
        );
        assert_abs_diff_eq!(d, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);
    }

    #[test]
    fn zero_vectors_rejected() {
        assert_eq!(HomPoint::new(0.0, 0.0, 0.0), Err(GeometryError::ZeroVector));
        assert_eq!(HomLine::new(0.0, 0.0, 0.0), Err(GeometryError::ZeroVector));
        assert_eq!(
            HomLine::new(f64::NAN, 0.0, 1.0),
            Err(GeometryError::NonFinite)
        );
        assert!(serde_json::from_str::<HomPoint>("[0,0,0]").is_err());
    }

    #[test]
    fn feature_examples() {
        let f = line_feature(&HomLine::new(1.0, 0.0, 0.0).unwrap());
        assert_eq!(f.0, [1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let f = line_feature(&HomLine::new(0.0, -1.0, 0.0).unwrap());
        assert_eq!(f.0, [0.0, -0.0, 0.0, 1.0, -0.0, 0.0]);
        let f = line_feature(&HomLine::new(3.0, 4.0, 0.0).unwrap());
        let want = [0.36, 0.48, 0.0, 0.64, 0.0, 0.0];
        for (a, b) in f.0.iter().zip(want) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }
    }

    #[test]
    fn feature_matrix_is_rank_one_unit_trace() {
        let f = line_feature(&HomLine::new(0.3, -2.0, 140.0).unwrap());
        let m = f.matrix();
        assert_abs_diff_eq!(m.trace(), 1.0, epsilon = 1e-12);
        let eig = SymmetricEigen::new(m);
        let mut ev: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        assert_abs_diff_eq!(ev[0], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ev[1], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn intersection_of_axes() {
        let a = HomLine::new(0.0, 1.0, -100.0).unwrap();
        let b = HomLine::new(1.0, 0.0, -50.0).unwrap();
        let p = HomPoint::intersection(&a, &b).unwrap();
        let px = p.to_pixel().unwrap();
        assert_abs_diff_eq!(px.x, 50.0);
        assert_abs_diff_eq!(px.y, 100.0);
        assert_eq!(
            HomPoint::intersection(&a, &a),
            Err(GeometryError::CoincidentLines)
        );
    }

    fn nonzero3() -> impl Strategy<Value = Vector3<f64>> {
        (-1e3..1e3f64, -1e3..1e3f64, -1e3..1e3f64)
            .prop_filter("nonzero", |(a, b, c)| a.abs() + b.abs() + c.abs() > 1e-3)
            .prop_map(|(a, b, c)| Vector3::new(a, b, c))
    }

    fn scale() -> impl Strategy<Value = f64> {
        prop_oneof![1e-3..1e3f64, -1e3..-1e-3f64]
    }

    proptest! {
        #[test]
        fn distance_scale_invariant(l in nonzero3(), v in nonzero3(), a in scale(), b in scale()) {
            let l0 = HomLine::from_vector(l).unwrap();
            let v0 = HomPoint::from_vector(v).unwrap();
            let l1 = HomLine::from_vector(l * a).unwrap();
            let v1 = HomPoint::from_vector(v * b).unwrap();
            let d0 = point_line_distance(&l0, &v0);
            prop_assert!((0.0..=1.0).contains(&d0));
            prop_assert!((d0 - point_line_distance(&l1, &v1)).abs() < 1e-9);
        }

        #[test]
        fn feature_sign_invariant(l in nonzero3()) {
            let l = HomLine::from_vector(l).unwrap();
            let a = line_feature(&l);
            let b = line_feature(&l.neg());
            for (x, y) in a.0.iter().zip(b.0.iter()) {
                prop_assert_eq!(x.to_bits(), y.to_bits());
            }
        }

        #[test]
        fn feature_reconstructs_line(l in nonzero3()) {
            let l = HomLine::from_vector(l).unwrap();
            let back = line_feature(&l).to_line();
            let cos = l.normalized().coords().dot(back.normalized().coords()).abs();
            prop_assert!(1.0 - cos < 1e-6);
        }
    }
}
