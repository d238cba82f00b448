//! Inertial and formation frame geometry.
//!
//! All coordinates are meters in the fixed inertial frame unless stated
//! otherwise. The formation frame has its origin at the group centroid, `x`
//! toward the first vehicle and `z` pointing down.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point (or displacement) in the inertial frame, in meters.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const ORIGIN: Point3 = Point3 {
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    /// Checked constructor used at input boundaries.
    pub fn try_new(x: f64, y: f64, z: f64) -> Result<Self> {
        if x.is_finite() && y.is_finite() && z.is_finite() {
            Ok(Self { x, y, z })
        } else {
            Err(Error::NonFinite("point coordinates"))
        }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn dot(self, other: Point3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn distance(self, other: Point3) -> f64 {
        (self - other).norm()
    }

    pub fn midpoint(self, other: Point3) -> Point3 {
        Point3::new(
            0.5 * (self.x + other.x),
            0.5 * (self.y + other.y),
            0.5 * (self.z + other.z),
        )
    }

    /// Linear interpolation, `t = 0` gives `self`.
    pub fn lerp(self, other: Point3, t: f64) -> Point3 {
        self + (other - self) * t
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl TryFrom<[f64; 3]> for Point3 {
    type Error = Error;

    fn try_from([x, y, z]: [f64; 3]) -> Result<Self> {
        Point3::try_new(x, y, z)
    }
}

impl From<Point3> for [f64; 3] {
    fn from(p: Point3) -> Self {
        p.to_array()
    }
}

impl fmt::Display for Point3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

impl Add for Point3 {
    type Output = Point3;
    fn add(self, rhs: Point3) -> Point3 {
        Point3::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl Sub for Point3 {
    type Output = Point3;
    fn sub(self, rhs: Point3) -> Point3 {
        Point3::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl Neg for Point3 {
    type Output = Point3;
    fn neg(self) -> Point3 {
        Point3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Point3 {
    type Output = Point3;
    fn mul(self, s: f64) -> Point3 {
        Point3::new(self.x * s, self.y * s, self.z * s)
    }
}

/// Wraps an angle into `(-π, π]`.
fn normalize_angle(a: f64) -> f64 {
    let mut r = a.rem_euclid(2.0 * PI);
    if r > PI {
        r -= 2.0 * PI;
    }
    // rem_euclid maps -π to π already; guard against rounding to exactly -π.
    if r <= -PI {
        r += 2.0 * PI;
    }
    r
}

/// Attitude of the formation shape: roll, pitch and yaw in radians,
/// each normalized to `(-π, π]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EulerAngles {
    roll: f64,
    pitch: f64,
    yaw: f64,
}

impl EulerAngles {
    pub const IDENTITY: EulerAngles = EulerAngles {
        roll: 0.0,
        pitch: 0.0,
        yaw: 0.0,
    };

    pub fn new(roll: f64, pitch: f64, yaw: f64) -> Result<Self> {
        if !(roll.is_finite() && pitch.is_finite() && yaw.is_finite()) {
            return Err(Error::NonFinite("euler angles"));
        }
        Ok(Self {
            roll: normalize_angle(roll),
            pitch: normalize_angle(pitch),
            yaw: normalize_angle(yaw),
        })
    }

    pub fn roll(&self) -> f64 {
        self.roll
    }

    pub fn pitch(&self) -> f64 {
        self.pitch
    }

    pub fn yaw(&self) -> f64 {
        self.yaw
    }
}

/// A 3×3 rotation matrix stored row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationMatrix {
    m: [[f64; 3]; 3],
}

impl RotationMatrix {
    pub const IDENTITY: RotationMatrix = RotationMatrix {
        m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
    };

    /// Formation-to-inertial rotation `R_OF` for the given attitude
    /// (yaw about z, then pitch about y, then roll about x).
    pub fn from_euler(angles: EulerAngles) -> Self {
        let (sf, cf) = angles.roll.sin_cos();
        let (st, ct) = angles.pitch.sin_cos();
        let (sp, cp) = angles.yaw.sin_cos();
        Self {
            m: [
                [cp * ct, cp * st * sf - sp * cf, cp * st * cf + sp * sf],
                [sp * ct, sp * st * sf + cp * cf, sp * st * cf - cp * sf],
                [-st, ct * sf, ct * cf],
            ],
        }
    }

    pub fn rows(&self) -> [[f64; 3]; 3] {
        self.m
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.m[row][col]
    }

    pub fn transpose(&self) -> Self {
        let m = &self.m;
        Self {
            m: [
                [m[0][0], m[1][0], m[2][0]],
                [m[0][1], m[1][1], m[2][1]],
                [m[0][2], m[1][2], m[2][2]],
            ],
        }
    }

    /// Inverse of a rotation, i.e. its transpose.
    pub fn inverse(&self) -> Self {
        self.transpose()
    }

    pub fn determinant(&self) -> f64 {
        let m = &self.m;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn apply(&self, p: Point3) -> Point3 {
        let m = &self.m;
        Point3::new(
            m[0][0] * p.x + m[0][1] * p.y + m[0][2] * p.z,
            m[1][0] * p.x + m[1][1] * p.y + m[1][2] * p.z,
            m[2][0] * p.x + m[2][1] * p.y + m[2][2] * p.z,
        )
    }
}

impl Mul for RotationMatrix {
    type Output = RotationMatrix;

    fn mul(self, rhs: RotationMatrix) -> RotationMatrix {
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..3).map(|k| self.m[i][k] * rhs.m[k][j]).sum();
            }
        }
        RotationMatrix { m }
    }
}

/// Formation-to-inertial rotation for an attitude.
pub fn rotation_from_euler(angles: EulerAngles) -> RotationMatrix {
    RotationMatrix::from_euler(angles)
}

/// Component-wise mean of the vehicle positions.
pub fn centroid(positions: &[Point3]) -> Result<Point3> {
    if positions.is_empty() {
        return Err(Error::EmptyFormation);
    }
    let sum = positions.iter().fold(Point3::ORIGIN, |acc, &p| acc + p);
    Ok(sum * (1.0 / positions.len() as f64))
}

/// Largest distance from the centroid over the given centroid-relative offsets.
pub fn formation_radius(offsets: &[Point3]) -> Result<f64> {
    if offsets.is_empty() {
        return Err(Error::EmptyFormation);
    }
    Ok(offsets.iter().map(|o| o.norm()).fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    fn elemental_product(roll: f64, pitch: f64, yaw: f64) -> [[f64; 3]; 3] {
        let rz = [
            [yaw.cos(), -yaw.sin(), 0.0],
            [yaw.sin(), yaw.cos(), 0.0],
            [0.0, 0.0, 1.0],
        ];
        let ry = [
            [pitch.cos(), 0.0, pitch.sin()],
            [0.0, 1.0, 0.0],
            [-pitch.sin(), 0.0, pitch.cos()],
        ];
        let rx = [
            [1.0, 0.0, 0.0],
            [0.0, roll.cos(), -roll.sin()],
            [0.0, roll.sin(), roll.cos()],
        ];
        let mul = |a: [[f64; 3]; 3], b: [[f64; 3]; 3]| {
            let mut out = [[0.0; 3]; 3];
            for i in 0..3 {
                for j in 0..3 {
                    for k in 0..3 {
                        out[i][j] += a[i][k] * b[k][j];
                    }
                }
            }
            out
        };
        mul(mul(rz, ry), rx)
    }

    #[test]
    fn zero_angles_give_exact_identity() {
        let r = rotation_from_euler(EulerAngles::IDENTITY);
        assert_eq!(r, RotationMatrix::IDENTITY);
    }

    #[test]
    fn quarter_yaw() {
        let r = rotation_from_euler(EulerAngles::new(0.0, 0.0, FRAC_PI_2).unwrap());
        let expected = [[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert!((r.get(i, j) - expected[i][j]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn matches_elemental_rotation_product() {
        let r = rotation_from_euler(EulerAngles::new(0.1, 0.2, 0.3).unwrap());
        let oracle = elemental_product(0.1, 0.2, 0.3);
        for i in 0..3 {
            for j in 0..3 {
                assert!((r.get(i, j) - oracle[i][j]).abs() < 1e-12);
            }
        }
        let rrt = r * r.transpose();
        for i in 0..3 {
            for j in 0..3 {
                let id = if i == j { 1.0 } else { 0.0 };
                assert!((rrt.get(i, j) - id).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn angles_are_normalized() {
        let a = EulerAngles::new(3.0 * PI, -PI, 2.5 * PI).unwrap();
        assert!((a.roll() - PI).abs() < 1e-12);
        assert!((a.pitch() - PI).abs() < 1e-12);
        assert!((a.yaw() - FRAC_PI_2).abs() < 1e-12);
        assert!(EulerAngles::new(f64::NAN, 0.0, 0.0).is_err());
    }

    #[test]
    fn centroid_examples() {
        let c = centroid(&[
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(3.0, 0.0, 0.0),
            Point3::new(0.0, 3.0, 0.0),
        ])
        .unwrap();
        assert_eq!(c, Point3::new(1.0, 1.0, 0.0));
        assert_eq!(
            centroid(&[Point3::new(5.0, 5.0, 5.0)]).unwrap(),
            Point3::new(5.0, 5.0, 5.0)
        );
        assert!(matches!(centroid(&[]), Err(Error::EmptyFormation)));
    }

    #[test]
    fn formation_radius_of_benchmark_offsets() {
        let offsets = [
            Point3::new(0.0, 0.0, 2.0),
            Point3::new(3.0, 0.0, -1.0),
            Point3::new(-3.0, 0.0, -1.0),
        ];
        assert!((formation_radius(&offsets).unwrap() - 10f64.sqrt()).abs() < 1e-15);
        assert_eq!(formation_radius(&[Point3::ORIGIN]).unwrap(), 0.0);
        assert!(formation_radius(&[]).is_err());
    }

    #[test]
    fn point_rejects_non_finite() {
        assert!(Point3::try_new(1.0, f64::INFINITY, 0.0).is_err());
        assert!(Point3::try_from([0.0, 0.0, f64::NAN]).is_err());
    }

    fn coord() -> impl Strategy<Value = f64> {
        -1.0e3..1.0e3
    }

    fn point() -> impl Strategy<Value = Point3> {
        (coord(), coord(), coord()).prop_map(|(x, y, z)| Point3::new(x, y, z))
    }

    proptest! {
        #[test]
        fn centroid_matches_per_axis_sum(pts in proptest::collection::vec(point(), 3)) {
            let c = centroid(&pts).unwrap();
            let sx: f64 = pts.iter().map(|p| p.x).sum();
            let sy: f64 = pts.iter().map(|p| p.y).sum();
            let sz: f64 = pts.iter().map(|p| p.z).sum();
            prop_assert!((c.x - sx / 3.0).abs() < 1e-9);
            prop_assert!((c.y - sy / 3.0).abs() < 1e-9);
            prop_assert!((c.z - sz / 3.0).abs() < 1e-9);
        }

        #[test]
        fn formation_radius_is_max_norm(offsets in proptest::collection::vec(point(), 5)) {
            let mut best = 0.0;
            for o in &offsets {
                let n = (o.x * o.x + o.y * o.y + o.z * o.z).sqrt();
                if n > best {
                    best = n;
                }
            }
            prop_assert_eq!(formation_radius(&offsets).unwrap(), best);
        }

        #[test]
        fn rotation_matches_elemental_product(r in -PI..PI, p in -PI..PI, y in -PI..PI) {
            let m = rotation_from_euler(EulerAngles::new(r, p, y).unwrap());
            let o = elemental_product(r, p, y);
            for i in 0..3 {
                for j in 0..3 {
                    prop_assert!((m.get(i, j) - o[i][j]).abs() < 1e-12);
                }
            }
        }
    }
}
