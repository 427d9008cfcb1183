//! Vector algebra and the boresight angle convention.
//!
//! The base-station array lies in the y-z plane with broadside along +x.
//! A boresight is given by a zenith angle measured from +x and an azimuth
//! measured in the y-z plane from +y towards +z:
//!
//! ```text
//! f(zenith, azimuth) = (cos zenith, sin zenith cos azimuth, sin zenith sin azimuth)
//! ```

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3::new(0.0, 0.0, 0.0);
    pub const X: Vec3 = Vec3::new(1.0, 0.0, 0.0);
    pub const Y: Vec3 = Vec3::new(0.0, 1.0, 0.0);
    pub const Z: Vec3 = Vec3::new(0.0, 0.0, 1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    #[inline]
    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    #[inline]
    pub fn cross(self, other: Vec3) -> Vec3 {
        Vec3::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    /// Unit vector in the same direction, or `None` for the zero vector.
    pub fn normalized(self) -> Option<Vec3> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| self * (1.0 / n))
    }

    pub fn distance(self, other: Vec3) -> f64 {
        (self - other).norm()
    }

    /// Angle between two (not necessarily unit) vectors, in `[0, π]`.
    ///
    /// Uses `atan2(|a×b|, a·b)`, which stays accurate near 0 and π.
    pub fn angle_to(self, other: Vec3) -> f64 {
        self.cross(other).norm().atan2(self.dot(other))
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// `acos` with the argument clamped to `[-1, 1]`.
#[inline]
pub fn clamped_acos(c: f64) -> f64 {
    c.clamp(-1.0, 1.0).acos()
}

/// Wraps an angle into `[-π, π)`.
pub fn wrap_angle(a: f64) -> f64 {
    let w = (a + PI).rem_euclid(TAU) - PI;
    // rem_euclid can round up to exactly TAU
    if w >= PI {
        w - TAU
    } else {
        w
    }
}

/// Pointing direction of one element: zenith in `[0, π/2]`, azimuth in `[-π, π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawOrientation", into = "RawOrientation")]
pub struct BoresightOrientation {
    zenith: f64,
    azimuth: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOrientation {
    zenith: f64,
    azimuth: f64,
}

impl TryFrom<RawOrientation> for BoresightOrientation {
    type Error = Error;
    fn try_from(r: RawOrientation) -> Result<Self> {
        BoresightOrientation::new(r.zenith, r.azimuth)
    }
}

impl From<BoresightOrientation> for RawOrientation {
    fn from(o: BoresightOrientation) -> Self {
        RawOrientation {
            zenith: o.zenith,
            azimuth: o.azimuth,
        }
    }
}

impl BoresightOrientation {
    /// Broadside: zenith 0, azimuth 0.
    pub const BROADSIDE: BoresightOrientation = BoresightOrientation {
        zenith: 0.0,
        azimuth: 0.0,
    };

    pub fn new(zenith: f64, azimuth: f64) -> Result<Self> {
        if !zenith.is_finite() || !azimuth.is_finite() {
            return Err(Error::Domain(format!(
                "non-finite boresight angles ({zenith}, {azimuth})"
            )));
        }
        if !(0.0..=FRAC_PI_2).contains(&zenith) {
            return Err(Error::Domain(format!(
                "zenith {zenith} outside [0, pi/2]"
            )));
        }
        Ok(Self {
            zenith,
            azimuth: wrap_angle(azimuth),
        })
    }

    pub fn zenith(&self) -> f64 {
        self.zenith
    }

    pub fn azimuth(&self) -> f64 {
        self.azimuth
    }

    /// Orientation whose boresight is `dir`, if it lies in the front hemisphere.
    pub fn from_direction(dir: Vec3) -> Result<Self> {
        let u = dir
            .normalized()
            .ok_or_else(|| Error::Domain("zero direction".into()))?;
        let zenith = clamped_acos(u.x);
        let azimuth = if u.y == 0.0 && u.z == 0.0 {
            0.0
        } else {
            u.z.atan2(u.y)
        };
        Self::new(zenith, azimuth)
    }
}

/// Unit boresight vector for an orientation.
pub fn boresight_vector(o: BoresightOrientation) -> Vec3 {
    boresight_from_angles(o.zenith, o.azimuth)
}

/// The boresight formula evaluated without range checks.
///
/// Negative zenith is the reflection through the array normal, which finite
/// differences rely on near broadside.
#[inline]
pub fn boresight_from_angles(zenith: f64, azimuth: f64) -> Vec3 {
    let (sz, cz) = zenith.sin_cos();
    let (sa, ca) = azimuth.sin_cos();
    Vec3::new(cz, sz * ca, sz * sa)
}

/// Incidence of a direction relative to a boresight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IncidenceAngles {
    /// Off-boresight angle in `[0, π]`.
    pub epsilon: f64,
    /// Roll around the boresight in `[-π, π)`.
    pub varpi: f64,
}

/// Incidence angles of `direction` against `boresight`; both unit vectors.
///
/// `varpi` is measured from the projection of +z onto the plane orthogonal
/// to the boresight (+y when the boresight is parallel to z).
pub fn incidence_angles(boresight: Vec3, direction: Vec3) -> IncidenceAngles {
    let epsilon = clamped_acos(boresight.dot(direction));
    let reference = project_orthogonal(Vec3::Z, boresight)
        .or_else(|| project_orthogonal(Vec3::Y, boresight))
        .unwrap_or(Vec3::Y);
    let second = boresight.cross(reference);
    let varpi = match project_orthogonal(direction, boresight) {
        Some(p) => wrap_angle(p.dot(second).atan2(p.dot(reference))),
        None => 0.0,
    };
    IncidenceAngles { epsilon, varpi }
}

fn project_orthogonal(v: Vec3, axis: Vec3) -> Option<Vec3> {
    let p = v - axis * v.dot(axis);
    if p.norm() < 1e-12 {
        None
    } else {
        p.normalized()
    }
}

/// Proper rotation of 3-space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotationMatrix {
    pub m: [[f64; 3]; 3],
}

impl RotationMatrix {
    pub const IDENTITY: RotationMatrix = RotationMatrix {
        m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
    };

    /// Rodrigues rotation about `axis` (normalized internally) by `angle`.
    pub fn from_axis_angle(axis: Vec3, angle: f64) -> RotationMatrix {
        let Some(k) = axis.normalized() else {
            return Self::IDENTITY;
        };
        let (s, c) = angle.sin_cos();
        let t = 1.0 - c;
        RotationMatrix {
            m: [
                [
                    c + k.x * k.x * t,
                    k.x * k.y * t - k.z * s,
                    k.x * k.z * t + k.y * s,
                ],
                [
                    k.y * k.x * t + k.z * s,
                    c + k.y * k.y * t,
                    k.y * k.z * t - k.x * s,
                ],
                [
                    k.z * k.x * t - k.y * s,
                    k.z * k.y * t + k.x * s,
                    c + k.z * k.z * t,
                ],
            ],
        }
    }

    #[inline]
    pub fn apply(&self, v: Vec3) -> Vec3 {
        let m = &self.m;
        Vec3::new(
            m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z,
        )
    }

    pub fn transpose(&self) -> RotationMatrix {
        let mut t = [[0.0; 3]; 3];
        for (i, row) in self.m.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                t[j][i] = *v;
            }
        }
        RotationMatrix { m: t }
    }

    pub fn compose(&self, other: &RotationMatrix) -> RotationMatrix {
        let mut out = [[0.0; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = (0..3).map(|k| self.m[i][k] * other.m[k][j]).sum();
            }
        }
        RotationMatrix { m: out }
    }

    pub fn determinant(&self) -> f64 {
        let m = &self.m;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Largest entry of `|RᵀR − I|`.
    pub fn orthonormality_error(&self) -> f64 {
        let p = self.transpose().compose(self);
        let mut err: f64 = 0.0;
        for (i, row) in p.m.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                err = err.max((v - target).abs());
            }
        }
        err
    }
}

/// Minimal rotation taking +x onto `boresight_vector(o)`.
pub fn rotation_from_angles(o: BoresightOrientation) -> RotationMatrix {
    let b = boresight_vector(o);
    let axis = Vec3::X.cross(b);
    if axis.norm() < 1e-15 {
        // zenith 0; the antipode is unreachable for zenith <= pi/2
        return RotationMatrix::IDENTITY;
    }
    RotationMatrix::from_axis_angle(axis, Vec3::X.angle_to(b))
}
