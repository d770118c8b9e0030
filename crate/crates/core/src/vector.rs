//! Real and complex Cartesian 3-vectors.

use core::ops::{Add, AddAssign, Index, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::float;

/// A real Cartesian 3-vector.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Vec3(pub [f64; 3]);

impl Vec3 {
    pub const ZERO: Vec3 = Vec3([0.0; 3]);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3([x, y, z])
    }

    pub fn x(&self) -> f64 {
        self.0[0]
    }

    pub fn y(&self) -> f64 {
        self.0[1]
    }

    pub fn z(&self) -> f64 {
        self.0[2]
    }

    pub fn dot(&self, other: &Vec3) -> f64 {
        self.0[0] * other.0[0] + self.0[1] * other.0[1] + self.0[2] * other.0[2]
    }

    pub fn cross(&self, o: &Vec3) -> Vec3 {
        let [a1, a2, a3] = self.0;
        let [b1, b2, b3] = o.0;
        Vec3([a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        float::sqrt(self.norm_sqr())
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Promotes to a complex vector with zero imaginary part.
    pub fn to_complex(&self) -> CVec3 {
        CVec3(self.0.map(|v| Complex64::new(v, 0.0)))
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3(self.0.map(|v| -v))
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3(self.0.map(|v| v * s))
    }
}

impl Index<usize> for Vec3 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// A complex Cartesian 3-vector.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CVec3(pub [Complex64; 3]);

impl CVec3 {
    pub const ZERO: CVec3 = CVec3([Complex64::new(0.0, 0.0); 3]);

    pub fn new(x: Complex64, y: Complex64, z: Complex64) -> Self {
        CVec3([x, y, z])
    }

    pub fn conj(&self) -> CVec3 {
        CVec3(self.0.map(|v| v.conj()))
    }

    /// Bilinear dot product `Σ aᵢbᵢ` (no conjugation).
    pub fn dot(&self, o: &CVec3) -> Complex64 {
        self.0[0] * o.0[0] + self.0[1] * o.0[1] + self.0[2] * o.0[2]
    }

    /// Bilinear cross product (no conjugation).
    pub fn cross(&self, o: &CVec3) -> CVec3 {
        let [a1, a2, a3] = self.0;
        let [b1, b2, b3] = o.0;
        CVec3([a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1])
    }

    pub fn scale(&self, s: Complex64) -> CVec3 {
        CVec3(self.0.map(|v| v * s))
    }

    pub fn re(&self) -> Vec3 {
        Vec3(self.0.map(|v| v.re))
    }

    pub fn im(&self) -> Vec3 {
        Vec3(self.0.map(|v| v.im))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|v| v.norm_sqr()).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.norm()))
    }
}

impl Add for CVec3 {
    type Output = CVec3;
    fn add(self, o: CVec3) -> CVec3 {
        CVec3([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl AddAssign for CVec3 {
    fn add_assign(&mut self, o: CVec3) {
        self.0[0] += o.0[0];
        self.0[1] += o.0[1];
        self.0[2] += o.0[2];
    }
}

impl Sub for CVec3 {
    type Output = CVec3;
    fn sub(self, o: CVec3) -> CVec3 {
        CVec3([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl Mul<f64> for CVec3 {
    type Output = CVec3;
    fn mul(self, s: f64) -> CVec3 {
        CVec3(self.0.map(|v| v * s))
    }
}

impl Index<usize> for CVec3 {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}
