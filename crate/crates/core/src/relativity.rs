//! Four-vectors with the (+,−,−,−) metric, z-boosts, helicity polarization
//! bases and the Faraday field-strength tensor.

use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::float;
use crate::vector::{CVec3, Vec3};
use crate::{Error, Result};

/// Physical constants used by operations that are not unit-agnostic.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Constants {
    /// Speed of light.
    pub c: f64,
    /// Reduced Planck constant.
    pub hbar: f64,
    /// Vacuum permittivity.
    pub eps0: f64,
}

impl Constants {
    /// `c = ħ = ε₀ = 1`.
    pub const NATURAL: Constants = Constants { c: 1.0, hbar: 1.0, eps0: 1.0 };

    /// Exact/CODATA SI values.
    pub const SI: Constants = Constants { c: 299_792_458.0, hbar: 1.054_571_817e-34, eps0: 8.854_187_812_8e-12 };

    pub fn mu0(&self) -> f64 {
        1.0 / (self.eps0 * self.c * self.c)
    }
}

/// A contravariant four-vector `(u⁰, u)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FourVector<T = f64> {
    pub t_comp: T,
    pub spatial: [T; 3],
}

impl<T: Copy> FourVector<T> {
    pub const fn new(t_comp: T, spatial: [T; 3]) -> Self {
        FourVector { t_comp, spatial }
    }

    /// Component `μ` (0 is the time component).
    pub fn component(&self, mu: usize) -> T {
        if mu == 0 {
            self.t_comp
        } else {
            self.spatial[mu - 1]
        }
    }
}

impl<T: Copy + Neg<Output = T>> FourVector<T> {
    /// Index lowering with `g = diag(1,−1,−1,−1)`. Applying it twice is the identity.
    pub fn lowered(&self) -> Self {
        FourVector { t_comp: self.t_comp, spatial: self.spatial.map(|s| -s) }
    }
}

impl FourVector<f64> {
    pub fn from_parts(t_comp: f64, spatial: Vec3) -> Self {
        FourVector { t_comp, spatial: spatial.0 }
    }

    pub fn spatial_vec(&self) -> Vec3 {
        Vec3(self.spatial)
    }
}

/// Invariant product `u⁰v⁰ − u·v`.
pub fn minkowski_dot<T>(u: &FourVector<T>, v: &FourVector<T>) -> T
where
    T: Copy + Add<Output = T> + Sub<Output = T> + Mul<Output = T>,
{
    let s = u.spatial[0] * v.spatial[0] + u.spatial[1] * v.spatial[1] + u.spatial[2] * v.spatial[2];
    u.t_comp * v.t_comp - s
}

/// Lorentz factor `γ = (1 − β²)^{-1/2}`.
pub fn lorentz_gamma(beta: f64) -> Result<f64> {
    if !(beta.abs() < 1.0) {
        return Err(Error::Domain("boost velocity must satisfy |beta| < 1"));
    }
    Ok(1.0 / float::sqrt(1.0 - beta * beta))
}

/// Boost along `z` with velocity `β` (in units of `c`):
/// `u⁰′ = γ(u⁰ − βu_z)`, `u_z′ = γ(u_z − βu⁰)`.
pub fn boost_z(u: &FourVector<f64>, beta: f64) -> Result<FourVector<f64>> {
    let gamma = lorentz_gamma(beta)?;
    let [x, y, z] = u.spatial;
    Ok(FourVector { t_comp: gamma * (u.t_comp - beta * z), spatial: [x, y, gamma * (z - beta * u.t_comp)] })
}

/// Helicity basis attached to a wavevector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolarizationBasis {
    pub e_plus: CVec3,
    pub e_minus: CVec3,
    /// Longitudinal unit vector `k/|k|`.
    pub e_par: Vec3,
}

impl PolarizationBasis {
    /// `e_λ` for `λ = ±1`; any other value selects the longitudinal vector.
    pub fn vector(&self, helicity: i8) -> CVec3 {
        match helicity {
            1 => self.e_plus,
            -1 => self.e_minus,
            _ => self.e_par.to_complex(),
        }
    }
}

/// Spherical unit vectors `(e_θ, e_φ)` for direction `k`.
///
/// On the z-axis the azimuth is taken as `φ = 0`, so `e_θ = (±1, 0, 0)` and
/// `e_φ = (0, 1, 0)`.
pub fn spherical_unit_vectors(k: &Vec3) -> Result<(Vec3, Vec3)> {
    let rho = float::sqrt(k.x() * k.x() + k.y() * k.y());
    if rho == 0.0 && k.z() == 0.0 {
        return Err(Error::Domain("polarization basis needs |k| > 0"));
    }
    if rho == 0.0 {
        let s = if k.z() > 0.0 { 1.0 } else { -1.0 };
        return Ok((Vec3::new(s, 0.0, 0.0), Vec3::new(0.0, 1.0, 0.0)));
    }
    let theta = float::atan2(rho, k.z());
    let phi = float::atan2(k.y(), k.x());
    let (st, ct) = float::sin_cos(theta);
    let (sp, cp) = float::sin_cos(phi);
    Ok((Vec3::new(ct * cp, ct * sp, -st), Vec3::new(-sp, cp, 0.0)))
}

/// `e_λ(k) = (e_θ + iλe_φ)/√2` together with `e_∥ = k/|k|`.
pub fn polarization_basis(k: &Vec3) -> Result<PolarizationBasis> {
    let (e_theta, e_phi) = spherical_unit_vectors(k)?;
    let s = core::f64::consts::FRAC_1_SQRT_2;
    let helical = |lambda: f64| CVec3([0, 1, 2].map(|i| Complex64::new(e_theta[i] * s, lambda * e_phi[i] * s)));
    Ok(PolarizationBasis { e_plus: helical(1.0), e_minus: helical(-1.0), e_par: *k * (1.0 / k.norm()) })
}

/// Contravariant field-strength tensor `F^{μν}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FaradayMatrix {
    pub entries: [[f64; 4]; 4],
}

impl FaradayMatrix {
    /// `F_{μν}` (both indices lowered).
    pub fn lowered(&self) -> FaradayMatrix {
        let g = [1.0, -1.0, -1.0, -1.0];
        let mut out = self.entries;
        for (mu, row) in out.iter_mut().enumerate() {
            for (nu, v) in row.iter_mut().enumerate() {
                *v *= g[mu] * g[nu];
            }
        }
        FaradayMatrix { entries: out }
    }

    /// The invariant `F_{μν}F^{μν}`.
    pub fn invariant(&self) -> f64 {
        let low = self.lowered();
        let mut sum = 0.0;
        for mu in 0..4 {
            for nu in 0..4 {
                sum += low.entries[mu][nu] * self.entries[mu][nu];
            }
        }
        sum
    }

    /// `−¼ε₀c²F_{μν}F^{μν}`, the free-field Lagrangian density.
    pub fn field_lagrangian(&self, k: &Constants) -> f64 {
        -0.25 * k.eps0 * k.c * k.c * self.invariant()
    }
}

/// Assembles `F^{μν}` from `E` and `B`, overall factor `1/c`:
///
/// ```text
///        |  0    −Ex    −Ey    −Ez  |
/// 1/c ·  |  Ex    0    −cBz    cBy  |
///        |  Ey   cBz    0     −cBx  |
///        |  Ez  −cBy   cBx     0    |
/// ```
pub fn faraday_from_fields(e: &Vec3, b: &Vec3, c: f64) -> FaradayMatrix {
    let [ex, ey, ez] = e.0;
    let [bx, by, bz] = b.0.map(|v| v * c);
    let inv = 1.0 / c;
    let rows = [[0.0, -ex, -ey, -ez], [ex, 0.0, -bz, by], [ey, bz, 0.0, -bx], [ez, -by, bx, 0.0]];
    FaradayMatrix { entries: rows.map(|r| r.map(|v| v * inv)) }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn dot_examples() {
        let e0 = FourVector::new(1.0, [0.0; 3]);
        assert_eq!(minkowski_dot(&e0, &e0), 1.0);
        let k = FourVector::new(2.0, [0.0, 0.0, 2.0]);
        let x = FourVector::new(3.0, [0.0, 0.0, 1.0]);
        assert_eq!(minkowski_dot(&k, &x), 4.0);
    }

    #[test]
    fn complex_dot() {
        let i = Complex64::new(0.0, 1.0);
        let one = Complex64::new(1.0, 0.0);
        let u = FourVector::new(one, [i, Complex64::new(0.0, 0.0), one]);
        // 1·1 − (i·i + 1·1) = 1
        assert_eq!(minkowski_dot(&u, &u), one);
    }

    #[test]
    fn lowering_twice_is_identity() {
        let u = FourVector::new(1.5, [0.2, -3.0, 4.0]);
        assert_eq!(u.lowered().lowered(), u);
        assert_eq!(u.lowered().spatial, [-0.2, 3.0, -4.0]);
    }

    #[test]
    fn boost_examples() {
        let u = FourVector::new(1.0, [0.0, 0.0, 0.5]);
        assert_eq!(boost_z(&u, 0.0).unwrap(), u);
        let b = boost_z(&u, 0.3).unwrap();
        assert!(close(minkowski_dot(&b, &b), 0.75, 1e-15));

        let beta = 0.6;
        let gamma = 1.25;
        let rest = boost_z(&FourVector::new(1.0, [0.0; 3]), beta).unwrap();
        assert!(close(rest.t_comp, gamma, 1e-15));
        assert!(close(rest.spatial[2], -gamma * beta, 1e-15));
    }

    #[test]
    fn boost_rejects_superluminal() {
        let u = FourVector::new(1.0, [0.0; 3]);
        assert!(matches!(boost_z(&u, 1.0), Err(Error::Domain(_))));
        assert!(boost_z(&u, -1.2).is_err());
        assert!(boost_z(&u, f64::NAN).is_err());
    }

    #[test]
    fn pole_basis() {
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let b = polarization_basis(&Vec3::new(0.0, 0.0, 1.0)).unwrap();
        assert_eq!(b.e_plus.0[0], Complex64::new(s, 0.0));
        assert_eq!(b.e_plus.0[1], Complex64::new(0.0, s));
        assert_eq!(b.e_plus.0[2].norm(), 0.0);

        // south pole: e_θ = (−1,0,0), and e_θ × e_φ still points along k
        let (et, ep) = spherical_unit_vectors(&Vec3::new(0.0, -0.0, -2.0)).unwrap();
        assert_eq!(et, Vec3::new(-1.0, 0.0, -0.0));
        assert_eq!(ep, Vec3::new(0.0, 1.0, 0.0));
        assert_eq!(et.cross(&ep), Vec3::new(0.0, 0.0, -1.0));
    }

    #[test]
    fn zero_k_is_rejected() {
        assert!(polarization_basis(&Vec3::ZERO).is_err());
    }

    #[test]
    fn faraday_layout() {
        let z = faraday_from_fields(&Vec3::ZERO, &Vec3::ZERO, 1.0);
        assert_eq!(z.entries, [[0.0; 4]; 4]);
        let f = faraday_from_fields(&Vec3::new(3.0, 0.0, 0.0), &Vec3::ZERO, 2.0);
        for mu in 0..4 {
            for nu in 0..4 {
                let expect = match (mu, nu) {
                    (0, 1) => -1.5,
                    (1, 0) => 1.5,
                    _ => 0.0,
                };
                assert_eq!(f.entries[mu][nu], expect);
            }
        }
    }

    #[test]
    fn si_constants() {
        let k = Constants::SI;
        assert!(close(k.mu0(), 1.256_637_062_12e-6, 1e-15));
    }
}
