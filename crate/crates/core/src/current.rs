//! Photon number, current and helicity densities built as bilinears of the
//! positive- and negative-frequency fields, plus the continuity residual.
//!
//! With `X⁻ = (X⁺)*` every density has the form `−(4/ħ) Im(X⁺·Y⁻)` or the
//! analogous cross product, which is real by construction. The prefactor is
//! fixed so that `∫ρ_p dx` equals the k-space norm and `J_p = vρ_p e_k` for a
//! single direction.

use alloc::vec::Vec;

use crate::modes::Polarization;
use crate::stencil;
use crate::synthesis::{uniform_step, FieldSnapshot, SpatialGrid};
use crate::vector::{CVec3, Vec3};
use crate::{Error, Result};

/// Densities on a spatial grid at one time (natural units).
#[derive(Clone, Debug, PartialEq)]
pub struct CurrentField {
    pub time: f64,
    pub grid: SpatialGrid,
    pub rho: Vec<f64>,
    pub j: Vec<Vec3>,
    /// Helicity density, present when the snapshot held a single polarization.
    pub s_hel: Option<Vec<Vec3>>,
}

/// `−4 Im(a·b*)`.
pub(crate) fn dot_density(a: &CVec3, b: &CVec3) -> f64 {
    -4.0 * a.dot(&b.conj()).im
}

/// `−4 Im(a × b*)`.
pub(crate) fn cross_density(a: &CVec3, b: &CVec3) -> Vec3 {
    a.cross(&b.conj()).im() * -4.0
}

/// `ρ_p = (2i/ħ) A⁺·E⁻ + c.c.`
pub fn number_density(snap: &FieldSnapshot) -> Vec<f64> {
    snap.a_plus.iter().zip(&snap.e_plus).map(|(a, e)| dot_density(a, e)).collect()
}

/// `J_p = c[(2i/ħ)(A⊥⁺ × cB⁻ + (φ⁺/c)E∥⁻) + c.c.]`.
pub fn current_density(snap: &FieldSnapshot) -> Vec<Vec3> {
    (0..snap.len())
        .map(|i| {
            let transverse = cross_density(&snap.a_perp_plus[i], &snap.b_plus[i]);
            let e_par = snap.e_par_plus[i].conj().scale(snap.phi_plus[i]);
            transverse + e_par.im() * -4.0
        })
        .collect()
}

/// `S_λ = 2i A_λ⁺ × E_λ⁻ + c.c.` for a single-λ snapshot.
pub fn helicity_density(snap: &FieldSnapshot) -> Result<Vec<Vec3>> {
    let n_pols = snap.content.iter().filter(|c| **c).count();
    if n_pols > 1 {
        return Err(Error::MixedHelicity);
    }
    Ok(snap.a_plus.iter().zip(&snap.e_plus).map(|(a, e)| a.cross(&e.conj()).re() * -4.0).collect())
}

/// Number density, current and (when defined) helicity density.
pub fn current_field(snap: &FieldSnapshot) -> CurrentField {
    let s_hel = match snap.single_polarization() {
        Some(_) => helicity_density(snap).ok(),
        None if snap.content == [false; 3] => Some(alloc::vec![Vec3::ZERO; snap.len()]),
        None => None,
    };
    CurrentField {
        time: snap.time,
        grid: snap.grid.clone(),
        rho: number_density(snap),
        j: current_density(snap),
        s_hel,
    }
}

/// Riemann sum `Σ ρ Δx^d`.
pub fn position_norm(rho: &[f64], grid: &SpatialGrid) -> f64 {
    rho.iter().sum::<f64>() * grid.cell_volume()
}

/// `∂_tρ + ∇·J − source` with a centered time difference and periodic
/// second-order central differences in space.
pub fn continuity_residual(
    prev: &CurrentField,
    now: &CurrentField,
    next: &CurrentField,
    source: &[f64],
) -> Result<Vec<f64>> {
    if prev.grid != now.grid || now.grid != next.grid {
        return Err(Error::GridMismatch("current fields sampled on different grids"));
    }
    if source.len() != now.rho.len() {
        return Err(Error::GridMismatch("source length differs from grid size"));
    }
    let dt = uniform_step(prev.time, now.time, next.time)?;
    let d_rho = stencil::centered_time(&prev.rho, &next.rho, dt);
    let div_j = stencil::divergence(&now.j, &now.grid);
    Ok((0..source.len()).map(|i| d_rho[i] + div_j[i] - source[i]).collect())
}

/// `λħρ_p e_k` for a helical mode direction (helper for checks).
pub fn expected_helicity(rho: &[f64], pol: Polarization, e_k: &Vec3) -> Vec<Vec3> {
    let lambda = pol.helicity() as f64;
    rho.iter().map(|r| *e_k * (lambda * r)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modes::{gaussian_packet, normalize, Dimension, KGrid, ModeAmplitudes};
    use crate::synthesis::synthesize;
    use num_complex::Complex64;

    fn single_mode(pol: Polarization) -> (ModeAmplitudes, SpatialGrid) {
        let g = KGrid::cube(4, 0.5, Vec3::new(0.0, 0.0, 2.0)).unwrap();
        let idx = g.nearest_index(&Vec3::new(0.25, -0.25, 2.25)).unwrap();
        let mut m = ModeAmplitudes::zeros(g.clone(), 1.0).unwrap();
        m.set_amplitude(idx, pol, Complex64::new(0.6, 0.8));
        (normalize(&m).unwrap(), SpatialGrid::dual_box(&g, 4).unwrap())
    }

    #[test]
    fn single_mode_density_is_uniform() {
        let (m, grid) = single_mode(Polarization::Plus);
        let snap = synthesize(&m, &grid, 0.4);
        let rho = number_density(&snap);
        let inv_v = 1.0 / grid.length().powi(3);
        assert!(rho.iter().all(|r| (r - inv_v).abs() < 1e-12 * inv_v));
        assert!((position_norm(&rho, &grid) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_mode_current_and_helicity() {
        for pol in [Polarization::Plus, Polarization::Minus] {
            let (m, grid) = single_mode(pol);
            let k = (0..m.len()).find(|&i| m.amplitude(i, pol).norm() > 0.0).map(|i| m.grid().point(i)).unwrap();
            let e_k = k * (1.0 / k.norm());
            let cf = current_field(&synthesize(&m, &grid, 0.0));
            let s = cf.s_hel.as_ref().unwrap();
            let expect = expected_helicity(&cf.rho, pol, &e_k);
            for i in 0..cf.rho.len() {
                assert!((cf.j[i] - e_k * cf.rho[i]).max_abs() < 1e-12 * cf.rho[i]);
                assert!((s[i] - expect[i]).max_abs() < 1e-12 * cf.rho[i]);
            }
        }
    }

    #[test]
    fn longitudinal_mode_carries_no_current_or_helicity() {
        let (m, grid) = single_mode(Polarization::Parallel);
        let cf = current_field(&synthesize(&m, &grid, 0.2));
        assert!(cf.j.iter().all(|v| v.max_abs() == 0.0));
        assert!(cf.s_hel.unwrap().iter().all(|v| v.max_abs() == 0.0));
        assert!(cf.rho.iter().all(|r| *r == 0.0));
    }

    #[test]
    fn mixed_helicity_is_rejected() {
        let g = KGrid::cube(2, 0.5, Vec3::new(0.0, 0.0, 2.0)).unwrap();
        let m = ModeAmplitudes::from_fn(g.clone(), 1.0, |_, p| {
            if p.is_transverse() {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .unwrap();
        let grid = SpatialGrid::dual_box(&g, 4).unwrap();
        let snap = synthesize(&m, &grid, 0.0);
        assert_eq!(helicity_density(&snap), Err(Error::MixedHelicity));
        assert!(current_field(&snap).s_hel.is_none());
    }

    #[test]
    fn norm_is_quadratic_in_amplitude() {
        let g = KGrid::cube(4, 0.5, Vec3::new(0.0, 0.0, 2.0)).unwrap();
        let p = gaussian_packet(&g, &Vec3::new(0.0, 0.0, 2.0), 0.5, Polarization::Plus, 1.0).unwrap();
        let grid = SpatialGrid::dual_box(&g, 8).unwrap();
        let n1 = position_norm(&number_density(&synthesize(&p, &grid, 0.0)), &grid);
        let p2 = p.scaled(Complex64::new(2.0, 0.0));
        let n2 = position_norm(&number_density(&synthesize(&p2, &grid, 0.0)), &grid);
        assert!((n1 - 1.0).abs() < 1e-12);
        assert!((n2 - 4.0 * n1).abs() < 1e-12);
    }

    #[test]
    fn static_mode_has_zero_residual() {
        let (m, grid) = single_mode(Polarization::Minus);
        let cfs: Vec<_> = [0.0, 0.25, 0.5].iter().map(|&t| current_field(&synthesize(&m, &grid, t))).collect();
        let zero = alloc::vec![0.0; grid.len()];
        let r = continuity_residual(&cfs[0], &cfs[1], &cfs[2], &zero).unwrap();
        let scale = cfs[1].rho[0];
        assert!(r.iter().all(|x| x.abs() < 1e-12 * scale));
        let other = SpatialGrid::new(Dimension::Three, 3, 1.0, Vec3::ZERO).unwrap();
        let mut bad = cfs[2].clone();
        bad.grid = other;
        assert!(continuity_residual(&cfs[0], &cfs[1], &bad, &zero).is_err());
    }
}
