//! Positive-frequency potentials and fields synthesized from mode amplitudes.
//!
//! `A⁺(x,t) = i√(ħ/2ε₀) Σ_λ Σ_k w(k) c_λ(k) e_λ(k) e^{−i(ω_k t − k·x)}`, with
//! `E⁺ = −∂_tA⁺ − ∇φ⁺`, `B⁺ = ∇×A⁺` and the Lorenz-gauge scalar potential
//! `φ⁺ = vA⁺_∥`. All derivatives are taken per mode in k-space. Negative
//! frequency parts are the complex conjugates and are never synthesized.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;

use crate::float;
use crate::modes::{Dimension, ModeAmplitudes, Polarization};
use crate::relativity::{minkowski_dot, polarization_basis, Constants, FourVector};
use crate::stencil;
use crate::vector::{CVec3, Vec3};
use crate::{Error, Result};

/// Uniform periodic sampling grid. In one dimension it lies on the `z` axis.
#[derive(Clone, Debug, PartialEq)]
pub struct SpatialGrid {
    n_per_axis: usize,
    spacing: f64,
    origin: Vec3,
    dimension: Dimension,
}

impl SpatialGrid {
    pub fn new(dimension: Dimension, n_per_axis: usize, spacing: f64, origin: Vec3) -> Result<SpatialGrid> {
        if n_per_axis == 0 {
            return Err(Error::Domain("spatial grid needs at least one point per axis"));
        }
        if !(spacing > 0.0) || !spacing.is_finite() {
            return Err(Error::Domain("spatial grid spacing must be positive"));
        }
        let origin = match dimension {
            Dimension::One => Vec3::new(0.0, 0.0, origin.z()),
            Dimension::Three => origin,
        };
        Ok(SpatialGrid { n_per_axis, spacing, origin, dimension })
    }

    /// Grid of `n` points per axis covering `[center − L/2, center + L/2)`.
    pub fn centered(dimension: Dimension, n_per_axis: usize, length: f64, center: Vec3) -> Result<SpatialGrid> {
        let spacing = length / n_per_axis as f64;
        SpatialGrid::new(dimension, n_per_axis, spacing, center - Vec3::new(1.0, 1.0, 1.0) * (length / 2.0))
    }

    /// Box of side `2π/Δk` centered on the origin, over which modes of the
    /// k-grid are mutually orthogonal.
    pub fn dual_box(kgrid: &crate::modes::KGrid, n_per_axis: usize) -> Result<SpatialGrid> {
        SpatialGrid::centered(kgrid.dimension(), n_per_axis, 2.0 * PI / kgrid.spacing(), Vec3::ZERO)
    }

    pub fn n_per_axis(&self) -> usize {
        self.n_per_axis
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn origin(&self) -> Vec3 {
        self.origin
    }

    pub fn dimension(&self) -> Dimension {
        self.dimension
    }

    pub fn len(&self) -> usize {
        match self.dimension {
            Dimension::One => self.n_per_axis,
            Dimension::Three => self.n_per_axis.pow(3),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Side length `nΔx` of the periodic box.
    pub fn length(&self) -> f64 {
        self.n_per_axis as f64 * self.spacing
    }

    /// `Δx^d`.
    pub fn cell_volume(&self) -> f64 {
        float::powi(self.spacing, self.dimension.exponent())
    }

    /// Coordinates along one axis; unspanned axes hold a single zero.
    pub fn axis(&self, axis: usize) -> Vec<f64> {
        if self.dimension == Dimension::One && axis != 2 {
            return vec![0.0];
        }
        (0..self.n_per_axis).map(|j| self.origin[axis] + j as f64 * self.spacing).collect()
    }

    /// Position at a flat index (lexicographic, `z` fastest).
    pub fn point(&self, index: usize) -> Vec3 {
        let n = self.n_per_axis;
        let at = |axis: usize, j: usize| self.origin[axis] + j as f64 * self.spacing;
        match self.dimension {
            Dimension::One => Vec3::new(0.0, 0.0, at(2, index)),
            Dimension::Three => {
                let (ix, rest) = (index / (n * n), index % (n * n));
                Vec3::new(at(0, ix), at(1, rest / n), at(2, rest % n))
            }
        }
    }
}

/// Positive-frequency fields sampled on a grid at one time.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldSnapshot {
    pub time: f64,
    pub grid: SpatialGrid,
    pub a_plus: Vec<CVec3>,
    pub e_plus: Vec<CVec3>,
    pub b_plus: Vec<CVec3>,
    pub phi_plus: Vec<Complex64>,
    /// Transverse part of `A⁺` (from `λ = ±1` modes).
    pub a_perp_plus: Vec<CVec3>,
    /// Longitudinal part of `E⁺` (from `λ = ∥` modes).
    pub e_par_plus: Vec<CVec3>,
    /// Which of `λ = +1, −1, ∥` contributed.
    pub content: [bool; 3],
    /// Dispersion speed of the synthesizing modes.
    pub speed: f64,
}

impl FieldSnapshot {
    pub fn len(&self) -> usize {
        self.a_plus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a_plus.is_empty()
    }

    /// The single polarization present, if exactly one is.
    pub fn single_polarization(&self) -> Option<Polarization> {
        let mut found = None;
        for pol in Polarization::ALL {
            if self.content[pol.index()] {
                if found.is_some() {
                    return None;
                }
                found = Some(pol);
            }
        }
        found
    }

    /// Total real field `X⁺ + X⁻ = 2 Re X⁺`.
    pub fn total(field: &[CVec3]) -> Vec<Vec3> {
        field.iter().map(|v| v.re() * 2.0).collect()
    }

    /// Largest imaginary part of `X⁺ + (X⁺)*` over the grid (zero up to round-off).
    pub fn hermitian_residue(field: &[CVec3]) -> f64 {
        field.iter().map(|v| (*v + v.conj()).im().max_abs()).fold(0.0, f64::max)
    }
}

/// Which measure multiplies the `B` mode sum.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FieldMeasure {
    /// `d³k/((2π)³2ω)`, the same as for `A`.
    #[default]
    Invariant,
    /// `d³k/(2π)³` without `1/2ω` in `B` only, so `J` and `ρ` use different
    /// measures and continuity breaks. Used for fault injection.
    Flat,
}

/// How the mode sum is evaluated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Evaluation {
    /// Per-point sum over all modes, `O(N_k N_x)`. Reference path.
    Direct,
    /// Axis-by-axis factorized sum `e^{ik·x} = Π e^{ik_a x_a}`.
    #[default]
    Separable,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SynthesisOptions {
    pub evaluation: Evaluation,
    pub field_measure: FieldMeasure,
}

// Channel layout of a mode's coefficient bundle.
const CH_A: usize = 0;
const CH_E: usize = 3;
const CH_B: usize = 6;
const CH_PHI: usize = 9;
const CH_APAR: usize = 10;
const CH_EPAR: usize = 13;
const CHANNELS: usize = 16;

/// Per-mode coefficients of `A⁺, E⁺, B⁺, φ⁺, A⁺_∥, E⁺_∥` at `x = 0`,
/// time phase included.
fn mode_coefficients(m: &ModeAmplitudes, t: f64, opts: &SynthesisOptions) -> Vec<[Complex64; CHANNELS]> {
    let zero = Complex64::new(0.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let v = m.speed();
    let grid = m.grid();
    let mut out = vec![[zero; CHANNELS]; m.len()];
    for (idx, coef) in out.iter_mut().enumerate() {
        let k = grid.point(idx);
        let k_mag = k.norm();
        let omega = v * k_mag;
        let w = grid.measure_weight(&k, v);
        let w_field = match opts.field_measure {
            FieldMeasure::Invariant => w,
            FieldMeasure::Flat => w * 2.0 * omega,
        };
        let (s, c) = float::sin_cos(-omega * t);
        let phase = Complex64::new(c, s);
        // grid points never sit at k = 0
        let basis = polarization_basis(&k).expect("k-grid excludes k = 0");
        for pol in Polarization::ALL {
            let amp = m.amplitude(idx, pol);
            if amp.norm_sqr() == 0.0 {
                continue;
            }
            let alpha = i * FRAC_1_SQRT_2 * amp * phase;
            let e = basis.vector(pol.helicity());
            let a_coef = e.scale(alpha * w);
            let alpha_f = alpha * w_field;
            let (e_coef, b_coef, phi_coef) = match pol {
                Polarization::Plus | Polarization::Minus => {
                    // −∂_t → iω;  ∇× → λ|k| on helical modes
                    let lambda = pol.helicity() as f64;
                    (e.scale(i * omega * alpha * w), e.scale(alpha_f * (lambda * k_mag)), zero)
                }
                Polarization::Parallel => {
                    // −∂_tA − ∇φ = i(ω − v|k|)A_∥ with φ = vA_∥
                    let e_par = e.scale(i * (omega - v * k_mag) * alpha * w);
                    (e_par, CVec3::ZERO, alpha * w * v)
                }
            };
            for a in 0..3 {
                coef[CH_A + a] += a_coef.0[a];
                coef[CH_E + a] += e_coef.0[a];
                coef[CH_B + a] += b_coef.0[a];
            }
            coef[CH_PHI] += phi_coef;
            if pol == Polarization::Parallel {
                for a in 0..3 {
                    coef[CH_APAR + a] += a_coef.0[a];
                    coef[CH_EPAR + a] += e_coef.0[a];
                }
            }
        }
    }
    out
}

fn phase_table(ks: &[f64], xs: &[f64]) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(ks.len() * xs.len());
    for &k in ks {
        for &x in xs {
            let (s, c) = float::sin_cos(k * x);
            out.push(Complex64::new(c, s));
        }
    }
    out
}

fn sum_direct(m: &ModeAmplitudes, coefs: &[[Complex64; CHANNELS]], grid: &SpatialGrid) -> Vec<[Complex64; CHANNELS]> {
    let zero = Complex64::new(0.0, 0.0);
    let kpts: Vec<Vec3> = m.grid().points().collect();
    let live: Vec<usize> = (0..coefs.len()).filter(|&j| coefs[j].iter().any(|c| c.norm_sqr() > 0.0)).collect();
    (0..grid.len())
        .map(|p| {
            let x = grid.point(p);
            let mut acc = [zero; CHANNELS];
            for &j in &live {
                let (s, c) = float::sin_cos(kpts[j].dot(&x));
                let ph = Complex64::new(c, s);
                for (a, v) in acc.iter_mut().zip(&coefs[j]) {
                    *a += v * ph;
                }
            }
            acc
        })
        .collect()
}

fn sum_separable(
    m: &ModeAmplitudes,
    coefs: &[[Complex64; CHANNELS]],
    grid: &SpatialGrid,
) -> Vec<[Complex64; CHANNELS]> {
    let zero = Complex64::new(0.0, 0.0);
    let kg = m.grid();
    let kax: [Vec<f64>; 3] = [kg.axis(0), kg.axis(1), kg.axis(2)];
    let xax: [Vec<f64>; 3] = [grid.axis(0), grid.axis(1), grid.axis(2)];
    let [nkx, nky, nkz] = [kax[0].len(), kax[1].len(), kax[2].len()];
    let [nx, ny, nz] = [xax[0].len(), xax[1].len(), xax[2].len()];
    let ph: [Vec<Complex64>; 3] =
        [phase_table(&kax[0], &xax[0]), phase_table(&kax[1], &xax[1]), phase_table(&kax[2], &xax[2])];
    let live: Vec<bool> = (0..CHANNELS).map(|ch| coefs.iter().any(|c| c[ch].norm_sqr() > 0.0)).collect();
    let chans: Vec<usize> = (0..CHANNELS).filter(|&ch| live[ch]).collect();
    let nc = chans.len();
    if nc == 0 {
        return vec![[zero; CHANNELS]; grid.len()];
    }

    // contract k_z → z
    let mut t1 = vec![zero; nkx * nky * nz * nc];
    for ikx in 0..nkx {
        for iky in 0..nky {
            for ikz in 0..nkz {
                let c = &coefs[(ikx * nky + iky) * nkz + ikz];
                let row = &ph[2][ikz * nz..(ikz + 1) * nz];
                let base = (ikx * nky + iky) * nz;
                for (iz, p) in row.iter().enumerate() {
                    let dst = &mut t1[(base + iz) * nc..(base + iz + 1) * nc];
                    for (d, &ch) in dst.iter_mut().zip(&chans) {
                        *d += c[ch] * p;
                    }
                }
            }
        }
    }
    // contract k_y → y
    let mut t2 = vec![zero; nkx * ny * nz * nc];
    for ikx in 0..nkx {
        for iky in 0..nky {
            let src = &t1[(ikx * nky + iky) * nz * nc..(ikx * nky + iky + 1) * nz * nc];
            for iy in 0..ny {
                let p = ph[1][iky * ny + iy];
                let dst = &mut t2[(ikx * ny + iy) * nz * nc..(ikx * ny + iy + 1) * nz * nc];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += s * p;
                }
            }
        }
    }
    drop(t1);
    // contract k_x → x
    let mut flat = vec![zero; nx * ny * nz * nc];
    for ikx in 0..nkx {
        let src = &t2[ikx * ny * nz * nc..(ikx + 1) * ny * nz * nc];
        for ix in 0..nx {
            let p = ph[0][ikx * nx + ix];
            let dst = &mut flat[ix * ny * nz * nc..(ix + 1) * ny * nz * nc];
            for (d, s) in dst.iter_mut().zip(src) {
                *d += s * p;
            }
        }
    }
    flat.chunks_exact(nc)
        .take(grid.len())
        .map(|vals| {
            let mut acc = [zero; CHANNELS];
            for (v, &ch) in vals.iter().zip(&chans) {
                acc[ch] = *v;
            }
            acc
        })
        .collect()
}

/// Synthesizes `A⁺, E⁺, B⁺, φ⁺` from `m` on `grid` at time `t`.
pub fn synthesize(m: &ModeAmplitudes, grid: &SpatialGrid, t: f64) -> FieldSnapshot {
    synthesize_with(m, grid, t, &SynthesisOptions::default())
}

pub fn synthesize_with(m: &ModeAmplitudes, grid: &SpatialGrid, t: f64, opts: &SynthesisOptions) -> FieldSnapshot {
    let coefs = mode_coefficients(m, t, opts);
    let sums = match opts.evaluation {
        Evaluation::Direct => sum_direct(m, &coefs, grid),
        Evaluation::Separable => sum_separable(m, &coefs, grid),
    };
    let vec3 = |s: &[Complex64; CHANNELS], at: usize| CVec3([s[at], s[at + 1], s[at + 2]]);
    let n = sums.len();
    let mut snap = FieldSnapshot {
        time: t,
        grid: grid.clone(),
        a_plus: Vec::with_capacity(n),
        e_plus: Vec::with_capacity(n),
        b_plus: Vec::with_capacity(n),
        phi_plus: Vec::with_capacity(n),
        a_perp_plus: Vec::with_capacity(n),
        e_par_plus: Vec::with_capacity(n),
        content: m.occupied(),
        speed: m.speed(),
    };
    for s in &sums {
        let a = vec3(s, CH_A);
        snap.a_plus.push(a);
        snap.e_plus.push(vec3(s, CH_E));
        snap.b_plus.push(vec3(s, CH_B));
        snap.phi_plus.push(s[CH_PHI]);
        snap.a_perp_plus.push(a - vec3(s, CH_APAR));
        snap.e_par_plus.push(vec3(s, CH_EPAR));
    }
    snap
}

fn check_same_grid(a: &FieldSnapshot, b: &FieldSnapshot) -> Result<()> {
    if a.grid != b.grid {
        return Err(Error::GridMismatch("snapshots sampled on different grids"));
    }
    Ok(())
}

/// Uniform time step of three consecutive samples.
pub(crate) fn uniform_step(t_prev: f64, t_now: f64, t_next: f64) -> Result<f64> {
    let (d1, d2) = (t_now - t_prev, t_next - t_now);
    if !(d1 > 0.0) || (d1 - d2).abs() > 1e-9 * d1.abs() {
        return Err(Error::GridMismatch("time samples are not uniformly spaced"));
    }
    Ok(0.5 * (d1 + d2))
}

/// Residuals of `∇·E = ρ_e/ε₀` and `∂_tE − c²∇×B = −J_e/ε₀` on the total real
/// fields, with centered differences in time and periodic second-order
/// central differences in space. Natural units.
pub fn maxwell_residual(
    prev: &FieldSnapshot,
    now: &FieldSnapshot,
    next: &FieldSnapshot,
    rho_e: &[f64],
    j_e: &[Vec3],
) -> Result<(Vec<f64>, Vec<Vec3>)> {
    check_same_grid(prev, now)?;
    check_same_grid(now, next)?;
    if rho_e.len() != now.len() || j_e.len() != now.len() {
        return Err(Error::GridMismatch("source fields do not match the snapshot grid"));
    }
    let dt = uniform_step(prev.time, now.time, next.time)?;
    let grid = &now.grid;
    let e_now = FieldSnapshot::total(&now.e_plus);
    let b_now = FieldSnapshot::total(&now.b_plus);
    let div_e = stencil::divergence(&e_now, grid);
    let curl_b = stencil::curl(&b_now, grid);
    let e_prev = FieldSnapshot::total(&prev.e_plus);
    let e_next = FieldSnapshot::total(&next.e_plus);
    let scalar = div_e.iter().zip(rho_e).map(|(d, r)| d - r).collect();
    let vector = (0..now.len()).map(|i| (e_next[i] - e_prev[i]) * (1.0 / (2.0 * dt)) - curl_b[i] + j_e[i]).collect();
    Ok((scalar, vector))
}

/// `½ε₀(E·E − c²B·B) − J_e^μ A_μ`.
pub fn lagrangian_density(e: &Vec3, b: &Vec3, j_e: &FourVector<f64>, a: &FourVector<f64>, k: &Constants) -> f64 {
    0.5 * k.eps0 * (e.norm_sqr() - k.c * k.c * b.norm_sqr()) - minkowski_dot(j_e, a)
}

/// Momentum conjugate to `A`: `Π = −ε₀E`.
pub fn conjugate_momentum(e: &[Vec3], eps0: f64) -> Vec<Vec3> {
    e.iter().map(|v| *v * -eps0).collect()
}
