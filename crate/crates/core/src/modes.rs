//! One-photon states as invariant amplitudes `c_λ(k)` on a discrete
//! wavevector grid, weighted by the Lorentz-invariant measure
//! `d³k / ((2π)³ 2ω_k)`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::float;
use crate::relativity::{boost_z, lorentz_gamma, FourVector};
use crate::vector::Vec3;
use crate::{Error, Result};

/// The three polarization labels `λ ∈ {+1, −1, ∥}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Polarization {
    Plus,
    Minus,
    Parallel,
}

impl Polarization {
    pub const ALL: [Polarization; 3] = [Polarization::Plus, Polarization::Minus, Polarization::Parallel];

    /// Storage slot of this polarization inside a mode.
    pub fn index(self) -> usize {
        match self {
            Polarization::Plus => 0,
            Polarization::Minus => 1,
            Polarization::Parallel => 2,
        }
    }

    /// `+1`, `−1`, or `0` for the longitudinal mode.
    pub fn helicity(self) -> i8 {
        match self {
            Polarization::Plus => 1,
            Polarization::Minus => -1,
            Polarization::Parallel => 0,
        }
    }

    pub fn is_transverse(self) -> bool {
        self != Polarization::Parallel
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dimension {
    /// A line of wavevectors along `z`.
    One,
    Three,
}

impl Dimension {
    pub fn exponent(self) -> i32 {
        match self {
            Dimension::One => 1,
            Dimension::Three => 3,
        }
    }
}

/// Uniform tensor-product wavevector grid.
///
/// Axis values are `center + (j − n/2 + ½)Δk` with the half-cell shift and
/// `center + (j − n/2)Δk` without it. In one dimension the grid lies on the
/// `k_z` axis and only `center.z` is used.
#[derive(Clone, Debug, PartialEq)]
pub struct KGrid {
    n_per_axis: usize,
    spacing: f64,
    center: Vec3,
    half_offset: bool,
    dimension: Dimension,
}

impl KGrid {
    pub fn new(
        dimension: Dimension,
        n_per_axis: usize,
        spacing: f64,
        center: Vec3,
        half_offset: bool,
    ) -> Result<KGrid> {
        if n_per_axis == 0 {
            return Err(Error::Domain("k-grid needs at least one point per axis"));
        }
        if !(spacing > 0.0) || !spacing.is_finite() {
            return Err(Error::Domain("k-grid spacing must be positive"));
        }
        let center = match dimension {
            Dimension::One => Vec3::new(0.0, 0.0, center.z()),
            Dimension::Three => center,
        };
        let grid = KGrid { n_per_axis, spacing, center, half_offset, dimension };
        let tiny = 1e-12 * spacing;
        let near_zero = |axis: usize| grid.axis(axis).iter().any(|v| v.abs() < tiny);
        let has_origin = match dimension {
            Dimension::One => near_zero(2),
            Dimension::Three => near_zero(0) && near_zero(1) && near_zero(2),
        };
        if has_origin {
            return Err(Error::Domain("k-grid contains k = 0"));
        }
        Ok(grid)
    }

    /// Half-offset cube of `n³` points around `center`.
    pub fn cube(n_per_axis: usize, spacing: f64, center: Vec3) -> Result<KGrid> {
        KGrid::new(Dimension::Three, n_per_axis, spacing, center, true)
    }

    /// Half-offset line of `n` points on the `k_z` axis around `center_z`.
    pub fn line(n: usize, spacing: f64, center_z: f64) -> Result<KGrid> {
        KGrid::new(Dimension::One, n, spacing, Vec3::new(0.0, 0.0, center_z), true)
    }

    pub fn n_per_axis(&self) -> usize {
        self.n_per_axis
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn center(&self) -> Vec3 {
        self.center
    }

    pub fn half_offset(&self) -> bool {
        self.half_offset
    }

    pub fn dimension(&self) -> Dimension {
        self.dimension
    }

    /// Number of grid points.
    pub fn len(&self) -> usize {
        match self.dimension {
            Dimension::One => self.n_per_axis,
            Dimension::Three => self.n_per_axis.pow(3),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn axis_start(&self, axis: usize) -> f64 {
        let shift = if self.half_offset { 0.5 } else { 0.0 };
        self.center[axis] + (shift - (self.n_per_axis as f64) / 2.0) * self.spacing
    }

    /// Values along one Cartesian axis. Axes that the grid does not span hold
    /// a single zero.
    pub fn axis(&self, axis: usize) -> Vec<f64> {
        if self.dimension == Dimension::One && axis != 2 {
            return vec![0.0];
        }
        let start = self.axis_start(axis);
        (0..self.n_per_axis).map(|j| start + j as f64 * self.spacing).collect()
    }

    /// Wavevector at a flat index (lexicographic, `z` fastest).
    pub fn point(&self, index: usize) -> Vec3 {
        let n = self.n_per_axis;
        let value = |axis: usize, j: usize| self.axis_start(axis) + j as f64 * self.spacing;
        match self.dimension {
            Dimension::One => Vec3::new(0.0, 0.0, value(2, index)),
            Dimension::Three => {
                let (ix, rest) = (index / (n * n), index % (n * n));
                let (iy, iz) = (rest / n, rest % n);
                Vec3::new(value(0, ix), value(1, iy), value(2, iz))
            }
        }
    }

    pub fn points(&self) -> impl Iterator<Item = Vec3> + '_ {
        (0..self.len()).map(move |i| self.point(i))
    }

    /// Whether `k` lies within the grid's cell extent.
    pub fn contains(&self, k: &Vec3) -> bool {
        let lo = |axis: usize| self.axis_start(axis) - 0.5 * self.spacing;
        let hi = |axis: usize| lo(axis) + self.n_per_axis as f64 * self.spacing;
        let inside = |axis: usize| k[axis] >= lo(axis) && k[axis] <= hi(axis);
        match self.dimension {
            Dimension::One => k.x() == 0.0 && k.y() == 0.0 && inside(2),
            Dimension::Three => inside(0) && inside(1) && inside(2),
        }
    }

    /// Invariant measure `Δk^d / ((2π)^d 2ω_k)` with `ω_k = v|k|`.
    pub fn measure_weight(&self, k: &Vec3, speed: f64) -> f64 {
        let d = self.dimension.exponent();
        let omega = speed * k.norm();
        float::powi(self.spacing / (2.0 * PI), d) / (2.0 * omega)
    }

    /// Fractional grid coordinate of `value` along `axis`.
    fn fractional_index(&self, axis: usize, value: f64) -> f64 {
        (value - self.axis_start(axis)) / self.spacing
    }

    /// Flat index of the nearest grid point, if `k` lies within the extent.
    pub fn nearest_index(&self, k: &Vec3) -> Option<usize> {
        if !self.contains(k) {
            return None;
        }
        let n = self.n_per_axis;
        let snap = |axis: usize| {
            let j = float::round(self.fractional_index(axis, k[axis]));
            (j.max(0.0) as usize).min(n - 1)
        };
        Some(match self.dimension {
            Dimension::One => snap(2),
            Dimension::Three => (snap(0) * n + snap(1)) * n + snap(2),
        })
    }
}

/// A one-photon state: complex amplitudes for `λ = +1, −1, ∥` at every grid
/// point, with dispersion `ω_k = v|k|`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeAmplitudes {
    grid: KGrid,
    amps: Vec<[Complex64; 3]>,
    speed: f64,
}

impl ModeAmplitudes {
    /// The empty state on `grid`.
    pub fn zeros(grid: KGrid, speed: f64) -> Result<ModeAmplitudes> {
        if !(speed > 0.0) || !speed.is_finite() {
            return Err(Error::Domain("dispersion speed must be positive"));
        }
        let amps = vec![[Complex64::new(0.0, 0.0); 3]; grid.len()];
        Ok(ModeAmplitudes { grid, amps, speed })
    }

    /// Builds amplitudes from `f(k, λ)`.
    pub fn from_fn(
        grid: KGrid,
        speed: f64,
        mut f: impl FnMut(&Vec3, Polarization) -> Complex64,
    ) -> Result<ModeAmplitudes> {
        let mut m = ModeAmplitudes::zeros(grid, speed)?;
        for i in 0..m.amps.len() {
            let k = m.grid.point(i);
            for pol in Polarization::ALL {
                let c = f(&k, pol);
                if !(c.re.is_finite() && c.im.is_finite()) {
                    return Err(Error::Domain("amplitudes must be finite"));
                }
                m.amps[i][pol.index()] = c;
            }
        }
        Ok(m)
    }

    pub fn grid(&self) -> &KGrid {
        &self.grid
    }

    pub fn speed(&self) -> f64 {
        self.speed
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn amplitude(&self, index: usize, pol: Polarization) -> Complex64 {
        self.amps[index][pol.index()]
    }

    pub fn set_amplitude(&mut self, index: usize, pol: Polarization, value: Complex64) {
        self.amps[index][pol.index()] = value;
    }

    pub fn amplitudes(&self) -> &[[Complex64; 3]] {
        &self.amps
    }

    pub fn omega(&self, index: usize) -> f64 {
        self.speed * self.grid.point(index).norm()
    }

    pub fn weight(&self, index: usize) -> f64 {
        self.grid.measure_weight(&self.grid.point(index), self.speed)
    }

    /// Polarizations carrying at least one nonzero amplitude.
    pub fn occupied(&self) -> [bool; 3] {
        let mut out = [false; 3];
        for a in &self.amps {
            for (slot, c) in out.iter_mut().zip(a) {
                *slot |= c.norm_sqr() > 0.0;
            }
        }
        out
    }

    /// Copy with every polarization other than `pol` zeroed.
    pub fn restricted_to(&self, pol: Polarization) -> ModeAmplitudes {
        let mut out = self.clone();
        for a in &mut out.amps {
            for (slot, c) in a.iter_mut().enumerate() {
                if slot != pol.index() {
                    *c = Complex64::new(0.0, 0.0);
                }
            }
        }
        out
    }

    /// Multiplies every amplitude by `s`.
    pub fn scaled(&self, s: Complex64) -> ModeAmplitudes {
        let mut out = self.clone();
        out.amps.iter_mut().flat_map(|a| a.iter_mut()).for_each(|c| *c *= s);
        out
    }

    /// Amplitudes advanced in time: `c_λ(k) e^{−iω_k t}`.
    pub fn evolved(&self, t: f64) -> ModeAmplitudes {
        let mut out = self.clone();
        for (i, a) in out.amps.iter_mut().enumerate() {
            let (s, c) = float::sin_cos(-self.omega(i) * t);
            let phase = Complex64::new(c, s);
            a.iter_mut().for_each(|v| *v *= phase);
        }
        out
    }
}

/// `Σ_λ Σ_k w(k) |c_λ(k)|²` in lexicographic grid order.
pub fn norm(m: &ModeAmplitudes) -> f64 {
    let mut sum = 0.0;
    for (i, a) in m.amps.iter().enumerate() {
        let w = m.weight(i);
        for c in a {
            sum += w * c.norm_sqr();
        }
    }
    sum
}

/// Norm restricted to the transverse polarizations.
pub fn transverse_norm(m: &ModeAmplitudes) -> f64 {
    let mut sum = 0.0;
    for (i, a) in m.amps.iter().enumerate() {
        let w = m.weight(i);
        sum += w * (a[0].norm_sqr() + a[1].norm_sqr());
    }
    sum
}

/// Rescales the state to unit norm.
pub fn normalize(m: &ModeAmplitudes) -> Result<ModeAmplitudes> {
    let n = norm(m);
    if !(n > 0.0) {
        return Err(Error::NullState);
    }
    Ok(m.scaled(Complex64::new(1.0 / float::sqrt(n), 0.0)))
}

/// Normalized Gaussian packet `exp(−|k − k₀|²/(4σ²))` in polarization `pol`.
pub fn gaussian_packet(grid: &KGrid, k0: &Vec3, sigma: f64, pol: Polarization, speed: f64) -> Result<ModeAmplitudes> {
    if !(sigma > 0.0) {
        return Err(Error::Domain("packet width sigma must be positive"));
    }
    if !grid.contains(k0) {
        return Err(Error::Domain("packet center k0 lies outside the k-grid"));
    }
    let m = ModeAmplitudes::from_fn(grid.clone(), speed, |k, p| {
        if p == pol {
            Complex64::new(float::exp(-(*k - *k0).norm_sqr() / (4.0 * sigma * sigma)), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })?;
    normalize(&m)
}

/// `Σ_λ Σ_k w(k)|c_λ(k)|² (1, e_k)`.
///
/// The same invariant measure as [`norm`] is used, so the time component
/// equals the norm.
pub fn integrated_four_current(m: &ModeAmplitudes) -> FourVector<f64> {
    let mut t_comp = 0.0;
    let mut spatial = Vec3::ZERO;
    for (i, a) in m.amps.iter().enumerate() {
        let k = m.grid.point(i);
        let w = m.weight(i);
        let mut p = 0.0;
        for c in a {
            p += w * c.norm_sqr();
        }
        t_comp += p;
        spatial += k * (p / k.norm());
    }
    FourVector::from_parts(t_comp, spatial)
}

/// Image of a null wavevector `(|k|, k)` under a z-boost (units `c = 1`).
pub fn doppler_image(k: &Vec3, beta: f64) -> Result<Vec3> {
    let boosted = boost_z(&FourVector::from_parts(k.norm(), *k), beta)?;
    Ok(boosted.spatial_vec())
}

/// The grid with the same shape recentered on the boosted image of `grid`'s center.
pub fn boosted_grid(grid: &KGrid, beta: f64) -> Result<KGrid> {
    let center = doppler_image(&grid.center(), beta)?;
    KGrid::new(grid.dimension(), grid.n_per_axis(), grid.spacing(), center, grid.half_offset())
}

// Fractional coordinates this close to a node are treated as the node itself.
const SNAP: f64 = 1e-9;

/// Multilinear interpolation of one polarization slot at a fractional
/// position; nodes outside the grid count as zero.
fn interpolate(m: &ModeAmplitudes, slot: usize, k: &Vec3) -> Complex64 {
    let grid = &m.grid;
    let n = grid.n_per_axis as isize;
    let axes: &[usize] = match grid.dimension {
        Dimension::One => &[2],
        Dimension::Three => &[0, 1, 2],
    };
    if grid.dimension == Dimension::One && (k.x() != 0.0 || k.y() != 0.0) {
        return Complex64::new(0.0, 0.0);
    }
    // per-axis (base node, [(offset, weight); 2])
    let mut stencil = [(0isize, [(0isize, 1.0f64), (1, 0.0)]); 3];
    for (slot_axis, &axis) in axes.iter().enumerate() {
        let f = grid.fractional_index(axis, k[axis]);
        let base = float::floor(f);
        let frac = f - base;
        let (base, frac) = if frac < SNAP {
            (base, 0.0)
        } else if frac > 1.0 - SNAP {
            (base + 1.0, 0.0)
        } else {
            (base, frac)
        };
        stencil[slot_axis] = (base as isize, [(0, 1.0 - frac), (1, frac)]);
    }
    let node = |idx: &[isize]| -> Complex64 {
        if idx.iter().any(|&j| j < 0 || j >= n) {
            return Complex64::new(0.0, 0.0);
        }
        let flat = idx.iter().fold(0usize, |acc, &j| acc * n as usize + j as usize);
        m.amps[flat][slot]
    };
    let mut acc = Complex64::new(0.0, 0.0);
    match axes.len() {
        1 => {
            let (b, taps) = stencil[0];
            for (o, w) in taps {
                if w != 0.0 {
                    acc += node(&[b + o]) * w;
                }
            }
        }
        _ => {
            let [(bx, tx), (by, ty), (bz, tz)] = stencil;
            for (ox, wx) in tx {
                for (oy, wy) in ty {
                    for (oz, wz) in tz {
                        let w = wx * wy * wz;
                        if w != 0.0 {
                            acc += node(&[bx + ox, by + oy, bz + oz]) * w;
                        }
                    }
                }
            }
        }
    }
    acc
}

/// Boosts a vacuum state along `z`.
///
/// The amplitude is a Lorentz scalar, so the boosted state on `dest` is
/// `c′_λ(k′) = c_λ(Λ⁻¹k′)`: each destination wavevector is mapped back to its
/// preimage and the source amplitudes are interpolated there (multilinear,
/// zero outside the source grid). Helicity labels are carried unchanged.
pub fn boost_amplitudes(m: &ModeAmplitudes, beta: f64, dest: &KGrid) -> Result<ModeAmplitudes> {
    if m.speed != 1.0 {
        return Err(Error::BoostRequiresVacuum);
    }
    lorentz_gamma(beta)?;
    let mut out = ModeAmplitudes::zeros(dest.clone(), 1.0)?;
    for i in 0..dest.len() {
        let k_dest = dest.point(i);
        let k_src = if beta == 0.0 { k_dest } else { doppler_image(&k_dest, -beta)? };
        for slot in 0..3 {
            out.amps[i][slot] = interpolate(m, slot, &k_src);
        }
    }
    Ok(out)
}

/// Adds an on-shell gauge function to the longitudinal amplitudes,
/// `c_∥(k) → c_∥(k) + g(k)`. Transverse amplitudes are left untouched.
pub fn gauge_shift(m: &ModeAmplitudes, g: &[Complex64]) -> Result<ModeAmplitudes> {
    if g.len() != m.len() {
        return Err(Error::GridMismatch("gauge function length differs from k-grid size"));
    }
    let mut out = m.clone();
    let slot = Polarization::Parallel.index();
    for (a, gk) in out.amps.iter_mut().zip(g) {
        a[slot] += *gk;
    }
    Ok(out)
}
