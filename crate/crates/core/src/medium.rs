//! Linear nondispersive media, localized emitters and detectors, and the
//! one-dimensional transmission line solved by characteristics.
//!
//! Permittivity and permeability are stored relative to the vacuum values,
//! so `ε = μ = 1` is free space and `v = (εμ)^{-1/2}`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, SQRT_2};

use crate::current::{cross_density, dot_density, helicity_density, CurrentField};
use crate::modes::Dimension;
use crate::quadrature::GaussLegendre;
use crate::stencil;
use crate::synthesis::{FieldSnapshot, SpatialGrid};
use crate::vector::Vec3;
use crate::{float, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MediumSpec {
    epsilon: f64,
    mu: f64,
    v: f64,
}

impl MediumSpec {
    pub fn new(epsilon: f64, mu: f64) -> Result<MediumSpec> {
        if !(epsilon >= 1.0) || !epsilon.is_finite() {
            return Err(Error::Domain("relative permittivity must be at least 1"));
        }
        if !(mu > 0.0) || !mu.is_finite() {
            return Err(Error::Domain("relative permeability must be positive"));
        }
        Ok(MediumSpec { epsilon, mu, v: 1.0 / float::sqrt(epsilon * mu) })
    }

    pub fn vacuum() -> MediumSpec {
        MediumSpec { epsilon: 1.0, mu: 1.0, v: 1.0 }
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Propagation speed `(εμ)^{-1/2}`.
    pub fn speed(&self) -> f64 {
        self.v
    }
}

/// `D = εE`, `H = B/μ`.
pub fn constitutive(e: &[Vec3], b: &[Vec3], med: &MediumSpec) -> (Vec<Vec3>, Vec<Vec3>) {
    let inv_mu = 1.0 / med.mu;
    (e.iter().map(|v| *v * med.epsilon).collect(), b.iter().map(|v| *v * inv_mu).collect())
}

/// Dressed densities `ρ_pm = (2i/ħ)A⁺·D⁻ + c.c.` and
/// `J_pm = (2i/ħ)(A⊥⁺×H⁻ + φ⁺D∥⁻) + c.c.`.
///
/// For a single direction this gives `J_pm = vρ_pm e_k` and `ρ_pm = ερ_p`.
pub fn current_in_medium(snap: &FieldSnapshot, med: &MediumSpec) -> Result<CurrentField> {
    if (snap.speed - med.v).abs() > 1e-12 * med.v {
        return Err(Error::Domain("snapshot dispersion speed differs from the medium speed"));
    }
    let inv_mu = 1.0 / med.mu;
    let rho = snap.a_plus.iter().zip(&snap.e_plus).map(|(a, e)| dot_density(a, &(*e * med.epsilon))).collect();
    let j = (0..snap.len())
        .map(|i| {
            let h = snap.b_plus[i] * inv_mu;
            let d_par = snap.e_par_plus[i] * med.epsilon;
            cross_density(&snap.a_perp_plus[i], &h) + d_par.conj().scale(snap.phi_plus[i]).im() * -4.0
        })
        .collect();
    let s_hel = if snap.content.iter().filter(|c| **c).count() <= 1 { helicity_density(snap).ok() } else { None };
    Ok(CurrentField { time: snap.time, grid: snap.grid.clone(), rho, j, s_hel })
}

/// `ρ_p = ρ_pm/ε`.
pub fn density_rescale(rho_pm: &[f64], med: &MediumSpec) -> Vec<f64> {
    rho_pm.iter().map(|r| r / med.epsilon).collect()
}

/// Gaussian envelopes are cut at this many standard deviations.
pub const TRUNCATION: f64 = 6.0;

/// Unit-mass Gaussian truncated at `±6σ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Envelope {
    sigma: f64,
    scale: f64,
}

impl Envelope {
    pub fn new(sigma: f64) -> Envelope {
        let mass = float::erf(TRUNCATION / SQRT_2);
        Envelope { sigma, scale: 1.0 / (sigma * float::sqrt(2.0 * PI) * mass) }
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Half-width of the support.
    pub fn reach(&self) -> f64 {
        TRUNCATION * self.sigma
    }

    pub fn pdf(&self, x: f64) -> f64 {
        if x.abs() > self.reach() {
            return 0.0;
        }
        let u = x / self.sigma;
        self.scale * float::exp(-0.5 * u * u)
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x <= -self.reach() {
            return 0.0;
        }
        if x >= self.reach() {
            return 1.0;
        }
        let mass = float::erf(TRUNCATION / SQRT_2);
        0.5 * (float::erf(x / (self.sigma * SQRT_2)) + mass) / mass
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EventKind {
    Emitter,
    Detector,
}

/// A localized emission or detection event: Gaussian in space (`width`) and
/// time (`duration`), carrying `strength` photons.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SourceEvent {
    pub kind: EventKind,
    pub center: Vec3,
    pub width: f64,
    pub time: f64,
    pub duration: f64,
    pub strength: f64,
}

impl SourceEvent {
    pub fn validate(&self) -> Result<()> {
        if !(self.width > 0.0) || !self.width.is_finite() {
            return Err(Error::Domain("event width must be positive"));
        }
        if !(self.duration > 0.0) || !self.duration.is_finite() {
            return Err(Error::Domain("event duration must be positive"));
        }
        if !(self.strength >= 0.0) || !self.strength.is_finite() {
            return Err(Error::Domain("event strength must be non-negative"));
        }
        Ok(())
    }

    fn sign(&self) -> f64 {
        match self.kind {
            EventKind::Emitter => 1.0,
            EventKind::Detector => -1.0,
        }
    }

    /// Product of truncated envelopes over the axes `grid` spans.
    fn spatial(&self, x: &Vec3, dimension: Dimension) -> f64 {
        let env = Envelope::new(self.width);
        match dimension {
            Dimension::One => env.pdf(x.z() - self.center.z()),
            Dimension::Three => (0..3).map(|a| env.pdf(x[a] - self.center[a])).product(),
        }
    }
}

/// Detector matched to a pulse from `emit`: fires on the pulse's arrival at
/// `z_detect` and is wide enough to cover it for the whole firing window.
pub fn matched_detector(emit: &SourceEvent, z_detect: f64, med: &MediumSpec, strength: f64) -> SourceEvent {
    let v = med.v;
    SourceEvent {
        kind: EventKind::Detector,
        center: Vec3::new(0.0, 0.0, z_detect),
        width: emit.width + 2.0 * v * emit.duration,
        time: emit.time + (z_detect - emit.center.z()) / v,
        duration: emit.duration,
        strength,
    }
}

/// Source densities on a grid at one time.
#[derive(Clone, Debug, PartialEq)]
pub struct SourceFields {
    pub rho_es: Vec<f64>,
    pub j_es: Vec<Vec3>,
    /// `∂_tρ_es + ∇·J_es`.
    pub source_term: Vec<f64>,
}

fn check_events(events: &[SourceEvent]) -> Result<()> {
    let mut emitted = 0.0;
    for ev in events {
        ev.validate()?;
        if ev.kind == EventKind::Emitter {
            emitted += ev.strength;
        }
    }
    if emitted > 1.0 + 1e-12 {
        return Err(Error::TooManyPhotons(emitted));
    }
    Ok(())
}

/// Stationary source densities `ρ_es = ±S·F_t(t − t₀)·s(x − x₀)` with
/// `J_es = 0`, so `∂_tρ_es = ±S·s_t(t − t₀)·s(x − x₀)`. Emitters are positive
/// and detectors negative.
pub fn source_field(events: &[SourceEvent], grid: &SpatialGrid, t: f64) -> Result<SourceFields> {
    check_events(events)?;
    let n = grid.len();
    let mut out = SourceFields { rho_es: vec![0.0; n], j_es: vec![Vec3::ZERO; n], source_term: vec![0.0; n] };
    for ev in events {
        let env_t = Envelope::new(ev.duration);
        let (cum, rate) = (env_t.cdf(t - ev.time), env_t.pdf(t - ev.time));
        if cum == 0.0 {
            continue;
        }
        let amp = ev.sign() * ev.strength;
        for i in 0..n {
            let s = ev.spatial(&grid.point(i), grid.dimension());
            if s != 0.0 {
                out.rho_es[i] += amp * cum * s;
                out.source_term[i] += amp * rate * s;
            }
        }
    }
    Ok(out)
}

/// Density and current on a line at one time.
#[derive(Clone, Debug, PartialEq)]
pub struct LineSample {
    pub t: f64,
    pub rho: Vec<f64>,
    pub j: Vec<f64>,
}

fn require_line(grid: &SpatialGrid) -> Result<()> {
    if grid.dimension() != Dimension::One {
        return Err(Error::GridMismatch("transmission-line operations need a 1D grid"));
    }
    Ok(())
}

/// Density emitted by `src` and advected at speed `v`:
/// `ρ(z,t) = S∫ s_t(t′ − t₀) s_z(z − v(t − t′) − z₀) dt′` over `t′ ≤ t`.
struct Emission {
    env_t: Envelope,
    env_z: Envelope,
    t0: f64,
    z0: f64,
    strength: f64,
    v: f64,
    rule: GaussLegendre,
}

impl Emission {
    fn new(src: &SourceEvent, v: f64) -> Emission {
        Emission {
            env_t: Envelope::new(src.duration),
            env_z: Envelope::new(src.width),
            t0: src.time,
            z0: src.center.z(),
            strength: src.strength,
            v,
            rule: GaussLegendre::new(8),
        }
    }

    fn density(&self, z: f64, t: f64) -> f64 {
        let d = z - self.z0;
        let (rt, rz) = (self.env_t.reach(), self.env_z.reach());
        let lo = (self.t0 - rt).max(t - (d + rz) / self.v);
        let hi = (self.t0 + rt).min(t - (d - rz) / self.v).min(t);
        if !(hi > lo) {
            return 0.0;
        }
        // panels no wider than the narrower of the two envelopes in t′
        let scale = self.env_t.sigma().min(self.env_z.sigma() / self.v);
        let panels = libm::ceil((hi - lo) / scale).max(1.0) as usize;
        let f = |u: f64| self.env_t.pdf(u - self.t0) * self.env_z.pdf(d - self.v * (t - u));
        self.strength * self.rule.integrate(lo, hi, panels, f)
    }
}

/// Response of the line to one emitter, with the closure `J = vρ`.
pub fn green_response_1d(
    src: &SourceEvent,
    med: &MediumSpec,
    grid: &SpatialGrid,
    times: &[f64],
) -> Result<Vec<LineSample>> {
    require_line(grid)?;
    src.validate()?;
    let em = Emission::new(src, med.v);
    Ok(times
        .iter()
        .map(|&t| {
            let rho: Vec<f64> = (0..grid.len()).map(|i| em.density(grid.point(i).z(), t)).collect();
            let j = rho.iter().map(|r| med.v * r).collect();
            LineSample { t, rho, j }
        })
        .collect())
}

/// Absorbing gate of a detector: the fraction of the density on the
/// characteristic through `(z, t)` that survives,
/// `F = 1 − S∫_{s≤t} s_t(s − t_d) χ(z − v(t − s) − z_d) ds`, where `χ` is the
/// indicator of the detector's `±6·width` support.
struct Gate {
    env_t: Envelope,
    td: f64,
    zd: f64,
    half_width: f64,
    strength: f64,
    v: f64,
}

impl Gate {
    fn new(det: &SourceEvent, v: f64) -> Gate {
        Gate {
            env_t: Envelope::new(det.duration),
            td: det.time,
            zd: det.center.z(),
            half_width: TRUNCATION * det.width,
            strength: det.strength,
            v,
        }
    }

    fn inside(&self, z: f64) -> bool {
        (z - self.zd).abs() <= self.half_width
    }

    fn survival(&self, z: f64, t: f64) -> f64 {
        let d = z - self.zd;
        let lo = t - (d + self.half_width) / self.v;
        let hi = (t - (d - self.half_width) / self.v).min(t);
        if !(hi > lo) {
            return 1.0;
        }
        1.0 - self.strength * (self.env_t.cdf(hi - self.td) - self.env_t.cdf(lo - self.td))
    }

    /// Sink `−S s_t(t − t_d) χ(z − z_d) ρ_e`.
    fn sink(&self, z: f64, t: f64, rho_emitted: f64) -> f64 {
        if !self.inside(z) {
            return 0.0;
        }
        -self.strength * self.env_t.pdf(t - self.td) * rho_emitted
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LifecycleSample {
    pub t: f64,
    /// `∫ρ dz`.
    pub norm: f64,
    /// Largest `|∂_tρ + ∂_zJ − source|` over the line.
    pub residual_max: f64,
    pub peak_z: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LifecycleReport {
    pub samples: Vec<LifecycleSample>,
    /// Emitter-to-detector travel time `(z_d − z_e)/v`, if a detector is present.
    pub travel_time: Option<f64>,
    /// The detector fires before the pulse can reach it.
    pub acausal: bool,
    /// Largest density found outside `|z − z_e| ≤ v(t − t_e + 6σ_t) + 6σ_z`.
    pub cone_leak: f64,
    /// Density profiles at each sample time.
    pub profiles: Vec<Vec<f64>>,
}

impl LifecycleReport {
    pub fn final_norm(&self) -> f64 {
        self.samples.last().map_or(0.0, |s| s.norm)
    }
}

/// Emission, propagation and (optionally) detection of one photon on a line.
///
/// `times` must be uniformly spaced; the residual uses the same step.
pub fn lifecycle_1d(
    emit: &SourceEvent,
    detect: Option<&SourceEvent>,
    med: &MediumSpec,
    grid: &SpatialGrid,
    times: &[f64],
) -> Result<LifecycleReport> {
    require_line(grid)?;
    if emit.kind != EventKind::Emitter {
        return Err(Error::Domain("lifecycle needs an emitter as its first event"));
    }
    let mut events = vec![*emit];
    if let Some(d) = detect {
        if d.kind != EventKind::Detector {
            return Err(Error::Domain("lifecycle needs a detector as its second event"));
        }
        if d.center.z() <= emit.center.z() {
            return Err(Error::Domain("detector must lie downstream of the emitter"));
        }
        events.push(*d);
    }
    check_events(&events)?;
    if times.len() < 2 {
        return Err(Error::Domain("lifecycle needs at least two sample times"));
    }
    let dt = times[1] - times[0];
    for w in times.windows(2) {
        if !(dt > 0.0) || ((w[1] - w[0]) - dt).abs() > 1e-9 * dt {
            return Err(Error::GridMismatch("time samples are not uniformly spaced"));
        }
    }

    let v = med.v;
    let em = Emission::new(emit, v);
    let gate = detect.map(|d| Gate::new(d, v));
    let env_e = (Envelope::new(emit.duration), Envelope::new(emit.width));
    let zs: Vec<f64> = (0..grid.len()).map(|i| grid.point(i).z()).collect();

    let emitted = |t: f64| -> Vec<f64> { zs.iter().map(|&z| em.density(z, t)).collect() };
    let total = |t: f64, rho_e: &[f64]| -> Vec<f64> {
        match &gate {
            None => rho_e.to_vec(),
            Some(g) => zs.iter().zip(rho_e).map(|(&z, r)| if *r == 0.0 { 0.0 } else { r * g.survival(z, t) }).collect(),
        }
    };

    // evaluate one step beyond each end so every sample has both time neighbours
    let mut ext: Vec<f64> = Vec::with_capacity(times.len() + 2);
    ext.push(times[0] - dt);
    ext.extend_from_slice(times);
    ext.push(times[times.len() - 1] + dt);
    let mut rho_e = Vec::with_capacity(ext.len());
    let mut rho = Vec::with_capacity(ext.len());
    for &t in &ext {
        let e = emitted(t);
        rho.push(total(t, &e));
        rho_e.push(e);
    }

    let dz = grid.spacing();
    let mut samples = Vec::with_capacity(times.len());
    let mut cone_leak: f64 = 0.0;
    for (n, &t) in times.iter().enumerate() {
        let now = &rho[n + 1];
        let j: Vec<f64> = now.iter().map(|r| v * r).collect();
        let dj = stencil::partial(&j, grid, 2);
        let dr = stencil::centered_time(&rho[n], &rho[n + 2], dt);
        let mut residual_max: f64 = 0.0;
        let (mut peak, mut peak_z) = (f64::NEG_INFINITY, zs[0]);
        let reach = v * (t - emit.time + env_e.0.reach()).max(0.0) + env_e.1.reach();
        for i in 0..zs.len() {
            let z = zs[i];
            let mut src = emit.strength * env_e.0.pdf(t - emit.time) * env_e.1.pdf(z - emit.center.z());
            if let Some(g) = &gate {
                src = src * g.survival(z, t) + g.sink(z, t, rho_e[n + 1][i]);
            }
            residual_max = residual_max.max((dr[i] + dj[i] - src).abs());
            if now[i] > peak {
                peak = now[i];
                peak_z = z;
            }
            if (z - emit.center.z()).abs() > reach {
                cone_leak = cone_leak.max(now[i].abs());
            }
        }
        samples.push(LifecycleSample { t, norm: now.iter().sum::<f64>() * dz, residual_max, peak_z });
    }

    let travel_time = detect.map(|d| (d.center.z() - emit.center.z()) / v);
    let acausal = match (detect, travel_time) {
        (Some(d), Some(tt)) => d.time < emit.time + tt - 3.0 * d.duration,
        _ => false,
    };
    let profiles = rho[1..=times.len()].to_vec();
    Ok(LifecycleReport { samples, travel_time, acausal, cone_leak, profiles })
}
