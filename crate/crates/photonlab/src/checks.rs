//! The verification suite: each check builds its own scenario from the core
//! crate and compares a measured value against a tolerance.

use std::f64::consts::PI;

use photonlab_core::current::{
    continuity_residual, current_field, helicity_density, number_density, position_norm, CurrentField,
};
use photonlab_core::fock::{commutator_expectation, expectation, ladder_pair, n_photon_state};
use photonlab_core::medium::{
    current_in_medium, density_rescale, lifecycle_1d, matched_detector, EventKind, MediumSpec, SourceEvent,
};
use photonlab_core::modes::{
    boost_amplitudes, boosted_grid, gauge_shift, gaussian_packet, norm, normalize, Dimension, KGrid, ModeAmplitudes,
    Polarization,
};
use photonlab_core::synthesis::{
    maxwell_residual, synthesize, synthesize_with, FieldMeasure, FieldSnapshot, SpatialGrid, SynthesisOptions,
};
use photonlab_core::vector::Vec3;
use photonlab_core::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{Tolerances, VerifyConfig};

/// Outcome of one check.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    /// `true` when the value must be at least the tolerance (orders), `false` when at most.
    pub lower_bound: bool,
    pub pass: bool,
    pub order: Option<f64>,
}

impl CheckResult {
    pub fn at_most(name: &str, value: f64, tolerance: f64) -> CheckResult {
        CheckResult {
            name: name.to_string(),
            value,
            tolerance,
            lower_bound: false,
            pass: value <= tolerance,
            order: None,
        }
    }

    pub fn at_least(name: &str, value: f64, tolerance: f64) -> CheckResult {
        CheckResult {
            name: name.to_string(),
            value,
            tolerance,
            lower_bound: true,
            pass: value >= tolerance,
            order: Some(value),
        }
    }

    pub fn with_order(mut self, order: f64) -> CheckResult {
        self.order = Some(order);
        self
    }
}

fn max_abs(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn observed_order(coarse: f64, fine: f64) -> f64 {
    (coarse / fine).log2()
}

/// Default 3D packet: 16³ modes, `Δk = 0.25`, `k₀ = (0,0,4)`, `σ = 0.5`.
pub fn default_packet(pol: Polarization) -> ModeAmplitudes {
    let k0 = Vec3::new(0.0, 0.0, 4.0);
    let grid = KGrid::cube(16, 0.25, k0).expect("valid default grid");
    gaussian_packet(&grid, &k0, 0.5, pol, 1.0).expect("valid default packet")
}

/// Position-space norm at `t ∈ {0, T/2, T}` on the 32³ dual box.
pub fn norm_unity(m: &ModeAmplitudes, n_x: usize, t_end: f64) -> Vec<f64> {
    let grid = SpatialGrid::dual_box(m.grid(), n_x).expect("valid box");
    [0.0, 0.5 * t_end, t_end].iter().map(|&t| position_norm(&number_density(&synthesize(m, &grid, t)), &grid)).collect()
}

/// Continuity study on one grid: returns (max residual, max |∂_tρ|).
pub fn continuity_level(
    m: &ModeAmplitudes,
    grid: &SpatialGrid,
    dt: f64,
    t: f64,
    opts: &SynthesisOptions,
) -> (f64, f64) {
    let cf = |t: f64| current_field(&synthesize_with(m, grid, t, opts));
    let (prev, now, next) = (cf(t - dt), cf(t), cf(t + dt));
    let zero = vec![0.0; grid.len()];
    let r = continuity_residual(&prev, &now, &next, &zero).expect("matching grids");
    let drho = max_abs(prev.rho.iter().zip(&next.rho).map(|(a, b)| (b - a) / (2.0 * dt)));
    (max_abs(r), drho)
}

/// Time step used by the refinement studies, a fixed fraction of `Δx` that
/// avoids the exact cancellation at `Δt = Δx`.
pub const DT_OVER_DX: f64 = 0.37;

/// (order, fine-level relative residual) of a two-level continuity study.
pub fn continuity_study(
    m: &ModeAmplitudes,
    box_len: f64,
    n_coarse: usize,
    t: f64,
    opts: &SynthesisOptions,
) -> (f64, f64) {
    let dim = m.grid().dimension();
    let level = |n: usize| {
        let grid = SpatialGrid::centered(dim, n, box_len, Vec3::ZERO).expect("valid grid");
        continuity_level(m, &grid, DT_OVER_DX * grid.spacing(), t, opts)
    };
    let (rc, _) = level(n_coarse);
    let (rf, drho) = level(2 * n_coarse);
    (observed_order(rc, rf), rf / drho)
}

/// 1D packet used for the tight continuity bound.
pub fn line_packet(pol: Polarization, speed: f64) -> ModeAmplitudes {
    let grid = KGrid::line(64, 0.1, 4.0).expect("valid line grid");
    gaussian_packet(&grid, &Vec3::new(0.0, 0.0, 4.0), 0.5, pol, speed).expect("valid line packet")
}

/// Small 3D packet for the 3D convergence-order check.
pub fn small_packet() -> ModeAmplitudes {
    let k0 = Vec3::new(0.0, 0.0, 2.0);
    let grid = KGrid::cube(6, 0.5, k0).expect("valid grid");
    gaussian_packet(&grid, &Vec3::new(0.1, -0.05, 2.0), 0.5, Polarization::Plus, 1.0).expect("valid packet")
}

/// Random low-wavenumber field with both helicities (Maxwell refinement study).
pub fn low_k_field(rng: &mut ChaCha8Rng) -> ModeAmplitudes {
    let grid = KGrid::cube(2, 0.5, Vec3::new(0.0, 0.0, 0.5)).expect("valid grid");
    let m = ModeAmplitudes::from_fn(grid, 1.0, |_, p| {
        if p.is_transverse() {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
    .expect("finite amplitudes");
    normalize(&m).expect("nonzero state")
}

/// Maxwell residual (max over scalar and vector parts, relative to max |∂_tE|) on one grid.
pub fn maxwell_level(m: &ModeAmplitudes, n: usize, t: f64) -> (f64, f64) {
    // fields of a half-offset grid are periodic over twice the dual box
    let box_len = 4.0 * PI / m.grid().spacing();
    let grid = SpatialGrid::centered(Dimension::Three, n, box_len, Vec3::ZERO).expect("valid grid");
    let dt = DT_OVER_DX * grid.spacing();
    let s: Vec<FieldSnapshot> = [t - dt, t, t + dt].iter().map(|&t| synthesize(m, &grid, t)).collect();
    let zero = vec![0.0; grid.len()];
    let zv = vec![Vec3::ZERO; grid.len()];
    let (scalar, vector) = maxwell_residual(&s[0], &s[1], &s[2], &zero, &zv).expect("matching grids");
    (max_abs(scalar), max_abs(vector.iter().map(|v| v.max_abs())))
}

pub fn maxwell_order(m: &ModeAmplitudes, n_coarse: usize) -> (f64, f64) {
    let (sc, vc) = maxwell_level(m, n_coarse, 0.3);
    let (sf, vf) = maxwell_level(m, 2 * n_coarse, 0.3);
    (observed_order(sc, sf), observed_order(vc, vf))
}

/// Largest deviation of `S` from `λρe_z` relative to max ρ, for a line packet.
pub fn helicity_deviation(pol: Polarization) -> f64 {
    let m = line_packet(pol, 1.0);
    let grid = SpatialGrid::dual_box(m.grid(), 1024).expect("valid grid");
    let snap = synthesize(&m, &grid, 0.7);
    let rho = number_density(&snap);
    let s = helicity_density(&snap).expect("single polarization");
    let lambda = pol.helicity() as f64;
    let scale = max_abs(rho.iter().copied()).max(f64::MIN_POSITIVE);
    let dev = max_abs(rho.iter().zip(&s).map(|(r, s)| (*s - Vec3::new(0.0, 0.0, lambda * r)).max_abs()));
    match pol {
        Polarization::Parallel => max_abs(s.iter().map(|v| v.max_abs())),
        _ => dev / scale,
    }
}

pub struct GaugeOutcome {
    pub field_change: f64,
    pub norm_change: f64,
    pub transverse_identical: bool,
}

pub fn gauge_check(rng: &mut ChaCha8Rng) -> GaugeOutcome {
    let m = default_packet(Polarization::Plus);
    let shift: Vec<Complex64> = (0..m.len())
        .map(|i| {
            m.amplitude(i, Polarization::Plus) * Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))
        })
        .collect();
    let g = gauge_shift(&m, &shift).expect("matching length");
    let transverse_identical = (0..m.len()).all(|i| {
        [Polarization::Plus, Polarization::Minus].iter().all(|&p| {
            let (a, b) = (m.amplitude(i, p), g.amplitude(i, p));
            a.re.to_bits() == b.re.to_bits() && a.im.to_bits() == b.im.to_bits()
        })
    });
    let grid = SpatialGrid::dual_box(m.grid(), 32).expect("valid box");
    let (a, b) = (synthesize(&m, &grid, 1.5), synthesize(&g, &grid, 1.5));
    let field_change =
        max_abs(a.e_plus.iter().zip(&b.e_plus).chain(a.b_plus.iter().zip(&b.b_plus)).map(|(x, y)| (*x - *y).max_abs()));
    let na = position_norm(&number_density(&a), &grid);
    let nb = position_norm(&number_density(&b), &grid);
    GaugeOutcome { field_change, norm_change: (na - nb).abs(), transverse_identical }
}

/// |norm after boost − norm before| for the default packet at `n` points per
/// axis over the same k-extent.
pub fn boost_error(beta: f64, n: usize) -> f64 {
    let k0 = Vec3::new(0.0, 0.0, 4.0);
    let grid = KGrid::cube(n, 4.0 / n as f64, k0).expect("valid grid");
    let m = gaussian_packet(&grid, &k0, 0.5, Polarization::Plus, 1.0).expect("valid packet");
    let dest = boosted_grid(&grid, beta).expect("valid beta");
    let b = boost_amplitudes(&m, beta, &dest).expect("vacuum state");
    (norm(&b) - norm(&m)).abs()
}

pub struct MediumOutcome {
    pub ratio_deviation: f64,
    pub rescaled_norm_error: f64,
    pub vacuum_deviation: f64,
    pub speed_deviation: f64,
}

pub fn medium_check(epsilon: f64) -> MediumOutcome {
    let med = MediumSpec::new(epsilon, 1.0).expect("valid medium");
    let k0 = Vec3::new(0.0, 0.0, 4.0);
    let kg = KGrid::cube(16, 0.25, k0).expect("valid grid");
    let m = gaussian_packet(&kg, &k0, 0.5, Polarization::Minus, med.speed()).expect("valid packet");
    let grid = SpatialGrid::dual_box(&kg, 32).expect("valid box");
    let snap = synthesize(&m, &grid, 2.0);
    let rho_p = number_density(&snap);
    let cm = current_in_medium(&snap, &med).expect("matching speed");
    let scale = max_abs(cm.rho.iter().copied());
    let ratio_deviation = max_abs(cm.rho.iter().zip(&rho_p).map(|(a, b)| a - epsilon * b)) / scale;
    let rescaled_norm_error = (position_norm(&density_rescale(&cm.rho, &med), &grid) - 1.0).abs();

    let vac = MediumSpec::vacuum();
    let mv = gaussian_packet(&kg, &k0, 0.5, Polarization::Minus, 1.0).expect("valid packet");
    let sv = synthesize(&mv, &grid, 2.0);
    let free = current_field(&sv);
    let dressed = current_in_medium(&sv, &vac).expect("matching speed");
    let vacuum_deviation = field_distance(&free, &dressed);

    let line = line_packet(Polarization::Plus, med.speed());
    let lg = SpatialGrid::dual_box(line.grid(), 1024).expect("valid grid");
    let lc = current_in_medium(&synthesize(&line, &lg, 3.0), &med).expect("matching speed");
    let lscale = max_abs(lc.rho.iter().copied());
    let speed_deviation =
        max_abs(lc.rho.iter().zip(&lc.j).map(|(r, j)| (*j - Vec3::new(0.0, 0.0, med.speed() * r)).max_abs())) / lscale;
    MediumOutcome { ratio_deviation, rescaled_norm_error, vacuum_deviation, speed_deviation }
}

fn field_distance(a: &CurrentField, b: &CurrentField) -> f64 {
    let rho = max_abs(a.rho.iter().zip(&b.rho).map(|(x, y)| x - y));
    let j = max_abs(a.j.iter().zip(&b.j).map(|(x, y)| (*x - *y).max_abs()));
    rho.max(j)
}

pub struct LifecycleOutcome {
    pub emitted_norm_error: f64,
    pub peak_offset_cells: f64,
    pub cone_leak: f64,
    pub detected_norm: f64,
    pub acausal_flagged: bool,
    pub residual_order: f64,
}

/// Emitter at the origin at `t = 0` on a `v = 1/√2` line, `n_z` cells, `steps` samples.
pub fn lifecycle_check(n_z: usize, steps: usize) -> LifecycleOutcome {
    let med = MediumSpec::new(2.0, 1.0).expect("valid medium");
    let (z_min, z_max) = (-10.0, 60.0);
    let grid = SpatialGrid::new(Dimension::One, n_z, (z_max - z_min) / n_z as f64, Vec3::new(0.0, 0.0, z_min))
        .expect("valid grid");
    let (t0, t1) = (-4.0, 72.0);
    let dt = (t1 - t0) / (steps - 1) as f64;
    let times: Vec<f64> = (0..steps).map(|i| t0 + i as f64 * dt).collect();
    let emit = SourceEvent {
        kind: EventKind::Emitter,
        center: Vec3::ZERO,
        width: 4.0 * grid.spacing(),
        time: 0.0,
        duration: 4.0 * dt,
        strength: 1.0,
    };
    let free = lifecycle_1d(&emit, None, &med, &grid, &times).expect("valid scenario");
    let settled = emit.time + 6.0 * emit.duration;
    let emitted_norm_error = max_abs(free.samples.iter().filter(|s| s.t >= settled).map(|s| s.norm - 1.0));
    let peak_offset_cells = max_abs(
        free.samples
            .iter()
            .filter(|s| s.t >= settled && s.t <= (z_max - 10.0) / med.speed())
            .map(|s| (s.peak_z - med.speed() * (s.t - emit.time)) / grid.spacing()),
    );
    let det = matched_detector(&emit, 40.0, &med, 1.0);
    let detected = lifecycle_1d(&emit, Some(&det), &med, &grid, &times).expect("valid scenario");
    let mut early = det;
    early.time = 5.0;
    early.width = emit.width;
    let acausal = lifecycle_1d(&emit, Some(&early), &med, &grid, &times).expect("valid scenario");

    LifecycleOutcome {
        emitted_norm_error,
        peak_offset_cells,
        cone_leak: free.cone_leak.max(detected.cone_leak),
        detected_norm: detected.final_norm(),
        acausal_flagged: acausal.acausal && acausal.final_norm() > 0.5,
        residual_order: lifecycle_order(&med),
    }
}

/// Convergence order of the line residual with sources on two resolutions.
fn lifecycle_order(med: &MediumSpec) -> f64 {
    let level = |n: usize| {
        let grid = SpatialGrid::new(Dimension::One, n, 20.0 / n as f64, Vec3::new(0.0, 0.0, -5.0)).expect("valid grid");
        let dt = DT_OVER_DX * grid.spacing();
        let emit = SourceEvent {
            kind: EventKind::Emitter,
            center: Vec3::ZERO,
            width: 0.3,
            time: 0.0,
            duration: 0.3,
            strength: 1.0,
        };
        let det = matched_detector(&emit, 6.0, med, 1.0);
        let n_t = (8.0 / dt).round() as usize;
        let times: Vec<f64> = (0..=n_t).map(|i| 0.2 + i as f64 * dt).collect();
        let rep = lifecycle_1d(&emit, Some(&det), med, &grid, &times).expect("valid scenario");
        max_abs(rep.samples.iter().map(|s| s.residual_max))
    };
    observed_order(level(1024), level(2048))
}

/// Allowed deviation of `⟨n|a†a|n⟩` from `n`, in units in the last place of `n`.
/// The ladder entries are rounded square roots, so `fl(√n)²` can miss `n` by one ulp.
pub const NUMBER_ULPS: f64 = 1.0;

/// `|x − n|` in ulps of `n` (absolute for `n = 0`).
pub fn number_deviation(x: f64, n: usize) -> f64 {
    let n = n as f64;
    if n == 0.0 {
        return if x == 0.0 { 0.0 } else { f64::INFINITY };
    }
    let ulp = f64::from_bits(n.to_bits() + 1) - n;
    (x - n).abs() / ulp
}

pub struct FockOutcome {
    pub commutator_error: f64,
    pub number_error: f64,
}

pub fn fock_check(dim: usize) -> FockOutcome {
    let lp = ladder_pair(dim).expect("dim >= 2");
    let commutator_error = max_abs((0..dim - 1).map(|n| commutator_expectation(&lp, n).expect("below edge") - 1.0));
    let num = lp.a_dag.mul(&lp.a);
    let number_error = max_abs((0..dim).map(|n| {
        let psi = n_photon_state(&lp, n).expect("within truncation");
        number_deviation(expectation(&num, &psi).re, n)
    }));
    FockOutcome { commutator_error, number_error }
}

/// Runs every check with the given tolerances.
pub fn run_all(cfg: &VerifyConfig, tol: &Tolerances, seed: u64) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let opts = SynthesisOptions {
        field_measure: if cfg.broken_measure { FieldMeasure::Flat } else { FieldMeasure::Invariant },
        ..Default::default()
    };

    let packet = default_packet(Polarization::Plus);
    let grid = SpatialGrid::dual_box(packet.grid(), 32).expect("valid box");
    let norms: Vec<f64> = [0.0, 5.0, 10.0]
        .iter()
        .map(|&t| position_norm(&number_density(&synthesize_with(&packet, &grid, t, &opts)), &grid))
        .collect();
    out.push(CheckResult::at_most("norm_unity", max_abs(norms.iter().map(|n| n - 1.0)), tol.norm));

    let line = line_packet(Polarization::Plus, 1.0);
    let (order, rel) = continuity_study(&line, 2.0 * PI / line.grid().spacing(), 4096, 1.0, &opts);
    out.push(CheckResult::at_least("continuity_order_1d", order, tol.order));
    out.push(CheckResult::at_most("continuity_fine_residual_1d", rel, tol.continuity_rel).with_order(order));
    let small = small_packet();
    let (order3, _) = continuity_study(&small, 2.0 * PI / small.grid().spacing(), 32, 0.5, &opts);
    out.push(CheckResult::at_least("continuity_order_3d", order3, tol.order));

    out.push(CheckResult::at_most("helicity_plus", helicity_deviation(Polarization::Plus), tol.helicity));
    out.push(CheckResult::at_most("helicity_minus", helicity_deviation(Polarization::Minus), tol.helicity));
    out.push(CheckResult::at_most(
        "helicity_longitudinal",
        helicity_deviation(Polarization::Parallel),
        tol.longitudinal,
    ));

    let g = gauge_check(&mut rng);
    out.push(CheckResult::at_most("gauge_fields", g.field_change, tol.gauge_fields));
    out.push(CheckResult::at_most("gauge_norm", g.norm_change, tol.gauge_norm));
    out.push(CheckResult::at_most("gauge_transverse_identical", if g.transverse_identical { 0.0 } else { 1.0 }, 0.0));

    let (b0, b1) = (boost_error(cfg.beta, 16), boost_error(cfg.beta, 32));
    out.push(CheckResult::at_most("boost_norm", b0, tol.boost));
    out.push(CheckResult::at_most("boost_norm_refined", b1, b0));

    let low = low_k_field(&mut rng);
    let (os, ov) = maxwell_order(&low, 32);
    out.push(CheckResult::at_least("maxwell_order_gauss", os, tol.order));
    out.push(CheckResult::at_least("maxwell_order_ampere", ov, tol.order));

    let med = medium_check(2.0);
    out.push(CheckResult::at_most("medium_density_ratio", med.ratio_deviation, tol.medium_pointwise));
    out.push(CheckResult::at_most("medium_rescaled_norm", med.rescaled_norm_error, tol.norm));
    out.push(CheckResult::at_most("medium_vacuum_reduction", med.vacuum_deviation, tol.vacuum));
    out.push(CheckResult::at_most("medium_current_speed", med.speed_deviation, tol.medium_speed));

    let life = lifecycle_check(2048, 400);
    out.push(CheckResult::at_most("lifecycle_emitted_norm", life.emitted_norm_error, tol.lifecycle_norm));
    out.push(CheckResult::at_most("lifecycle_peak_cells", life.peak_offset_cells, 1.0));
    out.push(CheckResult::at_most("lifecycle_causal_cone", life.cone_leak, tol.cone));
    out.push(CheckResult::at_most("lifecycle_detected_norm", life.detected_norm, tol.lifecycle_norm));
    out.push(CheckResult::at_most("lifecycle_acausal_flag", if life.acausal_flagged { 0.0 } else { 1.0 }, 0.0));
    out.push(CheckResult::at_least("lifecycle_residual_order", life.residual_order, tol.order));

    let fock = fock_check(cfg.fock_dim);
    out.push(CheckResult::at_most("fock_commutator", fock.commutator_error, tol.fock));
    out.push(CheckResult::at_most("fock_number_ulps", fock.number_error, NUMBER_ULPS));
    out
}
