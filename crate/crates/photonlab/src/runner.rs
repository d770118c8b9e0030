//! Scenario execution: builds states from a configuration, evaluates them and
//! writes CSV tables and a report into the output directory.

use std::io;
use std::path::Path;

use log::info;
use photonlab_core::current::{continuity_residual, current_field, helicity_density, position_norm, CurrentField};
use photonlab_core::fock::{expectation, ladder_pair, n_photon_state};
use photonlab_core::medium::{
    current_in_medium, density_rescale, lifecycle_1d, matched_detector, EventKind, MediumSpec, SourceEvent,
};
use photonlab_core::modes::{
    boost_amplitudes, boosted_grid, gauge_shift, gaussian_packet, integrated_four_current, norm, transverse_norm,
    Dimension, ModeAmplitudes, Polarization,
};
use photonlab_core::synthesis::{synthesize, FieldSnapshot, SpatialGrid};
use photonlab_core::vector::Vec3;
use thiserror::Error;

use crate::checks::{self, CheckResult, DT_OVER_DX};
use crate::config::{ConfigError, ScenarioConfig, ScenarioKind};
use crate::output::{self, fmt_f, Table};
use crate::report::VerificationReport;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("configuration error: {0}")]
    Config(#[from] ConfigError),
    #[error("invalid scenario: {0}")]
    Model(#[from] photonlab_core::Error),
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
}

impl RunError {
    /// Process exit code for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) | RunError::Model(_) => 2,
            RunError::Io(_) => 3,
        }
    }
}

fn write_report(dir: &Path, report: &VerificationReport) -> io::Result<()> {
    output::write_atomic(&dir.join("report.txt"), report.to_text().as_bytes())?;
    output::write_atomic(&dir.join("report.csv"), &report.to_csv()?)
}

/// Runs the verification suite and writes `report.txt` and `report.csv`.
pub fn run_verify(cfg: &ScenarioConfig) -> Result<VerificationReport, RunError> {
    if cfg.kind != ScenarioKind::Verify {
        return Err(ConfigError::Semantic {
            field: "scenario.kind".into(),
            message: "run_verify needs kind = verify".into(),
        }
        .into());
    }
    output::prepare_dir(&cfg.output)?;
    let mut report = VerificationReport::new("photonlab verification report", cfg.echo());
    report.checks = checks::run_all(&cfg.verify, &cfg.tolerances, cfg.seed);
    write_report(&cfg.output, &report)?;
    Ok(report)
}

/// Runs a non-verify scenario and writes its tables plus `report.txt`.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<VerificationReport, RunError> {
    if cfg.kind == ScenarioKind::Verify {
        return run_verify(cfg);
    }
    output::prepare_dir(&cfg.output)?;
    let mut report = VerificationReport::new(&format!("photonlab {} summary", cfg.kind.name()), cfg.echo());
    match cfg.kind {
        ScenarioKind::Packet3d | ScenarioKind::Helicity => packet_scenario(cfg, &mut report)?,
        ScenarioKind::Gauge => gauge_scenario(cfg, &mut report)?,
        ScenarioKind::Boost => boost_scenario(cfg, &mut report)?,
        ScenarioKind::Medium1d => medium_scenario(cfg, &mut report)?,
        ScenarioKind::Lifecycle1d => lifecycle_scenario(cfg, &mut report)?,
        ScenarioKind::Fock => fock_scenario(cfg, &mut report)?,
        ScenarioKind::Verify => unreachable!("handled above"),
    }
    write_report(&cfg.output, &report)?;
    Ok(report)
}

fn max_abs(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn packet(cfg: &ScenarioConfig, speed: f64) -> Result<ModeAmplitudes, RunError> {
    let p = &cfg.packet;
    Ok(gaussian_packet(&p.kgrid(), &p.k0, p.sigma, p.lambda, speed)?)
}

fn x_grid(cfg: &ScenarioConfig, m: &ModeAmplitudes) -> Result<SpatialGrid, RunError> {
    Ok(SpatialGrid::dual_box(m.grid(), cfg.packet.n_x)?)
}

/// Helicity density summed over the occupied transverse polarizations.
fn helicity_sum(m: &ModeAmplitudes, snap: &FieldSnapshot) -> Result<Vec<Vec3>, RunError> {
    if snap.single_polarization().is_some() || snap.content == [false; 3] {
        return Ok(helicity_density(snap).unwrap_or_else(|_| vec![Vec3::ZERO; snap.len()]));
    }
    let mut total = vec![Vec3::ZERO; snap.len()];
    for pol in [Polarization::Plus, Polarization::Minus] {
        if !m.occupied()[pol.index()] {
            continue;
        }
        let part = synthesize(&m.restricted_to(pol), &snap.grid, snap.time);
        for (t, s) in total.iter_mut().zip(helicity_density(&part)?) {
            *t += s;
        }
    }
    Ok(total)
}

/// Density slices at each configured time, with the centered continuity residual.
struct Slice {
    now: CurrentField,
    helicity: Vec<Vec3>,
    residual: Vec<f64>,
    rate: f64,
}

fn slices(
    cfg: &ScenarioConfig,
    m: &ModeAmplitudes,
    grid: &SpatialGrid,
    dress: &dyn Fn(&FieldSnapshot) -> Result<CurrentField, RunError>,
) -> Result<Vec<Slice>, RunError> {
    let dt = DT_OVER_DX * grid.spacing();
    let zero = vec![0.0; grid.len()];
    cfg.times
        .samples()
        .into_iter()
        .map(|t| {
            info!("evaluating t = {t}");
            let snap = synthesize(m, grid, t);
            let prev = dress(&synthesize(m, grid, t - dt))?;
            let next = dress(&synthesize(m, grid, t + dt))?;
            let now = dress(&snap)?;
            let residual = continuity_residual(&prev, &now, &next, &zero)?;
            let rate = max_abs(prev.rho.iter().zip(&next.rho).map(|(a, b)| (b - a) / (2.0 * dt)));
            Ok(Slice { helicity: helicity_sum(m, &snap)?, now, residual, rate })
        })
        .collect()
}

fn write_current(cfg: &ScenarioConfig, slices: &[Slice]) -> io::Result<()> {
    let scales = cfg.units.scales();
    let mut t = Table::new(output::CURRENT_HEADER)?;
    for s in slices {
        output::current_rows(&mut t, &s.now, &s.helicity, &s.residual, &scales)?;
    }
    output::write_atomic(&cfg.output.join("current.csv"), &t.into_bytes()?)
}

fn note_norms(report: &mut VerificationReport, m: &ModeAmplitudes, slices: &[Slice]) -> f64 {
    report.note("mode_norm", fmt_f(norm(m)));
    report.note("mode_norm_transverse", fmt_f(transverse_norm(m)));
    let mut worst = 0.0f64;
    for s in slices {
        let n = position_norm(&s.now.rho, &s.now.grid);
        report.note(&format!("position_norm(t = {})", fmt_f(s.now.time)), fmt_f(n));
        worst = worst.max((n - 1.0).abs());
    }
    let rel = slices.iter().map(|s| max_abs(s.residual.iter().copied()) / s.rate.max(f64::MIN_POSITIVE));
    report.note("continuity_residual_relative_max", fmt_f(rel.fold(0.0, f64::max)));
    worst
}

fn packet_scenario(cfg: &ScenarioConfig, report: &mut VerificationReport) -> Result<(), RunError> {
    let m = packet(cfg, 1.0)?;
    let grid = x_grid(cfg, &m)?;
    let s = slices(cfg, &m, &grid, &|snap| Ok(current_field(snap)))?;
    let scales = cfg.units.scales();
    output::write_atomic(&cfg.output.join("modes.csv"), &output::modes_table(&m, &scales)?)?;
    output::write_atomic(
        &cfg.output.join("fields.csv"),
        &output::fields_table(&synthesize(&m, &grid, cfg.times.start), &scales)?,
    )?;
    write_current(cfg, &s)?;
    let worst = note_norms(report, &m, &s);
    let tol = &cfg.tolerances;
    let lambda = cfg.packet.lambda;
    if lambda.is_transverse() {
        report.checks.push(CheckResult::at_most("position_norm", worst, tol.norm));
    }
    if cfg.kind == ScenarioKind::Helicity {
        let s_max = s.iter().flat_map(|x| x.helicity.iter().map(|v| v.max_abs())).fold(0.0, f64::max);
        if lambda == Polarization::Parallel {
            report.checks.push(CheckResult::at_most("helicity_longitudinal", s_max, tol.longitudinal));
        } else if cfg.packet.dimension == Dimension::One {
            let l = lambda.helicity() as f64;
            let rho_max = s.iter().flat_map(|x| x.now.rho.iter().copied()).fold(0.0, f64::max);
            let dev = s
                .iter()
                .flat_map(|x| {
                    x.now.rho.iter().zip(&x.helicity).map(|(r, h)| (*h - Vec3::new(0.0, 0.0, l * r)).max_abs())
                })
                .fold(0.0, f64::max);
            report.checks.push(CheckResult::at_most("helicity_relation", dev / rho_max, tol.helicity));
        }
        report.note("helicity_max", fmt_f(s_max));
    }
    Ok(())
}

fn gauge_scenario(cfg: &ScenarioConfig, report: &mut VerificationReport) -> Result<(), RunError> {
    let m = packet(cfg, 1.0)?;
    let pol = cfg.packet.lambda;
    let shift: Vec<_> = (0..m.len()).map(|i| m.amplitude(i, pol) * cfg.shift).collect();
    let g = gauge_shift(&m, &shift)?;
    let grid = x_grid(cfg, &g)?;
    let s = slices(cfg, &g, &grid, &|snap| Ok(current_field(snap)))?;
    let scales = cfg.units.scales();
    output::write_atomic(&cfg.output.join("modes.csv"), &output::modes_table(&g, &scales)?)?;
    output::write_atomic(
        &cfg.output.join("fields.csv"),
        &output::fields_table(&synthesize(&g, &grid, cfg.times.start), &scales)?,
    )?;
    write_current(cfg, &s)?;
    note_norms(report, &g, &s);
    let mut field_change = 0.0f64;
    let mut norm_change = 0.0f64;
    for t in cfg.times.samples() {
        let (a, b) = (synthesize(&m, &grid, t), synthesize(&g, &grid, t));
        let pairs = a.e_plus.iter().zip(&b.e_plus).chain(a.b_plus.iter().zip(&b.b_plus));
        field_change = field_change.max(max_abs(pairs.map(|(x, y)| (*x - *y).max_abs())));
        let na = position_norm(&current_field(&a).rho, &grid);
        let nb = position_norm(&current_field(&b).rho, &grid);
        norm_change = norm_change.max((na - nb).abs());
    }
    report.checks.push(CheckResult::at_most("gauge_fields", field_change, cfg.tolerances.gauge_fields));
    report.checks.push(CheckResult::at_most("gauge_norm", norm_change, cfg.tolerances.gauge_norm));
    Ok(())
}

fn boost_scenario(cfg: &ScenarioConfig, report: &mut VerificationReport) -> Result<(), RunError> {
    let m = packet(cfg, 1.0)?;
    let dest = boosted_grid(m.grid(), cfg.beta)?;
    let b = boost_amplitudes(&m, cfg.beta, &dest)?;
    output::write_atomic(&cfg.output.join("modes.csv"), &output::modes_table(&b, &cfg.units.scales())?)?;
    let (n0, n1) = (norm(&m), norm(&b));
    report.note("mode_norm_rest", fmt_f(n0));
    report.note("mode_norm_boosted", fmt_f(n1));
    for (label, s) in [("rest", &m), ("boosted", &b)] {
        let j = integrated_four_current(s);
        report.note(
            &format!("four_current_{label}"),
            format!("({}, {}, {}, {})", fmt_f(j.t_comp), fmt_f(j.spatial[0]), fmt_f(j.spatial[1]), fmt_f(j.spatial[2])),
        );
    }
    report.checks.push(CheckResult::at_most("boost_norm", (n1 - n0).abs(), cfg.tolerances.boost));
    Ok(())
}

fn medium_scenario(cfg: &ScenarioConfig, report: &mut VerificationReport) -> Result<(), RunError> {
    let med = MediumSpec::new(cfg.epsilon_rel, cfg.mu_rel)?;
    let m = packet(cfg, med.speed())?;
    let grid = x_grid(cfg, &m)?;
    let s = slices(cfg, &m, &grid, &|snap| Ok(current_in_medium(snap, &med)?))?;
    let scales = cfg.units.scales();
    output::write_atomic(&cfg.output.join("modes.csv"), &output::modes_table(&m, &scales)?)?;
    output::write_atomic(
        &cfg.output.join("fields.csv"),
        &output::fields_table(&synthesize(&m, &grid, cfg.times.start), &scales)?,
    )?;
    write_current(cfg, &s)?;
    report.note("speed", fmt_f(med.speed() * cfg.units.scales().current));
    let mut worst = 0.0f64;
    let mut speed_dev = 0.0f64;
    for x in &s {
        let n = position_norm(&density_rescale(&x.now.rho, &med), &grid);
        report.note(&format!("rescaled_norm(t = {})", fmt_f(x.now.time)), fmt_f(n));
        worst = worst.max((n - 1.0).abs());
        let scale = max_abs(x.now.rho.iter().copied()).max(f64::MIN_POSITIVE);
        let dev =
            max_abs(x.now.rho.iter().zip(&x.now.j).map(|(r, j)| (*j - Vec3::new(0.0, 0.0, med.speed() * r)).max_abs()));
        speed_dev = speed_dev.max(dev / scale);
    }
    if cfg.packet.lambda.is_transverse() {
        report.checks.push(CheckResult::at_most("rescaled_norm", worst, cfg.tolerances.norm));
        report.checks.push(CheckResult::at_most("current_speed", speed_dev, cfg.tolerances.medium_speed));
    }
    Ok(())
}

fn lifecycle_scenario(cfg: &ScenarioConfig, report: &mut VerificationReport) -> Result<(), RunError> {
    let med = MediumSpec::new(cfg.epsilon_rel, cfg.mu_rel)?;
    let line = &cfg.line;
    let grid = SpatialGrid::new(Dimension::One, line.n_z, line.spacing(), Vec3::new(0.0, 0.0, line.z_min))?;
    let times = cfg.times.samples();
    let dt = cfg.times.step();
    let e = cfg.emitters.first();
    let emit = SourceEvent {
        kind: EventKind::Emitter,
        center: Vec3::new(0.0, 0.0, e.map_or(0.0, |e| e.z)),
        width: e.and_then(|e| e.width).unwrap_or(4.0 * grid.spacing()),
        time: e.and_then(|e| e.time).unwrap_or(0.0),
        duration: e.and_then(|e| e.duration).unwrap_or(4.0 * dt),
        strength: e.map_or(1.0, |e| e.strength),
    };
    let detect = cfg.detectors.first().map(|d| {
        let mut m = matched_detector(&emit, d.z, &med, d.strength);
        m.width = d.width.unwrap_or(m.width);
        m.time = d.time.unwrap_or(m.time);
        m.duration = d.duration.unwrap_or(m.duration);
        (m, d.width.is_none() && d.time.is_none() && d.duration.is_none())
    });
    let rep = lifecycle_1d(&emit, detect.as_ref().map(|d| &d.0), &med, &grid, &times)?;
    let scales = cfg.units.scales();
    output::write_atomic(&cfg.output.join("lifecycle.csv"), &output::lifecycle_table(&rep.samples, &scales)?)?;

    report.note("speed", fmt_f(med.speed() * cfg.units.scales().current));
    report.note("final_norm", fmt_f(rep.final_norm()));
    let peak = rep.samples.iter().map(|s| s.norm).fold(0.0, f64::max);
    report.note("peak_norm", fmt_f(peak));
    if let Some(t) = rep.travel_time {
        report.note("travel_time", fmt_f(t * scales.time));
    }
    report.note("cone_leak", fmt_f(rep.cone_leak));
    report.checks.push(CheckResult::at_most("causal_cone", rep.cone_leak, cfg.tolerances.cone));
    if let Some((det, matched)) = &detect {
        if rep.acausal {
            report.note("detection", "acausal detection");
            report.checks.push(CheckResult::at_most("causal_detection", 1.0, 0.0));
        } else if *matched && det.strength == 1.0 && emit.strength == 1.0 {
            report.checks.push(CheckResult::at_most("detected_norm", rep.final_norm(), cfg.tolerances.lifecycle_norm));
        }
    }
    Ok(())
}

fn fock_scenario(cfg: &ScenarioConfig, report: &mut VerificationReport) -> Result<(), RunError> {
    let dim = cfg.fock_dim;
    let lp = ladder_pair(dim)?;
    let comm = lp.a.commutator(&lp.a_dag);
    let num = lp.a_dag.mul(&lp.a);
    let mut comm_err = 0.0f64;
    let mut num_err = 0.0f64;
    for n in 0..dim {
        let psi = n_photon_state(&lp, n)?;
        let c = expectation(&comm, &psi).re;
        let k = expectation(&num, &psi).re;
        report.note(&format!("n = {n:2}"), format!("[a, a+] = {}  a+a = {}", fmt_f(c), fmt_f(k)));
        if n + 1 < dim {
            comm_err = comm_err.max((c - 1.0).abs());
        }
        num_err = num_err.max(checks::number_deviation(k, n));
    }
    report.checks.push(CheckResult::at_most("fock_commutator", comm_err, cfg.tolerances.fock));
    report.checks.push(CheckResult::at_most("fock_number_ulps", num_err, checks::NUMBER_ULPS));
    Ok(())
}
