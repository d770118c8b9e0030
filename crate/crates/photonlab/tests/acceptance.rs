//! Acceptance criteria, one line per criterion. Tolerances are pinned here
//! and do not follow the configurable defaults.

use std::f64::consts::PI;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use photonlab::checks::{
    boost_error, continuity_study, default_packet, fock_check, gauge_check, helicity_deviation, lifecycle_check,
    line_packet, low_k_field, maxwell_order, medium_check, norm_unity, small_packet, NUMBER_ULPS,
};
use photonlab_core::medium::{lifecycle_1d, matched_detector, EventKind, MediumSpec, SourceEvent};
use photonlab_core::modes::{Dimension, Polarization};
use photonlab_core::synthesis::{SpatialGrid, SynthesisOptions};
use photonlab_core::vector::Vec3;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn norm_unity_criterion() -> Outcome {
    let (norms, elapsed) = timed(|| norm_unity(&default_packet(Polarization::Plus), 32, 10.0));
    let dev = norms.iter().map(|n| (n - 1.0).abs()).fold(0.0, f64::max);
    Outcome {
        pass: dev <= 1e-6 && elapsed <= Duration::from_secs(60),
        detail: format!("max |norm - 1| = {dev:.3e} (<= 1e-6), runtime {:.2} s (<= 60 s)", elapsed.as_secs_f64()),
    }
}

fn continuity_criterion() -> Outcome {
    let opts = SynthesisOptions::default();
    let line = line_packet(Polarization::Plus, 1.0);
    let (order, rel) = continuity_study(&line, 2.0 * PI / line.grid().spacing(), 4096, 1.0, &opts);
    let small = small_packet();
    let (order3, _) = continuity_study(&small, 2.0 * PI / small.grid().spacing(), 32, 0.5, &opts);
    Outcome {
        pass: order >= 1.9 && rel <= 1e-4 && order3 >= 1.9,
        detail: format!(
            "1D order {order:.4}, fine residual / max|d_t rho| = {rel:.3e} (<= 1e-4), 3D order {order3:.4} (>= 1.9)"
        ),
    }
}

fn helicity_criterion() -> Outcome {
    let (p, m, l) = (
        helicity_deviation(Polarization::Plus),
        helicity_deviation(Polarization::Minus),
        helicity_deviation(Polarization::Parallel),
    );
    Outcome {
        pass: p <= 1e-10 && m <= 1e-10 && l <= 1e-12,
        detail: format!(
            "|S - lambda rho e_k| / max rho: +1 {p:.3e}, -1 {m:.3e} (<= 1e-10); longitudinal |S| {l:.3e} (<= 1e-12)"
        ),
    }
}

fn gauge_criterion() -> Outcome {
    let g = gauge_check(&mut ChaCha8Rng::seed_from_u64(7));
    Outcome {
        pass: g.field_change <= 1e-12 && g.norm_change <= 1e-10 && g.transverse_identical,
        detail: format!(
            "field change {:.3e} (<= 1e-12), norm change {:.3e} (<= 1e-10), transverse bit-identical {}",
            g.field_change, g.norm_change, g.transverse_identical
        ),
    }
}

fn boost_criterion() -> Outcome {
    let (coarse, fine) = (boost_error(0.3, 16), boost_error(0.3, 32));
    Outcome {
        pass: coarse <= 2e-2 && fine < coarse,
        detail: format!("|norm' - norm| at 16^3: {coarse:.3e} (<= 2e-2), refined 32^3: {fine:.3e}"),
    }
}

fn maxwell_criterion() -> Outcome {
    let (gauss, ampere) = maxwell_order(&low_k_field(&mut ChaCha8Rng::seed_from_u64(11)), 32);
    Outcome {
        pass: gauss >= 1.9 && ampere >= 1.9,
        detail: format!("observed order: divergence equation {gauss:.4}, curl equation {ampere:.4} (>= 1.9)"),
    }
}

fn medium_criterion() -> Outcome {
    let m = medium_check(2.0);
    Outcome {
        pass: m.ratio_deviation <= 1e-12 && m.rescaled_norm_error <= 1e-6 && m.vacuum_deviation <= 1e-14,
        detail: format!(
            "|rho_pm - 2 rho_p| / max {:.3e} (<= 1e-12), |int rho_pm / eps - 1| {:.3e} (<= 1e-6), vacuum reduction {:.3e} (<= 1e-14)",
            m.ratio_deviation, m.rescaled_norm_error, m.vacuum_deviation
        ),
    }
}

fn lifecycle_criterion() -> Outcome {
    let life = lifecycle_check(2048, 400);
    let med = MediumSpec::new(2.0, 1.0).unwrap();
    let grid = SpatialGrid::new(Dimension::One, 2048, 70.0 / 2048.0, Vec3::new(0.0, 0.0, -10.0)).unwrap();
    let dt = 76.0 / 399.0;
    let times: Vec<f64> = (0..400).map(|i| -4.0 + i as f64 * dt).collect();
    let emit = SourceEvent {
        kind: EventKind::Emitter,
        center: Vec3::ZERO,
        width: 4.0 * grid.spacing(),
        time: 0.0,
        duration: 4.0 * dt,
        strength: 1.0,
    };
    let det = matched_detector(&emit, 40.0, &med, 1.0);
    let (_, elapsed) = timed(|| lifecycle_1d(&emit, Some(&det), &med, &grid, &times).unwrap());
    Outcome {
        pass: life.emitted_norm_error <= 1e-6
            && life.peak_offset_cells <= 1.0
            && life.cone_leak <= 1e-12
            && life.detected_norm <= 1e-6
            && elapsed <= Duration::from_secs(10),
        detail: format!(
            "norm after emission {:.3e} from 1, peak lag {:.3} cells, cone leak {:.3e}, final norm {:.3e}, runtime {:.2} s (<= 10 s)",
            life.emitted_norm_error,
            life.peak_offset_cells,
            life.cone_leak,
            life.detected_norm,
            elapsed.as_secs_f64()
        ),
    }
}

fn fock_criterion() -> Outcome {
    let f = fock_check(32);
    Outcome {
        pass: f.commutator_error <= 1e-14 && f.number_error <= NUMBER_ULPS,
        detail: format!(
            "max |<n|[a,a+]|n> - 1| = {:.3e} (<= 1e-14); max |<n|a+a|n> - n| = {} ulp (a+a built from rounded sqrt(n))",
            f.commutator_error, f.number_error
        ),
    }
}

fn verify_in(dir: &Path) -> (Option<i32>, Vec<u8>, Vec<u8>) {
    let out =
        Command::new(env!("CARGO_BIN_EXE_photonlab")).arg("verify").current_dir(dir).output().expect("binary runs");
    let read = |f: &str| std::fs::read(dir.join("photonlab-out").join(f)).unwrap_or_default();
    (out.status.code(), read("report.txt"), read("report.csv"))
}

fn determinism_criterion() -> Outcome {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let (code_a, txt_a, csv_a) = verify_in(a.path());
    let (code_b, txt_b, csv_b) = verify_in(b.path());
    let same = !txt_a.is_empty() && txt_a == txt_b && csv_a == csv_b;
    Outcome {
        pass: same && code_a == Some(0) && code_b == Some(0),
        detail: format!("exit codes {code_a:?}/{code_b:?}, report.txt and report.csv byte-identical: {same}"),
    }
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 10] = [
        ("norm unity and conservation", norm_unity_criterion),
        ("continuity residual convergence", continuity_criterion),
        ("helicity relation", helicity_criterion),
        ("gauge invariance", gauge_criterion),
        ("boost invariance", boost_criterion),
        ("Maxwell residuals", maxwell_criterion),
        ("medium consistency", medium_criterion),
        ("1D lifecycle", lifecycle_criterion),
        ("Fock identities", fock_criterion),
        ("determinism", determinism_criterion),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        failed += usize::from(!o.pass);
        println!("criterion {:2} {}: {name}: {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
