//! Independent reference computations compared against the library.

use std::f64::consts::{PI, SQRT_2};

use photonlab_core::current::{current_field, number_density, position_norm};
use photonlab_core::fock::{expectation, ladder_pair, n_photon_state};
use photonlab_core::medium::{green_response_1d, EventKind, MediumSpec, SourceEvent};
use photonlab_core::modes::{gaussian_packet, KGrid, ModeAmplitudes, Polarization};
use photonlab_core::quadrature::GaussLegendre;
use photonlab_core::relativity::polarization_basis;
use photonlab_core::synthesis::{synthesize, synthesize_with, Evaluation, SpatialGrid, SynthesisOptions};
use photonlab_core::vector::{CVec3, Vec3};
use photonlab_core::Complex64;

fn normal_pdf(x: f64, s: f64) -> f64 {
    (-0.5 * (x / s).powi(2)).exp() / (s * (2.0 * PI).sqrt())
}

fn normal_cdf(x: f64) -> f64 {
    0.5 * (1.0 + libm::erf(x / SQRT_2))
}

/// Closed form of `∫_{−∞}^{T} N(u; σ_t) N(a + vu; σ_z) du` for untruncated Gaussians.
fn emission_oracle(z: f64, t: f64, z0: f64, t0: f64, sz: f64, st: f64, v: f64) -> f64 {
    let a = z - z0 - v * (t - t0);
    let var = sz * sz + v * v * st * st;
    let s = st * sz / var.sqrt();
    let mu = -a * v * st * st / var;
    normal_pdf(a, var.sqrt()) * normal_cdf((t - t0 - mu) / s)
}

#[test]
fn green_response_matches_gaussian_convolution() {
    let med = MediumSpec::new(2.0, 1.0).unwrap();
    let v = med.speed();
    let grid = SpatialGrid::new(photonlab_core::modes::Dimension::One, 800, 0.05, Vec3::new(0.0, 0.0, -5.0)).unwrap();
    let src = SourceEvent {
        kind: EventKind::Emitter,
        center: Vec3::new(0.0, 0.0, 1.0),
        width: 0.3,
        time: 0.5,
        duration: 0.4,
        strength: 0.8,
    };
    let times = [0.0, 0.5, 1.0, 3.0, 20.0];
    let samples = green_response_1d(&src, &med, &grid, &times).unwrap();
    let peak = samples.iter().flat_map(|s| s.rho.iter().copied()).fold(0.0, f64::max);
    for s in &samples {
        for (i, r) in s.rho.iter().enumerate() {
            let z = grid.point(i).z();
            let expect = 0.8 * emission_oracle(z, s.t, 1.0, 0.5, 0.3, 0.4, v);
            // truncation at 6σ changes the envelopes by ~1e-8 relative
            assert!((r - expect).abs() < 1e-7 * peak, "t={} z={z}: {r} vs {expect}", s.t);
            assert!((s.j[i] - v * r).abs() <= 1e-15 * peak);
        }
    }
}

#[test]
fn separable_and_direct_paths_agree() {
    let g = KGrid::cube(5, 0.4, Vec3::new(0.3, -0.2, 2.0)).unwrap();
    let m = ModeAmplitudes::from_fn(g.clone(), 1.0, |k, p| {
        let s = match p {
            Polarization::Plus => 1.0,
            Polarization::Minus => -0.4,
            Polarization::Parallel => 0.3,
        };
        Complex64::new(s * (k.x() + 1.0).cos(), s * k.y().sin() + 0.1 * k.z())
    })
    .unwrap();
    let grid = SpatialGrid::dual_box(&g, 7).unwrap();
    let direct = SynthesisOptions { evaluation: Evaluation::Direct, ..Default::default() };
    let a = synthesize_with(&m, &grid, 0.8, &direct);
    let b = synthesize(&m, &grid, 0.8);
    let scale = a.e_plus.iter().map(|v| v.max_abs()).fold(0.0, f64::max);
    let diff = |x: &[CVec3], y: &[CVec3]| x.iter().zip(y).map(|(p, q)| (*p - *q).max_abs()).fold(0.0, f64::max);
    assert!(diff(&a.a_plus, &b.a_plus) < 1e-12 * scale);
    assert!(diff(&a.e_plus, &b.e_plus) < 1e-12 * scale);
    assert!(diff(&a.b_plus, &b.b_plus) < 1e-12 * scale);
    let phi = a.phi_plus.iter().zip(&b.phi_plus).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max);
    assert!(phi < 1e-12 * scale);
}

#[test]
fn single_mode_fields_follow_plane_wave_algebra() {
    let g = KGrid::cube(3, 0.5, Vec3::new(0.0, 0.0, 3.0)).unwrap();
    let grid = SpatialGrid::dual_box(&g, 6).unwrap();
    for pol in [Polarization::Plus, Polarization::Minus] {
        let idx = g.nearest_index(&Vec3::new(0.5, -0.5, 3.5)).unwrap();
        let k = g.point(idx);
        let mut m = ModeAmplitudes::zeros(g.clone(), 1.0).unwrap();
        let c = Complex64::new(0.3, -1.1);
        m.set_amplitude(idx, pol, c);
        let t = 0.9;
        let snap = synthesize(&m, &grid, t);
        let w = 0.5f64.powi(3) / ((2.0 * PI).powi(3) * 2.0 * k.norm());
        let e = polarization_basis(&k).unwrap().vector(pol.helicity());
        let lambda = pol.helicity() as f64;
        for i in 0..grid.len() {
            let x = grid.point(i);
            let phase = Complex64::new(0.0, k.dot(&x) - k.norm() * t).exp();
            let alpha = Complex64::new(0.0, 0.5f64.sqrt()) * c * phase * w;
            let a = e.scale(alpha);
            assert!((snap.a_plus[i] - a).max_abs() < 1e-15);
            assert!((snap.e_plus[i] - a.scale(Complex64::new(0.0, k.norm()))).max_abs() < 1e-14);
            assert!((snap.b_plus[i] - a * (lambda * k.norm())).max_abs() < 1e-14);
        }
        let n = position_norm(&number_density(&snap), &grid);
        assert!((n - w * c.norm_sqr()).abs() < 1e-15);
    }
}

#[test]
fn helical_vectors_are_curl_eigenvectors() {
    for k in [Vec3::new(0.3, -1.2, 0.7), Vec3::new(0.0, 0.0, -2.0), Vec3::new(1.0, 1.0, 0.0)] {
        let b = polarization_basis(&k).unwrap();
        let n = k * (1.0 / k.norm());
        for lambda in [1i8, -1] {
            let e = b.vector(lambda);
            // i k̂ × e_λ = λ e_λ
            let lhs = n.to_complex().cross(&e).scale(Complex64::new(0.0, 1.0));
            assert!((lhs - e * lambda as f64).max_abs() < 1e-15);
            assert!((e.dot(&e.conj()).re - 1.0).abs() < 1e-15);
            assert!(e.dot(&n.to_complex()).norm() < 1e-15);
        }
        assert!(b.e_plus.dot(&b.e_minus.conj()).norm() < 1e-15);
    }
}

#[test]
fn dual_box_norm_equals_mode_norm_for_many_modes() {
    let k0 = Vec3::new(0.2, 0.0, 2.5);
    let g = KGrid::cube(6, 0.3, k0).unwrap();
    let m = gaussian_packet(&g, &k0, 0.4, Polarization::Minus, 1.0).unwrap();
    let grid = SpatialGrid::dual_box(&g, 12).unwrap();
    for t in [0.0, 4.0, 40.0] {
        let cf = current_field(&synthesize(&m, &grid, t));
        assert!((position_norm(&cf.rho, &grid) - 1.0).abs() < 1e-12);
    }
}

#[test]
fn gauss_legendre_matches_antiderivatives() {
    let rule = GaussLegendre::new(8);
    let poly = |x: f64| 3.0 * x.powi(15) - x.powi(7) + 2.0;
    let anti = |x: f64| 3.0 * x.powi(16) / 16.0 - x.powi(8) / 8.0 + 2.0 * x;
    assert!((rule.integrate(-0.5, 1.25, 1, poly) - (anti(1.25) - anti(-0.5))).abs() < 1e-12);
    let g = rule.integrate(0.0, PI, 16, f64::sin);
    assert!((g - 2.0).abs() < 1e-14);
}

#[test]
fn number_operator_diagonal_is_integer_to_one_ulp() {
    let lp = ladder_pair(32).unwrap();
    let num = lp.a_dag.mul(&lp.a);
    for n in 0..32 {
        let x = expectation(&num, &n_photon_state(&lp, n).unwrap()).re;
        let nf = n as f64;
        assert!((x - nf).abs() <= f64::EPSILON * nf.max(1.0), "n={n}: {x}");
    }
}

#[test]
fn integrated_helicity_matches_k_space_current() {
    use photonlab_core::current::helicity_density;
    use photonlab_core::modes::integrated_four_current;
    let k0 = Vec3::new(0.5, -0.3, 1.5);
    let g = KGrid::cube(5, 0.4, k0).unwrap();
    let grid = SpatialGrid::dual_box(&g, 10).unwrap();
    for pol in [Polarization::Plus, Polarization::Minus] {
        // wide packet so the directions e_k differ appreciably across modes
        let m = gaussian_packet(&g, &k0, 0.8, pol, 1.0).unwrap();
        let s = helicity_density(&synthesize(&m, &grid, 1.3)).unwrap();
        let total = s.iter().fold(Vec3::ZERO, |acc, v| acc + *v) * grid.cell_volume();
        let expect = integrated_four_current(&m).spatial_vec() * pol.helicity() as f64;
        assert!((total - expect).max_abs() < 1e-12, "{total:?} vs {expect:?}");
    }
}
