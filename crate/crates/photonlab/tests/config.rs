use photonlab::config::{parse_config, ConfigError, ScenarioKind, Tolerances};
use photonlab::units::Units;
use photonlab_core::modes::{Dimension, Polarization};
use photonlab_core::vector::Vec3;

#[test]
fn empty_packet3d_uses_documented_defaults() {
    let c = parse_config("[packet3d]").unwrap();
    assert_eq!(c.kind, ScenarioKind::Packet3d);
    assert_eq!(c.packet.dimension, Dimension::Three);
    assert_eq!((c.packet.n_k, c.packet.dk, c.packet.sigma), (16, 0.25, 0.5));
    assert_eq!(c.packet.k0, Vec3::new(0.0, 0.0, 4.0));
    assert_eq!(c.packet.lambda, Polarization::Plus);
    assert_eq!(c.packet.n_x, 32);
    assert_eq!(c.tolerances, Tolerances::default());
    let echo = c.echo();
    for line in ["n_k = 16", "dk = 0.25", "k0 = (0, 0, 4)", "sigma = 0.5", "lambda = +1"] {
        assert!(echo.contains(line), "missing '{line}' in\n{echo}");
    }
}

#[test]
fn lambda_par_selects_longitudinal() {
    let c = parse_config("[packet3d]\nlambda = par").unwrap();
    assert_eq!(c.packet.lambda, Polarization::Parallel);
}

#[test]
fn epsilon_below_one_is_a_named_field_error() {
    let e = parse_config("[medium1d]\nepsilon_rel = 0.5").unwrap_err();
    assert!(matches!(&e, ConfigError::Semantic { field, .. } if field == "epsilon_rel"));
    assert!(e.to_string().contains("epsilon_rel must be ≥ 1"));
}

#[test]
fn unknown_keys_and_sections_are_rejected_with_positions() {
    let e = parse_config("[scenario]\nunits = si\n[boost]\n\tspeed = 3\n").unwrap_err();
    assert_eq!(e.to_string(), "line 4, column 2: unknown key 'speed' in [boost]");
    let e = parse_config("[bogus]\n").unwrap_err();
    assert!(matches!(e, ConfigError::Syntax { line: 1, column: 2, .. }));
    let e = parse_config("[packet3d]\nsigma = abc$\n").unwrap_err();
    assert!(matches!(e, ConfigError::Syntax { line: 2, column: 9, .. }));
    let e = parse_config("[packet3d]\nn_k = 2.5\n").unwrap_err();
    assert!(matches!(e, ConfigError::Syntax { line: 2, column: 7, .. }));
}

#[test]
fn semantic_checks_precede_computation() {
    let cases = [
        ("[packet3d]\nsigma = -1", "sigma"),
        ("[boost]\nbeta = 1.0", "beta"),
        ("[packet3d]\ndk = 0", "dk"),
        ("[helicity]\nk0 = (1, 0, 4)", "k0"),
        ("[packet3d]\nt_start = 5\nt_stop = 1", "t_stop"),
        ("[fock]\nn = 1", "n"),
        ("[medium1d]\nmu_rel = 0", "mu_rel"),
        ("[lifecycle1d]\nz_min = 5\nz_max = 1", "z_max"),
    ];
    for (text, field) in cases {
        match parse_config(text) {
            Err(ConfigError::Semantic { field: f, .. }) => assert_eq!(f, field, "{text}"),
            other => panic!("{text}: {other:?}"),
        }
    }
}

#[test]
fn si_times_are_scaled_to_light_travel() {
    let c = parse_config(
        "[scenario]\nunits = si\n[lifecycle1d]\nt_start = 0\nt_stop = 1e-9\n[emitter]\nduration = 1e-10\n",
    )
    .unwrap();
    assert_eq!(c.units, Units::Si);
    assert!((c.times.stop - 0.299792458).abs() < 1e-15);
    assert!((c.emitters[0].duration.unwrap() - 0.0299792458).abs() < 1e-15);
}

#[test]
fn verify_defaults_and_overrides() {
    let c = parse_config("[verify]\nbroken_measure = true\nbeta = 0.2\n[tolerances]\norder = 1.95\n").unwrap();
    assert!(c.verify.broken_measure);
    assert_eq!(c.verify.beta, 0.2);
    assert_eq!(c.verify.fock_dim, 32);
    assert_eq!(c.tolerances.order, 1.95);
    assert!(parse_config("[verify]\nbroken_measure = 1\n").is_err());
}
