use std::path::Path;
use std::process::{Command, Output};

fn photonlab(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_photonlab")).args(args).current_dir(cwd).output().expect("binary runs")
}

fn run_config(dir: &Path, text: &str) -> Output {
    let cfg = dir.join("scenario.ini");
    std::fs::write(&cfg, text).unwrap();
    photonlab(&["run", "--config", cfg.to_str().unwrap()], dir)
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(str::to_string).collect();
    let rows =
        r.records().map(|rec| rec.unwrap().iter().map(|f| f.parse::<f64>().unwrap_or(f64::NAN)).collect()).collect();
    (header, rows)
}

#[test]
fn version_flag() {
    let out = photonlab(&["--version"], Path::new("."));
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains(env!("CARGO_PKG_VERSION")));
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_config(dir.path(), "[medium1d]\nepsilon_rel = 0.5\n");
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("epsilon_rel must be ≥ 1"));
    let out = run_config(dir.path(), "[packet3d]\ncolour = red\n");
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2, column 1"));
}

#[test]
fn unwritable_output_exits_with_three_before_work() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_config(dir.path(), "[scenario]\noutput = /dev/null/out\n[packet3d]\n");
    assert_eq!(out.status.code(), Some(3));
    let out = photonlab(&["run", "--config", "/nonexistent/photonlab.ini"], dir.path());
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn packet3d_writes_schemas_and_unit_norm() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_config(dir.path(), "[scenario]\noutput = out\n[packet3d]\nn_k = 6\ndk = 0.5\nn_x = 12\nsteps = 2\n");
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let o = dir.path().join("out");
    let (h, rows) = read_csv(&o.join("current.csv"));
    assert_eq!(h.join(","), "t,x,y,z,rho,jx,jy,jz,sx,sy,sz,residual");
    assert_eq!(rows.len(), 2 * 12usize.pow(3));
    let (h, rows) = read_csv(&o.join("modes.csv"));
    assert_eq!(h.join(","), "kx,ky,kz,lambda,re,im");
    assert_eq!(rows.len(), 216);
    let (h, _) = read_csv(&o.join("fields.csv"));
    assert_eq!(h.len(), 23);
    assert_eq!(h[..4].join(","), "x,y,z,re_Ax");
    assert_eq!(h[21..].join(","), "re_phi,im_phi");
    let report = std::fs::read_to_string(o.join("report.txt")).unwrap();
    assert!(report.contains("PASS  position_norm"));
    let raw = std::fs::read_to_string(o.join("current.csv")).unwrap();
    let first = raw.lines().nth(1).unwrap();
    assert!(first
        .split(',')
        .all(|f| f.contains('e') && f.split('e').next().unwrap().trim_start_matches('-').len() == 18));
}

#[test]
fn longitudinal_helicity_columns_vanish() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_config(dir.path(), "[scenario]\noutput = out\n[helicity]\nlambda = par\nn_x = 128\n");
    assert_eq!(out.status.code(), Some(0));
    let (_, rows) = read_csv(&dir.path().join("out/current.csv"));
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r[8].abs() <= 1e-12 && r[9].abs() <= 1e-12 && r[10].abs() <= 1e-12));
}

#[test]
fn lifecycle_with_matched_detector_ends_empty() {
    let dir = tempfile::tempdir().unwrap();
    let out =
        run_config(dir.path(), "[scenario]\noutput = out\n[lifecycle1d]\nn_z = 512\nsteps = 120\n[detector]\nz = 30\n");
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let (h, rows) = read_csv(&dir.path().join("out/lifecycle.csv"));
    assert_eq!(h.join(","), "t,norm,residual_max,peak_z");
    assert_eq!(rows.len(), 120);
    assert!(rows.last().unwrap()[1].abs() <= 1e-6);
    assert!(rows.iter().any(|r| (r[1] - 1.0).abs() < 1e-6));
}

#[test]
fn early_detector_is_flagged_acausal() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_config(
        dir.path(),
        "[scenario]\noutput = out\n[lifecycle1d]\nn_z = 512\nsteps = 120\n[detector]\nz = 30\ntime = 2\nwidth = 0.2\n",
    );
    assert_eq!(out.status.code(), Some(1));
    let report = std::fs::read_to_string(dir.path().join("out/report.txt")).unwrap();
    assert!(report.contains("acausal detection"));
    let (_, rows) = read_csv(&dir.path().join("out/lifecycle.csv"));
    assert!(rows.last().unwrap()[1] > 0.5);
}

#[test]
fn si_output_rescales_time_axis() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_config(
        dir.path(),
        "[scenario]\nunits = si\noutput = out\n[lifecycle1d]\nn_z = 256\nsteps = 40\nt_start = 0\nt_stop = 2e-7\n",
    );
    assert_eq!(out.status.code(), Some(0));
    let (_, rows) = read_csv(&dir.path().join("out/lifecycle.csv"));
    assert!((rows.last().unwrap()[0] - 2e-7).abs() < 1e-20);
}

#[test]
fn gauge_boost_medium_and_fock_scenarios_pass() {
    for (text, files) in [
        ("[gauge]\nn_k = 6\ndk = 0.5\nn_x = 12\nsteps = 2\n", &["modes.csv", "fields.csv", "current.csv"][..]),
        ("[boost]\n", &["modes.csv"][..]),
        ("[medium1d]\nn_x = 256\n", &["modes.csv", "current.csv"][..]),
        ("[fock]\nn = 16\n", &[][..]),
    ] {
        let dir = tempfile::tempdir().unwrap();
        let out = run_config(dir.path(), &format!("[scenario]\noutput = out\n{text}"));
        assert_eq!(out.status.code(), Some(0), "{text}\n{}", String::from_utf8_lossy(&out.stdout));
        for f in files.iter().chain(&["report.txt", "report.csv"]) {
            assert!(dir.path().join("out").join(f).exists(), "{text}: {f}");
        }
    }
}

#[test]
fn verify_rejects_other_kinds() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.ini");
    std::fs::write(&cfg, "[fock]\n").unwrap();
    let out = photonlab(&["verify", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn broken_measure_fails_continuity_only() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.ini");
    std::fs::write(&cfg, "[scenario]\noutput = out\n[verify]\nbroken_measure = true\n").unwrap();
    let out = photonlab(&["verify", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let (h, _) = read_csv(&dir.path().join("out/report.csv"));
    assert_eq!(h.join(","), "name,value,comparison,tolerance,pass,order");
    let mut r = csv::Reader::from_path(dir.path().join("out/report.csv")).unwrap();
    let failed: Vec<String> =
        r.records().map(|x| x.unwrap()).filter(|x| &x[4] == "false").map(|x| x[0].to_string()).collect();
    assert!(!failed.is_empty());
    assert!(failed.iter().all(|n| n.starts_with("continuity")), "{failed:?}");
}
