use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use phasemix::config::ModelConfig;
use phasemix::series::read_series;

fn phasemix(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_phasemix"))
        .args(args)
        .env("PHASEMIX_OUTPUT", out)
        .output()
        .expect("binary runs")
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn no_arguments_is_a_usage_error() {
    let tmp = tempfile::tempdir().unwrap();
    let out = phasemix(&[], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("Usage"), "{err}");
}

#[test]
fn unknown_suite_is_a_usage_error() {
    let tmp = tempfile::tempdir().unwrap();
    let out = phasemix(&["verify", "everything"], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown suite"));
}

#[test]
fn missing_config_is_a_model_error() {
    let tmp = tempfile::tempdir().unwrap();
    let out = phasemix(&["info", "no/such/file.cfg"], tmp.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no/such/file.cfg"));
}

#[test]
fn matpoint_writes_series() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = configs().join("table1.cfg");
    let out = phasemix(&["matpoint", arg(&cfg)], tmp.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = tmp.path().join("table1/matpoint.csv");
    let (series, nodes) = read_series(std::fs::File::open(&csv).unwrap(), "matpoint.csv").unwrap();
    assert_eq!(nodes, None);
    assert_eq!(series.k(), 3);
    assert_eq!(series.len(), 2000 * 564 + 1);
    assert_eq!(series.records()[0].fractions, vec![0.0, 0.0, 1.0]);
}

#[test]
fn output_flag_overrides_environment() {
    let (env_dir, flag_dir) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("short.cfg");
    let text = std::fs::read_to_string(configs().join("table1.cfg"))
        .unwrap()
        .replace("n_cycles = 2000", "n_cycles = 1");
    std::fs::write(&cfg, text).unwrap();
    let out = phasemix(&["-o", arg(flag_dir.path()), "matpoint", arg(&cfg)], env_dir.path());
    assert!(out.status.success());
    assert!(flag_dir.path().join("short/matpoint.csv").is_file());
    assert!(!env_dir.path().join("short").exists());
}

#[test]
fn info_resolves_units_and_reloads() {
    let tmp = tempfile::tempdir().unwrap();
    let out = phasemix(&["info", arg(&configs().join("table1.cfg"))], tmp.path());
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("stiffness = 7430000.0"), "{text}");
    assert!(!text.contains("MPa") && !text.contains("kPa"));

    let resolved = ModelConfig::from_str(&text, &configs()).unwrap();
    let original = ModelConfig::load(&configs().join("table1.cfg")).unwrap();
    assert_eq!(resolved.material.phases, original.material.phases);
    assert_eq!(resolved.file, original.file.resolved().unwrap());
    assert_eq!(resolved.file.resolved().unwrap().to_string(), text);
}

#[test]
fn verify_grid_passes() {
    let tmp = tempfile::tempdir().unwrap();
    let out = phasemix(&["verify", "grid"], tmp.path());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{text}");
    assert!(text.starts_with("check") && !text.contains("FAIL"), "{text}");
}

#[test]
fn fem_zero_ramp_keeps_initial_phase() {
    let tmp = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(configs().join("table2.cfg"))
        .unwrap()
        .replace("ramp_amplitude = 6.0", "ramp_amplitude = 0.0")
        .replace("n_steps = 700", "n_steps = 5")
        .replace("[0, 100, 200, 400, 700]", "[5]")
        .replace("meshes/coarse.msh", arg(&configs().join("meshes/coarse.msh")));
    let cfg = tmp.path().join("still.cfg");
    std::fs::write(&cfg, text).unwrap();
    let out = phasemix(&["fem", arg(&cfg)], tmp.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("no transformation"));
    let (probe, nodes) = read_series(std::fs::File::open(tmp.path().join("still/probe.csv")).unwrap(), "p").unwrap();
    assert_eq!(nodes, Some(vec![17; 6]));
    assert!(probe.records().iter().all(|r| r.fractions == [0.0, 0.0, 1.0]));
    assert!(tmp.path().join("still/step_0005.vtk").is_file());
}

#[test]
fn fem_rejects_unknown_probe() {
    let tmp = tempfile::tempdir().unwrap();
    let out = phasemix(
        &["fem", arg(&configs().join("table2.cfg")), "--probe-node", "100000"],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("probe_node 100000"));
}
