use std::path::{Path, PathBuf};
use std::process::Command;

use lzs_cli::run::{config_from_meta, meta_path};
use lzs_cli::{resolve, validate_file, CliError, ExperimentConfig};

fn lzs() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lzs"))
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

const GATE: &str = r#"
kind = "gate"
preset = "fig5_ghi"

[output]
path = "gate.csv"
"#;

const SCAN: &str = r#"
kind = "time_scan"
preset = "cs_robust"
decay = "pair"
metrics = ["fidelity", "p_g_final"]

[deviations]
min = -0.05
max = 0.05
points = 5

[output]
path = "scan.json"
"#;

#[test]
fn rerun_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "scan.toml", SCAN);
    let mut first = Vec::new();
    for _ in 0..2 {
        let st = lzs().arg("run").arg(&cfg).output().unwrap().status;
        assert!(st.success());
        first.push(std::fs::read(dir.path().join("scan.fidelity.json")).unwrap());
    }
    assert_eq!(first[0], first[1]);
    assert!(dir.path().join("scan.p_g_final.json").exists());
}

#[test]
fn sidecar_config_reproduces_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "gate.toml", GATE);
    assert!(lzs()
        .arg("run")
        .arg(&cfg)
        .output()
        .unwrap()
        .status
        .success());
    let out = dir.path().join("gate.csv");
    let original = std::fs::read(&out).unwrap();

    let stored = config_from_meta(&meta_path(&out)).unwrap();
    assert!(stored.preset.is_none());
    let resolved = resolve(&stored).unwrap();
    assert_eq!(resolve(&resolved.to_config()).unwrap(), resolved);

    // Re-run the stored document from TOML under a new output name.
    let mut again = stored.clone();
    again.output.path = PathBuf::from("gate_again.csv");
    let cfg2 = write_config(dir.path(), "again.toml", &toml::to_string(&again).unwrap());
    assert!(lzs()
        .arg("run")
        .arg(&cfg2)
        .output()
        .unwrap()
        .status
        .success());
    assert_eq!(
        std::fs::read(dir.path().join("gate_again.csv")).unwrap(),
        original
    );
}

#[test]
fn missing_omega_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "bad.toml",
        r#"
kind = "trajectory"
duration = 1.0

[params]
a = 1.0
delta0 = 1.0

[output]
path = "x.csv"
"#,
    );
    match validate_file(&cfg) {
        Err(CliError::Validation { path, .. }) => assert_eq!(path, "params.omega"),
        other => panic!("expected validation error, got {other:?}"),
    }
    let out = lzs().arg("validate").arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("params.omega"));
    let out = lzs().arg("run").arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(!dir.path().join("x.csv").exists());
}

#[test]
fn unknown_field_and_preset_are_rejected() {
    let bad_field = "kind = \"gate\"\npreset = \"fig3\"\nbogus = 1\n[output]\npath = \"g.csv\"\n";
    assert!(matches!(
        ExperimentConfig::from_toml(bad_field),
        Err(CliError::Validation { .. })
    ));
    let cfg = ExperimentConfig::from_toml(
        "kind = \"gate\"\npreset = \"nope\"\n[output]\npath = \"g.csv\"\n",
    )
    .unwrap();
    match resolve(&cfg) {
        Err(CliError::Validation { path, message }) => {
            assert_eq!(path, "preset");
            assert!(message.contains("fig5_ghi"));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn numerical_failure_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    // A step cap far below what the tolerance allows forces underflow.
    let cfg = write_config(
        dir.path(),
        "stiff.toml",
        r#"
kind = "trajectory"
preset = "fig3"

[integrator]
rel_tol = 1e-300
abs_tol = 1e-300

[output]
path = "t.csv"
"#,
    );
    let out = lzs().arg("run").arg(&cfg).output().unwrap();
    assert_eq!(
        out.status.code(),
        Some(2),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn list_presets_names_every_preset() {
    let out = lzs().arg("list-presets").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in lzs_core::presets::names() {
        assert!(text.contains(name), "{name}");
    }
    let out = lzs().args(["list-presets", "--json"]).output().unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(
        v.as_array().unwrap().len(),
        lzs_core::presets::names().len()
    );
}

#[test]
fn every_example_config_validates() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut n = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let p = entry.unwrap().path();
        if p.extension().is_some_and(|e| e == "toml") {
            validate_file(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
            n += 1;
        }
    }
    assert!(n >= 5);
}

#[test]
fn units_mismatch_is_a_validation_error() {
    let cfg = ExperimentConfig::from_toml(
        "kind = \"gate\"\npreset = \"fig5_ghi\"\ndecay = \"pair\"\n[channel]\nc3 = -154968.0\nr = 20.0\nlifetimes = [270.0, 314.0, 361.0, 406.0]\n[output]\npath = \"g.csv\"\n",
    )
    .unwrap();
    assert!(matches!(resolve(&cfg), Err(CliError::Validation { .. })));
}

#[test]
fn failed_cells_still_write_and_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    // The omega axis reaches zero, which is not a valid drive.
    let cfg = write_config(
        dir.path(),
        "grid.toml",
        r#"
kind = "grid_2d"
preset = "fig4_abc"

[[axes]]
deviation = "frequency"
min = -1.0
max = 0.0
points = 3

[[axes]]
deviation = "phase"
min = -0.5
max = 0.5
points = 3

[output]
path = "grid.csv"
"#,
    );
    let out = lzs().arg("run").arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let text = std::fs::read_to_string(dir.path().join("grid.csv")).unwrap();
    assert!(text.contains("NaN"));
    assert!(dir.path().join("grid.csv.meta.json").exists());
}
