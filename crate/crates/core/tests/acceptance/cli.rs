//! Command-line behavior: exit codes, strict config, manifest completeness.

use std::collections::BTreeSet;
use std::path::Path;
use std::process::{Command, Output};

use super::repo_path;

const SCENARIOS: [&str; 5] = ["fringe", "crosstalk", "hom", "transient", "field"];

fn strainsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_strainsim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_with(scenario: &str, config: &Path, out: &Path, svg: bool) -> Output {
    let mut args = vec![
        scenario,
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ];
    if svg {
        args.push("--svg");
    }
    strainsim(&args)
}

fn write_config(dir: &Path, text: &str) -> std::path::PathBuf {
    let path = dir.join("config.toml");
    std::fs::write(&path, text).unwrap();
    path
}

fn default_text() -> String {
    std::fs::read_to_string(repo_path("configs/default.toml")).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Runs every scenario twice with the default config and returns the files
/// whose bytes differ between the runs.
pub fn repeat_runs_differ() -> Vec<String> {
    let config = repo_path("configs/default.toml");
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let mut differ = Vec::new();
    for s in SCENARIOS {
        for dir in [a.path(), b.path()] {
            let o = run_with(s, &config, dir, true);
            assert!(o.status.success(), "{s}: {}", stderr(&o));
        }
        for entry in std::fs::read_dir(a.path().join(s)).unwrap() {
            let name = entry.unwrap().file_name();
            let first = std::fs::read(a.path().join(s).join(&name)).unwrap();
            let second = std::fs::read(b.path().join(s).join(&name)).ok();
            if second.as_deref() != Some(first.as_slice()) {
                differ.push(format!("{s}/{}", name.to_string_lossy()));
            }
        }
    }
    differ
}

#[test]
fn manifest_lists_every_file() {
    let out = tempfile::tempdir().unwrap();
    let config = repo_path("configs/default.toml");
    for s in SCENARIOS {
        let o = run_with(s, &config, out.path(), true);
        assert!(o.status.success(), "{s}: {}", stderr(&o));
        let dir = out.path().join(s);
        let on_disk: BTreeSet<String> = std::fs::read_dir(&dir)
            .unwrap()
            .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
            .collect();
        let manifest: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json")).unwrap())
                .unwrap();
        let listed: BTreeSet<String> = manifest["files"]
            .as_array()
            .unwrap()
            .iter()
            .map(|f| f.as_str().unwrap().to_string())
            .collect();
        assert_eq!(on_disk, listed, "{s}");
        assert_eq!(manifest["scenario"], s);
        assert_eq!(manifest["config_sha256"].as_str().unwrap().len(), 64);
        assert!(manifest["tool_version"]
            .as_str()
            .unwrap()
            .starts_with("strainsim "));
    }
}

#[test]
fn fringe_svg_has_one_polyline_per_port() {
    let out = tempfile::tempdir().unwrap();
    let o = run_with(
        "fringe",
        &repo_path("configs/default.toml"),
        out.path(),
        true,
    );
    assert!(o.status.success());
    let svg = std::fs::read_to_string(out.path().join("fringe/fringe.svg")).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 2);
    assert!(svg.contains(r#"data-series="intensity_port1""#));
    assert!(svg.contains(r#"data-series="intensity_port2""#));
}

#[test]
fn svg_only_when_requested() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        &default_text().replace("svg = false", "svg = false\n"),
    );
    let o = run_with("hom", &config, dir.path(), false);
    assert!(o.status.success());
    assert!(!dir.path().join("hom/hom_phase.svg").exists());
    assert!(dir.path().join("hom/hom_phase.csv").exists());
}

#[test]
fn unknown_key_exits_2_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let text = default_text().replace("samples = 401", "samples = 401\nsample_count = 3");
    let config = write_config(dir.path(), &text);
    let o = run_with("fringe", &config, dir.path(), false);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(
        err.contains("sample_count") && err.contains("line"),
        "{err}"
    );
    assert!(!dir.path().join("fringe").exists());
}

#[test]
fn invalid_values_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("force_n = 20.0", "force_n = -20.0", "fringe"),
        ("wavelength_m = 8.3e-7", "wavelength_m = 0.0", "fringe"),
        ("samples = 401", "samples = 0", "fringe"),
        (
            "coherence_time_s = 1.0e-13",
            "coherence_time_s = -1.0e-13",
            "hom",
        ),
        (
            "high_voltage_v = 60.0",
            "high_voltage_v = 90.0",
            "transient",
        ),
        ("x_samples = 61", "x_samples = 0", "field"),
        ("polarization = \"H\"", "polarization = \"D\"", "fringe"),
    ];
    for (from, to, scenario) in cases {
        let text = default_text();
        assert!(text.contains(from), "{from}");
        let config = write_config(dir.path(), &text.replace(from, to));
        let o = run_with(scenario, &config, dir.path(), false);
        assert_eq!(o.status.code(), Some(2), "{to}: {}", stderr(&o));
    }
}

#[test]
fn crosstalk_site_at_surface_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let text = default_text().replace("depths_m = [2.0e-5,", "depths_m = [0.0,");
    let config = write_config(dir.path(), &text);
    let o = run_with("crosstalk", &config, dir.path(), false);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn missing_table_and_file_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "[ram]\nwidth_m = 1.0e-4\nlength_m = 1.0e-3\nforce_n = 1.0\n",
    );
    let o = run_with("hom", &config, dir.path(), false);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("[hom]"));
    let o = run_with("hom", &dir.path().join("absent.toml"), dir.path(), false);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn coarse_time_step_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let text = default_text().replace("time_step_s = 2.0e-8", "time_step_s = 1.0e-6");
    let config = write_config(dir.path(), &text);
    let o = run_with("transient", &config, dir.path(), false);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}
