//! Golden-file regression. Each `tests/golden/configs/<scenario>.toml` is
//! run and every emitted file compared byte for byte with
//! `tests/golden/expected/<scenario>/`. Set `UPDATE_GOLDEN=1` to rewrite the
//! expected files.

use std::path::PathBuf;

use strainsim::experiments::config::ScenarioConfig;
use strainsim::experiments::{run, write_outputs, Scenario};

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Returns the `<scenario>/<file>` names that do not match.
pub fn check_all() -> Vec<String> {
    let bless = std::env::var_os("UPDATE_GOLDEN").is_some_and(|v| v == "1");
    let scratch = tempfile::tempdir().unwrap();
    let mut mismatched = Vec::new();
    for scenario in Scenario::ALL {
        let path = golden_dir()
            .join("configs")
            .join(format!("{scenario}.toml"));
        let (config, hash) = ScenarioConfig::load(&path).unwrap();
        let output = run(scenario, &config).unwrap();
        let manifest = write_outputs(
            scenario,
            &output,
            &hash,
            scratch.path(),
            config.output().svg,
        )
        .unwrap();
        let expected_dir = golden_dir().join("expected").join(scenario.name());
        if bless {
            let _ = std::fs::remove_dir_all(&expected_dir);
            std::fs::create_dir_all(&expected_dir).unwrap();
        }
        let mut expected_files: Vec<String> = std::fs::read_dir(&expected_dir)
            .map(|d| {
                d.map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
                    .collect()
            })
            .unwrap_or_default();
        for file in &manifest.files {
            let actual = std::fs::read(scratch.path().join(scenario.name()).join(file)).unwrap();
            if bless {
                std::fs::write(expected_dir.join(file), &actual).unwrap();
                continue;
            }
            expected_files.retain(|f| f != file);
            if std::fs::read(expected_dir.join(file)).ok().as_deref() != Some(actual.as_slice()) {
                mismatched.push(format!("{scenario}/{file}"));
            }
        }
        // files in the golden set that the run no longer produces
        mismatched.extend(
            expected_files
                .into_iter()
                .map(|f| format!("{scenario}/{f} (stale)")),
        );
    }
    mismatched
}
