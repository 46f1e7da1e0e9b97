use std::fs;
use std::path::Path;
use std::process::Command;

use projlab::cli::{config_from_manifest, execute};
use serde_json::Value;

fn projlab(cmd: &str, config: &Path, out: &Path, cache: &Path) -> i32 {
    Command::new(env!("CARGO_BIN_EXE_projlab"))
        .args([cmd, "--config"])
        .arg(config)
        .arg("--out")
        .arg(out)
        .env("PROJLAB_CACHE", cache)
        .status()
        .expect("binary runs")
        .code()
        .expect("exit code")
}

fn write_config(dir: &Path, name: &str, body: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

#[test]
fn invalid_config_exits_with_precondition_and_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let out = dir.path().join("out");
    let cfg = write_config(dir.path(), "bad.toml", "T = -5.0\n");
    assert_eq!(projlab("lyapunov", &cfg, &out, &cache), 2);
    assert!(!out.exists());

    let unknown = write_config(dir.path(), "unknown.toml", "T = 5.0\nwobble = 1\n");
    assert_eq!(projlab("lyapunov", &unknown, &out, &cache), 2);
    assert!(!out.exists());

    let no_grid = write_config(dir.path(), "nogrid.toml", "T = 5.0\n");
    assert_eq!(projlab("scan", &no_grid, &out, &cache), 2);
    assert!(!out.exists());
}

#[test]
fn repeated_runs_give_identical_results_and_manifest_reproduces() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let cfg = write_config(dir.path(), "lyap.toml", "c = [2.0, 0.0]\nT = 5.0\nn = 8\ndt = 0.01\nseed = 7\n");
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert_eq!(projlab("lyapunov", &cfg, &a, &cache), 0);
    assert_eq!(projlab("lyapunov", &cfg, &b, &cache), 0);
    let ra = fs::read(a.join("results.json")).unwrap();
    assert_eq!(ra, fs::read(b.join("results.json")).unwrap());

    let manifest: Value = serde_json::from_slice(&fs::read(a.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["seed"], 7);
    assert_eq!(manifest["files"][0], "results.json");
    let results: Value = serde_json::from_slice(&ra).unwrap();
    let chi = results["chi"]["value"].as_f64().unwrap();
    assert!(chi.is_finite() && chi > 0.0);
}

#[test]
fn manifest_replays_scan_csv() {
    let dir = tempfile::tempdir().unwrap();
    let body =
        "command = \"scan\"\nT = 4.0\nn = 6\ndt = 0.01\nseed = 3\nbootstrap = 4\n[grid]\ncenter = [0.0, 0.0]\nspacing = 0.5\nn = 5\n";
    let cfg = write_config(dir.path(), "scan.toml", body);
    let out = dir.path().join("scan");
    assert_eq!(projlab("scan", &cfg, &out, &dir.path().join("cache")), 0);
    let csv = fs::read_to_string(out.join("chi_grid.csv")).unwrap();
    assert!(csv.starts_with("re_c,im_c,chi,stderr,mask"));
    assert_eq!(csv.lines().count(), 26);

    let (cmd, replay) = config_from_manifest(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    let again = execute(cmd, &replay).unwrap();
    let (_, body) = again.csv.iter().find(|(n, _)| n == "chi_grid.csv").unwrap();
    assert_eq!(body, &csv);
}

#[test]
fn injected_degree_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let body = "c = [0.0, 0.0]\nT = 50.0\nn = 100\ndt = 0.01\nR = 6.0\ncenters = 1\ninject_delta = 0.1\n";
    let cfg = write_config(dir.path(), "neg.toml", body);
    let out = dir.path().join("neg");
    assert_eq!(projlab("verify-formula", &cfg, &out, &cache), 0);
    let results: Value = serde_json::from_slice(&fs::read(out.join("results.json")).unwrap()).unwrap();
    assert_eq!(results["pass"], false, "{results}");
    assert_eq!(results["delta"]["params"]["injected"], true);
}

#[test]
fn shipped_configs_validate() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    let mut seen = 0;
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let cfg = projlab::cli::ExperimentConfig::load(&path).unwrap();
        let cmd = cfg.command.unwrap_or_else(|| panic!("{} declares no command", path.display()));
        cfg.validate(cmd).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        seen += 1;
    }
    assert_eq!(seen, 8);
}
