use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn park_sim(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_park-sim"))
        .args(args)
        .env("PARK_SIM_OUT", out)
        .env_remove("RUST_LOG")
        .output()
        .expect("binary runs")
}

fn ok(out: &Path, args: &[&str]) -> String {
    let o = park_sim(out, args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout).unwrap()
}

#[test]
fn closed_form_picks_best_lot() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs().join("network.toml");
    let text = ok(
        dir.path(),
        &["closed-form", "--config", cfg.to_str().unwrap(), "--value-iteration"],
    );
    assert!(text.contains("best_lot,expected_time\n3,"), "{text}");
    assert!(text.contains("state,action,expected_time"));
}

#[test]
fn cascade_reports_formula_and_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let text = ok(
        dir.path(),
        &[
            "cascade",
            "--case",
            "first",
            "--probs",
            "0.5",
            "--n",
            "3",
            "--samples",
            "20000",
        ],
    );
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["formula"], 0.125);
    assert!((v["oracle"]["mean"].as_f64().unwrap() - 0.125).abs() < 0.02);
}

#[test]
fn observe_error_linear_matches_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let text = ok(
        dir.path(),
        &[
            "observe-error",
            "--law",
            "linear",
            "--slope",
            "0.5",
            "--lambda",
            "60",
            "--adoption",
            "1",
            "--draws",
            "50000",
        ],
    );
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let closed = v["closed_form"].as_f64().unwrap();
    assert_eq!(closed, 0.5);
    assert!((v["oracle"]["mean"].as_f64().unwrap() - closed).abs() < 0.05 * closed);
}

#[test]
fn out_defaults_to_environment_directory() {
    let dir = tempfile::tempdir().unwrap();
    let text = ok(dir.path(), &["random-walk", "--seeds", "4", "--minutes", "120"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["seeds"], 4);
    let mae = fs::read_to_string(dir.path().join("random-walk/mae.csv")).unwrap();
    assert_eq!(mae.lines().count(), 5);

    let other = tempfile::tempdir().unwrap();
    ok(
        dir.path(),
        &["random-walk", "--seeds", "1", "--out", other.path().to_str().unwrap()],
    );
    assert!(other.path().join("random-walk/summary.json").exists());
}

#[test]
fn same_seed_same_files() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["random-walk", "--seeds", "3", "--seed", "11"];
    ok(a.path(), &args);
    ok(b.path(), &args);
    let read = |d: &Path| fs::read(d.join("random-walk/mae.csv")).unwrap();
    assert_eq!(read(a.path()), read(b.path()));
}

#[test]
fn synthetic_ingest_round_trips_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let first = ok(dir.path(), &["ingest", "--synthetic", "--lots", "A,B"]);
    let ingest = dir.path().join("ingest");
    for f in [
        "traces.csv",
        "arrivals.csv",
        "observations.csv",
        "occupancy.csv",
        "transactions.csv",
    ] {
        assert!(ingest.join(f).exists(), "{f}");
    }
    let again = tempfile::tempdir().unwrap();
    let occ = ingest.join("occupancy.csv");
    let tx = ingest.join("transactions.csv");
    let second = ok(
        again.path(),
        &[
            "ingest",
            "--occupancy",
            occ.to_str().unwrap(),
            "--transactions",
            tx.to_str().unwrap(),
            "--lots",
            "A,B",
        ],
    );
    assert_eq!(first, second);
    assert_eq!(
        fs::read(ingest.join("traces.csv")).unwrap(),
        fs::read(again.path().join("ingest/traces.csv")).unwrap()
    );
}

#[test]
fn ingest_window_drops_records() {
    let dir = tempfile::tempdir().unwrap();
    let all: serde_json::Value = serde_json::from_str(&ok(dir.path(), &["ingest", "--synthetic"])).unwrap();
    let part: serde_json::Value = serde_json::from_str(&ok(
        dir.path(),
        &[
            "ingest",
            "--synthetic",
            "--from",
            "2024-06-15T09:00:00",
            "--to",
            "2024-06-15T11:00:00",
        ],
    ))
    .unwrap();
    assert!(part["transactions"].as_u64().unwrap() < all["transactions"].as_u64().unwrap());
}

#[test]
fn ingest_without_files_fails() {
    let dir = tempfile::tempdir().unwrap();
    let o = park_sim(dir.path(), &["ingest"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("--synthetic"));
}

#[test]
fn simulate_then_compare() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs().join("simulate.toml");
    let text = ok(dir.path(), &["simulate", "--config", cfg.to_str().unwrap()]);
    assert!(text.starts_with("setting,policy,episodes,mean"));
    assert_eq!(text.lines().count(), 7);
    let agg = dir.path().join("simulate/aggregates.csv");
    let gaps = ok(
        dir.path(),
        &[
            "compare",
            "--aggregates",
            agg.to_str().unwrap(),
            "--time-to-drive",
            "10",
            "--transit",
            "20",
        ],
    );
    assert!(gaps.lines().any(|l| l.starts_with("walk-r20,best-pa,")), "{gaps}");
    assert!(dir.path().join("compare/gaps.csv").exists());
}

#[test]
fn validate_reports_violations_with_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let good = configs().join("network.toml");
    assert!(ok(dir.path(), &["validate", "--config", good.to_str().unwrap()]).contains("ok"));

    let bad = dir.path().join("bad.toml");
    let text = fs::read_to_string(&good)
        .unwrap()
        .replace("[0.25, 0.5, 0.9]", "[0.0, 0.5, 0.9]");
    fs::write(&bad, text).unwrap();
    let o = park_sim(dir.path(), &["validate", "--config", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stdout.is_empty());
}

#[test]
fn presets_list_and_run() {
    let dir = tempfile::tempdir().unwrap();
    let list = ok(dir.path(), &["preset", "--list"]);
    assert_eq!(list.lines().count(), 9);
    let path = ok(dir.path(), &["preset", "cascade-check", "--param", "samples=20000"]);
    let summary = PathBuf::from(path.trim());
    assert!(summary.starts_with(dir.path()));
    assert!(summary.exists());
}

#[test]
fn data_presets_need_files_or_synthetic() {
    let dir = tempfile::tempdir().unwrap();
    let o = park_sim(dir.path(), &["preset", "seattle-mae"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--synthetic"));
    ok(
        dir.path(),
        &["preset", "seattle-mae", "--synthetic", "--param", "seeds=5"],
    );
    assert!(dir.path().join("seattle-mae/summary.json").exists());
}

#[test]
fn unknown_preset_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = park_sim(dir.path(), &["preset", "table9"]);
    assert!(!o.status.success());
}
