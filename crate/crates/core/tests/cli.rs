//! The `gnss-sentry` binary end to end on small synthetic drives.

use std::fs::{self, File};
use std::path::Path;
use std::process::{Command, Output};

use gnss_sentry::streams::{write_can_csv, write_gnss_csv, write_imu_csv};
use gnss_sentry::synth::SyntheticDriveConfig;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_gnss-sentry"));
    c.env_remove("GNSS_SENTRY_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn stderr_lines(out: &Output) -> Vec<String> {
    String::from_utf8_lossy(&out.stderr).lines().map(str::to_string).collect()
}

fn assert_one_line_failure(out: &Output, needle: &str) {
    assert!(!out.status.success(), "expected failure");
    let lines = stderr_lines(out);
    assert_eq!(lines.len(), 1, "{lines:?}");
    assert!(lines[0].contains(needle), "{lines:?}");
}

fn write_drive(dir: &Path, frames: usize) {
    let d = SyntheticDriveConfig {
        frames,
        ..SyntheticDriveConfig::default()
    }
    .generate()
    .unwrap();
    write_gnss_csv(File::create(dir.join("gnss.csv")).unwrap(), &d.gnss).unwrap();
    write_can_csv(File::create(dir.join("can.csv")).unwrap(), &d.can).unwrap();
    write_imu_csv(File::create(dir.join("imu.csv")).unwrap(), &d.imu).unwrap();
}

fn sync(dir: &Path) {
    let out = run(&[
        "sync",
        "--gnss",
        p(&dir.join("gnss.csv")),
        "--can",
        p(&dir.join("can.csv")),
        "--imu",
        p(&dir.join("imu.csv")),
        "--out",
        p(&dir.join("frames.csv")),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

fn small_config(dir: &Path) -> std::path::PathBuf {
    let cfg = dir.join("run.cfg");
    fs::write(&cfg, "# quick run\nhidden_size = 8\nepochs = 3\nbatch_size = 20\n").unwrap();
    cfg
}

fn train(dir: &Path, cfg: Option<&Path>, extra: &[&str]) -> Output {
    let mut args = vec![
        "train".to_string(),
        "--frames".into(),
        p(&dir.join("frames.csv")).into(),
        "--out-model".into(),
        p(&dir.join("model.json")).into(),
        "--out-history".into(),
        p(&dir.join("history.csv")).into(),
    ];
    if let Some(c) = cfg {
        args.push("--config".into());
        args.push(p(c).into());
    }
    args.extend(extra.iter().map(|s| s.to_string()));
    bin().args(&args).output().unwrap()
}

#[test]
fn eval_on_empty_frames_reports_insufficient_frames() {
    let dir = tempfile::tempdir().unwrap();
    write_drive(dir.path(), 300);
    sync(dir.path());
    let cfg = small_config(dir.path());
    assert!(train(dir.path(), Some(&cfg), &[]).status.success());
    let empty = dir.path().join("empty.csv");
    fs::write(&empty, "").unwrap();
    let out = run(&[
        "eval",
        "--model",
        p(&dir.path().join("model.json")),
        "--frames",
        p(&empty),
        "--out-dir",
        p(&dir.path().join("eval")),
    ]);
    assert_one_line_failure(&out, "insufficient frames");
}

#[test]
fn full_pipeline_on_a_small_drive() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write_drive(d, 600);
    sync(d);
    let frames = fs::read_to_string(d.join("frames.csv")).unwrap();
    assert_eq!(frames.lines().next().unwrap(), "t,can_speed,steering,accel_fwd,label_distance");
    assert_eq!(frames.lines().count(), 601);

    let cfg = small_config(d);
    let out = train(d, Some(&cfg), &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(fs::read_to_string(d.join("history.csv")).unwrap().lines().count(), 4);

    let out_dir = d.join("out");
    let out = run(&[
        "eval",
        "--model",
        p(&d.join("model.json")),
        "--frames",
        p(&d.join("frames.csv")),
        "--out-dir",
        p(&out_dir),
        "--paper-literal-rmse",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let metrics: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("metrics.json")).unwrap()).unwrap();
    assert_eq!(metrics["rmse_mode"], "sum-root");
    assert_eq!(metrics["count"], 591);
    assert!(out_dir.join("predictions.csv").exists() && out_dir.join("error_histogram.csv").exists());

    // clean data against the calibrated threshold
    let out = run(&[
        "detect",
        "--model",
        p(&d.join("model.json")),
        "--gnss",
        p(&d.join("gnss.csv")),
        "--can",
        p(&d.join("can.csv")),
        "--imu",
        p(&d.join("imu.csv")),
        "--gnss-error-m",
        "1.5",
        "--out-dir",
        p(&out_dir),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["alarm_count"], 0);
    assert_eq!(summary["budget_ok"], true);

    let spoofed = d.join("spoofed.csv");
    let out = run(&[
        "attack",
        "--gnss",
        p(&d.join("gnss.csv")),
        "--synthetic-rate",
        "10",
        "--onset",
        "300",
        "--out",
        p(&spoofed),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = run(&[
        "detect",
        "--model",
        p(&d.join("model.json")),
        "--gnss",
        p(&spoofed),
        "--can",
        p(&d.join("can.csv")),
        "--imu",
        p(&d.join("imu.csv")),
        "--onset",
        "300",
        "--residual-mode",
        "diff",
        "--out-dir",
        p(&out_dir),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["first_alarm_index"], 301);
    assert_eq!(summary["detection_delay_steps"], 1);
    assert_eq!(summary["false_alarm_rate"], 0.0);
    let verdicts = fs::read_to_string(out_dir.join("verdicts.csv")).unwrap();
    assert!(verdicts.starts_with("step,t,predicted_m,observed_m,residual_m,threshold_m,alarm,latency_us\n"));

    fs::copy(d.join("history.csv"), out_dir.join("history.csv")).unwrap();
    let out = run(&["report", "--in-dir", p(&out_dir)]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.trim_end(), fs::read_to_string(out_dir.join("report.txt")).unwrap().trim_end());
    assert!(text.contains("first alarm            301"), "{text}");
    assert!(text.contains("epochs                 3"), "{text}");
}

#[test]
fn attack_from_a_kml_route() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write_drive(d, 100);
    let gnss = gnss_sentry::streams::load_gnss_csv(d.join("gnss.csv")).unwrap();
    let start = gnss[50].pos;
    let kml = format!(
        "<kml><Placemark><LineString><coordinates>{},{} {},{}</coordinates></LineString></Placemark></kml>",
        start.lon_deg,
        start.lat_deg,
        start.lon_deg + 0.01,
        start.lat_deg
    );
    fs::write(d.join("route.kml"), kml).unwrap();
    let out = run(&[
        "attack",
        "--gnss",
        p(&d.join("gnss.csv")),
        "--route",
        p(&d.join("route.kml")),
        "--onset",
        "50",
        "--out",
        p(&d.join("spoofed.csv")),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let spoofed = gnss_sentry::streams::load_gnss_csv(d.join("spoofed.csv")).unwrap();
    assert_eq!(spoofed[..50], gnss[..50]);
    assert!(spoofed[60..].iter().all(|f| (f.pos.lat_deg - start.lat_deg).abs() < 1e-6));

    fs::write(d.join("bad.kml"), "<kml><LineString><coordinates>1,2,3,4</coordinates></LineString></kml>").unwrap();
    let out = run(&[
        "attack",
        "--gnss",
        p(&d.join("gnss.csv")),
        "--route",
        p(&d.join("bad.kml")),
        "--onset",
        "50",
        "--out",
        p(&d.join("x.csv")),
    ]);
    assert_one_line_failure(&out, "token 1");
}

#[test]
fn train_with_defaults_writes_one_history_row_per_epoch() {
    let dir = tempfile::tempdir().unwrap();
    write_drive(dir.path(), 700);
    sync(dir.path());
    let out = train(dir.path(), None, &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("model.json").exists());
    let history = fs::read_to_string(dir.path().join("history.csv")).unwrap();
    assert_eq!(history.lines().count(), 101);
    assert_eq!(history.lines().next().unwrap(), "epoch,train_mae,val_mae");
}

#[test]
fn model_is_not_overwritten_without_force() {
    let dir = tempfile::tempdir().unwrap();
    write_drive(dir.path(), 300);
    sync(dir.path());
    let cfg = small_config(dir.path());
    assert!(train(dir.path(), Some(&cfg), &[]).status.success());
    let before = fs::read(dir.path().join("model.json")).unwrap();
    let out = train(dir.path(), Some(&cfg), &["--seed", "9"]);
    assert_one_line_failure(&out, "--force");
    assert_eq!(fs::read(dir.path().join("model.json")).unwrap(), before);
    let out = train(dir.path(), Some(&cfg), &["--seed", "9", "--force"]);
    assert!(out.status.success());
    assert_ne!(fs::read(dir.path().join("model.json")).unwrap(), before);
}

#[test]
fn seed_from_environment_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write_drive(d, 300);
    sync(d);
    let cfg = small_config(d);
    fs::write(&cfg, format!("{}seed = 5\n", fs::read_to_string(&cfg).unwrap())).unwrap();
    let model = |args: &[&str], env: Option<&str>| {
        let mut c = bin();
        c.args([
            "train",
            "--frames",
            p(&d.join("frames.csv")),
            "--out-model",
            p(&d.join("m.json")),
            "--out-history",
            p(&d.join("h.csv")),
            "--config",
            p(&cfg),
            "--force",
        ])
        .args(args);
        if let Some(v) = env {
            c.env("GNSS_SENTRY_SEED", v);
        }
        assert!(c.output().unwrap().status.success());
        fs::read(d.join("m.json")).unwrap()
    };
    let from_config = model(&[], None);
    let flag5 = model(&["--seed", "5"], Some("11"));
    let env11 = model(&[], Some("11"));
    let flag11 = model(&["--seed", "11"], None);
    assert_eq!(from_config, flag5);
    assert_eq!(env11, flag11);
    assert_ne!(from_config, env11);
}

#[test]
fn errors_are_single_lines() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.csv");
    assert_one_line_failure(
        &run(&["sync", "--gnss", p(&missing), "--can", p(&missing), "--imu", p(&missing), "--out", "x"]),
        "nope.csv",
    );
    assert_one_line_failure(&run(&["train", "--bogus"]), "--bogus");
    assert_one_line_failure(&run(&["launch"]), "launch");
    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "epochs = 3\ncolour = blue\n").unwrap();
    assert_one_line_failure(&run(&["report", "--in-dir", p(dir.path()), "--config", p(&cfg)]), ":2:");
    assert_one_line_failure(&run(&["report", "--in-dir", p(dir.path())]), "none of");
    let bad = dir.path().join("gnss.csv");
    fs::write(&bad, "t,lat_deg,lon_deg,speed_mps\n0,10,10,1\n0.1,91,10,1\n").unwrap();
    let out = run(&["attack", "--gnss", p(&bad), "--synthetic-rate", "1", "--onset", "1", "--out", "x"]);
    assert_one_line_failure(&out, "line 3");
}
