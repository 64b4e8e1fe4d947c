use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use freqvqa::media::write_y4m;
use freqvqa::predictor::ModelBundle;
use freqvqa::synth::{synthetic_clip, synthetic_features};
use freqvqa::tensor::write_tensor_file;
use serde_json::Value;

fn freqvqa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_freqvqa")).args(args).output().unwrap()
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn write_clip(dir: &Path, name: &str, w: usize, h: usize, frames: usize) -> String {
    let path = dir.join(name);
    write_y4m(&synthetic_clip(w, h, frames, 1), fs::File::create(&path).unwrap()).unwrap();
    path.display().to_string()
}

fn write_csv(dir: &Path, name: &str, rows: &[(&str, f64)]) -> PathBuf {
    let path = dir.join(name);
    let mut s = String::from("id,score\n");
    for (id, v) in rows {
        s.push_str(&format!("{id},{v}\n"));
    }
    fs::write(&path, s).unwrap();
    path
}

#[test]
fn weight_maps_writes_two_maps_per_sample() {
    let dir = tempfile::tempdir().unwrap();
    let clip = write_clip(dir.path(), "c.y4m", 48, 32, 16);
    let out_dir = dir.path().join("maps");
    let out = freqvqa(&["weight-maps", "--input", &clip, "--out-dir", out_dir.to_str().unwrap(), "--frames", "16"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let names: Vec<String> = fs::read_dir(&out_dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    assert_eq!(names.iter().filter(|n| n.ends_with(".pgm")).count(), 32);
    assert_eq!(names.iter().filter(|n| n.ends_with(".csv")).count(), 32);

    let index: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let frames = index["frames"].as_array().unwrap();
    assert_eq!(frames.len(), 16);
    let pgm = fs::read(frames[3]["artifact"]["pgm"].as_str().unwrap()).unwrap();
    assert!(pgm.starts_with(b"P5\n14 14\n255\n"));
    assert_eq!(pgm.len(), 13 + 196);
    let csv = fs::read_to_string(frames[3]["structure"]["csv"].as_str().unwrap()).unwrap();
    assert_eq!(csv.lines().count(), 14);
    assert!(csv.lines().all(|l| l.split(',').count() == 14));
}

#[test]
fn weight_maps_error_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("m");
    let missing = dir.path().join("absent.y4m");
    let out = freqvqa(&["weight-maps", "--input", missing.to_str().unwrap(), "--out-dir", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).is_empty());

    let bad = dir.path().join("bad.y4m");
    let mut bytes = b"YUV4MPEG2 W16 H16 F30:1 C422\n".to_vec();
    bytes.extend(b"FRAME\n");
    bytes.extend(vec![0u8; 512]);
    fs::write(&bad, bytes).unwrap();
    let out = freqvqa(&["weight-maps", "--input", bad.to_str().unwrap(), "--out-dir", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("422"), "{}", stderr(&out));
}

#[test]
fn score_reports_all_fields() {
    let out = freqvqa(&[
        "score",
        "--input",
        &fixture("clip.y4m"),
        "--features",
        &fixture("features.fgt"),
        "--model",
        &fixture("model.fgb"),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    for key in ["score", "q_art", "q_str", "q_raw", "alpha", "beta", "gamma", "timing_ms"] {
        assert!(v[key].as_f64().unwrap().is_finite(), "{key}");
    }
    let sum = v["alpha"].as_f64().unwrap() + v["beta"].as_f64().unwrap() + v["gamma"].as_f64().unwrap();
    assert!((sum - 1.0).abs() < 1e-6);
}

#[test]
fn score_csv_without_timing() {
    let out = freqvqa(&[
        "score",
        "--format",
        "csv",
        "--no-timing",
        "--input",
        &fixture("clip.y4m"),
        "--features",
        &fixture("features.fgt"),
        "--model",
        &fixture("model.fgb"),
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "score,q_art,q_str,q_raw,alpha,beta,gamma");
    assert_eq!(lines[1].split(',').count(), 7);
}

#[test]
fn score_rejects_short_features() {
    let dir = tempfile::tempdir().unwrap();
    let feats = dir.path().join("t8.fgt");
    write_tensor_file(&synthetic_features(8, 16, 1), &feats).unwrap();
    let out = freqvqa(&[
        "score",
        "--frames",
        "16",
        "--input",
        &fixture("clip.y4m"),
        "--features",
        feats.to_str().unwrap(),
        "--model",
        &fixture("model.fgb"),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("[8, 16, 14, 14]") && err.contains("[16, 16, 14, 14]"), "{err}");
}

#[test]
fn score_missing_model_is_io_error() {
    let out = freqvqa(&[
        "score",
        "--input",
        &fixture("clip.y4m"),
        "--features",
        &fixture("features.fgt"),
        "--model",
        "/nonexistent/model.fgb",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("model.fgb"));
}

#[test]
fn score_corrupt_model_is_format_error() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("m.fgb");
    fs::write(&model, b"FGB1\x01\x00\x00\x00\x05").unwrap();
    let out = freqvqa(&[
        "score",
        "--input",
        &fixture("clip.y4m"),
        "--features",
        &fixture("features.fgt"),
        "--model",
        model.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_window_is_rejected() {
    let out = freqvqa(&["weight-maps", "--input", "x.y4m", "--out-dir", "o", "--window", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn eval_examples() {
    let dir = tempfile::tempdir().unwrap();
    let rows = [("a", 1.0), ("b", 2.0), ("c", 3.0), ("d", 4.0)];
    let pred = write_csv(dir.path(), "p.csv", &rows);
    let gt = write_csv(dir.path(), "g.csv", &[("a", 1.0), ("b", 2.0), ("c", 4.0), ("d", 3.0)]);
    let out = freqvqa(&["eval", pred.to_str().unwrap(), pred.to_str().unwrap()]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!((v["srcc"].as_f64(), v["plcc"].as_f64(), v["n"].as_u64()), (Some(1.0), Some(1.0), Some(4)));

    let out = freqvqa(&["eval", pred.to_str().unwrap(), gt.to_str().unwrap()]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((v["srcc"].as_f64().unwrap() - 0.8).abs() < 1e-12);

    let one = write_csv(dir.path(), "one.csv", &[("a", 1.0)]);
    let out = freqvqa(&["eval", one.to_str().unwrap(), one.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn eval_lists_unmatched_ids() {
    let dir = tempfile::tempdir().unwrap();
    let many: Vec<(String, f64)> = (0..15).map(|i| (format!("v{i}"), i as f64)).collect();
    let refs: Vec<(&str, f64)> = many.iter().map(|(s, v)| (s.as_str(), *v)).collect();
    let pred = write_csv(dir.path(), "p.csv", &refs);
    let gt = write_csv(dir.path(), "g.csv", &[("v0", 1.0), ("v1", 2.0)]);
    let out = freqvqa(&["eval", pred.to_str().unwrap(), gt.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("13 ids"), "{err}");
    assert!(err.contains("v11") && !err.contains("v14"), "{err}");
}

#[test]
fn bench_table() {
    let dir = tempfile::tempdir().unwrap();
    let small = write_clip(dir.path(), "s.y4m", 32, 32, 8);
    let large = write_clip(dir.path(), "l.y4m", 64, 48, 8);
    let feats = dir.path().join("f.fgt");
    write_tensor_file(&synthetic_features(4, 8, 2), &feats).unwrap();
    let model = dir.path().join("m.fgb");
    ModelBundle::random(1, 8, 16, 4).save(&model).unwrap();
    let base = ["bench", "--features", feats.to_str().unwrap(), "--model", model.to_str().unwrap(), "--frames", "4"];

    let mut args = base.to_vec();
    args.extend(["--input", &small, "--input", &large, "--runs", "3"]);
    let out = freqvqa(&args);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].contains("mean_ms") && lines[0].contains("stddev_ms"));
    assert!(lines[2].contains(",64,48,8,3,"));

    let mut args = base.to_vec();
    args.extend(["--input", &small, "--runs", "1"]);
    let text = stdout(&freqvqa(&args));
    assert!(text.lines().nth(1).unwrap().ends_with(",0.000"));

    let missing = dir.path().join("gone.y4m");
    let mut args = base.to_vec();
    args.extend(["--input", &small, "--input", missing.to_str().unwrap()]);
    let out = freqvqa(&args);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("gone.y4m"));
    assert!(stdout(&out).is_empty());
}

#[test]
fn inspect_model_lists_entries() {
    let out = freqvqa(&["inspect-model", "--model", &fixture("model.fgb")]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let entries = v.as_array().unwrap();
    assert_eq!(entries.len(), 23);
    let meta = entries.iter().find(|e| e["name"] == "meta").unwrap();
    assert_eq!(meta["shape"], serde_json::json!([3]));
    let w1 = entries.iter().find(|e| e["name"] == "head_raw.w1").unwrap();
    assert_eq!(w1["shape"], serde_json::json!([64, 16]));
}
