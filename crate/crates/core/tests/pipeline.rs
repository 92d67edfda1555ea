use std::path::Path;

use serde_json::json;

use vistra::io::write_signals;
use vistra::pipeline::{run_pipeline, PipelineConfig};
use vistra::signals::SignalKind;
use vistra::synth::{artificial_dataset, radio_dataset};

fn config(data: &Path, out: &Path, extra: serde_json::Value) -> PipelineConfig {
    let mut base = json!({
        "dataset": {"path": data},
        "channels": ["x"],
        "method": {"method": "clpvg", "m": 2, "alpha": 10.0},
        "classifier": {"n_trees": 30, "seed": 1},
        "evaluation": {"mode": "cv", "k": 3},
        "seed": 4,
        "out_dir": out
    });
    for (k, v) in extra.as_object().unwrap() {
        base[k] = v.clone();
    }
    serde_json::from_value(base).unwrap()
}

fn artificial(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("art.jsonl");
    let signals = artificial_dataset(&SignalKind::ALL, 12, 80, &[f64::INFINITY, 20.0], 9).unwrap();
    write_signals(&path, &signals).unwrap();
    path
}

#[test]
fn single_channel_run_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let data = artificial(dir.path());
    let out = dir.path().join("run");
    let cfg = config(&data, &out, json!({"pca": {"enabled": false}}));
    let outcome = run_pipeline(&cfg).unwrap();
    assert_eq!(outcome.report.fused_width, 128);
    assert_eq!(outcome.report.n_signals, 36);
    assert_eq!(outcome.report.evaluation.fold_accuracies.as_ref().map(Vec::len), Some(3));
    assert!(outcome.report.evaluation.accuracy > 0.5);
    for f in ["features.csv", "report.json", "summary.txt", "accuracy_vs_snr.csv", "manifest.json", "graphs/raw/labels.csv"] {
        assert!(out.join(f).is_file(), "{f} missing");
    }
    assert!(out.join("graphs/raw/sin-0000/x.edges").is_file());
    let snr_rows: Vec<Option<f64>> = outcome.report.per_snr.iter().map(|r| r.snr_db).collect();
    assert_eq!(snr_rows, [Some(20.0), None]);
    for entry in &outcome.manifest.files {
        let bytes = std::fs::read(out.join(&entry.path)).unwrap();
        assert_eq!(bytes.len() as u64, entry.bytes, "{}", entry.path);
    }
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let data = artificial(dir.path());
    let extra = json!({"windows": [2, 3], "sgn": true, "pca": {"theta": 5}});
    let a = run_pipeline(&config(&data, &dir.path().join("a"), extra.clone())).unwrap();
    let b = run_pipeline(&config(&data, &dir.path().join("b"), extra)).unwrap();
    assert_eq!(a.report.fused_width, 2 * 128 * 2);
    assert_eq!(a.report.theta, Some(5));
    let ra = std::fs::read(dir.path().join("a/report.json")).unwrap();
    let rb = std::fs::read(dir.path().join("b/report.json")).unwrap();
    assert_eq!(ra, rb);
    let digests = |m: &vistra::pipeline::Manifest| -> Vec<(String, String)> {
        m.files
            .iter()
            .filter(|f| f.path != "config.json")
            .map(|f| (f.path.clone(), f.sha256.clone()))
            .collect()
    };
    assert_eq!(digests(&a.manifest), digests(&b.manifest));
}

#[test]
fn radio_channels_with_derived_amplitude_phase() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("radio.jsonl");
    write_signals(&data, &radio_dataset(2, &[10.0], 1).unwrap()).unwrap();
    let cfg = config(
        &data,
        &dir.path().join("run"),
        json!({"channels": ["I", "Q", "A", {"name": "W", "alpha": 5.0}], "windows": [3], "evaluation": {"mode": "split", "ratio": 0.5}}),
    );
    let outcome = run_pipeline(&cfg).unwrap();
    assert_eq!(outcome.report.fused_width, 4 * 128);
    assert!(dir.path().join("run/compressed_w3.jsonl").is_file());
    assert!(dir.path().join("run/model.json").is_file());
}

#[test]
fn stage_errors_name_the_signal() {
    let dir = tempfile::tempdir().unwrap();
    let data = artificial(dir.path());
    let cfg = config(&data, &dir.path().join("run"), json!({"channels": ["nope"]}));
    let err = run_pipeline(&cfg).unwrap_err().to_string();
    assert!(err.contains("load") && err.contains("sin-0000"), "{err}");

    let cfg = config(&data, &dir.path().join("run"), json!({"windows": [200]}));
    let err = run_pipeline(&cfg).unwrap_err().to_string();
    assert!(err.contains("compress"), "{err}");
}

#[test]
fn invalid_configs_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let data = artificial(dir.path());
    let out = dir.path().join("run");
    for extra in [
        json!({"dataset": {"path": dir.path().join("missing.jsonl")}}),
        json!({"channels": []}),
        json!({"windows": [0]}),
        json!({"method": {"method": "clpvg", "m": 1, "alpha": 0.0}}),
        json!({"evaluation": {"mode": "cv", "k": 1}}),
        json!({"evaluation": {"mode": "split", "ratio": 1.0}}),
    ] {
        assert!(run_pipeline(&config(&data, &out, extra.clone())).is_err(), "{extra}");
    }
}
