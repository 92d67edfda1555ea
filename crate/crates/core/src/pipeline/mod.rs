//! End-to-end runs: load → (derive A/W) → compress → transform → SGN →
//! embed → fuse → PCA → classify, with every stage artifact written under
//! the output directory and a manifest of content digests.

pub mod plot;

use std::path::{Path, PathBuf};

use log::info;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::classify::{self, EvalReport, ForestParams};
use crate::error::{Error, Result};
use crate::features::{self, ColumnMeta, FeatureMatrix, PcaModel, WlConfig};
use crate::graph::{sgn1, Graph};
use crate::io::{self, graph_file_name, safe_id, LabelRow};
use crate::par::{self, Execution};
use crate::signals::{peak_indices, MultiChannelSignal, TimeSeries};
use crate::visibility::{self, VgParams};

pub use plot::SnrAccuracy;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DatasetFormat {
    #[default]
    Jsonl,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetSpec {
    pub path: PathBuf,
    #[serde(default)]
    pub format: DatasetFormat,
}

/// A channel name, optionally with its own CLPVG curvature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ChannelSpec {
    Name(String),
    Full { name: String, alpha: Option<f64> },
}

impl ChannelSpec {
    pub fn name(&self) -> &str {
        match self {
            ChannelSpec::Name(n) | ChannelSpec::Full { name: n, .. } => n,
        }
    }

    pub fn alpha(&self) -> Option<f64> {
        match self {
            ChannelSpec::Name(_) => None,
            ChannelSpec::Full { alpha, .. } => *alpha,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PcaSpec {
    pub enabled: bool,
    /// Fixed component count; overrides `variance`.
    pub theta: Option<usize>,
    pub variance: f64,
}

impl Default for PcaSpec {
    fn default() -> Self {
        PcaSpec {
            enabled: true,
            theta: None,
            variance: 0.95,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase", deny_unknown_fields)]
pub enum Evaluation {
    Split { ratio: f64 },
    Cv { k: usize },
}

impl Default for Evaluation {
    fn default() -> Self {
        Evaluation::Split { ratio: 0.8 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub dataset: DatasetSpec,
    pub channels: Vec<ChannelSpec>,
    pub method: VgParams,
    /// Peak-detection windows. Several windows are fused side by side; an
    /// empty list skips compression.
    #[serde(default)]
    pub windows: Vec<usize>,
    #[serde(default)]
    pub sgn: bool,
    #[serde(default)]
    pub wl: WlConfig,
    #[serde(default)]
    pub pca: PcaSpec,
    #[serde(default)]
    pub classifier: ForestParams,
    #[serde(default)]
    pub evaluation: Evaluation,
    /// Seeds the train/test split or the fold assignment.
    #[serde(default)]
    pub seed: u64,
    pub out_dir: PathBuf,
}

impl PipelineConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&io::read_to_string(path)?)
    }

    /// Checks parameters and that the dataset exists. Channel names are
    /// checked against the data when it is loaded.
    pub fn validate(&self) -> Result<()> {
        if !self.dataset.path.is_file() {
            return Err(Error::invalid(format!(
                "dataset {} does not exist",
                self.dataset.path.display()
            )));
        }
        if self.channels.is_empty() {
            return Err(Error::invalid("no channels selected"));
        }
        for ch in &self.channels {
            self.method.with_alpha(ch.alpha().unwrap_or(self.method.alpha)).validate()?;
        }
        if self.windows.contains(&0) {
            return Err(Error::invalid("peak window must be >= 1"));
        }
        self.wl.validate()?;
        self.classifier.validate()?;
        if self.pca.theta.is_none() && !(self.pca.variance > 0.0 && self.pca.variance <= 1.0) {
            return Err(Error::invalid("PCA variance target must be in (0, 1]"));
        }
        match self.evaluation {
            Evaluation::Split { ratio } if !(ratio > 0.0 && ratio < 1.0) => {
                Err(Error::invalid(format!("split ratio {ratio} outside (0, 1)")))
            }
            Evaluation::Cv { k } if k < 2 => Err(Error::invalid("k-fold needs k >= 2")),
            _ => Ok(()),
        }
    }

    /// Width of the fused vector before PCA.
    pub fn fused_width(&self) -> usize {
        let orders = if self.sgn { 2 } else { 1 };
        orders * self.channels.len() * self.wl.dim * self.windows.len().max(1)
    }

    fn digest(&self) -> Result<String> {
        Ok(sha256_hex(serde_json::to_string(self)?.as_bytes()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub evaluation: EvalReport,
    pub per_snr: Vec<SnrAccuracy>,
    pub n_signals: usize,
    pub fused_width: usize,
    pub theta: Option<usize>,
    pub explained_variance_ratio: Option<f64>,
    /// Channels whose compression kept fewer than two samples; their
    /// features are all zero.
    pub degenerate_channels: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileEntry {
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub config_sha256: String,
    pub split_seed: u64,
    pub forest_seed: u64,
    pub files: Vec<FileEntry>,
}

#[derive(Debug, Clone)]
pub struct PipelineOutcome {
    pub report: PipelineReport,
    pub manifest: Manifest,
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

struct Artifacts<'a> {
    root: &'a Path,
}

impl Artifacts<'_> {
    fn write(&self, rel: &str, bytes: &[u8]) -> Result<FileEntry> {
        io::write_bytes(&self.root.join(rel), bytes)?;
        Ok(FileEntry {
            path: rel.to_string(),
            sha256: sha256_hex(bytes),
            bytes: bytes.len() as u64,
        })
    }
}

struct SignalResult {
    row: Vec<f64>,
    files: Vec<FileEntry>,
    degenerate: usize,
    compressed: Option<MultiChannelSignal>,
}

fn process_signal(
    signal: &MultiChannelSignal,
    cfg: &PipelineConfig,
    window: Option<usize>,
    out: &Artifacts<'_>,
) -> Result<SignalResult> {
    let id = signal.id.as_str();
    let dir = format!("{}/{}", graph_dir(window), safe_id(id));
    let mut order0 = Vec::with_capacity(cfg.channels.len());
    let mut order1 = Vec::with_capacity(cfg.channels.len());
    let mut files = Vec::new();
    let mut degenerate = 0;
    let mut compressed = signal.clone();
    compressed.channels.clear();

    for spec in &cfg.channels {
        let name = spec.name();
        let raw = signal.channel(name).map_err(|e| Error::stage("load", id, e))?;
        let series: Option<TimeSeries> = match window {
            None => Some(raw.clone()),
            Some(w) => {
                if w >= raw.len() {
                    return Err(Error::stage(
                        "compress",
                        id,
                        Error::invalid(format!("window {w} >= length {}", raw.len())),
                    ));
                }
                let keep = peak_indices(raw.values(), w);
                let kept = if keep.is_empty() {
                    None
                } else {
                    let values = keep.iter().map(|&i| raw.values()[i]).collect();
                    let times = keep.iter().map(|&i| raw.time(i)).collect();
                    Some(
                        TimeSeries::with_times(values, times, raw.dt())
                            .map_err(|e| Error::stage("compress", id, e))?,
                    )
                };
                if let Some(k) = &kept {
                    compressed.channels.insert(name.to_string(), k.clone());
                }
                kept
            }
        };
        let series = series.filter(|s| s.len() >= 2);
        let Some(series) = series else {
            degenerate += 1;
            order0.push(vec![0.0; cfg.wl.dim]);
            if cfg.sgn {
                order1.push(vec![0.0; cfg.wl.dim]);
            }
            continue;
        };
        let params = cfg.method.with_alpha(spec.alpha().unwrap_or(cfg.method.alpha));
        let g: Graph = visibility::build(&series, &params, Execution::Sequential)
            .map_err(|e| Error::stage("transform", id, e))?;
        files.push(out.write(&format!("{dir}/{}", graph_file_name(name, 0)), io::format_edgelist(&g).as_bytes())?);
        order0.push(features::wl_embed(&g, &cfg.wl).map_err(|e| Error::stage("embed", id, e))?);
        if cfg.sgn {
            let s = sgn1(&g).map_err(|e| Error::stage("sgn", id, e))?;
            files.push(out.write(
                &format!("{dir}/{}", graph_file_name(name, 1)),
                io::format_edgelist(&s).as_bytes(),
            )?);
            order1.push(features::wl_embed(&s, &cfg.wl).map_err(|e| Error::stage("embed", id, e))?);
        }
    }
    order0.extend(order1);
    let row = features::fuse(&order0).map_err(|e| Error::stage("fuse", id, e))?;
    Ok(SignalResult {
        row,
        files,
        degenerate,
        compressed: window.map(|_| compressed),
    })
}

fn graph_dir(window: Option<usize>) -> String {
    match window {
        Some(w) => format!("graphs/w{w}"),
        None => "graphs/raw".to_string(),
    }
}

fn window_columns(cfg: &PipelineConfig, window: Option<usize>) -> Vec<ColumnMeta> {
    let mut cols = Vec::new();
    let orders: &[u8] = if cfg.sgn { &[0, 1] } else { &[0] };
    for &order in orders {
        for ch in &cfg.channels {
            cols.extend(ColumnMeta::block(ch.name(), order, window, cfg.wl.dim));
        }
    }
    cols
}

fn needs_amplitude_phase(cfg: &PipelineConfig) -> bool {
    cfg.channels.iter().any(|c| matches!(c.name(), "A" | "W"))
}

/// Runs every stage and writes the artifacts under `cfg.out_dir`.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<PipelineOutcome> {
    cfg.validate()?;
    let out = Artifacts { root: &cfg.out_dir };
    let mut files: Vec<FileEntry> = Vec::new();

    info!("load: {}", cfg.dataset.path.display());
    let mut signals = io::read_signals(&cfg.dataset.path)?;
    if signals.is_empty() {
        return Err(Error::invalid("dataset is empty"));
    }
    if needs_amplitude_phase(cfg) {
        signals = signals
            .into_iter()
            .map(|s| {
                let id = s.id.clone();
                s.with_amplitude_phase().map_err(|e| Error::stage("derive", id, e))
            })
            .collect::<Result<_>>()?;
    }
    for s in &signals {
        for ch in &cfg.channels {
            s.channel(ch.name()).map_err(|e| Error::stage("load", &s.id, e))?;
        }
    }
    let labels: Vec<String> = signals.iter().map(|s| s.label.clone()).collect();
    let ids: Vec<String> = signals.iter().map(|s| s.id.clone()).collect();
    let snrs: Vec<Option<f64>> = signals.iter().map(|s| s.snr_db).collect();

    let windows: Vec<Option<usize>> = if cfg.windows.is_empty() {
        vec![None]
    } else {
        cfg.windows.iter().copied().map(Some).collect()
    };
    let mut blocks = Vec::with_capacity(windows.len());
    let mut degenerate = 0;
    for &window in &windows {
        info!("compress/transform/embed: window {window:?}, {} signals", signals.len());
        let results = par::try_map_slice(&signals, Execution::Parallel, |s| {
            process_signal(s, cfg, window, &out)
        })?;
        let mut rows = Vec::with_capacity(results.len());
        let mut compressed = Vec::new();
        for r in results {
            rows.push(r.row);
            files.extend(r.files);
            degenerate += r.degenerate;
            compressed.extend(r.compressed);
        }
        let label_rows: Vec<(String, LabelRow)> = signals
            .iter()
            .map(|s| {
                let row = LabelRow {
                    label: s.label.clone(),
                    snr_db: s.snr_db,
                };
                (s.id.clone(), row)
            })
            .collect();
        let labels_rel = format!("{}/{}", graph_dir(window), io::LABELS_FILE);
        io::write_labels(&cfg.out_dir.join(&labels_rel), &label_rows)?;
        files.push(digest_file(&cfg.out_dir, &labels_rel)?);
        if let Some(w) = window {
            let mut text = String::new();
            for s in &compressed {
                text += &serde_json::to_string(&io::signal_to_record(s))?;
                text.push('\n');
            }
            files.push(out.write(&format!("compressed_w{w}.jsonl"), text.as_bytes())?);
        }
        blocks.push(FeatureMatrix::with_meta(
            rows,
            labels.clone(),
            ids.clone(),
            snrs.clone(),
            window_columns(cfg, window),
        )?);
    }

    let fused = FeatureMatrix::hstack(&blocks)?;
    let fused_width = fused.n_cols();
    files.push(write_matrix(&out, "features.csv", &fused)?);

    let (matrix, pca_model): (FeatureMatrix, Option<PcaModel>) = if cfg.pca.enabled {
        info!("pca: {} x {}", fused.n_rows(), fused.n_cols());
        let model = match cfg.pca.theta {
            Some(t) => features::pca_fit(&fused, t),
            None => features::pca_fit_variance(&fused, cfg.pca.variance),
        }
        .map_err(|e| Error::stage("pca", "*", e))?;
        let reduced = features::pca_transform(&model, &fused)?;
        files.push(out.write("pca_model.json", serde_json::to_string(&model)?.as_bytes())?);
        files.push(write_matrix(&out, "pca.csv", &reduced)?);
        (reduced, Some(model))
    } else {
        (fused, None)
    };

    info!("classify: {:?}", cfg.evaluation);
    let (evaluation, outcomes) = match cfg.evaluation {
        Evaluation::Split { ratio } => {
            let (train, test) = classify::split_train_test(&matrix, ratio, cfg.seed)
                .map_err(|e| Error::stage("classify", "*", e))?;
            let model = classify::rf_train(&train, &cfg.classifier)
                .map_err(|e| Error::stage("classify", "*", e))?;
            files.push(out.write("model.json", serde_json::to_string(&model)?.as_bytes())?);
            let pred = classify::rf_predict(&model, &test)?;
            let report = classify::evaluate(&test.labels, &pred)?;
            let outcomes: Vec<(Option<f64>, bool)> = test
                .snr_db
                .iter()
                .zip(test.labels.iter().zip(&pred))
                .map(|(&s, (t, p))| (s, t == p))
                .collect();
            (report, outcomes)
        }
        Evaluation::Cv { k } => {
            let (pred, folds) = classify::kfold_predictions(&matrix, k, &cfg.classifier, cfg.seed)
                .map_err(|e| Error::stage("classify", "*", e))?;
            let mut report = classify::evaluate(&matrix.labels, &pred)?;
            report.fold_accuracies = Some(folds);
            let outcomes = matrix
                .snr_db
                .iter()
                .zip(matrix.labels.iter().zip(&pred))
                .map(|(&s, (t, p))| (s, t == p))
                .collect();
            (report, outcomes)
        }
    };
    let per_snr = plot::accuracy_by_snr(outcomes);
    let report = PipelineReport {
        evaluation,
        per_snr,
        n_signals: signals.len(),
        fused_width,
        theta: pca_model.as_ref().map(PcaModel::theta),
        explained_variance_ratio: pca_model.as_ref().map(PcaModel::explained_ratio),
        degenerate_channels: degenerate,
    };
    files.push(out.write("report.json", serde_json::to_string_pretty(&report)?.as_bytes())?);
    files.push(out.write("summary.txt", summary(&report).as_bytes())?);
    files.push(out.write("accuracy_vs_snr.csv", &plot::accuracy_csv(&report.per_snr)?)?);
    files.push(out.write("config.json", serde_json::to_string_pretty(cfg)?.as_bytes())?);

    files.sort_by(|a, b| a.path.cmp(&b.path));
    let manifest = Manifest {
        config_sha256: cfg.digest()?,
        split_seed: cfg.seed,
        forest_seed: cfg.classifier.seed,
        files,
    };
    out.write("manifest.json", serde_json::to_string_pretty(&manifest)?.as_bytes())?;
    info!("accuracy {:.4}", report.evaluation.accuracy);
    Ok(PipelineOutcome { report, manifest })
}

fn write_matrix(out: &Artifacts<'_>, rel: &str, x: &FeatureMatrix) -> Result<FileEntry> {
    io::write_features(&out.root.join(rel), x)?;
    digest_file(out.root, rel)
}

fn digest_file(root: &Path, rel: &str) -> Result<FileEntry> {
    let path = root.join(rel);
    let bytes = std::fs::read(&path).map_err(|e| Error::io(&path, e))?;
    Ok(FileEntry {
        path: rel.to_string(),
        sha256: sha256_hex(&bytes),
        bytes: bytes.len() as u64,
    })
}

pub fn summary(report: &PipelineReport) -> String {
    let mut s = report.evaluation.summary();
    s += &format!(
        "signals {}  fused width {}  theta {}  degenerate channels {}\n",
        report.n_signals,
        report.fused_width,
        report.theta.map_or("-".to_string(), |t| t.to_string()),
        report.degenerate_channels
    );
    if !report.per_snr.is_empty() {
        s += "snr_db  n  accuracy\n";
        for r in &report.per_snr {
            let snr = r.snr_db.map_or("clean".to_string(), |v| v.to_string());
            s += &format!("{snr:>6}  {:>4}  {:.4}\n", r.n, r.accuracy);
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config_json(extra: &str) -> String {
        format!(
            r#"{{"dataset": {{"path": "x.jsonl"}}, "channels": ["I", {{"name": "Q", "alpha": 5}}],
                "method": {{"method": "clpvg", "m": 1, "alpha": 10}}, "out_dir": "out"{extra}}}"#
        )
    }

    #[test]
    fn config_defaults() {
        let c = PipelineConfig::from_json(&config_json("")).unwrap();
        assert_eq!(c.channels[1].alpha(), Some(5.0));
        assert_eq!(c.channels[0].alpha(), None);
        assert_eq!(c.wl, WlConfig { h: 3, dim: 128 });
        assert_eq!(c.evaluation, Evaluation::Split { ratio: 0.8 });
        assert!(c.pca.enabled && c.pca.variance == 0.95);
        assert_eq!(c.classifier.n_trees, 200);
        assert_eq!(c.fused_width(), 2 * 128);
    }

    #[test]
    fn fused_width_counts_windows_orders_channels() {
        let mut c = PipelineConfig::from_json(&config_json("")).unwrap();
        c.channels = ["I", "Q", "A", "W"].iter().map(|n| ChannelSpec::Name(n.to_string())).collect();
        c.windows = vec![3, 4];
        c.sgn = true;
        assert_eq!(c.fused_width(), 2 * 4 * 128 * 2);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(PipelineConfig::from_json(&config_json(r#", "bogus": 1"#)).is_err());
        let c = PipelineConfig::from_json(&config_json(r#", "evaluation": {"mode": "cv", "k": 10}"#)).unwrap();
        assert_eq!(c.evaluation, Evaluation::Cv { k: 10 });
    }

}
