use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use indexmap::IndexMap;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vistra::classify::{self, FeatureFrac, ForestParams};
use vistra::features::{self, ColumnMeta, FeatureMatrix, WlConfig};
use vistra::graph::{sgn1, Graph};
use vistra::io::{self, graph_file_name, safe_id, LabelRow};
use vistra::pipeline::{self, plot, PipelineConfig};
use vistra::signals::{add_awgn, peak_compress, PeakDetectParams, SignalKind};
use vistra::synth;
use vistra::visibility::{self, Method, VgParams};
use vistra::{Error, Execution, MultiChannelSignal, Result};

#[derive(Parser)]
#[command(name = "vistra", version, about = "Visibility-graph features for time-series classification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate labeled signals as JSONL.
    Generate(GenerateArgs),
    /// Check a JSONL signal file and report malformed records.
    ConvertValidate {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Peak-compress every channel of every signal.
    Compress {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        w: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build one visibility graph per signal and channel.
    Transform(TransformArgs),
    /// Write the line graph next to every graph in a graph directory.
    Sgn {
        #[arg(long)]
        in_dir: PathBuf,
        /// Defaults to the input directory.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Also write `<channel>.sgn.map` listing the source edge of each node.
        #[arg(long)]
        map: bool,
    },
    /// Node/edge counts and clustering for every graph in a directory.
    Metrics {
        #[arg(long)]
        in_dir: PathBuf,
        #[arg(long, default_value = "clpvg")]
        method: String,
        #[arg(long)]
        out: PathBuf,
        /// One degree-histogram JSON per graph.
        #[arg(long)]
        hist_dir: Option<PathBuf>,
    },
    /// Weisfeiler-Lehman embedding of a graph directory into a feature CSV.
    Embed(EmbedArgs),
    /// Reduce a feature CSV with PCA.
    Pca {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, conflicts_with = "variance")]
        theta: Option<usize>,
        #[arg(long, default_value_t = 0.95)]
        variance: f64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        model: Option<PathBuf>,
    },
    /// Train and evaluate a random forest on a feature CSV.
    Classify(ClassifyArgs),
    /// Run every stage from a JSON configuration.
    Pipeline(PipelineArgs),
    /// Plotting-ready tables.
    PlotData {
        /// Pipeline `report.json`; writes accuracy by SNR.
        #[arg(long, conflicts_with = "edges", required_unless_present = "edges")]
        report: Option<PathBuf>,
        /// Edge list; writes its degree histogram.
        #[arg(long)]
        edges: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct GenerateArgs {
    /// sin, lorenz, rossler or radio.
    #[arg(long)]
    kind: String,
    #[arg(long, default_value_t = 1000)]
    n: usize,
    #[arg(long)]
    dt: Option<f64>,
    /// Initial state `x,y,z` (for sin, the start time). Random per signal
    /// when omitted.
    #[arg(long)]
    init: Option<String>,
    /// Comma-separated SNR levels in dB, cycled over signals; `inf` is clean.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    snr_db: Vec<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Signals to generate; for radio, signals per class and SNR.
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct TransformArgs {
    #[arg(long, default_value = "clpvg")]
    method: Method,
    #[arg(long, default_value_t = 0)]
    m: usize,
    #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
    alpha: f64,
    /// Per-channel curvature, e.g. `A=5`; repeatable.
    #[arg(long = "alpha-channel", value_parser = parse_channel_alpha)]
    alpha_channel: Vec<(String, f64)>,
    #[arg(long = "in")]
    input: PathBuf,
    /// Channels to transform (repeatable or comma-separated); all when omitted.
    #[arg(long, value_delimiter = ',')]
    channel: Vec<String>,
    /// Add amplitude `A` and phase `W` derived from `I` and `Q`.
    #[arg(long)]
    derive: bool,
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args)]
struct EmbedArgs {
    #[arg(long, default_value_t = 3)]
    h: usize,
    #[arg(long, default_value_t = 128)]
    dim: usize,
    /// Include `.sgn.edges` graphs as a second block.
    #[arg(long)]
    with_sgn: bool,
    #[arg(long)]
    in_dir: PathBuf,
    /// Label source; defaults to `<in-dir>/labels.csv`.
    #[arg(long)]
    labels_from: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// `cv,k=10` or `split,ratio=0.8`.
    #[arg(long, default_value = "cv,k=10", value_parser = parse_mode)]
    mode: pipeline::Evaluation,
    #[arg(long, default_value_t = 200)]
    trees: usize,
    #[arg(long)]
    max_depth: Option<usize>,
    #[arg(long, default_value_t = 1)]
    min_leaf: usize,
    /// `sqrt` or a fraction in (0, 1].
    #[arg(long, default_value = "sqrt", value_parser = parse_frac)]
    feature_frac: FeatureFrac,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// JSON report; a `.txt` summary is written beside it.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct PipelineArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long)]
    method: Option<Method>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    #[arg(long, overrides_with = "no_sgn")]
    sgn: bool,
    #[arg(long)]
    no_sgn: bool,
    #[arg(long, value_delimiter = ',')]
    windows: Option<Vec<usize>>,
}

fn parse_channel_alpha(s: &str) -> std::result::Result<(String, f64), String> {
    let (name, a) = s.split_once('=').ok_or("expected CHANNEL=ALPHA")?;
    let a: f64 = a.trim().parse().map_err(|_| format!("bad alpha `{a}`"))?;
    Ok((name.trim().to_string(), a))
}

fn parse_mode(s: &str) -> std::result::Result<pipeline::Evaluation, String> {
    let mut parts = s.split(',').map(str::trim);
    let kind = parts.next().unwrap_or_default();
    let mut kv = BTreeMap::new();
    for p in parts {
        let (k, v) = p.split_once('=').ok_or(format!("expected key=value, got `{p}`"))?;
        kv.insert(k.trim(), v.trim());
    }
    match kind {
        "cv" => {
            let k = kv.get("k").copied().unwrap_or("10");
            let k = k.parse().map_err(|_| format!("bad k `{k}`"))?;
            Ok(pipeline::Evaluation::Cv { k })
        }
        "split" => {
            let r = kv.get("ratio").copied().unwrap_or("0.8");
            let ratio = r.parse().map_err(|_| format!("bad ratio `{r}`"))?;
            Ok(pipeline::Evaluation::Split { ratio })
        }
        other => Err(format!("unknown mode `{other}` (cv or split)")),
    }
}

fn parse_frac(s: &str) -> std::result::Result<FeatureFrac, String> {
    if s == "sqrt" {
        return Ok(FeatureFrac::Sqrt);
    }
    s.parse()
        .map(FeatureFrac::Fraction)
        .map_err(|_| format!("expected `sqrt` or a number, got `{s}`"))
}

fn parse_snrs(raw: &[String]) -> Result<Vec<f64>> {
    raw.iter()
        .map(|s| match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "+inf" | "clean" => Ok(f64::INFINITY),
            t => t.parse().map_err(|_| Error::invalid(format!("bad SNR `{s}`"))),
        })
        .collect()
}

fn parse_init(s: &str) -> Result<[f64; 3]> {
    let v: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::invalid(format!("bad --init `{s}`")))?;
    match v.as_slice() {
        [t] => Ok([*t, 0.0, 0.0]),
        [x, y, z] => Ok([*x, *y, *z]),
        _ => Err(Error::invalid("--init takes one value (sin) or three (x,y,z)")),
    }
}

fn generate(a: &GenerateArgs) -> Result<()> {
    if a.count == 0 {
        return Err(Error::invalid("--count must be >= 1"));
    }
    let mut snrs = parse_snrs(&a.snr_db)?;
    let signals = if a.kind.eq_ignore_ascii_case("radio") {
        if snrs.is_empty() {
            snrs = synth::radio_snr_grid();
        }
        synth::radio_dataset(a.count, &snrs, a.seed)?
    } else {
        let kind: SignalKind = a.kind.parse()?;
        if snrs.is_empty() {
            snrs.push(f64::INFINITY);
        }
        let dt = a.dt.unwrap_or(kind.default_dt());
        let fixed = a.init.as_deref().map(parse_init).transpose()?;
        let mut out = Vec::with_capacity(a.count);
        for i in 0..a.count {
            let mut rng = ChaCha8Rng::seed_from_u64(synth::sub_seed(a.seed, i as u64));
            let init = fixed.unwrap_or_else(|| kind.random_init(&mut rng));
            let snr = snrs[i % snrs.len()];
            let series = add_awgn(&kind.generate(a.n, dt, init)?, snr, rng.random())?;
            let mut channels = IndexMap::new();
            channels.insert("x".to_string(), series);
            out.push(MultiChannelSignal::new(
                format!("{kind}-{i:06}"),
                kind.name(),
                snr.is_finite().then_some(snr),
                channels,
            )?);
        }
        out
    };
    io::write_signals(&a.out, &signals)?;
    eprintln!("wrote {} signals to {}", signals.len(), a.out.display());
    Ok(())
}

fn convert_validate(input: &Path) -> Result<()> {
    let (ok, errors) = io::validate_signals(input)?;
    for (line, msg) in &errors {
        eprintln!("{}:{line}: {msg}", input.display());
    }
    println!("{ok} valid, {} invalid", errors.len());
    if errors.is_empty() {
        Ok(())
    } else {
        Err(Error::invalid(format!("{} invalid records", errors.len())))
    }
}

fn compress(input: &Path, w: usize, out: &Path) -> Result<()> {
    let params = PeakDetectParams::new(w)?;
    let signals = io::read_signals(input)?;
    let compressed = signals
        .into_iter()
        .map(|mut s| {
            for series in s.channels.values_mut() {
                *series = peak_compress(series, params).map_err(|e| Error::stage("compress", &s.id, e))?;
            }
            Ok(s)
        })
        .collect::<Result<Vec<_>>>()?;
    io::write_signals(out, &compressed)
}

fn transform(a: &TransformArgs) -> Result<()> {
    let base = VgParams {
        method: a.method,
        m: a.m,
        alpha: a.alpha,
    };
    let per_channel: BTreeMap<&str, f64> = a.alpha_channel.iter().map(|(k, v)| (k.as_str(), *v)).collect();
    let mut signals = io::read_signals(&a.input)?;
    if a.derive {
        signals = signals
            .into_iter()
            .map(|s| {
                let id = s.id.clone();
                s.with_amplitude_phase().map_err(|e| Error::stage("derive", id, e))
            })
            .collect::<Result<_>>()?;
    }
    let mut labels = Vec::with_capacity(signals.len());
    let mut count = 0;
    for s in &signals {
        let names: Vec<&str> = if a.channel.is_empty() {
            s.channels.keys().map(String::as_str).collect()
        } else {
            a.channel.iter().map(String::as_str).collect()
        };
        let graphs = vistra::par::try_map_slice(&names, Execution::Parallel, |&name| {
            let series = s.channel(name).map_err(|e| Error::stage("load", &s.id, e))?;
            let params = base.with_alpha(per_channel.get(name).copied().unwrap_or(a.alpha));
            visibility::build(series, &params, Execution::Sequential).map_err(|e| Error::stage("transform", &s.id, e))
        })?;
        for (name, g) in names.iter().zip(&graphs) {
            io::write_edgelist(g, &a.out_dir.join(safe_id(&s.id)).join(graph_file_name(name, 0)))?;
            count += 1;
        }
        let row = LabelRow {
            label: s.label.clone(),
            snr_db: s.snr_db,
        };
        labels.push((s.id.clone(), row));
    }
    io::write_labels(&a.out_dir.join(io::LABELS_FILE), &labels)?;
    eprintln!("wrote {count} graphs to {}", a.out_dir.display());
    Ok(())
}

fn sgn(in_dir: &Path, out_dir: Option<&Path>, map: bool) -> Result<()> {
    let out_dir = out_dir.unwrap_or(in_dir);
    let entries: Vec<_> = io::list_graphs(in_dir)?.into_iter().filter(|e| e.order == 0).collect();
    let results = vistra::par::try_map_slice(&entries, Execution::Parallel, |e| {
        let g = io::read_edgelist(&e.path)?;
        let l = sgn1(&g).map_err(|err| Error::stage("sgn", &e.signal, err))?;
        Ok::<_, Error>((g, l))
    })?;
    for (e, (g, l)) in entries.iter().zip(&results) {
        let dir = out_dir.join(&e.signal);
        io::write_edgelist(l, &dir.join(graph_file_name(&e.channel, 1)))?;
        if map {
            let mut text = String::new();
            for (k, (u, v)) in g.edges().iter().enumerate() {
                text += &format!("{k} {u} {v}\n");
            }
            io::write_bytes(&dir.join(format!("{}.sgn.map", safe_id(&e.channel))), text.as_bytes())?;
        }
    }
    let labels = in_dir.join(io::LABELS_FILE);
    if out_dir != in_dir && labels.is_file() {
        std::fs::copy(&labels, out_dir.join(io::LABELS_FILE)).map_err(|e| Error::io(&labels, e))?;
    }
    eprintln!("wrote {} line graphs", results.len());
    Ok(())
}

fn metrics(in_dir: &Path, method: &str, out: &Path, hist_dir: Option<&Path>) -> Result<()> {
    let mut rows = Vec::new();
    for e in io::list_graphs(in_dir)? {
        let g = io::read_edgelist(&e.path)?;
        let channel = if e.order == 0 {
            e.channel.clone()
        } else {
            format!("{}.sgn", e.channel)
        };
        rows.push(plot::GraphMetrics::of(&g, &e.signal, &channel, method));
        if let Some(dir) = hist_dir {
            let path = dir.join(&e.signal).join(format!("{channel}.degrees.json"));
            io::write_bytes(&path, plot::degree_histogram_json(&g)?.as_bytes())?;
        }
    }
    plot::write_metrics(out, &rows)
}

fn embed(a: &EmbedArgs) -> Result<()> {
    let cfg = WlConfig { h: a.h, dim: a.dim };
    cfg.validate()?;
    let labels_path = a.labels_from.clone().unwrap_or_else(|| a.in_dir.join(io::LABELS_FILE));
    let labels = if labels_path.is_file() {
        if labels_path.extension().is_some_and(|x| x == "jsonl") {
            io::read_signals(&labels_path)?
                .into_iter()
                .map(|s| {
                    let row = LabelRow {
                        label: s.label,
                        snr_db: s.snr_db,
                    };
                    (safe_id(&s.id), row)
                })
                .collect()
        } else {
            io::read_labels(&labels_path)?
        }
    } else if a.labels_from.is_some() {
        return Err(Error::invalid(format!("label file {} not found", labels_path.display())));
    } else {
        BTreeMap::new()
    };

    let entries: Vec<_> = io::list_graphs(&a.in_dir)?
        .into_iter()
        .filter(|e| a.with_sgn || e.order == 0)
        .collect();
    let mut by_signal: BTreeMap<String, Vec<_>> = BTreeMap::new();
    for e in entries {
        by_signal.entry(e.signal.clone()).or_default().push(e);
    }
    let Some(first) = by_signal.values().next() else {
        return Err(Error::invalid(format!("no graphs under {}", a.in_dir.display())));
    };
    let layout: Vec<(String, u8)> = first.iter().map(|e| (e.channel.clone(), e.order)).collect();
    let columns: Vec<ColumnMeta> = layout
        .iter()
        .flat_map(|(ch, order)| ColumnMeta::block(ch, *order, None, cfg.dim))
        .collect();

    let signals: Vec<(String, Vec<_>)> = by_signal.into_iter().collect();
    let rows = vistra::par::try_map_slice(&signals, Execution::Parallel, |(id, graphs)| {
        let got: Vec<(String, u8)> = graphs.iter().map(|e| (e.channel.clone(), e.order)).collect();
        if got != layout {
            return Err(Error::stage("embed", id, Error::invalid("graph files differ from the first signal")));
        }
        let parts = graphs
            .iter()
            .map(|e| {
                let g: Graph = io::read_edgelist(&e.path)?;
                features::wl_embed(&g, &cfg)
            })
            .collect::<Result<Vec<_>>>()
            .map_err(|e| Error::stage("embed", id, e))?;
        features::fuse(&parts)
    })?;
    let ids: Vec<String> = signals.iter().map(|(id, _)| id.clone()).collect();
    let meta: Vec<LabelRow> = ids
        .iter()
        .map(|id| {
            labels.get(id).cloned().unwrap_or(LabelRow {
                label: String::new(),
                snr_db: None,
            })
        })
        .collect();
    let x = FeatureMatrix::with_meta(
        rows,
        meta.iter().map(|r| r.label.clone()).collect(),
        ids,
        meta.iter().map(|r| r.snr_db).collect(),
        columns,
    )?;
    io::write_features(&a.out, &x)?;
    eprintln!("embedded {} signals into {} columns", x.n_rows(), x.n_cols());
    Ok(())
}

fn pca(input: &Path, theta: Option<usize>, variance: f64, out: &Path, model: Option<&Path>) -> Result<()> {
    let x = io::read_features(input)?;
    let fitted = match theta {
        Some(t) => features::pca_fit(&x, t)?,
        None => features::pca_fit_variance(&x, variance)?,
    };
    io::write_features(out, &features::pca_transform(&fitted, &x)?)?;
    if let Some(path) = model {
        io::write_bytes(path, serde_json::to_string(&fitted)?.as_bytes())?;
    }
    eprintln!(
        "theta {} retains {:.4} of the variance",
        fitted.theta(),
        fitted.explained_ratio()
    );
    Ok(())
}

fn classify_cmd(a: &ClassifyArgs) -> Result<()> {
    let x = io::read_features(&a.input)?;
    let params = ForestParams {
        n_trees: a.trees,
        max_depth: a.max_depth,
        min_leaf: a.min_leaf,
        feature_frac: a.feature_frac,
        bootstrap: true,
        seed: a.seed,
    };
    params.validate()?;
    let report = match a.mode {
        pipeline::Evaluation::Cv { k } => classify::kfold_cv(&x, k, &params, a.seed)?,
        pipeline::Evaluation::Split { ratio } => classify::holdout_eval(&x, ratio, &params, a.seed)?.0,
    };
    let summary = report.summary();
    print!("{summary}");
    if let Some(path) = &a.report {
        io::write_bytes(path, serde_json::to_string_pretty(&report)?.as_bytes())?;
        io::write_bytes(&path.with_extension("txt"), summary.as_bytes())?;
    }
    Ok(())
}

fn run_pipeline(a: &PipelineArgs) -> Result<()> {
    let mut cfg = PipelineConfig::load(&a.config)?;
    if let Some(seed) = a.seed {
        cfg.seed = seed;
    }
    if let Some(dir) = &a.out_dir {
        cfg.out_dir = dir.clone();
    }
    if let Some(m) = a.method {
        cfg.method.method = m;
    }
    if let Some(m) = a.m {
        cfg.method.m = m;
    }
    if let Some(alpha) = a.alpha {
        cfg.method.alpha = alpha;
    }
    if a.sgn {
        cfg.sgn = true;
    }
    if a.no_sgn {
        cfg.sgn = false;
    }
    if let Some(w) = &a.windows {
        cfg.windows = w.clone();
    }
    let outcome = pipeline::run_pipeline(&cfg)?;
    print!("{}", pipeline::summary(&outcome.report));
    Ok(())
}

fn plot_data(report: Option<&Path>, edges: Option<&Path>, out: &Path) -> Result<()> {
    if let Some(path) = report {
        let r: pipeline::PipelineReport = serde_json::from_str(&io::read_to_string(path)?)?;
        plot::write_accuracy_vs_snr(out, &r.per_snr)
    } else if let Some(path) = edges {
        let g = io::read_edgelist(path)?;
        io::write_degree_histogram(out, &vistra::graph::degree_distribution(&g))
    } else {
        Err(Error::invalid("one of --report or --edges is required"))
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate(a) => generate(&a),
        Command::ConvertValidate { input } => convert_validate(&input),
        Command::Compress { input, w, out } => compress(&input, w, &out),
        Command::Transform(a) => transform(&a),
        Command::Sgn { in_dir, out_dir, map } => sgn(&in_dir, out_dir.as_deref(), map),
        Command::Metrics {
            in_dir,
            method,
            out,
            hist_dir,
        } => metrics(&in_dir, &method, &out, hist_dir.as_deref()),
        Command::Embed(a) => embed(&a),
        Command::Pca {
            input,
            theta,
            variance,
            out,
            model,
        } => pca(&input, theta, variance, &out, model.as_deref()),
        Command::Classify(a) => classify_cmd(&a),
        Command::Pipeline(a) => run_pipeline(&a),
        Command::PlotData { report, edges, out } => plot_data(report.as_deref(), edges.as_deref(), &out),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if let Ok(v) = std::env::var("VISTRA_THREADS") {
        match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => {
                vistra::par::init_global_pool(n);
            }
            _ => {
                eprintln!("error: VISTRA_THREADS must be a positive integer, got `{v}`");
                return ExitCode::from(1);
            }
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
