use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use hyperorder::config::{parse_features, parse_seeds, ExperimentConfig, ReportFormat};
use hyperorder::correlate::{correlate, DiagnosticStat};
use hyperorder::formats::{self, DatasetFormat, DEFAULT_MAX_SIZE};
use hyperorder::pipeline::{self, dataset_projections, dataset_summary, Outcome};
use hyperorder::{report, synthetic};
use hyperorder_core::diagnostics::{diagnose, TripleSampling};
use hyperorder_core::{FeatureKind, Hypergraph, NegativeKind, ProjectionOptions};

#[derive(Parser)]
#[command(name = "hyperorder", version, about = "Hypergraph n-order expansions and hyperedge prediction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct DatasetArgs {
    /// Dataset directory, `<dir>/<name>` prefix, or edge-list file.
    #[arg(long)]
    dataset: PathBuf,
    #[arg(long, value_enum, default_value_t = DatasetFormat::Simplicial)]
    format: DatasetFormat,
    /// Drop hyperedges with more nodes than this.
    #[arg(long, default_value_t = DEFAULT_MAX_SIZE)]
    max_size: usize,
    /// Largest number of active subsets a single projection may hold.
    #[arg(long, default_value_t = ProjectionOptions::default().max_subsets)]
    projection_budget: u64,
}

impl DatasetArgs {
    fn load(&self) -> anyhow::Result<Hypergraph> {
        let parsed = formats::load_dataset(&self.dataset, self.format, self.max_size)
            .with_context(|| format!("loading dataset {}", self.dataset.display()))?;
        Ok(Hypergraph::dedup_and_weight(&parsed.raw)?)
    }

    fn options(&self) -> ProjectionOptions {
        ProjectionOptions { max_subsets: self.projection_budget }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Unique hyperedge count and projected edge counts.
    Stats {
        #[command(flatten)]
        data: DatasetArgs,
        #[arg(long, default_value_t = 4)]
        max_order: usize,
        /// Print JSON instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Write projection cache files for orders 2..=max-order.
    Project {
        #[command(flatten)]
        data: DatasetArgs,
        #[arg(long)]
        max_order: usize,
        #[arg(long)]
        cache_dir: PathBuf,
    },
    /// Run a full experiment.
    Run(RunArgs),
    /// 3-pg density and information statistics of a dataset.
    Diagnose {
        #[command(flatten)]
        data: DatasetArgs,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Keep pairwise bins in node-label order instead of sorting them.
        #[arg(long)]
        unsorted: bool,
    },
    /// Pearson correlation between a gain and a diagnostic across reports.
    Correlate {
        #[arg(long)]
        feature: FeatureKind,
        /// Gain from this order to the next.
        #[arg(long, default_value_t = 2)]
        from_order: usize,
        #[arg(long, value_enum)]
        stat: DiagnosticStat,
        /// JSON reports written by `run`.
        #[arg(required = true)]
        reports: Vec<PathBuf>,
    },
    /// Write the planted-triple benchmark as an edge list.
    Synth {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    /// TOML experiment file; flags below override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    dataset: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<DatasetFormat>,
    #[arg(long)]
    max_size: Option<usize>,
    #[arg(long)]
    target_size: Option<usize>,
    #[arg(long)]
    max_order: Option<usize>,
    /// Comma-separated, e.g. `GM,CN,AA`.
    #[arg(long)]
    features: Option<String>,
    #[arg(long)]
    neg_type: Option<NegativeKind>,
    /// Negatives per positive.
    #[arg(long)]
    ratio: Option<usize>,
    #[arg(long)]
    retain: Option<f64>,
    #[arg(long)]
    train_frac: Option<f64>,
    /// `0,1,2` or `0..10`.
    #[arg(long)]
    seeds: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    out_format: Option<ReportFormat>,
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    #[arg(long)]
    strict_stars: bool,
    /// Number of sampled triples for the diagnostics block; 0 disables it.
    #[arg(long)]
    diagnostic_samples: Option<u64>,
}

impl RunArgs {
    fn config(&self) -> anyhow::Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(p) => ExperimentConfig::load(p)?,
            None => ExperimentConfig::default(),
        };
        macro_rules! set {
            ($($field:ident),*) => {$(if let Some(v) = &self.$field { cfg.$field = v.clone(); })*};
        }
        set!(dataset, format, max_size, target_size, max_order, neg_type, ratio, retain, train_frac, out_format);
        if self.out.is_some() {
            cfg.out = self.out.clone();
        }
        if let Some(f) = &self.features {
            cfg.features = parse_features(f)?;
        }
        if let Some(s) = &self.seeds {
            cfg.seeds = parse_seeds(s)?;
        }
        if self.cache_dir.is_some() {
            cfg.cache_dir = self.cache_dir.clone();
        }
        if self.strict_stars {
            cfg.strict_stars = true;
        }
        match self.diagnostic_samples {
            Some(0) => cfg.diagnostics.enabled = false,
            Some(n) => {
                cfg.diagnostics.enabled = true;
                cfg.diagnostics.num_samples = n;
            }
            None => {}
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn stdout_write(text: &str) -> anyhow::Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

fn execute(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Stats { data, max_order, json } => {
            anyhow::ensure!(max_order >= 2, "max-order must be at least 2");
            let hg = data.load()?;
            let graphs = dataset_projections(&hg, max_order, &data.options(), None);
            let summary = dataset_summary(&hg, &graphs);
            if json {
                stdout_write(&formats::to_json(&summary)?)?;
            } else {
                let mut text = format!("nodes\t{}\n|E|\t{}\n", summary.node_count, summary.hyperedges);
                for o in &summary.projected {
                    text.push_str(&format!("|E_{}|\t{}\n", o.order, o.edges));
                }
                stdout_write(&text)?;
            }
        }
        Command::Project { data, max_order, cache_dir } => {
            anyhow::ensure!(max_order >= 2, "max-order must be at least 2");
            std::fs::create_dir_all(&cache_dir).with_context(|| format!("creating {}", cache_dir.display()))?;
            let hg = data.load()?;
            let cache = Some((cache_dir.as_path(), data.dataset.as_path(), data.max_size));
            let graphs = dataset_projections(&hg, max_order, &data.options(), cache);
            let mut text = String::new();
            for (i, g) in graphs.iter().enumerate() {
                let order = i + 2;
                let path = pipeline::cache_path(&cache_dir, &data.dataset, data.max_size, "", order);
                match g {
                    Outcome::Ok(pg) => text.push_str(&format!("{}\t{}\n", path.display(), pg.subset_count())),
                    Outcome::Failed(r) => text.push_str(&format!("{}\tfailed:{r}\n", path.display())),
                }
            }
            stdout_write(&text)?;
            if let Some(Outcome::Failed(r)) = graphs.iter().find(|g| matches!(g, Outcome::Failed(_))) {
                anyhow::bail!("projection failed: {r}");
            }
        }
        Command::Run(args) => {
            let cfg = args.config()?;
            let res = pipeline::run_experiment(&cfg)?;
            match &cfg.out {
                Some(path) => report::emit_report(&res, cfg.out_format, path)?,
                None => stdout_write(&report::to_string(&res, cfg.out_format)?)?,
            }
        }
        Command::Diagnose { data, samples, seed, unsorted } => {
            let hg = data.load()?;
            let t = Instant::now();
            let graphs = dataset_projections(&hg, 3, &data.options(), None);
            let (pg2, pg3) = match (&graphs[0], &graphs[1]) {
                (Outcome::Ok(a), Outcome::Ok(b)) => (a, b),
                (Outcome::Failed(r), _) | (_, Outcome::Failed(r)) => anyhow::bail!("projection failed: {r}"),
            };
            let sampling = TripleSampling { num_samples: samples, seed, sort_pairs: !unsorted };
            let d = diagnose(pg2, pg3, hg.node_count(), &sampling)?;
            stdout_write(&formats::to_json(&d)?)?;
            eprintln!("diagnostics took {:.1} ms", t.elapsed().as_secs_f64() * 1e3);
        }
        Command::Correlate { feature, from_order, stat, reports } => {
            let c = correlate(&reports, feature, from_order, stat)?;
            stdout_write(&formats::to_json(&c)?)?;
        }
        Command::Synth { seed, out } => {
            let raw = synthetic::planted_hypergraph(&synthetic::PlantedConfig::default(), seed);
            let file = std::fs::File::create(&out).with_context(|| format!("creating {}", out.display()))?;
            formats::write_edge_list(std::io::BufWriter::new(file), &raw)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = serde_json::json!({ "error": e.kind().to_string(), "message": e.to_string().trim() });
            eprintln!("{msg}");
            return ExitCode::from(2);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let causes: Vec<String> = e.chain().skip(1).map(|c| c.to_string()).collect();
            let msg = serde_json::json!({ "error": e.to_string(), "causes": causes });
            eprintln!("{msg}");
            ExitCode::FAILURE
        }
    }
}
