//! Batch CLI driver: coarsen-only, full-partition, and evaluate pipelines
//! over hMETIS files, with metric reports to stdout or a file.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Parser, ValueEnum};

use crate::coarsening::{self, CoarsenParams, DeltaPolicy};
use crate::embedding::ExpansionKind;
use crate::error::Error;
use crate::hypergraph::ClusterMap;
use crate::io::{self, Report};
use crate::metrics;
use crate::partition::{self, CommunityMode, PartitionConfig, RatingKind};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Coarsen,
    Partition,
    Evaluate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExpansionArg {
    Star,
    Clique,
    Hybrid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RatingArg {
    #[value(name = "heavy-edge")]
    HeavyEdge,
    Resistance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CommunityArg {
    Off,
    Flow,
}

/// Resolved run configuration; every flag has a defaulted long form.
#[derive(Debug, Clone, Parser)]
#[command(
    name = "hyperpart",
    about = "Spectral multilevel hypergraph coarsening and partitioning",
    disable_help_subcommand = true
)]
pub struct RunConfig {
    /// Pipeline to run.
    #[arg(long, value_enum)]
    pub mode: Mode,
    /// Input hypergraph in hMETIS format.
    #[arg(long = "in", value_name = "PATH")]
    pub input: PathBuf,
    /// Output path (coarse hypergraph or partition file).
    #[arg(long = "out", value_name = "PATH")]
    pub output: Option<PathBuf>,
    /// Write the metric report here instead of stdout.
    #[arg(long = "out-report", value_name = "PATH")]
    pub out_report: Option<PathBuf>,
    /// Partition file to evaluate (mode evaluate).
    #[arg(long = "partition", value_name = "PATH")]
    pub partition_file: Option<PathBuf>,
    /// Number of blocks.
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    /// Balance tolerance.
    #[arg(long, default_value_t = 0.02)]
    pub epsilon: f64,
    /// Krylov order of the embedding.
    #[arg(long, default_value_t = 4)]
    pub rho: usize,
    /// Resistance ratios summed per hyperedge.
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    /// Coarsening levels.
    #[arg(long, default_value_t = 4)]
    pub levels: usize,
    /// Target node-reduction ratio for coarsening.
    #[arg(long, default_value_t = 0.5)]
    pub reduction: f64,
    /// Fixed contraction threshold; default picks one per level.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Locality penalty of the flow refinement.
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    /// Convergence tolerance of the flow refinement.
    #[arg(long, default_value_t = 1e-3)]
    pub xi: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Expansion substrate for the embedding.
    #[arg(long, value_enum, default_value_t = ExpansionArg::Star)]
    pub expansion: ExpansionArg,
    /// Pair rating driving the partitioner's coarsening.
    #[arg(long, value_enum, default_value_t = RatingArg::Resistance)]
    pub rating: RatingArg,
    /// Community detection guiding contraction.
    #[arg(long, value_enum, default_value_t = CommunityArg::Flow)]
    pub community: CommunityArg,
}

impl RunConfig {
    fn validate(&self) -> Result<(), String> {
        if self.rho < 1 {
            return Err("--rho must be at least 1".into());
        }
        if self.m < 1 || self.m > self.rho {
            return Err(format!("--m must lie in 1..={} (rho)", self.rho));
        }
        if self.k < 1 {
            return Err("--k must be at least 1".into());
        }
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0 / self.k as f64) {
            return Err(format!(
                "--epsilon must lie in (0, 1/{}], got {}",
                self.k, self.epsilon
            ));
        }
        if !(0.0..1.0).contains(&self.reduction) {
            return Err("--reduction must lie in [0, 1)".into());
        }
        if self.beta < 0.0 {
            return Err("--beta must be nonnegative".into());
        }
        if !(self.xi > 0.0) {
            return Err("--xi must be positive".into());
        }
        if self.levels < 1 {
            return Err("--levels must be at least 1".into());
        }
        match self.mode {
            Mode::Coarsen | Mode::Partition => {
                if self.output.is_none() {
                    return Err("--out is required for this mode".into());
                }
                if self.mode == Mode::Partition && self.k < 2 {
                    return Err("--k must be at least 2 for partitioning".into());
                }
            }
            Mode::Evaluate => {
                if self.partition_file.is_none() {
                    return Err("--partition is required for mode evaluate".into());
                }
            }
        }
        Ok(())
    }

    fn expansion_kind(&self) -> ExpansionKind {
        match self.expansion {
            ExpansionArg::Star => ExpansionKind::Star,
            ExpansionArg::Clique => ExpansionKind::Clique,
            ExpansionArg::Hybrid => ExpansionKind::Hybrid,
        }
    }

    fn describe(&self, report: &mut Report) {
        report.set_text("mode", match self.mode {
            Mode::Coarsen => "coarsen",
            Mode::Partition => "partition",
            Mode::Evaluate => "evaluate",
        });
        report.set_text("input", &self.input.display().to_string());
        if let Some(out) = &self.output {
            report.set_text("output", &out.display().to_string());
        }
        report.set_int("k", self.k as i64);
        report.set_float("epsilon", self.epsilon);
        report.set_int("rho", self.rho as i64);
        report.set_int("m", self.m as i64);
        report.set_int("levels", self.levels as i64);
        report.set_float("reduction", self.reduction);
        if let Some(d) = self.delta {
            report.set_float("delta", d);
        }
        report.set_float("beta", self.beta);
        report.set_float("xi", self.xi);
        report.set_int("seed", self.seed as i64);
        report.set_text("expansion", match self.expansion {
            ExpansionArg::Star => "star",
            ExpansionArg::Clique => "clique",
            ExpansionArg::Hybrid => "hybrid",
        });
        report.set_text("rating", match self.rating {
            RatingArg::HeavyEdge => "heavy-edge",
            RatingArg::Resistance => "resistance",
        });
        report.set_text("community", match self.community {
            CommunityArg::Off => "off",
            CommunityArg::Flow => "flow",
        });
    }
}

/// Parse argv into a validated config. Usage problems come back as `Err`
/// with the message to print; `Ok(None)` means help/version was displayed.
pub fn parse_flags<I, T>(argv: I) -> Result<Option<RunConfig>, String>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match RunConfig::try_parse_from(argv) {
        Ok(config) => {
            config.validate()?;
            Ok(Some(config))
        }
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            Ok(None)
        }
        Err(e) => Err(e.to_string()),
    }
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Parse { .. } | Error::Io(_) => EXIT_PARSE,
        Error::Infeasible(_) => EXIT_INFEASIBLE,
        Error::InvalidArgument(_) => EXIT_USAGE,
        _ => EXIT_INTERNAL,
    }
}

fn emit_report(config: &RunConfig, report: &Report) -> crate::error::Result<()> {
    let text = io::write_report(report);
    match &config.out_report {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

/// Execute one run; returns the process exit code.
pub fn run(config: &RunConfig) -> i32 {
    match run_inner(config) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn run_inner(config: &RunConfig) -> crate::error::Result<i32> {
    let started = Instant::now();
    let text = fs::read_to_string(&config.input)?;
    let (h, warnings) = io::read_hmetis(&text)?;
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    let mut report = Report::new();
    config.describe(&mut report);
    report.set_int("num_nodes", h.num_nodes() as i64);
    report.set_int("num_hyperedges", h.num_edges() as i64);

    let code = match config.mode {
        Mode::Coarsen => {
            let params = CoarsenParams {
                levels: config.levels,
                rho: config.rho,
                m: config.m,
                seed: config.seed,
                delta: match config.delta {
                    Some(d) => DeltaPolicy::Fixed(d),
                    None => DeltaPolicy::Percentile(0.5),
                },
                reduction_target: config.reduction,
                max_contraction_pins: 300,
                expansion: config.expansion_kind(),
            };
            let hier = coarsening::coarsen(&h, &params)?;
            let map = hier.composite_map();
            let coarse = hier.coarsest();
            let out = config.output.as_ref().expect("validated");
            fs::write(out, io::write_hmetis(coarse))?;
            let map_path = out.with_extension(
                out.extension()
                    .map(|e| format!("{}.map", e.to_string_lossy()))
                    .unwrap_or_else(|| "map".to_string()),
            );
            let mut map_text = String::new();
            for v in 0..map.num_nodes() {
                map_text.push_str(&format!("{}\n", map.cluster_of(v)));
            }
            fs::write(&map_path, map_text)?;
            report.set_text("cluster_map", &map_path.display().to_string());
            report.set_int("coarse_nodes", coarse.num_nodes() as i64);
            report.set_int("coarse_hyperedges", coarse.num_edges() as i64);
            report.set_int("num_clusters", map.num_clusters() as i64);
            report.set_float(
                "node_reduction",
                1.0 - coarse.num_nodes() as f64 / h.num_nodes().max(1) as f64,
            );
            if let Ok(phi) = metrics::avg_conductance(&h, &map) {
                report.set_float("phi_avg", phi);
            }
            if let Ok(hlc) = metrics::avg_local_conductance(&h, &map) {
                report.set_float("hlc_avg", hlc);
            }
            EXIT_OK
        }
        Mode::Partition => {
            let pconfig = PartitionConfig {
                rho: config.rho,
                m: config.m,
                seed: config.seed,
                rating: match config.rating {
                    RatingArg::HeavyEdge => RatingKind::HeavyEdge,
                    RatingArg::Resistance => RatingKind::Resistance,
                },
                community: match config.community {
                    CommunityArg::Off => CommunityMode::Off,
                    CommunityArg::Flow => CommunityMode::Flow,
                },
                beta: config.beta,
                xi: config.xi,
                ..PartitionConfig::default()
            };
            let outcome = partition::partition_detailed(&h, config.k, config.epsilon, &pconfig)?;
            let out = config.output.as_ref().expect("validated");
            fs::write(out, io::write_partition(&outcome.partition))?;
            let balance = metrics::check_balance(&h, &outcome.partition);
            report.set_float("cutsize", outcome.cutsize);
            report.set_bool("balanced", balance.balanced);
            report.set_float("balance_lower", balance.lower);
            report.set_float("balance_upper", balance.upper);
            for (b, load) in balance.loads.iter().enumerate() {
                report.set_float(&format!("block_{b}_load"), *load);
            }
            if outcome.feasible {
                EXIT_OK
            } else {
                EXIT_INFEASIBLE
            }
        }
        Mode::Evaluate => {
            let ptext = fs::read_to_string(config.partition_file.as_ref().expect("validated"))?;
            let p = io::read_partition(&ptext, h.num_nodes(), config.epsilon)?;
            let balance = metrics::check_balance(&h, &p);
            report.set_int("k", p.k() as i64);
            report.set_float("cutsize", metrics::cutsize(&h, &p));
            report.set_bool("balanced", balance.balanced);
            report.set_float("balance_lower", balance.lower);
            report.set_float("balance_upper", balance.upper);
            for (b, load) in balance.loads.iter().enumerate() {
                report.set_float(&format!("block_{b}_load"), *load);
            }
            let clusters = ClusterMap::from_labels(p.blocks());
            if let Ok(phi) = metrics::avg_conductance(&h, &clusters) {
                report.set_float("phi_avg", phi);
            }
            if let Ok(hlc) = metrics::avg_local_conductance(&h, &clusters) {
                report.set_float("hlc_avg", hlc);
            }
            EXIT_OK
        }
    };
    report.set_float("runtime_seconds", started.elapsed().as_secs_f64());
    emit_report(config, &report)?;
    Ok(code)
}

/// Entry point shared by the binary and the tests.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match parse_flags(argv) {
        Ok(Some(config)) => run(&config),
        Ok(None) => EXIT_OK,
        Err(msg) => {
            eprintln!("{msg}");
            EXIT_USAGE
        }
    }
}
