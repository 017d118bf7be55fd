//! Command line parsing and config layering.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fuzzrank_core::classifiers::ClassifierKind;
use fuzzrank_core::fuzzy_ensemble::{NormalizationScope, Scheme};
use fuzzrank_core::selectors::Method;
use fuzzrank_core::stats::SdConvention;

use crate::commands;
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::io::{LabelColumn, Preprocess};

#[derive(Debug, Parser)]
#[command(
    name = "fuzzrank",
    version,
    about = "Ensemble feature ranking with bootstrap fuzzy sets"
)]
pub struct Cli {
    /// More log output (repeat for more).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rank the features of a dataset with one combination scheme.
    Rank(RunArgs),
    /// Cross-validated accuracy while dropping the least significant features.
    EvalAccuracy(RunArgs),
    /// Cross-fold ASD/APC and stability under subsampling.
    EvalStability(RunArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// TOML file with run settings; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Dataset CSV, relative paths are looked up under FUZZRANK_DATA_DIR when set.
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Label column name or 0-based index (default: last column).
    #[arg(long)]
    pub label: Option<LabelColumn>,
    #[arg(long, value_enum)]
    pub preprocess: Option<Preprocess>,
    /// Comma separated base methods: cfs, relieff, mi, fisher.
    #[arg(long, value_delimiter = ',')]
    pub methods: Option<Vec<Method>>,
    /// Combination scheme(s): ew, rw, ow, mw.
    #[arg(long, value_delimiter = ',')]
    pub scheme: Option<Vec<Scheme>>,
    /// Number of bootstrap subsets.
    #[arg(long)]
    pub subsets: Option<usize>,
    /// Bootstrap subset size as a fraction of the samples.
    #[arg(long)]
    pub ratio: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub folds: Option<usize>,
    /// Comma separated: nb, rf.
    #[arg(long, value_delimiter = ',')]
    pub classifier: Option<Vec<ClassifierKind>>,
    /// Trees per random forest.
    #[arg(long)]
    pub trees: Option<usize>,
    /// Subsample proportions, `start:end:step` or a comma separated list.
    #[arg(long, value_parser = parse_p_grid)]
    pub p_grid: Option<PGrid>,
    #[arg(long)]
    pub repeats: Option<usize>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads (0 = all cores); results do not depend on it.
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub relieff_k: Option<usize>,
    /// Histogram bins for the information-theoretic scorers.
    #[arg(long)]
    pub bins: Option<usize>,
    #[arg(long)]
    pub sd_convention: Option<SdConvention>,
    #[arg(long)]
    pub normalization_scope: Option<NormalizationScope>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PGrid(pub Vec<f64>);

fn snap(v: f64) -> f64 {
    (v * 1e9).round() / 1e9
}

/// Parses `0.9:0.3:0.1` (inclusive range) or `0.9,0.5`.
pub fn parse_p_grid(s: &str) -> std::result::Result<PGrid, String> {
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| format!("`{t}` is not a number"))
    };
    let parts: Vec<&str> = s.split(':').collect();
    let grid = match parts.as_slice() {
        [start, end, step] => {
            let (start, end, step) = (num(start)?, num(end)?, num(step)?.abs());
            if step == 0.0 {
                return Err("step must be nonzero".into());
            }
            let n = ((start - end).abs() / step + 1e-9).floor() as usize + 1;
            let dir = if end < start { -1.0 } else { 1.0 };
            (0..n).map(|i| snap(start + dir * i as f64 * step)).collect()
        }
        [list] => list.split(',').map(num).collect::<std::result::Result<_, _>>()?,
        _ => return Err("expected start:end:step or a comma separated list".into()),
    };
    Ok(PGrid(grid))
}

impl RunArgs {
    /// Defaults, then the config file, then these flags.
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut c = match &self.config {
            Some(path) => RunConfig::from_toml_file(path)?,
            None => RunConfig::default(),
        };
        macro_rules! take {
            ($($field:ident => $target:expr),* $(,)?) => {
                $(if let Some(v) = self.$field.clone() { $target = v; })*
            };
        }
        take! {
            label => c.label,
            preprocess => c.preprocess,
            methods => c.methods,
            scheme => c.scheme,
            subsets => c.subsets,
            ratio => c.ratio,
            seed => c.seed,
            folds => c.folds,
            classifier => c.classifier,
            trees => c.trees,
            repeats => c.repeats,
            out => c.out,
            jobs => c.jobs,
            relieff_k => c.relieff.k,
            bins => c.bins,
            sd_convention => c.sd_convention,
            normalization_scope => c.normalization_scope,
        }
        if let Some(d) = &self.data {
            c.data = Some(d.clone());
        }
        if let Some(PGrid(g)) = &self.p_grid {
            c.p_grid = g.clone();
        }
        c.validate()?;
        Ok(c)
    }
}

impl Cli {
    pub fn run(&self) -> Result<Vec<PathBuf>> {
        match &self.command {
            Command::Rank(a) => commands::cmd_rank(&a.resolve()?),
            Command::EvalAccuracy(a) => commands::cmd_eval_accuracy(&a.resolve()?),
            Command::EvalStability(a) => commands::cmd_eval_stability(&a.resolve()?),
        }
    }
}

/// Parses `args` (program name first) and runs the command without
/// touching the logger.
pub fn run_from<I, T>(args: I) -> Result<Vec<PathBuf>>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    Cli::try_parse_from(args)
        .map_err(|e| Error::Usage(e.to_string()))?
        .run()
}

/// Exit status: 0 on success, 2 for usage errors, 1 otherwise.
pub fn exit_code(err: &Error) -> u8 {
    if err.is_usage() {
        2
    } else {
        1
    }
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match cli.run() {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            let mut source = std::error::Error::source(&err);
            while let Some(s) = source {
                eprintln!("  caused by: {s}");
                source = s.source();
            }
            ExitCode::from(exit_code(&err))
        }
    }
}
