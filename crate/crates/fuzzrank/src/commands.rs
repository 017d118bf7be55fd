//! The three subcommands. Each returns the paths it wrote.

use std::path::PathBuf;

use fuzzrank_core::dataset::{kfold_split, Dataset};
use fuzzrank_core::evaluation::{fold_scores, stability_reports, subsample_stability};
use fuzzrank_core::fuzzy_ensemble::{rank_features_with, EnsembleRanker};
use log::info;

use crate::config::RunConfig;
use crate::error::Result;
use crate::io::load_dataset;
use crate::parallel::{self, Parallel};
use crate::report::{self, write_file};

fn prepare(config: &RunConfig) -> Result<(Dataset, Parallel)> {
    config.validate()?;
    let data = load_dataset(config.data_path()?, &config.label, config.preprocess)?;
    info!(
        "{}: {} samples, {} features, classes {:?}",
        data.name(),
        data.n_samples(),
        data.n_features(),
        data.class_counts()
    );
    Ok((data, Parallel::new(config.jobs)?))
}

fn ranker(config: &RunConfig, pool: &Parallel) -> EnsembleRanker<Parallel> {
    let schemes = config.schemes();
    EnsembleRanker::with_scorer(
        config.ensemble(schemes[0]),
        config.methods.clone(),
        schemes,
        pool.clone(),
    )
}

pub fn cmd_rank(config: &RunConfig) -> Result<Vec<PathBuf>> {
    let scheme = config.single_scheme()?;
    let (data, pool) = prepare(config)?;
    let result = rank_features_with(&data, &config.ensemble(scheme), &pool)?;
    let out = &config.out;
    Ok(vec![
        write_file(
            out,
            "ranking.json",
            &report::to_json(&report::RankingReport::new(&result, config))?,
        )?,
        write_file(out, "ranking.csv", &report::ranking_csv(&result)?)?,
        write_file(out, "config.json", &report::to_json(config)?)?,
    ])
}

pub fn cmd_eval_accuracy(config: &RunConfig) -> Result<Vec<PathBuf>> {
    let (data, pool) = prepare(config)?;
    let folds = kfold_split(&data, config.folds, config.seed)?;
    let ranker = ranker(config, &pool);
    info!("ranking features on {} training folds", folds.k());
    let scores = fold_scores(&data, &ranker, &folds)?;
    let out = &config.out;
    let mut written = Vec::new();
    let mut per_classifier = Vec::new();
    for &kind in &config.classifier {
        info!("accuracy curves with {kind}");
        let curves =
            parallel::accuracy_curves(&pool, &data, &scores, &folds, &config.classifier_config(kind))?;
        let json = report::AccuracyReport {
            dataset: data.name(),
            classifier: kind.id(),
            folds: folds.folds(),
            curves: curves.iter().map(report::CurveJson::new).collect(),
            config,
        };
        written.push(write_file(
            out,
            &format!("accuracy_{kind}.json"),
            &report::to_json(&json)?,
        )?);
        written.push(write_file(
            out,
            &format!("accuracy_{kind}.csv"),
            &report::accuracy_csv(&curves)?,
        )?);
        per_classifier.push(curves);
    }
    let summary = report::SummaryReport::new(data.name(), &per_classifier, config);
    written.push(write_file(out, "summary.json", &report::to_json(&summary)?)?);
    written.push(write_file(
        out,
        "summary.csv",
        &report::summary_csv(data.name(), &per_classifier)?,
    )?);
    written.push(write_file(out, "config.json", &report::to_json(config)?)?);
    Ok(written)
}

pub fn cmd_eval_stability(config: &RunConfig) -> Result<Vec<PathBuf>> {
    let (data, pool) = prepare(config)?;
    let folds = kfold_split(&data, config.folds, config.seed)?;
    let ranker = ranker(config, &pool);
    info!("cross-fold stability over {} folds", folds.k());
    let reports = stability_reports(&fold_scores(&data, &ranker, &folds)?, config.sd_convention)?;
    info!("subsample stability over {} proportions", config.p_grid.len());
    let curves = subsample_stability(&data, &ranker, &config.p_grid, config.repeats, config.seed)?;
    let json = report::StabilityJson {
        dataset: data.name(),
        folds: folds.folds(),
        cross_fold: reports.iter().map(report::StabilityEntry::new).collect(),
        subsample: curves.iter().map(report::SubsampleEntry::new).collect(),
        config,
    };
    let out = &config.out;
    Ok(vec![
        write_file(out, "stability.json", &report::to_json(&json)?)?,
        write_file(out, "stability.csv", &report::stability_csv(&reports)?)?,
        write_file(out, "subsample.csv", &report::subsample_csv(&curves)?)?,
        write_file(
            out,
            "subsample_repeats.csv",
            &report::subsample_repeats_csv(&curves)?,
        )?,
        write_file(out, "config.json", &report::to_json(config)?)?,
    ])
}
