//! JSON and CSV report files. Every JSON report carries the resolved run
//! configuration; floats are written in shortest round-trip form so
//! repeated runs produce identical bytes.

use std::path::{Path, PathBuf};

use fuzzrank_core::evaluation::{AccuracyCurve, StabilityReport, SubsampleCurve};
use fuzzrank_core::fuzzy_ensemble::RankingResult;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{Error, Result};

#[derive(Debug, Serialize)]
pub struct RankingReport<'a> {
    pub dataset: &'a str,
    pub scheme: &'a str,
    pub seed: u64,
    #[serde(rename = "L")]
    pub subsets: usize,
    pub ratio: f64,
    pub methods: Vec<&'a str>,
    pub feature_names: &'a [String],
    pub scores: &'a [f64],
    pub ranking: &'a [usize],
    /// Per feature, the weight of each method.
    pub weights: Vec<&'a [f64]>,
    pub config: &'a RunConfig,
}

impl<'a> RankingReport<'a> {
    pub fn new(result: &'a RankingResult, config: &'a RunConfig) -> Self {
        Self {
            dataset: &result.dataset,
            scheme: result.scheme.id(),
            seed: result.seed,
            subsets: result.subsets,
            ratio: result.ratio,
            methods: result.methods.iter().map(|m| m.id()).collect(),
            feature_names: &result.feature_names,
            scores: &result.scores,
            ranking: &result.ranking,
            weights: result.weights.iter().map(|w| w.weights()).collect(),
            config,
        }
    }
}

/// `feature_name,score,rank` in column order; rank 1 is the most significant.
pub fn ranking_csv(result: &RankingResult) -> Result<Vec<u8>> {
    let mut rank = vec![0; result.scores.len()];
    for (pos, &f) in result.ranking.iter().enumerate() {
        rank[f] = pos + 1;
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["feature_name", "score", "rank"])
        .map_err(csv_err)?;
    for (i, name) in result.feature_names.iter().enumerate() {
        w.write_record([name.clone(), result.scores[i].to_string(), rank[i].to_string()])
            .map_err(csv_err)?;
    }
    finish(w)
}

#[derive(Debug, Serialize)]
pub struct AccuracyReport<'a> {
    pub dataset: &'a str,
    pub classifier: &'a str,
    pub folds: &'a [Vec<usize>],
    pub curves: Vec<CurveJson<'a>>,
    pub config: &'a RunConfig,
}

#[derive(Debug, Serialize)]
pub struct CurveJson<'a> {
    pub variant: &'a str,
    pub best_n_features: usize,
    pub best_mean_accuracy: f64,
    pub points: Vec<PointJson<'a>>,
}

#[derive(Debug, Serialize)]
pub struct PointJson<'a> {
    pub n_features_kept: usize,
    pub mean_accuracy: f64,
    pub per_fold: &'a [f64],
}

impl<'a> CurveJson<'a> {
    pub fn new(curve: &'a AccuracyCurve) -> Self {
        let best = curve.best();
        Self {
            variant: &curve.variant,
            best_n_features: best.map_or(0, |p| p.n_features_kept),
            best_mean_accuracy: best.map_or(0.0, |p| p.mean_accuracy),
            points: curve
                .points
                .iter()
                .map(|p| PointJson {
                    n_features_kept: p.n_features_kept,
                    mean_accuracy: p.mean_accuracy,
                    per_fold: &p.per_fold,
                })
                .collect(),
        }
    }
}

/// Rows are feature counts from N down to 1, columns are variants.
pub fn accuracy_csv(curves: &[AccuracyCurve]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["k".to_string()];
    header.extend(curves.iter().map(|c| c.variant.clone()));
    w.write_record(&header).map_err(csv_err)?;
    let n_points = curves.first().map_or(0, |c| c.points.len());
    for i in 0..n_points {
        let mut row = vec![curves[0].points[i].n_features_kept.to_string()];
        row.extend(curves.iter().map(|c| c.points[i].mean_accuracy.to_string()));
        w.write_record(&row).map_err(csv_err)?;
    }
    finish(w)
}

/// Highest mean accuracy per variant, one row per classifier.
pub fn summary_csv(dataset: &str, per_classifier: &[Vec<AccuracyCurve>]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let Some(first) = per_classifier.first() else {
        return finish(w);
    };
    let mut header = vec!["dataset".to_string(), "classifier".to_string()];
    header.extend(first.iter().map(|c| c.variant.clone()));
    w.write_record(&header).map_err(csv_err)?;
    for curves in per_classifier {
        let mut row = vec![
            dataset.to_string(),
            curves
                .first()
                .map_or(String::new(), |c| c.classifier.id().to_string()),
        ];
        row.extend(
            curves
                .iter()
                .map(|c| c.best().map_or(String::new(), |p| p.mean_accuracy.to_string())),
        );
        w.write_record(&row).map_err(csv_err)?;
    }
    finish(w)
}

#[derive(Debug, Serialize)]
pub struct SummaryReport<'a> {
    pub dataset: &'a str,
    pub rows: Vec<SummaryRow<'a>>,
    pub config: &'a RunConfig,
}

#[derive(Debug, Serialize)]
pub struct SummaryRow<'a> {
    pub classifier: &'a str,
    pub best: Vec<SummaryCell<'a>>,
}

#[derive(Debug, Serialize)]
pub struct SummaryCell<'a> {
    pub variant: &'a str,
    pub mean_accuracy: f64,
    pub n_features: usize,
}

impl<'a> SummaryReport<'a> {
    pub fn new(dataset: &'a str, per_classifier: &'a [Vec<AccuracyCurve>], config: &'a RunConfig) -> Self {
        Self {
            dataset,
            rows: per_classifier
                .iter()
                .filter_map(|curves| {
                    Some(SummaryRow {
                        classifier: curves.first()?.classifier.id(),
                        best: curves
                            .iter()
                            .filter_map(|c| {
                                let b = c.best()?;
                                Some(SummaryCell {
                                    variant: &c.variant,
                                    mean_accuracy: b.mean_accuracy,
                                    n_features: b.n_features_kept,
                                })
                            })
                            .collect(),
                    })
                })
                .collect(),
            config,
        }
    }
}

/// Two rows, ASD and APC, one column per variant.
pub fn stability_csv(reports: &[StabilityReport]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["metric".to_string()];
    header.extend(reports.iter().map(|r| r.variant.clone()));
    w.write_record(&header).map_err(csv_err)?;
    for (name, get) in [
        (
            "ASD",
            (|r: &StabilityReport| r.asd) as fn(&StabilityReport) -> f64,
        ),
        ("APC", |r| r.apc),
    ] {
        let mut row = vec![name.to_string()];
        row.extend(reports.iter().map(|r| get(r).to_string()));
        w.write_record(&row).map_err(csv_err)?;
    }
    finish(w)
}

/// Mean correlation per proportion; the first row is the full-data re-run
/// at `p = 1`.
pub fn subsample_csv(curves: &[SubsampleCurve]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["p".to_string()];
    header.extend(curves.iter().map(|c| c.variant.clone()));
    w.write_record(&header).map_err(csv_err)?;
    let mut row = vec![1.0f64.to_string()];
    row.extend(curves.iter().map(|c| c.full_data_pearson.to_string()));
    w.write_record(&row).map_err(csv_err)?;
    let n_points = curves.first().map_or(0, |c| c.points.len());
    for i in 0..n_points {
        let mut row = vec![curves[0].points[i].p.to_string()];
        row.extend(curves.iter().map(|c| c.points[i].mean_pearson.to_string()));
        w.write_record(&row).map_err(csv_err)?;
    }
    finish(w)
}

/// One row per (p, repeat).
pub fn subsample_repeats_csv(curves: &[SubsampleCurve]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["p".to_string(), "repeat".to_string()];
    header.extend(curves.iter().map(|c| c.variant.clone()));
    w.write_record(&header).map_err(csv_err)?;
    let n_points = curves.first().map_or(0, |c| c.points.len());
    for i in 0..n_points {
        for r in 0..curves[0].points[i].per_repeat.len() {
            let mut row = vec![curves[0].points[i].p.to_string(), r.to_string()];
            row.extend(curves.iter().map(|c| c.points[i].per_repeat[r].to_string()));
            w.write_record(&row).map_err(csv_err)?;
        }
    }
    finish(w)
}

#[derive(Debug, Serialize)]
pub struct StabilityJson<'a> {
    pub dataset: &'a str,
    pub folds: &'a [Vec<usize>],
    pub cross_fold: Vec<StabilityEntry<'a>>,
    pub subsample: Vec<SubsampleEntry<'a>>,
    pub config: &'a RunConfig,
}

#[derive(Debug, Serialize)]
pub struct StabilityEntry<'a> {
    pub variant: &'a str,
    pub asd: f64,
    pub apc: f64,
    pub per_feature_sd: &'a [f64],
    pub fold_scores: &'a [Vec<f64>],
}

#[derive(Debug, Serialize)]
pub struct SubsampleEntry<'a> {
    pub variant: &'a str,
    pub full_data_pearson: f64,
    pub points: Vec<SubsamplePointJson<'a>>,
}

#[derive(Debug, Serialize)]
pub struct SubsamplePointJson<'a> {
    pub p: f64,
    pub mean_pearson: f64,
    pub per_repeat: &'a [f64],
}

impl<'a> StabilityEntry<'a> {
    pub fn new(r: &'a StabilityReport) -> Self {
        Self {
            variant: &r.variant,
            asd: r.asd,
            apc: r.apc,
            per_feature_sd: &r.per_feature_sd,
            fold_scores: &r.fold_scores,
        }
    }
}

impl<'a> SubsampleEntry<'a> {
    pub fn new(c: &'a SubsampleCurve) -> Self {
        Self {
            variant: &c.variant,
            full_data_pearson: c.full_data_pearson,
            points: c
                .points
                .iter()
                .map(|p| SubsamplePointJson {
                    p: p.p,
                    mean_pearson: p.mean_pearson,
                    per_repeat: &p.per_repeat,
                })
                .collect(),
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Writes `bytes` to `dir/name`, creating `dir` if needed.
pub fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> Result<PathBuf> {
    let io_err = |path: &Path| {
        let path = path.to_path_buf();
        move |source| Error::Io { path, source }
    };
    std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    let path = dir.join(name);
    std::fs::write(&path, bytes).map_err(io_err(&path))?;
    Ok(path)
}

fn csv_err(source: csv::Error) -> Error {
    Error::Csv {
        path: PathBuf::from("<report>"),
        source,
    }
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<Vec<u8>> {
    w.into_inner().map_err(|e| csv_err(e.into_error().into()))
}
