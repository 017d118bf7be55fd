//! Run configuration: defaults, an optional TOML file, then command line
//! flags, each layer overriding the previous one.

use std::path::{Path, PathBuf};

use fuzzrank_core::classifiers::{ClassifierConfig, ClassifierKind};
use fuzzrank_core::evaluation::DEFAULT_P_GRID;
use fuzzrank_core::fuzzy_ensemble::{EnsembleConfig, NormalizationScope, Scheme};
use fuzzrank_core::selectors::{Method, SelectorParams};
use fuzzrank_core::stats::SdConvention;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::{LabelColumn, Preprocess};

/// Serde adapters that store the core enums by their string ids.
mod by_id {
    use std::fmt::Display;
    use std::str::FromStr;

    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<T: Display, S: Serializer>(value: &T, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(value)
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<T, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        String::deserialize(d)?.parse().map_err(D::Error::custom)
    }

    pub mod list {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<T: Display, S: Serializer>(values: &[T], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(values.len()))?;
            for v in values {
                seq.serialize_element(&v.to_string())?;
            }
            seq.end()
        }

        pub fn deserialize<'de, T, D>(d: D) -> Result<Vec<T>, D::Error>
        where
            T: FromStr,
            T::Err: Display,
            D: Deserializer<'de>,
        {
            Vec::<String>::deserialize(d)?
                .iter()
                .map(|v| v.parse().map_err(D::Error::custom))
                .collect()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReliefConfig {
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub data: Option<PathBuf>,
    /// Label column name or index; empty means the last column.
    pub label: LabelColumn,
    pub preprocess: Preprocess,
    #[serde(with = "by_id::list")]
    pub methods: Vec<Method>,
    /// Combination schemes. `rank` needs exactly one; the evaluation
    /// commands run all four when this is empty.
    #[serde(with = "by_id::list")]
    pub scheme: Vec<Scheme>,
    pub subsets: usize,
    pub ratio: f64,
    pub seed: u64,
    pub folds: usize,
    #[serde(with = "by_id::list")]
    pub classifier: Vec<ClassifierKind>,
    pub trees: usize,
    pub p_grid: Vec<f64>,
    pub repeats: usize,
    /// Output directory; not written into reports.
    #[serde(skip_serializing)]
    pub out: PathBuf,
    /// Worker threads; 0 uses every core. Never affects results.
    #[serde(skip_serializing)]
    pub jobs: usize,
    pub relieff: ReliefConfig,
    pub bins: usize,
    #[serde(with = "by_id")]
    pub sd_convention: SdConvention,
    #[serde(with = "by_id")]
    pub normalization_scope: NormalizationScope,
}

impl Default for RunConfig {
    fn default() -> Self {
        let params = SelectorParams::default();
        Self {
            data: None,
            label: LabelColumn::default(),
            preprocess: Preprocess::None,
            methods: Method::ALL.to_vec(),
            scheme: Vec::new(),
            subsets: EnsembleConfig::DEFAULT_SUBSETS,
            ratio: EnsembleConfig::DEFAULT_RATIO,
            seed: 0,
            folds: 5,
            classifier: ClassifierKind::ALL.to_vec(),
            trees: 100,
            p_grid: DEFAULT_P_GRID.to_vec(),
            repeats: 5,
            out: PathBuf::from("out"),
            jobs: 0,
            relieff: ReliefConfig { k: params.relieff_k },
            bins: params.bins,
            sd_convention: SdConvention::Population,
            normalization_scope: NormalizationScope::AcrossFeatures,
        }
    }
}

impl RunConfig {
    pub fn from_toml_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
            std::io::ErrorKind::NotFound => Error::MissingFile(path.to_path_buf()),
            _ => Error::Io {
                path: path.to_path_buf(),
                source: e,
            },
        })?;
        toml::from_str(&text).map_err(|source| Error::Config {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn data_path(&self) -> Result<&Path> {
        self.data
            .as_deref()
            .ok_or_else(|| Error::Usage("no dataset given (--data)".into()))
    }

    pub fn validate(&self) -> Result<()> {
        let usage = |m: &str| Err(Error::Usage(m.into()));
        if self.methods.is_empty() {
            return usage("at least one method is required");
        }
        if self.subsets == 0 {
            return usage("--subsets must be at least 1");
        }
        if !(self.ratio > 0.0 && self.ratio <= 1.0) {
            return usage("--ratio must lie in (0, 1]");
        }
        if self.folds < 2 {
            return usage("--folds must be at least 2");
        }
        if self.trees == 0 {
            return usage("the forest needs at least one tree");
        }
        if self.repeats == 0 {
            return usage("--repeats must be at least 1");
        }
        if self.p_grid.iter().any(|p| !(*p > 0.0 && *p <= 1.0)) {
            return usage("--p-grid values must lie in (0, 1]");
        }
        if self.relieff.k == 0 {
            return usage("relieff k must be at least 1");
        }
        if self.bins < 2 {
            return usage("--bins must be at least 2");
        }
        Ok(())
    }

    /// The single scheme `rank` runs with.
    pub fn single_scheme(&self) -> Result<Scheme> {
        match self.scheme.as_slice() {
            [s] => Ok(*s),
            [] => Err(Error::Usage("--scheme is required".into())),
            _ => Err(Error::Usage("rank takes exactly one --scheme".into())),
        }
    }

    /// Schemes for the evaluation commands.
    pub fn schemes(&self) -> Vec<Scheme> {
        if self.scheme.is_empty() {
            Scheme::ALL.to_vec()
        } else {
            self.scheme.clone()
        }
    }

    pub fn ensemble(&self, scheme: Scheme) -> EnsembleConfig {
        EnsembleConfig {
            methods: self.methods.clone(),
            scheme,
            subsets: self.subsets,
            ratio: self.ratio,
            seed: self.seed,
            params: SelectorParams {
                relieff_k: self.relieff.k,
                bins: self.bins,
            },
            sd: self.sd_convention,
            normalization: self.normalization_scope,
        }
    }

    pub fn classifier_config(&self, kind: ClassifierKind) -> ClassifierConfig {
        ClassifierConfig {
            kind,
            n_trees: self.trees,
            seed: self.seed,
        }
    }
}
