//! Pipeline configuration: one TOML file, every knob overridable on the
//! command line with flags taking precedence. Seeds are explicit integers;
//! nothing defaults to wall-clock state.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use valuekit::classifier::{FeaturizerConfig, ThresholdMode, TrainingConfig};
use valuekit::error::{Error, Result};

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    #[serde(default)]
    pub paths: Paths,
    #[serde(default)]
    pub filter: FilterConfig,
    #[serde(default)]
    pub annotation: AnnotationConfig,
    #[serde(default)]
    pub seeds: Seeds,
    #[serde(default)]
    pub features: FeaturesConfig,
    #[serde(default)]
    pub training: TrainingSection,
    #[serde(default)]
    pub thresholds: ThresholdsConfig,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Paths {
    pub corpus: Option<PathBuf>,
    pub annotations: Option<PathBuf>,
    pub soft_labels: Option<PathBuf>,
    pub expert: Option<PathBuf>,
    pub probabilities: Option<PathBuf>,
    pub model: Option<PathBuf>,
    pub thresholds: Option<PathBuf>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilterConfig {
    #[serde(default)]
    pub lexical_patterns: Vec<String>,
    #[serde(default = "default_shingle_len")]
    pub shingle_len: usize,
    #[serde(default = "default_min_duplicate_users")]
    pub min_duplicate_users: usize,
    #[serde(default)]
    pub political_keywords: Vec<String>,
    /// Apply the anonymization scrub after parsing.
    #[serde(default = "default_true")]
    pub scrub: bool,
}

fn default_shingle_len() -> usize {
    8
}

fn default_min_duplicate_users() -> usize {
    3
}

fn default_true() -> bool {
    true
}

impl Default for FilterConfig {
    fn default() -> Self {
        Self {
            lexical_patterns: Vec::new(),
            shingle_len: default_shingle_len(),
            min_duplicate_users: default_min_duplicate_users(),
            political_keywords: Vec::new(),
            scrub: true,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnnotationConfig {
    /// mock | replay | http
    #[serde(default = "default_provider")]
    pub provider: String,
    #[serde(default)]
    pub endpoint: String,
    #[serde(default)]
    pub bearer_token: Option<String>,
    #[serde(default = "default_template")]
    pub template_id: String,
    #[serde(default = "default_batch_size")]
    pub batch_size: usize,
    #[serde(default = "default_runs")]
    pub runs: usize,
    pub mock_file: Option<PathBuf>,
    pub replay: Option<PathBuf>,
    #[serde(default = "default_timeout_secs")]
    pub timeout_secs: u64,
}

fn default_provider() -> String {
    "mock".into()
}

fn default_template() -> String {
    "values-v1".into()
}

fn default_batch_size() -> usize {
    16
}

fn default_runs() -> usize {
    5
}

fn default_timeout_secs() -> u64 {
    30
}

impl Default for AnnotationConfig {
    fn default() -> Self {
        Self {
            provider: default_provider(),
            endpoint: String::new(),
            bearer_token: None,
            template_id: default_template(),
            batch_size: default_batch_size(),
            runs: default_runs(),
            mock_file: None,
            replay: None,
            timeout_secs: default_timeout_secs(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Seeds {
    #[serde(default = "default_batches_seed")]
    pub batches: u64,
    #[serde(default = "default_train_seed")]
    pub train: u64,
    #[serde(default = "default_synthetic_seed")]
    pub synthetic: u64,
}

fn default_batches_seed() -> u64 {
    17
}

fn default_train_seed() -> u64 {
    42
}

fn default_synthetic_seed() -> u64 {
    7
}

impl Default for Seeds {
    fn default() -> Self {
        Self {
            batches: default_batches_seed(),
            train: default_train_seed(),
            synthetic: default_synthetic_seed(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FeaturesConfig {
    #[serde(default = "default_min_doc_freq")]
    pub min_doc_freq: usize,
    #[serde(default = "default_max_vocab")]
    pub max_vocab: usize,
    #[serde(default = "default_true")]
    pub lowercase: bool,
}

fn default_min_doc_freq() -> usize {
    1
}

fn default_max_vocab() -> usize {
    50_000
}

impl Default for FeaturesConfig {
    fn default() -> Self {
        Self {
            min_doc_freq: default_min_doc_freq(),
            max_vocab: default_max_vocab(),
            lowercase: true,
        }
    }
}

impl FeaturesConfig {
    pub fn to_featurizer(&self) -> FeaturizerConfig {
        FeaturizerConfig {
            min_doc_freq: self.min_doc_freq,
            max_vocab: self.max_vocab,
            lowercase: self.lowercase,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainingSection {
    #[serde(default = "default_learning_rate")]
    pub learning_rate: f64,
    #[serde(default = "default_epochs")]
    pub epochs: usize,
    #[serde(default = "default_l2")]
    pub l2: f64,
    #[serde(default = "default_train_batch")]
    pub batch_size: usize,
}

fn default_learning_rate() -> f64 {
    0.2
}

fn default_epochs() -> usize {
    60
}

fn default_l2() -> f64 {
    1e-4
}

fn default_train_batch() -> usize {
    32
}

impl Default for TrainingSection {
    fn default() -> Self {
        Self {
            learning_rate: default_learning_rate(),
            epochs: default_epochs(),
            l2: default_l2(),
            batch_size: default_train_batch(),
        }
    }
}

impl TrainingSection {
    pub fn to_training(&self, seed: u64) -> TrainingConfig {
        TrainingConfig {
            learning_rate: self.learning_rate,
            epochs: self.epochs,
            l2: self.l2,
            batch_size: self.batch_size,
            seed,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThresholdsConfig {
    #[serde(default = "default_threshold_mode")]
    pub mode: String,
}

fn default_threshold_mode() -> String {
    "per_class".into()
}

impl Default for ThresholdsConfig {
    fn default() -> Self {
        Self { mode: default_threshold_mode() }
    }
}

impl ThresholdsConfig {
    pub fn parse_mode(&self) -> Result<ThresholdMode> {
        match self.mode.as_str() {
            "per_class" => Ok(ThresholdMode::PerClass),
            "global" => Ok(ThresholdMode::Global),
            other => Err(Error::Config(format!(
                "threshold mode must be per_class or global, got `{other}`"
            ))),
        }
    }
}

/// Load the TOML config; a missing `--config` yields all defaults. The raw
/// text is kept for the run-id hash.
pub fn load(path: Option<&Path>) -> Result<(PipelineConfig, String)> {
    match path {
        None => Ok((PipelineConfig::default(), String::new())),
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                Error::Config(format!("cannot read config {}: {e}", path.display()))
            })?;
            let config: PipelineConfig = toml::from_str(&text)
                .map_err(|e| Error::Config(format!("bad config {}: {e}", path.display())))?;
            Ok((config, text))
        }
    }
}

/// Check that every path required by the invoked subcommand exists,
/// reporting all failures at once.
pub fn require_paths(pairs: &[(&str, Option<&Path>)]) -> Result<BTreeMap<String, PathBuf>> {
    let mut resolved = BTreeMap::new();
    let mut problems = Vec::new();
    for (name, path) in pairs {
        match path {
            None => problems.push(format!("- missing required input `{name}` (flag --{name} or config path)")),
            Some(p) if !p.exists() => {
                problems.push(format!("- `{name}` path does not exist: {}", p.display()))
            }
            Some(p) => {
                resolved.insert((*name).to_string(), p.to_path_buf());
            }
        }
    }
    if problems.is_empty() {
        Ok(resolved)
    } else {
        Err(Error::Config(format!("configuration errors:\n{}", problems.join("\n"))))
    }
}
