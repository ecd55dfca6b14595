//! Desk-scale multi-label value classifier: TF-IDF featurization, logistic
//! regression trained on soft targets, threshold optimization, binarization,
//! evaluation, and prevalence reporting.
//!
//! The model is a linear surrogate behind the same training objective,
//! thresholding, and evaluation stack used for heavyweight encoders;
//! externally produced probability files can be evaluated unchanged.

mod eval;
mod features;
mod model;
mod thresholds;

pub use eval::{evaluate, evaluate_binary, prevalence, EvaluationReport, ValueMetrics, ValuePrevalence};
pub use features::{FeatureSpace, FeaturizerConfig, SparseVec};
pub use model::{gradient, loss, predict_proba, predict_proba_many, train, ModelWeights, TrainingConfig};
pub use thresholds::{binarize, optimize_thresholds, ThresholdMode, ThresholdSet, THRESHOLD_GRID_STEP};
