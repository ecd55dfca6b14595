//! Binarization thresholds: exhaustive grid search maximizing F1.
//!
//! The grid is {0.01, 0.02, …, 0.99}; F1 ties break toward the smallest
//! maximizing threshold. Binarization is strict: a probability exactly equal
//! to the threshold stays negative.

use serde::{Deserialize, Serialize};

use crate::agreement::prf_from_counts;
use crate::circle::{ValueProfile, ValueType, VALUE_COUNT};
use crate::error::{Error, Result};

pub const THRESHOLD_GRID_STEP: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdMode {
    /// One threshold maximizing pooled micro-F1.
    Global,
    /// Ten thresholds, each maximizing its value's positive-class F1.
    PerClass,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdSet {
    pub mode: ThresholdMode,
    /// One entry (global) or ten entries in circle order (per-class).
    pub thresholds: Vec<f64>,
    /// Values whose reference slice had no positives; their threshold is the
    /// 0.5 default rather than a search result.
    pub defaulted: Vec<ValueType>,
}

impl ThresholdSet {
    /// Uniform threshold set without a search (ingest / smoke runs).
    pub fn uniform(mode: ThresholdMode, threshold: f64) -> Result<Self> {
        if !(threshold > 0.0 && threshold < 1.0) {
            return Err(Error::Config(format!("threshold must lie in (0,1), got {threshold}")));
        }
        let thresholds = match mode {
            ThresholdMode::Global => vec![threshold],
            ThresholdMode::PerClass => vec![threshold; VALUE_COUNT],
        };
        Ok(Self { mode, thresholds, defaulted: Vec::new() })
    }

    pub fn threshold_for(&self, value: ValueType) -> f64 {
        match self.mode {
            ThresholdMode::Global => self.thresholds[0],
            ThresholdMode::PerClass => self.thresholds[value.circle_index()],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let expected = match self.mode {
            ThresholdMode::Global => 1,
            ThresholdMode::PerClass => VALUE_COUNT,
        };
        if self.thresholds.len() != expected {
            return Err(Error::Shape(format!(
                "{:?} mode expects {expected} thresholds, got {}",
                self.mode,
                self.thresholds.len()
            )));
        }
        for t in &self.thresholds {
            if !(*t > 0.0 && *t < 1.0) {
                return Err(Error::Config(format!("threshold {t} outside (0,1)")));
            }
        }
        Ok(())
    }
}

fn grid() -> impl Iterator<Item = f64> {
    (1..=99).map(|k| k as f64 * THRESHOLD_GRID_STEP)
}

fn check_aligned(probas: &[ValueProfile], reference: &[[u8; VALUE_COUNT]]) -> Result<()> {
    if probas.is_empty() || probas.len() != reference.len() {
        return Err(Error::Input(format!(
            "need equal nonempty probability/reference rows, got {} and {}",
            probas.len(),
            reference.len()
        )));
    }
    if reference.iter().flatten().any(|l| *l > 1) {
        return Err(Error::Input("reference labels must be 0 or 1".into()));
    }
    Ok(())
}

fn f1_at(probas: &[f64], reference: &[u8], threshold: f64) -> f64 {
    let mut tp = 0;
    let mut fp = 0;
    let mut fn_ = 0;
    for (p, r) in probas.iter().zip(reference) {
        let pred = u8::from(*p > threshold);
        match (pred, r) {
            (1, 1) => tp += 1,
            (1, 0) => fp += 1,
            (0, 1) => fn_ += 1,
            _ => {}
        }
    }
    prf_from_counts(tp, fp, fn_).f1
}

/// Exhaustive grid search for the binarization thresholds.
pub fn optimize_thresholds(
    probas: &[ValueProfile],
    reference: &[[u8; VALUE_COUNT]],
    mode: ThresholdMode,
) -> Result<ThresholdSet> {
    check_aligned(probas, reference)?;
    match mode {
        ThresholdMode::PerClass => {
            let mut thresholds = Vec::with_capacity(VALUE_COUNT);
            let mut defaulted = Vec::new();
            for value in ValueType::ALL {
                let v = value.circle_index();
                let column: Vec<f64> = probas.iter().map(|p| p.weights()[v]).collect();
                let refs: Vec<u8> = reference.iter().map(|r| r[v]).collect();
                if refs.iter().all(|r| *r == 0) {
                    thresholds.push(0.5);
                    defaulted.push(value);
                    continue;
                }
                let mut best_t = THRESHOLD_GRID_STEP;
                let mut best_f1 = f64::NEG_INFINITY;
                for t in grid() {
                    let f1 = f1_at(&column, &refs, t);
                    if f1 > best_f1 {
                        best_f1 = f1;
                        best_t = t;
                    }
                }
                thresholds.push(best_t);
            }
            Ok(ThresholdSet { mode, thresholds, defaulted })
        }
        ThresholdMode::Global => {
            let mut best_t = THRESHOLD_GRID_STEP;
            let mut best_f1 = f64::NEG_INFINITY;
            for t in grid() {
                let mut tp = 0;
                let mut fp = 0;
                let mut fn_ = 0;
                for (p, r) in probas.iter().zip(reference) {
                    for v in 0..VALUE_COUNT {
                        let pred = u8::from(p.weights()[v] > t);
                        match (pred, r[v]) {
                            (1, 1) => tp += 1,
                            (1, 0) => fp += 1,
                            (0, 1) => fn_ += 1,
                            _ => {}
                        }
                    }
                }
                let f1 = prf_from_counts(tp, fp, fn_).f1;
                if f1 > best_f1 {
                    best_f1 = f1;
                    best_t = t;
                }
            }
            Ok(ThresholdSet { mode, thresholds: vec![best_t], defaulted: Vec::new() })
        }
    }
}

/// Binarize probabilities: label 1 iff probability strictly exceeds the
/// value's threshold.
pub fn binarize(probas: &[ValueProfile], thresholds: &ThresholdSet) -> Result<Vec<[u8; VALUE_COUNT]>> {
    thresholds.validate()?;
    Ok(probas
        .iter()
        .map(|p| {
            let mut labels = [0u8; VALUE_COUNT];
            for value in ValueType::ALL {
                let v = value.circle_index();
                labels[v] = u8::from(p.weights()[v] > thresholds.threshold_for(value));
            }
            labels
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profiles(first_value: &[f64]) -> Vec<ValueProfile> {
        first_value
            .iter()
            .map(|p| {
                let mut w = [0.001; VALUE_COUNT];
                w[0] = *p;
                ValueProfile::new(w).unwrap()
            })
            .collect()
    }

    fn refs(first_value: &[u8]) -> Vec<[u8; VALUE_COUNT]> {
        first_value
            .iter()
            .map(|r| {
                let mut row = [0u8; VALUE_COUNT];
                row[0] = *r;
                row
            })
            .collect()
    }

    #[test]
    fn separable_fixture_picks_smallest_perfect_threshold() {
        // probabilities [0.9, 0.8, 0.2, 0.1] vs reference [1,1,0,0]: every
        // grid threshold in [0.20, 0.79] scores F1 = 1 under the strict >
        // rule (at t = 0.20 the 0.2 case is excluded), so the smallest
        // maximizer is 0.20.
        let probas = profiles(&[0.9, 0.8, 0.2, 0.1]);
        let reference = refs(&[1, 1, 0, 0]);
        let set = optimize_thresholds(&probas, &reference, ThresholdMode::PerClass).unwrap();
        assert!((set.thresholds[0] - 0.20).abs() < 1e-12);
        let column: Vec<f64> = probas.iter().map(|p| p.weights()[0]).collect();
        let refs0: Vec<u8> = reference.iter().map(|r| r[0]).collect();
        assert_eq!(f1_at(&column, &refs0, set.thresholds[0]), 1.0);
    }

    #[test]
    fn all_positive_reference_drives_threshold_to_the_floor() {
        let probas = profiles(&[0.9, 0.5, 0.3, 0.02]);
        let reference = refs(&[1, 1, 1, 1]);
        let set = optimize_thresholds(&probas, &reference, ThresholdMode::PerClass).unwrap();
        assert!((set.thresholds[0] - 0.01).abs() < 1e-12);
    }

    #[test]
    fn empty_reference_slice_defaults_to_half_and_is_flagged() {
        let probas = profiles(&[0.9, 0.1]);
        let reference = refs(&[0, 0]);
        let set = optimize_thresholds(&probas, &reference, ThresholdMode::PerClass).unwrap();
        assert!((set.thresholds[0] - 0.5).abs() < 1e-12);
        assert!(set.defaulted.contains(&ValueType::SelfDirection));
    }

    #[test]
    fn binarize_is_strict_at_the_threshold() {
        let probas = profiles(&[0.3]);
        let mut set = ThresholdSet::uniform(ThresholdMode::PerClass, 0.3).unwrap();
        let labels = binarize(&probas, &set).unwrap();
        assert_eq!(labels[0][0], 0); // equality stays negative
        set.thresholds[0] = 0.29;
        let labels = binarize(&probas, &set).unwrap();
        assert_eq!(labels[0][0], 1);
    }

    #[test]
    fn tiny_threshold_marks_everything_positive() {
        let probas = profiles(&[0.9, 0.5, 0.011]);
        let set = ThresholdSet::uniform(ThresholdMode::Global, 0.01).unwrap();
        let labels = binarize(&probas, &set).unwrap();
        assert!(labels.iter().all(|row| row[0] == 1));
    }

    #[test]
    fn binarize_positive_set_is_antitone_in_the_threshold() {
        let probas = profiles(&[0.9, 0.7, 0.5, 0.3, 0.1]);
        let low = ThresholdSet::uniform(ThresholdMode::Global, 0.2).unwrap();
        let high = ThresholdSet::uniform(ThresholdMode::Global, 0.6).unwrap();
        let low_labels = binarize(&probas, &low).unwrap();
        let high_labels = binarize(&probas, &high).unwrap();
        for (lo, hi) in low_labels.iter().zip(&high_labels) {
            for v in 0..VALUE_COUNT {
                assert!(hi[v] <= lo[v], "positives at a higher threshold must be a subset");
            }
        }
    }

    #[test]
    fn global_mode_returns_one_threshold() {
        let probas = profiles(&[0.9, 0.2]);
        let reference = refs(&[1, 0]);
        let set = optimize_thresholds(&probas, &reference, ThresholdMode::Global).unwrap();
        assert_eq!(set.thresholds.len(), 1);
        set.validate().unwrap();
    }

    #[test]
    fn thresholds_are_grid_aligned() {
        let probas = profiles(&[0.83, 0.62, 0.41, 0.13]);
        let reference = refs(&[1, 1, 0, 0]);
        let set = optimize_thresholds(&probas, &reference, ThresholdMode::PerClass).unwrap();
        for t in &set.thresholds {
            let steps = t / THRESHOLD_GRID_STEP;
            assert!((steps - steps.round()).abs() < 1e-9, "threshold {t} off grid");
        }
    }

    #[test]
    fn uniform_set_rejects_out_of_range_thresholds() {
        assert!(ThresholdSet::uniform(ThresholdMode::Global, 0.0).is_err());
        assert!(ThresholdSet::uniform(ThresholdMode::Global, 1.0).is_err());
    }
}
