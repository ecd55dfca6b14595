//! Evaluation reports and prevalence statistics.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::agreement::{prf_from_counts, Prf};
use crate::circle::{ValueProfile, ValueType, VALUE_COUNT};
use crate::classifier::thresholds::{binarize, ThresholdSet};
use crate::error::{Error, Result};

/// Per-value metrics: positive-class P/R/F1 plus the per-value macro-F1
/// (mean of the positive- and negative-class F1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValueMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub macro_f1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluationReport {
    pub per_value: BTreeMap<ValueType, ValueMetrics>,
    /// F1 of the confusion matrix pooled over all (post, value) cells.
    pub micro_f1: f64,
    /// Mean of the per-value positive-class F1 scores.
    pub mean_f1: f64,
    /// Mean of the per-value macro-F1 scores.
    pub macro_f1: f64,
    /// Thresholds used to binarize, when evaluation started from probabilities.
    pub thresholds: Option<ThresholdSet>,
    /// Share of positive predictions per value, in percent.
    pub prevalence_pct: BTreeMap<ValueType, f64>,
}

fn check_rows(predicted: &[[u8; VALUE_COUNT]], reference: &[[u8; VALUE_COUNT]]) -> Result<()> {
    if predicted.is_empty() || predicted.len() != reference.len() {
        return Err(Error::Input(format!(
            "need equal nonempty prediction/reference rows, got {} and {}",
            predicted.len(),
            reference.len()
        )));
    }
    if predicted.iter().chain(reference).flatten().any(|l| *l > 1) {
        return Err(Error::Input("labels must be 0 or 1".into()));
    }
    Ok(())
}

/// Evaluate binarized predictions against a binary reference.
pub fn evaluate_binary(
    predicted: &[[u8; VALUE_COUNT]],
    reference: &[[u8; VALUE_COUNT]],
    thresholds: Option<&ThresholdSet>,
) -> Result<EvaluationReport> {
    check_rows(predicted, reference)?;
    let n = predicted.len();

    let mut per_value = BTreeMap::new();
    let mut prevalence_pct = BTreeMap::new();
    let mut pooled = (0usize, 0usize, 0usize);
    for value in ValueType::ALL {
        let v = value.circle_index();
        let mut pos = (0usize, 0usize, 0usize); // tp, fp, fn
        let mut neg = (0usize, 0usize, 0usize);
        let mut predicted_positive = 0usize;
        for (p, r) in predicted.iter().zip(reference) {
            predicted_positive += usize::from(p[v] == 1);
            match (p[v], r[v]) {
                (1, 1) => {
                    pos.0 += 1;
                }
                (1, 0) => {
                    pos.1 += 1;
                    neg.2 += 1;
                }
                (0, 1) => {
                    pos.2 += 1;
                    neg.1 += 1;
                }
                _ => {
                    neg.0 += 1;
                }
            }
        }
        pooled.0 += pos.0;
        pooled.1 += pos.1;
        pooled.2 += pos.2;
        let prf: Prf = prf_from_counts(pos.0, pos.1, pos.2);
        let negative_f1 = prf_from_counts(neg.0, neg.1, neg.2).f1;
        per_value.insert(
            value,
            ValueMetrics {
                precision: prf.precision,
                recall: prf.recall,
                f1: prf.f1,
                macro_f1: 0.5 * (prf.f1 + negative_f1),
            },
        );
        prevalence_pct.insert(value, 100.0 * predicted_positive as f64 / n as f64);
    }

    let count = per_value.len() as f64;
    let mean_f1 = per_value.values().map(|m| m.f1).sum::<f64>() / count;
    let macro_f1 = per_value.values().map(|m| m.macro_f1).sum::<f64>() / count;
    let micro_f1 = prf_from_counts(pooled.0, pooled.1, pooled.2).f1;

    Ok(EvaluationReport {
        per_value,
        micro_f1,
        mean_f1,
        macro_f1,
        thresholds: thresholds.cloned(),
        prevalence_pct,
    })
}

/// Binarize probabilities with the thresholds, then evaluate.
pub fn evaluate(
    probas: &[ValueProfile],
    thresholds: &ThresholdSet,
    reference: &[[u8; VALUE_COUNT]],
) -> Result<EvaluationReport> {
    let predicted = binarize(probas, thresholds)?;
    evaluate_binary(&predicted, reference, Some(thresholds))
}

/// Descriptive statistics of one value's predicted probabilities plus the
/// share of posts above its threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValuePrevalence {
    pub mean: f64,
    pub sd: f64,
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    pub share_pct: f64,
}

fn quantile(sorted: &[f64], p: f64) -> f64 {
    // linear interpolation between closest ranks
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let frac = h - lo as f64;
    if lo + 1 < sorted.len() {
        sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
    } else {
        sorted[lo]
    }
}

/// Prevalence table: per-value probability statistics and binarized shares.
pub fn prevalence(
    probas: &[ValueProfile],
    binarized: &[[u8; VALUE_COUNT]],
) -> Result<BTreeMap<ValueType, ValuePrevalence>> {
    if probas.is_empty() || probas.len() != binarized.len() {
        return Err(Error::Input(format!(
            "need equal nonempty probability/label rows, got {} and {}",
            probas.len(),
            binarized.len()
        )));
    }
    let n = probas.len();
    let mut out = BTreeMap::new();
    for value in ValueType::ALL {
        let v = value.circle_index();
        let mut column: Vec<f64> = probas.iter().map(|p| p.weights()[v]).collect();
        let mean = column.iter().sum::<f64>() / n as f64;
        let sd = if n > 1 {
            (column.iter().map(|p| (p - mean) * (p - mean)).sum::<f64>() / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        column.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let positives = binarized.iter().filter(|row| row[v] == 1).count();
        out.insert(
            value,
            ValuePrevalence {
                mean,
                sd,
                median: quantile(&column, 0.5),
                q1: quantile(&column, 0.25),
                q3: quantile(&column, 0.75),
                share_pct: 100.0 * positives as f64 / n as f64,
            },
        );
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::thresholds::ThresholdMode;

    const TOL: f64 = 1e-12;

    fn rows(bits: &[(usize, &[u8])]) -> Vec<[u8; VALUE_COUNT]> {
        // bits: (value index, per-post labels)
        let n = bits[0].1.len();
        let mut out = vec![[0u8; VALUE_COUNT]; n];
        for (v, labels) in bits {
            for (i, l) in labels.iter().enumerate() {
                out[i][*v] = *l;
            }
        }
        out
    }

    #[test]
    fn identical_prediction_scores_one_everywhere() {
        let labels = rows(&[(0, &[1, 0, 1]), (3, &[0, 1, 1])]);
        let report = evaluate_binary(&labels, &labels, None).unwrap();
        assert!((report.micro_f1 - 1.0).abs() < TOL);
        assert!((report.macro_f1 - 1.0).abs() < TOL);
        for m in report.per_value.values() {
            assert!((m.f1 - 1.0).abs() < TOL);
            assert!((m.macro_f1 - 1.0).abs() < TOL);
        }
    }

    #[test]
    fn per_value_macro_f1_matches_the_flip_labels_oracle() {
        let predicted = rows(&[(2, &[1, 1, 0, 0, 1])]);
        let reference = rows(&[(2, &[1, 0, 0, 1, 1])]);
        let report = evaluate_binary(&predicted, &reference, None).unwrap();

        // flip both sides for value 2 and recompute the positive-class F1
        let flip = |rows: &[[u8; VALUE_COUNT]]| -> Vec<u8> {
            rows.iter().map(|r| 1 - r[2]).collect()
        };
        let fp: Vec<u8> = flip(&predicted);
        let fr: Vec<u8> = flip(&reference);
        let mut tp = 0;
        let mut fpos = 0;
        let mut fneg = 0;
        for (p, r) in fp.iter().zip(&fr) {
            match (p, r) {
                (1, 1) => tp += 1,
                (1, 0) => fpos += 1,
                (0, 1) => fneg += 1,
                _ => {}
            }
        }
        let negative_f1 = prf_from_counts(tp, fpos, fneg).f1;
        let value = ValueType::from_circle_index(2).unwrap();
        let expected = 0.5 * (report.per_value[&value].f1 + negative_f1);
        assert!((report.per_value[&value].macro_f1 - expected).abs() < TOL);
    }

    #[test]
    fn micro_f1_equals_pooled_confusion_f1() {
        let predicted = rows(&[(0, &[1, 1, 0]), (1, &[0, 1, 1]), (5, &[1, 0, 0])]);
        let reference = rows(&[(0, &[1, 0, 0]), (1, &[0, 1, 0]), (5, &[0, 0, 1])]);
        let report = evaluate_binary(&predicted, &reference, None).unwrap();

        let mut tp = 0;
        let mut fp = 0;
        let mut fn_ = 0;
        for (p, r) in predicted.iter().zip(&reference) {
            for v in 0..VALUE_COUNT {
                match (p[v], r[v]) {
                    (1, 1) => tp += 1,
                    (1, 0) => fp += 1,
                    (0, 1) => fn_ += 1,
                    _ => {}
                }
            }
        }
        assert!((report.micro_f1 - prf_from_counts(tp, fp, fn_).f1).abs() < TOL);
    }

    #[test]
    fn evaluate_from_probabilities_records_the_thresholds() {
        let probas: Vec<ValueProfile> = [0.9, 0.2]
            .iter()
            .map(|p| {
                let mut w = [0.05; VALUE_COUNT];
                w[0] = *p;
                ValueProfile::new(w).unwrap()
            })
            .collect();
        let reference = rows(&[(0, &[1, 0])]);
        let set = ThresholdSet::uniform(ThresholdMode::Global, 0.5).unwrap();
        let report = evaluate(&probas, &set, &reference).unwrap();
        assert_eq!(report.thresholds.as_ref().unwrap().thresholds, vec![0.5]);
        assert!((report.per_value[&ValueType::SelfDirection].f1 - 1.0).abs() < TOL);
    }

    #[test]
    fn all_positive_labels_give_full_prevalence() {
        let probas = vec![ValueProfile::new([0.9; VALUE_COUNT]).unwrap(); 4];
        let labels = vec![[1u8; VALUE_COUNT]; 4];
        let table = prevalence(&probas, &labels).unwrap();
        for p in table.values() {
            assert!((p.share_pct - 100.0).abs() < TOL);
        }
    }

    #[test]
    fn prevalence_shares_match_direct_counting() {
        let mut labels = vec![[0u8; VALUE_COUNT]; 10];
        for row in labels.iter_mut().take(3) {
            row[2] = 1;
        }
        let probas = vec![ValueProfile::new([0.5; VALUE_COUNT]).unwrap(); 10];
        let table = prevalence(&probas, &labels).unwrap();
        let value = ValueType::from_circle_index(2).unwrap();
        assert!((table[&value].share_pct - 30.0).abs() < TOL);
    }

    #[test]
    fn quantiles_interpolate_linearly() {
        let sorted = [1.0, 2.0, 3.0, 4.0];
        assert!((quantile(&sorted, 0.5) - 2.5).abs() < TOL);
        assert!((quantile(&sorted, 0.25) - 1.75).abs() < TOL);
        assert!((quantile(&sorted, 0.75) - 3.25).abs() < TOL);
        assert!((quantile(&sorted, 0.0) - 1.0).abs() < TOL);
        assert!((quantile(&sorted, 1.0) - 4.0).abs() < TOL);
    }
}
