//! CSV report emitters.
//!
//! Every emitter returns the full file contents as a `String`, so output is
//! deterministic and trivially testable. Column layouts follow the reporting
//! conventions of the pipeline: value rows, metric columns, and a trailing
//! mean row where a table aggregates across values.

use std::collections::BTreeMap;

use crate::agreement::{IccEstimate, TierComparison, VoteAssociation, COMPARED_TIERS};
use crate::circle::{DiscrepancyMatrix, ValueDomain, ValueType};
use crate::classifier::{EvaluationReport, ValuePrevalence};
use crate::corpus::FilterSummary;
use crate::error::Result;
use crate::soft::LabelShares;
use crate::structure::{Config2, CorrelationMatrix};

fn writer() -> csv::Writer<Vec<u8>> {
    csv::Writer::from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| crate::error::Error::Input(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| crate::error::Error::Input(e.to_string()))
}

fn fmt(x: f64) -> String {
    format!("{x:.6}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt).unwrap_or_default()
}

/// Interrater-agreement table: one row per value, kappa per source.
pub fn kappa_csv(rows: &BTreeMap<ValueType, (Option<f64>, Option<f64>)>) -> Result<String> {
    let mut w = writer();
    w.write_record(["value", "kappa_gpt", "kappa_experts"])?;
    let mut sums = (0.0, 0usize, 0.0, 0usize);
    for (value, (gpt, experts)) in rows {
        w.write_record([value.name(), &fmt_opt(*gpt), &fmt_opt(*experts)])?;
        if let Some(g) = gpt {
            sums.0 += g;
            sums.1 += 1;
        }
        if let Some(e) = experts {
            sums.2 += e;
            sums.3 += 1;
        }
    }
    let mean_gpt = (sums.1 > 0).then(|| sums.0 / sums.1 as f64);
    let mean_exp = (sums.3 > 0).then(|| sums.2 / sums.3 as f64);
    w.write_record(["Mean", &fmt_opt(mean_gpt), &fmt_opt(mean_exp)])?;
    finish(w)
}

/// Tier-comparison table: P/R/F1 per consistency tier, one row per value
/// plus a mean row.
pub fn tier_csv(comparison: &TierComparison) -> Result<String> {
    let mut w = writer();
    let mut header = vec!["value".to_string()];
    for tier in COMPARED_TIERS {
        for metric in ["precision", "recall", "f1"] {
            header.push(format!("{}_{metric}", tier.name()));
        }
    }
    w.write_record(&header)?;
    let row_of = |label: &str, metrics: &[crate::agreement::Prf; 3]| -> Vec<String> {
        let mut row = vec![label.to_string()];
        for prf in metrics {
            row.push(fmt(prf.precision));
            row.push(fmt(prf.recall));
            row.push(fmt(prf.f1));
        }
        row
    };
    for (value, metrics) in &comparison.per_value {
        let row = row_of(value.name(), metrics);
        w.write_record(&row)?;
    }
    let mean_row = row_of("Mean", &comparison.mean);
    w.write_record(&mean_row)?;
    finish(w)
}

/// Value-level consistency/agreement table: kappa and F1 per value.
pub fn value_agreement_csv(rows: &BTreeMap<ValueType, (Option<f64>, f64)>) -> Result<String> {
    let mut w = writer();
    w.write_record(["value", "fleiss_kappa_experts", "f1_score"])?;
    for (value, (kappa, f1)) in rows {
        w.write_record([value.name(), &fmt_opt(*kappa), &fmt(*f1)])?;
    }
    finish(w)
}

/// Domain-level consistency/agreement table: kappa and F1 per domain.
pub fn domain_agreement_csv(rows: &BTreeMap<ValueDomain, (Option<f64>, f64)>) -> Result<String> {
    let mut w = writer();
    w.write_record(["domain", "fleiss_kappa_experts", "f1_score"])?;
    for (domain, (kappa, f1)) in rows {
        w.write_record([domain.name(), &fmt_opt(*kappa), &fmt(*f1)])?;
    }
    finish(w)
}

/// Critical-discrepancy table: expert domain (with base count), predicted
/// domain, count, percent of the base.
pub fn discrepancy_csv(matrix: &DiscrepancyMatrix) -> Result<String> {
    let mut w = writer();
    w.write_record(["expert_domain", "expert_n", "predicted_domain", "count", "percent"])?;
    for expert in ValueDomain::ALL {
        for predicted in ValueDomain::ALL {
            if predicted == expert {
                continue;
            }
            w.write_record([
                expert.name(),
                &matrix.base(expert).to_string(),
                predicted.name(),
                &matrix.count(expert, predicted).to_string(),
                &matrix
                    .percent(expert, predicted)
                    .map(|p| format!("{p:.1}"))
                    .unwrap_or_default(),
            ])?;
        }
    }
    finish(w)
}

/// Mean annotation votes per expert agreement level, plus the rank
/// correlation between the two vote counts.
pub fn vote_association_csv(assoc: &VoteAssociation) -> Result<String> {
    let mut w = writer();
    w.write_record(["expert_level", "cells", "mean_gpt_votes", "spearman_rho"])?;
    for level in 0..4 {
        w.write_record([
            level.to_string(),
            assoc.cells[level].to_string(),
            fmt_opt(assoc.mean_votes[level]),
            if level == 0 { fmt_opt(assoc.rho) } else { String::new() },
        ])?;
    }
    finish(w)
}

/// Per-value ICC table plus an overall row.
pub fn icc_csv(
    rows: &BTreeMap<ValueType, IccEstimate>,
    overall: Option<&IccEstimate>,
) -> Result<String> {
    let mut w = writer();
    w.write_record(["value", "icc_single", "icc_average", "k"])?;
    for (value, icc) in rows {
        w.write_record([
            value.name(),
            &fmt(icc.single),
            &fmt_opt(icc.average),
            &icc.k.to_string(),
        ])?;
    }
    if let Some(icc) = overall {
        w.write_record(["Overall", &fmt(icc.single), &fmt_opt(icc.average), &icc.k.to_string()])?;
    }
    finish(w)
}

/// Soft-label distribution table: shares of 1.0 / 0.6 / 0.0 per value.
pub fn distribution_csv(rows: &BTreeMap<ValueType, LabelShares>) -> Result<String> {
    let mut w = writer();
    w.write_record(["value", "share_1.0", "share_0.6", "share_0.0"])?;
    for (value, shares) in rows {
        w.write_record([
            value.name(),
            &fmt(shares.share_strong),
            &fmt(shares.share_moderate),
            &fmt(shares.share_none),
        ])?;
    }
    finish(w)
}

/// Prevalence table: probability statistics and the share above threshold.
pub fn prevalence_csv(rows: &BTreeMap<ValueType, ValuePrevalence>) -> Result<String> {
    let mut w = writer();
    w.write_record(["value", "mean", "sd", "median", "q1", "q3", "share_above_threshold_pct"])?;
    for (value, p) in rows {
        w.write_record([
            value.name(),
            &fmt(p.mean),
            &fmt(p.sd),
            &fmt(p.median),
            &fmt(p.q1),
            &fmt(p.q3),
            &format!("{:.1}", p.share_pct),
        ])?;
    }
    finish(w)
}

/// Per-value evaluation metrics.
pub fn evaluation_per_value_csv(report: &EvaluationReport) -> Result<String> {
    let mut w = writer();
    w.write_record(["value", "precision", "recall", "f1", "macro_f1"])?;
    for (value, m) in &report.per_value {
        w.write_record([
            value.name(),
            &fmt(m.precision),
            &fmt(m.recall),
            &fmt(m.f1),
            &fmt(m.macro_f1),
        ])?;
    }
    finish(w)
}

/// Overall evaluation metrics with both F1 poolings labeled explicitly.
pub fn evaluation_summary_csv(report: &EvaluationReport) -> Result<String> {
    let mut w = writer();
    w.write_record(["metric", "score"])?;
    w.write_record(["micro_f1", &fmt(report.micro_f1)])?;
    w.write_record(["mean_f1", &fmt(report.mean_f1)])?;
    w.write_record(["macro_f1", &fmt(report.macro_f1)])?;
    if let Some(thresholds) = &report.thresholds {
        let joined = thresholds
            .thresholds
            .iter()
            .map(|t| format!("{t:.2}"))
            .collect::<Vec<_>>()
            .join(" ");
        let mode = match thresholds.mode {
            crate::classifier::ThresholdMode::Global => "global",
            crate::classifier::ThresholdMode::PerClass => "per_class",
        };
        w.write_record(["threshold_mode", mode])?;
        w.write_record(["thresholds", &joined])?;
    }
    finish(w)
}

/// Theoretical circle coordinates.
pub fn coordinates_csv(coordinates: &[(ValueType, f64, f64)]) -> Result<String> {
    let mut w = writer();
    w.write_record(["value", "x", "y"])?;
    for (value, x, y) in coordinates {
        w.write_record([value.name(), &fmt(*x), &fmt(*y)])?;
    }
    finish(w)
}

/// Empirical vs theoretical configurations, one row per value.
pub fn structure_coordinates_csv(aligned: &Config2, theory: &Config2) -> Result<String> {
    let mut w = writer();
    w.write_record(["value", "x_emp", "y_emp", "x_theory", "y_theory"])?;
    for (i, value) in ValueType::ALL.iter().enumerate() {
        w.write_record([
            value.name(),
            &fmt(aligned[i][0]),
            &fmt(aligned[i][1]),
            &fmt(theory[i][0]),
            &fmt(theory[i][1]),
        ])?;
    }
    finish(w)
}

/// Full 10×10 correlation matrix with value-name row and column labels.
pub fn correlation_csv(matrix: &CorrelationMatrix) -> Result<String> {
    let mut w = writer();
    let mut header = vec!["value".to_string()];
    header.extend(ValueType::ALL.iter().map(|v| v.name().to_string()));
    w.write_record(&header)?;
    for (i, value) in ValueType::ALL.iter().enumerate() {
        let mut row = vec![value.name().to_string()];
        row.extend(matrix.rows()[i].iter().map(|r| fmt(*r)));
        w.write_record(&row)?;
    }
    finish(w)
}

/// Post/user counts per filter stage.
pub fn filter_summary_csv(summary: &FilterSummary) -> Result<String> {
    let mut w = writer();
    w.write_record(["metric", "posts", "users"])?;
    w.write_record([
        "raw corpus",
        &summary.total_posts.to_string(),
        &summary.total_users.to_string(),
    ])?;
    w.write_record([
        "after language/length gate",
        &summary.gate_passed_posts.to_string(),
        &summary.gate_passed_users.to_string(),
    ])?;
    w.write_record([
        "after spam removal",
        &summary.after_spam_posts.to_string(),
        &summary.after_spam_users.to_string(),
    ])?;
    w.write_record([
        "political candidates",
        &summary.political_posts.to_string(),
        &summary.political_users.to_string(),
    ])?;
    finish(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agreement::Prf;

    fn header_of(csv_text: &str) -> Vec<String> {
        csv_text.lines().next().unwrap().split(',').map(str::to_string).collect()
    }

    #[test]
    fn tier_csv_layout() {
        let prf = Prf { precision: 0.5, recall: 1.0, f1: 2.0 / 3.0 };
        let comparison = TierComparison {
            per_value: [(ValueType::Tradition, [prf; 3])].into_iter().collect(),
            mean: [prf; 3],
        };
        let text = tier_csv(&comparison).unwrap();
        assert_eq!(
            header_of(&text),
            vec![
                "value",
                "majority_precision",
                "majority_recall",
                "majority_f1",
                "almost_unanimous_precision",
                "almost_unanimous_recall",
                "almost_unanimous_f1",
                "unanimous_precision",
                "unanimous_recall",
                "unanimous_f1"
            ]
        );
        assert!(text.lines().last().unwrap().starts_with("Mean,"));
    }

    #[test]
    fn distribution_csv_layout_and_row_format() {
        let rows: BTreeMap<ValueType, LabelShares> = [(
            ValueType::SelfDirection,
            LabelShares { share_strong: 0.247, share_moderate: 0.083, share_none: 0.670, cells: 1000 },
        )]
        .into_iter()
        .collect();
        let text = distribution_csv(&rows).unwrap();
        assert_eq!(header_of(&text), vec!["value", "share_1.0", "share_0.6", "share_0.0"]);
        let row = text.lines().nth(1).unwrap();
        assert!(row.starts_with("Self-Direction,0.247000,0.083000,0.670000"));
    }

    #[test]
    fn discrepancy_csv_has_twelve_direction_rows() {
        use std::collections::{BTreeMap as Map, BTreeSet};
        let expert: Map<String, BTreeSet<ValueDomain>> = [(
            "p".to_string(),
            [ValueDomain::Conservation].into_iter().collect(),
        )]
        .into_iter()
        .collect();
        let other: Map<String, BTreeSet<ValueDomain>> = [(
            "p".to_string(),
            [ValueDomain::OpennessToChange].into_iter().collect(),
        )]
        .into_iter()
        .collect();
        let matrix = crate::circle::critical_discrepancies(&expert, &other).unwrap();
        let text = discrepancy_csv(&matrix).unwrap();
        assert_eq!(
            header_of(&text),
            vec!["expert_domain", "expert_n", "predicted_domain", "count", "percent"]
        );
        assert_eq!(text.lines().count(), 1 + 12); // 4 domains x 3 others
    }

    #[test]
    fn prevalence_csv_layout() {
        let rows: BTreeMap<ValueType, ValuePrevalence> = [(
            ValueType::Power,
            ValuePrevalence { mean: 0.089, sd: 0.218, median: 0.009, q1: 0.004, q3: 0.035, share_pct: 7.7 },
        )]
        .into_iter()
        .collect();
        let text = prevalence_csv(&rows).unwrap();
        assert_eq!(
            header_of(&text),
            vec!["value", "mean", "sd", "median", "q1", "q3", "share_above_threshold_pct"]
        );
        assert!(text.contains("Power"));
        assert!(text.trim_end().ends_with("7.7"));
    }

    #[test]
    fn correlation_csv_is_square_with_labels() {
        let profiles = crate::structure::synthetic_circle_profiles(50, 3, 0.02);
        let matrix = crate::structure::correlation_matrix(&profiles).unwrap();
        let text = correlation_csv(&matrix).unwrap();
        let header = header_of(&text);
        assert_eq!(header.len(), 11);
        assert_eq!(header[1], "Self-Direction");
        assert_eq!(text.lines().count(), 11);
    }

    #[test]
    fn filter_summary_csv_layout() {
        let summary = FilterSummary {
            total_posts: 10,
            total_users: 5,
            gate_passed_posts: 8,
            gate_passed_users: 5,
            after_spam_posts: 6,
            after_spam_users: 4,
            political_posts: 2,
            political_users: 2,
        };
        let text = filter_summary_csv(&summary).unwrap();
        assert_eq!(header_of(&text), vec!["metric", "posts", "users"]);
        assert_eq!(text.lines().count(), 5);
    }
}
