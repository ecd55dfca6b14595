//! Inter-rater and cross-source agreement statistics: Fleiss' kappa, one-way
//! intraclass correlation, precision/recall/F1, consistency-tier comparison,
//! the expert-level vs annotation-vote association, and rank correlations.
//!
//! Degenerate statistics (chance agreement of 1, zero variance, constant
//! vectors) are signaled as errors, never silently returned as 0.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::annotate::AnnotationMatrix;
use crate::circle::ValueType;
use crate::error::{Error, Result};
use crate::soft::ConsistencyTier;

// ---------------------------------------------------------------------------
// Fleiss' kappa
// ---------------------------------------------------------------------------

/// Items-by-categories count matrix with a constant row sum (the number of
/// raters).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatingTable {
    counts: Vec<Vec<u32>>,
    raters: u32,
}

impl RatingTable {
    pub fn new(counts: Vec<Vec<u32>>) -> Result<Self> {
        if counts.len() < 2 {
            return Err(Error::Input("rating table needs at least 2 items".into()));
        }
        let categories = counts[0].len();
        if categories < 2 {
            return Err(Error::Input("rating table needs at least 2 categories".into()));
        }
        let raters: u32 = counts[0].iter().sum();
        if raters < 2 {
            return Err(Error::Input("rating table needs at least 2 raters".into()));
        }
        for (i, row) in counts.iter().enumerate() {
            if row.len() != categories {
                return Err(Error::Shape(format!(
                    "row {i} has {} categories, expected {categories}",
                    row.len()
                )));
            }
            let sum: u32 = row.iter().sum();
            if sum != raters {
                return Err(Error::Input(format!(
                    "row {i} sums to {sum}, expected the constant rater count {raters}"
                )));
            }
        }
        Ok(Self { counts, raters })
    }

    /// Binary table from per-item positive-vote counts.
    pub fn from_binary_votes(votes: &[u32], raters: u32) -> Result<Self> {
        let counts = votes
            .iter()
            .map(|v| {
                if *v > raters {
                    Err(Error::Input(format!("{v} positive votes with only {raters} raters")))
                } else {
                    Ok(vec![*v, raters - *v])
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(counts)
    }

    pub fn items(&self) -> usize {
        self.counts.len()
    }

    pub fn categories(&self) -> usize {
        self.counts[0].len()
    }

    pub fn raters(&self) -> u32 {
        self.raters
    }

    pub fn counts(&self) -> &[Vec<u32>] {
        &self.counts
    }
}

/// Fleiss' kappa: (P̄ − P̄ₑ) / (1 − P̄ₑ) with per-item agreement
/// Pᵢ = (Σⱼ nᵢⱼ² − r) / (r(r−1)).
///
/// Errors when every rating falls in one category (chance agreement 1).
pub fn fleiss_kappa(table: &RatingTable) -> Result<f64> {
    let n = table.items() as f64;
    let r = f64::from(table.raters());

    let mut p_bar = 0.0;
    let mut category_totals = vec![0.0; table.categories()];
    for row in table.counts() {
        let mut sq = 0.0;
        for (j, count) in row.iter().enumerate() {
            let c = f64::from(*count);
            sq += c * c;
            category_totals[j] += c;
        }
        p_bar += (sq - r) / (r * (r - 1.0));
    }
    p_bar /= n;

    let total = n * r;
    let p_e: f64 = category_totals.iter().map(|t| (t / total) * (t / total)).sum();
    if 1.0 - p_e < 1e-12 {
        return Err(Error::Undefined(
            "Fleiss kappa: all ratings in a single category (chance agreement = 1)".into(),
        ));
    }
    Ok((p_bar - p_e) / (1.0 - p_e))
}

/// Reporting band for a kappa value; the substantial-agreement boundary sits
/// at 0.60.
pub fn interpret_kappa(kappa: f64) -> &'static str {
    if kappa > 0.60 {
        "substantial"
    } else if kappa > 0.40 {
        "moderate"
    } else if kappa >= 0.0 {
        "weak"
    } else {
        "poor"
    }
}

// ---------------------------------------------------------------------------
// One-way ICC
// ---------------------------------------------------------------------------

/// Items-by-raters score matrix with no missing entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreTable {
    scores: Vec<Vec<f64>>,
}

impl ScoreTable {
    pub fn new(scores: Vec<Vec<f64>>) -> Result<Self> {
        if scores.len() < 2 {
            return Err(Error::Input("score table needs at least 2 items".into()));
        }
        let raters = scores[0].len();
        if raters < 2 {
            return Err(Error::Input("score table needs at least 2 raters".into()));
        }
        for (i, row) in scores.iter().enumerate() {
            if row.len() != raters {
                return Err(Error::Shape(format!(
                    "row {i} has {} raters, expected {raters}",
                    row.len()
                )));
            }
            if row.iter().any(|s| !s.is_finite()) {
                return Err(Error::Input(format!("row {i} contains a non-finite score")));
            }
        }
        Ok(Self { scores })
    }

    pub fn items(&self) -> usize {
        self.scores.len()
    }

    pub fn raters(&self) -> usize {
        self.scores[0].len()
    }

    pub fn scores(&self) -> &[Vec<f64>] {
        &self.scores
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IccEstimate {
    /// ICC(1,1): reliability of a single measurement.
    pub single: f64,
    /// ICC(1,k): reliability of the mean of k measurements (Spearman–Brown);
    /// `None` when its denominator degenerates.
    pub average: Option<f64>,
    pub k: usize,
}

/// One-way random-effects intraclass correlation.
///
/// ICC(1,1) = (MSB − MSW) / (MSB + (k₀−1)·MSW) from the one-way ANOVA with
/// k₀ raters per item; ICC(1,k) follows by Spearman–Brown and reduces to
/// (MSB − MSW)/MSB when k equals k₀.
pub fn icc_oneway(table: &ScoreTable, k: usize) -> Result<IccEstimate> {
    if k < 1 {
        return Err(Error::Input("k must be >= 1".into()));
    }
    let n = table.items() as f64;
    let k0 = table.raters() as f64;

    let grand: f64 = table.scores().iter().flatten().sum::<f64>() / (n * k0);
    let row_means: Vec<f64> =
        table.scores().iter().map(|row| row.iter().sum::<f64>() / k0).collect();

    let ssb: f64 = row_means.iter().map(|m| k0 * (m - grand) * (m - grand)).sum();
    let ssw: f64 = table
        .scores()
        .iter()
        .zip(&row_means)
        .map(|(row, m)| row.iter().map(|s| (s - m) * (s - m)).sum::<f64>())
        .sum();

    if ssb + ssw < 1e-12 {
        return Err(Error::Undefined("ICC: zero total variance".into()));
    }

    let msb = ssb / (n - 1.0);
    let msw = ssw / (n * (k0 - 1.0));

    let single = (msb - msw) / (msb + (k0 - 1.0) * msw);
    let denom = 1.0 + (k as f64 - 1.0) * single;
    let average = if denom.abs() < 1e-12 { None } else { Some(k as f64 * single / denom) };

    Ok(IccEstimate { single, average, k })
}

/// Reporting band for an ICC value: below 0.5 poor, 0.5–0.75 moderate,
/// above 0.75 good.
pub fn interpret_icc(icc: f64) -> &'static str {
    if icc < 0.5 {
        "poor"
    } else if icc <= 0.75 {
        "moderate"
    } else {
        "good"
    }
}

// ---------------------------------------------------------------------------
// Precision / recall / F1
// ---------------------------------------------------------------------------

/// Aligned binary prediction/reference vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryComparison {
    predicted: Vec<u8>,
    reference: Vec<u8>,
}

impl BinaryComparison {
    pub fn new(predicted: Vec<u8>, reference: Vec<u8>) -> Result<Self> {
        if predicted.is_empty() || predicted.len() != reference.len() {
            return Err(Error::Input(format!(
                "comparison needs equal nonempty vectors, got {} vs {}",
                predicted.len(),
                reference.len()
            )));
        }
        if predicted.iter().chain(&reference).any(|l| *l > 1) {
            return Err(Error::Input("labels must be 0 or 1".into()));
        }
        Ok(Self { predicted, reference })
    }

    pub fn len(&self) -> usize {
        self.predicted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.predicted.is_empty()
    }
}

/// Positive-class precision, recall, F1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Prf {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Metrics from raw confusion counts.
///
/// Zero-division convention: with no reference positives and no predicted
/// positives all three metrics are 1.0; a metric whose denominator is 0 while
/// the other side is nonempty is 0.0.
pub fn prf_from_counts(tp: usize, fp: usize, fn_: usize) -> Prf {
    if tp + fp + fn_ == 0 {
        return Prf { precision: 1.0, recall: 1.0, f1: 1.0 };
    }
    let precision = if tp + fp == 0 { 0.0 } else { tp as f64 / (tp + fp) as f64 };
    let recall = if tp + fn_ == 0 { 0.0 } else { tp as f64 / (tp + fn_) as f64 };
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    Prf { precision, recall, f1 }
}

/// Positive-class precision/recall/F1 over an aligned binary comparison.
pub fn prf1(cmp: &BinaryComparison) -> Prf {
    let mut tp = 0;
    let mut fp = 0;
    let mut fn_ = 0;
    for (p, r) in cmp.predicted.iter().zip(&cmp.reference) {
        match (p, r) {
            (1, 1) => tp += 1,
            (1, 0) => fp += 1,
            (0, 1) => fn_ += 1,
            _ => {}
        }
    }
    prf_from_counts(tp, fp, fn_)
}

// ---------------------------------------------------------------------------
// Tier comparison
// ---------------------------------------------------------------------------

/// Tiers compared against the reference, in nesting order (loosest first).
pub const COMPARED_TIERS: [ConsistencyTier; 3] =
    [ConsistencyTier::Majority, ConsistencyTier::AlmostUnanimous, ConsistencyTier::Unanimous];

/// Per-value and mean P/R/F1 for each consistency tier.
#[derive(Debug, Clone, PartialEq)]
pub struct TierComparison {
    /// Metrics per value, indexed like [`COMPARED_TIERS`].
    pub per_value: BTreeMap<ValueType, [Prf; 3]>,
    /// Arithmetic mean across the values present.
    pub mean: [Prf; 3],
}

fn aligned_cell_keys(
    matrix: &AnnotationMatrix,
    reference: &BTreeMap<(String, ValueType), u8>,
) -> Result<Vec<(String, ValueType)>> {
    let matrix_keys: Vec<(String, ValueType)> = matrix.iter().map(|(k, _)| k.clone()).collect();
    let missing: Vec<String> = reference
        .keys()
        .filter(|k| matrix.runs(&k.0, k.1).is_none())
        .map(|k| format!("{}/{}", k.0, k.1))
        .collect();
    let extra: Vec<String> = matrix_keys
        .iter()
        .filter(|k| !reference.contains_key(*k))
        .map(|k| format!("{}/{}", k.0, k.1))
        .collect();
    if !missing.is_empty() || !extra.is_empty() {
        return Err(Error::Alignment(format!(
            "reference-only cells: {missing:?}; matrix-only cells: {extra:?}"
        )));
    }
    let incomplete: Vec<String> = matrix_keys
        .iter()
        .filter(|k| matrix.complete_runs(&k.0, k.1).is_none())
        .map(|k| format!("{}/{}", k.0, k.1))
        .collect();
    if !incomplete.is_empty() {
        return Err(Error::Input(format!("incomplete annotation cells: {incomplete:?}")));
    }
    Ok(matrix_keys)
}

/// Compare tier-membership predictions against a binary reference labeling,
/// per value, for all three consistency tiers.
///
/// The matrix and the reference must cover exactly the same (post, value)
/// cells, and every matrix cell must be complete.
pub fn tier_comparison(
    matrix: &AnnotationMatrix,
    reference: &BTreeMap<(String, ValueType), u8>,
) -> Result<TierComparison> {
    if matrix.runs_per_cell() != 5 {
        return Err(Error::Input(format!(
            "tier comparison is defined for 5-run matrices, got {}",
            matrix.runs_per_cell()
        )));
    }
    let keys = aligned_cell_keys(matrix, reference)?;

    let mut per_value = BTreeMap::new();
    for value in ValueType::ALL {
        let cells: Vec<&(String, ValueType)> = keys.iter().filter(|k| k.1 == value).collect();
        if cells.is_empty() {
            continue;
        }
        let refs: Vec<u8> = cells.iter().map(|k| reference[*k]).collect();
        let mut metrics = [Prf { precision: 0.0, recall: 0.0, f1: 0.0 }; 3];
        for (t, tier) in COMPARED_TIERS.iter().enumerate() {
            let preds: Vec<u8> = cells
                .iter()
                .map(|k| u8::from(matrix.votes(&k.0, k.1).unwrap() >= tier.min_votes()))
                .collect();
            metrics[t] = prf1(&BinaryComparison::new(preds, refs.clone())?);
        }
        per_value.insert(value, metrics);
    }
    if per_value.is_empty() {
        return Err(Error::Input("no cells to compare".into()));
    }

    let n = per_value.len() as f64;
    let mut mean = [Prf { precision: 0.0, recall: 0.0, f1: 0.0 }; 3];
    for metrics in per_value.values() {
        for t in 0..3 {
            mean[t].precision += metrics[t].precision / n;
            mean[t].recall += metrics[t].recall / n;
            mean[t].f1 += metrics[t].f1 / n;
        }
    }
    Ok(TierComparison { per_value, mean })
}

// ---------------------------------------------------------------------------
// Expert agreement level vs annotation votes
// ---------------------------------------------------------------------------

/// Association between expert agreement level (0..=3 experts) and internal
/// annotation agreement (mean positive runs out of 5).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VoteAssociation {
    /// Mean positive annotation runs at each expert level; `None` marks an
    /// absent level (no cells), never zero.
    pub mean_votes: [Option<f64>; 4],
    pub cells: [usize; 4],
    /// Spearman rho between expert level and annotation votes over all cells;
    /// `None` when undefined (a constant side).
    pub rho: Option<f64>,
}

/// Group cells by the number of experts voting positive and average the
/// annotation votes within each group.
pub fn expert_level_vs_votes(
    matrix: &AnnotationMatrix,
    expert_votes: &BTreeMap<(String, ValueType), u8>,
) -> Result<VoteAssociation> {
    let keys = aligned_cell_keys(matrix, expert_votes)?;

    let mut sums = [0.0f64; 4];
    let mut cells = [0usize; 4];
    let mut levels = Vec::with_capacity(keys.len());
    let mut votes = Vec::with_capacity(keys.len());
    for key in &keys {
        let level = expert_votes[key];
        if level > 3 {
            return Err(Error::Input(format!(
                "expert level must be 0..=3, got {level} for {}/{}",
                key.0, key.1
            )));
        }
        let v = f64::from(matrix.votes(&key.0, key.1).unwrap());
        sums[level as usize] += v;
        cells[level as usize] += 1;
        levels.push(f64::from(level));
        votes.push(v);
    }

    let mut mean_votes = [None; 4];
    for level in 0..4 {
        if cells[level] > 0 {
            mean_votes[level] = Some(sums[level] / cells[level] as f64);
        }
    }
    let rho = if levels.len() >= 3 { spearman(&levels, &votes).ok() } else { None };
    Ok(VoteAssociation { mean_votes, cells, rho })
}

// ---------------------------------------------------------------------------
// Rank correlations
// ---------------------------------------------------------------------------

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Pearson correlation; errors when either vector is constant.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::Input(format!(
            "pearson needs equal vectors of length >= 2, got {} and {}",
            x.len(),
            y.len()
        )));
    }
    let mx = mean(x);
    let my = mean(y);
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in x.iter().zip(y) {
        let dx = a - mx;
        let dy = b - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::Undefined("correlation of a constant vector".into()));
    }
    Ok(sxy / (sxx * syy).sqrt())
}

/// Average ranks (ties share the mean of their rank positions), 1-based.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|a, b| values[*a].partial_cmp(&values[*b]).unwrap());
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = rank;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman rank correlation: Pearson over average ranks.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() < 3 {
        return Err(Error::Input(format!(
            "spearman needs equal vectors of length >= 3, got {} and {}",
            x.len(),
            y.len()
        )));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::Input("spearman input contains a non-finite value".into()));
    }
    pearson(&average_ranks(x), &average_ranks(y))
}

/// Kendall tau-b (tie-corrected):
/// (C − D) / sqrt((n₀ − n₁)(n₀ − n₂)) with n₀ = n(n−1)/2 and n₁, n₂ the
/// tied-pair counts in x and y.
pub fn kendall_tau(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() < 3 {
        return Err(Error::Input(format!(
            "kendall tau needs equal vectors of length >= 3, got {} and {}",
            x.len(),
            y.len()
        )));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::Input("kendall tau input contains a non-finite value".into()));
    }
    let n = x.len();
    let mut concordant = 0u64;
    let mut discordant = 0u64;
    let mut ties_x = 0u64;
    let mut ties_y = 0u64;
    for i in 0..n {
        for j in (i + 1)..n {
            let dx = x[i] - x[j];
            let dy = y[i] - y[j];
            if dx == 0.0 {
                ties_x += 1;
            }
            if dy == 0.0 {
                ties_y += 1;
            }
            if dx == 0.0 || dy == 0.0 {
                continue;
            }
            if (dx > 0.0) == (dy > 0.0) {
                concordant += 1;
            } else {
                discordant += 1;
            }
        }
    }
    let n0 = (n * (n - 1) / 2) as u64;
    if n0 == ties_x || n0 == ties_y {
        return Err(Error::Undefined("kendall tau of an all-tied vector".into()));
    }
    let denom = (((n0 - ties_x) as f64) * ((n0 - ties_y) as f64)).sqrt();
    Ok((concordant as f64 - discordant as f64) / denom)
}
