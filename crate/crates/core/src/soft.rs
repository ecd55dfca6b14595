//! Aggregation of repeated binary annotations into majority votes,
//! consistency tiers, and three-level soft labels.
//!
//! The soft-label rule is defined for exactly five runs: four or five
//! positive runs map to 1.0 (strong agreement), exactly three to 0.6
//! (moderate agreement), two or fewer to 0.0. Labels are stored as exact
//! tags rather than vote averages, which would compress ambiguous cases
//! toward the center and blunt the contrast the classifier trains on.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::circle::ValueType;
use crate::error::{Error, Result};

/// Number of annotation runs the soft-label rule is defined for.
pub const SOFT_LABEL_RUNS: usize = 5;

/// Three-level soft label. The numeric values are fixed by the rule and
/// exposed through [`SoftLabel::value`]; the enum itself is the storage form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SoftLabel {
    /// 0–2 positive runs: no agreement (0.0).
    None,
    /// Exactly 3 positive runs: moderate agreement (0.6).
    Moderate,
    /// 4–5 positive runs: strong agreement (1.0).
    Strong,
}

impl SoftLabel {
    pub fn value(self) -> f64 {
        match self {
            SoftLabel::None => 0.0,
            SoftLabel::Moderate => 0.6,
            SoftLabel::Strong => 1.0,
        }
    }

    /// Parse the numeric form used in export files.
    pub fn from_value(v: f64) -> Result<Self> {
        if v == 0.0 {
            Ok(SoftLabel::None)
        } else if (v - 0.6).abs() < 1e-9 {
            Ok(SoftLabel::Moderate)
        } else if v == 1.0 {
            Ok(SoftLabel::Strong)
        } else {
            Err(Error::Input(format!("soft label must be one of 0.0/0.6/1.0, got {v}")))
        }
    }
}

impl fmt::Display for SoftLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.1}", self.value())
    }
}

/// Consistency tier of a 5-run annotation cell. Positive sets are nested:
/// unanimous ⊆ almost-unanimous ⊆ majority.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConsistencyTier {
    None,
    Majority,
    AlmostUnanimous,
    Unanimous,
}

impl ConsistencyTier {
    pub fn name(self) -> &'static str {
        match self {
            ConsistencyTier::None => "none",
            ConsistencyTier::Majority => "majority",
            ConsistencyTier::AlmostUnanimous => "almost_unanimous",
            ConsistencyTier::Unanimous => "unanimous",
        }
    }

    /// Minimum positive votes (out of 5) for tier membership.
    pub fn min_votes(self) -> u8 {
        match self {
            ConsistencyTier::None => 0,
            ConsistencyTier::Majority => 3,
            ConsistencyTier::AlmostUnanimous => 4,
            ConsistencyTier::Unanimous => 5,
        }
    }
}

fn check_binary(runs: &[u8]) -> Result<()> {
    if let Some(bad) = runs.iter().find(|r| **r > 1) {
        return Err(Error::Input(format!("run labels must be 0 or 1, got {bad}")));
    }
    Ok(())
}

/// Majority vote: 1 iff at least `quorum` of the runs are positive.
pub fn majority_label(runs: &[u8], quorum: usize) -> Result<u8> {
    if runs.is_empty() {
        return Err(Error::Input("majority vote over empty run list".into()));
    }
    if quorum == 0 || quorum > runs.len() {
        return Err(Error::Input(format!(
            "quorum must be in 1..={}, got {quorum}",
            runs.len()
        )));
    }
    check_binary(runs)?;
    let votes = runs.iter().filter(|r| **r == 1).count();
    Ok(u8::from(votes >= quorum))
}

fn five_runs(runs: &[u8]) -> Result<u8> {
    if runs.len() != SOFT_LABEL_RUNS {
        return Err(Error::Input(format!(
            "the soft-label rule is defined for exactly {SOFT_LABEL_RUNS} runs, got {}",
            runs.len()
        )));
    }
    check_binary(runs)?;
    Ok(runs.iter().filter(|r| **r == 1).count() as u8)
}

/// Aggregate exactly five binary runs into a soft label plus the vote count.
pub fn aggregate_soft(runs: &[u8]) -> Result<(SoftLabel, u8)> {
    let votes = five_runs(runs)?;
    let label = match votes {
        4 | 5 => SoftLabel::Strong,
        3 => SoftLabel::Moderate,
        _ => SoftLabel::None,
    };
    Ok((label, votes))
}

/// Consistency tier of exactly five binary runs.
pub fn consistency_tier(runs: &[u8]) -> Result<ConsistencyTier> {
    let votes = five_runs(runs)?;
    Ok(match votes {
        5 => ConsistencyTier::Unanimous,
        4 => ConsistencyTier::AlmostUnanimous,
        3 => ConsistencyTier::Majority,
        _ => ConsistencyTier::None,
    })
}

/// One aggregated cell: soft label plus its vote count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SoftCell {
    pub soft: SoftLabel,
    pub votes: u8,
}

/// Per-(post, value) soft labels. Missing cells are simply absent; they are
/// never imputed.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SoftLabelTable {
    cells: BTreeMap<(String, ValueType), SoftCell>,
}

/// Export/import record: `{post_id, value, soft, votes}` per line. Ingested
/// reference files may omit `votes`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SoftLabelRecord {
    pub post_id: String,
    pub value: ValueType,
    pub soft: f64,
    #[serde(default)]
    pub votes: u8,
}

/// Per-value shares of the three soft-label levels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LabelShares {
    pub share_strong: f64,
    pub share_moderate: f64,
    pub share_none: f64,
    pub cells: usize,
}

impl SoftLabelTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, post_id: impl Into<String>, value: ValueType, cell: SoftCell) {
        self.cells.insert((post_id.into(), value), cell);
    }

    pub fn get(&self, post_id: &str, value: ValueType) -> Option<SoftCell> {
        self.cells.get(&(post_id.to_string(), value)).copied()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(String, ValueType), &SoftCell)> {
        self.cells.iter()
    }

    /// Post ids present in the table, deduplicated, in sorted order.
    pub fn post_ids(&self) -> Vec<String> {
        let mut ids: Vec<String> = self.cells.keys().map(|(id, _)| id.clone()).collect();
        ids.dedup();
        ids
    }

    pub fn records(&self) -> Vec<SoftLabelRecord> {
        self.cells
            .iter()
            .map(|((post_id, value), cell)| SoftLabelRecord {
                post_id: post_id.clone(),
                value: *value,
                soft: cell.soft.value(),
                votes: cell.votes,
            })
            .collect()
    }

    pub fn from_records<I: IntoIterator<Item = SoftLabelRecord>>(records: I) -> Result<Self> {
        let mut table = Self::new();
        for r in records {
            let soft = SoftLabel::from_value(r.soft)?;
            table.insert(r.post_id, r.value, SoftCell { soft, votes: r.votes });
        }
        Ok(table)
    }

    /// Per-value shares of {1.0, 0.6, 0.0}. Values with no cells are absent
    /// from the map. Shares per value sum to 1 within 1e-12.
    pub fn label_distribution(&self) -> Result<BTreeMap<ValueType, LabelShares>> {
        if self.cells.is_empty() {
            return Err(Error::Input("label distribution over an empty table".into()));
        }
        let mut counts: BTreeMap<ValueType, [usize; 3]> = BTreeMap::new();
        for ((_, value), cell) in &self.cells {
            let slot = counts.entry(*value).or_insert([0; 3]);
            match cell.soft {
                SoftLabel::Strong => slot[0] += 1,
                SoftLabel::Moderate => slot[1] += 1,
                SoftLabel::None => slot[2] += 1,
            }
        }
        Ok(counts
            .into_iter()
            .map(|(value, [strong, moderate, none])| {
                let total = (strong + moderate + none) as f64;
                (
                    value,
                    LabelShares {
                        share_strong: strong as f64 / total,
                        share_moderate: moderate as f64 / total,
                        share_none: none as f64 / total,
                        cells: strong + moderate + none,
                    },
                )
            })
            .collect())
    }

    /// Binary reference labels: positive iff soft >= 0.6 (at least 3 of 5).
    pub fn binarized(&self) -> BTreeMap<(String, ValueType), u8> {
        self.cells
            .iter()
            .map(|(k, cell)| (k.clone(), u8::from(cell.soft != SoftLabel::None)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn majority_rule_two_of_three() {
        assert_eq!(majority_label(&[1, 1, 0], 2).unwrap(), 1);
        assert_eq!(majority_label(&[0, 0, 0], 1).unwrap(), 0);
        assert_eq!(majority_label(&[1, 0, 0, 0, 1], 3).unwrap(), 0);
    }

    #[test]
    fn majority_rejects_bad_input() {
        assert!(majority_label(&[], 1).is_err());
        assert!(majority_label(&[1, 0], 3).is_err());
        assert!(majority_label(&[1, 0], 0).is_err());
        assert!(majority_label(&[2, 0, 0], 1).is_err());
    }

    #[test]
    fn soft_rule_on_the_paper_cases() {
        assert_eq!(aggregate_soft(&[1, 1, 1, 1, 1]).unwrap(), (SoftLabel::Strong, 5));
        assert_eq!(aggregate_soft(&[1, 1, 1, 1, 0]).unwrap(), (SoftLabel::Strong, 4));
        assert_eq!(aggregate_soft(&[1, 1, 1, 0, 0]).unwrap(), (SoftLabel::Moderate, 3));
        assert_eq!(aggregate_soft(&[0, 1, 0, 0, 0]).unwrap(), (SoftLabel::None, 1));
    }

    #[test]
    fn soft_rule_requires_five_runs() {
        assert!(aggregate_soft(&[1, 1, 1]).is_err());
        assert!(aggregate_soft(&[1, 1, 1, 1, 1, 1]).is_err());
    }

    #[test]
    fn tiers_from_five_runs() {
        assert_eq!(consistency_tier(&[1, 1, 1, 1, 1]).unwrap(), ConsistencyTier::Unanimous);
        assert_eq!(consistency_tier(&[1, 1, 1, 1, 0]).unwrap(), ConsistencyTier::AlmostUnanimous);
        assert_eq!(consistency_tier(&[1, 1, 1, 0, 0]).unwrap(), ConsistencyTier::Majority);
        assert_eq!(consistency_tier(&[1, 1, 0, 0, 0]).unwrap(), ConsistencyTier::None);
    }

    #[test]
    fn soft_zero_iff_majority_zero() {
        // the 0.0 level coincides with failing the 3-of-5 majority
        for bits in 0u8..32 {
            let runs: Vec<u8> = (0..5).map(|i| (bits >> i) & 1).collect();
            let (soft, _) = aggregate_soft(&runs).unwrap();
            let maj = majority_label(&runs, 3).unwrap();
            assert_eq!(soft == SoftLabel::None, maj == 0, "runs={runs:?}");
        }
    }

    #[test]
    fn distribution_matches_direct_counts() {
        let mut table = SoftLabelTable::new();
        // 10 posts, one value: 4 strong, 1 moderate, 5 none
        for i in 0..10 {
            let soft = if i < 4 {
                SoftLabel::Strong
            } else if i < 5 {
                SoftLabel::Moderate
            } else {
                SoftLabel::None
            };
            table.insert(format!("p{i:02}"), ValueType::Hedonism, SoftCell { soft, votes: 0 });
        }
        let dist = table.label_distribution().unwrap();
        let shares = dist[&ValueType::Hedonism];
        assert!((shares.share_strong - 0.4).abs() < 1e-12);
        assert!((shares.share_moderate - 0.1).abs() < 1e-12);
        assert!((shares.share_none - 0.5).abs() < 1e-12);
        let sum = shares.share_strong + shares.share_moderate + shares.share_none;
        assert!((sum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn all_strong_table_has_unit_share() {
        let mut table = SoftLabelTable::new();
        for v in ValueType::ALL {
            table.insert("p1", v, SoftCell { soft: SoftLabel::Strong, votes: 5 });
        }
        for shares in table.label_distribution().unwrap().values() {
            assert_eq!(shares.share_strong, 1.0);
            assert_eq!(shares.share_moderate, 0.0);
            assert_eq!(shares.share_none, 0.0);
        }
    }

    #[test]
    fn empty_table_distribution_errors() {
        assert!(SoftLabelTable::new().label_distribution().is_err());
    }

    #[test]
    fn soft_records_round_trip() {
        let mut table = SoftLabelTable::new();
        table.insert("a", ValueType::Power, SoftCell { soft: SoftLabel::Moderate, votes: 3 });
        table.insert("b", ValueType::Power, SoftCell { soft: SoftLabel::None, votes: 1 });
        let back = SoftLabelTable::from_records(table.records()).unwrap();
        assert_eq!(table, back);
    }
}
