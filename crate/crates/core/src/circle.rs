//! Schwartz value taxonomy and circle geometry.
//!
//! The ten value types sit at equal angular spacing on a circle of radius
//! 0.5, ordered `Self-Direction, Stimulation, Hedonism, Achievement, Power,
//! Security, Conformity, Tradition, Benevolence, Universalism` (the canonical
//! circular order; Conformity and Tradition are adjacent). A post's value
//! profile projects onto the disc as the weight-normalized mean of the ten
//! anchor coordinates, so distances between annotations become Euclidean
//! distances between projected points: 0 for identical profiles, ~0.309 for
//! adjacent single values, 1.0 for diametrically opposite ones.
//!
//! Orientation is a fixed convention: Self-Direction at the top, indices
//! proceeding clockwise. Distances and structure comparisons are invariant
//! to the convention; only plots depend on it.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub const VALUE_COUNT: usize = 10;
pub const DOMAIN_COUNT: usize = 4;

/// Circle radius used for all theoretical coordinates.
pub const CIRCLE_RADIUS: f64 = 0.5;

/// The ten basic value types, in circular order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ValueType {
    SelfDirection,
    Stimulation,
    Hedonism,
    Achievement,
    Power,
    Security,
    Conformity,
    Tradition,
    Benevolence,
    Universalism,
}

impl ValueType {
    pub const ALL: [ValueType; VALUE_COUNT] = [
        ValueType::SelfDirection,
        ValueType::Stimulation,
        ValueType::Hedonism,
        ValueType::Achievement,
        ValueType::Power,
        ValueType::Security,
        ValueType::Conformity,
        ValueType::Tradition,
        ValueType::Benevolence,
        ValueType::Universalism,
    ];

    /// Position on the circle, 0..=9 in the order of [`ValueType::ALL`].
    pub fn circle_index(self) -> usize {
        Self::ALL.iter().position(|v| *v == self).unwrap()
    }

    pub fn from_circle_index(index: usize) -> Option<ValueType> {
        Self::ALL.get(index).copied()
    }

    /// Canonical display name, used in all file formats and reports.
    pub fn name(self) -> &'static str {
        match self {
            ValueType::SelfDirection => "Self-Direction",
            ValueType::Stimulation => "Stimulation",
            ValueType::Hedonism => "Hedonism",
            ValueType::Achievement => "Achievement",
            ValueType::Power => "Power",
            ValueType::Security => "Security",
            ValueType::Conformity => "Conformity",
            ValueType::Tradition => "Tradition",
            ValueType::Benevolence => "Benevolence",
            ValueType::Universalism => "Universalism",
        }
    }

    /// Two-letter label used in plots and compact tables.
    pub fn abbrev(self) -> &'static str {
        match self {
            ValueType::SelfDirection => "SD",
            ValueType::Stimulation => "ST",
            ValueType::Hedonism => "HE",
            ValueType::Achievement => "AC",
            ValueType::Power => "PO",
            ValueType::Security => "SE",
            ValueType::Conformity => "CO",
            ValueType::Tradition => "TR",
            ValueType::Benevolence => "BE",
            ValueType::Universalism => "UN",
        }
    }

    /// Higher-order domain containing this value.
    pub fn domain(self) -> ValueDomain {
        match self {
            ValueType::SelfDirection | ValueType::Stimulation | ValueType::Hedonism => {
                ValueDomain::OpennessToChange
            }
            ValueType::Achievement | ValueType::Power => ValueDomain::SelfEnhancement,
            ValueType::Security | ValueType::Conformity | ValueType::Tradition => {
                ValueDomain::Conservation
            }
            ValueType::Benevolence | ValueType::Universalism => ValueDomain::SelfTranscendence,
        }
    }
}

impl fmt::Display for ValueType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ValueType {
    type Err = Error;

    /// Case-insensitive; accepts `-`, `_` and space interchangeably.
    fn from_str(s: &str) -> Result<Self> {
        let folded: String = s
            .chars()
            .filter(|c| c.is_alphanumeric())
            .flat_map(char::to_lowercase)
            .collect();
        for v in Self::ALL {
            let canon: String = v
                .name()
                .chars()
                .filter(|c| c.is_alphanumeric())
                .flat_map(char::to_lowercase)
                .collect();
            if folded == canon {
                return Ok(v);
            }
        }
        Err(Error::Input(format!("unknown value type `{s}`")))
    }
}

impl Serialize for ValueType {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for ValueType {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(D::Error::custom)
    }
}

/// The four higher-order value domains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ValueDomain {
    OpennessToChange,
    SelfEnhancement,
    Conservation,
    SelfTranscendence,
}

impl ValueDomain {
    pub const ALL: [ValueDomain; DOMAIN_COUNT] = [
        ValueDomain::OpennessToChange,
        ValueDomain::SelfEnhancement,
        ValueDomain::Conservation,
        ValueDomain::SelfTranscendence,
    ];

    pub fn index(self) -> usize {
        Self::ALL.iter().position(|d| *d == self).unwrap()
    }

    pub fn name(self) -> &'static str {
        match self {
            ValueDomain::OpennessToChange => "Openness to Change",
            ValueDomain::SelfEnhancement => "Self-Enhancement",
            ValueDomain::Conservation => "Conservation",
            ValueDomain::SelfTranscendence => "Self-Transcendence",
        }
    }

    /// Member values, in circular order.
    pub fn members(self) -> &'static [ValueType] {
        match self {
            ValueDomain::OpennessToChange => &[
                ValueType::SelfDirection,
                ValueType::Stimulation,
                ValueType::Hedonism,
            ],
            ValueDomain::SelfEnhancement => &[ValueType::Achievement, ValueType::Power],
            ValueDomain::Conservation => &[
                ValueType::Security,
                ValueType::Conformity,
                ValueType::Tradition,
            ],
            ValueDomain::SelfTranscendence => &[ValueType::Benevolence, ValueType::Universalism],
        }
    }
}

impl fmt::Display for ValueDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ValueDomain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let folded: String = s
            .chars()
            .filter(|c| c.is_alphanumeric())
            .flat_map(char::to_lowercase)
            .collect();
        for d in Self::ALL {
            let canon: String = d
                .name()
                .chars()
                .filter(|c| c.is_alphanumeric())
                .flat_map(char::to_lowercase)
                .collect();
            if folded == canon {
                return Ok(d);
            }
        }
        Err(Error::Input(format!("unknown value domain `{s}`")))
    }
}

impl Serialize for ValueDomain {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for ValueDomain {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(D::Error::custom)
    }
}

/// A point on (or inside) the value circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CirclePoint {
    pub x: f64,
    pub y: f64,
}

impl CirclePoint {
    pub fn norm(self) -> f64 {
        (self.x * self.x + self.y * self.y).sqrt()
    }
}

/// Ten nonnegative value scores for one post (binary labels or predicted
/// probabilities).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValueProfile {
    weights: [f64; VALUE_COUNT],
}

impl ValueProfile {
    pub fn new(weights: [f64; VALUE_COUNT]) -> Result<Self> {
        for (i, w) in weights.iter().enumerate() {
            if !w.is_finite() || *w < 0.0 {
                return Err(Error::Input(format!(
                    "profile weight for {} must be finite and >= 0, got {w}",
                    ValueType::ALL[i]
                )));
            }
        }
        Ok(Self { weights })
    }

    pub fn zeros() -> Self {
        Self { weights: [0.0; VALUE_COUNT] }
    }

    /// Binary profile with weight 1 on each listed value.
    pub fn from_positive<I: IntoIterator<Item = ValueType>>(values: I) -> Self {
        let mut weights = [0.0; VALUE_COUNT];
        for v in values {
            weights[v.circle_index()] = 1.0;
        }
        Self { weights }
    }

    pub fn weight(&self, value: ValueType) -> f64 {
        self.weights[value.circle_index()]
    }

    pub fn weights(&self) -> &[f64; VALUE_COUNT] {
        &self.weights
    }

    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.weights.iter().all(|w| *w == 0.0)
    }

    /// Values whose weight strictly exceeds `threshold`.
    pub fn positives(&self, threshold: f64) -> BTreeSet<ValueType> {
        ValueType::ALL
            .into_iter()
            .filter(|v| self.weight(*v) > threshold)
            .collect()
    }
}

/// Projection of a profile onto the circle, with the degenerate all-zero
/// case flagged instead of erroring.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Projection {
    pub point: CirclePoint,
    /// True when the profile was all-zero and the point is the neutral origin.
    pub neutral: bool,
}

/// Distance between two annotations of the same post.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnotationDistance {
    pub distance: f64,
    /// Both profiles were all-zero; the 0 distance is a convention, not a match.
    pub doubly_neutral: bool,
}

/// Anchor angle of value `k`: Self-Direction at the top, clockwise order.
fn anchor_angle(index: usize) -> f64 {
    PI / 2.0 - (index as f64) * (2.0 * PI / VALUE_COUNT as f64)
}

/// Theoretical coordinates of the ten values on the radius-0.5 circle.
pub fn theoretical_coordinates() -> [CirclePoint; VALUE_COUNT] {
    let mut coords = [CirclePoint { x: 0.0, y: 0.0 }; VALUE_COUNT];
    for (k, c) in coords.iter_mut().enumerate() {
        let theta = anchor_angle(k);
        c.x = CIRCLE_RADIUS * theta.cos();
        c.y = CIRCLE_RADIUS * theta.sin();
    }
    coords
}

/// Chord length between two anchors `steps` circle positions apart.
pub fn chord_length(steps: usize) -> f64 {
    // normalize to the shorter arc
    let s = steps % VALUE_COUNT;
    let s = s.min(VALUE_COUNT - s);
    2.0 * CIRCLE_RADIUS * (PI * s as f64 / VALUE_COUNT as f64).sin()
}

/// Project a value profile onto the circle: the weighted mean of the anchor
/// coordinates, weights normalized by their sum. An all-zero profile maps to
/// the origin and is flagged neutral.
pub fn project_profile(profile: &ValueProfile) -> Projection {
    let total = profile.total();
    if total == 0.0 {
        return Projection { point: CirclePoint { x: 0.0, y: 0.0 }, neutral: true };
    }
    let coords = theoretical_coordinates();
    let mut x = 0.0;
    let mut y = 0.0;
    for (k, w) in profile.weights().iter().enumerate() {
        x += w * coords[k].x;
        y += w * coords[k].y;
    }
    Projection { point: CirclePoint { x: x / total, y: y / total }, neutral: false }
}

/// Euclidean distance between two circle points.
pub fn value_distance(a: CirclePoint, b: CirclePoint) -> f64 {
    let dx = a.x - b.x;
    let dy = a.y - b.y;
    (dx * dx + dy * dy).sqrt()
}

/// Distance between two annotations of the same post, via their projections.
pub fn annotation_distance(a: &ValueProfile, b: &ValueProfile) -> AnnotationDistance {
    let pa = project_profile(a);
    let pb = project_profile(b);
    AnnotationDistance {
        distance: value_distance(pa.point, pb.point),
        doubly_neutral: pa.neutral && pb.neutral,
    }
}

/// Domains containing at least one positive value (binary aggregation).
pub fn domains_of(positive: &BTreeSet<ValueType>) -> BTreeSet<ValueDomain> {
    positive.iter().map(|v| v.domain()).collect()
}

/// Probabilistic domain aggregation: each domain scores the max over its
/// member values, keeping scores in [0, 1].
pub fn domain_scores(profile: &ValueProfile) -> [f64; DOMAIN_COUNT] {
    let mut scores = [0.0; DOMAIN_COUNT];
    for (i, s) in scores.iter_mut().enumerate() {
        *s = ValueDomain::ALL[i]
            .members()
            .iter()
            .map(|v| profile.weight(*v))
            .fold(0.0, f64::max);
    }
    scores
}

/// Critical-discrepancy counts between two domain-level annotation sources.
///
/// A post counts as a critical discrepancy only when the two sources share
/// no domain at all; if they align on at least one domain, differing extras
/// are not discrepancies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscrepancyMatrix {
    counts: [[usize; DOMAIN_COUNT]; DOMAIN_COUNT],
    expert_base: [usize; DOMAIN_COUNT],
    /// Aligned posts skipped because the expert set was empty.
    pub skipped_empty_expert: usize,
}

impl DiscrepancyMatrix {
    /// Posts counted under (expert domain, other-source domain).
    pub fn count(&self, expert: ValueDomain, other: ValueDomain) -> usize {
        self.counts[expert.index()][other.index()]
    }

    /// Posts whose expert set contains the domain (the percentage base).
    pub fn base(&self, expert: ValueDomain) -> usize {
        self.expert_base[expert.index()]
    }

    /// Percentage of the domain's base, `None` when the base is empty.
    pub fn percent(&self, expert: ValueDomain, other: ValueDomain) -> Option<f64> {
        let base = self.base(expert);
        if base == 0 {
            None
        } else {
            Some(100.0 * self.count(expert, other) as f64 / base as f64)
        }
    }

    pub fn total_discrepant_posts(&self) -> usize {
        // rows can double-count a post with several expert domains; this is
        // the raw cell sum, matching the per-row reporting
        self.counts.iter().flatten().sum()
    }
}

/// Compare per-post domain sets from two sources aligned by post id.
///
/// Errors if the two maps do not cover exactly the same posts. Posts with an
/// empty expert set are skipped and tallied in `skipped_empty_expert`.
pub fn critical_discrepancies(
    expert: &BTreeMap<String, BTreeSet<ValueDomain>>,
    other: &BTreeMap<String, BTreeSet<ValueDomain>>,
) -> Result<DiscrepancyMatrix> {
    let missing: Vec<&String> = expert.keys().filter(|k| !other.contains_key(*k)).collect();
    let extra: Vec<&String> = other.keys().filter(|k| !expert.contains_key(*k)).collect();
    if !missing.is_empty() || !extra.is_empty() {
        return Err(Error::Alignment(format!(
            "expert-only ids: {missing:?}; other-only ids: {extra:?}"
        )));
    }

    let mut matrix = DiscrepancyMatrix {
        counts: [[0; DOMAIN_COUNT]; DOMAIN_COUNT],
        expert_base: [0; DOMAIN_COUNT],
        skipped_empty_expert: 0,
    };

    for (id, expert_set) in expert {
        if expert_set.is_empty() {
            matrix.skipped_empty_expert += 1;
            continue;
        }
        let other_set = &other[id];
        for d in expert_set {
            matrix.expert_base[d.index()] += 1;
        }
        if expert_set.intersection(other_set).next().is_some() {
            continue; // aligned on at least one domain
        }
        for d in expert_set {
            for d2 in other_set {
                if !expert_set.contains(d2) {
                    matrix.counts[d.index()][d2.index()] += 1;
                }
            }
        }
    }
    Ok(matrix)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-12;

    #[test]
    fn ten_values_bijective_circle_index() {
        for (i, v) in ValueType::ALL.iter().enumerate() {
            assert_eq!(v.circle_index(), i);
            assert_eq!(ValueType::from_circle_index(i), Some(*v));
        }
        assert_eq!(ValueType::from_circle_index(10), None);
    }

    #[test]
    fn domains_partition_the_values() {
        let mut seen = BTreeSet::new();
        for d in ValueDomain::ALL {
            for v in d.members() {
                assert_eq!(v.domain(), d);
                assert!(seen.insert(*v), "{v} in two domains");
            }
        }
        assert_eq!(seen.len(), VALUE_COUNT);
    }

    #[test]
    fn value_names_round_trip() {
        for v in ValueType::ALL {
            assert_eq!(v.name().parse::<ValueType>().unwrap(), v);
            assert_eq!(v.name().to_lowercase().parse::<ValueType>().unwrap(), v);
        }
        assert_eq!("self_direction".parse::<ValueType>().unwrap(), ValueType::SelfDirection);
        assert!("SelfControl".parse::<ValueType>().is_err());
    }

    #[test]
    fn self_direction_sits_at_the_top() {
        let coords = theoretical_coordinates();
        let sd = coords[ValueType::SelfDirection.circle_index()];
        assert!(sd.x.abs() < TOL);
        assert!((sd.y - 0.5).abs() < TOL);
    }

    #[test]
    fn all_anchors_on_the_radius() {
        for c in theoretical_coordinates() {
            assert!((c.norm() - CIRCLE_RADIUS).abs() < TOL);
        }
    }

    #[test]
    fn adjacent_chord_matches_sin18() {
        let expected = (PI / 10.0).sin(); // 2 * 0.5 * sin(18 deg)
        assert!((chord_length(1) - expected).abs() < TOL);
        assert!((expected - 0.309016994374947).abs() < 1e-12);
    }

    #[test]
    fn opposite_values_are_a_diameter() {
        assert!((chord_length(5) - 1.0).abs() < TOL);
        let coords = theoretical_coordinates();
        let d = value_distance(coords[0], coords[5]);
        assert!((d - 1.0).abs() < TOL);
    }

    #[test]
    fn chord_set_has_five_distinct_lengths() {
        let expected = [0.309016994374947, 0.587785252292473, 0.809016994374947, 0.951056516295154, 1.0];
        for (k, e) in expected.iter().enumerate() {
            assert!((chord_length(k + 1) - e).abs() < 1e-12, "k={}", k + 1);
            // symmetric around the diameter
            assert!((chord_length(VALUE_COUNT - (k + 1)) - e).abs() < 1e-12);
        }
    }

    #[test]
    fn single_value_profile_projects_to_its_anchor() {
        let coords = theoretical_coordinates();
        for v in ValueType::ALL {
            let p = project_profile(&ValueProfile::from_positive([v]));
            assert!(!p.neutral);
            assert!((p.point.x - coords[v.circle_index()].x).abs() < TOL);
            assert!((p.point.y - coords[v.circle_index()].y).abs() < TOL);
            assert!((p.point.norm() - 0.5).abs() < TOL);
        }
    }

    #[test]
    fn uniform_profile_projects_to_origin() {
        let p = project_profile(&ValueProfile::new([1.0; VALUE_COUNT]).unwrap());
        assert!(!p.neutral);
        assert!(p.point.norm() < TOL);
    }

    #[test]
    fn zero_profile_is_neutral_origin() {
        let p = project_profile(&ValueProfile::zeros());
        assert!(p.neutral);
        assert_eq!(p.point, CirclePoint { x: 0.0, y: 0.0 });
    }

    #[test]
    fn two_adjacent_values_project_to_chord_midpoint() {
        let p = project_profile(&ValueProfile::from_positive([
            ValueType::Conformity,
            ValueType::Tradition,
        ]));
        let expected_norm = 0.5 * (PI / 10.0).cos(); // 0.4755...
        assert!((p.point.norm() - expected_norm).abs() < TOL);
        assert!((expected_norm - 0.475528258147577).abs() < 1e-12);
    }

    #[test]
    fn projection_is_scale_invariant() {
        let base = ValueProfile::new([0.1, 0.0, 0.3, 0.0, 0.0, 0.7, 0.2, 0.0, 0.0, 0.4]).unwrap();
        let scaled = ValueProfile::new(base.weights().map(|w| w * 3.5)).unwrap();
        let a = project_profile(&base).point;
        let b = project_profile(&scaled).point;
        assert!((a.x - b.x).abs() < TOL && (a.y - b.y).abs() < TOL);
    }

    #[test]
    fn adjacent_annotation_distance_is_031() {
        let a = ValueProfile::from_positive([ValueType::Conformity]);
        let b = ValueProfile::from_positive([ValueType::Tradition]);
        let d = annotation_distance(&a, &b);
        assert!((d.distance - 0.309016994374947).abs() < TOL);
        assert!(!d.doubly_neutral);
    }

    #[test]
    fn doubly_neutral_distance_is_flagged_zero() {
        let d = annotation_distance(&ValueProfile::zeros(), &ValueProfile::zeros());
        assert_eq!(d.distance, 0.0);
        assert!(d.doubly_neutral);
    }

    #[test]
    fn hedonism_maps_to_openness() {
        let domains = domains_of(&[ValueType::Hedonism].into_iter().collect());
        assert_eq!(domains, [ValueDomain::OpennessToChange].into_iter().collect());
    }

    #[test]
    fn tradition_maps_to_conservation_only() {
        let domains = domains_of(&[ValueType::Tradition].into_iter().collect());
        assert_eq!(domains, [ValueDomain::Conservation].into_iter().collect());
    }

    #[test]
    fn domain_scores_take_member_max() {
        let mut weights = [0.0; VALUE_COUNT];
        weights[ValueType::SelfDirection.circle_index()] = 0.2;
        weights[ValueType::Stimulation.circle_index()] = 0.7;
        weights[ValueType::Hedonism.circle_index()] = 0.1;
        let scores = domain_scores(&ValueProfile::new(weights).unwrap());
        assert!((scores[ValueDomain::OpennessToChange.index()] - 0.7).abs() < TOL);
        assert_eq!(scores[ValueDomain::Conservation.index()], 0.0);
    }

    #[test]
    fn shared_domain_is_not_a_discrepancy() {
        let expert: BTreeMap<String, BTreeSet<ValueDomain>> = [(
            "p1".to_string(),
            [ValueDomain::Conservation].into_iter().collect(),
        )]
        .into_iter()
        .collect();
        let other: BTreeMap<String, BTreeSet<ValueDomain>> = [(
            "p1".to_string(),
            [ValueDomain::Conservation, ValueDomain::OpennessToChange].into_iter().collect(),
        )]
        .into_iter()
        .collect();
        let m = critical_discrepancies(&expert, &other).unwrap();
        assert_eq!(m.count(ValueDomain::Conservation, ValueDomain::OpennessToChange), 0);
        assert_eq!(m.base(ValueDomain::Conservation), 1);
    }

    #[test]
    fn disjoint_domains_count_once_per_pair() {
        let expert: BTreeMap<String, BTreeSet<ValueDomain>> = [(
            "p1".to_string(),
            [ValueDomain::Conservation].into_iter().collect(),
        )]
        .into_iter()
        .collect();
        let other: BTreeMap<String, BTreeSet<ValueDomain>> = [(
            "p1".to_string(),
            [ValueDomain::OpennessToChange].into_iter().collect(),
        )]
        .into_iter()
        .collect();
        let m = critical_discrepancies(&expert, &other).unwrap();
        assert_eq!(m.count(ValueDomain::Conservation, ValueDomain::OpennessToChange), 1);
        assert_eq!(m.percent(ValueDomain::Conservation, ValueDomain::OpennessToChange), Some(100.0));
    }

    #[test]
    fn misaligned_posts_error() {
        let expert: BTreeMap<String, BTreeSet<ValueDomain>> =
            [("p1".to_string(), BTreeSet::new())].into_iter().collect();
        let other = BTreeMap::new();
        assert!(matches!(
            critical_discrepancies(&expert, &other),
            Err(Error::Alignment(_))
        ));
    }
}
