//! Value-detection analytics toolkit.
//!
//! Implements the numerical core of a multi-stage value-detection pipeline
//! for social-media text:
//!
//! - [`corpus`] — post parsing, anonymization scrub, language/length gate,
//!   rule-based spam detection, political keyword prefilter;
//! - [`annotate`] — repeated-run annotation client with batching, retries,
//!   a file-backed mock provider, and an offline replay log;
//! - [`soft`] — majority votes, consistency tiers, and three-level soft
//!   labels aggregated from five annotation runs;
//! - [`agreement`] — Fleiss' kappa, one-way ICC, precision/recall/F1,
//!   tier comparison, Spearman and Kendall rank correlations;
//! - [`circle`] — the ten-value circle: taxonomy, theoretical coordinates,
//!   profile projection, domain aggregation, critical discrepancies;
//! - [`classifier`] — TF-IDF features, soft-target logistic regression,
//!   threshold optimization, binarization, evaluation, prevalence;
//! - [`structure`] — correlation structure, SMACOF multidimensional
//!   scaling, Procrustes alignment, congruence and stress diagnostics;
//! - [`report`] / [`svg`] — deterministic CSV and SVG emitters.

pub mod agreement;
pub mod annotate;
pub mod circle;
pub mod classifier;
pub mod corpus;
pub mod error;
pub mod report;
pub mod soft;
pub mod structure;
pub mod svg;
pub mod text;

pub use error::{Error, Result};
