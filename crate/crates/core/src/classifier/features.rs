//! TF-IDF featurization over the shared corpus tokenizer.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::{tokenize, tokenize_lower};

/// Sparse feature vector: (column, value) pairs sorted by column.
pub type SparseVec = Vec<(usize, f64)>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeaturizerConfig {
    /// Minimum document frequency for a token to enter the vocabulary.
    pub min_doc_freq: usize,
    /// Hard cap on vocabulary size; the most document-frequent tokens win,
    /// ties broken lexicographically.
    pub max_vocab: usize,
    pub lowercase: bool,
}

impl Default for FeaturizerConfig {
    fn default() -> Self {
        Self { min_doc_freq: 1, max_vocab: 50_000, lowercase: true }
    }
}

impl FeaturizerConfig {
    fn validate(&self) -> Result<()> {
        if self.min_doc_freq == 0 {
            return Err(Error::Config("min_doc_freq must be >= 1".into()));
        }
        if self.max_vocab == 0 {
            return Err(Error::Config("max_vocab must be >= 1".into()));
        }
        Ok(())
    }
}

/// Fitted vocabulary with per-token inverse document frequencies.
///
/// Featurization requires a fitted space by construction; there is no
/// unfitted state to misuse.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSpace {
    vocabulary: BTreeMap<String, usize>,
    idf: Vec<f64>,
    config: FeaturizerConfig,
}

impl FeatureSpace {
    /// Fit the vocabulary and idf table: idf = ln((1+N)/(1+df)) + 1.
    pub fn fit<S: AsRef<str>>(texts: &[S], config: FeaturizerConfig) -> Result<Self> {
        config.validate()?;
        if texts.is_empty() {
            return Err(Error::Input("cannot fit a feature space on zero documents".into()));
        }

        let mut doc_freq: HashMap<String, usize> = HashMap::new();
        for text in texts {
            let mut seen: Vec<String> = Self::tokens(text.as_ref(), config.lowercase);
            seen.sort_unstable();
            seen.dedup();
            for token in seen {
                *doc_freq.entry(token).or_insert(0) += 1;
            }
        }

        let mut selected: Vec<(String, usize)> = doc_freq
            .into_iter()
            .filter(|(_, df)| *df >= config.min_doc_freq)
            .collect();
        if selected.is_empty() {
            return Err(Error::Input(
                "empty vocabulary: no token meets the document-frequency threshold".into(),
            ));
        }
        if selected.len() > config.max_vocab {
            selected.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
            selected.truncate(config.max_vocab);
        }
        selected.sort_by(|a, b| a.0.cmp(&b.0));

        let n = texts.len() as f64;
        let mut vocabulary = BTreeMap::new();
        let mut idf = Vec::with_capacity(selected.len());
        for (column, (token, df)) in selected.into_iter().enumerate() {
            vocabulary.insert(token, column);
            idf.push(((1.0 + n) / (1.0 + df as f64)).ln() + 1.0);
        }
        Ok(Self { vocabulary, idf, config })
    }

    fn tokens(text: &str, lowercase: bool) -> Vec<String> {
        if lowercase {
            tokenize_lower(text)
        } else {
            tokenize(text).into_iter().map(str::to_string).collect()
        }
    }

    /// tf·idf vector with raw-count tf; out-of-vocabulary tokens are ignored.
    pub fn featurize(&self, text: &str) -> SparseVec {
        let mut counts: BTreeMap<usize, f64> = BTreeMap::new();
        for token in Self::tokens(text, self.config.lowercase) {
            if let Some(column) = self.vocabulary.get(&token) {
                *counts.entry(*column).or_insert(0.0) += 1.0;
            }
        }
        counts.into_iter().map(|(column, tf)| (column, tf * self.idf[column])).collect()
    }

    pub fn featurize_many<S: AsRef<str> + Sync>(&self, texts: &[S]) -> Vec<SparseVec> {
        texts.par_iter().map(|t| self.featurize(t.as_ref())).collect()
    }

    /// Number of feature columns.
    pub fn dim(&self) -> usize {
        self.idf.len()
    }

    pub fn idf(&self, token: &str) -> Option<f64> {
        self.vocabulary.get(token).map(|c| self.idf[*c])
    }

    pub fn config(&self) -> &FeaturizerConfig {
        &self.config
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(texts: &[&str]) -> FeatureSpace {
        FeatureSpace::fit(texts, FeaturizerConfig::default()).unwrap()
    }

    #[test]
    fn empty_text_featurizes_to_zero_vector() {
        let fs = space(&["один два", "три четыре"]);
        assert!(fs.featurize("").is_empty());
        assert!(fs.featurize("   !!!   ").is_empty());
    }

    #[test]
    fn ubiquitous_token_has_unit_idf() {
        // token in every document: idf = ln((1+N)/(1+N)) + 1 = 1
        let fs = space(&["общее слово раз", "общее слово два", "общее слово три"]);
        assert!((fs.idf("общее").unwrap() - 1.0).abs() < 1e-12);
        assert!(fs.idf("раз").unwrap() > 1.0);
    }

    #[test]
    fn identical_documents_get_identical_vectors() {
        let fs = space(&["повтор текста", "повтор текста", "другой текст"]);
        assert_eq!(fs.featurize("повтор текста"), fs.featurize("повтор текста"));
    }

    #[test]
    fn tf_counts_raw_occurrences() {
        let fs = space(&["слово", "слово слово ещё"]);
        let col = *fs.vocabulary.get("слово").unwrap();
        let v = fs.featurize("слово слово слово");
        let entry = v.iter().find(|(c, _)| *c == col).unwrap();
        assert!((entry.1 - 3.0 * fs.idf("слово").unwrap()).abs() < 1e-12);
    }

    #[test]
    fn oov_tokens_are_ignored() {
        let fs = space(&["кошка спит", "собака бежит"]);
        assert!(fs.featurize("черепаха ползёт").is_empty());
    }

    #[test]
    fn doc_freq_threshold_prunes_rare_tokens() {
        let config = FeaturizerConfig { min_doc_freq: 2, ..Default::default() };
        let fs = FeatureSpace::fit(&["общий редкий", "общий другой"], config).unwrap();
        assert_eq!(fs.dim(), 1);
        assert!(fs.idf("общий").is_some());
        assert!(fs.idf("редкий").is_none());
    }

    #[test]
    fn vocab_cap_keeps_most_frequent_tokens() {
        let config = FeaturizerConfig { max_vocab: 1, ..Default::default() };
        let fs = FeatureSpace::fit(&["частый раз", "частый два", "частый"], config).unwrap();
        assert_eq!(fs.dim(), 1);
        assert!(fs.idf("частый").is_some());
    }

    #[test]
    fn lowercase_flag_folds_case() {
        let fs = space(&["Слово Текст", "слово ещё"]);
        let v1 = fs.featurize("СЛОВО");
        let v2 = fs.featurize("слово");
        assert_eq!(v1, v2);
        assert!(!v1.is_empty());
    }

    #[test]
    fn fitting_zero_documents_errors() {
        assert!(FeatureSpace::fit::<&str>(&[], FeaturizerConfig::default()).is_err());
    }

    #[test]
    fn columns_are_dense_and_sorted() {
        let fs = space(&["а б в", "г д е"]);
        let mut seen: Vec<usize> = fs.vocabulary.values().copied().collect();
        seen.sort_unstable();
        assert_eq!(seen, (0..fs.dim()).collect::<Vec<_>>());
    }
}
