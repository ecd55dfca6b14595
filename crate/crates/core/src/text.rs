//! Shared tokenization used by the corpus filters and the featurizer.
//!
//! One tokenizer for everything prevents train/serve skew: the same rules
//! produce the shingles used by spam detection, the token counts used for
//! post length, and the features used by the classifier.

/// True if the code point lies in the Cyrillic block (U+0400..=U+04FF).
pub fn is_cyrillic(c: char) -> bool {
    ('\u{0400}'..='\u{04FF}').contains(&c)
}

/// Strip leading and trailing non-alphanumeric characters from a token.
///
/// Returns the inner slice; an all-punctuation token strips to "".
pub fn strip_punctuation(token: &str) -> &str {
    token.trim_matches(|c: char| !c.is_alphanumeric())
}

/// Split on Unicode whitespace, strip edge punctuation, drop empty tokens.
///
/// Case is preserved; callers that need case folding lower the tokens
/// themselves (see [`tokenize_lower`]).
pub fn tokenize(text: &str) -> Vec<&str> {
    text.split_whitespace()
        .map(strip_punctuation)
        .filter(|t| !t.is_empty())
        .collect()
}

/// [`tokenize`] followed by Unicode lowercasing of each token.
pub fn tokenize_lower(text: &str) -> Vec<String> {
    tokenize(text).into_iter().map(|t| t.to_lowercase()).collect()
}

/// Token count under the shared tokenizer (used as "post length").
pub fn token_count(text: &str) -> usize {
    tokenize(text).len()
}
