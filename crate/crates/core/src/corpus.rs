//! Corpus parsing, validation, and the preprocessing filter stages:
//! language/length gate, rule-based spam detection, and the political
//! keyword prefilter.
//!
//! Malformed input is collected and reported, never silently dropped, and a
//! single bad line never aborts a file. The duplicate-fragment spam rule
//! builds a global shingle index in one pass, then evaluates posts
//! read-only, so verdicts are independent of corpus order.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::io::BufRead;
use std::sync::OnceLock;

use rayon::prelude::*;
use regex::{Regex, RegexBuilder};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::{is_cyrillic, strip_punctuation, tokenize_lower};

/// One social-media text item. `text` is preserved byte-exact from the
/// input; the anonymization scrub is a separate, explicit step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Post {
    pub id: String,
    pub user_hash: String,
    pub ts: i64,
    pub text: String,
    #[serde(default)]
    pub likes: u64,
    #[serde(default)]
    pub reposts: u64,
    #[serde(default)]
    pub comments: u64,
}

/// A non-fatal problem with one input line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParseIssue {
    pub line: usize,
    pub message: String,
}

/// Parsed posts plus the per-line error report.
#[derive(Debug, Clone, Default)]
pub struct ParseOutcome {
    pub posts: Vec<Post>,
    pub issues: Vec<ParseIssue>,
}

/// Parse line-delimited JSON posts, collecting malformed lines and duplicate
/// ids into the issue report and continuing.
pub fn parse_posts<R: BufRead>(reader: R) -> Result<ParseOutcome> {
    let mut outcome = ParseOutcome::default();
    let mut seen_ids: HashSet<String> = HashSet::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<Post>(&line) {
            Ok(post) => {
                if post.id.is_empty() {
                    outcome.issues.push(ParseIssue {
                        line: lineno,
                        message: "empty post id".into(),
                    });
                } else if !seen_ids.insert(post.id.clone()) {
                    outcome.issues.push(ParseIssue {
                        line: lineno,
                        message: format!("duplicate post id `{}`", post.id),
                    });
                } else {
                    outcome.posts.push(post);
                }
            }
            Err(e) => {
                outcome.issues.push(ParseIssue { line: lineno, message: e.to_string() });
            }
        }
    }
    Ok(outcome)
}

// ---------------------------------------------------------------------------
// Anonymization scrub
// ---------------------------------------------------------------------------

struct ScrubPatterns {
    card: Regex,
    phone: Regex,
    mention: Regex,
}

fn scrub_patterns() -> &'static ScrubPatterns {
    static PATTERNS: OnceLock<ScrubPatterns> = OnceLock::new();
    PATTERNS.get_or_init(|| ScrubPatterns {
        card: Regex::new(r"\b\d{4}[ -]?\d{4}[ -]?\d{4}[ -]?\d{4}\b").unwrap(),
        phone: Regex::new(r"(?:\+7|\b8)[ -]?\(?\d{3}\)?[ -]?\d{3}[ -]?\d{2}[ -]?\d{2}\b").unwrap(),
        mention: Regex::new(r"@[\w.]+").unwrap(),
    })
}

/// Replace mentions, phone numbers, and card numbers with fixed placeholder
/// tokens. Card numbers are scrubbed before phone numbers so a 16-digit run
/// is never half-eaten by the phone pattern.
pub fn scrub_text(text: &str) -> String {
    let p = scrub_patterns();
    let text = p.card.replace_all(text, "[card]");
    let text = p.phone.replace_all(&text, "[phone]");
    p.mention.replace_all(&text, "@user").into_owned()
}

/// Scrub a post's text in place, returning whether anything changed.
pub fn scrub_post(post: &mut Post) -> bool {
    let scrubbed = scrub_text(&post.text);
    if scrubbed != post.text {
        post.text = scrubbed;
        true
    } else {
        false
    }
}

// ---------------------------------------------------------------------------
// Language / length gate
// ---------------------------------------------------------------------------

fn is_cyrillic_word(token: &str) -> bool {
    strip_punctuation(token).chars().any(is_cyrillic)
}

/// True iff the text contains two consecutive whitespace-separated tokens
/// that are both Cyrillic words (a token counts as a Cyrillic word when,
/// after stripping edge punctuation, it contains at least one Cyrillic
/// letter).
pub fn language_length_gate(text: &str) -> bool {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    tokens.windows(2).any(|w| is_cyrillic_word(w[0]) && is_cyrillic_word(w[1]))
}

// ---------------------------------------------------------------------------
// Filter rules
// ---------------------------------------------------------------------------

/// Validated filter configuration: compiled lexical patterns, the
/// duplicate-fragment parameters, and the lowercased political keywords.
#[derive(Debug)]
pub struct FilterRuleSet {
    patterns: Vec<Regex>,
    pattern_sources: Vec<String>,
    shingle_len: usize,
    min_duplicate_users: usize,
    political_keywords: Vec<String>,
}

impl FilterRuleSet {
    pub fn new(
        lexical_patterns: Vec<String>,
        shingle_len: usize,
        min_duplicate_users: usize,
        political_keywords: Vec<String>,
    ) -> Result<Self> {
        if shingle_len < 2 {
            return Err(Error::Config(format!("shingle_len must be >= 2, got {shingle_len}")));
        }
        if min_duplicate_users < 2 {
            return Err(Error::Config(format!(
                "min_duplicate_users must be >= 2, got {min_duplicate_users}"
            )));
        }
        let patterns = lexical_patterns
            .iter()
            .map(|p| {
                RegexBuilder::new(p)
                    .case_insensitive(true)
                    .build()
                    .map_err(|e| Error::Config(format!("bad lexical pattern `{p}`: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            patterns,
            pattern_sources: lexical_patterns,
            shingle_len,
            min_duplicate_users,
            political_keywords: political_keywords
                .into_iter()
                .map(|k| k.to_lowercase())
                .filter(|k| !k.is_empty())
                .collect(),
        })
    }

    /// Rules with no patterns and no keywords (flags nothing lexically).
    pub fn empty() -> Self {
        Self::new(Vec::new(), 8, 3, Vec::new()).unwrap()
    }

    pub fn shingle_len(&self) -> usize {
        self.shingle_len
    }

    pub fn min_duplicate_users(&self) -> usize {
        self.min_duplicate_users
    }

    pub fn political_keywords(&self) -> &[String] {
        &self.political_keywords
    }

    pub fn pattern_sources(&self) -> &[String] {
        &self.pattern_sources
    }
}

/// Verdict of the filter stages for one post.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterVerdict {
    pub post_id: String,
    pub passed_language_gate: bool,
    pub spam: bool,
    pub political_candidate: bool,
    pub reasons: Vec<String>,
}

fn shingles(tokens: &[String], len: usize) -> Vec<String> {
    if tokens.len() < len {
        return Vec::new();
    }
    tokens.windows(len).map(|w| w.join("\u{1f}")).collect()
}

/// Spam flags and triggering-rule ids for each post, in input order.
///
/// A post is spam when any lexical pattern matches, or when it contains a
/// `shingle_len`-token fragment that occurs in posts of at least
/// `min_duplicate_users` distinct users. The shingle index is built over the
/// whole corpus first, so verdicts do not depend on scan order.
pub fn detect_spam(posts: &[Post], rules: &FilterRuleSet) -> Vec<(bool, Vec<String>)> {
    let token_lists: Vec<Vec<String>> =
        posts.par_iter().map(|p| tokenize_lower(&p.text)).collect();

    let mut shingle_users: HashMap<String, BTreeSet<&str>> = HashMap::new();
    for (post, tokens) in posts.iter().zip(&token_lists) {
        for shingle in shingles(tokens, rules.shingle_len) {
            shingle_users.entry(shingle).or_default().insert(post.user_hash.as_str());
        }
    }

    posts
        .par_iter()
        .zip(&token_lists)
        .map(|(post, tokens)| {
            let mut reasons = Vec::new();
            for (i, pattern) in rules.patterns.iter().enumerate() {
                if pattern.is_match(&post.text) {
                    reasons.push(format!("lexical:{i}"));
                }
            }
            let duplicated = shingles(tokens, rules.shingle_len).iter().any(|s| {
                shingle_users.get(s).map_or(0, BTreeSet::len) >= rules.min_duplicate_users
            });
            if duplicated {
                reasons.push("duplicate_fragment".into());
            }
            (!reasons.is_empty(), reasons)
        })
        .collect()
}

fn word_boundary_match(haystack: &str, needle: &str) -> bool {
    let mut start = 0;
    while start <= haystack.len() {
        let Some(pos) = haystack[start..].find(needle) else { return false };
        let at = start + pos;
        let end = at + needle.len();
        let before_ok =
            haystack[..at].chars().next_back().map_or(true, |c| !c.is_alphanumeric());
        let after_ok = haystack[end..].chars().next().map_or(true, |c| !c.is_alphanumeric());
        if before_ok && after_ok {
            return true;
        }
        // step to the next char boundary and search again
        start = at + haystack[at..].chars().next().map_or(1, char::len_utf8);
    }
    false
}

/// True iff any keyword occurs in the text as a whole word (case-folded,
/// word-boundary delimited). Keywords must already be lowercased.
pub fn prefilter_political(text: &str, keywords: &[String]) -> bool {
    if keywords.is_empty() {
        return false;
    }
    let lower = text.to_lowercase();
    keywords.iter().any(|k| !k.is_empty() && word_boundary_match(&lower, k))
}

/// Run all filter stages and assemble one verdict per post, in input order.
pub fn filter_corpus(posts: &[Post], rules: &FilterRuleSet) -> Vec<FilterVerdict> {
    let spam = detect_spam(posts, rules);
    posts
        .iter()
        .zip(spam)
        .map(|(post, (is_spam, reasons))| {
            debug_assert!(!is_spam || !reasons.is_empty());
            FilterVerdict {
                post_id: post.id.clone(),
                passed_language_gate: language_length_gate(&post.text),
                spam: is_spam,
                political_candidate: prefilter_political(&post.text, &rules.political_keywords),
                reasons,
            }
        })
        .collect()
}

/// Post/user counts per filter stage, in pipeline order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FilterSummary {
    pub total_posts: usize,
    pub total_users: usize,
    pub gate_passed_posts: usize,
    pub gate_passed_users: usize,
    pub after_spam_posts: usize,
    pub after_spam_users: usize,
    pub political_posts: usize,
    pub political_users: usize,
}

pub fn summarize_filtering(posts: &[Post], verdicts: &[FilterVerdict]) -> FilterSummary {
    let mut users: HashSet<&str> = HashSet::new();
    let mut gate_users: HashSet<&str> = HashSet::new();
    let mut kept_users: HashSet<&str> = HashSet::new();
    let mut political_users: HashSet<&str> = HashSet::new();
    let mut gate_posts = 0;
    let mut kept_posts = 0;
    let mut political_posts = 0;
    for (post, verdict) in posts.iter().zip(verdicts) {
        users.insert(&post.user_hash);
        if verdict.passed_language_gate {
            gate_posts += 1;
            gate_users.insert(&post.user_hash);
            if !verdict.spam {
                kept_posts += 1;
                kept_users.insert(&post.user_hash);
                if verdict.political_candidate {
                    political_posts += 1;
                    political_users.insert(&post.user_hash);
                }
            }
        }
    }
    FilterSummary {
        total_posts: posts.len(),
        total_users: users.len(),
        gate_passed_posts: gate_posts,
        gate_passed_users: gate_users.len(),
        after_spam_posts: kept_posts,
        after_spam_users: kept_users.len(),
        political_posts,
        political_users: political_users.len(),
    }
}
