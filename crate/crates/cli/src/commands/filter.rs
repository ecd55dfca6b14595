use std::path::PathBuf;

use serde_json::{json, Value};
use valuekit::corpus::{filter_corpus, scrub_post, summarize_filtering, FilterRuleSet};
use valuekit::error::Result;
use valuekit::report;

use crate::commands::resolve;
use crate::config::require_paths;
use crate::{io, Ctx};

pub fn run(ctx: &mut Ctx, corpus: Option<PathBuf>) -> Result<Value> {
    let corpus_path = resolve(corpus, ctx.config.paths.corpus.as_ref(), None);
    let paths = require_paths(&[("corpus", corpus_path.as_deref())])?;

    let outcome = ctx.log.stage("parse", || io::read_posts(&paths["corpus"]))?;
    let mut posts = outcome.posts;

    let mut scrubbed = 0usize;
    if ctx.config.filter.scrub {
        ctx.log.stage("scrub", || {
            scrubbed = posts.iter_mut().map(|p| scrub_post(p)).filter(|changed| *changed).count();
            Ok(())
        })?;
    }

    let f = &ctx.config.filter;
    let rules = FilterRuleSet::new(
        f.lexical_patterns.clone(),
        f.shingle_len,
        f.min_duplicate_users,
        f.political_keywords.clone(),
    )?;
    let verdicts = ctx.log.stage("filter", || Ok(filter_corpus(&posts, &rules)))?;
    let summary = summarize_filtering(&posts, &verdicts);

    io::write_jsonl(&ctx.out_path("verdicts.jsonl"), &verdicts)?;
    io::write_string(&ctx.out_path("filter_summary.csv"), &report::filter_summary_csv(&summary)?)?;
    if !outcome.issues.is_empty() {
        io::write_jsonl(&ctx.out_path("parse_issues.jsonl"), &outcome.issues)?;
    }

    Ok(json!({
        "command": "filter",
        "parse_issues": outcome.issues.len(),
        "scrubbed_posts": scrubbed,
        "total_posts": summary.total_posts,
        "total_users": summary.total_users,
        "gate_passed_posts": summary.gate_passed_posts,
        "after_spam_posts": summary.after_spam_posts,
        "political_posts": summary.political_posts,
    }))
}
