use std::collections::BTreeSet;
use std::path::PathBuf;

use serde_json::{json, Value};
use valuekit::classifier::predict_proba_many;
use valuekit::corpus::{scrub_post, FilterVerdict};
use valuekit::error::Result;

use crate::commands::resolve;
use crate::config::require_paths;
use crate::{io, Ctx};

pub fn run(
    ctx: &mut Ctx,
    corpus: Option<PathBuf>,
    model: Option<PathBuf>,
    verdicts: Option<PathBuf>,
) -> Result<Value> {
    let corpus_path = resolve(corpus, ctx.config.paths.corpus.as_ref(), None);
    let model_path =
        resolve(model, ctx.config.paths.model.as_ref(), Some(ctx.out_path("model.json")));
    let paths =
        require_paths(&[("corpus", corpus_path.as_deref()), ("model", model_path.as_deref())])?;

    let outcome = ctx.log.stage("parse", || io::read_posts(&paths["corpus"]))?;
    let mut posts = outcome.posts;
    if ctx.config.filter.scrub {
        for post in &mut posts {
            scrub_post(post);
        }
    }
    if let Some(verdicts_path) = verdicts {
        let verdicts: Vec<FilterVerdict> = io::read_jsonl(&verdicts_path)?;
        let keep: BTreeSet<String> = verdicts
            .into_iter()
            .filter(|v| v.passed_language_gate && !v.spam)
            .map(|v| v.post_id)
            .collect();
        posts.retain(|p| keep.contains(&p.id));
    }

    let model_file = io::read_model(&paths["model"])?;
    let texts: Vec<&str> = posts.iter().map(|p| p.text.as_str()).collect();
    let features = ctx.log.stage("featurize", || Ok(model_file.feature_space.featurize_many(&texts)))?;
    let profiles = ctx.log.stage("predict", || predict_proba_many(&model_file.model, &features))?;

    let ids: Vec<String> = posts.iter().map(|p| p.id.clone()).collect();
    io::write_probas(&ctx.out_path("probabilities.csv"), &ids, &profiles)?;

    Ok(json!({
        "command": "predict",
        "posts": ids.len(),
        "features": model_file.feature_space.dim(),
    }))
}
