use std::collections::BTreeMap;
use std::path::PathBuf;

use serde_json::{json, Value};
use valuekit::circle::{ValueType, VALUE_COUNT};
use valuekit::classifier::{train, FeatureSpace};
use valuekit::corpus::scrub_post;
use valuekit::error::{Error, Result};

use crate::commands::resolve;
use crate::config::require_paths;
use crate::{io, Ctx};

pub fn run(ctx: &mut Ctx, corpus: Option<PathBuf>, soft: Option<PathBuf>) -> Result<Value> {
    let corpus_path = resolve(corpus, ctx.config.paths.corpus.as_ref(), None);
    let soft_path = resolve(
        soft,
        ctx.config.paths.soft_labels.as_ref(),
        Some(ctx.out_path("soft_labels.jsonl")),
    );
    let paths =
        require_paths(&[("corpus", corpus_path.as_deref()), ("soft", soft_path.as_deref())])?;

    let outcome = ctx.log.stage("parse", || io::read_posts(&paths["corpus"]))?;
    let mut posts = outcome.posts;
    if ctx.config.filter.scrub {
        for post in &mut posts {
            scrub_post(post);
        }
    }
    let text_by_id: BTreeMap<&str, &str> =
        posts.iter().map(|p| (p.id.as_str(), p.text.as_str())).collect();

    let table = io::read_soft_table(&paths["soft"])?;

    // posts with a complete 10-value soft row, in sorted id order
    let mut texts: Vec<String> = Vec::new();
    let mut targets: Vec<[f64; VALUE_COUNT]> = Vec::new();
    let mut skipped_partial = 0usize;
    for post_id in table.post_ids() {
        let mut row = [0.0; VALUE_COUNT];
        let mut complete = true;
        for value in ValueType::ALL {
            match table.get(&post_id, value) {
                Some(cell) => row[value.circle_index()] = cell.soft.value(),
                None => {
                    complete = false;
                    break;
                }
            }
        }
        if !complete {
            skipped_partial += 1;
            continue;
        }
        let text = text_by_id.get(post_id.as_str()).ok_or_else(|| {
            Error::Alignment(format!("labeled post `{post_id}` is missing from the corpus"))
        })?;
        texts.push((*text).to_string());
        targets.push(row);
    }
    if texts.is_empty() {
        return Err(Error::Input("no fully labeled posts to train on".into()));
    }

    let featurizer_config = ctx.config.features.to_featurizer();
    let feature_space =
        ctx.log.stage("featurize", || FeatureSpace::fit(&texts, featurizer_config.clone()))?;
    let features = feature_space.featurize_many(&texts);

    let training_config = ctx.config.training.to_training(ctx.seed(ctx.config.seeds.train));
    let model = ctx.log.stage("train", || {
        train(&features, &targets, feature_space.dim(), training_config.clone())
    })?;

    io::write_model(&ctx.out_path("model.json"), &feature_space, &model)?;
    let mut loss_csv = String::from("epoch,loss\n");
    for (epoch, loss) in model.epoch_losses.iter().enumerate() {
        loss_csv.push_str(&format!("{epoch},{loss:.9}\n"));
    }
    io::write_string(&ctx.out_path("training_loss.csv"), &loss_csv)?;

    let non_increasing = model
        .epoch_losses
        .windows(2)
        .all(|pair| pair[1] <= pair[0] + 1e-6);
    Ok(json!({
        "command": "train",
        "examples": texts.len(),
        "skipped_partial_posts": skipped_partial,
        "features": feature_space.dim(),
        "epochs": model.epoch_losses.len(),
        "final_loss": model.epoch_losses.last(),
        "loss_non_increasing": non_increasing,
    }))
}
