use std::path::PathBuf;

use serde_json::{json, Value};
use valuekit::classifier::{optimize_thresholds, ThresholdMode};
use valuekit::error::{Error, Result};

use crate::commands::resolve;
use crate::config::require_paths;
use crate::{io, Ctx};

pub fn parse_mode(raw: &str) -> Result<ThresholdMode> {
    match raw {
        "per_class" => Ok(ThresholdMode::PerClass),
        "global" => Ok(ThresholdMode::Global),
        other => {
            Err(Error::Config(format!("threshold mode must be per_class or global, got `{other}`")))
        }
    }
}

pub fn run(
    ctx: &mut Ctx,
    probas: Option<PathBuf>,
    reference: Option<PathBuf>,
    mode: Option<String>,
) -> Result<Value> {
    let probas_path = resolve(
        probas,
        ctx.config.paths.probabilities.as_ref(),
        Some(ctx.out_path("probabilities.csv")),
    );
    let reference_path = resolve(
        reference,
        ctx.config.paths.soft_labels.as_ref(),
        Some(ctx.out_path("soft_labels.jsonl")),
    );
    let paths = require_paths(&[
        ("probas", probas_path.as_deref()),
        ("reference", reference_path.as_deref()),
    ])?;

    let mode = match mode {
        Some(raw) => parse_mode(&raw)?,
        None => ctx.config.thresholds.parse_mode()?,
    };

    let (ids, profiles) = io::read_probas(&paths["probas"])?;
    let soft = io::read_soft_table(&paths["reference"])?;
    let (_, joined_profiles, joined_reference) =
        ctx.log.stage("join", || io::join_reference(&ids, &profiles, &soft))?;

    let set = ctx
        .log
        .stage("search", || optimize_thresholds(&joined_profiles, &joined_reference, mode))?;
    io::write_thresholds(&ctx.out_path("thresholds.json"), &set)?;

    Ok(json!({
        "command": "thresholds",
        "posts": joined_profiles.len(),
        "mode": match mode { ThresholdMode::Global => "global", ThresholdMode::PerClass => "per_class" },
        "thresholds": set.thresholds,
        "defaulted_values": set.defaulted.iter().map(|v| v.name()).collect::<Vec<_>>(),
    }))
}
