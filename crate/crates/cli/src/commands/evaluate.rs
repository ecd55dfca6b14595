use std::path::PathBuf;

use serde_json::{json, Value};
use valuekit::classifier::{evaluate, optimize_thresholds};
use valuekit::error::Result;
use valuekit::report;

use crate::commands::resolve;
use crate::config::require_paths;
use crate::{io, Ctx};

pub fn run(
    ctx: &mut Ctx,
    probas: Option<PathBuf>,
    reference: Option<PathBuf>,
    thresholds: Option<PathBuf>,
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

    let (ids, profiles) = io::read_probas(&paths["probas"])?;
    let soft = io::read_soft_table(&paths["reference"])?;
    let (_, joined_profiles, joined_reference) =
        ctx.log.stage("join", || io::join_reference(&ids, &profiles, &soft))?;

    // explicit threshold file > file from a previous stage > fresh search
    let threshold_path = resolve(
        thresholds,
        ctx.config.paths.thresholds.as_ref(),
        Some(ctx.out_path("thresholds.json")).filter(|p| p.exists()),
    );
    let (set, optimized_here) = match threshold_path {
        Some(path) => {
            let checked = require_paths(&[("thresholds", Some(path.as_path()))])?;
            (io::read_thresholds(&checked["thresholds"])?, false)
        }
        None => {
            let mode = ctx.config.thresholds.parse_mode()?;
            let set = ctx.log.stage("search", || {
                optimize_thresholds(&joined_profiles, &joined_reference, mode)
            })?;
            (set, true)
        }
    };

    let evaluation =
        ctx.log.stage("evaluate", || evaluate(&joined_profiles, &set, &joined_reference))?;
    io::write_json(&ctx.out_path("evaluation.json"), &evaluation)?;
    io::write_string(
        &ctx.out_path("evaluation_per_value.csv"),
        &report::evaluation_per_value_csv(&evaluation)?,
    )?;
    io::write_string(
        &ctx.out_path("evaluation_summary.csv"),
        &report::evaluation_summary_csv(&evaluation)?,
    )?;

    Ok(json!({
        "command": "evaluate",
        "posts": joined_profiles.len(),
        "micro_f1": evaluation.micro_f1,
        "mean_f1": evaluation.mean_f1,
        "macro_f1": evaluation.macro_f1,
        "thresholds_optimized_here": optimized_here,
    }))
}
