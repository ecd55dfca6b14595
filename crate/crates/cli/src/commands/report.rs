use std::path::PathBuf;

use serde_json::{json, Value};
use valuekit::classifier::{binarize, prevalence};
use valuekit::error::Result;
use valuekit::report;

use crate::commands::resolve;
use crate::config::require_paths;
use crate::{io, Ctx};

pub fn run(
    ctx: &mut Ctx,
    probas: Option<PathBuf>,
    thresholds: Option<PathBuf>,
    soft: Option<PathBuf>,
) -> Result<Value> {
    let probas_path = resolve(
        probas,
        ctx.config.paths.probabilities.as_ref(),
        Some(ctx.out_path("probabilities.csv")),
    );
    let thresholds_path = resolve(
        thresholds,
        ctx.config.paths.thresholds.as_ref(),
        Some(ctx.out_path("thresholds.json")),
    );
    let soft_path = resolve(
        soft,
        ctx.config.paths.soft_labels.as_ref(),
        Some(ctx.out_path("soft_labels.jsonl")),
    );
    let paths = require_paths(&[
        ("probas", probas_path.as_deref()),
        ("thresholds", thresholds_path.as_deref()),
        ("soft", soft_path.as_deref()),
    ])?;

    let (_, profiles) = io::read_probas(&paths["probas"])?;
    let set = io::read_thresholds(&paths["thresholds"])?;
    let labels = binarize(&profiles, &set)?;
    let table = ctx.log.stage("prevalence", || prevalence(&profiles, &labels))?;
    io::write_string(&ctx.out_path("prevalence.csv"), &report::prevalence_csv(&table)?)?;

    let soft_table = io::read_soft_table(&paths["soft"])?;
    let distribution = soft_table.label_distribution()?;
    io::write_string(&ctx.out_path("distribution.csv"), &report::distribution_csv(&distribution)?)?;

    Ok(json!({
        "command": "report",
        "posts": profiles.len(),
        "soft_cells": soft_table.len(),
        "shares_pct": table
            .iter()
            .map(|(v, p)| (v.name(), p.share_pct))
            .collect::<std::collections::BTreeMap<_, _>>(),
    }))
}
