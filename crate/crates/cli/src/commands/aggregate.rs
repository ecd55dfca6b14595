use std::path::PathBuf;

use serde_json::{json, Value};
use valuekit::error::{Error, Result};
use valuekit::report;
use valuekit::soft::{aggregate_soft, SoftCell, SoftLabel, SoftLabelTable, SOFT_LABEL_RUNS};

use crate::commands::resolve;
use crate::config::require_paths;
use crate::{io, Ctx};

pub fn run(ctx: &mut Ctx, annotations: Option<PathBuf>, runs: Option<usize>) -> Result<Value> {
    let n_runs = runs.unwrap_or(ctx.config.annotation.runs);
    if n_runs != SOFT_LABEL_RUNS {
        return Err(Error::Input(format!(
            "the soft-label rule is defined for {SOFT_LABEL_RUNS} runs, got {n_runs}"
        )));
    }
    let annotations_path = resolve(
        annotations,
        ctx.config.paths.annotations.as_ref(),
        Some(ctx.out_path("annotations.jsonl")),
    );
    let paths = require_paths(&[("annotations", annotations_path.as_deref())])?;

    let matrix =
        ctx.log.stage("load", || io::read_annotation_matrix(&paths["annotations"], n_runs))?;

    let mut table = SoftLabelTable::new();
    let mut skipped_incomplete = 0usize;
    let mut level_counts = [0usize; 3]; // strong, moderate, none
    ctx.log.stage("aggregate", || {
        for ((post_id, value), _) in matrix.iter() {
            match matrix.complete_runs(post_id, *value) {
                Some(cell_runs) => {
                    let (soft, votes) = aggregate_soft(&cell_runs)?;
                    match soft {
                        SoftLabel::Strong => level_counts[0] += 1,
                        SoftLabel::Moderate => level_counts[1] += 1,
                        SoftLabel::None => level_counts[2] += 1,
                    }
                    table.insert(post_id.clone(), *value, SoftCell { soft, votes });
                }
                None => skipped_incomplete += 1,
            }
        }
        Ok(())
    })?;
    if table.is_empty() {
        return Err(Error::Input("no complete annotation cells to aggregate".into()));
    }

    io::write_jsonl(&ctx.out_path("soft_labels.jsonl"), &table.records())?;
    let distribution = table.label_distribution()?;
    io::write_string(&ctx.out_path("distribution.csv"), &report::distribution_csv(&distribution)?)?;

    Ok(json!({
        "command": "aggregate",
        "cells": table.len(),
        "posts": table.post_ids().len(),
        "skipped_incomplete": skipped_incomplete,
        "strong_cells": level_counts[0],
        "moderate_cells": level_counts[1],
        "none_cells": level_counts[2],
    }))
}
