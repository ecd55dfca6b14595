use std::path::PathBuf;

use serde_json::{json, Value};
use valuekit::error::{Error, Result};
use valuekit::report;
use valuekit::structure::{
    analyze_structure, synthetic_circle_profiles, theoretical_config, SmacofOptions,
};
use valuekit::svg;

use crate::commands::resolve;
use crate::config::require_paths;
use crate::{io, Ctx};

pub fn run(ctx: &mut Ctx, probas: Option<PathBuf>, synthetic: Option<usize>) -> Result<Value> {
    let profiles = match synthetic {
        Some(posts) => {
            if posts < 3 {
                return Err(Error::Input("--synthetic needs at least 3 posts".into()));
            }
            let seed = ctx.seed(ctx.config.seeds.synthetic);
            synthetic_circle_profiles(posts, seed, 0.02)
        }
        None => {
            let probas_path = resolve(
                probas,
                ctx.config.paths.probabilities.as_ref(),
                Some(ctx.out_path("probabilities.csv")),
            );
            let paths = require_paths(&[("probas", probas_path.as_deref())])?;
            io::read_probas(&paths["probas"])?.1
        }
    };

    let analysis =
        ctx.log.stage("analyze", || analyze_structure(&profiles, &SmacofOptions::default()))?;

    io::write_string(&ctx.out_path("correlation.csv"), &report::correlation_csv(&analysis.correlation)?)?;
    let theory = theoretical_config();
    io::write_string(
        &ctx.out_path("structure_coordinates.csv"),
        &report::structure_coordinates_csv(&analysis.aligned, &theory)?,
    )?;
    io::write_json(&ctx.out_path("structure.json"), &analysis.report)?;

    if ctx.svg {
        io::write_string(&ctx.out_path("heatmap.svg"), &svg::heatmap_svg(&analysis.correlation))?;
        io::write_string(
            &ctx.out_path("circle_plot.svg"),
            &svg::circle_plot_svg(&theory, &analysis.aligned),
        )?;
    }

    Ok(json!({
        "command": "structure",
        "posts": profiles.len(),
        "synthetic": synthetic.is_some(),
        "stress": analysis.report.stress,
        "congruence": analysis.report.congruence,
        "tau": analysis.report.tau,
        "iterations": analysis.report.iterations,
        "excellent_match": analysis.report.excellent_match,
    }))
}
