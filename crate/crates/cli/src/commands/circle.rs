use std::collections::BTreeMap;
use std::path::PathBuf;

use serde_json::{json, Value};
use valuekit::circle::{
    annotation_distance, project_profile, theoretical_coordinates, ValueProfile, ValueType,
    VALUE_COUNT,
};
use valuekit::error::{Error, Result};
use valuekit::report;
use valuekit::soft::SoftLabelTable;
use valuekit::structure::discrepancy_length_regression;
use valuekit::text::token_count;

use crate::commands::resolve;
use crate::config::require_paths;
use crate::{io, Ctx};

/// Profiles from soft labels: only posts with all ten value cells.
fn profiles_from_soft(table: &SoftLabelTable) -> (Vec<String>, Vec<ValueProfile>, usize) {
    let mut ids = Vec::new();
    let mut profiles = Vec::new();
    let mut skipped = 0usize;
    for post_id in table.post_ids() {
        let mut weights = [0.0; VALUE_COUNT];
        let mut complete = true;
        for value in ValueType::ALL {
            match table.get(&post_id, value) {
                Some(cell) => weights[value.circle_index()] = cell.soft.value(),
                None => {
                    complete = false;
                    break;
                }
            }
        }
        if complete {
            ids.push(post_id);
            profiles.push(ValueProfile::new(weights).expect("soft values are valid weights"));
        } else {
            skipped += 1;
        }
    }
    (ids, profiles, skipped)
}

fn projections_csv(ids: &[String], profiles: &[ValueProfile]) -> String {
    let mut out = String::from("post_id,x,y,neutral\n");
    for (id, profile) in ids.iter().zip(profiles) {
        let p = project_profile(profile);
        out.push_str(&format!("{id},{:.6},{:.6},{}\n", p.point.x, p.point.y, p.neutral));
    }
    out
}

pub fn run(
    ctx: &mut Ctx,
    probas: Option<PathBuf>,
    soft: Option<PathBuf>,
    corpus: Option<PathBuf>,
) -> Result<Value> {
    // theoretical coordinates are always emitted
    let coords: Vec<(ValueType, f64, f64)> = ValueType::ALL
        .into_iter()
        .zip(theoretical_coordinates())
        .map(|(v, c)| (v, c.x, c.y))
        .collect();
    io::write_string(&ctx.out_path("circle_coordinates.csv"), &report::coordinates_csv(&coords)?)?;

    let probas_path = resolve(probas, ctx.config.paths.probabilities.as_ref(), None);
    let soft_path = resolve(soft, ctx.config.paths.soft_labels.as_ref(), None);

    let prob_source = match &probas_path {
        Some(path) => {
            let checked = require_paths(&[("probas", Some(path.as_path()))])?;
            Some(io::read_probas(&checked["probas"])?)
        }
        None => None,
    };
    let mut soft_skipped = 0usize;
    let soft_source = match &soft_path {
        Some(path) => {
            let checked = require_paths(&[("soft", Some(path.as_path()))])?;
            let table = io::read_soft_table(&checked["soft"])?;
            let (ids, profiles, skipped) = profiles_from_soft(&table);
            soft_skipped = skipped;
            Some((ids, profiles))
        }
        None => None,
    };

    let mut summary = json!({
        "command": "circle",
        "soft_posts_skipped_partial": soft_skipped,
    });

    if let Some((ids, profiles)) = prob_source.as_ref().or(soft_source.as_ref()) {
        io::write_string(&ctx.out_path("projections.csv"), &projections_csv(ids, profiles))?;
        summary["projected_posts"] = json!(ids.len());
    }

    if let (Some((prob_ids, prob_profiles)), Some((soft_ids, soft_profiles))) =
        (&prob_source, &soft_source)
    {
        let soft_by_id: BTreeMap<&String, &ValueProfile> =
            soft_ids.iter().zip(soft_profiles).collect();
        let mut rows = String::from("post_id,distance,doubly_neutral\n");
        let mut ids = Vec::new();
        let mut distances = Vec::new();
        for (id, profile) in prob_ids.iter().zip(prob_profiles) {
            if let Some(other) = soft_by_id.get(id) {
                let d = annotation_distance(profile, other);
                rows.push_str(&format!("{id},{:.6},{}\n", d.distance, d.doubly_neutral));
                ids.push(id.clone());
                distances.push(d.distance);
            }
        }
        if distances.is_empty() {
            return Err(Error::Alignment(
                "probability and soft-label files share no post ids".into(),
            ));
        }
        io::write_string(&ctx.out_path("annotation_distances.csv"), &rows)?;
        let n = distances.len() as f64;
        let mean = distances.iter().sum::<f64>() / n;
        let sd = if distances.len() > 1 {
            (distances.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        summary["compared_posts"] = json!(distances.len());
        summary["mean_distance"] = json!(mean);
        summary["sd_distance"] = json!(sd);

        if let Some(corpus_path) =
            resolve(corpus, ctx.config.paths.corpus.as_ref(), None)
        {
            let checked = require_paths(&[("corpus", Some(corpus_path.as_path()))])?;
            let outcome = io::read_posts(&checked["corpus"])?;
            let length_by_id: BTreeMap<&str, f64> = outcome
                .posts
                .iter()
                .map(|p| (p.id.as_str(), token_count(&p.text) as f64))
                .collect();
            let mut ds = Vec::new();
            let mut lengths = Vec::new();
            for (id, d) in ids.iter().zip(&distances) {
                if let Some(len) = length_by_id.get(id.as_str()) {
                    ds.push(*d);
                    lengths.push(*len);
                }
            }
            let beta = ctx.log.stage("regression", || discrepancy_length_regression(&ds, &lengths))?;
            summary["length_regression_beta"] = json!(beta);
            summary["length_regression_posts"] = json!(ds.len());
        }
    }

    Ok(summary)
}
