use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use serde_json::{json, Value};
use valuekit::agreement::{
    expert_level_vs_votes, fleiss_kappa, icc_oneway, prf1, tier_comparison, BinaryComparison,
    IccEstimate, RatingTable, ScoreTable,
};
use valuekit::annotate::AnnotationMatrix;
use valuekit::circle::{critical_discrepancies, domains_of, ValueDomain, ValueType};
use valuekit::error::{Error, Result};
use valuekit::report;
use valuekit::soft::majority_label;

use crate::commands::resolve;
use crate::config::require_paths;
use crate::io::ExpertLabels;
use crate::{io, Ctx};

/// Per-value positive-vote counts from complete matrix cells, keyed by post.
fn gpt_votes(matrix: &AnnotationMatrix) -> BTreeMap<(String, ValueType), u8> {
    matrix
        .iter()
        .filter_map(|((post, value), _)| {
            matrix.votes(post, *value).map(|v| ((post.clone(), *value), v))
        })
        .collect()
}

fn value_kappa(votes_by_cell: &BTreeMap<(String, ValueType), u8>, raters: u32) -> BTreeMap<ValueType, Option<f64>> {
    let mut out = BTreeMap::new();
    for value in ValueType::ALL {
        let votes: Vec<u32> = votes_by_cell
            .iter()
            .filter(|((_, v), _)| *v == value)
            .map(|(_, votes)| u32::from(*votes))
            .collect();
        let kappa = RatingTable::from_binary_votes(&votes, raters)
            .and_then(|t| fleiss_kappa(&t))
            .ok();
        out.insert(value, kappa);
    }
    out
}

pub fn run(
    ctx: &mut Ctx,
    annotations: Option<PathBuf>,
    expert: Option<PathBuf>,
    runs: Option<usize>,
) -> Result<Value> {
    let n_runs = runs.unwrap_or(ctx.config.annotation.runs);
    let annotations_path = resolve(
        annotations,
        ctx.config.paths.annotations.as_ref(),
        Some(ctx.out_path("annotations.jsonl")),
    );
    let expert_path = resolve(expert, ctx.config.paths.expert.as_ref(), None);
    let paths = require_paths(&[
        ("annotations", annotations_path.as_deref()),
        ("expert", expert_path.as_deref()),
    ])?;

    let matrix =
        ctx.log.stage("load", || io::read_annotation_matrix(&paths["annotations"], n_runs))?;
    let expert: ExpertLabels = io::read_expert(&paths["expert"])?;

    let raters = expert
        .values()
        .next()
        .map(Vec::len)
        .ok_or_else(|| Error::Input("expert file is empty".into()))?;
    if let Some(((post, value), _)) = expert.iter().find(|(_, l)| l.len() != raters) {
        return Err(Error::Input(format!(
            "expert rater count varies: {post}/{value} has a different number of labels"
        )));
    }
    let quorum = raters / 2 + 1;

    // majority labels and vote counts per cell
    let gpt = gpt_votes(&matrix);
    let mut expert_votes: BTreeMap<(String, ValueType), u8> = BTreeMap::new();
    let mut expert_majority: BTreeMap<(String, ValueType), u8> = BTreeMap::new();
    for (key, labels) in &expert {
        let votes = labels.iter().filter(|l| **l == 1).count() as u8;
        expert_votes.insert(key.clone(), votes);
        expert_majority.insert(key.clone(), majority_label(labels, quorum)?);
    }

    // Table 1 layout: interrater kappa per source
    let kappa_gpt = value_kappa(&gpt, matrix.runs_per_cell() as u32);
    let kappa_expert = value_kappa(&expert_votes, raters as u32);
    let kappa_rows: BTreeMap<ValueType, (Option<f64>, Option<f64>)> = ValueType::ALL
        .into_iter()
        .map(|v| (v, (kappa_gpt.get(&v).copied().flatten(), kappa_expert.get(&v).copied().flatten())))
        .collect();
    io::write_string(&ctx.out_path("kappa.csv"), &report::kappa_csv(&kappa_rows)?)?;

    // Table 2 layout: tier comparison against expert majority
    let tiers = ctx.log.stage("tiers", || tier_comparison(&matrix, &expert_majority))?;
    io::write_string(&ctx.out_path("tiers.csv"), &report::tier_csv(&tiers)?)?;

    // ICC between mean expert and mean annotation scores
    let mut icc_rows: BTreeMap<ValueType, IccEstimate> = BTreeMap::new();
    let mut pooled: Vec<Vec<f64>> = Vec::new();
    for value in ValueType::ALL {
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for ((post, v), e_votes) in &expert_votes {
            if *v == value {
                if let Some(g_votes) = gpt.get(&(post.clone(), value)) {
                    let row = vec![
                        f64::from(*e_votes) / raters as f64,
                        f64::from(*g_votes) / matrix.runs_per_cell() as f64,
                    ];
                    rows.push(row.clone());
                    pooled.push(row);
                }
            }
        }
        if let Ok(table) = ScoreTable::new(rows) {
            if let Ok(icc) = icc_oneway(&table, 2) {
                icc_rows.insert(value, icc);
            }
        }
    }
    let overall_icc = ScoreTable::new(pooled).ok().and_then(|t| icc_oneway(&t, 2).ok());
    io::write_string(&ctx.out_path("icc.csv"), &report::icc_csv(&icc_rows, overall_icc.as_ref())?)?;

    // expert agreement level vs annotation votes (3-expert protocol only)
    let mut rho = None;
    if raters == 3 {
        let assoc = expert_level_vs_votes(&matrix, &expert_votes)?;
        rho = assoc.rho;
        io::write_string(&ctx.out_path("vote_association.csv"), &report::vote_association_csv(&assoc)?)?;
    }

    // Table 3 layout: per-value expert kappa + majority-vs-majority F1
    let mut value_rows: BTreeMap<ValueType, (Option<f64>, f64)> = BTreeMap::new();
    for value in ValueType::ALL {
        let mut predicted = Vec::new();
        let mut reference = Vec::new();
        for ((post, v), maj) in &expert_majority {
            if *v == value {
                if let Some(votes) = gpt.get(&(post.clone(), value)) {
                    predicted.push(u8::from(*votes >= 3));
                    reference.push(*maj);
                }
            }
        }
        if predicted.is_empty() {
            continue;
        }
        let f1 = prf1(&BinaryComparison::new(predicted, reference)?).f1;
        value_rows.insert(value, (kappa_expert.get(&value).copied().flatten(), f1));
    }
    io::write_string(&ctx.out_path("value_agreement.csv"), &report::value_agreement_csv(&value_rows)?)?;

    // domain-level aggregation
    let posts: BTreeSet<String> = expert_majority.keys().map(|(p, _)| p.clone()).collect();
    let mut expert_domains: BTreeMap<String, BTreeSet<ValueDomain>> = BTreeMap::new();
    let mut gpt_domains: BTreeMap<String, BTreeSet<ValueDomain>> = BTreeMap::new();
    for post in &posts {
        let expert_positive: BTreeSet<ValueType> = ValueType::ALL
            .into_iter()
            .filter(|v| expert_majority.get(&(post.clone(), *v)) == Some(&1))
            .collect();
        let gpt_positive: BTreeSet<ValueType> = ValueType::ALL
            .into_iter()
            .filter(|v| gpt.get(&(post.clone(), *v)).is_some_and(|votes| *votes >= 3))
            .collect();
        expert_domains.insert(post.clone(), domains_of(&expert_positive));
        gpt_domains.insert(post.clone(), domains_of(&gpt_positive));
    }

    // Table 4 layout: per-domain expert kappa (per-rater OR over member
    // values) and majority-vs-majority F1
    let mut domain_rows: BTreeMap<ValueDomain, (Option<f64>, f64)> = BTreeMap::new();
    for domain in ValueDomain::ALL {
        let mut votes = Vec::new();
        let mut predicted = Vec::new();
        let mut reference = Vec::new();
        for post in &posts {
            let mut rater_or = vec![0u8; raters];
            for value in domain.members() {
                if let Some(labels) = expert.get(&(post.clone(), *value)) {
                    for (r, l) in labels.iter().enumerate() {
                        rater_or[r] |= l;
                    }
                }
            }
            votes.push(u32::from(rater_or.iter().filter(|l| **l == 1).count() as u32));
            predicted.push(u8::from(gpt_domains[post].contains(&domain)));
            reference.push(u8::from(expert_domains[post].contains(&domain)));
        }
        let kappa = RatingTable::from_binary_votes(&votes, raters as u32)
            .and_then(|t| fleiss_kappa(&t))
            .ok();
        let f1 = prf1(&BinaryComparison::new(predicted, reference)?).f1;
        domain_rows.insert(domain, (kappa, f1));
    }
    io::write_string(&ctx.out_path("domain_agreement.csv"), &report::domain_agreement_csv(&domain_rows)?)?;

    // Table 5 layout: critical discrepancies
    let discrepancies = critical_discrepancies(&expert_domains, &gpt_domains)?;
    io::write_string(&ctx.out_path("discrepancies.csv"), &report::discrepancy_csv(&discrepancies)?)?;

    let mean = |m: &BTreeMap<ValueType, Option<f64>>| -> Option<f64> {
        let present: Vec<f64> = m.values().flatten().copied().collect();
        if present.is_empty() {
            None
        } else {
            Some(present.iter().sum::<f64>() / present.len() as f64)
        }
    };
    Ok(json!({
        "command": "agree",
        "posts": posts.len(),
        "cells": expert_majority.len(),
        "expert_raters": raters,
        "mean_kappa_gpt": mean(&kappa_gpt),
        "mean_kappa_experts": mean(&kappa_expert),
        "overall_icc_average": overall_icc.and_then(|i| i.average),
        "vote_association_rho": rho,
        "tier_mean_f1": {
            "majority": tiers.mean[0].f1,
            "almost_unanimous": tiers.mean[1].f1,
            "unanimous": tiers.mean[2].f1,
        },
        "critical_discrepancy_cells": discrepancies.total_discrepant_posts(),
    }))
}
