use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::time::Duration;

use serde_json::{json, Value};
use valuekit::annotate::{
    collect_runs, AnnotationProvider, BatchItem, CollectConfig, HttpProvider, MockProvider,
    ReplayProvider, RetryPolicy,
};
use valuekit::corpus::{scrub_post, FilterVerdict};
use valuekit::error::{Error, Result};

use crate::commands::resolve;
use crate::config::require_paths;
use crate::{io, Ctx};

pub struct Args {
    pub corpus: Option<PathBuf>,
    pub verdicts: Option<PathBuf>,
    pub provider: Option<String>,
    pub mock_file: Option<PathBuf>,
    pub replay: Option<PathBuf>,
    pub endpoint: Option<String>,
    pub runs: Option<usize>,
    pub batch_size: Option<usize>,
}

pub fn run(ctx: &mut Ctx, args: Args) -> Result<Value> {
    let corpus_path = resolve(args.corpus, ctx.config.paths.corpus.as_ref(), None);
    let paths = require_paths(&[("corpus", corpus_path.as_deref())])?;

    let outcome = ctx.log.stage("parse", || io::read_posts(&paths["corpus"]))?;
    let mut posts = outcome.posts;
    if ctx.config.filter.scrub {
        for post in &mut posts {
            scrub_post(post);
        }
    }

    if let Some(verdicts_path) = args.verdicts {
        let verdicts: Vec<FilterVerdict> = io::read_jsonl(&verdicts_path)?;
        let keep: BTreeSet<String> = verdicts
            .into_iter()
            .filter(|v| v.passed_language_gate && !v.spam)
            .map(|v| v.post_id)
            .collect();
        posts.retain(|p| keep.contains(&p.id));
    }
    let items: Vec<BatchItem> =
        posts.iter().map(|p| BatchItem { id: p.id.clone(), text: p.text.clone() }).collect();

    let a = &ctx.config.annotation;
    let provider_kind = args.provider.unwrap_or_else(|| a.provider.clone());
    let provider: Box<dyn AnnotationProvider> = match provider_kind.as_str() {
        "mock" => {
            let mock_path = resolve(args.mock_file, a.mock_file.as_ref(), None);
            let paths = require_paths(&[("mock-file", mock_path.as_deref())])?;
            let file = File::open(&paths["mock-file"])?;
            Box::new(MockProvider::from_reader(BufReader::new(file))?)
        }
        "replay" => {
            let replay_path =
                resolve(args.replay, a.replay.as_ref(), Some(ctx.out_path("replay.log")));
            let paths = require_paths(&[("replay", replay_path.as_deref())])?;
            let file = File::open(&paths["replay"])?;
            Box::new(ReplayProvider::from_reader(BufReader::new(file))?)
        }
        "http" => {
            let endpoint = args.endpoint.clone().unwrap_or_else(|| a.endpoint.clone());
            if endpoint.is_empty() {
                return Err(Error::Config("http provider needs --endpoint".into()));
            }
            Box::new(HttpProvider::new(
                endpoint,
                a.bearer_token.clone(),
                Duration::from_secs(a.timeout_secs),
            ))
        }
        other => {
            return Err(Error::Config(format!(
                "provider must be mock, replay, or http, got `{other}`"
            )))
        }
    };

    let collect_config = CollectConfig {
        n_runs: args.runs.unwrap_or(a.runs),
        batch_size: args.batch_size.unwrap_or(a.batch_size),
        base_seed: ctx.seed(ctx.config.seeds.batches),
        template_id: a.template_id.clone(),
        // a replay session never needs to sleep between attempts
        retry: if provider_kind == "replay" {
            RetryPolicy::immediate(1)
        } else {
            RetryPolicy::default()
        },
    };

    let replay_out = ctx.out_path("replay.log");
    let mut replay_writer = BufWriter::new(File::create(&replay_out)?);
    let outcome = ctx.log.stage("collect", || {
        collect_runs(&items, provider.as_ref(), &collect_config, Some(&mut replay_writer))
    })?;
    replay_writer.flush()?;

    io::write_jsonl(&ctx.out_path("annotations.jsonl"), &outcome.matrix.records())?;
    if !outcome.missing.is_empty() {
        io::write_jsonl(&ctx.out_path("incomplete.jsonl"), &outcome.missing)?;
    }

    Ok(json!({
        "command": "annotate",
        "provider": provider_kind,
        "posts": items.len(),
        "cells": outcome.matrix.len(),
        "runs_per_cell": outcome.matrix.runs_per_cell(),
        "complete": outcome.matrix.is_complete(),
        "missing_slots": outcome.missing.len(),
        "retries": outcome.retries,
    }))
}
