//! Subcommand implementations: thin compositions of the core modules over
//! the file formats. Every command stages its outputs and commits them
//! only on success.

use std::collections::HashSet;
use std::path::Path;

use anyhow::Context;
use rayon::prelude::*;

use embio_core::domainshift::{self, ShiftVector};
use embio_core::evalkit::{self, PairLabel};
use embio_core::hypersphere::{self, BetaParams};
use embio_core::identitybank::{self, IdentityRecord, SimilarityAggregate};
use embio_core::sampler::{self, PlanParams, SamplePlan};

use crate::cli;
use crate::config::RunConfig;
use crate::emb1::{self, ShiftSidecar};
use crate::error::FormatError;
use crate::manifest;
use crate::pairs;
use crate::planio;
use crate::report::{self, TarReport, VerifyReport};
use crate::stage::OutputStager;

/// Load an EMB1 matrix plus its label manifest and group it into identity
/// records, optionally restricted to a keep list.
fn load_bank(
    emb_path: &Path,
    labels_path: &Path,
    keep: Option<&HashSet<String>>,
) -> anyhow::Result<Vec<IdentityRecord>> {
    let matrix = emb1::read_matrix(emb_path)?;
    let rows = manifest::read_manifest(labels_path)?;
    manifest::check_rows(labels_path, &rows, matrix.count())?;
    let entries: Vec<(String, Vec<f64>)> = rows
        .into_iter()
        .filter(|r| keep.is_none_or(|k| k.contains(&r.label)))
        .map(|r| {
            let vector = matrix.rows()[r.row].clone();
            (r.label, vector)
        })
        .collect();
    let bank = identitybank::build_bank(entries)
        .with_context(|| format!("building identity bank from {}", labels_path.display()))?;
    Ok(bank)
}

/// Read a keep list: CSV with a single `label` header column.
fn read_keep(path: &Path) -> Result<HashSet<String>, FormatError> {
    let bad = |line: usize, what: String| FormatError::BadPairs {
        path: path.to_path_buf(),
        line,
        what,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| FormatError::io(path, std::io::Error::other(e.to_string())))?;
    let headers = reader.headers().map_err(|e| bad(1, e.to_string()))?.clone();
    if headers.iter().map(str::trim).collect::<Vec<_>>() != ["label"] {
        return Err(bad(1, "keep list header must be exactly \"label\"".into()));
    }
    let mut keep = HashSet::new();
    for record in reader.records() {
        let record = record.map_err(|e| bad(0, e.to_string()))?;
        if let Some(label) = record.get(0) {
            keep.insert(label.trim().to_string());
        }
    }
    Ok(keep)
}

pub fn estimate_shift(args: &cli::EstimateShiftArgs, force: bool) -> anyhow::Result<()> {
    let target = emb1::read_matrix(&args.target)?;
    let source = emb1::read_matrix(&args.source)?;
    let shift = domainshift::estimate_shift(target.rows(), source.rows()).with_context(|| {
        format!(
            "estimating shift from {} (target) and {} (source)",
            args.target.display(),
            args.source.display()
        )
    })?;

    let sidecar = ShiftSidecar {
        source_count: shift.source_count(),
        target_count: shift.target_count(),
        strength: 1.0,
    };
    let sidecar_out = emb1::sidecar_path(&args.out);
    let delta_rows = vec![shift.delta().to_vec()];

    let mut stager = OutputStager::new();
    stager.reserve(&args.out, force)?;
    stager.reserve(&sidecar_out, force)?;
    stager.write(&args.out, &emb1::encode(&args.out, &delta_rows, shift.dim())?)?;
    stager.write(&sidecar_out, &report::to_json_bytes(&sidecar))?;
    stager.commit()?;
    Ok(())
}

pub fn apply_shift(args: &cli::ApplyShiftArgs, force: bool) -> anyhow::Result<()> {
    let config = RunConfig::load(args.config.as_deref())?;
    let strength = args.strength.unwrap_or(config.shift_strength);

    let matrix = emb1::read_matrix(&args.input)?;
    let delta_matrix = emb1::read_matrix(&args.delta)?;
    anyhow::ensure!(
        delta_matrix.count() == 1,
        "{}: a shift file must hold exactly 1 row, found {}",
        args.delta.display(),
        delta_matrix.count()
    );

    // The sidecar is provenance; fall back to unit counts when it is absent.
    let sidecar_file = emb1::sidecar_path(&args.delta);
    let (source_count, target_count) = if sidecar_file.exists() {
        let sidecar = emb1::read_sidecar(&sidecar_file)?;
        (sidecar.source_count, sidecar.target_count)
    } else {
        (1, 1)
    };
    let shift = ShiftVector::new(
        delta_matrix.rows()[0].clone(),
        source_count,
        target_count,
    )?;

    let corrected: Vec<Vec<f64>> = matrix
        .rows()
        .par_iter()
        .map(|row| domainshift::apply_shift_scaled(row, &shift, strength))
        .collect::<embio_core::Result<_>>()
        .with_context(|| format!("applying shift to {}", args.input.display()))?;

    let mut stager = OutputStager::new();
    stager.reserve(&args.out, force)?;
    stager.write(&args.out, &emb1::encode(&args.out, &corrected, matrix.dim())?)?;
    stager.commit()?;
    Ok(())
}

pub fn prototype(args: &cli::PrototypeArgs, force: bool) -> anyhow::Result<()> {
    let bank = load_bank(&args.input, &args.labels, None)?;
    let rows: Vec<Vec<f64>> = if args.no_renormalize {
        bank.iter()
            .map(|record| {
                hypersphere::prototype(record.sources(), false)
                    .map(|p| p.into_values())
                    .map_err(|e| e.for_identity(record.label()))
            })
            .collect::<embio_core::Result<_>>()?
    } else {
        bank.iter()
            .map(|record| record.prototype().values().to_vec())
            .collect()
    };
    let dim = rows.first().map(|r| r.len()).unwrap_or(0);

    let labels_out = args
        .out_labels
        .clone()
        .unwrap_or_else(|| args.out.with_extension("jsonl"));
    let manifest_bytes =
        manifest::encode_manifest(bank.iter().enumerate().map(|(i, r)| (r.label(), i)));

    let mut stager = OutputStager::new();
    stager.reserve(&args.out, force)?;
    stager.reserve(&labels_out, force)?;
    stager.write(&args.out, &emb1::encode(&args.out, &rows, dim)?)?;
    stager.write(&labels_out, &manifest_bytes)?;
    stager.commit()?;
    Ok(())
}

pub fn filter_ids(args: &cli::FilterIdsArgs, force: bool) -> anyhow::Result<()> {
    let config = RunConfig::load(args.config.as_deref())?;
    let k = args
        .top_k
        .or(config.top_k_identities)
        .context("--top-k or the top_k_identities config key is required")?;
    let aggregate = match args.aggregate {
        cli::AggregateArg::Max => SimilarityAggregate::Max,
        cli::AggregateArg::Mean => SimilarityAggregate::Mean,
    };

    let bank = load_bank(&args.prototypes, &args.labels, None)?;
    let reports = identitybank::score_identities_with(&bank, aggregate)?;
    let keep = identitybank::filter_top_k(&reports, k)?;

    let mut keep_csv = csv::Writer::from_writer(Vec::new());
    keep_csv.write_record(["label"])?;
    for label in &keep {
        keep_csv.write_record([label.as_str()])?;
    }
    let keep_bytes = keep_csv.into_inner()?;

    let mut stager = OutputStager::new();
    stager.reserve(&args.out, force)?;
    if let Some(scores_out) = &args.scores {
        stager.reserve(scores_out, force)?;
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["label", "score", "nearest_label"])?;
        for r in &reports {
            w.write_record([r.label.as_str(), &r.score.to_string(), r.nearest_label.as_str()])?;
        }
        stager.write(scores_out, &w.into_inner()?)?;
    }
    stager.write(&args.out, &keep_bytes)?;
    stager.commit()?;
    Ok(())
}

pub fn sample(args: &cli::SampleArgs, force: bool) -> anyhow::Result<()> {
    let config = RunConfig::load(args.config.as_deref())?;
    let keep = args.keep.as_deref().map(read_keep).transpose()?;
    let bank = load_bank(&args.bank, &args.labels, keep.as_ref())?;

    let params = PlanParams {
        images_per_id: config.images_per_id,
        beta: BetaParams::new(config.alpha, config.beta)?,
        max_sources: config.sources_per_id,
        global_seed: config.global_seed,
    };

    // The collector orders output by (label, entry index); per-entry seeds
    // make the result independent of worker count.
    let mut records: Vec<&IdentityRecord> = bank.iter().collect();
    records.sort_by(|a, b| a.label().cmp(b.label()));

    let plans: Vec<SamplePlan> = records
        .par_iter()
        .map(|record| sampler::make_plan(record, &params))
        .collect::<embio_core::Result<_>>()?;
    let executed: Vec<Vec<f64>> = records
        .par_iter()
        .zip(&plans)
        .map(|(record, plan)| {
            sampler::execute_plan(record, plan).map(|embs| {
                embs.into_iter()
                    .map(|e| e.into_values())
                    .collect::<Vec<Vec<f64>>>()
            })
        })
        .collect::<embio_core::Result<Vec<_>>>()
        .context("executing sampling plans")?
        .into_iter()
        .flatten()
        .collect();
    let dim = records
        .first()
        .map(|r| r.prototype().dim())
        .unwrap_or(0);

    let mut stager = OutputStager::new();
    stager.reserve(&args.out_plan, force)?;
    stager.reserve(&args.out_emb, force)?;
    stager.write(&args.out_plan, &planio::encode_plans(&plans))?;
    stager.write(&args.out_emb, &emb1::encode(&args.out_emb, &executed, dim)?)?;
    stager.commit()?;
    Ok(())
}

pub fn eval_verify(args: &cli::EvalVerifyArgs, force: bool) -> anyhow::Result<()> {
    let config = RunConfig::load(args.config.as_deref())?;
    let folds = args.folds.unwrap_or(config.folds);

    let matrix = emb1::read_matrix(&args.emb)?;
    let pair_list = pairs::read_pairs(&args.pairs)?;
    let scores = evalkit::score_pairs(matrix.rows(), &pair_list)
        .with_context(|| format!("scoring pairs from {}", args.pairs.display()))?;

    let accuracy = evalkit::kfold_accuracy(&scores, folds)
        .with_context(|| format!("evaluating pairs from {}", args.pairs.display()))?;
    let groups = if !pair_list.is_empty() && pair_list.iter().all(|p| p.group().is_some()) {
        Some(
            evalkit::group_accuracy(&scores, folds)
                .with_context(|| format!("evaluating pairs from {}", args.pairs.display()))?,
        )
    } else {
        None
    };
    let body = VerifyReport::new(pair_list.len(), folds, &accuracy, groups.as_ref());

    let mut stager = OutputStager::new();
    stager.reserve(&args.report, force)?;
    stager.write(&args.report, &report::to_json_bytes(&body))?;
    stager.commit()?;
    Ok(())
}

pub fn eval_tar(args: &cli::EvalTarArgs, force: bool) -> anyhow::Result<()> {
    let config = RunConfig::load(args.config.as_deref())?;
    let far_target = args.far.unwrap_or(config.far_target);

    let matrix = emb1::read_matrix(&args.emb)?;
    let pair_list = pairs::read_pairs(&args.pairs)?;
    let scores = evalkit::score_pairs(matrix.rows(), &pair_list)
        .with_context(|| format!("scoring pairs from {}", args.pairs.display()))?;

    let operating_point = evalkit::tar_at_far(&scores, far_target)
        .with_context(|| format!("evaluating pairs from {}", args.pairs.display()))?;
    let genuine = pair_list
        .iter()
        .filter(|p| p.label() == PairLabel::Genuine)
        .count();
    let body = TarReport::new(
        far_target,
        genuine,
        pair_list.len() - genuine,
        &operating_point,
    );

    let mut stager = OutputStager::new();
    stager.reserve(&args.report, force)?;
    if let Some(roc_out) = &args.roc_csv {
        stager.reserve(roc_out, force)?;
        let curve = evalkit::roc(&scores)?;
        stager.write(roc_out, &report::roc_csv_bytes(&curve))?;
    }
    stager.write(&args.report, &report::to_json_bytes(&body))?;
    stager.commit()?;
    Ok(())
}

pub fn synth_clusters(args: &cli::SynthClustersArgs, force: bool) -> anyhow::Result<()> {
    let spec = sampler::ClusterSpec::new(
        args.ids,
        args.dim,
        args.per_id,
        args.concentration,
        args.seed,
    )?;
    let data = sampler::gen_clusters(&spec);
    let rows: Vec<Vec<f64>> = data.iter().map(|(_, v)| v.clone()).collect();
    let manifest_bytes = manifest::encode_manifest(
        data.iter()
            .enumerate()
            .map(|(i, (label, _))| (label.as_str(), i)),
    );

    let mut stager = OutputStager::new();
    stager.reserve(&args.out_emb, force)?;
    stager.reserve(&args.out_labels, force)?;
    stager.write(&args.out_emb, &emb1::encode(&args.out_emb, &rows, spec.dim)?)?;
    stager.write(&args.out_labels, &manifest_bytes)?;
    stager.commit()?;
    Ok(())
}

