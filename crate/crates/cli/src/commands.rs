use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use comment_lens::category::CATEGORY_TASK;
use comment_lens::category::{map_syntax_features, CategoryLabel, KindMapping};
use comment_lens::corpus::{
    classify_records, grep_classified, ingest, mine_verb_noun, parse_manifest, project_category_stats, read_records,
    sample_comments, CommentRecord, CorpusError, IngestOptions, SampleSpec, Store,
};
use comment_lens::eval::{cohens_kappa, fleiss_kappa, kl_from_counts, AgreementTable, ConfusionMatrix, EvalReport};
use comment_lens::extent::{extent_at, extent_dataset, tags_from_extents, IobTag, EXTENT_TASK};
use comment_lens::pipeline::{text_dataset, LabeledExtent, Models};
use comment_lens::syntax::{parse_bytes, FileId, ParsedFile};
use comment_lens::target::{TargetLabel, TARGET_TASK};
use comment_lens::tree::TreeModel;
use log::{info, warn};
use rayon::prelude::*;
use serde_json::json;

use crate::args::{Cli, Command, LabelTask, ModelArgs, Task};
use crate::error::{fetch, usage};
use crate::server::{router, AnnotationState};

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Ingest {
            manifest,
            out,
            language,
            extent_model,
            bootstrap_labels,
            cache,
        } => cmd_ingest(
            &manifest,
            &out,
            language.map(Into::into),
            extent_model.as_deref(),
            bootstrap_labels,
            cache,
        ),
        Command::Sample {
            store,
            size,
            per_file_cap,
            out,
        } => cmd_sample(&store, size, per_file_cap, cli.seed, out.as_deref()),
        Command::Stats {
            store,
            models,
            top,
            json,
        } => cmd_stats(&store, &models, top, json),
        Command::Mine {
            store,
            models,
            category,
            top,
            json,
        } => cmd_mine(&store, &models, &category, top, json),
        Command::Grep {
            store,
            models,
            category,
            words,
            json,
        } => cmd_grep(&store, &models, &category, &words, json),
        Command::Train {
            task,
            store,
            records,
            out,
            min_examples,
            word_cap,
        } => cmd_train(task, &store, &records, &out, min_examples, word_cap),
        Command::Classify {
            store,
            models,
            records,
            out,
        } => cmd_classify(&store, &models, records.as_deref(), out.as_deref()),
        Command::Adapt { model, mapping, out } => cmd_adapt(&model, mapping.as_deref(), &out),
        Command::Eval {
            task,
            pairs,
            gold,
            predicted,
            json,
        } => cmd_eval(task, pairs.as_deref(), gold.as_deref(), predicted.as_deref(), json),
        Command::Agree { exports, task, json } => cmd_agree(&exports, task, json),
        Command::Kl {
            p,
            q,
            task,
            alpha,
            json,
        } => cmd_kl(&p, &q, task, alpha, json),
        Command::Annotate {
            serve,
            tasks,
            sessions,
            store,
            static_dir,
            host,
            port,
        } => {
            if !serve {
                return Err(usage("annotate runs only as a server; pass --serve"));
            }
            cmd_annotate(&tasks, &sessions, store.as_deref(), static_dir.as_deref(), &host, port)
        }
    }
}

fn require(path: &Path) -> Result<()> {
    if path.exists() {
        Ok(())
    } else {
        Err(usage(format!("{} does not exist", path.display())))
    }
}

fn open_store(path: &Path) -> Result<Store> {
    require(path)?;
    Ok(Store::open(path)?)
}

fn load_models(args: &ModelArgs) -> Result<Models> {
    let pick = |flag: &Option<PathBuf>, name: &str| -> Option<PathBuf> {
        flag.clone()
            .or_else(|| args.models.as_ref().map(|d| d.join(name)).filter(|p| p.exists()))
    };
    let target = pick(&args.target_model, "target.json")
        .ok_or_else(|| usage("no target model; pass --models DIR or --target-model"))?;
    let category = pick(&args.category_model, "category.json")
        .ok_or_else(|| usage("no category model; pass --models DIR or --category-model"))?;
    let extent = pick(&args.extent_model, "extent.json");
    for p in [Some(&target), Some(&category), extent.as_ref()].into_iter().flatten() {
        require(p)?;
    }
    Ok(Models::load(extent.as_deref(), &target, &category)?)
}

fn parse_category(s: &str) -> Result<CategoryLabel> {
    CategoryLabel::from_str(s).map_err(usage)
}

fn write_text(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => create_parent(p)
            .and_then(|_| Ok(fs::write(p, text)?))
            .with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn records_jsonl(records: &[CommentRecord]) -> String {
    records
        .iter()
        .map(|r| serde_json::to_string(r).expect("record serializes") + "\n")
        .collect()
}

fn read_all(paths: &[PathBuf]) -> Result<Vec<CommentRecord>> {
    let mut out = Vec::new();
    for p in paths {
        require(p)?;
        out.extend(read_records(p)?);
    }
    Ok(out)
}

fn cmd_ingest(
    manifest: &Path,
    out: &Path,
    language: Option<comment_lens::syntax::Language>,
    extent_model: Option<&Path>,
    bootstrap_labels: bool,
    cache_dir: PathBuf,
) -> Result<()> {
    require(manifest)?;
    let text = fs::read_to_string(manifest).with_context(|| format!("reading {}", manifest.display()))?;
    let base = manifest.parent().unwrap_or(Path::new("."));
    let projects = parse_manifest(&text, base, language)?;
    let model = match extent_model {
        Some(p) => {
            require(p)?;
            let m = TreeModel::load(p)?;
            m.expect_task(EXTENT_TASK)?;
            Some(m)
        }
        None => None,
    };
    let store = Store::create(out)?;
    let opts = IngestOptions {
        cache_dir,
        extent_model: model.as_ref(),
        bootstrap_labels,
    };
    let summary = ingest(&projects, &store, &opts)?;
    let mut text = format!(
        "{:<24} {:>7} {:>9} {:>9} {:>9} {:>11}\n",
        "project", "files", "sloc", "comments", "extents", "unparsable"
    );
    for p in &summary.projects {
        let _ = writeln!(
            text,
            "{:<24} {:>7} {:>9} {:>9} {:>9} {:>11}",
            p.name, p.files, p.sloc, p.comments, p.extents, p.unparsable
        );
    }
    for f in &summary.failed {
        let _ = writeln!(text, "{:<24} failed: {}", f.name, f.error);
    }
    write_text(None, &text)?;
    if summary.projects.is_empty() && !summary.failed.is_empty() {
        return Err(fetch(format!("all {} projects failed to fetch", summary.failed.len())));
    }
    Ok(())
}

fn cmd_sample(store: &Path, size: usize, per_file_cap: usize, seed: u64, out: Option<&Path>) -> Result<()> {
    if per_file_cap == 0 {
        return Err(usage("--per-file-cap must be at least 1"));
    }
    let store = open_store(store)?;
    let sample = sample_comments(
        &store.all_records()?,
        SampleSpec {
            size,
            per_file_cap,
            seed,
        },
    )?;
    info!("sampled {} comments with seed {seed}", sample.records.len());
    write_text(out, &records_jsonl(&sample.records))
}

fn cmd_stats(store: &Path, models: &ModelArgs, top: Option<usize>, as_json: bool) -> Result<()> {
    let store = open_store(store)?;
    let models = load_models(models)?;
    let mut stats = project_category_stats(&store, &models)?;
    if let Some(n) = top {
        stats.truncate(n);
    }
    if as_json {
        return write_text(None, &(serde_json::to_string_pretty(&stats)? + "\n"));
    }
    let mut text = format!("{:<24} {:>8}", "project", "comments");
    for l in CategoryLabel::ALL {
        let _ = write!(text, " {:>6}", l.short());
    }
    text.push('\n');
    for s in &stats {
        let _ = write!(text, "{:<24} {:>8}", s.project, s.comments);
        for l in CategoryLabel::ALL {
            let _ = write!(text, " {:>5.1}%", 100.0 * s.ratios[&l]);
        }
        text.push('\n');
    }
    write_text(None, &text)
}

fn cmd_mine(store: &Path, models: &ModelArgs, category: &str, top: usize, as_json: bool) -> Result<()> {
    let category = parse_category(category)?;
    let store = open_store(store)?;
    let models = load_models(models)?;
    let mut pairs = mine_verb_noun(&store, &models, category)?;
    pairs.truncate(top);
    if as_json {
        return write_text(None, &(serde_json::to_string_pretty(&pairs)? + "\n"));
    }
    let mut text = format!("{:>4}  {:<16} {:<16} {:>8}\n", "rank", "verb", "noun", "projects");
    for (i, p) in pairs.iter().enumerate() {
        let _ = writeln!(text, "{:>4}  {:<16} {:<16} {:>8}", i + 1, p.verb, p.noun, p.projects);
    }
    write_text(None, &text)
}

fn cmd_grep(store: &Path, models: &ModelArgs, category: &str, words: &[String], as_json: bool) -> Result<()> {
    let category = parse_category(category)?;
    let store = open_store(store)?;
    let models = load_models(models)?;
    let hits = grep_classified(&store, &models, category, words)?;
    if as_json {
        return write_text(None, &(serde_json::to_string_pretty(&hits)? + "\n"));
    }
    let mut text = String::new();
    for h in &hits {
        let r = &h.record;
        let _ = writeln!(text, "{}/{}:{}  {}", r.project, r.path, r.span.start_line, r.text);
        if let Some(t) = &h.target_text {
            let first = t.lines().next().unwrap_or("").trim();
            let _ = writeln!(text, "    -> {first}");
        }
    }
    write_text(None, &text)
}

/// Parses the source file of every group of records, in parallel.
fn parse_sources<'r>(store: &Store, records: &'r [CommentRecord]) -> Result<Vec<(ParsedFile, Vec<&'r CommentRecord>)>> {
    let mut groups: BTreeMap<(&str, &str), Vec<&CommentRecord>> = BTreeMap::new();
    for r in records {
        groups.entry(r.file_key()).or_default().push(r);
    }
    let groups: Vec<Vec<&CommentRecord>> = groups.into_values().collect();
    groups
        .into_par_iter()
        .enumerate()
        .map(|(i, members)| {
            let path = store.source_path(members[0])?;
            let bytes = fs::read(&path).with_context(|| format!("reading {}", path.display()))?;
            let file = parse_bytes(&bytes, members[0].language, FileId(i as u32))
                .with_context(|| format!("parsing {}", path.display()))?;
            Ok((file, members))
        })
        .collect()
}

fn cmd_train(
    task: Task,
    store: &Path,
    records: &[PathBuf],
    out: &Path,
    min_examples: usize,
    word_cap: usize,
) -> Result<()> {
    if min_examples == 0 {
        return Err(usage("--min-examples must be at least 1"));
    }
    let store = open_store(store)?;
    let records = if records.is_empty() {
        store.all_records()?
    } else {
        read_all(records)?
    };
    let (model, examples) = match task {
        Task::Extent => {
            let sources = parse_sources(&store, &records)?;
            let tags: Vec<Vec<IobTag>> = sources
                .iter()
                .map(|(file, members)| {
                    let spans: Vec<_> = members.iter().map(|r| r.span).collect();
                    tags_from_extents(file, &spans)
                })
                .collect();
            let ds = extent_dataset(sources.iter().zip(&tags).map(|((f, _), t)| (f, t.as_slice())))?;
            if ds.is_empty() {
                bail!("no comment tokens to learn extents from");
            }
            (TreeModel::train(EXTENT_TASK, &ds, min_examples)?, ds.len())
        }
        Task::Target | Task::Category => {
            let labeled: Vec<CommentRecord> = records
                .into_iter()
                .filter(|r| match task {
                    Task::Target => r.target.is_some(),
                    _ => r.category.is_some(),
                })
                .collect();
            if labeled.is_empty() {
                bail!("no records carry a {} label", task_name(task));
            }
            let sources = parse_sources(&store, &labeled)?;
            let mut items = Vec::with_capacity(labeled.len());
            for (file, members) in &sources {
                for r in members {
                    let extent = extent_at(file, &r.span).ok_or_else(|| CorpusError::MissingExtent {
                        path: PathBuf::from(&r.path),
                        line: r.span.start_line,
                    })?;
                    let label = match task {
                        Task::Target => r.target.expect("filtered").to_string(),
                        _ => r.category.expect("filtered").to_string(),
                    };
                    items.push(LabeledExtent { file, extent, label });
                }
            }
            let labels = match task {
                Task::Target => TargetLabel::names(),
                _ => CategoryLabel::names(),
            };
            let (ds, _) = text_dataset(labels, &items, word_cap)?;
            (TreeModel::train(task_name(task), &ds, min_examples)?, ds.len())
        }
    };
    create_parent(out)?;
    let rules = model.save(out)?;
    println!(
        "{}: {examples} examples, {} nodes, {} leaves, depth {}; rules in {}",
        model.task,
        model.tree.node_count(),
        model.tree.leaf_count(),
        model.tree.depth(),
        rules.display()
    );
    Ok(())
}

fn create_parent(path: &Path) -> Result<()> {
    match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => {
            fs::create_dir_all(d).with_context(|| format!("creating {}", d.display()))
        }
        _ => Ok(()),
    }
}

fn task_name(task: Task) -> &'static str {
    match task {
        Task::Extent => EXTENT_TASK,
        Task::Target => TARGET_TASK,
        Task::Category => CATEGORY_TASK,
    }
}

fn cmd_classify(store: &Path, models: &ModelArgs, records: Option<&Path>, out: Option<&Path>) -> Result<()> {
    let store = open_store(store)?;
    let models = load_models(models)?;
    let records = match records {
        Some(p) => read_all(&[p.to_path_buf()])?,
        None => store.all_records()?,
    };
    let classified = classify_records(&store, &records, &models)?;
    info!("classified {} records", classified.len());
    write_text(out, &records_jsonl(&classified))
}

fn cmd_adapt(model: &Path, mapping: Option<&Path>, out: &Path) -> Result<()> {
    require(model)?;
    let source = TreeModel::load(model)?;
    let mapping = match mapping {
        Some(p) => {
            require(p)?;
            KindMapping::load(p)?
        }
        None => KindMapping::java_to_python(),
    };
    let adapted = map_syntax_features(&source, &mapping)?;
    create_parent(out)?;
    let rules = adapted.save(out)?;
    println!(
        "{}: {} nodes, depth {} (unchanged); {} kind pairs; rules in {}",
        adapted.task,
        adapted.tree.node_count(),
        adapted.tree.depth(),
        mapping.len(),
        rules.display()
    );
    Ok(())
}

/// Canonical label name for the task; unknown names are data errors.
fn canonical(task: LabelTask, s: &str) -> Result<String> {
    match task {
        LabelTask::Category => CategoryLabel::from_str(s).map(|l| l.to_string()),
        LabelTask::Target => TargetLabel::from_str(s).map(|l| l.to_string()),
    }
    .map_err(|e| anyhow::anyhow!(e))
}

fn label_order(task: LabelTask) -> Vec<String> {
    match task {
        LabelTask::Category => CategoryLabel::names(),
        LabelTask::Target => TargetLabel::names(),
    }
}

fn record_label(task: LabelTask, r: &CommentRecord) -> Option<String> {
    match task {
        LabelTask::Category => r.category.map(|l| l.to_string()),
        LabelTask::Target => r.target.map(|l| l.to_string()),
    }
}

/// Reads `actual<TAB>predicted` lines; blank lines and `#` comments are skipped.
pub fn read_pairs(task: LabelTask, text: &str) -> Result<Vec<(String, String)>> {
    let mut pairs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 2 {
            bail!("line {}: expected actual<TAB>predicted", i + 1);
        }
        let actual = canonical(task, fields[0].trim()).with_context(|| format!("line {}", i + 1))?;
        let predicted = canonical(task, fields[1].trim()).with_context(|| format!("line {}", i + 1))?;
        pairs.push((actual, predicted));
    }
    Ok(pairs)
}

/// Confusion matrix over the labels that occur, in canonical order.
pub fn eval_report(task: LabelTask, pairs: &[(String, String)]) -> Result<EvalReport> {
    let seen: BTreeSet<&str> = pairs.iter().flat_map(|(a, p)| [a.as_str(), p.as_str()]).collect();
    let labels: Vec<String> = label_order(task)
        .into_iter()
        .filter(|l| seen.contains(l.as_str()))
        .collect();
    let m = ConfusionMatrix::from_pairs(labels, pairs.iter().map(|(a, p)| (a.as_str(), p.as_str())))?;
    Ok(EvalReport::new(m)?)
}

fn cmd_eval(
    task: LabelTask,
    pairs: Option<&Path>,
    gold: Option<&Path>,
    predicted: Option<&Path>,
    as_json: bool,
) -> Result<()> {
    let pairs = match (pairs, gold, predicted) {
        (Some(p), _, _) => {
            require(p)?;
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            read_pairs(task, &text).with_context(|| p.display().to_string())?
        }
        (None, Some(g), Some(p)) => {
            let gold = read_all(&[g.to_path_buf()])?;
            let predicted: HashMap<String, CommentRecord> = read_all(&[p.to_path_buf()])?
                .into_iter()
                .map(|r| (r.id.clone(), r))
                .collect();
            let mut pairs = Vec::new();
            for r in &gold {
                let Some(actual) = record_label(task, r) else {
                    continue;
                };
                let guess = predicted
                    .get(&r.id)
                    .and_then(|p| record_label(task, p))
                    .ok_or_else(|| anyhow::anyhow!("no predicted label for `{}`", r.id))?;
                pairs.push((actual, guess));
            }
            pairs
        }
        _ => return Err(usage("pass --pairs FILE, or --gold FILE with --predicted FILE")),
    };
    let report = eval_report(task, &pairs)?;
    if as_json {
        write_text(None, &(report.to_json() + "\n"))
    } else {
        write_text(None, &report.to_text())
    }
}

/// Agreement over items labeled by every annotator. Records without an
/// annotator are attributed to the stem of their file.
pub fn agreement(task: LabelTask, exports: &[(String, Vec<CommentRecord>)]) -> Result<serde_json::Value> {
    let mut by_item: BTreeMap<&str, BTreeMap<String, String>> = BTreeMap::new();
    let mut raters: BTreeSet<String> = BTreeSet::new();
    for (stem, records) in exports {
        for r in records {
            let Some(label) = record_label(task, r) else {
                continue;
            };
            let who = r.annotator.clone().unwrap_or_else(|| stem.clone());
            raters.insert(who.clone());
            by_item.entry(&r.id).or_default().insert(who, label);
        }
    }
    if raters.len() < 2 {
        bail!("agreement needs at least two annotators, found {}", raters.len());
    }
    let complete: Vec<Vec<String>> = by_item
        .values()
        .filter(|m| m.len() == raters.len())
        .map(|m| m.values().cloned().collect())
        .collect();
    let skipped = by_item.len() - complete.len();
    if skipped > 0 {
        warn!("{skipped} items not labeled by every annotator are left out");
    }
    if complete.is_empty() {
        bail!("no item is labeled by every annotator");
    }
    let fleiss = fleiss_kappa(&AgreementTable::from_ratings(&complete)?)?;
    let cohen = if raters.len() == 2 {
        let pairs: Vec<(&str, &str)> = complete.iter().map(|v| (v[0].as_str(), v[1].as_str())).collect();
        Some(cohens_kappa(&pairs)?)
    } else {
        None
    };
    let unanimous = complete.iter().filter(|v| v.iter().all(|l| *l == v[0])).count();
    Ok(json!({
        "items": complete.len(),
        "skipped": skipped,
        "raters": raters,
        "unanimous": unanimous as f64 / complete.len() as f64,
        "fleiss_kappa": fleiss,
        "cohen_kappa": cohen,
    }))
}

fn cmd_agree(exports: &[PathBuf], task: LabelTask, as_json: bool) -> Result<()> {
    let mut loaded = Vec::new();
    for p in exports {
        require(p)?;
        let stem = p
            .file_stem()
            .map(|s| s.to_string_lossy().to_string())
            .unwrap_or_default();
        loaded.push((stem, read_records(p)?));
    }
    let v = agreement(task, &loaded)?;
    if as_json {
        return write_text(None, &(serde_json::to_string_pretty(&v)? + "\n"));
    }
    let raters: Vec<&str> = v["raters"]
        .as_array()
        .into_iter()
        .flatten()
        .filter_map(|r| r.as_str())
        .collect();
    let mut text = format!("items {}\nraters {}\n", v["items"], raters.join(", "));
    let _ = writeln!(text, "unanimous {:.3}", v["unanimous"].as_f64().unwrap_or(0.0));
    let _ = writeln!(
        text,
        "fleiss_kappa {:.4}",
        v["fleiss_kappa"].as_f64().unwrap_or(f64::NAN)
    );
    if let Some(c) = v["cohen_kappa"].as_f64() {
        let _ = writeln!(text, "cohen_kappa {c:.4}");
    }
    write_text(None, &text)
}

fn label_histogram(task: LabelTask, records: &[CommentRecord]) -> Vec<f64> {
    let order = label_order(task);
    let mut counts = vec![0.0; order.len()];
    for l in records.iter().filter_map(|r| record_label(task, r)) {
        if let Some(i) = order.iter().position(|o| *o == l) {
            counts[i] += 1.0;
        }
    }
    counts
}

fn cmd_kl(p: &Path, q: &Path, task: LabelTask, alpha: f64, as_json: bool) -> Result<()> {
    if !(alpha > 0.0) {
        return Err(usage("--alpha must be positive"));
    }
    let pc = label_histogram(task, &read_all(&[p.to_path_buf()])?);
    let qc = label_histogram(task, &read_all(&[q.to_path_buf()])?);
    for (counts, path) in [(&pc, p), (&qc, q)] {
        if counts.iter().sum::<f64>() == 0.0 {
            bail!("{}: no labeled records", path.display());
        }
    }
    let kl = kl_from_counts(&pc, &qc, alpha)?;
    if as_json {
        let v = json!({ "labels": label_order(task), "p": pc, "q": qc, "alpha": alpha, "kl": kl });
        return write_text(None, &(serde_json::to_string_pretty(&v)? + "\n"));
    }
    let mut text = format!("{:<20} {:>8} {:>8}\n", "label", "p", "q");
    for (i, l) in label_order(task).iter().enumerate() {
        let _ = writeln!(text, "{l:<20} {:>8} {:>8}", pc[i], qc[i]);
    }
    let _ = writeln!(text, "kl {kl:.4}");
    write_text(None, &text)
}

fn cmd_annotate(
    tasks: &Path,
    sessions: &Path,
    store: Option<&Path>,
    static_dir: Option<&Path>,
    host: &str,
    port: u16,
) -> Result<()> {
    require(tasks)?;
    if let Some(d) = static_dir {
        require(d)?;
    }
    let store = store.map(open_store).transpose()?;
    let state = AnnotationState::open(read_records(tasks)?, sessions, store)?;
    let app = router(state, static_dir);
    let addr: SocketAddr = format!("{host}:{port}")
        .parse()
        .map_err(|e| usage(format!("bad address {host}:{port}: {e}")))?;
    let rt = tokio::runtime::Runtime::new()?;
    rt.block_on(async move {
        let listener = tokio::net::TcpListener::bind(addr)
            .await
            .with_context(|| format!("binding {addr}"))?;
        println!("listening on http://{}", listener.local_addr()?);
        axum::serve(listener, app)
            .with_graceful_shutdown(async {
                let _ = tokio::signal::ctrl_c().await;
            })
            .await?;
        Ok(())
    })
}
