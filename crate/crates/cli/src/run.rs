use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use sensespace::annotator::{annotate_corpus, corpus_stats, ConnectivityParams};
use sensespace::eval::{
    eval_mcs, eval_similarity, nearest_neighbors, read_clustering, read_similarity, read_wsd, sense_clustering,
    tune_gamma, EvalReport, VectorSpace,
};
use sensespace::format::read_annotated;
use sensespace::model::{build_vocab, export_embeddings, train, Embeddings, TrainConfig};
use sensespace::semnet::{load_lexicon, load_network, parse_lexicon, Lexicon, SemanticNetwork, SynsetId};
use sensespace::Error;
use tempfile::NamedTempFile;

use crate::args::*;
use crate::CliError;

type Result<T> = std::result::Result<T, CliError>;

/// Data error located in `path`.
fn in_file(path: &Path) -> impl Fn(Error) -> CliError + '_ {
    move |e| match e {
        Error::Parse { line, message } => CliError::Data(format!("{}:{line}: {message}", path.display())),
        other => CliError::Data(format!("{}: {other}", path.display())),
    }
}

fn data(e: Error) -> CliError {
    CliError::Data(e.to_string())
}

fn usage(e: Error) -> CliError {
    CliError::Usage(e.to_string())
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> CliError + '_ {
    move |e| CliError::Data(format!("{}: {e}", path.display()))
}

/// Fail before any work starts if an input is missing or an output
/// directory does not exist.
fn check_paths(inputs: &[&Path], outputs: &[&Path]) -> Result<()> {
    for p in inputs {
        if !p.is_file() {
            return Err(CliError::Data(format!("{}: no such file", p.display())));
        }
    }
    for p in outputs {
        let dir = output_dir(p);
        if !dir.is_dir() {
            return Err(CliError::Data(format!("{}: directory does not exist", dir.display())));
        }
    }
    Ok(())
}

fn output_dir(path: &Path) -> &Path {
    match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    }
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(io_err(path))
}

/// Write through a temporary file in the target's directory, renamed into
/// place once complete.
fn write_atomic<T>(path: &Path, f: impl FnOnce(&mut BufWriter<&mut NamedTempFile>) -> Result<T>) -> Result<T> {
    let mut tmp = NamedTempFile::new_in(output_dir(path)).map_err(io_err(path))?;
    let value = {
        let mut w = BufWriter::new(&mut tmp);
        let value = f(&mut w)?;
        w.flush().map_err(io_err(path))?;
        value
    };
    tmp.as_file().sync_all().map_err(io_err(path))?;
    tmp.persist(path).map_err(|e| io_err(path)(e.error))?;
    Ok(value)
}

fn load_semnet(args: &NetworkArgs) -> Result<(SemanticNetwork, Lexicon)> {
    let net = load_network(open(&args.edges)?).map_err(in_file(&args.edges))?;
    let lex = load_lexicon(open(&args.lexicon)?, &net).map_err(in_file(&args.lexicon))?;
    Ok((net, lex))
}

fn load_space(vectors: &Path, lexicon: Option<&Path>) -> Result<VectorSpace> {
    let emb = Embeddings::read(open(vectors)?).map_err(in_file(vectors))?;
    let entries: Vec<(String, Vec<SynsetId>)> = match lexicon {
        Some(p) => parse_lexicon(open(p)?).map_err(in_file(p))?,
        None => Vec::new(),
    };
    VectorSpace::new(emb, &entries).map_err(in_file(vectors))
}

fn emit_report(report: &EvalReport, target: &ReportArg, out: &mut dyn Write) -> Result<()> {
    let mut text = Vec::new();
    report.write_table(&mut text).map_err(data)?;
    writeln!(text).map_err(|e| data(e.into()))?;
    report.write_key_values(&mut text).map_err(data)?;
    out.write_all(&text).map_err(|e| data(e.into()))?;
    if let Some(path) = &target.report {
        write_atomic(path, |w| report.write_key_values(w).map_err(data))?;
    }
    Ok(())
}

pub fn run(command: Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::Annotate(a) => annotate(a, out),
        Command::Stats(a) => stats(a, out),
        Command::Train(a) => train_cmd(a, out),
        Command::EvalSim(a) => eval_sim(a, out),
        Command::EvalCluster(a) => eval_cluster(a, out),
        Command::TuneGamma(a) => tune(a, out),
        Command::EvalMcs(a) => eval_mcs_cmd(a, out),
        Command::Nn(a) => nn(a, out),
    }
}

fn annotate(a: AnnotateArgs, out: &mut dyn Write) -> Result<()> {
    let params = ConnectivityParams::with_delta(a.delta).map_err(usage)?;
    if a.threads == 0 {
        return Err(CliError::Usage("--threads must be at least 1".into()));
    }
    let mut outputs = vec![a.out.as_path()];
    outputs.extend(a.stats.as_deref());
    check_paths(&[&a.corpus, &a.network.edges, &a.network.lexicon], &outputs)?;
    let (net, lex) = load_semnet(&a.network)?;
    let corpus = open(&a.corpus)?;
    let stats = write_atomic(&a.out, |w| {
        annotate_corpus(corpus, w, &lex, &net, &params, a.threads).map_err(|e| match e {
            Error::Io(e) => io_err(&a.out)(e),
            e => in_file(&a.corpus)(e),
        })
    })?;
    if let Some(path) = &a.stats {
        write_atomic(path, |w| stats.write(w).map_err(data))?;
    }
    stats.write(out).map_err(data)
}

fn stats(a: StatsArgs, out: &mut dyn Write) -> Result<()> {
    let outputs: Vec<&Path> = a.out.as_deref().into_iter().collect();
    check_paths(&[&a.corpus, &a.network.edges, &a.network.lexicon], &outputs)?;
    let (_, lex) = load_semnet(&a.network)?;
    let stats = corpus_stats(open(&a.corpus)?, &lex).map_err(in_file(&a.corpus))?;
    match &a.out {
        Some(path) => write_atomic(path, |w| stats.write(w).map_err(data)),
        None => stats.write(out).map_err(data),
    }
}

fn train_cmd(a: TrainArgs, out: &mut dyn Write) -> Result<()> {
    if a.deterministic && a.seed.is_none() {
        return Err(CliError::Usage("--deterministic requires --seed".into()));
    }
    let config = TrainConfig {
        input_mode: a.input_mode,
        output_mode: a.output_mode,
        dim: a.dim,
        window: a.window,
        lr: a.lr,
        epochs: a.epochs,
        min_count: a.min_count,
        threads: a.threads,
        seed: a.seed.unwrap_or(TrainConfig::default().seed),
        deterministic: a.deterministic,
        subsample: a.subsample,
    };
    config.validate().map_err(usage)?;
    if a.threads == 0 {
        return Err(CliError::Usage("--threads must be at least 1".into()));
    }
    check_paths(&[&a.annotated], &[&a.out])?;
    let lines = read_annotated(open(&a.annotated)?).map_err(in_file(&a.annotated))?;
    let vocab = build_vocab(&lines, config.min_count).map_err(in_file(&a.annotated))?;
    let corpus = vocab.encode_corpus(&lines);
    drop(lines);
    let w = |e: std::io::Error| data(e.into());
    writeln!(out, "words={} senses={}", vocab.words.len(), vocab.senses.len()).map_err(w)?;
    let outcome = train(&corpus, &vocab, &config).map_err(data)?;
    for (i, loss) in outcome.epoch_losses.iter().enumerate() {
        writeln!(out, "epoch={} loss={loss}", i + 1).map_err(w)?;
    }
    let emb = export_embeddings(&outcome.state, &vocab);
    write_atomic(&a.out, |f| emb.write(f).map_err(data))
}

fn eval_sim(a: EvalSimArgs, out: &mut dyn Write) -> Result<()> {
    check_paths(&[&a.vectors, &a.lexicon, &a.dataset], &report_outputs(&a.report))?;
    let space = load_space(&a.vectors, Some(&a.lexicon))?;
    let pairs = read_similarity(open(&a.dataset)?).map_err(in_file(&a.dataset))?;
    let report = eval_similarity(&space, &pairs, a.strategy.into()).map_err(in_file(&a.dataset))?;
    emit_report(&report, &a.report, out)
}

fn report_outputs(r: &ReportArg) -> Vec<&Path> {
    r.report.as_deref().into_iter().collect()
}

fn eval_cluster(a: EvalClusterArgs, out: &mut dyn Write) -> Result<()> {
    if !a.gamma.is_finite() {
        return Err(CliError::Usage(format!("invalid --gamma {}", a.gamma)));
    }
    check_paths(&[&a.vectors, &a.dataset], &report_outputs(&a.report))?;
    let space = load_space(&a.vectors, None)?;
    let pairs = read_clustering(open(&a.dataset)?).map_err(in_file(&a.dataset))?;
    let result = sense_clustering(&space, &pairs, a.gamma).map_err(in_file(&a.dataset))?;
    emit_report(&result.report(), &a.report, out)
}

fn tune(a: TuneGammaArgs, out: &mut dyn Write) -> Result<()> {
    check_paths(&[&a.vectors, &a.dev], &report_outputs(&a.report))?;
    let space = load_space(&a.vectors, None)?;
    let pairs = read_clustering(open(&a.dev)?).map_err(in_file(&a.dev))?;
    let search = tune_gamma(&space, &pairs).map_err(in_file(&a.dev))?;
    let w = |e: std::io::Error| data(e.into());
    writeln!(out, "gamma  f1").map_err(w)?;
    for (g, f) in &search.grid {
        let mark = if *g == search.gamma { "  *" } else { "" };
        writeln!(out, "{g:.2}   {f:.4}{mark}").map_err(w)?;
    }
    writeln!(out).map_err(w)?;
    let mut report = EvalReport::new("gamma search", pairs.len());
    report.push("gamma", search.gamma);
    report.push("f1", search.f1);
    let covered = sense_clustering(&space, &pairs, search.gamma).map_err(in_file(&a.dev))?;
    report.evaluated = covered.confusion.total();
    report.excluded = covered.excluded;
    report.zero_vectors = covered.zero_vectors;
    emit_report(&report, &a.report, out)
}

fn eval_mcs_cmd(a: EvalMcsArgs, out: &mut dyn Write) -> Result<()> {
    check_paths(&[&a.vectors, &a.lexicon, &a.dataset], &report_outputs(&a.report))?;
    let space = load_space(&a.vectors, Some(&a.lexicon))?;
    let instances = read_wsd(open(&a.dataset)?).map_err(in_file(&a.dataset))?;
    emit_report(&eval_mcs(&space, &instances).report(), &a.report, out)
}

fn nn(a: NnArgs, out: &mut dyn Write) -> Result<()> {
    check_paths(&[&a.vectors], &[])?;
    let space = load_space(&a.vectors, None)?;
    let neighbors = nearest_neighbors(&space, &a.label, a.k).map_err(data)?;
    for (rank, (label, cos)) in neighbors.iter().enumerate() {
        writeln!(out, "{}\t{label}\t{cos:.6}", rank + 1).map_err(|e| data(e.into()))?;
    }
    Ok(())
}
