//! One function per acceptance criterion. Each returns a short summary on
//! success and the reason on failure, so the same checks back both the
//! focused test files and the acceptance report.

use std::collections::BTreeMap;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sensespace::annotator::{annotate_corpus, connect, ConnectivityParams, TextUnit};
use sensespace::eval::{
    f_measure, gamma_grid, mcs, pearson, spearman, tune_gamma, ClusterPair, Confusion, VectorSpace,
};
use sensespace::format::{read_annotated, AnnotatedLine};
use sensespace::model::{
    build_huffman, build_trees, build_vocab, export_embeddings, hs_log_prob, instance_gradient, instance_loss,
    train, train_step_traced, Embeddings, LayerMode, Matrix, ModelState, Position, Space, TrainConfig,
    TrainingInstance, Trees, UpdateCause,
};
use sensespace::semnet::{load_lexicon, load_network, parse_lexicon, SynsetId};

use super::{brute_force_connect, random_case, topic_corpus, topic_world, ReferenceCbow};

pub type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

pub fn oracle_equivalence(cases: usize) -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut annotated = 0;
    for i in 0..cases {
        let case = random_case(&mut rng);
        let net = ok(load_network(case.edge_file().as_bytes()))?;
        let lex = ok(load_lexicon(case.lexicon_file().as_bytes(), &net))?;
        let unit = ok(TextUnit::new(&case.tokens))?;
        let got = connect(&unit, &lex, &net, &ok(ConnectivityParams::with_delta(case.delta))?)
            .to_line(&net)
            .to_string();
        let want = brute_force_connect(&case);
        ensure!(got == want, "case {i}: got `{got}`, reference `{want}`");
        annotated += got.contains('|') as usize;
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    ensure!(annotated * 10 > cases, "only {annotated} cases attach a sense");
    Ok(format!("{cases} cases identical ({annotated} with senses) in {elapsed:.2?}"))
}

pub fn micro_example() -> Outcome {
    let net = ok(load_network("s1\ts3\ns2\ts4\n".as_bytes()))?;
    let lex = ok(load_lexicon("bank\ts1,s2\nwater\ts3\n".as_bytes(), &net))?;
    let unit = ok(TextUnit::new(&["bank", "water"]))?;
    let at = |delta| -> Result<(f64, String), String> {
        let a = connect(&unit, &lex, &net, &ok(ConnectivityParams::with_delta(delta))?);
        Ok((a.threshold, a.to_line(&net).to_string()))
    };
    let (theta, line) = at(100.0)?;
    ensure!((theta - 0.025).abs() < 1e-15, "θ = {theta}");
    ensure!(line == "bank|s1 water|s3", "δ=100 gave `{line}`");
    let (_, line) = at(1.0)?;
    ensure!(line == "bank water", "δ=1 gave `{line}`");
    Ok("δ=100: bank|s1 water|s3 (θ=0.025); δ=1: no senses".into())
}

/// Synthetic raw corpus of at least `bytes` bytes over a topic world.
pub fn synthetic_megabyte(bytes: usize) -> (String, String, String) {
    let world = topic_world(11, 60);
    let mut text = String::new();
    let mut seed = 0;
    while text.len() < bytes {
        text.push_str(&topic_corpus(&world, seed, 500, [0.03, 0.03]));
        seed += 1;
    }
    (world.edges, world.lexicon, text)
}

pub fn linearity() -> Outcome {
    let (edges, lexicon, base) = synthetic_megabyte(1 << 20);
    let net = ok(load_network(edges.as_bytes()))?;
    let lex = ok(load_lexicon(lexicon.as_bytes(), &net))?;
    let params = ConnectivityParams::default();
    let mut times = Vec::new();
    for factor in [1, 2, 4] {
        let text = base.repeat(factor);
        let mut best = Duration::MAX;
        for _ in 0..5 {
            let mut out = Vec::with_capacity(text.len() * 2);
            let start = Instant::now();
            ok(annotate_corpus(text.as_bytes(), &mut out, &lex, &net, &params, 1))?;
            best = best.min(start.elapsed());
        }
        times.push(best.as_secs_f64());
    }
    let r1 = times[1] / times[0];
    let r2 = times[2] / times[1];
    let summary = format!(
        "{:.2} MB: {:.3}s / {:.3}s / {:.3}s, ratios {r1:.2}, {r2:.2}",
        base.len() as f64 / (1 << 20) as f64,
        times[0],
        times[1],
        times[2]
    );
    ensure!(r1 <= 2.5 && r2 <= 2.5, "{summary}");
    Ok(summary)
}

pub struct Fixture {
    pub state: ModelState,
    pub trees: Trees,
    pub n_words: u32,
    pub n_senses: u32,
}

pub fn fixture(rng: &mut ChaCha8Rng, dim: usize) -> Fixture {
    let n_words = rng.gen_range(2..12u32);
    let n_senses = rng.gen_range(2..12u32);
    let counts = |n, rng: &mut ChaCha8Rng| -> Vec<u64> {
        let mut c: Vec<u64> = (0..n).map(|_| rng.gen_range(1..100)).collect();
        c.sort_unstable_by(|a, b| b.cmp(a));
        c
    };
    let trees = Trees {
        words: build_huffman(&counts(n_words, rng)),
        senses: build_huffman(&counts(n_senses, rng)),
    };
    let mut m = |rows: u32| Matrix::from_fn(rows as usize, dim, |_, _| rng.gen_range(-0.8..0.8));
    let state = ModelState {
        dim,
        word_input: m(n_words),
        sense_input: m(n_senses),
        word_output: m(n_words - 1),
        sense_output: m(n_senses - 1),
    };
    Fixture {
        state,
        trees,
        n_words,
        n_senses,
    }
}

pub fn random_position(rng: &mut ChaCha8Rng, f: &Fixture) -> Position {
    let word = if rng.gen_bool(0.85) { Some(rng.gen_range(0..f.n_words)) } else { None };
    let k = rng.gen_range(0..=3);
    let mut senses: Vec<u32> = (0..k).map(|_| rng.gen_range(0..f.n_senses)).collect();
    senses.sort_unstable();
    senses.dedup();
    Position { word, senses }
}

const FD_EPS: f64 = 1e-4;
/// Relative errors are taken against `max(|analytic|, |numeric|, REL_FLOOR)`
/// so that coordinates with a vanishing gradient are compared absolutely.
const REL_FLOOR: f64 = 1e-6;

/// Worst relative error over `instances` random instances.
pub fn gradient_error(input: LayerMode, output: LayerMode, instances: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let mut done = 0;
    while done < instances {
        let f = fixture(&mut rng, 10);
        let target = random_position(&mut rng, &f);
        let context: Vec<Position> = (0..rng.gen_range(1..=6)).map(|_| random_position(&mut rng, &f)).collect();
        let inst = TrainingInstance {
            target: &target,
            context: context.iter().collect(),
        };
        let Some(grad) = instance_gradient(&inst, &f.state, &f.trees, input, output) else {
            continue;
        };
        let mut params: BTreeMap<(bool, Space, u32), Vec<f64>> = BTreeMap::new();
        for ((space, row), g) in grad.input_grads() {
            params.insert((false, space, row), g);
        }
        for ((space, row), g) in &grad.node_grads {
            params.insert((true, *space, *row), g.clone());
        }
        for ((is_node, space, row), analytic) in params {
            let matrix = if is_node { f.state.output(space) } else { f.state.input(space) };
            for (col, &a) in analytic.iter().enumerate() {
                let orig = matrix.get(row as usize, col);
                matrix.set(row as usize, col, orig + FD_EPS);
                let plus = instance_loss(&inst, &f.state, &f.trees, input, output).unwrap();
                matrix.set(row as usize, col, orig - FD_EPS);
                let minus = instance_loss(&inst, &f.state, &f.trees, input, output).unwrap();
                matrix.set(row as usize, col, orig);
                let numeric = (plus - minus) / (2.0 * FD_EPS);
                worst = worst.max((a - numeric).abs() / a.abs().max(numeric.abs()).max(REL_FLOOR));
            }
        }
        done += 1;
    }
    worst
}

pub fn gradient_check() -> Outcome {
    let start = Instant::now();
    let mut overall: f64 = 0.0;
    for (i, input) in LayerMode::ALL.into_iter().enumerate() {
        for (j, output) in LayerMode::ALL.into_iter().enumerate() {
            let worst = gradient_error(input, output, 50, (10 * i + j) as u64);
            ensure!(worst < 1e-4, "{input}/{output}: relative error {worst:e}");
            overall = overall.max(worst);
        }
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    Ok(format!("9 configs × 50 instances, worst relative error {overall:.1e}, {elapsed:.2?}"))
}

pub fn hs_normalization() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut worst: f64 = 0.0;
    for v in [2usize, 7, 33, 64] {
        for _ in 0..10 {
            let counts: Vec<u64> = (0..v).map(|_| rng.gen_range(1..500)).collect();
            let tree = build_huffman(&counts);
            let nodes = Matrix::from_fn(v - 1, 8, |_, _| rng.gen_range(-2.0..2.0));
            let hidden: Vec<f64> = (0..8).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let total: f64 = (0..v as u32)
                .map(|leaf| hs_log_prob(leaf, &tree, &hidden, &nodes).log_prob.exp())
                .sum();
            ensure!((total - 1.0).abs() <= 1e-6, "V={v}: Σp = {total}");
            worst = worst.max((total - 1.0).abs());
        }
    }
    Ok(format!("V ∈ {{2,7,33,64}}, max |Σp − 1| = {worst:.1e}"))
}

/// Words-only corpus of about `tokens` tokens over a skewed vocabulary.
pub fn plain_corpus(seed: u64, tokens: usize) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = String::new();
    let mut n = 0;
    while n < tokens {
        let len = rng.gen_range(4..=14);
        let line: Vec<String> = (0..len)
            .map(|_| {
                let r: f64 = rng.gen();
                format!("w{}", (r * r * 40.0) as usize)
            })
            .collect();
        n += len;
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

fn parse_lines(text: &str) -> Result<Vec<AnnotatedLine>, String> {
    ok(read_annotated(text.as_bytes()))
}

pub fn cbow_equivalence() -> Outcome {
    let lines = parse_lines(&plain_corpus(3, 1000))?;
    let tokens: usize = lines.iter().map(|l| l.tokens.len()).sum();
    let vocab = ok(build_vocab(&lines, 1))?;
    let corpus = vocab.encode_corpus(&lines);
    let (dim, window, seed) = (20, 3, 17);
    let config = TrainConfig {
        input_mode: LayerMode::Words,
        output_mode: LayerMode::Words,
        dim,
        window,
        epochs: 1,
        min_count: 1,
        deterministic: true,
        seed,
        ..Default::default()
    };
    let init = ModelState::init(&vocab, dim, seed);
    let trees = build_trees(&vocab);
    let mut reference = ReferenceCbow {
        dim,
        syn0: init.word_input.to_vec(),
        syn1: init.word_output.to_vec(),
        codes: (0..vocab.words.len() as u32).map(|w| trees.words.code(w).to_vec()).collect(),
        points: (0..vocab.words.len() as u32).map(|w| trees.words.path(w).to_vec()).collect(),
    };
    let sentences: Vec<Vec<u32>> = lines
        .iter()
        .map(|l| l.tokens.iter().map(|t| vocab.words.get(&t.form).unwrap()).collect())
        .collect();
    reference.train(&sentences, window, config.lr, 1);

    let trained = ok(train(&corpus, &vocab, &config))?.state;
    let diff = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let d_in = diff(&trained.word_input.to_vec(), &reference.syn0);
    let d_out = diff(&trained.word_output.to_vec(), &reference.syn1);
    let moved = diff(&trained.word_input.to_vec(), &init.word_input.to_vec());
    ensure!(d_in <= 1e-10 && d_out <= 1e-10, "max deviation input {d_in:e}, nodes {d_out:e}");
    ensure!(moved > 1e-6, "training did not move the input vectors");
    Ok(format!("{tokens} tokens, max deviation {:.1e}", d_in.max(d_out)))
}

pub fn virtual_equalities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = [0usize; 2];
    for _ in 0..300 {
        let f = fixture(&mut rng, 8);
        let target = random_position(&mut rng, &f);
        let context: Vec<Position> = (0..rng.gen_range(1..=6)).map(|_| random_position(&mut rng, &f)).collect();
        let inst = TrainingInstance {
            target: &target,
            context: context.iter().collect(),
        };
        for output in LayerMode::ALL {
            // Words in the input layer: every associated sense receives a copy
            // of its word's update.
            let (_, trace) = train_step_traced(&inst, &f.state, &f.trees, LayerMode::Words, output, 0.05);
            for d in &trace {
                let UpdateCause::FromWord(w) = d.cause else { continue };
                let word = trace
                    .iter()
                    .find(|e| e.space == Space::Word && !e.output && e.row == w && e.cause == UpdateCause::Gradient)
                    .ok_or("virtual sense update without a word update")?;
                ensure!(d.delta == word.delta, "sense {} delta differs from word {w}", d.row);
                checked[0] += 1;
            }

            // Senses in the input layer: each word with senses receives the
            // mean of their updates.
            let (loss, trace) = train_step_traced(&inst, &f.state, &f.trees, LayerMode::Senses, output, 0.05);
            if loss.is_none() {
                continue;
            }
            for slot in &context {
                let (Some(w), false) = (slot.word, slot.senses.is_empty()) else { continue };
                let mut mean = vec![0.0; f.state.dim];
                for &s in &slot.senses {
                    let e = trace
                        .iter()
                        .find(|e| e.space == Space::Sense && !e.output && e.row == s)
                        .ok_or("missing sense update")?;
                    for (m, v) in mean.iter_mut().zip(&e.delta) {
                        *m += v / slot.senses.len() as f64;
                    }
                }
                let word = trace
                    .iter()
                    .find(|e| e.space == Space::Word && e.row == w && e.cause == UpdateCause::FromSenses)
                    .ok_or("missing virtual word update")?;
                for (a, b) in word.delta.iter().zip(&mean) {
                    ensure!((a - b).abs() <= 1e-15 * b.abs(), "word {w}: {a} vs mean {b}");
                }
                checked[1] += 1;
            }
        }
    }
    ensure!(checked[0] > 100 && checked[1] > 100, "too few virtual updates exercised: {checked:?}");
    Ok(format!("{} copies, {} means checked", checked[0], checked[1]))
}

fn annotate(edges: &str, lexicon: &str, raw: &str) -> Result<Vec<AnnotatedLine>, String> {
    let net = ok(load_network(edges.as_bytes()))?;
    let lex = ok(load_lexicon(lexicon.as_bytes(), &net))?;
    let mut out = Vec::new();
    ok(annotate_corpus(raw.as_bytes(), &mut out, &lex, &net, &ConnectivityParams::default(), 1))?;
    ok(read_annotated(out.as_slice()))
}

/// About a thousand tokens of annotated two-topic text.
pub fn tiny_corpus() -> Result<Vec<AnnotatedLine>, String> {
    let world = topic_world(2, 12);
    annotate(&world.edges, &world.lexicon, &topic_corpus(&world, 4, 50, [0.05, 0.05]))
}

pub fn loss_decrease() -> Outcome {
    let lines = tiny_corpus()?;
    let vocab = ok(build_vocab(&lines, 1))?;
    let corpus = vocab.encode_corpus(&lines);
    let mut worst_ratio: f64 = 0.0;
    for input in LayerMode::ALL {
        for output in LayerMode::ALL {
            let config = TrainConfig {
                input_mode: input,
                output_mode: output,
                dim: 50,
                epochs: 5,
                min_count: 1,
                deterministic: true,
                seed: 3,
                ..Default::default()
            };
            let out = ok(train(&corpus, &vocab, &config))?;
            let l = &out.epoch_losses;
            ensure!(l[4] < l[0], "{input}/{output}: epoch losses {l:?}");
            worst_ratio = worst_ratio.max(l[4] / l[0]);
        }
    }
    let tokens: usize = lines.iter().map(|l| l.tokens.len()).sum();
    Ok(format!("{tokens} tokens, 9 configs, largest epoch5/epoch1 = {worst_ratio:.4}"))
}

fn centroid(space: &VectorSpace, labels: &[String]) -> Vec<f64> {
    let mut c = vec![0.0; space.dim()];
    let mut n = 0;
    for l in labels {
        if let Some(v) = space.vector(&format!("s#{l}")) {
            for (a, b) in c.iter_mut().zip(v) {
                *a += b;
            }
            n += 1;
        }
    }
    c.iter_mut().for_each(|x| *x /= n.max(1) as f64);
    c
}

pub struct SanityRun {
    pub seed: u64,
    pub majority: usize,
    /// `[own, other]` centroid cosine for each topic's ambiguous sense.
    pub centroid_cos: [[f64; 2]; 2],
    pub mcs_choice: Option<String>,
}

impl SanityRun {
    pub fn centroids_ok(&self) -> bool {
        self.centroid_cos.iter().all(|[own, other]| own > other)
    }
}

pub fn sanity_run(seed: u64) -> Result<SanityRun, String> {
    let world = topic_world(100 + seed, 20);
    let majority = (seed % 2) as usize;
    // The ambiguous word is about as frequent as a topic word in its
    // majority topic and a quarter of that in the other.
    let mut rates = [0.008, 0.008];
    rates[majority] = 0.032;
    let lines = annotate(&world.edges, &world.lexicon, &topic_corpus(&world, seed, 500, rates))?;
    let vocab = ok(build_vocab(&lines, TrainConfig::default().min_count))?;
    let corpus = vocab.encode_corpus(&lines);
    let config = TrainConfig {
        epochs: 25,
        seed,
        ..Default::default()
    };
    let out = ok(train(&corpus, &vocab, &config))?;
    let lexicon = ok(parse_lexicon(world.lexicon.as_bytes()))?;
    let space = ok(VectorSpace::new(export_embeddings(&out.state, &vocab), &lexicon))?;
    let centroids = [centroid(&space, &world.topic_synsets[0]), centroid(&space, &world.topic_synsets[1])];
    let mut centroid_cos = [[0.0; 2]; 2];
    for t in 0..2 {
        let v = space
            .vector(&format!("s#{}", world.ambiguous_senses[t]))
            .ok_or_else(|| format!("seed {seed}: sense {} was never attached", world.ambiguous_senses[t]))?;
        let c = |x: &[f64]| sensespace::eval::cosine(v, x).unwrap_or(0.0);
        centroid_cos[t] = [c(&centroids[t]), c(&centroids[1 - t])];
    }
    Ok(SanityRun {
        seed,
        majority,
        centroid_cos,
        mcs_choice: mcs(&space, &world.ambiguous).map(str::to_string),
    })
}

/// The ten seeded runs behind both halves of the learning-sanity criterion,
/// run in parallel and computed once per process.
pub fn sanity_runs() -> &'static Result<(Vec<SanityRun>, Duration), String> {
    static RUNS: OnceLock<Result<(Vec<SanityRun>, Duration), String>> = OnceLock::new();
    RUNS.get_or_init(|| {
        let start = Instant::now();
        let runs: Vec<Result<SanityRun, String>> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..10u64).map(|seed| scope.spawn(move || sanity_run(seed))).collect();
            handles.into_iter().map(|h| h.join().expect("sanity run panicked")).collect()
        });
        let runs = runs.into_iter().collect::<Result<Vec<_>, _>>()?;
        Ok((runs, start.elapsed()))
    })
}

pub fn sanity_centroids() -> Outcome {
    let (runs, elapsed) = sanity_runs().as_ref().map_err(Clone::clone)?;
    let bad: Vec<String> = runs
        .iter()
        .filter(|r| !r.centroids_ok())
        .map(|r| format!("seed {} [own, other] {:.3?}", r.seed, r.centroid_cos))
        .collect();
    let summary = format!("{}/10 seeds, 10 runs in {elapsed:.1?}", 10 - bad.len());
    ensure!(bad.is_empty() && *elapsed < Duration::from_secs(300), "{summary}; {}", bad.join("; "));
    Ok(summary)
}

pub fn sanity_mcs() -> Outcome {
    let (runs, elapsed) = sanity_runs().as_ref().map_err(Clone::clone)?;
    let mut bad = Vec::new();
    for r in runs {
        let want = format!("s#{}", topic_world(100 + r.seed, 20).ambiguous_senses[r.majority]);
        if r.mcs_choice.as_deref() != Some(want.as_str()) {
            bad.push(format!("seed {} chose {:?}", r.seed, r.mcs_choice));
        }
    }
    let summary = format!("majority sense in {}/10 seeds", 10 - bad.len());
    ensure!(bad.len() <= 1 && *elapsed < Duration::from_secs(300), "{summary}; {}", bad.join("; "));
    Ok(summary)
}

/// Pearson by the computational formula.
fn pearson_oracle(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (sx, sy) = (x.iter().sum::<f64>(), y.iter().sum::<f64>());
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let sxx: f64 = x.iter().map(|a| a * a).sum();
    let syy: f64 = y.iter().map(|b| b * b).sum();
    (n * sxy - sx * sy) / ((n * sxx - sx * sx).sqrt() * (n * syy - sy * sy).sqrt())
}

/// Spearman for tie-free data: `1 − 6 Σd² / (n(n² − 1))`.
fn spearman_oracle(x: &[f64], y: &[f64]) -> f64 {
    let rank = |v: &[f64]| -> Vec<f64> {
        v.iter().map(|a| v.iter().filter(|b| *b < a).count() as f64 + 1.0).collect()
    };
    let (rx, ry) = (rank(x), rank(y));
    let d2: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - b).powi(2)).sum();
    let n = x.len() as f64;
    1.0 - 6.0 * d2 / (n * (n * n - 1.0))
}

pub fn metric_kernels() -> Outcome {
    let x = [0.3, 1.7, 2.2, 4.9, 3.1, 8.4, 5.5, 7.0, 6.2, 9.9];
    let y = [1.2, 0.4, 2.9, 4.4, 5.0, 6.1, 3.3, 8.8, 9.5, 7.7];
    let p = ok(pearson(&x, &y))?;
    let s = ok(spearman(&x, &y))?;
    ensure!((p - pearson_oracle(&x, &y)).abs() < 1e-9, "pearson {p} vs {}", pearson_oracle(&x, &y));
    ensure!((s - spearman_oracle(&x, &y)).abs() < 1e-9, "spearman {s} vs {}", spearman_oracle(&x, &y));
    let small = ok(spearman(&[1.0, 2.0, 3.0, 4.0], &[1.0, 3.0, 2.0, 4.0]))?;
    ensure!((small - 0.8).abs() < 1e-12, "spearman([1,2,3,4],[1,3,2,4]) = {small}");

    let predicted = [true, true, false, true, false, false, true, true, false, true];
    let gold = [true, false, false, true, true, false, true, false, false, true];
    let mut c = Confusion::default();
    for (&p, &g) in predicted.iter().zip(&gold) {
        c.add(p, g);
    }
    // tp=4, fp=2, fn=1
    let (prec, rec) = (4.0 / 6.0, 4.0 / 5.0);
    let f_oracle = 2.0 * prec * rec / (prec + rec);
    ensure!((c.f1() - f_oracle).abs() < 1e-9, "confusion F {} vs {f_oracle}", c.f1());
    ensure!((f_measure(prec, rec) - f_oracle).abs() < 1e-9, "f_measure {}", f_measure(prec, rec));
    Ok(format!("pearson {p:.6}, spearman {s:.6}, F {f_oracle:.6}, spearman(4) = {small}"))
}

pub fn gamma_optimum() -> Outcome {
    // Each synset pair is a unit vector at (1, 0) and one at cosine c from
    // it: positives sit at 0.375 and negatives at 0.325, so only γ = 0.35
    // separates them.
    let mut labels = Vec::new();
    let mut data = Vec::new();
    let mut dev = Vec::new();
    let id = |s: String| SynsetId::new(s).unwrap();
    for i in 0..6 {
        let (c, gold) = if i % 2 == 0 { (0.375, true) } else { (0.325, false) };
        labels.push(format!("s#a{i}"));
        data.extend([1.0, 0.0]);
        labels.push(format!("s#b{i}"));
        data.extend([c, (1.0f64 - c * c).sqrt()]);
        dev.push(ClusterPair {
            synset1: id(format!("a{i}")),
            synset2: id(format!("b{i}")),
            gold,
        });
    }
    let space = ok(VectorSpace::new(Embeddings { dim: 2, labels, data }, &[]))?;
    let search = ok(tune_gamma(&space, &dev))?;
    ensure!(search.grid.len() == 21 && gamma_grid().len() == 21, "{} thresholds", search.grid.len());
    ensure!((search.gamma - 0.35).abs() < 1e-12, "picked γ = {}", search.gamma);
    let at_best = search.grid.iter().filter(|(_, f)| *f == search.f1).count();
    ensure!(at_best == 1, "optimum F {} reached at {at_best} thresholds", search.f1);
    Ok(format!("21 thresholds, unique optimum γ = {} (F = {})", search.gamma, search.f1))
}

pub fn format_round_trips() -> Outcome {
    let lines = tiny_corpus()?;
    let first: String = lines.iter().map(|l| format!("{l}\n")).collect();
    let second: String = parse_lines(&first)?.iter().map(|l| format!("{l}\n")).collect();
    ensure!(first == second, "annotated corpus changed on re-read");
    ensure!(first.contains('|'), "annotated corpus carries no senses");

    let vocab = ok(build_vocab(&lines, 1))?;
    let config = TrainConfig {
        dim: 16,
        epochs: 2,
        min_count: 1,
        deterministic: true,
        seed: 8,
        ..Default::default()
    };
    let out = ok(train(&vocab.encode_corpus(&lines), &vocab, &config))?;
    let mut emb = export_embeddings(&out.state, &vocab);
    // Values that stress the float formatting.
    emb.data[0] = 1e-300;
    emb.data[1] = -2.5e17;
    emb.data[2] = 0.1 + 0.2;
    emb.data[3] = -0.0;
    let mut a = Vec::new();
    ok(emb.write(&mut a))?;
    let back = ok(Embeddings::read(a.as_slice()))?;
    let mut b = Vec::new();
    ok(back.write(&mut b))?;
    ensure!(a == b, "embedding file changed on re-read");
    ensure!(back == emb, "embedding values changed on re-read");
    Ok(format!("{} annotated lines, {} embedding rows byte-identical", lines.len(), emb.len()))
}
