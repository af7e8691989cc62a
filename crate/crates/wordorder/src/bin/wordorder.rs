use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, CommandFactory, Parser, Subcommand};
use log::info;

use wordorder::config::{load_lexicons, JobConfig};
use wordorder::pipeline::{
    minimal_pairs, preprocess_corpus, sample_tasks, transform_corpus, JobOptions,
    ProcessingReport,
};
use wordorder::records::{group_records, read_jsonl, write_jsonl, RecordLine};
use wordorder::server::{read_state, read_tasks, serve, AppState, DEFAULT_LEASE};
use wordorder_core::policy::{ObjectTightness, PolicyOptions};
use wordorder_core::stats::{swap_histogram, SwapHistogram};
use wordorder_core::swap::{CorrelationPair, Language};
use wordorder_core::validation::{reweight, score};

/// Counterfactual word-order variants of dependency treebanks.
#[derive(Parser, Debug)]
#[command(name = "wordorder", version)]
struct Cli {
    /// TOML job configuration; flags take precedence over its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// More log output (repeat for debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct Job {
    /// Corpus language: en or ja.
    #[arg(long)]
    lang: Option<Language>,
    /// Correlation pair: vo, adp-np, cop-pred, aux-v, noun-gen.
    #[arg(long)]
    pair: Option<CorrelationPair>,
    /// Loosest verb dependent that still counts as an object.
    #[arg(long)]
    object_tightness: Option<ObjectTightness>,
    /// Japanese lexicon file (TOML).
    #[arg(long)]
    lexicon: Option<PathBuf>,
    /// Leave lifted copulas out of the verb-object swap.
    #[arg(long)]
    no_copula_in_vo: bool,
    /// Clean the input (punctuation, brackets, case, script) before swapping.
    #[arg(long)]
    preprocess: bool,
    /// Worker threads (default: all cores).
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args, Debug)]
struct Io {
    /// Input CoNLL-U (default: stdin).
    #[arg(short, long)]
    input: Option<PathBuf>,
    /// Output file (default: stdout).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Clean a corpus and lift copulas.
    Preprocess {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        lang: Option<Language>,
        #[arg(long)]
        lexicon: Option<PathBuf>,
        /// Keep sentences with Latin-script tokens.
        #[arg(long)]
        keep_latin: bool,
        #[arg(long)]
        workers: Option<usize>,
        /// Write a JSON processing report here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Swap one correlation pair throughout a corpus.
    Transform {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        job: Job,
        /// Write swap records (JSON Lines) here.
        #[arg(long)]
        records: Option<PathBuf>,
        /// Write a JSON processing report here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Histogram of applied swaps per sentence, as TSV.
    Stats {
        /// Swap records from `transform --records`.
        #[arg(long, conflicts_with = "corpus")]
        records: Option<PathBuf>,
        /// Recompute from a corpus instead; counts sentences without any pair.
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[command(flatten)]
        job: Job,
    },
    /// Original/variant sentence pairs for every changed sentence.
    Minpairs {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        job: Job,
    },
    /// Draw the stratified annotation sample and write its tasks.
    Sample {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        job: Job,
        #[arg(long)]
        seed: Option<u64>,
        /// Write the sample summary (JSON) here instead of stderr.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Score annotations against the silver pairs of their tasks.
    Score {
        #[arg(long)]
        tasks: PathBuf,
        #[arg(long)]
        annotations: PathBuf,
        /// Corpus share of zero-swap sentences, for the reweighted figures.
        #[arg(long)]
        zero_swap_fraction: Option<f64>,
        /// Print the full report as JSON instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Run the annotation backend.
    Serve {
        #[arg(long)]
        tasks: PathBuf,
        /// Append-only annotation log; replayed on start.
        #[arg(long)]
        state: PathBuf,
        #[arg(long, default_value = "127.0.0.1:8080")]
        bind: SocketAddr,
        /// Minutes a handed-out sentence stays reserved for its annotator.
        #[arg(long)]
        lease_minutes: Option<u64>,
    },
}

fn open_input(path: Option<&Path>) -> anyhow::Result<Box<dyn BufRead>> {
    Ok(match path {
        None => Box::new(BufReader::new(io::stdin())),
        Some(p) if p == Path::new("-") => Box::new(BufReader::new(io::stdin())),
        Some(p) => Box::new(BufReader::new(
            File::open(p).with_context(|| format!("opening {}", p.display()))?,
        )),
    })
}

fn open_output(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        None => Box::new(BufWriter::new(io::stdout())),
        Some(p) if p == Path::new("-") => Box::new(BufWriter::new(io::stdout())),
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
    })
}

fn write_json<T: serde::Serialize>(path: Option<&Path>, value: &T) -> anyhow::Result<()> {
    match path {
        Some(p) => {
            let mut w = open_output(Some(p))?;
            serde_json::to_writer_pretty(&mut w, value)?;
            writeln!(w)?;
            w.flush()?;
        }
        None => eprintln!("{}", serde_json::to_string_pretty(value)?),
    }
    Ok(())
}

fn log_report(report: &ProcessingReport) {
    info!(
        "{} sentences read, {} written, {} parse errors, {} dropped, {:.0} sentences/min",
        report.sentences_read,
        report.sentences_written,
        report.parse_errors,
        report.dropped.values().sum::<usize>(),
        report.sentences_per_minute
    );
}

fn lexicons(path: Option<&Path>) -> anyhow::Result<wordorder_core::policy::JaLexicons> {
    match path {
        Some(p) => load_lexicons(p),
        None => Ok(Default::default()),
    }
}

fn resolve(job: &Job, config: &JobConfig) -> anyhow::Result<JobOptions> {
    let language = job
        .lang
        .or(config.language)
        .ok_or_else(|| anyhow!("--lang is required (or `language` in the config)"))?;
    let pair = job
        .pair
        .or(config.pair)
        .ok_or_else(|| anyhow!("--pair is required (or `pair` in the config)"))?;
    let policy = PolicyOptions {
        object_tightness: job
            .object_tightness
            .or(config.object_tightness)
            .unwrap_or_default(),
        vo_include_copula: !job.no_copula_in_vo && config.vo_include_copula.unwrap_or(true),
        lexicons: lexicons(job.lexicon.as_deref().or(config.lexicon.as_deref()))?,
    };
    Ok(JobOptions {
        language,
        pair,
        policy,
        preprocess: job
            .preprocess
            .then(|| config.preprocess.apply(language)),
        workers: job.workers.or(config.workers),
    })
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let config = match &cli.config {
        Some(p) => JobConfig::load(p)?,
        None => JobConfig::default(),
    };
    match cli.command {
        Command::Preprocess {
            io,
            lang,
            lexicon,
            keep_latin,
            workers,
            report,
        } => {
            let language = lang
                .or(config.language)
                .ok_or_else(|| anyhow!("--lang is required (or `language` in the config)"))?;
            let mut pre = config.preprocess.apply(language);
            if keep_latin {
                pre.drop_latin_sentences = false;
            }
            let policy = PolicyOptions {
                lexicons: lexicons(lexicon.as_deref().or(config.lexicon.as_deref()))?,
                ..Default::default()
            };
            let mut out = open_output(io.output.as_deref())?;
            let r = preprocess_corpus(
                open_input(io.input.as_deref())?,
                &mut out,
                language,
                Some(&pre),
                &policy,
                workers.or(config.workers),
            )?;
            out.flush()?;
            log_report(&r);
            if report.is_some() {
                write_json(report.as_deref(), &r)?;
            }
        }
        Command::Transform {
            io,
            job,
            records,
            report,
        } => {
            let options = resolve(&job, &config)?;
            let mut out = open_output(io.output.as_deref())?;
            let mut rec = records.as_deref().map(|p| open_output(Some(p))).transpose()?;
            let r = transform_corpus(
                open_input(io.input.as_deref())?,
                &mut out,
                rec.as_mut().map(|w| w.as_mut() as &mut dyn Write),
                &options,
            )?;
            out.flush()?;
            if let Some(w) = rec.as_mut() {
                w.flush()?;
            }
            log_report(&r);
            info!(
                "{} pairs identified, {} applied",
                r.pairs_identified, r.pairs_applied
            );
            if report.is_some() {
                write_json(report.as_deref(), &r)?;
            }
        }
        Command::Stats {
            records,
            corpus,
            job,
        } => {
            let histogram: SwapHistogram = match (records, corpus) {
                (Some(path), None) => {
                    let lines: Vec<RecordLine> = read_jsonl(open_input(Some(&path))?)
                        .with_context(|| format!("reading {}", path.display()))?;
                    let groups = group_records(&lines);
                    swap_histogram(groups.iter().map(|(_, r)| r.as_slice()))?
                }
                (None, Some(path)) => {
                    let options = resolve(&job, &config)?;
                    transform_corpus(open_input(Some(&path))?, &mut io::sink(), None, &options)?
                        .histogram
                }
                _ => return Err(anyhow!("give either --records or --corpus")),
            };
            let mut out = io::stdout().lock();
            out.write_all(histogram.to_tsv().as_bytes())?;
            info!(
                "{} pairs identified, {} applied",
                histogram.total_identified, histogram.total_swaps
            );
        }
        Command::Minpairs { io, job } => {
            let options = resolve(&job, &config)?;
            let mut out = open_output(io.output.as_deref())?;
            let (n, r) = minimal_pairs(open_input(io.input.as_deref())?, &mut out, &options)?;
            out.flush()?;
            log_report(&r);
            info!("{n} minimal pairs");
        }
        Command::Sample {
            io,
            job,
            seed,
            summary,
        } => {
            let options = resolve(&job, &config)?;
            let seed = seed.or(config.seed).unwrap_or(0);
            let (tasks, s) = sample_tasks(open_input(io.input.as_deref())?, &options, seed)?;
            let mut out = open_output(io.output.as_deref())?;
            for t in &tasks {
                write_jsonl(&mut out, t)?;
            }
            out.flush()?;
            write_json(summary.as_deref(), &s)?;
        }
        Command::Score {
            tasks,
            annotations,
            zero_swap_fraction,
            json,
        } => {
            let tasks = read_tasks(&tasks)?;
            let silver: Vec<_> = tasks.iter().map(|t| t.silver_sentence()).collect();
            let mut kinds: Vec<_> = tasks.iter().map(|t| t.pair_type).collect();
            kinds.dedup();
            let pair = (kinds.len() == 1).then(|| kinds[0]);
            let records = read_state(&annotations)?;
            let mut report = score(pair, &silver, &records);
            if let Some(f0) = zero_swap_fraction {
                report = reweight(&report, f0)?;
            }
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                print!("{}", report.table());
                for r in report.rejected.iter().chain(&report.duplicates) {
                    eprintln!("ignored {} by {}: {:?}", r.sent_id, r.annotator_id, r.reason);
                }
            }
        }
        Command::Serve {
            tasks,
            state,
            bind,
            lease_minutes,
        } => {
            let lease = lease_minutes.map_or(DEFAULT_LEASE, |m| {
                std::time::Duration::from_secs(m * 60)
            });
            let app = AppState::open(read_tasks(&tasks)?, &state, lease)?;
            tokio::runtime::Runtime::new()?.block_on(serve(app, bind))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "info",
        1 => "debug",
        _ => "trace",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();
    if let Some(p) = &cli.config {
        // Config problems are usage errors, like unknown flags.
        if let Err(e) = JobConfig::load(p) {
            let mut cmd = Cli::command();
            cmd.error(clap::error::ErrorKind::InvalidValue, format!("{e:#}"))
                .exit();
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
