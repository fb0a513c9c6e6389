//! The `sptag` command line. Exit codes: 0 success, 1 validation failures
//! found, 2 usage or I/O errors.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::bias::{load_rules, validate_sequence, RuleSet};
use crate::corpus_io::{evaluate_with, parse_vertical, read_vertical, write_sentences, CorpusError};
use crate::lexicon::{load_lexicon, Lexicon};
use crate::tagger::{HmmModel, Pipeline, Smoothing, TaggerError};
use crate::tagset::{registry, Category, FeatureFilter};
use crate::tokenizer::{sentence_split, Tokenizer};

#[derive(Parser, Debug)]
#[command(name = "sptag", version, about = "Spanish morphosyntactic tagging toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the tag registry as TSV
    Tagset {
        /// Only tags of this category, e.g. `portmanteau`
        #[arg(long)]
        category: Option<String>,
        /// Feature tests such as `category=noun,number=plural`
        #[arg(long)]
        filter: Option<String>,
    },
    /// Print one textword per line with its kind and byte span
    Tokenize {
        /// Input text, `-` for standard input
        input: PathBuf,
        #[command(flatten)]
        text: TextOptions,
    },
    /// Train a bigram model from a vertical corpus
    Train {
        corpus: PathBuf,
        /// Model file to write
        #[arg(long, short)]
        output: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        k_transition: f64,
        #[arg(long, default_value_t = 0.1)]
        k_emission: f64,
        /// Replace unknown tags instead of rejecting the corpus
        #[arg(long)]
        lenient: bool,
    },
    /// Tag raw text, writing vertical output
    Tag {
        /// Input text, `-` for standard input
        input: PathBuf,
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        /// Bias rules applied during decoding
        #[arg(long, value_name = "FILE")]
        rules: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Output file instead of standard output
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[command(flatten)]
        text: TextOptions,
    },
    /// Check a vertical file against the registry and optional bias rules
    Validate {
        input: PathBuf,
        #[arg(long, value_name = "FILE")]
        rules: Option<PathBuf>,
    },
    /// Compare predicted against gold vertical files
    Eval {
        gold: PathBuf,
        predicted: PathBuf,
        /// Lexicon for unknown-token accuracy (a path, or `seed`)
        #[arg(long, value_name = "FILE")]
        lexicon: Option<String>,
        /// Also write the confusion table to this file
        #[arg(long, value_name = "FILE")]
        confusion: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
pub struct TextOptions {
    /// Lexicon file merged over the seed lexicon, or `seed`
    #[arg(long, value_name = "FILE", conflicts_with = "seed_lexicon_only")]
    lexicon: Option<String>,
    /// Use only the built-in seed lexicon
    #[arg(long)]
    seed_lexicon_only: bool,
    /// Keep verb+clitic forms as single tokens
    #[arg(long)]
    no_enclitic_split: bool,
    /// Extra abbreviations, one per line
    #[arg(long, value_name = "FILE")]
    abbreviations: Option<PathBuf>,
    /// Multiword expressions, one per line
    #[arg(long, value_name = "FILE")]
    multiwords: Option<PathBuf>,
}

#[derive(Debug, Error)]
enum Failure {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Invalid(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Invalid(_) => 1,
            Failure::Usage(_) => 2,
        }
    }
}

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(failure) => {
            let _ = writeln!(stderr, "sptag: {failure}");
            failure.code()
        }
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text).map_err(usage)?;
        Ok(text)
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
    }
}

fn lexicon_from(choice: Option<&str>) -> Result<Lexicon, Failure> {
    match choice {
        None | Some("seed") => Ok(Lexicon::seed()),
        Some(path) => load_lexicon(Path::new(path)).map_err(usage),
    }
}

impl TextOptions {
    fn lexicon(&self) -> Result<Lexicon, Failure> {
        if self.seed_lexicon_only {
            return Ok(Lexicon::seed());
        }
        lexicon_from(self.lexicon.as_deref())
    }

    fn tokenizer(&self) -> Result<Tokenizer, Failure> {
        let mut tokenizer = Tokenizer::new();
        if let Some(path) = &self.abbreviations {
            tokenizer
                .load_abbreviations(path)
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        }
        if let Some(path) = &self.multiwords {
            tokenizer
                .load_multiwords(path)
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        }
        Ok(tokenizer)
    }
}

fn rules_from(path: Option<&Path>) -> Result<RuleSet, Failure> {
    match path {
        None => Ok(RuleSet::default()),
        Some(p) => load_rules(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes()).map_err(usage)
}

fn execute(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Tagset { category, filter } => {
            let category = category
                .map(|c| c.parse::<Category>().map_err(usage))
                .transpose()?;
            let filter = filter.map(|f| FeatureFilter::parse(&f).map_err(usage)).transpose()?;
            let tags = registry().list_by(|b| {
                category.is_none_or(|c| b.category == c) && filter.as_ref().is_none_or(|f| f.matches(b))
            });
            emit(stdout, &registry().tsv_for(tags))?;
            Ok(0)
        }
        Command::Tokenize { input, text } => {
            let source = read_input(&input)?;
            let tokens = text.tokenizer()?.textwords(&source, &text.lexicon()?, !text.no_enclitic_split);
            let mut out = String::new();
            for sentence in sentence_split(&tokens) {
                for token in sentence {
                    out.push_str(&format!(
                        "{}\t{}\t{}\t{}\n",
                        token.surface.split_whitespace().collect::<Vec<_>>().join(" "),
                        token.kind.as_str(),
                        token.span.0,
                        token.span.1
                    ));
                }
                out.push('\n');
            }
            emit(stdout, &out)?;
            Ok(0)
        }
        Command::Train {
            corpus,
            output,
            k_transition,
            k_emission,
            lenient,
        } => {
            let doc = read_vertical(&corpus, !lenient).map_err(|e| match e {
                CorpusError::Io { .. } => usage(e),
                other => Failure::Invalid(format!("{}: {other}", corpus.display())),
            })?;
            for issue in &doc.issues {
                let _ = writeln!(stderr, "{}: line {}: unknown tag `{}`", corpus.display(), issue.line, issue.tag);
            }
            let smoothing = Smoothing { k_transition, k_emission };
            let model = HmmModel::train(&doc.sentences, smoothing, &corpus.display().to_string()).map_err(usage)?;
            model.save(&output).map_err(usage)?;
            let stats = format!(
                "sentences\t{}\ntokens\t{}\nvocabulary\t{}\ntags\t{}\n",
                doc.sentences.iter().filter(|s| !s.is_empty()).count(),
                model.token_count,
                model.vocabulary_size(),
                model.inventory().len()
            );
            emit(stdout, &stats)?;
            Ok(0)
        }
        Command::Tag {
            input,
            model,
            rules,
            jobs,
            output,
            text,
        } => {
            let lexicon = text.lexicon()?;
            let tokenizer = text.tokenizer()?;
            let rules = rules_from(rules.as_deref())?;
            let model = HmmModel::load(&model).map_err(usage)?;
            let source = read_input(&input)?;
            let pipeline = Pipeline {
                tokenizer: &tokenizer,
                lexicon: &lexicon,
                model: &model,
                rules: &rules,
                split_enclitics: !text.no_enclitic_split,
            };
            let sentences = pipeline
                .tag_text_jobs(&source, jobs.max(1))
                .map_err(|e: TaggerError| usage(e))?;
            for (i, _) in sentences.iter().enumerate().filter(|(_, s)| s.fallback) {
                let _ = writeln!(stderr, "sentence {}: no path satisfies the rules; decoded without them", i + 1);
            }
            let vertical = write_sentences(&sentences);
            match output {
                Some(path) => std::fs::write(&path, vertical)
                    .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?,
                None => emit(stdout, &vertical)?,
            }
            Ok(0)
        }
        Command::Validate { input, rules } => {
            let rules = rules_from(rules.as_deref())?;
            let text = read_input(&input)?;
            let name = input.display();
            let doc = match parse_vertical(&text, false) {
                Ok(doc) => doc,
                Err(e) => {
                    let _ = writeln!(stderr, "{name}: {e}");
                    return Ok(1);
                }
            };
            let mut problems = 0;
            for issue in &doc.issues {
                let _ = writeln!(stderr, "{name}: line {}: unknown tag `{}`", issue.line, issue.tag);
                problems += 1;
            }
            for (sentence, lines) in doc.sentences.iter().zip(&doc.lines) {
                for v in validate_sequence(&rules, &sentence.tags()) {
                    let (left, right) = (sentence.pairs[v.index].1, sentence.pairs[v.index + 1].1);
                    let _ = writeln!(
                        stderr,
                        "{name}: line {}: {left} {right} violates rule on line {}",
                        lines[v.index + 1],
                        v.rule
                    );
                    problems += 1;
                }
            }
            Ok(if problems == 0 { 0 } else { 1 })
        }
        Command::Eval {
            gold,
            predicted,
            lexicon,
            confusion,
        } => {
            let read = |p: &Path| {
                read_vertical(p, true).map_err(|e| match e {
                    CorpusError::Io { .. } => usage(e),
                    other => Failure::Invalid(format!("{}: {other}", p.display())),
                })
            };
            let gold_doc = read(&gold)?;
            let pred_doc = read(&predicted)?;
            let lexicon = lexicon.as_deref().map(|l| lexicon_from(Some(l))).transpose()?;
            let report = evaluate_with(&gold_doc, &pred_doc, lexicon.as_ref())
                .map_err(|e| Failure::Invalid(e.to_string()))?;
            let mut out = report.summary();
            match confusion {
                Some(path) => std::fs::write(&path, report.confusion_tsv())
                    .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?,
                None => {
                    out.push('\n');
                    out.push_str(&report.confusion_tsv());
                }
            }
            emit(stdout, &out)?;
            Ok(0)
        }
    }
}
