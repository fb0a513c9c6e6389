//! Bigram HMM tagger: add-k training, a plain-text model format, and a
//! Viterbi decoder whose transitions are pruned by bias rules.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use thiserror::Error;

use crate::bias::RuleSet;
use crate::lexicon::{guess_in_context, AmbiguityClass, Lexicon};
use crate::tagset::{parse_tag, registry, Tag};
use crate::tokenizer::{punctuation_tag, sentence_split, Token, TokenKind, Tokenizer};

#[derive(Debug, Error)]
pub enum TaggerError {
    #[error("training corpus has no tokens")]
    EmptyCorpus,
    #[error("smoothing constant {name} must be a positive finite number, got {value}")]
    BadSmoothing { name: &'static str, value: f64 },
    #[error("unknown tag `{0}`")]
    UnknownTag(String),
    #[error("model line {line}: {message}")]
    ModelFormat { line: usize, message: String },
    #[error("cannot access model {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("sentence {sentence}: {source}")]
    Decode {
        sentence: usize,
        #[source]
        source: DecodeError,
    },
}

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum DecodeError {
    #[error("bias rules leave no valid tag path")]
    NoValidPath,
    #[error("no candidate tags at position {0}")]
    EmptyCandidates(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Smoothing {
    pub k_transition: f64,
    pub k_emission: f64,
}

impl Default for Smoothing {
    fn default() -> Self {
        Smoothing {
            k_transition: 0.5,
            k_emission: 0.1,
        }
    }
}

impl Smoothing {
    fn validate(&self) -> Result<(), TaggerError> {
        for (name, value) in [("k_transition", self.k_transition), ("k_emission", self.k_emission)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(TaggerError::BadSmoothing { name, value });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaggedSentence {
    pub pairs: Vec<(Token, Tag)>,
    /// Set when bias rules admitted no path and the sentence was decoded
    /// without them.
    pub fallback: bool,
}

impl TaggedSentence {
    pub fn new(pairs: Vec<(Token, Tag)>) -> Self {
        TaggedSentence { pairs, fallback: false }
    }

    pub fn tags(&self) -> Vec<Tag> {
        self.pairs.iter().map(|(_, t)| *t).collect()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Emission vocabulary key: lowercased, inner whitespace collapsed.
pub fn emission_key(surface: &str) -> String {
    surface.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase()
}

/// Raw training counts. Context index `n` is the sentence start, outcome
/// index `n` the sentence end, where `n` is the registry size.
#[derive(Debug, Clone, Default)]
pub struct Counts {
    pub transitions: HashMap<(usize, usize), u64>,
    pub emissions: HashMap<(usize, String), u64>,
    pub tag_totals: Vec<u64>,
    pub tokens: u64,
    pub sentences: u64,
}

impl Counts {
    pub fn from_corpus(corpus: &[TaggedSentence]) -> Counts {
        let n = registry().len();
        let mut counts = Counts {
            tag_totals: vec![0; n],
            ..Counts::default()
        };
        for sentence in corpus.iter().filter(|s| !s.is_empty()) {
            counts.sentences += 1;
            let mut prev = n;
            for (token, tag) in &sentence.pairs {
                let t = tag.index();
                *counts.transitions.entry((prev, t)).or_default() += 1;
                *counts.emissions.entry((t, emission_key(&token.surface))).or_default() += 1;
                counts.tag_totals[t] += 1;
                counts.tokens += 1;
                prev = t;
            }
            *counts.transitions.entry((prev, n)).or_default() += 1;
        }
        counts
    }

    pub fn transition(&self, from: Option<Tag>, to: Option<Tag>) -> u64 {
        let n = registry().len();
        let key = (from.map_or(n, Tag::index), to.map_or(n, Tag::index));
        self.transitions.get(&key).copied().unwrap_or(0)
    }
}

const START: &str = "<S>";
const END: &str = "</S>";
const UNSEEN: &str = "<UNSEEN>";

#[derive(Debug, Clone)]
pub struct HmmModel {
    n: usize,
    /// ln P(outcome | context), `(n + 1) * (n + 1)`; start→end is -inf.
    transitions: Vec<f64>,
    /// ln P(word | tag) for seen pairs.
    emissions: HashMap<(u16, u32), f64>,
    /// ln P(word | tag) for any word not seen with the tag, including the
    /// unknown-word symbol.
    emission_unseen: Vec<f64>,
    vocabulary: HashMap<String, u32>,
    /// Tags each vocabulary word was seen with.
    word_tags: HashMap<u32, AmbiguityClass>,
    /// ln tag priors, used to share the unknown-word mass.
    priors: Vec<f64>,
    inventory: BTreeSet<Tag>,
    pub smoothing: Smoothing,
    pub corpus: String,
    pub token_count: u64,
}

pub fn train(corpus: &[TaggedSentence], smoothing: Smoothing) -> Result<HmmModel, TaggerError> {
    HmmModel::train(corpus, smoothing, "corpus")
}

impl HmmModel {
    pub fn train(corpus: &[TaggedSentence], smoothing: Smoothing, name: &str) -> Result<HmmModel, TaggerError> {
        smoothing.validate()?;
        let counts = Counts::from_corpus(corpus);
        if counts.tokens == 0 {
            return Err(TaggerError::EmptyCorpus);
        }
        Ok(HmmModel::from_counts(&counts, smoothing, name))
    }

    pub fn from_counts(counts: &Counts, smoothing: Smoothing, name: &str) -> HmmModel {
        let n = registry().len();
        let kt = smoothing.k_transition;
        let ke = smoothing.k_emission;

        let mut context_totals = vec![0u64; n + 1];
        for (&(c, _), &k) in &counts.transitions {
            context_totals[c] += k;
        }
        let mut transitions = vec![f64::NEG_INFINITY; (n + 1) * (n + 1)];
        for c in 0..=n {
            // the start context cannot be followed by the end
            let outcomes = if c == n { n } else { n + 1 };
            let denom = context_totals[c] as f64 + kt * outcomes as f64;
            for o in 0..outcomes {
                let seen = counts.transitions.get(&(c, o)).copied().unwrap_or(0) as f64;
                transitions[c * (n + 1) + o] = ((seen + kt) / denom).ln();
            }
        }

        let mut words: Vec<&str> = counts.emissions.keys().map(|(_, w)| w.as_str()).collect();
        words.sort_unstable();
        words.dedup();
        let vocabulary: HashMap<String, u32> = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.to_string(), i as u32))
            .collect();
        let outcomes = (vocabulary.len() + 1) as f64;
        let denoms: Vec<f64> = counts
            .tag_totals
            .iter()
            .map(|&total| total as f64 + ke * outcomes)
            .collect();
        let emission_unseen = denoms.iter().map(|d| (ke / d).ln()).collect();
        let emissions = counts
            .emissions
            .iter()
            .map(|((t, w), &k)| {
                let p = (k as f64 + ke) / denoms[*t];
                ((*t as u16, vocabulary[w]), p.ln())
            })
            .collect();

        let prior_denom = counts.tokens as f64 + ke * n as f64;
        let priors = counts
            .tag_totals
            .iter()
            .map(|&k| ((k as f64 + ke) / prior_denom).ln())
            .collect();
        let inventory = counts
            .tag_totals
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .filter_map(|(i, _)| Tag::from_index(i))
            .collect();

        let word_tags = word_tags(&emissions);
        HmmModel {
            n,
            transitions,
            emissions,
            emission_unseen,
            vocabulary,
            word_tags,
            priors,
            inventory,
            smoothing,
            corpus: name.to_string(),
            token_count: counts.tokens,
        }
    }

    /// Tags observed in training.
    pub fn inventory(&self) -> &BTreeSet<Tag> {
        &self.inventory
    }

    pub fn vocabulary_size(&self) -> usize {
        self.vocabulary.len()
    }

    pub fn knows_word(&self, surface: &str) -> bool {
        self.vocabulary.contains_key(&emission_key(surface))
    }

    /// Tags the word was seen with in training.
    pub fn seen_tags(&self, surface: &str) -> Option<&AmbiguityClass> {
        self.vocabulary
            .get(&emission_key(surface))
            .and_then(|w| self.word_tags.get(w))
    }

    /// ln P(to | from); `None` stands for the sentence start or end.
    pub fn transition_log(&self, from: Option<Tag>, to: Option<Tag>) -> f64 {
        let c = from.map_or(self.n, Tag::index);
        let o = to.map_or(self.n, Tag::index);
        self.transitions[c * (self.n + 1) + o]
    }

    /// Smoothed P(outcome | context) over every outcome of one context.
    pub fn transition_distribution(&self, from: Option<Tag>) -> Vec<f64> {
        let c = from.map_or(self.n, Tag::index);
        let outcomes = if from.is_none() { self.n } else { self.n + 1 };
        (0..outcomes)
            .map(|o| self.transitions[c * (self.n + 1) + o].exp())
            .collect()
    }

    /// Total emission probability of a tag over the vocabulary plus the
    /// unknown-word symbol.
    pub fn emission_mass(&self, tag: Tag) -> f64 {
        let t = tag.index() as u16;
        let seen: Vec<f64> = self
            .emissions
            .iter()
            .filter(|((tt, _), _)| *tt == t)
            .map(|(_, lp)| lp.exp())
            .collect();
        let unseen_outcomes = (self.vocabulary.len() + 1 - seen.len()) as f64;
        seen.iter().sum::<f64>() + unseen_outcomes * self.emission_unseen[tag.index()].exp()
    }

    /// ln emission score of `surface` under `tag`, where `class` is the
    /// token's candidate set. Words outside the training vocabulary share
    /// the unknown-word mass in proportion to the tag priors within `class`.
    pub fn emission_log(&self, surface: &str, tag: Tag, class: &AmbiguityClass) -> f64 {
        let t = tag.index();
        match self.vocabulary.get(&emission_key(surface)) {
            Some(&w) => self
                .emissions
                .get(&(t as u16, w))
                .copied()
                .unwrap_or(self.emission_unseen[t]),
            None => {
                let total: f64 = class.tags().map(|g| self.priors[g.index()].exp()).sum();
                self.emission_unseen[t] + self.priors[t] - total.ln()
            }
        }
    }

    pub fn lattice(&self, sentence: &[(Token, AmbiguityClass)]) -> Lattice {
        Lattice {
            columns: sentence
                .iter()
                .map(|(token, class)| {
                    class
                        .tags()
                        .map(|t| (t, self.emission_log(&token.surface, t, class)))
                        .collect()
                })
                .collect(),
        }
    }

    pub fn to_text(&self) -> String {
        let ln10 = std::f64::consts::LN_10;
        let mut out = String::new();
        let code = |i: usize, boundary: &'static str| {
            if i == self.n {
                boundary
            } else {
                registry().entries()[i].code
            }
        };
        out.push_str("META\n");
        let _ = writeln!(out, "meta\tcorpus\t{}", self.corpus.replace(['\t', '\n'], " "));
        let _ = writeln!(out, "meta\ttokens\t{}", self.token_count);
        let _ = writeln!(out, "meta\tk_transition\t{}", self.smoothing.k_transition);
        let _ = writeln!(out, "meta\tk_emission\t{}", self.smoothing.k_emission);
        let _ = writeln!(out, "meta\tvocabulary\t{}", self.vocabulary.len());
        for tag in &self.inventory {
            let _ = writeln!(out, "meta\tinventory\t{tag}");
        }
        for (i, lp) in self.priors.iter().enumerate() {
            let _ = writeln!(out, "prior\t{}\t{}", code(i, END), lp / ln10);
        }

        out.push_str("TRANSITIONS\n");
        for c in 0..=self.n {
            let outcomes = if c == self.n { self.n } else { self.n + 1 };
            let row = &self.transitions[c * (self.n + 1)..c * (self.n + 1) + outcomes];
            // the smallest value is the add-k floor shared by unseen outcomes
            let floor = row.iter().copied().fold(f64::INFINITY, f64::min);
            let _ = writeln!(out, "{}\t{UNSEEN}\t{}", code(c, START), floor / ln10);
            for (o, &lp) in row.iter().enumerate() {
                if lp != floor {
                    let _ = writeln!(out, "{}\t{}\t{}", code(c, START), code(o, END), lp / ln10);
                }
            }
        }

        out.push_str("EMISSIONS\n");
        let mut names: Vec<&str> = vec![""; self.vocabulary.len()];
        for (w, &i) in &self.vocabulary {
            names[i as usize] = w;
        }
        let mut by_tag: Vec<Vec<(&str, f64)>> = vec![Vec::new(); self.n];
        for (&(t, w), &lp) in &self.emissions {
            by_tag[t as usize].push((names[w as usize], lp));
        }
        for seen in &mut by_tag {
            seen.sort_unstable_by(|a, b| a.0.cmp(b.0));
        }
        for (t, seen) in by_tag.iter().enumerate() {
            let tag = registry().entries()[t].code;
            let _ = writeln!(out, "{tag}\t{UNSEEN}\t{}", self.emission_unseen[t] / ln10);
            for (w, lp) in seen {
                let _ = writeln!(out, "{tag}\t{w}\t{}", lp / ln10);
            }
        }
        out
    }

    pub fn save(&self, path: &Path) -> Result<(), TaggerError> {
        std::fs::write(path, self.to_text()).map_err(|source| TaggerError::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<HmmModel, TaggerError> {
        let text = std::fs::read_to_string(path).map_err(|source| TaggerError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        HmmModel::parse(&text)
    }

    /// Parses the model text and checks that every distribution sums to 1.
    pub fn parse(text: &str) -> Result<HmmModel, TaggerError> {
        ModelReader::default().read(text)
    }
}

fn word_tags(emissions: &HashMap<(u16, u32), f64>) -> HashMap<u32, AmbiguityClass> {
    let mut out: HashMap<u32, AmbiguityClass> = HashMap::new();
    for &(t, w) in emissions.keys() {
        let tag = Tag::from_index(t as usize).expect("registry index");
        out.entry(w)
            .and_modify(|c| c.union_with(&AmbiguityClass::singleton(tag)))
            .or_insert_with(|| AmbiguityClass::singleton(tag));
    }
    out
}

pub const NORMALIZATION_TOLERANCE: f64 = 1e-6;

/// Per context: the `<UNSEEN>` value and the explicit rows.
type Rows<K> = HashMap<usize, (Option<f64>, Vec<(K, f64)>)>;

#[derive(Default)]
struct ModelReader {
    meta: HashMap<String, String>,
    inventory: BTreeSet<Tag>,
    priors: HashMap<usize, f64>,
    transitions: Rows<usize>,
    emissions: Rows<String>,
}

impl ModelReader {
    fn read(mut self, text: &str) -> Result<HmmModel, TaggerError> {
        let n = registry().len();
        let ln10 = std::f64::consts::LN_10;
        let mut section = "";
        for (idx, line) in text.lines().enumerate() {
            let lineno = idx + 1;
            let err = |message: String| TaggerError::ModelFormat { line: lineno, message };
            if matches!(line, "META" | "TRANSITIONS" | "EMISSIONS") {
                section = line;
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            let [context, outcome, value] = cols[..] else {
                return Err(err("expected three tab-separated columns".into()));
            };
            let tag_index = |code: &str| {
                parse_tag(code)
                    .map(Tag::index)
                    .map_err(|_| err(format!("unknown tag `{code}`")))
            };
            let log10 = || {
                value
                    .parse::<f64>()
                    .ok()
                    .filter(|v| !v.is_nan() && *v <= 0.0)
                    .ok_or_else(|| err(format!("bad log10 probability `{value}`")))
            };
            match section {
                "META" => match context {
                    "meta" if outcome == "inventory" => {
                        self.inventory.insert(parse_tag(value).map_err(|_| err(format!("unknown tag `{value}`")))?);
                    }
                    "meta" => {
                        self.meta.insert(outcome.to_string(), value.to_string());
                    }
                    "prior" => {
                        self.priors.insert(tag_index(outcome)?, log10()? * ln10);
                    }
                    other => return Err(err(format!("unexpected META row `{other}`"))),
                },
                "TRANSITIONS" => {
                    let c = if context == START { n } else { tag_index(context)? };
                    let entry = self.transitions.entry(c).or_default();
                    if outcome == UNSEEN {
                        entry.0 = Some(log10()? * ln10);
                    } else {
                        let o = if outcome == END { n } else { tag_index(outcome)? };
                        if c == n && o == n {
                            return Err(err("start cannot be followed by end".into()));
                        }
                        entry.1.push((o, log10()? * ln10));
                    }
                }
                "EMISSIONS" => {
                    let t = tag_index(context)?;
                    let entry = self.emissions.entry(t).or_default();
                    if outcome == UNSEEN {
                        entry.0 = Some(log10()? * ln10);
                    } else {
                        entry.1.push((outcome.to_string(), log10()? * ln10));
                    }
                }
                _ => return Err(err("row outside of a section".into())),
            }
        }
        self.finish()
    }

    fn finish(self) -> Result<HmmModel, TaggerError> {
        let n = registry().len();
        let eof = |message: String| TaggerError::ModelFormat { line: 0, message };
        let meta = |key: &str| {
            self.meta
                .get(key)
                .ok_or_else(|| eof(format!("missing META `{key}`")))
        };
        let number = |key: &str| -> Result<f64, TaggerError> {
            meta(key)?
                .parse::<f64>()
                .map_err(|_| eof(format!("META `{key}` is not a number")))
        };
        let smoothing = Smoothing {
            k_transition: number("k_transition")?,
            k_emission: number("k_emission")?,
        };
        smoothing.validate()?;
        let token_count = number("tokens")? as u64;
        let vocab_size = number("vocabulary")? as usize;

        let mut transitions = vec![f64::NEG_INFINITY; (n + 1) * (n + 1)];
        for c in 0..=n {
            let (unseen, explicit) = self
                .transitions
                .get(&c)
                .ok_or_else(|| eof(format!("missing transition context {c}")))?;
            let unseen = unseen.ok_or_else(|| eof(format!("missing {UNSEEN} row for context {c}")))?;
            let outcomes = if c == n { n } else { n + 1 };
            for o in 0..outcomes {
                transitions[c * (n + 1) + o] = unseen;
            }
            for &(o, lp) in explicit {
                transitions[c * (n + 1) + o] = lp;
            }
            let mass: f64 = (0..outcomes).map(|o| transitions[c * (n + 1) + o].exp()).sum();
            if (mass - 1.0).abs() > NORMALIZATION_TOLERANCE {
                return Err(eof(format!("transition context {c} sums to {mass}")));
            }
        }

        let mut vocabulary: HashMap<String, u32> = HashMap::new();
        let mut emissions = HashMap::new();
        let mut emission_unseen = vec![0.0; n];
        for (t, unseen_slot) in emission_unseen.iter_mut().enumerate() {
            let (unseen, explicit) = self
                .emissions
                .get(&t)
                .ok_or_else(|| eof(format!("missing emission context {}", registry().entries()[t].code)))?;
            let unseen = unseen.ok_or_else(|| eof(format!("missing {UNSEEN} emission row for tag {t}")))?;
            *unseen_slot = unseen;
            let mut mass = 0.0;
            for (w, lp) in explicit {
                let next = vocabulary.len() as u32;
                let id = *vocabulary.entry(w.clone()).or_insert(next);
                emissions.insert((t as u16, id), *lp);
                mass += lp.exp();
            }
            if explicit.len() > vocab_size {
                return Err(eof(format!("tag {t} lists more words than the vocabulary")));
            }
            mass += (vocab_size + 1 - explicit.len()) as f64 * unseen.exp();
            if (mass - 1.0).abs() > NORMALIZATION_TOLERANCE {
                return Err(eof(format!(
                    "emissions of {} sum to {mass}",
                    registry().entries()[t].code
                )));
            }
        }
        // every training word has at least one explicit row
        if vocabulary.len() != vocab_size {
            return Err(eof(format!(
                "{} distinct words listed, META declares {vocab_size}",
                vocabulary.len()
            )));
        }

        let mut priors = vec![0.0; n];
        for (t, prior) in priors.iter_mut().enumerate() {
            *prior = *self
                .priors
                .get(&t)
                .ok_or_else(|| eof(format!("missing prior for {}", registry().entries()[t].code)))?;
        }

        Ok(HmmModel {
            n,
            word_tags: word_tags(&emissions),
            transitions,
            emissions,
            emission_unseen,
            vocabulary,
            priors,
            inventory: self.inventory,
            smoothing,
            corpus: self.meta.get("corpus").cloned().unwrap_or_default(),
            token_count,
        })
    }
}

/// Per-position candidate tags with their emission log-scores.
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    pub columns: Vec<Vec<(Tag, f64)>>,
}

/// Transition log-scores consumed by the decoder.
pub trait TransitionScores {
    fn start(&self, tag: Tag) -> f64;
    fn transition(&self, from: Tag, to: Tag) -> f64;
    fn end(&self, tag: Tag) -> f64;
}

impl TransitionScores for HmmModel {
    fn start(&self, tag: Tag) -> f64 {
        self.transition_log(None, Some(tag))
    }

    fn transition(&self, from: Tag, to: Tag) -> f64 {
        self.transition_log(Some(from), Some(to))
    }

    fn end(&self, tag: Tag) -> f64 {
        self.transition_log(Some(tag), None)
    }
}

/// Sum of start, transition, emission and end scores along `path`.
pub fn path_score<S: TransitionScores>(scores: &S, lattice: &Lattice, path: &[usize]) -> f64 {
    let mut total = 0.0;
    let mut prev: Option<Tag> = None;
    for (i, &j) in path.iter().enumerate() {
        let (tag, emit) = lattice.columns[i][j];
        total += match prev {
            None => scores.start(tag),
            Some(p) => scores.transition(p, tag),
        };
        total += emit;
        prev = Some(tag);
    }
    if let Some(p) = prev {
        total += scores.end(p);
    }
    total
}

/// Best path through `lattice` whose adjacent tag pairs are all allowed by
/// `rules`. Columns must be in registry order; among equally scored paths
/// the one with the earlier tag at the first differing position wins.
///
/// Runs a backward pass for the best completion from every cell, then
/// walks forward picking the first maximizing candidate at each step.
pub fn decode_lattice<S: TransitionScores>(
    scores: &S,
    rules: &RuleSet,
    lattice: &Lattice,
) -> Result<(Vec<Tag>, f64), DecodeError> {
    let columns = &lattice.columns;
    if let Some(pos) = columns.iter().position(Vec::is_empty) {
        return Err(DecodeError::EmptyCandidates(pos));
    }
    let Some(last) = columns.len().checked_sub(1) else {
        return Ok((Vec::new(), 0.0));
    };
    let step = |from: Tag, to: Tag, rest: f64| {
        if rules.allowed(from, to) {
            scores.transition(from, to) + rest
        } else {
            f64::NEG_INFINITY
        }
    };

    let mut completion: Vec<Vec<f64>> = vec![Vec::new(); columns.len()];
    completion[last] = columns[last].iter().map(|&(t, e)| e + scores.end(t)).collect();
    for i in (0..last).rev() {
        let next = &completion[i + 1];
        completion[i] = columns[i]
            .iter()
            .map(|&(t, e)| {
                let best = columns[i + 1]
                    .iter()
                    .zip(next)
                    .map(|(&(u, _), &rest)| step(t, u, rest))
                    .fold(f64::NEG_INFINITY, f64::max);
                e + best
            })
            .collect();
    }

    let first_best = |values: Vec<f64>| -> Option<usize> {
        let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if best == f64::NEG_INFINITY {
            return None;
        }
        values.iter().position(|&v| v == best)
    };

    let mut path = Vec::with_capacity(columns.len());
    let starts = columns[0]
        .iter()
        .zip(&completion[0])
        .map(|(&(t, _), &rest)| scores.start(t) + rest)
        .collect();
    let mut current = first_best(starts).ok_or(DecodeError::NoValidPath)?;
    path.push(current);
    for i in 1..columns.len() {
        let from = columns[i - 1][current].0;
        let options = columns[i]
            .iter()
            .zip(&completion[i])
            .map(|(&(u, _), &rest)| step(from, u, rest))
            .collect();
        current = first_best(options).ok_or(DecodeError::NoValidPath)?;
        path.push(current);
    }

    let score = path_score(scores, lattice, &path);
    let tags = path.iter().enumerate().map(|(i, &j)| columns[i][j].0).collect();
    Ok((tags, score))
}

pub fn viterbi_decode(
    model: &HmmModel,
    rules: &RuleSet,
    sentence: &[(Token, AmbiguityClass)],
) -> Result<(Vec<Tag>, f64), DecodeError> {
    decode_lattice(model, rules, &model.lattice(sentence))
}

fn class_of(code: &str) -> AmbiguityClass {
    AmbiguityClass::singleton(parse_tag(code).expect("registry tag"))
}

/// Candidate tags for one token: fixed split candidates, then the lexicon,
/// then the tags seen in training, then the suffix guesser.
/// `sentence_initial` enables the proper-noun guess only for capitalized
/// words that do not open the sentence.
pub fn candidates(model: &HmmModel, lexicon: &Lexicon, token: &Token, sentence_initial: bool) -> AmbiguityClass {
    if let Some(class) = &token.candidates {
        return class.clone();
    }
    match token.kind {
        TokenKind::Punctuation => punctuation_tag(&token.surface)
            .map(AmbiguityClass::singleton)
            .unwrap_or_else(|| class_of("PNC")),
        TokenKind::Number => {
            if token.surface.contains('-') {
                class_of("CARDGU")
            } else {
                class_of("CARDXP")
            }
        }
        TokenKind::Code => class_of("CODE"),
        TokenKind::Formula => class_of("FO"),
        _ => {
            if let Some(class) = lexicon.lookup(&token.surface).or_else(|| model.seen_tags(&token.surface)) {
                return class.clone();
            }
            let alphabetic = token.surface.chars().filter(|c| c.is_alphabetic()).count();
            if token.kind == TokenKind::Word && alphabetic * 2 > token.surface.chars().count() {
                guess_in_context(&token.surface, sentence_initial).unwrap_or_else(|_| class_of("PNC"))
            } else {
                class_of("PNC")
            }
        }
    }
}

/// Attaches candidate sets to the tokens of one sentence.
pub fn sentence_candidates(model: &HmmModel, lexicon: &Lexicon, tokens: &[Token]) -> Vec<(Token, AmbiguityClass)> {
    let mut seen_word = false;
    tokens
        .iter()
        .map(|token| {
            let initial = !seen_word;
            if token.kind != TokenKind::Punctuation {
                seen_word = true;
            }
            (token.clone(), candidates(model, lexicon, token, initial))
        })
        .collect()
}

/// Tokenizer, lexicon, model and rules wired into one tagging pipeline.
pub struct Pipeline<'a> {
    pub tokenizer: &'a Tokenizer,
    pub lexicon: &'a Lexicon,
    pub model: &'a HmmModel,
    pub rules: &'a RuleSet,
    pub split_enclitics: bool,
}

impl Pipeline<'_> {
    fn tag_sentence(&self, index: usize, tokens: &[Token]) -> Result<TaggedSentence, TaggerError> {
        let sentence = sentence_candidates(self.model, self.lexicon, tokens);
        let (tags, fallback) = match viterbi_decode(self.model, self.rules, &sentence) {
            Ok((tags, _)) => (tags, false),
            Err(DecodeError::NoValidPath) => {
                let (tags, _) = viterbi_decode(self.model, &RuleSet::default(), &sentence)
                    .map_err(|source| TaggerError::Decode { sentence: index, source })?;
                (tags, true)
            }
            Err(source) => return Err(TaggerError::Decode { sentence: index, source }),
        };
        Ok(TaggedSentence {
            pairs: sentence.into_iter().map(|(t, _)| t).zip(tags).collect(),
            fallback,
        })
    }

    pub fn tag_text(&self, text: &str) -> Result<Vec<TaggedSentence>, TaggerError> {
        self.tag_text_jobs(text, 1)
    }

    /// Tags sentences on up to `jobs` threads; output order is input order.
    pub fn tag_text_jobs(&self, text: &str, jobs: usize) -> Result<Vec<TaggedSentence>, TaggerError> {
        let tokens = self.tokenizer.textwords(text, self.lexicon, self.split_enclitics);
        let sentences = sentence_split(&tokens);
        if jobs <= 1 {
            return sentences
                .iter()
                .enumerate()
                .map(|(i, s)| self.tag_sentence(i, s))
                .collect();
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("thread pool");
        pool.install(|| {
            sentences
                .par_iter()
                .enumerate()
                .map(|(i, s)| self.tag_sentence(i, s))
                .collect()
        })
    }
}

pub fn tag_text(
    model: &HmmModel,
    lexicon: &Lexicon,
    rules: &RuleSet,
    text: &str,
) -> Result<Vec<TaggedSentence>, TaggerError> {
    Pipeline {
        tokenizer: &Tokenizer::new(),
        lexicon,
        model,
        rules,
        split_enclitics: true,
    }
    .tag_text(text)
}
