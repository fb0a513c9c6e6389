//! Morphosyntactic tagging for Spanish over a closed tag registry: tag
//! codec, tokenizer, lexicon, bias rules, bigram HMM tagger, vertical
//! corpus I/O and the `sptag` command line.

pub mod bias;
pub mod cli;
pub mod corpus_io;
pub mod lexicon;
pub mod tagger;
pub mod tagset;
pub mod tokenizer;

pub use bias::{parse_rules, RuleSet};
pub use lexicon::{AmbiguityClass, Lexicon};
pub use tagger::{HmmModel, Pipeline, Smoothing, TaggedSentence};
pub use tagset::{parse_tag, registry, FeatureBundle, Tag};
pub use tokenizer::{Token, TokenKind, Tokenizer};
