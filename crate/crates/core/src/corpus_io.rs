//! Vertical corpus files (`token<TAB>TAG`, blank line between sentences)
//! and token-level evaluation.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::lexicon::Lexicon;
use crate::tagger::TaggedSentence;
use crate::tagset::{parse_tag, Tag};
use crate::tokenizer::{punctuation_tag, Token};

pub const FALLBACK_MARK: &str = "#FALLBACK";

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("line {line}: unknown tag `{tag}`")]
    UnknownTag { line: usize, tag: String },
    #[error("token streams differ at position {position}")]
    Alignment { position: usize },
}

/// A tag that lenient reading could not resolve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Issue {
    pub line: usize,
    pub tag: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerticalDocument {
    pub sentences: Vec<TaggedSentence>,
    pub provenance: Option<PathBuf>,
    /// Unknown tags met in lenient mode; each was replaced by `PNC`.
    pub issues: Vec<Issue>,
    /// Source line of every token, per sentence; empty unless parsed.
    pub lines: Vec<Vec<usize>>,
}

impl VerticalDocument {
    pub fn new(sentences: Vec<TaggedSentence>) -> Self {
        VerticalDocument {
            sentences,
            ..Default::default()
        }
    }

    pub fn token_count(&self) -> usize {
        self.sentences.iter().map(TaggedSentence::len).sum()
    }

    pub fn tokens(&self) -> impl Iterator<Item = &(Token, Tag)> {
        self.sentences.iter().flat_map(|s| s.pairs.iter())
    }
}

pub fn parse_vertical(text: &str, strict: bool) -> Result<VerticalDocument, CorpusError> {
    let mut doc = VerticalDocument::default();
    let mut current = TaggedSentence::new(Vec::new());
    let mut current_lines = Vec::new();
    let lenient_tag = parse_tag("PNC").expect("registry tag");
    for (idx, raw) in text.split('\n').enumerate() {
        let line = idx + 1;
        let content = raw.strip_suffix('\r').unwrap_or(raw);
        if content.is_empty() {
            if !current.is_empty() {
                doc.sentences.push(std::mem::replace(&mut current, TaggedSentence::new(Vec::new())));
                doc.lines.push(std::mem::take(&mut current_lines));
            }
            continue;
        }
        if content.starts_with('#') && !content.contains('\t') {
            if content == FALLBACK_MARK {
                current.fallback = true;
            }
            continue;
        }
        let mut fields = content.split('\t');
        let (Some(surface), Some(code), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(CorpusError::Format {
                line,
                message: "expected `token<TAB>TAG`".into(),
            });
        };
        if surface.is_empty() || code.is_empty() {
            return Err(CorpusError::Format {
                line,
                message: "empty token or tag".into(),
            });
        }
        let tag = match parse_tag(code) {
            Ok(tag) => tag,
            Err(_) if !strict => {
                doc.issues.push(Issue { line, tag: code.to_string() });
                lenient_tag
            }
            Err(_) => {
                return Err(CorpusError::UnknownTag {
                    line,
                    tag: code.to_string(),
                })
            }
        };
        current.pairs.push((Token::word(surface), tag));
        current_lines.push(line);
    }
    if !current.is_empty() {
        doc.sentences.push(current);
        doc.lines.push(current_lines);
    }
    Ok(doc)
}

pub fn read_vertical(path: &Path, strict: bool) -> Result<VerticalDocument, CorpusError> {
    let text = std::fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut doc = parse_vertical(&text, strict)?;
    doc.provenance = Some(path.to_path_buf());
    Ok(doc)
}

/// Canonical text: one `token<TAB>TAG` line per token, a blank line after
/// each sentence. Whitespace inside a token becomes a single space.
pub fn write_vertical(doc: &VerticalDocument) -> String {
    write_sentences(&doc.sentences)
}

pub fn write_sentences(sentences: &[TaggedSentence]) -> String {
    let mut out = String::new();
    for sentence in sentences.iter().filter(|s| !s.is_empty()) {
        if sentence.fallback {
            out.push_str(FALLBACK_MARK);
            out.push('\n');
        }
        for (token, tag) in &sentence.pairs {
            let surface = token.surface.split_whitespace().collect::<Vec<_>>().join(" ");
            let _ = writeln!(out, "{surface}\t{tag}");
        }
        out.push('\n');
    }
    out
}

pub fn save_vertical(doc: &VerticalDocument, path: &Path) -> Result<(), CorpusError> {
    std::fs::write(path, write_vertical(doc)).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EvalReport {
    pub token_count: usize,
    pub correct: usize,
    /// (gold, predicted) → count.
    pub confusion: BTreeMap<(Tag, Tag), usize>,
    /// Non-punctuation tokens absent from the lexicon given to
    /// [`evaluate_with`].
    pub unknown_tokens: usize,
    pub unknown_correct: usize,
}

impl EvalReport {
    pub fn accuracy(&self) -> f64 {
        if self.token_count == 0 {
            0.0
        } else {
            self.correct as f64 / self.token_count as f64
        }
    }

    pub fn unknown_accuracy(&self) -> Option<f64> {
        (self.unknown_tokens > 0).then(|| self.unknown_correct as f64 / self.unknown_tokens as f64)
    }

    pub fn confusion_tsv(&self) -> String {
        let mut out = String::from("gold\tpredicted\tcount\n");
        for ((gold, pred), count) in &self.confusion {
            let _ = writeln!(out, "{gold}\t{pred}\t{count}");
        }
        out
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "tokens\t{}", self.token_count);
        let _ = writeln!(out, "correct\t{}", self.correct);
        let _ = writeln!(out, "accuracy\t{:.6}", self.accuracy());
        let _ = writeln!(out, "unknown_tokens\t{}", self.unknown_tokens);
        match self.unknown_accuracy() {
            Some(acc) => {
                let _ = writeln!(out, "unknown_accuracy\t{acc:.6}");
            }
            None => out.push_str("unknown_accuracy\tn/a\n"),
        }
        out
    }
}

pub fn evaluate(gold: &VerticalDocument, pred: &VerticalDocument) -> Result<EvalReport, CorpusError> {
    evaluate_with(gold, pred, None)
}

/// Token-level comparison of two documents over the same token stream.
/// Sentence boundaries may differ; surfaces must not.
pub fn evaluate_with(
    gold: &VerticalDocument,
    pred: &VerticalDocument,
    lexicon: Option<&Lexicon>,
) -> Result<EvalReport, CorpusError> {
    let mut report = EvalReport::default();
    let mut g = gold.tokens();
    let mut p = pred.tokens();
    let mut position = 0;
    loop {
        let ((gt, gtag), (pt, ptag)) = match (g.next(), p.next()) {
            (None, None) => break,
            (Some(a), Some(b)) => (a, b),
            _ => return Err(CorpusError::Alignment { position }),
        };
        if gt.surface != pt.surface {
            return Err(CorpusError::Alignment { position });
        }
        report.token_count += 1;
        let hit = gtag == ptag;
        report.correct += usize::from(hit);
        *report.confusion.entry((*gtag, *ptag)).or_default() += 1;
        if lexicon.is_some_and(|lex| !lex.contains(&gt.surface)) && punctuation_tag(&gt.surface).is_none() {
            report.unknown_tokens += 1;
            report.unknown_correct += usize::from(hit);
        }
        position += 1;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIXTURE: &str = "La\tARTDFS\nmesa\tNCFS\n.\t.\n\n¿\tIQUEST\nDónde\tADVLIN\n?\t?\n\n";

    #[test]
    fn reads_two_sentences() {
        let doc = parse_vertical(FIXTURE, true).unwrap();
        assert_eq!(doc.sentences.len(), 2);
        assert_eq!(doc.token_count(), 6);
        assert_eq!(doc.sentences[1].pairs[0].1.code(), "IQUEST");
        assert_eq!(write_vertical(&doc), FIXTURE);
    }

    #[test]
    fn format_errors_name_the_line() {
        let err = parse_vertical("La\tARTDFS\nmesa NCFS\n", true).unwrap_err();
        assert!(matches!(err, CorpusError::Format { line: 2, .. }));
        assert!(matches!(parse_vertical("a\tb\tc\n", true), Err(CorpusError::Format { line: 1, .. })));
        assert!(matches!(parse_vertical("\tNCFS\n", true), Err(CorpusError::Format { line: 1, .. })));
    }

    #[test]
    fn strict_and_lenient() {
        let text = "mesa\tNCFS\nfoo\tBADTAG\n";
        assert!(matches!(
            parse_vertical(text, true),
            Err(CorpusError::UnknownTag { line: 2, ref tag }) if tag == "BADTAG"
        ));
        let doc = parse_vertical(text, false).unwrap();
        assert_eq!(doc.issues, vec![Issue { line: 2, tag: "BADTAG".into() }]);
        assert_eq!(doc.sentences[0].pairs[1].1.code(), "PNC");
    }

    #[test]
    fn normalizes_non_canonical_input() {
        let messy = "\n\nLa\tARTDFS\r\nmesa\tNCFS\n\n\n\n# note\n.\t.";
        let doc = parse_vertical(messy, true).unwrap();
        let once = write_vertical(&doc);
        assert_eq!(once, "La\tARTDFS\nmesa\tNCFS\n\n.\t.\n\n");
        assert_eq!(write_vertical(&parse_vertical(&once, true).unwrap()), once);
    }

    #[test]
    fn empty_document() {
        assert_eq!(write_vertical(&VerticalDocument::default()), "");
        assert!(parse_vertical("", true).unwrap().sentences.is_empty());
    }

    #[test]
    fn fallback_mark_round_trips() {
        let text = "#FALLBACK\nLa\tARTDFS\n\nmesa\tNCFS\n\n";
        let doc = parse_vertical(text, true).unwrap();
        assert!(doc.sentences[0].fallback);
        assert!(!doc.sentences[1].fallback);
        assert_eq!(write_vertical(&doc), text);
    }

    #[test]
    fn evaluation() {
        let gold = parse_vertical(FIXTURE, true).unwrap();
        let report = evaluate(&gold, &gold).unwrap();
        assert_eq!(report.accuracy(), 1.0);
        assert_eq!(report.confusion.values().sum::<usize>(), 6);

        let pred = parse_vertical(&FIXTURE.replace("La\tARTDFS", "La\tPPO3FS"), true).unwrap();
        let report = evaluate_with(&gold, &pred, Some(&Lexicon::seed())).unwrap();
        assert_eq!(report.correct, 5);
        assert_eq!(report.confusion[&(parse_tag("ARTDFS").unwrap(), parse_tag("PPO3FS").unwrap())], 1);
        // "mesa" is outside the seed lexicon, punctuation never counts
        assert_eq!(report.unknown_tokens, 1);
        assert!(report.summary().contains("accuracy\t0.833333"));
        let tsv = report.confusion_tsv();
        assert!(tsv.starts_with("gold\tpredicted\tcount\n"));
        assert!(tsv.contains("\nARTDFS\tPPO3FS\t1\n"));
        assert_eq!(tsv.lines().count(), 1 + report.confusion.len());
    }

    #[test]
    fn alignment_errors() {
        let gold = parse_vertical(FIXTURE, true).unwrap();
        let pred = parse_vertical(&FIXTURE.replace("¿\tIQUEST", "¡\tIEXCL"), true).unwrap();
        assert!(matches!(evaluate(&gold, &pred), Err(CorpusError::Alignment { position: 3 })));
        let short = parse_vertical("La\tARTDFS\n", true).unwrap();
        assert!(matches!(evaluate(&gold, &short), Err(CorpusError::Alignment { position: 1 })));
    }
}
