//! Segmentation of raw Spanish text into textwords.
//!
//! [`Tokenizer::tokenize`] is lossless: every non-whitespace character of
//! the input belongs to exactly one token and `text[span] == surface`.
//! [`Tokenizer::textwords`] then resolves orthographic words that do not
//! map one-to-one onto textwords: portmanteaux get their own tag, verbs
//! with enclitics are split, and listed multiwords are merged.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;

use crate::lexicon::{AmbiguityClass, Lexicon};
use crate::tagset::{parse_tag, registry, Category, Mood, Tag};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Word,
    Punctuation,
    Number,
    Code,
    Formula,
    Abbreviation,
    PortmanteauPart,
    EncliticPart,
}

impl TokenKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TokenKind::Word => "word",
            TokenKind::Punctuation => "punctuation",
            TokenKind::Number => "number",
            TokenKind::Code => "code",
            TokenKind::Formula => "formula",
            TokenKind::Abbreviation => "abbreviation",
            TokenKind::PortmanteauPart => "portmanteau-part",
            TokenKind::EncliticPart => "enclitic-part",
        }
    }
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Where a split token came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Origin {
    pub parent: String,
    pub part: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    /// Byte range into the source text.
    pub span: (usize, usize),
    pub kind: TokenKind,
    pub origin: Option<Origin>,
    /// Candidate tags fixed during segmentation (split parts only).
    pub candidates: Option<AmbiguityClass>,
}

impl Token {
    pub fn new(surface: impl Into<String>, span: (usize, usize), kind: TokenKind) -> Self {
        Token {
            surface: surface.into(),
            span,
            kind,
            origin: None,
            candidates: None,
        }
    }

    /// A bare word token without a meaningful source position.
    pub fn word(surface: impl Into<String>) -> Self {
        Token::new(surface, (0, 0), TokenKind::Word)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Confidence {
    Certain,
    Heuristic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitDecision {
    /// Textword surfaces with their candidate tags. A verb stem appears
    /// with its written accent removed when that is the attested form.
    pub parts: Vec<(String, AmbiguityClass)>,
    pub confidence: Confidence,
    /// The parts exactly as written; these concatenate to the source word.
    pub written: Vec<String>,
}

/// Maps a punctuation surface onto its punctuation tag.
pub fn punctuation_tag(surface: &str) -> Option<Tag> {
    let code = match surface {
        "¿" => "IQUEST",
        "¡" => "IEXCL",
        "!" => "!",
        "\"" | "«" | "»" | "“" | "”" | "„" | "'" | "‘" | "’" => "\"",
        "(" | "[" | "{" => "(",
        ")" | "]" | "}" => ")",
        "," => ",",
        "-" | "–" | "—" => "-",
        "." => ".",
        "..." | "…" => "...",
        ":" => ":",
        ";" => ";",
        "?" => "?",
        _ => return None,
    };
    registry().get(code)
}

fn is_punctuation_mark(c: char) -> bool {
    let mut buf = [0u8; 4];
    punctuation_tag(c.encode_utf8(&mut buf)).is_some()
}

fn is_combining_mark(c: char) -> bool {
    matches!(c as u32,
        0x0300..=0x036F | 0x1AB0..=0x1AFF | 0x1DC0..=0x1DFF | 0x20D0..=0x20FF | 0xFE20..=0xFE2F)
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || is_combining_mark(c)
}

const FORMULA_OPERATORS: [char; 6] = ['=', '+', '^', '*', '<', '>'];

#[derive(Debug, Clone)]
pub struct Tokenizer {
    /// Longest first, so that the longest listed abbreviation wins.
    abbreviations: Vec<String>,
    /// Lowercased word sequences, longest first.
    multiwords: Vec<Vec<String>>,
}

impl Default for Tokenizer {
    fn default() -> Self {
        Tokenizer::new()
    }
}

/// Title and unit forms from the registry examples (Sr., pta., ...).
pub fn builtin_abbreviations() -> Vec<String> {
    registry()
        .entries()
        .iter()
        .filter(|e| matches!(e.bundle.category, Category::TitleNoun | Category::UnitOfMeasure))
        .flat_map(|e| e.examples.iter())
        .filter(|form| form.ends_with('.'))
        .map(|s| s.to_string())
        .collect()
}

fn resource_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
}

impl Tokenizer {
    pub fn new() -> Self {
        let mut t = Tokenizer {
            abbreviations: Vec::new(),
            multiwords: Vec::new(),
        };
        t.add_abbreviations(builtin_abbreviations());
        t
    }

    pub fn add_abbreviations<I: IntoIterator<Item = S>, S: Into<String>>(&mut self, forms: I) {
        let mut set: HashSet<String> = self.abbreviations.drain(..).collect();
        set.extend(forms.into_iter().map(Into::into).filter(|s: &String| !s.is_empty()));
        self.abbreviations = set.into_iter().collect();
        self.abbreviations
            .sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    }

    pub fn add_multiwords<I: IntoIterator<Item = S>, S: AsRef<str>>(&mut self, lines: I) {
        for line in lines {
            let words: Vec<String> = line.as_ref().split_whitespace().map(str::to_lowercase).collect();
            if words.len() > 1 && !self.multiwords.contains(&words) {
                self.multiwords.push(words);
            }
        }
        self.multiwords
            .sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    }

    /// One abbreviation per line; `#` starts a comment line.
    pub fn load_abbreviations(&mut self, path: &Path) -> std::io::Result<()> {
        let text = std::fs::read_to_string(path)?;
        self.add_abbreviations(resource_lines(&text).map(str::to_string));
        Ok(())
    }

    /// One space-separated multiword per line; `#` starts a comment line.
    pub fn load_multiwords(&mut self, path: &Path) -> std::io::Result<()> {
        let text = std::fs::read_to_string(path)?;
        self.add_multiwords(resource_lines(&text));
        Ok(())
    }

    pub fn is_abbreviation(&self, surface: &str) -> bool {
        self.abbreviations.iter().any(|a| a == surface)
    }

    fn abbreviation_at(&self, text: &str, start: usize) -> Option<usize> {
        let rest = &text[start..];
        self.abbreviations.iter().find_map(|abbr| {
            if !rest.starts_with(abbr.as_str()) {
                return None;
            }
            let end = start + abbr.len();
            // "Sr." needs no boundary check, a period-less listed form does
            let open = abbr.chars().last().is_some_and(is_word_char);
            let next = text[end..].chars().next();
            (!(open && next.is_some_and(is_word_char))).then_some(end)
        })
    }

    pub fn tokenize(&self, text: &str) -> Vec<Token> {
        let chars: Vec<(usize, char)> = text.char_indices().collect();
        let byte_at = |i: usize| chars.get(i).map_or(text.len(), |&(b, _)| b);
        let mut tokens = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let (start, c) = chars[i];
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if let Some(end) = self.abbreviation_at(text, start) {
                tokens.push(Token::new(&text[start..end], (start, end), TokenKind::Abbreviation));
                while byte_at(i) < end {
                    i += 1;
                }
                continue;
            }
            if text[start..].starts_with("...") {
                tokens.push(Token::new("...", (start, start + 3), TokenKind::Punctuation));
                i += 3;
                continue;
            }
            if c.is_alphanumeric() {
                let (end_idx, kind) = scan_run(&chars, i);
                let end = byte_at(end_idx);
                tokens.push(Token::new(&text[start..end], (start, end), kind));
                i = end_idx;
                continue;
            }
            let end = byte_at(i + 1);
            let kind = if is_punctuation_mark(c) {
                TokenKind::Punctuation
            } else {
                TokenKind::Word
            };
            tokens.push(Token::new(&text[start..end], (start, end), kind));
            i += 1;
        }
        tokens
    }

    /// Tokenizes and then maps orthographic words onto textwords.
    pub fn textwords(&self, text: &str, lexicon: &Lexicon, split_enclitic_forms: bool) -> Vec<Token> {
        let tokens = self.merge_multiwords(text, self.tokenize(text));
        let mut out = Vec::with_capacity(tokens.len());
        for mut token in tokens {
            if token.kind != TokenKind::Word {
                out.push(token);
                continue;
            }
            if let Some(decision) = split_portmanteau(&token) {
                let (_, class) = decision.parts.into_iter().next().expect("one part");
                token.origin = Some(Origin {
                    parent: token.surface.clone(),
                    part: 0,
                });
                token.kind = TokenKind::PortmanteauPart;
                token.candidates = Some(class);
                out.push(token);
                continue;
            }
            if split_enclitic_forms && lexicon.lookup(&token.surface).is_none() {
                if let Some(decision) = split_enclitics(&token, lexicon) {
                    for (part, (surface, class)) in decision.parts.into_iter().enumerate() {
                        out.push(Token {
                            surface,
                            span: token.span,
                            kind: TokenKind::EncliticPart,
                            origin: Some(Origin {
                                parent: token.surface.clone(),
                                part,
                            }),
                            candidates: Some(class),
                        });
                    }
                    continue;
                }
            }
            out.push(token);
        }
        out
    }

    fn merge_multiwords(&self, text: &str, tokens: Vec<Token>) -> Vec<Token> {
        if self.multiwords.is_empty() {
            return tokens;
        }
        let mut out = Vec::with_capacity(tokens.len());
        let mut i = 0;
        while i < tokens.len() {
            let matched = self.multiwords.iter().find(|words| {
                tokens.len() - i >= words.len()
                    && words.iter().zip(&tokens[i..]).all(|(w, t)| {
                        matches!(t.kind, TokenKind::Word | TokenKind::Abbreviation)
                            && t.surface.to_lowercase() == *w
                    })
            });
            match matched {
                Some(words) => {
                    let start = tokens[i].span.0;
                    let end = tokens[i + words.len() - 1].span.1;
                    out.push(Token::new(&text[start..end], (start, end), TokenKind::Word));
                    i += words.len();
                }
                None => {
                    out.push(tokens[i].clone());
                    i += 1;
                }
            }
        }
        out
    }
}

/// Scans an alphanumeric run starting at `chars[start]`; returns the index
/// one past its end and its kind.
fn scan_run(chars: &[(usize, char)], start: usize) -> (usize, TokenKind) {
    let mut j = start;
    let mut letters = false;
    let mut digits = false;
    let mut formula = false;
    while j < chars.len() {
        let c = chars[j].1;
        if is_word_char(c) {
            letters |= c.is_alphabetic();
            digits |= c.is_numeric();
            j += 1;
            continue;
        }
        let prev = chars[j - 1].1;
        let next = chars.get(j + 1).map(|&(_, n)| n);
        let joins = match next {
            Some(n) if n.is_alphanumeric() => match c {
                '-' | '/' | '\'' | '_' => true,
                '.' | ',' => prev.is_numeric() && n.is_numeric(),
                op if FORMULA_OPERATORS.contains(&op) => true,
                _ => false,
            },
            _ => false,
        };
        if !joins {
            break;
        }
        formula |= FORMULA_OPERATORS.contains(&c);
        j += 1;
    }
    let kind = if formula {
        TokenKind::Formula
    } else if !letters {
        TokenKind::Number
    } else if digits {
        TokenKind::Code
    } else {
        TokenKind::Word
    };
    (j, kind)
}

pub fn tokenize(text: &str) -> Vec<Token> {
    Tokenizer::new().tokenize(text)
}

/// `al` and `del` (first letter in either case) stay one textword with the
/// portmanteau tag; `al` may also introduce an infinitive clause.
pub fn split_portmanteau(token: &Token) -> Option<SplitDecision> {
    let mut chars = token.surface.chars();
    let first = chars.next()?.to_lowercase().collect::<String>();
    let rest: String = chars.collect();
    let codes: &[&str] = match (first.as_str(), rest.as_str()) {
        ("a", "l") => &["PAL", "CSUBI"],
        ("d", "el") => &["PDEL"],
        _ => return None,
    };
    let class = AmbiguityClass::new(codes.iter().map(|c| parse_tag(c).expect("portmanteau tag")))?;
    Some(SplitDecision {
        parts: vec![(token.surface.clone(), class)],
        confidence: Confidence::Certain,
        written: vec![token.surface.clone()],
    })
}

/// Closed list of enclitic pronouns and their candidate tags.
pub const CLITICS: [(&str, &str); 11] = [
    ("les", "PPC3P"),
    ("las", "PPO3FP"),
    ("los", "PPO3MP"),
    ("nos", "PPC1P"),
    ("me", "PPC1S"),
    ("te", "PPC2S"),
    ("se", "SE"),
    ("le", "PPC3S"),
    ("la", "PPO3FS"),
    ("lo", "PPO3XS"),
    ("os", "PPC2P"),
];

pub const MAX_ENCLITICS: usize = 2;

pub fn clitic_class(clitic: &str) -> Option<AmbiguityClass> {
    let lower = clitic.to_lowercase();
    CLITICS
        .iter()
        .find(|(form, _)| *form == lower)
        .map(|(_, code)| AmbiguityClass::singleton(parse_tag(code).expect("clitic tag")))
}

pub fn strip_written_accents(s: &str) -> String {
    s.chars()
        .map(|c| match c {
            'á' => 'a',
            'é' => 'e',
            'í' => 'i',
            'ó' => 'o',
            'ú' => 'u',
            'Á' => 'A',
            'É' => 'E',
            'Í' => 'I',
            'Ó' => 'O',
            'Ú' => 'U',
            other => other,
        })
        .collect()
}

/// Verb tags of `stem` whose mood admits enclitics.
fn enclitic_host_tags(stem: &str, lexicon: &Lexicon) -> Option<AmbiguityClass> {
    let class = lexicon.lookup(stem)?;
    AmbiguityClass::new(class.tags().filter(|t| {
        let b = t.bundle();
        b.category == Category::Verb
            && matches!(b.mood, Some(Mood::Imperative | Mood::Infinitive | Mood::Gerund))
    }))
}

/// All ways to peel `count` clitics off the right of `chars`, outermost
/// first, as (stem length in chars, clitic lengths from left to right).
fn clitic_peelings(chars: &[char], count: usize) -> Vec<(usize, Vec<usize>)> {
    if count == 0 {
        return vec![(chars.len(), Vec::new())];
    }
    let mut out = Vec::new();
    for (form, _) in CLITICS {
        let n = form.chars().count();
        if chars.len() <= n {
            continue;
        }
        let tail: String = chars[chars.len() - n..].iter().flat_map(|c| c.to_lowercase()).collect();
        if tail != form {
            continue;
        }
        for (stem_len, mut lens) in clitic_peelings(&chars[..chars.len() - n], count - 1) {
            lens.push(n);
            out.push((stem_len, lens));
        }
    }
    out
}

/// Splits a verb with up to two enclitics when the remaining stem is an
/// imperative, infinitive or gerund attested in the lexicon.
pub fn split_enclitics(token: &Token, lexicon: &Lexicon) -> Option<SplitDecision> {
    let chars: Vec<char> = token.surface.chars().collect();
    for count in (1..=MAX_ENCLITICS).rev() {
        for (stem_len, lens) in clitic_peelings(&chars, count) {
            let written_stem: String = chars[..stem_len].iter().collect();
            let bare = strip_written_accents(&written_stem);
            let host = [bare.as_str(), written_stem.as_str()]
                .into_iter()
                .find_map(|s| enclitic_host_tags(s, lexicon).map(|c| (s.to_string(), c)));
            let Some((stem, stem_class)) = host else {
                continue;
            };
            let mut parts = vec![(stem, stem_class)];
            let mut written = vec![written_stem];
            let mut pos = stem_len;
            for n in lens {
                let clitic: String = chars[pos..pos + n].iter().collect();
                pos += n;
                parts.push((clitic.clone(), clitic_class(&clitic).expect("listed clitic")));
                written.push(clitic);
            }
            return Some(SplitDecision {
                parts,
                confidence: Confidence::Heuristic,
                written,
            });
        }
    }
    None
}

fn ends_sentence(token: &Token) -> bool {
    token.kind == TokenKind::Punctuation
        && punctuation_tag(&token.surface).is_some_and(|t| matches!(t.code(), "." | "?" | "!" | "..."))
}

fn closes_after_terminal(token: &Token) -> bool {
    token.kind == TokenKind::Punctuation && matches!(token.surface.as_str(), ")" | "]" | "}" | "»" | "”")
}

/// Splits after `.`, `?`, `!` and ellipsis tokens (plus any closing
/// brackets or quotes right after them). Abbreviations never end a sentence.
pub fn sentence_split(tokens: &[Token]) -> Vec<&[Token]> {
    let mut sentences = Vec::new();
    let mut start = 0;
    let mut i = 0;
    while i < tokens.len() {
        if ends_sentence(&tokens[i]) {
            let mut end = i + 1;
            while end < tokens.len() && (ends_sentence(&tokens[end]) || closes_after_terminal(&tokens[end])) {
                end += 1;
            }
            sentences.push(&tokens[start..end]);
            start = end;
            i = end;
        } else {
            i += 1;
        }
    }
    if start < tokens.len() {
        sentences.push(&tokens[start..]);
    }
    sentences
}

#[cfg(test)]
mod tests {
    use super::*;

    fn surfaces(tokens: &[Token]) -> Vec<&str> {
        tokens.iter().map(|t| t.surface.as_str()).collect()
    }

    fn kinds(tokens: &[Token]) -> Vec<TokenKind> {
        tokens.iter().map(|t| t.kind).collect()
    }

    #[test]
    fn inverted_marks_are_separate() {
        let toks = tokenize("¿Dónde está Juan?");
        assert_eq!(surfaces(&toks), ["¿", "Dónde", "está", "Juan", "?"]);
        assert_eq!(toks[0].kind, TokenKind::Punctuation);
        assert_eq!(toks[0].span, (0, 2));
        let toks = tokenize("¡Hola!");
        assert_eq!(surfaces(&toks), ["¡", "Hola", "!"]);
    }

    #[test]
    fn numbers_codes_formulas() {
        let toks = tokenize("40-50 hectáreas, 1.000 y 3,5 en A4 con x=2+y");
        assert_eq!(
            surfaces(&toks),
            ["40-50", "hectáreas", ",", "1.000", "y", "3,5", "en", "A4", "con", "x=2+y"]
        );
        assert_eq!(toks[0].kind, TokenKind::Number);
        assert_eq!(toks[3].kind, TokenKind::Number);
        assert_eq!(toks[7].kind, TokenKind::Code);
        assert_eq!(toks[9].kind, TokenKind::Formula);
    }

    #[test]
    fn abbreviations_keep_their_period() {
        let toks = tokenize("El Sr. García y la Sra. Pérez pagan 3 pta. por cm.");
        assert!(toks.iter().any(|t| t.surface == "Sr." && t.kind == TokenKind::Abbreviation));
        assert!(toks.iter().any(|t| t.surface == "Sra." && t.kind == TokenKind::Abbreviation));
        assert!(toks.iter().any(|t| t.surface == "pta." && t.kind == TokenKind::Abbreviation));
        assert_eq!(toks.last().unwrap().surface, "cm.");
        // prefix of a longer word is not an abbreviation
        let toks = tokenize("Sr.García");
        assert_eq!(toks[0].surface, "Sr.");
        let toks = tokenize("Srta vino.");
        assert_eq!(surfaces(&toks), ["Srta", "vino", "."]);
    }

    #[test]
    fn user_abbreviations() {
        let mut t = Tokenizer::new();
        t.add_abbreviations(["EE.UU.", "etc."]);
        let toks = t.tokenize("Viajó a EE.UU. y etc.");
        assert_eq!(surfaces(&toks), ["Viajó", "a", "EE.UU.", "y", "etc."]);
    }

    #[test]
    fn ellipsis_and_final_period() {
        let toks = tokenize("Bueno... vale.");
        assert_eq!(surfaces(&toks), ["Bueno", "...", "vale", "."]);
        assert_eq!(kinds(&toks)[1], TokenKind::Punctuation);
        assert_eq!(punctuation_tag("…").unwrap().code(), "...");
    }

    #[test]
    fn odd_symbols_become_word_tokens() {
        let toks = tokenize("a § b 😀");
        assert_eq!(surfaces(&toks), ["a", "§", "b", "😀"]);
        assert_eq!(toks[1].kind, TokenKind::Word);
    }

    #[test]
    fn decomposed_accents_stay_in_the_word() {
        let text = "esta\u{301} bien";
        let toks = tokenize(text);
        assert_eq!(toks.len(), 2);
        assert_eq!(toks[0].surface, "esta\u{301}");
    }

    #[test]
    fn empty_input() {
        assert!(tokenize("").is_empty());
        assert!(tokenize(" \n\t ").is_empty());
        assert!(sentence_split(&[]).is_empty());
    }

    #[test]
    fn portmanteaux() {
        let al = split_portmanteau(&Token::word("al")).unwrap();
        assert_eq!(al.confidence, Confidence::Certain);
        assert_eq!(al.parts[0].1.signature(), "CSUBI,PAL");
        let del = split_portmanteau(&Token::word("Del")).unwrap();
        assert_eq!(del.parts[0].1.signature(), "PDEL");
        assert!(split_portmanteau(&Token::word("mal")).is_none());
        assert!(split_portmanteau(&Token::word("aL")).is_none());
        assert!(split_portmanteau(&Token::word("a")).is_none());
    }

    fn verb_lexicon() -> Lexicon {
        Lexicon::parse(
            "di\tVLPM2S\ncomer\tVLINF\ndiga\tVLPS3S\ncome\tVLPM2S,VLPI3S\ncomiendo\tVLGER\n",
            "t",
        )
        .unwrap()
    }

    #[test]
    fn enclitics_split_when_stem_is_attested() {
        let lex = verb_lexicon();
        let d = split_enclitics(&Token::word("dímelo"), &lex).unwrap();
        let parts: Vec<(&str, String)> = d.parts.iter().map(|(s, c)| (s.as_str(), c.signature())).collect();
        assert_eq!(parts, [("di", "VLPM2S".into()), ("me", "PPC1S".into()), ("lo", "PPO3XS".into())]);
        assert_eq!(d.written, ["dí", "me", "lo"]);
        assert_eq!(d.confidence, Confidence::Heuristic);

        let d = split_enclitics(&Token::word("comerse"), &lex).unwrap();
        assert_eq!(d.parts[0].0, "comer");
        assert_eq!(d.parts[1].1.signature(), "SE");

        let d = split_enclitics(&Token::word("cómelos"), &lex).unwrap();
        let surfaces: Vec<&str> = d.parts.iter().map(|(s, _)| s.as_str()).collect();
        assert_eq!(surfaces, ["come", "los"]);
        // only the mood-qualifying tags survive on the stem
        assert_eq!(d.parts[0].1.signature(), "VLPM2S");

        let d = split_enclitics(&Token::word("comiéndoselo"), &lex).unwrap();
        assert_eq!(d.written.concat(), "comiéndoselo");
        assert_eq!(d.parts.len(), 3);
    }

    #[test]
    fn enclitics_rejected() {
        let lex = verb_lexicon();
        assert!(split_enclitics(&Token::word("mesa"), &lex).is_none());
        // subjunctive stems do not host enclitics
        assert!(split_enclitics(&Token::word("dígale"), &lex).is_none());
        // three clitics exceed the bound
        assert!(split_enclitics(&Token::word("comersemelo"), &lex).is_none());
        assert!(split_enclitics(&Token::word("me"), &lex).is_none());
    }

    #[test]
    fn textwords_pipeline() {
        let lex = Lexicon::parse_with_seed("di\tVLPM2S\n", "t").unwrap();
        let t = Tokenizer::new();
        let words = t.textwords("Dímelo al salir del cine.", &lex, true);
        let s = surfaces(&words);
        assert_eq!(s, ["Di", "me", "lo", "al", "salir", "del", "cine", "."]);
        assert_eq!(words[0].kind, TokenKind::EncliticPart);
        assert_eq!(words[2].origin, Some(Origin { parent: "Dímelo".into(), part: 2 }));
        assert_eq!(words[0].span, words[2].span);
        assert_eq!(words[3].kind, TokenKind::PortmanteauPart);
        assert_eq!(words[3].candidates.as_ref().unwrap().signature(), "CSUBI,PAL");

        let unsplit = t.textwords("Dímelo", &lex, false);
        assert_eq!(surfaces(&unsplit), ["Dímelo"]);
    }

    #[test]
    fn multiwords_merge() {
        let mut t = Tokenizer::new();
        t.add_multiwords(["sin embargo", "a priori"]);
        let text = "Sin  embargo, vino a priori.";
        let words = t.textwords(text, &Lexicon::seed(), false);
        assert_eq!(surfaces(&words), ["Sin  embargo", ",", "vino", "a priori", "."]);
        assert_eq!(&text[words[0].span.0..words[0].span.1], "Sin  embargo");
    }

    #[test]
    fn sentence_splitting() {
        let toks = tokenize("Hola. Adiós.");
        assert_eq!(sentence_split(&toks).len(), 2);
        let toks = tokenize("Sr. García vino.");
        assert_eq!(sentence_split(&toks).len(), 1);
        let toks = tokenize("¿Vienes? (Sí.) Bien");
        let sents = sentence_split(&toks);
        assert_eq!(sents.len(), 3);
        assert_eq!(surfaces(sents[1]), ["(", "Sí", ".", ")"]);
        assert_eq!(surfaces(sents[2]), ["Bien"]);
        let toks = tokenize("¡¿Qué?! Vale...");
        assert_eq!(sentence_split(&toks).len(), 2);
    }
}
