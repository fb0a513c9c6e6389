//! Transition-bias rules: hard constraints over adjacent tag pairs.
//!
//! A rules file holds one directive per line:
//!
//! ```text
//! # determiner and noun must agree
//! FORBID ARTDFS NCMP
//! REQUIRE PPOSP? NC*
//! ```
//!
//! `FORBID a b` bans every pair whose left tag matches `a` and right tag
//! matches `b`. `REQUIRE a b` bans every pair whose left tag matches `a`
//! unless the right tag matches `b`; the last tag of a sentence is exempt.

use std::fmt;

use thiserror::Error;

use crate::tagset::{registry, Tag};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RuleError {
    #[error("line {line}: syntax error: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: bad pattern `{pattern}`")]
    BadPattern { line: usize, pattern: String },
}

/// Tag code pattern: literal characters, `?` for exactly one character and
/// an optional final `*` for any suffix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TagPattern {
    literal: Vec<Option<char>>,
    open_ended: bool,
    text: String,
}

impl TagPattern {
    /// Literals are uppercase ASCII letters, digits, or the punctuation
    /// characters used by punctuation tag codes.
    pub fn parse(text: &str) -> Option<TagPattern> {
        let (body, open_ended) = match text.strip_suffix('*') {
            Some(body) => (body, true),
            None => (text, false),
        };
        if text.is_empty() {
            return None;
        }
        let mut literal = Vec::new();
        for c in body.chars() {
            match c {
                '?' => literal.push(None),
                c if c.is_ascii_uppercase() || c.is_ascii_digit() => literal.push(Some(c)),
                '!' | '"' | '(' | ')' | ',' | '-' | '.' | ':' | ';' => literal.push(Some(c)),
                _ => return None,
            }
        }
        Some(TagPattern {
            literal,
            open_ended,
            text: text.to_string(),
        })
    }

    pub fn matches(&self, code: &str) -> bool {
        let mut chars = code.chars();
        for want in &self.literal {
            match (chars.next(), want) {
                (None, _) => return false,
                (Some(c), Some(w)) if c != *w => return false,
                _ => {}
            }
        }
        self.open_ended || chars.next().is_none()
    }

    pub fn matches_tag(&self, tag: Tag) -> bool {
        self.matches(tag.code())
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }
}

impl fmt::Display for TagPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleKind {
    Forbid,
    Require,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiasRule {
    pub kind: RuleKind,
    pub left: TagPattern,
    pub right: TagPattern,
    /// Source line number.
    pub id: usize,
}

impl BiasRule {
    /// Whether this rule alone bans `left` followed by `right`.
    pub fn bans(&self, left: Tag, right: Tag) -> bool {
        match self.kind {
            RuleKind::Forbid => self.left.matches_tag(left) && self.right.matches_tag(right),
            RuleKind::Require => self.left.matches_tag(left) && !self.right.matches_tag(right),
        }
    }
}

impl fmt::Display for BiasRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kw = match self.kind {
            RuleKind::Forbid => "FORBID",
            RuleKind::Require => "REQUIRE",
        };
        write!(f, "{kw} {} {}", self.left, self.right)
    }
}

/// Rules plus their compiled pair table. For each ordered pair the table
/// stores the id of the first rule that bans it, or 0 when allowed.
#[derive(Debug, Clone)]
pub struct RuleSet {
    rules: Vec<BiasRule>,
    table: Vec<u32>,
    width: usize,
}

impl Default for RuleSet {
    fn default() -> Self {
        RuleSet::new(Vec::new())
    }
}

impl RuleSet {
    pub fn new(rules: Vec<BiasRule>) -> Self {
        let width = registry().len();
        let mut table = vec![0u32; width * width];
        for rule in &rules {
            let lefts: Vec<usize> = registry()
                .tags()
                .filter(|t| rule.left.matches_tag(*t))
                .map(Tag::index)
                .collect();
            if lefts.is_empty() {
                continue;
            }
            let rights: Vec<bool> = registry().tags().map(|t| rule.right.matches_tag(t)).collect();
            let banned_right = |r: usize| match rule.kind {
                RuleKind::Forbid => rights[r],
                RuleKind::Require => !rights[r],
            };
            for &l in &lefts {
                for r in 0..width {
                    let cell = &mut table[l * width + r];
                    if *cell == 0 && banned_right(r) {
                        *cell = rule.id.max(1) as u32;
                    }
                }
            }
        }
        RuleSet { rules, table, width }
    }

    pub fn rules(&self) -> &[BiasRule] {
        &self.rules
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn allowed(&self, left: Tag, right: Tag) -> bool {
        self.table[left.index() * self.width + right.index()] == 0
    }

    /// Id of the first rule banning the pair.
    pub fn violated_by(&self, left: Tag, right: Tag) -> Option<usize> {
        match self.table[left.index() * self.width + right.index()] {
            0 => None,
            id => Some(id as usize),
        }
    }

    /// Allowed-ness computed straight from the rules, bypassing the table.
    pub fn allowed_direct(&self, left: Tag, right: Tag) -> bool {
        !self.rules.iter().any(|r| r.bans(left, right))
    }

    pub fn to_text(&self) -> String {
        self.rules.iter().map(|r| format!("{r}\n")).collect()
    }
}

pub fn parse_rules(text: &str) -> Result<RuleSet, RuleError> {
    let mut rules = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        let [directive, left, right] = fields[..] else {
            return Err(RuleError::Syntax {
                line,
                message: format!("expected `FORBID|REQUIRE <pattern> <pattern>`, got `{content}`"),
            });
        };
        let kind = match directive {
            "FORBID" => RuleKind::Forbid,
            "REQUIRE" => RuleKind::Require,
            other => {
                return Err(RuleError::Syntax {
                    line,
                    message: format!("unknown directive `{other}`"),
                })
            }
        };
        let pattern = |text: &str| {
            TagPattern::parse(text).ok_or_else(|| RuleError::BadPattern {
                line,
                pattern: text.to_string(),
            })
        };
        rules.push(BiasRule {
            kind,
            left: pattern(left)?,
            right: pattern(right)?,
            id: line,
        });
    }
    Ok(RuleSet::new(rules))
}

pub fn load_rules(path: &std::path::Path) -> Result<RuleSet, Box<dyn std::error::Error + Send + Sync>> {
    let text = std::fs::read_to_string(path)?;
    Ok(parse_rules(&text)?)
}

pub fn allowed(rules: &RuleSet, left: Tag, right: Tag) -> bool {
    rules.allowed(left, right)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Violation {
    /// Position of the left tag of the offending pair.
    pub index: usize,
    pub rule: usize,
}

/// One violation per banned adjacent pair of a single sentence.
pub fn validate_sequence(rules: &RuleSet, tags: &[Tag]) -> Vec<Violation> {
    tags.windows(2)
        .enumerate()
        .filter_map(|(index, w)| rules.violated_by(w[0], w[1]).map(|rule| Violation { index, rule }))
        .collect()
}

/// Validates each sentence separately; adjacency never crosses sentences.
/// Returns (sentence index, violation) pairs.
pub fn validate_sentences(rules: &RuleSet, sentences: &[Vec<Tag>]) -> Vec<(usize, Violation)> {
    sentences
        .iter()
        .enumerate()
        .flat_map(|(s, tags)| validate_sequence(rules, tags).into_iter().map(move |v| (s, v)))
        .collect()
}
