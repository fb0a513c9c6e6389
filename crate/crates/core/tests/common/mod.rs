//! Independent reference implementations shared by the integration tests.

#![allow(dead_code)]

use std::collections::HashMap;
use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::Rng;
use sptagger::lexicon::Lexicon;
use sptagger::tagger::{Lattice, TransitionScores};
use sptagger::tagset::{parse_tag, Tag};
use sptagger::tokenizer::{clitic_class, strip_written_accents, CLITICS};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn tag(code: &str) -> Tag {
    parse_tag(code).unwrap()
}

/// Pattern match written out character by character.
pub fn naive_match(pattern: &str, code: &str) -> bool {
    let p: Vec<char> = pattern.chars().collect();
    let c: Vec<char> = code.chars().collect();
    let (body, open) = match p.last() {
        Some('*') => (&p[..p.len() - 1], true),
        _ => (&p[..], false),
    };
    let length_ok = if open { c.len() >= body.len() } else { c.len() == body.len() };
    length_ok && body.iter().zip(&c).all(|(a, b)| *a == '?' || a == b)
}

#[derive(Debug, Clone)]
pub struct NaiveRule {
    pub forbid: bool,
    pub left: String,
    pub right: String,
}

impl NaiveRule {
    pub fn text(&self) -> String {
        format!("{} {} {}", if self.forbid { "FORBID" } else { "REQUIRE" }, self.left, self.right)
    }
}

pub fn rules_text(rules: &[NaiveRule]) -> String {
    rules.iter().map(|r| r.text() + "\n").collect()
}

/// A pair is banned when some FORBID rule matches both sides, or some
/// REQUIRE rule matches the left side but not the right.
pub fn naive_banned(rules: &[NaiveRule], left: Tag, right: Tag) -> bool {
    rules.iter().any(|r| {
        let l = naive_match(&r.left, left.code());
        let m = naive_match(&r.right, right.code());
        if r.forbid {
            l && m
        } else {
            l && !m
        }
    })
}

/// Transition scores held in plain maps.
#[derive(Debug, Clone, Default)]
pub struct TableScores {
    pub start: HashMap<Tag, f64>,
    pub trans: HashMap<(Tag, Tag), f64>,
    pub end: HashMap<Tag, f64>,
}

impl TransitionScores for TableScores {
    fn start(&self, tag: Tag) -> f64 {
        self.start[&tag]
    }
    fn transition(&self, from: Tag, to: Tag) -> f64 {
        self.trans[&(from, to)]
    }
    fn end(&self, tag: Tag) -> f64 {
        self.end[&tag]
    }
}

/// Exhaustive search. Paths are visited in lexicographic registry order and
/// only a strictly better score replaces the incumbent, so ties resolve to
/// the lexicographically first path.
pub fn brute_force<S: TransitionScores>(
    scores: &S,
    rules: &[NaiveRule],
    lattice: &Lattice,
) -> Option<(Vec<Tag>, f64)> {
    let cols = &lattice.columns;
    let mut idx = vec![0usize; cols.len()];
    let mut best: Option<(Vec<Tag>, f64)> = None;
    loop {
        let tags: Vec<Tag> = idx.iter().enumerate().map(|(i, &j)| cols[i][j].0).collect();
        if tags.windows(2).all(|w| !naive_banned(rules, w[0], w[1])) {
            let mut s = scores.start(tags[0]);
            for (i, &j) in idx.iter().enumerate() {
                s += cols[i][j].1;
            }
            for w in tags.windows(2) {
                s += scores.transition(w[0], w[1]);
            }
            s += scores.end(*tags.last().unwrap());
            if best.as_ref().is_none_or(|(_, b)| s > *b) {
                best = Some((tags, s));
            }
        }
        // odometer increment, last position fastest
        let mut k = cols.len();
        loop {
            if k == 0 {
                return best;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < cols[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

pub const POOL: [&str; 12] = [
    "ARTDFS", "ARTDMS", "NCFS", "NCMS", "PPO3FS", "PPO3XS", "VLPI3S", "VLINF", "ADJGFS", "PREP", "CSUBI", "PAL",
];

/// Random lattice over [`POOL`] with weights either continuous or small
/// integers (the latter produce exact ties).
pub fn random_instance<R: Rng>(rng: &mut R, integer: bool) -> (TableScores, Lattice) {
    let pool: Vec<Tag> = POOL.iter().map(|c| tag(c)).collect();
    let w = |rng: &mut R| {
        if integer {
            -(rng.gen_range(0..4) as f64)
        } else {
            -rng.gen_range(0.0..8.0)
        }
    };
    let mut scores = TableScores::default();
    for &a in &pool {
        scores.start.insert(a, w(rng));
        scores.end.insert(a, w(rng));
        for &b in &pool {
            scores.trans.insert((a, b), w(rng));
        }
    }
    let len = rng.gen_range(1..=6);
    let columns = (0..len)
        .map(|_| {
            let k = rng.gen_range(1..=4);
            let mut tags: Vec<Tag> = pool.choose_multiple(rng, k).copied().collect();
            tags.sort();
            tags.into_iter().map(|t| (t, w(rng))).collect()
        })
        .collect();
    (scores, Lattice { columns })
}

pub fn random_pattern<R: Rng>(rng: &mut R) -> String {
    let code = *POOL.choose(rng).unwrap();
    match rng.gen_range(0..4) {
        0 => code.to_string(),
        1 => format!("{}*", &code[..rng.gen_range(0..=code.len().min(3))]),
        2 => {
            let mut c: Vec<char> = code.chars().collect();
            let i = rng.gen_range(0..c.len());
            c[i] = '?';
            c.into_iter().collect()
        }
        _ => "*".to_string(),
    }
}

pub fn random_rules<R: Rng>(rng: &mut R) -> Vec<NaiveRule> {
    (0..rng.gen_range(0..=5))
        .map(|_| NaiveRule {
            forbid: rng.gen_bool(0.7),
            left: random_pattern(rng),
            right: random_pattern(rng),
        })
        .collect()
}

/// Every way to read `word` as host + 1..=2 listed clitics with the host an
/// attested imperative, infinitive or gerund (accent-stripped or as written).
/// Returns (host, clitics) pairs.
pub fn clitic_readings(word: &str, lexicon: &Lexicon) -> Vec<(String, Vec<String>)> {
    let forms: Vec<&str> = CLITICS.iter().map(|(f, _)| *f).collect();
    let mut sequences: Vec<Vec<&str>> = forms.iter().map(|f| vec![*f]).collect();
    for a in &forms {
        for b in &forms {
            sequences.push(vec![a, b]);
        }
    }
    let host_ok = |s: &str| {
        lexicon.lookup(s).is_some_and(|c| {
            c.tags().any(|t| {
                t.code().starts_with('V')
                    && matches!(
                        t.bundle().mood.map(|m| m.as_str()),
                        Some("imperative" | "infinitive" | "gerund")
                    )
            })
        })
    };
    let mut out = Vec::new();
    for seq in sequences {
        let suffix: String = seq.concat();
        let Some(stem) = word.strip_suffix(suffix.as_str()) else {
            continue;
        };
        if stem.is_empty() {
            continue;
        }
        let bare = strip_written_accents(stem);
        let host = if host_ok(&bare) {
            bare
        } else if host_ok(stem) {
            stem.to_string()
        } else {
            continue;
        };
        assert!(seq.iter().all(|c| clitic_class(c).is_some()));
        out.push((host, seq.iter().map(|s| s.to_string()).collect()));
    }
    out
}
