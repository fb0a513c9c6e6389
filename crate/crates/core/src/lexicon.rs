//! Wordform → ambiguity class lookup, the built-in closed-class seed, and
//! the suffix guesser for words the lexicon does not know.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::tagset::{registry, Category, Tag};

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("cannot read lexicon {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: unknown tag `{code}`")]
    UnknownTag { line: usize, code: String },
    #[error("empty wordform")]
    EmptyInput,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SignatureError {
    #[error("malformed tag list `{0}`")]
    Malformed(String),
    #[error("unknown tag `{0}`")]
    UnknownTag(String),
}

/// Non-empty set of admissible tags, ordered by registry position.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AmbiguityClass(BTreeSet<Tag>);

impl AmbiguityClass {
    pub fn new<I: IntoIterator<Item = Tag>>(tags: I) -> Option<Self> {
        let set: BTreeSet<Tag> = tags.into_iter().collect();
        (!set.is_empty()).then_some(AmbiguityClass(set))
    }

    pub fn singleton(tag: Tag) -> Self {
        AmbiguityClass(BTreeSet::from([tag]))
    }

    pub fn tags(&self) -> impl ExactSizeIterator<Item = Tag> + '_ {
        self.0.iter().copied()
    }

    pub fn contains(&self, tag: Tag) -> bool {
        self.0.contains(&tag)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn union_with(&mut self, other: &AmbiguityClass) {
        self.0.extend(other.0.iter().copied());
    }

    /// Comma-joined codes in registry order.
    pub fn signature(&self) -> String {
        self.tags().map(Tag::code).collect::<Vec<_>>().join(",")
    }

    /// Parses a comma-joined tag list. The comma tag itself shows up as a
    /// pair of empty fields, which is what [`AmbiguityClass::signature`]
    /// produces for it.
    pub fn parse_signature(text: &str) -> Result<Self, SignatureError> {
        let mut tags = BTreeSet::new();
        let mut pieces = text.split(',').map(str::trim);
        while let Some(piece) = pieces.next() {
            let code = if piece.is_empty() {
                match pieces.next() {
                    Some("") => ",",
                    _ => return Err(SignatureError::Malformed(text.to_string())),
                }
            } else {
                piece
            };
            let tag = registry()
                .get(code)
                .ok_or_else(|| SignatureError::UnknownTag(code.to_string()))?;
            tags.insert(tag);
        }
        AmbiguityClass::new(tags).ok_or_else(|| SignatureError::Malformed(text.to_string()))
    }
}

impl fmt::Display for AmbiguityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.signature())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexicon {
    entries: HashMap<String, AmbiguityClass>,
    source: String,
}

/// Categories whose registry example forms make up the built-in seed.
const SEED_CATEGORIES: [Category; 16] = [
    Category::Article,
    Category::Cardinal,
    Category::Ordinal,
    Category::Pronoun,
    Category::Demonstrative,
    Category::Quantifier,
    Category::Conjunction,
    Category::Relative,
    Category::Interrogative,
    Category::Adverb,
    Category::Portmanteau,
    Category::SeParticle,
    Category::TitleNoun,
    Category::UnitOfMeasure,
    Category::Preposition,
    Category::Negation,
];

/// Closed-class forms the tag list names without example forms.
const SEED_EXTRA: &[(&str, &str)] = &[
    ("a", "PREP"),
    ("ante", "PREP"),
    ("bajo", "PREP"),
    ("con", "PREP"),
    ("contra", "PREP"),
    ("de", "PREP"),
    ("desde", "PREP"),
    ("durante", "PREP"),
    ("en", "PREP"),
    ("entre", "PREP"),
    ("hacia", "PREP"),
    ("hasta", "PREP"),
    ("mediante", "PREP"),
    ("para", "PREP"),
    ("por", "PREP"),
    ("según", "PREP"),
    ("sobre", "PREP"),
    ("tras", "PREP"),
    ("no", "NEG"),
    ("hay", "VHPI3E"),
];

impl Lexicon {
    pub fn empty(source: impl Into<String>) -> Self {
        Lexicon {
            entries: HashMap::new(),
            source: source.into(),
        }
    }

    /// Every registry example form of the closed classes, plus prepositions,
    /// negation and existential `hay`.
    pub fn seed() -> Self {
        let mut lex = Lexicon::empty("seed");
        for entry in registry().entries() {
            if !SEED_CATEGORIES.contains(&entry.bundle.category) {
                continue;
            }
            for form in &entry.examples {
                lex.insert(form, AmbiguityClass::singleton(entry.tag));
            }
        }
        for (form, code) in SEED_EXTRA {
            let tag = registry().get(code).expect("seed tag exists");
            lex.insert(form, AmbiguityClass::singleton(tag));
        }
        lex
    }

    /// Parses lexicon text without the seed.
    pub fn parse(text: &str, source: impl Into<String>) -> Result<Self, LexiconError> {
        let mut lex = Lexicon::empty(source);
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            if raw.trim().is_empty() || raw.starts_with('#') {
                continue;
            }
            let (form, tags) = raw.split_once('\t').ok_or_else(|| LexiconError::Parse {
                line,
                message: "expected `wordform<TAB>TAG,...`".into(),
            })?;
            if form.is_empty() {
                return Err(LexiconError::Parse {
                    line,
                    message: "empty wordform".into(),
                });
            }
            if tags.trim().is_empty() || tags.contains('\t') {
                return Err(LexiconError::Parse {
                    line,
                    message: "expected one tab-separated tag list".into(),
                });
            }
            let class = AmbiguityClass::parse_signature(tags).map_err(|e| match e {
                SignatureError::UnknownTag(code) => LexiconError::UnknownTag { line, code },
                malformed => LexiconError::Parse {
                    line,
                    message: malformed.to_string(),
                },
            })?;
            lex.insert(form, class);
        }
        Ok(lex)
    }

    /// Seed plus the entries of `text`; duplicate forms are unioned.
    pub fn parse_with_seed(text: &str, source: impl Into<String>) -> Result<Self, LexiconError> {
        let user = Lexicon::parse(text, source)?;
        let mut lex = Lexicon::seed();
        lex.source = user.source.clone();
        lex.merge(&user);
        Ok(lex)
    }

    pub fn insert(&mut self, form: &str, class: AmbiguityClass) {
        match self.entries.get_mut(form) {
            Some(existing) => existing.union_with(&class),
            None => {
                self.entries.insert(form.to_string(), class);
            }
        }
    }

    pub fn merge(&mut self, other: &Lexicon) {
        for (form, class) in &other.entries {
            self.insert(form, class.clone());
        }
    }

    /// Exact match, then the lowercased form.
    pub fn lookup(&self, form: &str) -> Option<&AmbiguityClass> {
        self.entries.get(form).or_else(|| {
            let lower = form.to_lowercase();
            if lower != form {
                self.entries.get(&lower)
            } else {
                None
            }
        })
    }

    pub fn contains(&self, form: &str) -> bool {
        self.lookup(form).is_some()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// Entries sorted by wordform.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &AmbiguityClass)> {
        let sorted: BTreeMap<&str, &AmbiguityClass> =
            self.entries.iter().map(|(k, v)| (k.as_str(), v)).collect();
        sorted.into_iter()
    }

    /// Canonical file text: sorted by wordform, tags in registry order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (form, class) in self.iter() {
            out.push_str(form);
            out.push('\t');
            out.push_str(&class.signature());
            out.push('\n');
        }
        out
    }
}

/// Reads a lexicon file and merges it over the built-in seed.
pub fn load_lexicon(path: &Path) -> Result<Lexicon, LexiconError> {
    let text = std::fs::read_to_string(path).map_err(|source| LexiconError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Lexicon::parse_with_seed(&text, path.display().to_string())
}

pub fn lookup<'a>(lex: &'a Lexicon, form: &str) -> Option<&'a AmbiguityClass> {
    lex.lookup(form)
}

enum Guess {
    One(&'static str),
    Many(&'static [&'static str]),
}

// First matching suffix wins.
const SUFFIX_RULES: &[(&[&str], Guess)] = &[
    (&["mente"], Guess::One("ADVN")),
    (&["ísimos"], Guess::One("ADJSMP")),
    (&["ísimas"], Guess::One("ADJSFP")),
    (&["ísimo"], Guess::One("ADJSMS")),
    (&["ísima"], Guess::One("ADJSFS")),
    (&["ción", "sión"], Guess::One("NCFS")),
    (&["ciones", "siones"], Guess::One("NCFP")),
    (&["ar", "er", "ir"], Guess::One("VLINF")),
    (&["ando", "iendo"], Guess::One("VLGER")),
    (&["ados", "idos"], Guess::One("VLPXMP")),
    (&["adas", "idas"], Guess::One("VLPXFP")),
    (&["ado", "ido"], Guess::One("VLPXMS")),
    (&["ada", "ida"], Guess::One("VLPXFS")),
    (&["os"], Guess::Many(&["NCMP", "ADJGMP"])),
    (&["as"], Guess::Many(&["NCFP", "ADJGFP"])),
    (&["o"], Guess::Many(&["NCMS", "ADJGMS"])),
    (&["a"], Guess::Many(&["NCFS", "ADJGFS"])),
];

const FALLBACK: [&str; 4] = ["NCMS", "NCFS", "ADJGMS", "ADJGFS"];

fn class_of(codes: &[&str]) -> AmbiguityClass {
    AmbiguityClass::new(codes.iter().map(|c| registry().get(c).expect("guesser tag exists")))
        .expect("non-empty")
}

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'á' | 'é' | 'í' | 'ó' | 'ú' | 'ü')
}

/// Open-class candidates for a word absent from the lexicon.
pub fn guess_unknown(form: &str) -> Result<AmbiguityClass, LexiconError> {
    if form.is_empty() {
        return Err(LexiconError::EmptyInput);
    }
    let lower = form.to_lowercase();
    for (suffixes, guess) in SUFFIX_RULES {
        if suffixes.iter().any(|s| lower.ends_with(s)) {
            return Ok(match guess {
                Guess::One(code) => class_of(&[code]),
                Guess::Many(codes) => class_of(codes),
            });
        }
    }
    if let Some(stem) = lower.strip_suffix("es") {
        if stem.chars().last().is_some_and(|c| c.is_alphabetic() && !is_vowel(c)) {
            return Ok(class_of(&["NCMP", "NCFP"]));
        }
    }
    let mut codes = FALLBACK.to_vec();
    if ["ar", "er", "ir"].iter().any(|s| lower.ends_with(s)) {
        codes.push("VLINF");
    }
    Ok(class_of(&codes))
}

/// [`guess_unknown`] plus the proper-noun tags for capitalized words that
/// do not open a sentence.
pub fn guess_in_context(form: &str, sentence_initial: bool) -> Result<AmbiguityClass, LexiconError> {
    let mut class = guess_unknown(form)?;
    if !sentence_initial && form.chars().next().is_some_and(char::is_uppercase) {
        class.union_with(&class_of(&["NPAXX", "NPTOS"]));
    }
    Ok(class)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmbiguityGroup {
    pub class: AmbiguityClass,
    pub count: usize,
    /// Members in sorted order, at most [`REPORT_EXAMPLES`].
    pub examples: Vec<String>,
}

pub const REPORT_EXAMPLES: usize = 5;

/// Groups wordforms by identical tag set, largest groups first.
pub fn ambiguity_report(lex: &Lexicon) -> Vec<AmbiguityGroup> {
    let mut groups: BTreeMap<&AmbiguityClass, Vec<&str>> = BTreeMap::new();
    for (form, class) in lex.iter() {
        groups.entry(class).or_default().push(form);
    }
    let mut report: Vec<AmbiguityGroup> = groups
        .into_iter()
        .map(|(class, forms)| AmbiguityGroup {
            class: class.clone(),
            count: forms.len(),
            examples: forms.iter().take(REPORT_EXAMPLES).map(|s| s.to_string()).collect(),
        })
        .collect();
    report.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.class.cmp(&b.class)));
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tagset::parse_tag;

    fn class(codes: &[&str]) -> AmbiguityClass {
        AmbiguityClass::new(codes.iter().map(|c| parse_tag(c).unwrap())).unwrap()
    }

    #[test]
    fn parses_user_entries() {
        let lex = Lexicon::parse("# comment\nmesa\tNCFS\n\nvino\tNCMS,VLXI3S\nvino\tVLPI3S\n", "t").unwrap();
        assert_eq!(lex.lookup("mesa"), Some(&class(&["NCFS"])));
        assert_eq!(lex.lookup("vino"), Some(&class(&["NCMS", "VLPI3S", "VLXI3S"])));
        assert_eq!(lex.len(), 2);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        match Lexicon::parse("mesa\tNCFS\nx\tBADTAG\n", "t") {
            Err(LexiconError::UnknownTag { line: 2, code }) => assert_eq!(code, "BADTAG"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            Lexicon::parse("mesa NCFS\n", "t"),
            Err(LexiconError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            Lexicon::parse("ok\tNCFS\nmesa\t\n", "t"),
            Err(LexiconError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            Lexicon::parse("\tNCFS\n", "t"),
            Err(LexiconError::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn comma_tag_survives_signature_round_trip() {
        let c = class(&[",", "PNC"]);
        assert_eq!(AmbiguityClass::parse_signature(&c.signature()).unwrap(), c);
        let c = class(&[","]);
        assert_eq!(c.signature(), ",");
        assert_eq!(AmbiguityClass::parse_signature(",").unwrap(), c);
        assert!(AmbiguityClass::parse_signature("NCFS,").is_err());
    }

    #[test]
    fn seed_contains_closed_class_forms() {
        let seed = Lexicon::seed();
        assert_eq!(seed.lookup("al"), Some(&class(&["PAL", "CSUBI"])));
        assert_eq!(seed.lookup("del"), Some(&class(&["PDEL"])));
        assert_eq!(seed.lookup("Sr."), Some(&class(&["TRATM"])));
        assert_eq!(seed.lookup("sin"), Some(&class(&["PREPN"])));
        assert!(seed.lookup("la").unwrap().contains(parse_tag("ARTDFS").unwrap()));
        assert!(seed.lookup("mesa").is_none());
        // open classes are not seeded
        assert!(seed.lookup("Juan").is_none());
        assert!(seed.lookup("mayores").is_none());
    }

    #[test]
    fn lowercase_fallback() {
        let seed = Lexicon::seed();
        assert_eq!(seed.lookup("Al"), seed.lookup("al"));
        assert!(seed.lookup("AL").is_some());
        assert!(seed.lookup("zzgrk").is_none());
    }

    #[test]
    fn user_entries_union_with_seed() {
        let lex = Lexicon::parse_with_seed("la\tNCFS\n", "t").unwrap();
        let la = lex.lookup("la").unwrap();
        assert!(la.contains(parse_tag("NCFS").unwrap()));
        assert!(la.contains(parse_tag("ARTDFS").unwrap()));
        assert_eq!(lex.source(), "t");
    }

    #[test]
    fn guesser_rules() {
        assert_eq!(guess_unknown("salvajemente").unwrap(), class(&["ADVN"]));
        assert_eq!(guess_unknown("grandísimo").unwrap(), class(&["ADJSMS"]));
        assert_eq!(guess_unknown("altísimas").unwrap(), class(&["ADJSFP"]));
        assert_eq!(guess_unknown("canción").unwrap(), class(&["NCFS"]));
        assert_eq!(guess_unknown("canciones").unwrap(), class(&["NCFP"]));
        assert_eq!(guess_unknown("cantar").unwrap(), class(&["VLINF"]));
        assert_eq!(guess_unknown("cantando").unwrap(), class(&["VLGER"]));
        assert_eq!(guess_unknown("comidas").unwrap(), class(&["VLPXFP"]));
        assert_eq!(guess_unknown("gatos").unwrap(), class(&["NCMP", "ADJGMP"]));
        assert_eq!(guess_unknown("gata").unwrap(), class(&["NCFS", "ADJGFS"]));
        assert_eq!(guess_unknown("ordenadores").unwrap(), class(&["NCMP", "NCFP"]));
        // -es after a vowel falls through
        assert_eq!(guess_unknown("héroes").unwrap(), class(&FALLBACK));
        assert_eq!(guess_unknown("reloj").unwrap(), class(&FALLBACK));
        assert!(matches!(guess_unknown(""), Err(LexiconError::EmptyInput)));
    }

    #[test]
    fn guesser_is_case_insensitive_and_proper_noun_aware() {
        assert_eq!(guess_unknown("RÁPIDAMENTE").unwrap(), class(&["ADVN"]));
        let mid = guess_in_context("Gómez", false).unwrap();
        assert!(mid.contains(parse_tag("NPAXX").unwrap()));
        assert!(mid.contains(parse_tag("NPTOS").unwrap()));
        let initial = guess_in_context("Gómez", true).unwrap();
        assert!(!initial.contains(parse_tag("NPAXX").unwrap()));
    }

    #[test]
    fn report_groups_and_orders() {
        let lex = Lexicon::parse("mesa\tNCFS\nsilla\tNCFS\nlibro\tNCMS\n", "t").unwrap();
        let report = ambiguity_report(&lex);
        assert_eq!(report.len(), 2);
        assert_eq!(report[0].class, class(&["NCFS"]));
        assert_eq!(report[0].count, 2);
        assert_eq!(report[0].examples, vec!["mesa", "silla"]);
        let single = ambiguity_report(&Lexicon::parse("mesa\tNCFS\n", "t").unwrap());
        assert_eq!(single.len(), 1);
        assert_eq!(single[0].count, 1);
    }

    #[test]
    fn text_round_trip() {
        let lex = Lexicon::parse("vino\tVLXI3S,NCMS\nmesa\tNCFS\n", "t").unwrap();
        let text = lex.to_text();
        assert_eq!(text, "mesa\tNCFS\nvino\tNCMS,VLXI3S\n");
        assert_eq!(Lexicon::parse(&text, "t").unwrap(), lex);
    }
}
