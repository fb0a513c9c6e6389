//! The closed Spanish tag inventory and its feature decomposition.
//!
//! Every tag lives in a single immutable [`Registry`] built from an embedded
//! table. A [`Tag`] is an index into that registry, so it is `Copy`, ordered
//! by registry position, and always valid.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use thiserror::Error;

const EMBEDDED_TABLE: &str = include_str!("../data/tagset.tab");

/// Columns of the exported registry TSV.
pub const TSV_COLUMNS: [&str; 20] = [
    "TAG",
    "CATEGORY",
    "SUBCATEGORY",
    "GENDER",
    "NUMBER",
    "PERSON",
    "DEGREE",
    "VERBCLASS",
    "TENSE",
    "MOOD",
    "DEIXIS",
    "DIRECTIONALITY",
    "POLARITY",
    "PRONFN",
    "ANIMACY",
    "CASE",
    "POLITENESS",
    "EXISTENTIAL",
    "DESCRIPTION",
    "EXAMPLES",
];

// Embedded table = exported columns + POSSPOS + NOTES.
const TABLE_COLUMNS: usize = 22;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TagsetError {
    #[error("unknown tag `{0}`")]
    UnknownTag(String),
    #[error("no registry tag has the feature bundle `{0}`")]
    NoSuchTag(String),
    #[error("bad feature `{0}`")]
    BadFeature(String),
    #[error("corrupt tag table at line {line}: {message}")]
    Corrupt { line: usize, message: String },
}

macro_rules! label_enum {
    ($(#[$meta:meta])* $name:ident { $($variant:ident => $label:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => $label),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = TagsetError;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($label => Ok($name::$variant),)+
                    _ => Err(TagsetError::BadFeature(format!("{}={}", stringify!($name), s))),
                }
            }
        }
    };
}

label_enum!(Category {
    Punctuation => "punctuation",
    Adjective => "adjective",
    Adverb => "adverb",
    AlphabetLetter => "alphabet-letter",
    Article => "article",
    Cardinal => "cardinal",
    Conjunction => "conjunction",
    Code => "code",
    Demonstrative => "demonstrative",
    Formula => "formula",
    Interjection => "interjection",
    Interrogative => "interrogative",
    Negation => "negation",
    Noun => "noun",
    Ordinal => "ordinal",
    Portmanteau => "portmanteau",
    ForeignWord => "foreign-word",
    Unclassified => "unclassified",
    Pronoun => "pronoun",
    Preposition => "preposition",
    Quantifier => "quantifier",
    Relative => "relative",
    SeParticle => "se-particle",
    TitleNoun => "title-noun",
    UnitOfMeasure => "unit-of-measure",
    Verb => "verb",
});

label_enum!(
    /// Subclass labels. One flat namespace shared by all categories; which
    /// labels occur with which category is fixed by the registry.
    Subcategory {
        QuestionInverted => "question-inverted",
        ExclamationInverted => "exclamation-inverted",
        Exclamation => "exclamation",
        Quotes => "quotes",
        LeftBracket => "left-bracket",
        RightBracket => "right-bracket",
        Comma => "comma",
        Dash => "dash",
        FullStop => "full-stop",
        Ellipsis => "ellipsis",
        Colon => "colon",
        Semicolon => "semicolon",
        Question => "question",
        General => "general",
        Degree => "degree",
        Interrogative => "interrogative",
        Locative => "locative",
        LocativeInterrogative => "locative-interrogative",
        LocativeRelative => "locative-relative",
        ModalRelative => "modal-relative",
        Temporal => "temporal",
        TemporalInterrogative => "temporal-interrogative",
        TemporalRelative => "temporal-relative",
        Definite => "definite",
        IndefiniteCardinal => "indefinite-cardinal",
        IndefiniteQuantifier => "indefinite-quantifier",
        Hyphenated => "hyphenated",
        Coordinating => "coordinating",
        Adversative => "adversative",
        NegativeCoordinating => "negative-coordinating",
        Que => "que",
        SubordinatingFinite => "subordinating-finite",
        SubordinatingInfinite => "subordinating-infinite",
        SubordinatingUnderspecified => "subordinating-underspecified",
        Common => "common",
        Measure => "measure",
        Numeral => "numeral",
        Organization => "organization",
        Anthroponym => "anthroponym",
        Toponym => "toponym",
        ToponymOrOrganization => "toponym-or-organization",
        AEl => "a+el",
        DeEl => "de+el",
        PersonalClitic => "personal-clitic",
        Personal => "personal",
        Possessive => "possessive",
        Distributive => "distributive",
        Multiplicative => "multiplicative",
    }
);

label_enum!(Gender {
    Masculine => "masculine",
    Feminine => "feminine",
    Neuter => "neuter",
    MasculineOrNeuter => "masculine-or-neuter",
    Underspecified => "underspecified",
});

label_enum!(Number {
    Singular => "singular",
    Plural => "plural",
    Underspecified => "underspecified",
});

label_enum!(Person {
    First => "first",
    Second => "second",
    Third => "third",
    Underspecified => "underspecified",
});

label_enum!(Degree {
    Positive => "positive",
    Comparative => "comparative",
    Superlative => "superlative",
    Underspecified => "underspecified",
});

label_enum!(VerbClass {
    Estar => "estar",
    Haber => "haber",
    Ser => "ser",
    Lexical => "lexical",
    Modal => "modal",
});

label_enum!(Tense {
    Present => "present",
    Imperfect => "imperfect",
    Future => "future",
    Conditional => "conditional",
    Preterite => "preterite",
});

label_enum!(Mood {
    Indicative => "indicative",
    Subjunctive => "subjunctive",
    Imperative => "imperative",
    Gerund => "gerund",
    Infinitive => "infinitive",
    PastParticiple => "past-participle",
    PresentParticiple => "present-participle",
});

label_enum!(Deixis {
    Proximal => "proximal",
    Distal => "distal",
    Remote => "remote",
    Underspecified => "underspecified",
});

label_enum!(Directionality {
    Static => "static",
    Dynamic => "dynamic",
    Underspecified => "underspecified",
});

label_enum!(Polarity {
    Negative => "negative",
    Neutral => "neutral",
});

label_enum!(PronominalFunction {
    Pronominal => "pronominal",
    CapableOfPronominal => "capable-of-pronominal",
    NonPronominal => "non-pronominal",
    Underspecified => "underspecified",
});

label_enum!(Animacy {
    Animate => "animate",
    Inanimate => "inanimate",
    Underspecified => "underspecified",
});

label_enum!(CaseRole {
    Nominative => "nominative",
    Oblique => "oblique",
    NominativeOrOblique => "nominative-or-oblique",
    DirectObject => "direct-object",
    DirectOrIndirectObject => "direct-or-indirect-object",
});

label_enum!(Politeness {
    Polite => "polite",
    Neutral => "neutral",
});

label_enum!(PossessivePosition {
    Prenominal => "prenominal",
    FullForm => "full-form",
});

/// Attribute–value decomposition of a tag. `None` means the attribute does
/// not apply (the "none" value).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FeatureBundle {
    pub category: Category,
    pub subcategory: Option<Subcategory>,
    pub gender: Option<Gender>,
    pub number: Option<Number>,
    pub person: Option<Person>,
    pub degree: Option<Degree>,
    pub verb_class: Option<VerbClass>,
    pub tense: Option<Tense>,
    pub mood: Option<Mood>,
    pub deixis: Option<Deixis>,
    pub directionality: Option<Directionality>,
    pub polarity: Option<Polarity>,
    pub pronominal_function: Option<PronominalFunction>,
    pub animacy: Option<Animacy>,
    pub case_role: Option<CaseRole>,
    pub politeness: Option<Politeness>,
    pub existential: bool,
    pub possessive_position: Option<PossessivePosition>,
}

/// Attribute names other than `category`, in canonical (alphabetical) order.
pub const ATTRIBUTES: [&str; 17] = [
    "animacy",
    "case-role",
    "degree",
    "deixis",
    "directionality",
    "existential",
    "gender",
    "mood",
    "number",
    "person",
    "politeness",
    "polarity",
    "possessive-position",
    "pronominal-function",
    "subcategory",
    "tense",
    "verb-class",
];

fn label<T: Copy>(value: Option<T>, f: fn(T) -> &'static str) -> Option<&'static str> {
    value.map(f)
}

impl FeatureBundle {
    pub fn new(category: Category) -> Self {
        FeatureBundle {
            category,
            subcategory: None,
            gender: None,
            number: None,
            person: None,
            degree: None,
            verb_class: None,
            tense: None,
            mood: None,
            deixis: None,
            directionality: None,
            polarity: None,
            pronominal_function: None,
            animacy: None,
            case_role: None,
            politeness: None,
            existential: false,
            possessive_position: None,
        }
    }

    /// Value label of a named attribute, `None` when the attribute is absent.
    pub fn get(&self, attribute: &str) -> Option<&'static str> {
        match attribute {
            "category" => Some(self.category.as_str()),
            "subcategory" => label(self.subcategory, Subcategory::as_str),
            "gender" => label(self.gender, Gender::as_str),
            "number" => label(self.number, Number::as_str),
            "person" => label(self.person, Person::as_str),
            "degree" => label(self.degree, Degree::as_str),
            "verb-class" => label(self.verb_class, VerbClass::as_str),
            "tense" => label(self.tense, Tense::as_str),
            "mood" => label(self.mood, Mood::as_str),
            "deixis" => label(self.deixis, Deixis::as_str),
            "directionality" => label(self.directionality, Directionality::as_str),
            "polarity" => label(self.polarity, Polarity::as_str),
            "pronominal-function" => label(self.pronominal_function, PronominalFunction::as_str),
            "animacy" => label(self.animacy, Animacy::as_str),
            "case-role" => label(self.case_role, CaseRole::as_str),
            "politeness" => label(self.politeness, Politeness::as_str),
            "existential" => self.existential.then_some("true"),
            "possessive-position" => label(self.possessive_position, PossessivePosition::as_str),
            _ => None,
        }
    }

    /// Sets a named attribute from its label. `"none"` or `"-"` clears it.
    pub fn set(&mut self, attribute: &str, value: &str) -> Result<(), TagsetError> {
        fn opt<T: FromStr<Err = TagsetError>>(v: &str) -> Result<Option<T>, TagsetError> {
            if v == "-" || v == "none" {
                Ok(None)
            } else {
                v.parse().map(Some)
            }
        }
        match attribute {
            "category" => self.category = value.parse()?,
            "subcategory" => self.subcategory = opt(value)?,
            "gender" => self.gender = opt(value)?,
            "number" => self.number = opt(value)?,
            "person" => self.person = opt(value)?,
            "degree" => self.degree = opt(value)?,
            "verb-class" => self.verb_class = opt(value)?,
            "tense" => self.tense = opt(value)?,
            "mood" => self.mood = opt(value)?,
            "deixis" => self.deixis = opt(value)?,
            "directionality" => self.directionality = opt(value)?,
            "polarity" => self.polarity = opt(value)?,
            "pronominal-function" => self.pronominal_function = opt(value)?,
            "animacy" => self.animacy = opt(value)?,
            "case-role" => self.case_role = opt(value)?,
            "politeness" => self.politeness = opt(value)?,
            "possessive-position" => self.possessive_position = opt(value)?,
            "existential" => {
                self.existential = match value {
                    "true" => true,
                    "false" | "-" | "none" => false,
                    other => return Err(TagsetError::BadFeature(format!("existential={other}"))),
                }
            }
            other => return Err(TagsetError::BadFeature(other.to_string())),
        }
        Ok(())
    }

    /// Canonical `attr=value|...` text: category first, then the remaining
    /// present attributes in alphabetical order.
    pub fn to_feature_string(&self) -> String {
        let mut out = format!("category={}", self.category);
        for attr in ATTRIBUTES {
            if let Some(value) = self.get(attr) {
                out.push('|');
                out.push_str(attr);
                out.push('=');
                out.push_str(value);
            }
        }
        out
    }

    /// Inverse of [`FeatureBundle::to_feature_string`].
    pub fn parse_feature_string(text: &str) -> Result<Self, TagsetError> {
        let mut category = None;
        let mut rest = Vec::new();
        for field in text.split('|').filter(|f| !f.is_empty()) {
            let (attr, value) = field
                .split_once('=')
                .ok_or_else(|| TagsetError::BadFeature(field.to_string()))?;
            if attr == "category" {
                category = Some(value.parse::<Category>()?);
            } else {
                rest.push((attr, value));
            }
        }
        let category = category.ok_or_else(|| TagsetError::BadFeature("missing category".into()))?;
        let mut bundle = FeatureBundle::new(category);
        for (attr, value) in rest {
            bundle.set(attr, value)?;
        }
        Ok(bundle)
    }
}

impl fmt::Display for FeatureBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_feature_string())
    }
}

/// A registry tag. Ordering is registry order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tag(u16);

impl Tag {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn from_index(index: usize) -> Option<Tag> {
        (index < registry().len()).then_some(Tag(index as u16))
    }

    pub fn code(self) -> &'static str {
        registry().entries[self.index()].code
    }

    pub fn bundle(self) -> &'static FeatureBundle {
        &registry().entries[self.index()].bundle
    }

    pub fn entry(self) -> &'static Entry {
        &registry().entries[self.index()]
    }
}

impl fmt::Debug for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tag({})", self.code())
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Tag {
    type Err = TagsetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_tag(s)
    }
}

#[derive(Debug, Clone)]
pub struct Entry {
    pub tag: Tag,
    pub code: &'static str,
    pub bundle: FeatureBundle,
    pub description: &'static str,
    pub examples: Vec<&'static str>,
    pub notes: Option<&'static str>,
}

#[derive(Debug)]
pub struct Registry {
    entries: Vec<Entry>,
    by_code: HashMap<&'static str, Tag>,
    by_bundle: HashMap<FeatureBundle, Tag>,
}

impl Registry {
    fn parse(table: &'static str) -> Result<Registry, TagsetError> {
        let mut entries: Vec<Entry> = Vec::new();
        let mut by_code = HashMap::new();
        let mut by_bundle = HashMap::new();
        let mut lines = table.lines().enumerate();
        match lines.next() {
            Some((_, header)) if header.split('\t').count() == TABLE_COLUMNS => {}
            _ => {
                return Err(TagsetError::Corrupt {
                    line: 1,
                    message: "missing or malformed header".into(),
                })
            }
        }
        for (idx, line) in lines {
            let lineno = idx + 1;
            let corrupt = |message: String| TagsetError::Corrupt { line: lineno, message };
            let cols: Vec<&'static str> = line.split('\t').collect();
            if cols.len() != TABLE_COLUMNS {
                return Err(corrupt(format!("expected {TABLE_COLUMNS} columns, got {}", cols.len())));
            }
            let code = cols[0];
            let mut bundle = FeatureBundle::new(cols[1].parse().map_err(|e: TagsetError| corrupt(e.to_string()))?);
            // Columns 2..=17 follow TSV_COLUMNS; column 20 holds the possessive position.
            const FEATURE_COLUMNS: [(usize, &str); 17] = [
                (2, "subcategory"),
                (3, "gender"),
                (4, "number"),
                (5, "person"),
                (6, "degree"),
                (7, "verb-class"),
                (8, "tense"),
                (9, "mood"),
                (10, "deixis"),
                (11, "directionality"),
                (12, "polarity"),
                (13, "pronominal-function"),
                (14, "animacy"),
                (15, "case-role"),
                (16, "politeness"),
                (17, "existential"),
                (20, "possessive-position"),
            ];
            for (col, attr) in FEATURE_COLUMNS {
                bundle.set(attr, cols[col]).map_err(|e| corrupt(e.to_string()))?;
            }
            let tag = Tag(entries.len() as u16);
            if by_code.insert(code, tag).is_some() {
                return Err(corrupt(format!("duplicate code {code}")));
            }
            if let Some(other) = by_bundle.insert(bundle.clone(), tag) {
                return Err(corrupt(format!(
                    "{code} shares its feature bundle with {}",
                    entries[other.index()].code
                )));
            }
            let examples = match cols[19] {
                "-" => Vec::new(),
                list => list.split(' ').collect(),
            };
            entries.push(Entry {
                tag,
                code,
                bundle,
                description: cols[18],
                examples,
                notes: (cols[21] != "-").then_some(cols[21]),
            });
        }
        Ok(Registry { entries, by_code, by_bundle })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn tags(&self) -> impl Iterator<Item = Tag> + '_ {
        self.entries.iter().map(|e| e.tag)
    }

    pub fn get(&self, code: &str) -> Option<Tag> {
        self.by_code.get(code).copied()
    }

    pub fn compose(&self, bundle: &FeatureBundle) -> Result<Tag, TagsetError> {
        self.by_bundle
            .get(bundle)
            .copied()
            .ok_or_else(|| TagsetError::NoSuchTag(bundle.to_feature_string()))
    }

    pub fn list_by<P: Fn(&FeatureBundle) -> bool>(&self, predicate: P) -> Vec<Tag> {
        self.entries
            .iter()
            .filter(|e| predicate(&e.bundle))
            .map(|e| e.tag)
            .collect()
    }

    /// The registry as TSV with a header row, one line per tag, LF endings.
    pub fn to_tsv(&self) -> String {
        self.tsv_for(self.tags())
    }

    pub fn tsv_for<I: IntoIterator<Item = Tag>>(&self, tags: I) -> String {
        let mut out = TSV_COLUMNS.join("\t");
        out.push('\n');
        for tag in tags {
            out.push_str(&tsv_row(&self.entries[tag.index()]));
            out.push('\n');
        }
        out
    }
}

fn tsv_row(entry: &Entry) -> String {
    let b = &entry.bundle;
    let mut cols: Vec<&str> = vec![entry.code];
    for attr in [
        "category",
        "subcategory",
        "gender",
        "number",
        "person",
        "degree",
        "verb-class",
        "tense",
        "mood",
        "deixis",
        "directionality",
        "polarity",
        "pronominal-function",
        "animacy",
        "case-role",
        "politeness",
        "existential",
    ] {
        cols.push(b.get(attr).unwrap_or("-"));
    }
    cols.push(entry.description);
    let examples = entry.examples.join(" ");
    let mut row = cols.join("\t");
    row.push('\t');
    row.push_str(if examples.is_empty() { "-" } else { &examples });
    row
}

/// The process-wide registry. Corrupt embedded data is a fatal error.
pub fn registry() -> &'static Registry {
    static REGISTRY: OnceLock<Registry> = OnceLock::new();
    REGISTRY.get_or_init(|| Registry::parse(EMBEDDED_TABLE).expect("embedded tag table is corrupt"))
}

pub fn load_registry() -> &'static Registry {
    registry()
}

pub fn parse_tag(code: &str) -> Result<Tag, TagsetError> {
    registry()
        .get(code)
        .ok_or_else(|| TagsetError::UnknownTag(code.to_string()))
}

pub fn decompose(tag: Tag) -> &'static FeatureBundle {
    tag.bundle()
}

pub fn compose(bundle: &FeatureBundle) -> Result<Tag, TagsetError> {
    registry().compose(bundle)
}

pub fn format_features(tag: Tag) -> String {
    tag.bundle().to_feature_string()
}

pub fn list_by<P: Fn(&FeatureBundle) -> bool>(predicate: P) -> Vec<Tag> {
    registry().list_by(predicate)
}

/// A conjunction of `attribute=value` tests, written `a=v,b=w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureFilter {
    tests: Vec<(&'static str, String)>,
}

impl FeatureFilter {
    pub fn parse(text: &str) -> Result<Self, TagsetError> {
        let mut tests = Vec::new();
        for field in text.split([',', '|']).map(str::trim).filter(|f| !f.is_empty()) {
            let (attr, value) = field
                .split_once('=')
                .ok_or_else(|| TagsetError::BadFeature(field.to_string()))?;
            let attr = std::iter::once("category")
                .chain(ATTRIBUTES)
                .find(|a| *a == attr.trim())
                .ok_or_else(|| TagsetError::BadFeature(attr.to_string()))?;
            let value = value.trim();
            FeatureBundle::new(Category::Unclassified).set(attr, value)?;
            tests.push((attr, value.to_string()));
        }
        Ok(FeatureFilter { tests })
    }

    pub fn matches(&self, bundle: &FeatureBundle) -> bool {
        self.tests.iter().all(|(attr, value)| match bundle.get(attr) {
            Some(v) => v == value,
            None => value == "none" || value == "-",
        })
    }
}
