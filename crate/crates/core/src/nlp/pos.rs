use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

macro_rules! tags {
    ($($variant:ident => $name:literal),* $(,)?) => {
        /// Penn Treebank part-of-speech tags plus punctuation tags.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum PosTag {
            $($variant),*
        }

        impl PosTag {
            pub const ALL: &'static [PosTag] = &[$(PosTag::$variant),*];

            pub fn as_str(self) -> &'static str {
                match self {
                    $(PosTag::$variant => $name),*
                }
            }
        }
    };
}

tags! {
    Cc => "CC", Cd => "CD", Dt => "DT", Ex => "EX", Fw => "FW", In => "IN",
    Jj => "JJ", Jjr => "JJR", Jjs => "JJS", Ls => "LS", Md => "MD", Nn => "NN",
    Nns => "NNS", Nnp => "NNP", Nnps => "NNPS", Pdt => "PDT", Pos => "POS",
    Prp => "PRP", PrpS => "PRP$", Rb => "RB", Rbr => "RBR", Rbs => "RBS",
    Rp => "RP", Sym => "SYM", To => "TO", Uh => "UH", Vb => "VB", Vbd => "VBD",
    Vbg => "VBG", Vbn => "VBN", Vbp => "VBP", Vbz => "VBZ", Wdt => "WDT",
    Wp => "WP", WpS => "WP$", Wrb => "WRB",
    // punctuation
    Period => ".", Comma => ",", Colon => ":", LParen => "(", RParen => ")",
    OpenQuote => "``", CloseQuote => "''", Hash => "#", Dollar => "$",
}

impl PosTag {
    /// The 36 word tags, in alphabetical order.
    pub fn word_tags() -> &'static [PosTag] {
        &PosTag::ALL[..36]
    }

    pub fn is_punctuation(self) -> bool {
        !PosTag::word_tags().contains(&self)
    }

    pub fn is_noun(self) -> bool {
        matches!(self, PosTag::Nn | PosTag::Nns | PosTag::Nnp | PosTag::Nnps)
    }

    /// Verb tags that take part in verb+noun mining (VBN excluded).
    pub fn is_finite_or_base_verb(self) -> bool {
        matches!(self, PosTag::Vb | PosTag::Vbz | PosTag::Vbp | PosTag::Vbd | PosTag::Vbg)
    }

    pub fn is_verb(self) -> bool {
        self.is_finite_or_base_verb() || self == PosTag::Vbn
    }
}

impl fmt::Display for PosTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PosTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PosTag::ALL
            .iter()
            .copied()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| format!("unknown POS tag `{s}`"))
    }
}

impl Serialize for PosTag {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for PosTag {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

const LEXICON_TSV: &str = include_str!("../../resources/lexicon.tsv");

/// Word to candidate tags, majority tag first.
pub struct Lexicon {
    entries: HashMap<String, Vec<PosTag>>,
}

impl Lexicon {
    pub fn parse(text: &str) -> Result<Lexicon, String> {
        let mut entries: HashMap<String, Vec<PosTag>> = HashMap::new();
        for (n, line) in text.lines().enumerate() {
            if line.starts_with('#') || line.trim().is_empty() {
                continue;
            }
            let (word, tag) = line
                .split_once('\t')
                .ok_or_else(|| format!("line {}: expected word<TAB>TAG", n + 1))?;
            let tag: PosTag = tag.trim().parse().map_err(|e| format!("line {}: {e}", n + 1))?;
            let tags = entries.entry(word.to_string()).or_default();
            if !tags.contains(&tag) {
                tags.push(tag);
            }
        }
        Ok(Lexicon { entries })
    }

    /// The lexicon bundled with the crate.
    pub fn embedded() -> &'static Lexicon {
        static LEXICON: OnceLock<Lexicon> = OnceLock::new();
        LEXICON.get_or_init(|| Lexicon::parse(LEXICON_TSV).expect("embedded lexicon is valid"))
    }

    pub fn tags(&self, lower: &str) -> Option<&[PosTag]> {
        self.entries.get(lower).map(Vec::as_slice)
    }

    pub fn contains(&self, lower: &str) -> bool {
        self.entries.contains_key(lower)
    }

    pub fn has_tag(&self, lower: &str, tag: PosTag) -> bool {
        self.tags(lower).is_some_and(|t| t.contains(&tag))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn punctuation_tag(token: &str) -> Option<PosTag> {
    Some(match token {
        "." | "!" | "?" => PosTag::Period,
        "," => PosTag::Comma,
        ":" | ";" | "..." | "-" | "--" => PosTag::Colon,
        "(" | "[" | "{" => PosTag::LParen,
        ")" | "]" | "}" => PosTag::RParen,
        "\"" | "``" | "'" => PosTag::OpenQuote,
        "''" => PosTag::CloseQuote,
        "#" => PosTag::Hash,
        "$" => PosTag::Dollar,
        _ => return None,
    })
}

fn is_number(token: &str) -> bool {
    let t = token.trim_start_matches(['-', '+']);
    !t.is_empty()
        && t.chars().next().is_some_and(|c| c.is_ascii_digit())
        && t.chars()
            .all(|c| c.is_ascii_digit() || matches!(c, '.' | ',' | 'x' | 'X' | '%') || c.is_ascii_hexdigit())
}

/// Tokens that look like program text rather than English words.
pub(crate) fn is_code_like(token: &str) -> bool {
    let chars: Vec<char> = token.chars().collect();
    if chars
        .iter()
        .any(|c| matches!(c, '(' | ')' | '=' | '{' | '}' | '[' | ']' | ';' | '<' | '>'))
    {
        return true;
    }
    chars
        .windows(3)
        .any(|w| matches!(w[1], '.' | '_') && w[0].is_alphanumeric() && w[2].is_alphanumeric())
        || chars.windows(2).any(|w| w[0].is_lowercase() && w[1].is_uppercase())
}

/// Tag guessed from the shape of a word the lexicon does not know.
fn guess(token: &str, lower: &str, lexicon: &Lexicon, sentence_start: bool) -> PosTag {
    let alpha = token.chars().filter(|c| c.is_alphabetic()).count();
    if alpha > 1 && token.chars().all(|c| !c.is_lowercase()) {
        return PosTag::Nn;
    }
    if !sentence_start && token.chars().next().is_some_and(char::is_uppercase) {
        return PosTag::Nnp;
    }
    if lower.ends_with("ly") && lower.len() > 4 {
        return PosTag::Rb;
    }
    if lower.ends_with("ing") && lower.len() > 5 {
        return PosTag::Vbg;
    }
    if lower.ends_with("ed") && lower.len() > 4 {
        return PosTag::Vbd;
    }
    if let Some(stem) = lower.strip_suffix('s').filter(|s| s.len() > 2 && !s.ends_with('s')) {
        let stem_es = lower.strip_suffix("es").unwrap_or(stem);
        let base = [stem, stem_es].into_iter().find(|s| lexicon.contains(s));
        return match base {
            Some(b) if lexicon.tags(b).is_some_and(|t| t[0] == PosTag::Vb) => PosTag::Vbz,
            _ => PosTag::Nns,
        };
    }
    for suffix in ["able", "ible", "ful", "less", "ous", "ive", "ic", "al"] {
        if lower.ends_with(suffix) && lower.len() > suffix.len() + 2 {
            return PosTag::Jj;
        }
    }
    PosTag::Nn
}

fn is_sentence_break(tag: PosTag) -> bool {
    matches!(tag, PosTag::Period | PosTag::Colon)
}

/// Assigns one tag per token: lexicon majority tag, shape guesses for unknown
/// words, then a few left-to-right context corrections.
pub fn tag_tokens(tokens: &[String], lexicon: &Lexicon) -> Vec<PosTag> {
    let mut tags: Vec<PosTag> = Vec::with_capacity(tokens.len());
    let mut sentence_start = true;
    for token in tokens {
        let lower = token.to_lowercase();
        let candidates = lexicon.tags(&lower).unwrap_or(&[]);
        let prev = tags.last().copied();
        let marker = token.len() > 1 && token.chars().all(|c| c.is_ascii_uppercase());
        let mut tag = if let Some(p) = punctuation_tag(token) {
            p
        } else if is_number(token) {
            PosTag::Cd
        } else if is_code_like(token) {
            PosTag::Nn
        } else if marker {
            // marker words such as TODO, FIXME, HACK
            PosTag::Nn
        } else if let Some(first) = candidates.first() {
            *first
        } else {
            guess(token, &lower, lexicon, sentence_start)
        };

        let can_be = |t: PosTag| candidates.contains(&t);
        if marker {
            // keep NN
        } else if sentence_start && !tag.is_punctuation() {
            if can_be(PosTag::Vb) {
                // imperative opening
                tag = PosTag::Vb;
            } else if tag == PosTag::Vbd {
                // a past form with no subject before it is a participle
                tag = PosTag::Vbn;
            } else if tag == PosTag::Nns {
                if let Some(stem) = lower.strip_suffix('s') {
                    let base = lower.strip_suffix("es").filter(|b| lexicon.has_tag(b, PosTag::Vb));
                    if lexicon.has_tag(stem, PosTag::Vb) || base.is_some() {
                        tag = PosTag::Vbz;
                    }
                }
            }
        } else if let Some(p) = prev {
            match p {
                PosTag::To | PosTag::Md if can_be(PosTag::Vb) => tag = PosTag::Vb,
                // a determiner is never followed by a bare verb
                PosTag::Dt | PosTag::PrpS if matches!(tag, PosTag::Vb | PosTag::Vbp) => tag = PosTag::Nn,
                PosTag::Jj | PosTag::In if matches!(tag, PosTag::Vb | PosTag::Vbp) => {
                    if lexicon.has_tag(&lower, PosTag::Nn) || candidates.is_empty() {
                        tag = PosTag::Nn;
                    }
                }
                PosTag::Prp | PosTag::Nns if tag == PosTag::Vb => tag = PosTag::Vbp,
                _ => {}
            }
            if tag == PosTag::Vbd && tags.iter().rev().take(2).any(|t| t.is_verb()) {
                let aux = tokens[..tags.len()]
                    .iter()
                    .rev()
                    .take(2)
                    .any(|w| AUXILIARIES.contains(&w.to_lowercase().as_str()));
                if aux {
                    tag = PosTag::Vbn;
                }
            }
        }
        sentence_start = is_sentence_break(tag);
        tags.push(tag);
    }
    tags
}

const AUXILIARIES: &[&str] = &[
    "be", "is", "are", "was", "were", "been", "being", "has", "have", "had", "get", "gets", "got",
];

#[cfg(test)]
mod tests {
    use super::*;

    fn tag(words: &[&str]) -> Vec<&'static str> {
        let tokens: Vec<String> = words.iter().map(|w| w.to_string()).collect();
        tag_tokens(&tokens, Lexicon::embedded())
            .into_iter()
            .map(PosTag::as_str)
            .collect()
    }

    #[test]
    fn thirty_six_word_tags() {
        assert_eq!(PosTag::word_tags().len(), 36);
        assert!(PosTag::word_tags().iter().all(|t| !t.is_punctuation()));
        assert!(PosTag::Period.is_punctuation());
        for t in PosTag::ALL {
            assert_eq!(t.as_str().parse::<PosTag>().unwrap(), *t);
        }
    }

    #[test]
    fn imperative_opening() {
        assert_eq!(tag(&["clear", "the", "buffer"]), ["VB", "DT", "NN"]);
    }

    #[test]
    fn lexicon_and_suffix() {
        assert_eq!(tag(&["error", "occurred"]), ["NN", "VBD"]);
        assert_eq!(tag(&["TODO"]), ["NN"]);
        assert_eq!(tag(&["the", "frobnicated", "value"]), ["DT", "VBD", "NN"]);
    }

    #[test]
    fn context_rules() {
        assert_eq!(tag(&["we", "need", "to", "check", "it"])[3], "VB");
        assert_eq!(tag(&["the", "check", "fails"])[1], "NN");
        assert_eq!(tag(&["returns", "the", "size"])[0], "VBZ");
        assert_eq!(tag(&["foo.bar()", "is", "slow"])[0], "NN");
        assert_eq!(tag(&["42"]), ["CD"]);
    }

    #[test]
    fn lexicon_is_loaded() {
        let lex = Lexicon::embedded();
        assert!(lex.len() > 5000);
        assert!(lex.has_tag("clear", PosTag::Vb));
        assert!(!lex.has_tag("not", PosTag::Vb));
        assert!(Lexicon::parse("word\tXX\n").is_err());
    }
}
