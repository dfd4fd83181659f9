//! Tokenization, part-of-speech tagging and text features of comment text.

mod lemma;
mod pos;

use serde::{Deserialize, Serialize};

pub use lemma::lemmatize;
pub use pos::{tag_tokens, Lexicon, PosTag};

/// Share of non-ASCII letters above which text is treated as non-English.
pub const NON_ENGLISH_THRESHOLD: f64 = 0.3;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    pub lower: String,
    pub pos: PosTag,
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TaggedText {
    pub tokens: Vec<Token>,
    pub has_symbol: bool,
}

impl TaggedText {
    pub fn first(&self) -> Option<&Token> {
        self.tokens.first()
    }

    /// First token that is not punctuation.
    pub fn first_word(&self) -> Option<&Token> {
        self.tokens.iter().find(|t| !t.pos.is_punctuation())
    }
}

const TERMINAL: &[char] = &['.', ',', ';', ':', '!', '?'];
const OPENERS: &[char] = &['(', '"', '`'];
const CLOSERS: &[char] = &[')', '"', '`'];

/// Splits text into word tokens. Terminal punctuation becomes its own token;
/// tokens that look like code are kept whole.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    for chunk in text.split_whitespace() {
        let mut body = chunk;
        let mut tail = Vec::new();
        loop {
            let Some(last) = body.chars().last() else { break };
            let peel = if TERMINAL.contains(&last) {
                body.len() > last.len_utf8()
            } else {
                CLOSERS.contains(&last)
                    && body.len() > 1
                    && !pos::is_code_like(&body[..body.len() - 1])
                    && !body[..body.len() - 1].contains(['(', '['])
            };
            if !peel {
                break;
            }
            tail.push(last.to_string());
            body = &body[..body.len() - last.len_utf8()];
        }
        let mut head = Vec::new();
        while let Some(first) = body.chars().next() {
            if OPENERS.contains(&first) && body.len() > 1 && !pos::is_code_like(&body[1..]) {
                head.push(first.to_string());
                body = &body[1..];
            } else {
                break;
            }
        }
        out.extend(head);
        if !body.is_empty() {
            out.push(body.to_string());
        }
        out.extend(tail.into_iter().rev());
    }
    out
}

/// Tags tokens with the embedded lexicon.
pub fn pos_tag(tokens: &[String]) -> TaggedText {
    let tags = tag_tokens(tokens, Lexicon::embedded());
    let has_symbol = has_symbol(&tokens.join(" "));
    TaggedText {
        tokens: tokens
            .iter()
            .zip(tags)
            .enumerate()
            .map(|(index, (surface, pos))| Token {
                surface: surface.clone(),
                lower: surface.to_lowercase(),
                pos,
                index,
            })
            .collect(),
        has_symbol,
    }
}

/// Tokenizes and tags normalized comment text.
pub fn analyze(text: &str) -> TaggedText {
    let mut tagged = pos_tag(&tokenize(text));
    tagged.has_symbol = has_symbol(text);
    tagged
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

/// True if the text contains a program symbol, or a word written like an
/// identifier (camelCase, snake_case, dotted names).
pub fn has_symbol(text: &str) -> bool {
    const SYMBOLS: &[char] = &['(', ')', '{', '}', '[', ']', ';', '=', '<', '>', '+', '*', '/'];
    if text.contains(SYMBOLS) {
        return true;
    }
    text.split_whitespace().any(|word| {
        let chars: Vec<char> = word.chars().collect();
        chars.windows(2).any(|w| w[0].is_lowercase() && w[1].is_uppercase())
            || chars
                .windows(3)
                .any(|w| matches!(w[1], '_' | '.') && is_ident_char(w[0]) && is_ident_char(w[2]))
    })
}

/// True when the whole text reads like a program statement rather than prose,
/// as in commented-out code.
pub fn looks_like_code(text: &str) -> bool {
    let t = text.trim();
    if t.is_empty() {
        return false;
    }
    if t.ends_with([';', '{', '}']) {
        return true;
    }
    let mut words = t.split_whitespace();
    let first = words.next().unwrap_or_default();
    if first.contains(['(', ';', '=']) && first.chars().next().is_some_and(|c| is_ident_char(c) || c == '@') {
        return true;
    }
    matches!(words.next(), Some("=" | "+=" | "-=" | "==" | ":=" | "*=" | "|="))
}

/// True when more than 30% of the letters are outside ASCII.
pub fn is_non_english(text: &str) -> bool {
    let (mut letters, mut foreign) = (0usize, 0usize);
    for c in text.chars().filter(|c| c.is_alphabetic()) {
        letters += 1;
        if !c.is_ascii() {
            foreign += 1;
        }
    }
    letters > 0 && foreign as f64 / letters as f64 > NON_ENGLISH_THRESHOLD
}

pub fn lemma(token: &Token) -> String {
    lemmatize(&token.surface, token.pos, Lexicon::embedded())
}

/// Pairs each verb with the head noun of the nearest noun run after it,
/// stopping at clause punctuation or the next verb.
pub fn extract_verb_noun_pairs(tagged: &TaggedText) -> Vec<(String, String)> {
    let tokens = &tagged.tokens;
    let mut pairs = Vec::new();
    for (i, verb) in tokens.iter().enumerate() {
        if !verb.pos.is_finite_or_base_verb() {
            continue;
        }
        let mut j = i + 1;
        while j < tokens.len() {
            let t = &tokens[j];
            if matches!(t.pos, PosTag::Period | PosTag::Colon | PosTag::Comma) || t.pos.is_finite_or_base_verb() {
                break;
            }
            if is_word_noun(t) {
                let mut head = j;
                while head + 1 < tokens.len() && is_word_noun(&tokens[head + 1]) {
                    head += 1;
                }
                pairs.push((lemma(verb), lemma(&tokens[head])));
                break;
            }
            j += 1;
        }
    }
    pairs
}

fn is_word_noun(t: &Token) -> bool {
    t.pos.is_noun() && t.surface.chars().all(char::is_alphabetic)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn code_shaped_text() {
        assert!(looks_like_code("System.out.println(x);"));
        assert!(looks_like_code("foo(bar)"));
        assert!(looks_like_code("x = compute(y)"));
        assert!(looks_like_code("if (a) {"));
        assert!(!looks_like_code("Copy the array."));
        assert!(!looks_like_code("e.g. the first element (see below)"));
        assert!(!looks_like_code("TODO Auto-generated catch block"));
        assert!(!looks_like_code(""));
    }

    fn toks(s: &str) -> Vec<String> {
        tokenize(s)
    }

    #[test]
    fn tokenize_examples() {
        assert_eq!(toks("clear the ring buffer."), ["clear", "the", "ring", "buffer", "."]);
        assert!(toks("").is_empty());
        assert_eq!(toks("call foo.bar() twice"), ["call", "foo.bar()", "twice"]);
        assert_eq!(toks("(see above), ok?"), ["(", "see", "above", ")", ",", "ok", "?"]);
        assert_eq!(toks("System.out.println(x);"), ["System.out.println(x)", ";"]);
        assert_eq!(toks("wait..."), ["wait", ".", ".", "."]);
    }

    #[test]
    fn has_symbol_examples() {
        assert!(has_symbol("wantsPackagePrefix"));
        assert!(!has_symbol("clear the ring buffer."));
        assert!(!has_symbol(""));
        assert!(!has_symbol("TODO Auto-generated catch block"));
        assert!(has_symbol("see MAX_SIZE"));
        assert!(has_symbol("x = 1"));
        assert!(has_symbol("calls foo.bar"));
    }

    #[test]
    fn tagging_examples() {
        let t = pos_tag(&toks("clear the buffer"));
        let tags: Vec<_> = t.tokens.iter().map(|t| t.pos.as_str()).collect();
        assert_eq!(tags, ["VB", "DT", "NN"]);
        let t = pos_tag(&toks("error occurred"));
        assert_eq!(t.tokens[1].pos, PosTag::Vbd);
        assert_eq!(pos_tag(&toks("TODO")).tokens[0].pos, PosTag::Nn);
        assert_eq!(t.tokens[1].index, 1);
        assert_eq!(t.tokens[0].lower, "error");
    }

    #[test]
    fn verb_noun_pairs() {
        assert_eq!(
            extract_verb_noun_pairs(&analyze("create some test data")),
            [("create".to_string(), "data".to_string())]
        );
        assert_eq!(
            extract_verb_noun_pairs(&analyze("do nothing")),
            [("do".to_string(), "nothing".to_string())]
        );
        assert!(extract_verb_noun_pairs(&analyze("the quick result")).is_empty());
        assert_eq!(
            extract_verb_noun_pairs(&analyze("Clears the ring buffers.")),
            [("clear".to_string(), "buffer".to_string())]
        );
    }

    #[test]
    fn non_english_detection() {
        assert!(is_non_english("初始化缓冲区"));
        assert!(is_non_english("清除 the 缓冲区"));
        assert!(!is_non_english("café au lait is fine"));
        assert!(!is_non_english("1234 ++"));
    }
}
