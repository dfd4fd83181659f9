use super::pos::{Lexicon, PosTag};

const IRREGULAR: &[(&str, &str)] = &[
    ("am", "be"),
    ("is", "be"),
    ("are", "be"),
    ("was", "be"),
    ("were", "be"),
    ("been", "be"),
    ("being", "be"),
    ("has", "have"),
    ("had", "have"),
    ("having", "have"),
    ("does", "do"),
    ("did", "do"),
    ("done", "do"),
    ("doing", "do"),
    ("made", "make"),
    ("got", "get"),
    ("gotten", "get"),
    ("went", "go"),
    ("gone", "go"),
    ("goes", "go"),
    ("found", "find"),
    ("sent", "send"),
    ("built", "build"),
    ("left", "leave"),
    ("took", "take"),
    ("taken", "take"),
    ("gave", "give"),
    ("given", "give"),
    ("ran", "run"),
    ("kept", "keep"),
    ("held", "hold"),
    ("brought", "bring"),
    ("thought", "think"),
    ("told", "tell"),
    ("said", "say"),
    ("saw", "see"),
    ("seen", "see"),
    ("wrote", "write"),
    ("written", "write"),
    ("began", "begin"),
    ("begun", "begin"),
    ("chose", "choose"),
    ("chosen", "choose"),
    ("knew", "know"),
    ("known", "know"),
    ("threw", "throw"),
    ("thrown", "throw"),
    ("hidden", "hide"),
    ("broke", "break"),
    ("broken", "break"),
    ("children", "child"),
    ("indices", "index"),
    ("vertices", "vertex"),
    ("lost", "lose"),
    ("meant", "mean"),
    ("caught", "catch"),
    ("bought", "buy"),
    ("paid", "pay"),
    ("led", "lead"),
    ("fed", "feed"),
    ("fell", "fall"),
    ("fallen", "fall"),
    ("came", "come"),
    ("became", "become"),
    ("stood", "stand"),
    ("understood", "understand"),
    ("won", "win"),
];

const VOWELS: &[char] = &['a', 'e', 'i', 'o', 'u'];

/// Base form of a word by suffix stripping, with undoubling of a final
/// consonant and restoration of a dropped `e` when the lexicon knows the
/// restored form.
pub fn lemmatize(word: &str, tag: PosTag, lexicon: &Lexicon) -> String {
    let lower = word.to_lowercase();
    if let Some((_, base)) = IRREGULAR.iter().find(|(w, _)| *w == lower) {
        return base.to_string();
    }
    match tag {
        PosTag::Nns | PosTag::Nnps | PosTag::Vbz => strip_s(&lower, lexicon),
        PosTag::Vbd | PosTag::Vbn => strip_ending(&lower, "ed", lexicon),
        PosTag::Vbg => strip_ending(&lower, "ing", lexicon),
        _ => lower,
    }
}

fn strip_s(word: &str, lexicon: &Lexicon) -> String {
    if word.len() <= 3 || word.ends_with("ss") || word.ends_with("us") || word.ends_with("is") {
        return word.to_string();
    }
    let bare = &word[..word.len() - 1];
    if word.ends_with('s') && lexicon.contains(bare) {
        return bare.to_string();
    }
    if let Some(stem) = word.strip_suffix("ies") {
        return format!("{stem}y");
    }
    for suffix in ["ches", "shes", "sses", "xes", "zes"] {
        if word.ends_with(suffix) {
            return word[..word.len() - 2].to_string();
        }
    }
    if let Some(stem) = word.strip_suffix("oes").filter(|s| lexicon.contains(&format!("{s}o"))) {
        return format!("{stem}o");
    }
    word.strip_suffix('s').unwrap_or(word).to_string()
}

fn strip_ending(word: &str, ending: &str, lexicon: &Lexicon) -> String {
    let Some(stem) = word.strip_suffix(ending) else {
        return word.to_string();
    };
    if stem.len() < 2 {
        return word.to_string();
    }
    if ending == "ed" {
        if let Some(s) = stem.strip_suffix('i') {
            return format!("{s}y");
        }
    }
    // used -> use, parsing -> parse, stopped -> stop
    let restored = format!("{stem}e");
    if lexicon.contains(&restored) {
        return restored;
    }
    if lexicon.contains(stem) {
        return stem.to_string();
    }
    let chars: Vec<char> = stem.chars().collect();
    let n = chars.len();
    if n >= 3 && chars[n - 1] == chars[n - 2] && !VOWELS.contains(&chars[n - 1]) {
        let undoubled: String = chars[..n - 1].iter().collect();
        if lexicon.contains(&undoubled) {
            return undoubled;
        }
    }
    stem.to_string()
}
