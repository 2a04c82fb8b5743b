//! Raw text to lowercase tokens.
//!
//! Three punctuation runs (`---`, `--`, `''`) are blanked first, then the
//! text is scanned left to right for, in order of preference: numbers
//! with internal commas or periods, `http://` URLs, word runs (Unicode
//! word characters plus `@ # ' & [ ]`), and runs of emoticon characters.
//! The emoticon class is kept exactly as the reference parse used it.

use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::scoring::WordVector;

const BLANKED: [&str; 3] = ["---", "--", "''"];

const TOKEN_PATTERN: &str = concat!(
    r"(?:[0-9][0-9,\.]*[0-9])",
    r"|(?:http://[\w\./\-\?\&\#]+)",
    r"|(?:[\w@#'&\]\[]+)",
    r"|(?:[b\}/3D;p\)\|’\-@x\#\^_0\\P\(o:O\{X\$\[=<>\]\*B]+)",
);

fn token_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(TOKEN_PATTERN).expect("token pattern compiles"))
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TokenStream {
    pub tokens: Vec<String>,
    /// Characters of raw input consumed.
    pub source_len: usize,
}

impl TokenStream {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

/// Token matches in their original case. Joining these with single
/// spaces and tokenizing again reproduces the same matches, which is not
/// true of the lowercased tokens (the emoticon class is case-sensitive).
pub fn raw_tokens(raw: &str) -> Vec<String> {
    let mut text = raw.to_string();
    for p in BLANKED {
        if text.contains(p) {
            text = text.replace(p, " ");
        }
    }
    token_regex()
        .find_iter(&text)
        .map(|m| m.as_str().to_string())
        .collect()
}

pub fn tokenize(raw: &str) -> TokenStream {
    TokenStream {
        tokens: raw_tokens(raw).iter().map(|t| t.to_lowercase()).collect(),
        source_len: raw.chars().count(),
    }
}

pub fn word_frequencies(ts: &TokenStream) -> WordVector {
    WordVector::from_tokens(ts.tokens.iter().map(String::as_str))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn toks(s: &str) -> Vec<String> {
        tokenize(s).tokens
    }

    #[test]
    fn dash_run_splits_words() {
        assert_eq!(toks("Laughter--joy!"), ["laughter", "joy"]);
        assert_eq!(toks("a---b"), ["a", "b"]);
        assert_eq!(toks("''quoted''"), ["quoted"]);
    }

    #[test]
    fn empty_input() {
        let ts = tokenize("");
        assert!(ts.is_empty());
        assert_eq!(ts.source_len, 0);
    }

    #[test]
    fn numbers_keep_separators() {
        assert_eq!(toks("12,000 men"), ["12,000", "men"]);
        assert_eq!(toks("pi is 3.14."), ["pi", "is", "3.14"]);
        // A single digit is not a number match; it falls to the word run.
        assert_eq!(toks("7 dwarfs"), ["7", "dwarfs"]);
    }

    #[test]
    fn urls_hashtags_and_contractions() {
        assert_eq!(
            toks("see http://example.com/a?b=1 now"),
            ["see", "http://example.com/a?b", "=", "1", "now"]
        );
        assert_eq!(toks("#Happy @Bob don't"), ["#happy", "@bob", "don't"]);
    }

    #[test]
    fn emoticons_and_smart_quotes() {
        assert_eq!(toks("great :) day"), ["great", ":)", "day"]);
        assert_eq!(toks("so sad :-("), ["so", "sad", ":-("]);
        // The curly apostrophe is an emoticon character, not a word character.
        assert_eq!(toks("don’t"), ["don", "’", "t"]);
        // Unmatched punctuation is dropped.
        assert_eq!(toks("wait... what?!"), ["wait", "what"]);
    }

    #[test]
    fn emoticon_class_is_case_sensitive() {
        assert_eq!(toks("^D"), ["^d"]);
        assert_eq!(toks("^d"), ["^", "d"]);
        assert_eq!(raw_tokens("^D"), ["^D"]);
    }

    #[test]
    fn unicode_letters_are_word_characters() {
        assert_eq!(toks("Café Über"), ["café", "über"]);
    }

    #[test]
    fn frequencies_count_tokens() {
        let ts = TokenStream {
            tokens: vec!["a".into(), "b".into(), "a".into()],
            source_len: 5,
        };
        let wv = word_frequencies(&ts);
        assert_eq!(wv.count("a"), 2);
        assert_eq!(wv.count("b"), 1);
        assert_eq!(wv.total(), 3);
        assert_eq!(word_frequencies(&TokenStream::default()).total(), 0);
    }

    proptest! {
        #[test]
        fn tokens_are_clean(s in "\\PC{0,60}") {
            let ts = tokenize(&s);
            for t in &ts.tokens {
                prop_assert!(!t.is_empty());
                prop_assert!(!t.chars().any(char::is_whitespace));
                prop_assert_eq!(t.to_lowercase(), t.clone());
            }
            prop_assert_eq!(word_frequencies(&ts).total() as usize, ts.len());
        }

        #[test]
        fn concatenation_merges_vectors(a in "[a-zA-Z0-9 ,.:;()'#@-]{0,40}", b in "[a-zA-Z0-9 ,.:;()'#@-]{0,40}") {
            let joined = word_frequencies(&tokenize(&format!("{a} {b}")));
            let mut merged = word_frequencies(&tokenize(&a));
            merged.merge(&word_frequencies(&tokenize(&b)));
            prop_assert_eq!(joined, merged);
        }

        #[test]
        fn rejoined_raw_tokens_retokenize_identically(s in "[a-zA-Z0-9 ,.:;()'#@&\\[\\]’{}$=<>*/|^_-]{0,60}") {
            let raw = raw_tokens(&s);
            prop_assert_eq!(raw_tokens(&raw.join(" ")), raw.clone());
            prop_assert_eq!(tokenize(&raw.join(" ")).tokens, tokenize(&s).tokens);
        }

        #[test]
        fn rejoin_is_stable_on_arbitrary_text(s in "\\PC{0,60}") {
            let raw = raw_tokens(&s);
            prop_assert_eq!(raw_tokens(&raw.join(" ")), raw);
        }
    }
}
