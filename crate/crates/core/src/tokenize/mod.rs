//! Code-aware tokenization.
//!
//! Three representations of source code, all span-preserving:
//!
//! - [`tokenize_lexical`] — a hand-rolled scanner that never splits
//!   identifiers on underscores or case boundaries and keeps comments whole.
//! - [`tokenize_ast`] — leaf tokens of a syntax tree in source order, with
//!   `#pragma` lines collapsed into single [`TokenKind::PragmaDirective`]
//!   tokens.
//! - [`build_program_graph`] — a simplified program graph with statement
//!   chains, syntax containment edges, and intra-function def-use edges.

mod ast;
mod graph;
mod lexical;

pub use ast::{parse_tree, tokenize_ast};
pub use graph::{build_program_graph, Edge, EdgeKind, Node, NodeKind, ProgramGraph};
pub use lexical::tokenize_lexical;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::snippet::Language;

#[derive(Debug, Error)]
pub enum TokenizeError {
    #[error("source is empty or whitespace-only")]
    EmptySource,
    #[error("syntax error at byte {0}")]
    ParseError(usize),
    #[error("cannot parse code with language tag `unknown`")]
    UnsupportedLanguage,
    #[error("id {0} is not in the vocabulary")]
    InvalidId(u32),
}

/// Classification attached to each token.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TokenKind {
    Identifier,
    Keyword,
    Literal,
    Operator,
    Punctuation,
    Comment,
    PragmaDirective,
    Other,
}

/// A single token with its exact byte range in the original source.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    #[serde(rename = "t")]
    pub text: String,
    #[serde(rename = "k")]
    pub kind: TokenKind,
    #[serde(rename = "s")]
    pub byte_span: (usize, usize),
}

impl Token {
    pub fn new(text: impl Into<String>, kind: TokenKind, span: (usize, usize)) -> Self {
        Self {
            text: text.into(),
            kind,
            byte_span: span,
        }
    }
}

/// How a [`TokenStream`] was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TokenStreamMode {
    Lexical,
    AstTraversal,
}

/// Ordered tokens with kind annotations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenStream {
    pub mode: TokenStreamMode,
    pub tokens: Vec<Token>,
}

impl TokenStream {
    pub fn texts(&self) -> Vec<&str> {
        self.tokens.iter().map(|t| t.text.as_str()).collect()
    }

    /// Rebuild the source from token spans plus the gaps between them.
    /// Only meaningful for lexical streams, where spans are non-overlapping.
    pub fn reconstruct(&self, source: &str) -> String {
        let mut out = String::new();
        let mut cursor = 0;
        for tok in &self.tokens {
            out.push_str(&source[cursor..tok.byte_span.0]);
            out.push_str(&tok.text);
            cursor = tok.byte_span.1;
        }
        out.push_str(&source[cursor..]);
        out
    }
}

pub const CLS_ID: u32 = 0;
pub const SEP_ID: u32 = 1;
pub const UNK_ID: u32 = 2;
pub const PAD_ID: u32 = 3;

pub const CLS_TOKEN: &str = "[CLS]";
pub const SEP_TOKEN: &str = "[SEP]";
pub const UNK_TOKEN: &str = "[UNK]";
pub const PAD_TOKEN: &str = "[PAD]";

/// Injective token -> id mapping with dense ids and fixed special tokens.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    token_to_id: HashMap<String, u32>,
    id_to_token: Vec<String>,
}

impl Default for Vocabulary {
    fn default() -> Self {
        Self::new()
    }
}

impl Vocabulary {
    pub fn new() -> Self {
        let mut vocab = Self {
            token_to_id: HashMap::new(),
            id_to_token: Vec::new(),
        };
        for special in [CLS_TOKEN, SEP_TOKEN, UNK_TOKEN, PAD_TOKEN] {
            let id = vocab.id_to_token.len() as u32;
            vocab.token_to_id.insert(special.to_string(), id);
            vocab.id_to_token.push(special.to_string());
        }
        vocab
    }

    /// Add tokens verbatim. Tokens already present are skipped; new tokens
    /// receive the next dense ids in list order. Returns how many were added.
    pub fn add_tokens<S: AsRef<str>>(&mut self, new_tokens: &[S]) -> usize {
        let mut added = 0;
        for tok in new_tokens {
            let tok = tok.as_ref();
            if self.token_to_id.contains_key(tok) {
                continue;
            }
            let id = self.id_to_token.len() as u32;
            self.token_to_id.insert(tok.to_string(), id);
            self.id_to_token.push(tok.to_string());
            added += 1;
        }
        added
    }

    pub fn id(&self, token: &str) -> Option<u32> {
        self.token_to_id.get(token).copied()
    }

    pub fn token(&self, id: u32) -> Option<&str> {
        self.id_to_token.get(id as usize).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.id_to_token.len()
    }

    pub fn is_empty(&self) -> bool {
        self.id_to_token.is_empty()
    }

    /// Map a token stream to ids. Unknown tokens map to [`UNK_ID`]; when
    /// `add_special` is set the sequence is wrapped in `[CLS] ... [SEP]`.
    pub fn encode(&self, stream: &TokenStream, add_special: bool) -> Vec<u32> {
        let mut ids = Vec::with_capacity(stream.tokens.len() + 2);
        if add_special {
            ids.push(CLS_ID);
        }
        for tok in &stream.tokens {
            ids.push(self.id(&tok.text).unwrap_or(UNK_ID));
        }
        if add_special {
            ids.push(SEP_ID);
        }
        ids
    }

    /// Map ids back to token texts. Ids outside the vocabulary are an error.
    pub fn decode(&self, ids: &[u32]) -> Result<Vec<String>, TokenizeError> {
        ids.iter()
            .map(|&id| {
                self.token(id)
                    .map(str::to_string)
                    .ok_or(TokenizeError::InvalidId(id))
            })
            .collect()
    }
}

/// Keywords per language, used both for lexical token classification and for
/// keyword-weighted n-gram matching in code metrics.
pub fn keywords(language: Language) -> &'static [&'static str] {
    const C_KEYWORDS: &[&str] = &[
        "auto", "break", "case", "char", "const", "continue", "default", "do", "double", "else",
        "enum", "extern", "float", "for", "goto", "if", "inline", "int", "long", "register",
        "restrict", "return", "short", "signed", "sizeof", "static", "struct", "switch",
        "typedef", "union", "unsigned", "void", "volatile", "while",
    ];
    const CPP_KEYWORDS: &[&str] = &[
        "auto", "bool", "break", "case", "catch", "char", "class", "const", "constexpr",
        "continue", "default", "delete", "do", "double", "else", "enum", "explicit", "extern",
        "false", "float", "for", "friend", "goto", "if", "inline", "int", "long", "mutable",
        "namespace", "new", "noexcept", "nullptr", "operator", "private", "protected", "public",
        "register", "return", "short", "signed", "sizeof", "static", "struct", "switch",
        "template", "this", "throw", "true", "try", "typedef", "typename", "union", "unsigned",
        "using", "virtual", "void", "volatile", "while",
    ];
    const PYTHON_KEYWORDS: &[&str] = &[
        "False", "None", "True", "and", "as", "assert", "async", "await", "break", "class",
        "continue", "def", "del", "elif", "else", "except", "finally", "for", "from", "global",
        "if", "import", "in", "is", "lambda", "nonlocal", "not", "or", "pass", "raise", "return",
        "try", "while", "with", "yield",
    ];
    match language {
        Language::C => C_KEYWORDS,
        Language::Cpp => CPP_KEYWORDS,
        Language::Python => PYTHON_KEYWORDS,
        Language::Unknown => C_KEYWORDS,
    }
}

pub(crate) fn is_keyword(language: Language, text: &str) -> bool {
    keywords(language).contains(&text)
}

pub(crate) fn lexical_op_chars() -> &'static str {
    "+-*/%=<>!&|^~?.@"
}

pub(crate) fn lexical_punct_chars() -> &'static str {
    "()[]{},;:#"
}

/// Byte spans of `#pragma` lines, matched by `^\s*#\s*pragma\b.*$` per line.
/// Each span starts at the `#` and ends before the line terminator.
pub(crate) fn pragma_line_spans(source: &str) -> Vec<(usize, usize)> {
    use regex::Regex;
    use std::sync::LazyLock;
    static PRAGMA: LazyLock<Regex> =
        LazyLock::new(|| Regex::new(r"^\s*#\s*pragma\b.*$").expect("valid pragma pattern"));

    let mut spans = Vec::new();
    let mut line_start = 0;
    for line in source.split_inclusive('\n') {
        let trimmed_end = line.trim_end_matches(['\n', '\r']);
        if PRAGMA.is_match(trimmed_end) {
            let hash = trimmed_end.find('#').expect("pragma line contains #");
            spans.push((line_start + hash, line_start + trimmed_end.len()));
        }
        line_start += line.len();
    }
    spans
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stream_of(texts: &[&str]) -> TokenStream {
        TokenStream {
            mode: TokenStreamMode::Lexical,
            tokens: texts
                .iter()
                .map(|t| Token::new(*t, TokenKind::Identifier, (0, 1)))
                .collect(),
        }
    }

    #[test]
    fn new_vocabulary_has_fixed_special_ids() {
        let vocab = Vocabulary::new();
        assert_eq!(vocab.id(CLS_TOKEN), Some(0));
        assert_eq!(vocab.id(SEP_TOKEN), Some(1));
        assert_eq!(vocab.id(UNK_TOKEN), Some(2));
        assert_eq!(vocab.id(PAD_TOKEN), Some(3));
        assert_eq!(vocab.len(), 4);
    }

    #[test]
    fn add_tokens_is_idempotent() {
        let mut vocab = Vocabulary::new();
        assert_eq!(vocab.add_tokens(&["omp"]), 1);
        assert_eq!(vocab.add_tokens(&["omp"]), 0);
        assert_eq!(vocab.len(), 5);
    }

    #[test]
    fn add_tokens_empty_list_is_a_no_op() {
        let mut vocab = Vocabulary::new();
        let before = vocab.clone();
        assert_eq!(vocab.add_tokens::<&str>(&[]), 0);
        assert_eq!(vocab, before);
    }

    #[test]
    fn add_tokens_assigns_dense_ids_in_list_order() {
        let mut vocab = Vocabulary::new();
        vocab.add_tokens(&["base"]);
        let n = vocab.len() as u32;
        assert_eq!(vocab.add_tokens(&["x", "y", "z"]), 3);
        assert_eq!(vocab.id("x"), Some(n));
        assert_eq!(vocab.id("y"), Some(n + 1));
        assert_eq!(vocab.id("z"), Some(n + 2));
    }

    #[test]
    fn add_tokens_skips_duplicates_within_the_list() {
        let mut vocab = Vocabulary::new();
        assert_eq!(vocab.add_tokens(&["a", "a", "b"]), 2);
    }

    #[test]
    fn encode_empty_stream_with_specials() {
        let vocab = Vocabulary::new();
        let stream = stream_of(&[]);
        assert_eq!(vocab.encode(&stream, true), vec![CLS_ID, SEP_ID]);
        assert_eq!(vocab.encode(&stream, false), Vec::<u32>::new());
    }

    #[test]
    fn encode_in_vocab_stream_has_no_unk() {
        let mut vocab = Vocabulary::new();
        vocab.add_tokens(&["for", "i", "in"]);
        let ids = vocab.encode(&stream_of(&["for", "i", "in"]), false);
        assert!(!ids.contains(&UNK_ID));
    }

    #[test]
    fn encode_maps_out_of_vocab_to_unk_positionally() {
        let mut vocab = Vocabulary::new();
        vocab.add_tokens(&["a", "c"]);
        let ids = vocab.encode(&stream_of(&["a", "b", "c"]), false);
        assert_eq!(ids[0], vocab.id("a").unwrap());
        assert_eq!(ids[1], UNK_ID);
        assert_eq!(ids[2], vocab.id("c").unwrap());
    }

    #[test]
    fn encode_decode_round_trip_without_unk() {
        let mut vocab = Vocabulary::new();
        vocab.add_tokens(&["x", "=", "1"]);
        let stream = stream_of(&["x", "=", "1"]);
        let decoded = vocab.decode(&vocab.encode(&stream, false)).unwrap();
        assert_eq!(decoded, vec!["x", "=", "1"]);
    }

    #[test]
    fn decode_rejects_out_of_range_ids() {
        let vocab = Vocabulary::new();
        assert!(matches!(
            vocab.decode(&[99]),
            Err(TokenizeError::InvalidId(99))
        ));
    }

    #[test]
    fn vocabulary_ids_stay_injective_and_dense() {
        let mut vocab = Vocabulary::new();
        vocab.add_tokens(&["p", "q", "p", "r", "q"]);
        let mut seen = std::collections::HashSet::new();
        for id in 0..vocab.len() as u32 {
            let tok = vocab.token(id).expect("dense ids");
            assert_eq!(vocab.id(tok), Some(id));
            assert!(seen.insert(tok.to_string()));
        }
    }

    #[test]
    fn pragma_spans_cover_directive_without_newline() {
        let src = "int a;\n  #pragma omp simd\nint b;\n";
        let spans = pragma_line_spans(src);
        assert_eq!(spans.len(), 1);
        assert_eq!(&src[spans[0].0..spans[0].1], "#pragma omp simd");
    }

    #[test]
    fn pragma_spans_tolerate_space_between_hash_and_keyword() {
        let src = "# pragma omp parallel\n";
        let spans = pragma_line_spans(src);
        assert_eq!(spans.len(), 1);
        assert_eq!(&src[spans[0].0..spans[0].1], "# pragma omp parallel");
    }

    #[test]
    fn non_pragma_preproc_lines_are_not_matched() {
        assert!(pragma_line_spans("#include <stdio.h>\n#define X 1\n").is_empty());
        assert!(pragma_line_spans("int pragma_count;\n").is_empty());
    }
}
