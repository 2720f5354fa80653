//! Hand-rolled lexical scanner.
//!
//! Identifiers are kept whole (`my_func` is one token, never `my`/`_`/`func`),
//! comments are single tokens, whitespace is dropped, and every token carries
//! the exact byte span it was cut from. `#pragma` lines in C-family sources
//! become single [`TokenKind::PragmaDirective`] tokens.

use crate::snippet::{CodeSnippet, Language};

use super::{
    is_keyword, pragma_line_spans, Token, TokenKind, TokenStream, TokenStreamMode, TokenizeError,
};

// Multi-character operators, longest first so prefix matching is greedy.
const MULTI_OPERATORS: &[&str] = &[
    "<<=", ">>=", "**=", "//=", "...", "<<", ">>", "->", "++", "--", "==", "!=", "<=", ">=",
    "&&", "||", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "**", "//", ":=",
];


/// Tokenize source text without parsing it.
///
/// Errors with [`TokenizeError::EmptySource`] when the source is empty or
/// whitespace-only.
pub fn tokenize_lexical(snippet: &CodeSnippet) -> Result<TokenStream, TokenizeError> {
    let source = snippet.source.as_str();
    if source.trim().is_empty() {
        return Err(TokenizeError::EmptySource);
    }

    let lang = snippet.language;
    // Python has no preprocessor; its `#` lines are comments.
    let pragma_spans = if lang == Language::Python {
        Vec::new()
    } else {
        pragma_line_spans(source)
    };

    let bytes = source.as_bytes();
    let mut tokens = Vec::new();
    let mut pos = 0;
    let mut next_pragma = 0;

    while pos < bytes.len() {
        if next_pragma < pragma_spans.len() && pos == pragma_spans[next_pragma].0 {
            let (start, end) = pragma_spans[next_pragma];
            tokens.push(Token::new(
                &source[start..end],
                TokenKind::PragmaDirective,
                (start, end),
            ));
            pos = end;
            next_pragma += 1;
            continue;
        }

        let ch = source[pos..].chars().next().expect("pos on char boundary");
        if ch.is_whitespace() {
            pos += ch.len_utf8();
            continue;
        }

        if let Some(end) = match_comment(source, pos, lang) {
            tokens.push(Token::new(&source[pos..end], TokenKind::Comment, (pos, end)));
            pos = end;
            continue;
        }

        if let Some(end) = match_string(source, pos, lang) {
            tokens.push(Token::new(&source[pos..end], TokenKind::Literal, (pos, end)));
            pos = end;
            continue;
        }

        if ch.is_ascii_digit() || (ch == '.' && bytes.get(pos + 1).is_some_and(u8::is_ascii_digit))
        {
            let end = match_number(source, pos);
            tokens.push(Token::new(&source[pos..end], TokenKind::Literal, (pos, end)));
            pos = end;
            continue;
        }

        if ch.is_alphabetic() || ch == '_' {
            let end = match_word(source, pos);
            let text = &source[pos..end];
            let kind = if is_keyword(lang, text) {
                TokenKind::Keyword
            } else {
                TokenKind::Identifier
            };
            tokens.push(Token::new(text, kind, (pos, end)));
            pos = end;
            continue;
        }

        if let Some(op) = MULTI_OPERATORS.iter().find(|op| source[pos..].starts_with(**op)) {
            // `//` is a comment opener in C-family sources, so reaching it
            // here means the language is Python (floor division).
            let end = pos + op.len();
            tokens.push(Token::new(*op, TokenKind::Operator, (pos, end)));
            pos = end;
            continue;
        }

        if source[pos..].starts_with("::") {
            tokens.push(Token::new("::", TokenKind::Punctuation, (pos, pos + 2)));
            pos += 2;
            continue;
        }

        let end = pos + ch.len_utf8();
        let kind = if super::lexical_op_chars().contains(ch) {
            TokenKind::Operator
        } else if super::lexical_punct_chars().contains(ch) {
            TokenKind::Punctuation
        } else {
            TokenKind::Other
        };
        tokens.push(Token::new(&source[pos..end], kind, (pos, end)));
        pos = end;
    }

    Ok(TokenStream {
        mode: TokenStreamMode::Lexical,
        tokens,
    })
}

fn match_comment(source: &str, pos: usize, lang: Language) -> Option<usize> {
    let rest = &source[pos..];
    match lang {
        Language::Python => {
            if rest.starts_with('#') {
                Some(pos + rest.find('\n').unwrap_or(rest.len()))
            } else {
                None
            }
        }
        _ => {
            if rest.starts_with("//") {
                Some(pos + rest.find('\n').unwrap_or(rest.len()))
            } else if rest.starts_with("/*") {
                let end = rest[2..].find("*/").map_or(rest.len(), |i| 2 + i + 2);
                Some(pos + end)
            } else {
                None
            }
        }
    }
}

fn match_string(source: &str, pos: usize, lang: Language) -> Option<usize> {
    let rest = &source[pos..];
    if lang == Language::Python {
        for quote in ["\"\"\"", "'''"] {
            if rest.starts_with(quote) {
                let end = rest[3..].find(quote).map_or(rest.len(), |i| 3 + i + 3);
                return Some(pos + end);
            }
        }
    }
    let opener = rest.chars().next()?;
    if opener != '"' && opener != '\'' {
        return None;
    }
    let bytes = rest.as_bytes();
    let mut i = 1;
    while i < bytes.len() {
        match bytes[i] {
            b'\\' => i += 2,
            b if b == opener as u8 => return Some(pos + i + 1),
            b'\n' => return Some(pos + i), // unterminated on this line
            _ => i += 1,
        }
    }
    Some(pos + rest.len())
}

fn match_number(source: &str, pos: usize) -> usize {
    let bytes = source.as_bytes();
    let mut i = pos;
    while i < bytes.len() {
        let b = bytes[i];
        let is_exp_sign = (b == b'+' || b == b'-') && i > pos && {
            let prev = bytes[i - 1];
            prev.eq_ignore_ascii_case(&b'e') || prev.eq_ignore_ascii_case(&b'p')
        };
        if b.is_ascii_alphanumeric() || b == b'.' || b == b'_' || is_exp_sign {
            i += 1;
        } else {
            break;
        }
    }
    i
}

fn match_word(source: &str, pos: usize) -> usize {
    source[pos..]
        .char_indices()
        .find(|(_, c)| !c.is_alphanumeric() && *c != '_')
        .map_or(source.len(), |(i, _)| pos + i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::snippet::CodeSnippet;
    use TokenKind::*;

    fn lex(src: &str, lang: Language) -> Vec<(String, TokenKind, (usize, usize))> {
        tokenize_lexical(&CodeSnippet::new(src, lang))
            .unwrap()
            .tokens
            .into_iter()
            .map(|t| (t.text, t.kind, t.byte_span))
            .collect()
    }

    fn expected(items: &[(&str, TokenKind, (usize, usize))]) -> Vec<(String, TokenKind, (usize, usize))> {
        items
            .iter()
            .map(|(t, k, s)| (t.to_string(), *k, *s))
            .collect()
    }

    #[test]
    fn empty_and_whitespace_sources_are_rejected() {
        for src in ["", "   ", "\n\t\n"] {
            assert!(matches!(
                tokenize_lexical(&CodeSnippet::new(src, Language::C)),
                Err(TokenizeError::EmptySource)
            ));
        }
    }

    #[test]
    fn single_identifier() {
        assert_eq!(
            lex("x", Language::C),
            expected(&[("x", Identifier, (0, 1))])
        );
    }

    // Twenty micro-snippets lexed by hand, checked character by character.
    #[test]
    fn hand_lexed_micro_corpus() {
        let cases: Vec<(&str, Language, Vec<(&str, TokenKind, (usize, usize))>)> = vec![
            ("a+b", Language::C, vec![
                ("a", Identifier, (0, 1)),
                ("+", Operator, (1, 2)),
                ("b", Identifier, (2, 3)),
            ]),
            ("int x = 42;", Language::C, vec![
                ("int", Keyword, (0, 3)),
                ("x", Identifier, (4, 5)),
                ("=", Operator, (6, 7)),
                ("42", Literal, (8, 10)),
                (";", Punctuation, (10, 11)),
            ]),
            ("x->y", Language::C, vec![
                ("x", Identifier, (0, 1)),
                ("->", Operator, (1, 3)),
                ("y", Identifier, (3, 4)),
            ]),
            ("i++;", Language::C, vec![
                ("i", Identifier, (0, 1)),
                ("++", Operator, (1, 3)),
                (";", Punctuation, (3, 4)),
            ]),
            ("a<=b", Language::C, vec![
                ("a", Identifier, (0, 1)),
                ("<=", Operator, (1, 3)),
                ("b", Identifier, (3, 4)),
            ]),
            ("// note\nx", Language::C, vec![
                ("// note", Comment, (0, 7)),
                ("x", Identifier, (8, 9)),
            ]),
            ("/* c */ y", Language::C, vec![
                ("/* c */", Comment, (0, 7)),
                ("y", Identifier, (8, 9)),
            ]),
            ("\"hi there\"", Language::C, vec![
                ("\"hi there\"", Literal, (0, 10)),
            ]),
            ("my_func(a, 1.5)", Language::C, vec![
                ("my_func", Identifier, (0, 7)),
                ("(", Punctuation, (7, 8)),
                ("a", Identifier, (8, 9)),
                (",", Punctuation, (9, 10)),
                ("1.5", Literal, (11, 14)),
                (")", Punctuation, (14, 15)),
            ]),
            ("#pragma omp parallel for", Language::C, vec![
                ("#pragma omp parallel for", PragmaDirective, (0, 24)),
            ]),
            ("  #pragma omp simd\nx;", Language::C, vec![
                ("#pragma omp simd", PragmaDirective, (2, 18)),
                ("x", Identifier, (19, 20)),
                (";", Punctuation, (20, 21)),
            ]),
            ("if (a && b) return 0;", Language::C, vec![
                ("if", Keyword, (0, 2)),
                ("(", Punctuation, (3, 4)),
                ("a", Identifier, (4, 5)),
                ("&&", Operator, (6, 8)),
                ("b", Identifier, (9, 10)),
                (")", Punctuation, (10, 11)),
                ("return", Keyword, (12, 18)),
                ("0", Literal, (19, 20)),
                (";", Punctuation, (20, 21)),
            ]),
            ("arr[i] = 'c';", Language::C, vec![
                ("arr", Identifier, (0, 3)),
                ("[", Punctuation, (3, 4)),
                ("i", Identifier, (4, 5)),
                ("]", Punctuation, (5, 6)),
                ("=", Operator, (7, 8)),
                ("'c'", Literal, (9, 12)),
                (";", Punctuation, (12, 13)),
            ]),
            ("a>>2", Language::C, vec![
                ("a", Identifier, (0, 1)),
                (">>", Operator, (1, 3)),
                ("2", Literal, (3, 4)),
            ]),
            ("std::vector<int> v;", Language::Cpp, vec![
                ("std", Identifier, (0, 3)),
                ("::", Punctuation, (3, 5)),
                ("vector", Identifier, (5, 11)),
                ("<", Operator, (11, 12)),
                ("int", Keyword, (12, 15)),
                (">", Operator, (15, 16)),
                ("v", Identifier, (17, 18)),
                (";", Punctuation, (18, 19)),
            ]),
            ("def my_func(): print(\"Hello World\")", Language::Python, vec![
                ("def", Keyword, (0, 3)),
                ("my_func", Identifier, (4, 11)),
                ("(", Punctuation, (11, 12)),
                (")", Punctuation, (12, 13)),
                (":", Punctuation, (13, 14)),
                ("print", Identifier, (15, 20)),
                ("(", Punctuation, (20, 21)),
                ("\"Hello World\"", Literal, (21, 34)),
                (")", Punctuation, (34, 35)),
            ]),
            ("# comment\npass", Language::Python, vec![
                ("# comment", Comment, (0, 9)),
                ("pass", Keyword, (10, 14)),
            ]),
            ("x = a // b", Language::Python, vec![
                ("x", Identifier, (0, 1)),
                ("=", Operator, (2, 3)),
                ("a", Identifier, (4, 5)),
                ("//", Operator, (6, 8)),
                ("b", Identifier, (9, 10)),
            ]),
            ("n_items = 3 ** 2", Language::Python, vec![
                ("n_items", Identifier, (0, 7)),
                ("=", Operator, (8, 9)),
                ("3", Literal, (10, 11)),
                ("**", Operator, (12, 14)),
                ("2", Literal, (15, 16)),
            ]),
            ("'''doc''' + x", Language::Python, vec![
                ("'''doc'''", Literal, (0, 9)),
                ("+", Operator, (10, 11)),
                ("x", Identifier, (12, 13)),
            ]),
        ];

        for (src, lang, want) in cases {
            assert_eq!(lex(src, lang), expected(&want), "source: {src:?}");
        }
    }

    #[test]
    fn identifiers_are_never_split_on_underscores_or_case() {
        let stream = tokenize_lexical(&CodeSnippet::new(
            "def my_func(): print(\"Hello World\")",
            Language::Python,
        ))
        .unwrap();
        let texts = stream.texts();
        assert!(texts.contains(&"my_func"));
        for bad in ["my", "_", "func"] {
            assert!(!texts.contains(&bad), "unexpected split token {bad:?}");
        }
        let camel = tokenize_lexical(&CodeSnippet::new("myFuncName", Language::C)).unwrap();
        assert_eq!(camel.texts(), vec!["myFuncName"]);
    }

    #[test]
    fn whitespace_is_never_emitted() {
        let stream =
            tokenize_lexical(&CodeSnippet::new("a  +\n\tb", Language::C)).unwrap();
        for tok in &stream.tokens {
            assert!(!tok.text.chars().all(char::is_whitespace));
        }
    }

    #[test]
    fn spans_slice_the_source_exactly() {
        let src = "for (i = 0; i < n; i++) { sum += a[i]; } // done";
        let snippet = CodeSnippet::new(src, Language::C);
        let stream = tokenize_lexical(&snippet).unwrap();
        for tok in &stream.tokens {
            assert_eq!(&src[tok.byte_span.0..tok.byte_span.1], tok.text);
        }
    }

    #[test]
    fn spans_are_ordered_and_non_overlapping() {
        let src = "x = 1 if y else 2  # pick";
        let stream =
            tokenize_lexical(&CodeSnippet::new(src, Language::Python)).unwrap();
        for pair in stream.tokens.windows(2) {
            assert!(pair[0].byte_span.1 <= pair[1].byte_span.0);
        }
    }

    #[test]
    fn round_trip_reconstructs_source_bytes() {
        let sources = [
            ("int main() { return 0; } /* end */", Language::C),
            ("#pragma omp parallel\nfor (;;) {}\n", Language::C),
            ("def f(a_b):\n    # comment\n    return a_b * 2\n", Language::Python),
            ("s = \"quote \\\" inside\"", Language::Python),
        ];
        for (src, lang) in sources {
            let stream = tokenize_lexical(&CodeSnippet::new(src, lang)).unwrap();
            assert_eq!(stream.reconstruct(src), src, "source: {src:?}");
        }
    }

    #[test]
    fn unterminated_block_comment_extends_to_eof() {
        let stream = tokenize_lexical(&CodeSnippet::new("x /* open", Language::C)).unwrap();
        assert_eq!(stream.tokens[1].kind, Comment);
        assert_eq!(stream.tokens[1].text, "/* open");
    }
}
