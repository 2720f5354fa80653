//! Syntax-tree tokenization via tree-sitter grammars.

use tree_sitter::{Node, Parser, Tree};

use crate::snippet::{CodeSnippet, Language};

use super::{
    is_keyword, pragma_line_spans, Token, TokenKind, TokenStream, TokenStreamMode, TokenizeError,
};

pub(crate) fn grammar(language: Language) -> Result<tree_sitter::Language, TokenizeError> {
    match language {
        Language::C => Ok(tree_sitter_c::LANGUAGE.into()),
        Language::Cpp => Ok(tree_sitter_cpp::LANGUAGE.into()),
        Language::Python => Ok(tree_sitter_python::LANGUAGE.into()),
        Language::Unknown => Err(TokenizeError::UnsupportedLanguage),
    }
}

/// Parse a snippet into a syntax tree, rejecting sources the grammar cannot
/// accept.
pub fn parse_tree(snippet: &CodeSnippet) -> Result<Tree, TokenizeError> {
    let mut parser = Parser::new();
    parser
        .set_language(&grammar(snippet.language)?)
        .expect("bundled grammar matches linked tree-sitter version");
    let tree = parser
        .parse(&snippet.source, None)
        .ok_or(TokenizeError::ParseError(0))?;
    if let Some(pos) = first_error_byte(tree.root_node()) {
        return Err(TokenizeError::ParseError(pos));
    }
    Ok(tree)
}

fn first_error_byte(node: Node) -> Option<usize> {
    if !node.has_error() {
        return None;
    }
    if node.is_error() || node.is_missing() {
        return Some(node.start_byte());
    }
    let mut cursor = node.walk();
    for child in node.children(&mut cursor) {
        if let Some(pos) = first_error_byte(child) {
            return Some(pos);
        }
    }
    Some(node.start_byte())
}

/// Tokenize a snippet as the leaf nodes of its parse tree, in source order.
///
/// `#pragma` lines collapse into single [`TokenKind::PragmaDirective`] tokens
/// because C grammars scatter them across preprocessor nodes.
pub fn tokenize_ast(snippet: &CodeSnippet) -> Result<TokenStream, TokenizeError> {
    if snippet.source.trim().is_empty() {
        return Err(TokenizeError::EmptySource);
    }
    let tree = parse_tree(snippet)?;
    let source = snippet.source.as_str();
    let pragma_spans = if snippet.language == Language::Python {
        Vec::new()
    } else {
        pragma_line_spans(source)
    };

    let mut tokens = Vec::new();
    let mut emitted_pragmas = vec![false; pragma_spans.len()];
    collect_leaves(
        tree.root_node(),
        source,
        snippet.language,
        &pragma_spans,
        &mut emitted_pragmas,
        &mut tokens,
    );
    Ok(TokenStream {
        mode: TokenStreamMode::AstTraversal,
        tokens,
    })
}

fn collect_leaves(
    node: Node,
    source: &str,
    language: Language,
    pragma_spans: &[(usize, usize)],
    emitted: &mut [bool],
    out: &mut Vec<Token>,
) {
    if node.child_count() == 0 {
        if node.byte_range().is_empty() {
            return;
        }
        let start = node.start_byte();
        if let Some(idx) = pragma_spans
            .iter()
            .position(|&(s, e)| start >= s && start < e)
        {
            if !emitted[idx] {
                let (s, e) = pragma_spans[idx];
                out.push(Token::new(&source[s..e], TokenKind::PragmaDirective, (s, e)));
                emitted[idx] = true;
            }
            return;
        }
        let text = &source[node.byte_range()];
        let kind = classify_leaf(node.kind(), text, language);
        out.push(Token::new(text, kind, (start, node.end_byte())));
        return;
    }
    let mut cursor = node.walk();
    for child in node.children(&mut cursor) {
        collect_leaves(child, source, language, pragma_spans, emitted, out);
    }
}

fn classify_leaf(node_kind: &str, text: &str, language: Language) -> TokenKind {
    const LITERAL_KINDS: &[&str] = &[
        "number_literal",
        "string_literal",
        "char_literal",
        "string_content",
        "string_start",
        "string_end",
        "escape_sequence",
        "integer",
        "float",
        "true",
        "false",
        "none",
        "null",
        "character",
    ];
    if node_kind == "comment" {
        return TokenKind::Comment;
    }
    if LITERAL_KINDS.contains(&node_kind) || node_kind.ends_with("_literal") {
        return TokenKind::Literal;
    }
    if node_kind.contains("identifier") {
        return TokenKind::Identifier;
    }
    if is_keyword(language, text) || node_kind == "primitive_type" {
        return TokenKind::Keyword;
    }
    let mut chars = text.chars();
    if chars
        .next()
        .is_some_and(|c| c.is_alphabetic() || c == '_')
        && text.chars().all(|c| c.is_alphanumeric() || c == '_')
    {
        // Named grammar atoms that are not keywords of the surface language
        // (e.g. `defined`) read best as identifiers.
        return TokenKind::Identifier;
    }
    if !text.is_empty() && text.chars().all(|c| super::lexical_op_chars().contains(c)) {
        return TokenKind::Operator;
    }
    if !text.is_empty() && text.chars().all(|c| super::lexical_punct_chars().contains(c)) {
        return TokenKind::Punctuation;
    }
    TokenKind::Other
}
