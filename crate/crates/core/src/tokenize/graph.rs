//! Simplified program graphs: statement chains, syntax containment, and
//! branch-free def-use edges.
//!
//! The graph is deliberately small: one node per statement, identifier
//! occurrence, and call site. Def-use resolution is intra-function and
//! ignores control flow — each read links to the nearest preceding write of
//! the same name in source order.

use serde::{Deserialize, Serialize};
use tree_sitter::Node as TsNode;

use crate::snippet::{CodeSnippet, Language};

use super::{ast::parse_tree, TokenizeError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NodeKind {
    Statement,
    Identifier,
    CallSite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EdgeKind {
    AstChild,
    NextStatement,
    DefUse,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub id: usize,
    pub label: String,
    pub kind: NodeKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub kind: EdgeKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ProgramGraph {
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
}

impl ProgramGraph {
    pub fn edges_of_kind(&self, kind: EdgeKind) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.kind == kind)
    }

    pub fn nodes_of_kind(&self, kind: NodeKind) -> impl Iterator<Item = &Node> {
        self.nodes.iter().filter(move |n| n.kind == kind)
    }

    /// Def-use edges as `(definition name, use name)` pairs in edge order.
    pub fn def_use_name_pairs(&self) -> Vec<(String, String)> {
        self.edges_of_kind(EdgeKind::DefUse)
            .map(|e| {
                (
                    self.nodes[e.src].label.clone(),
                    self.nodes[e.dst].label.clone(),
                )
            })
            .collect()
    }
}

/// Build the program graph for a parseable snippet.
pub fn build_program_graph(snippet: &CodeSnippet) -> Result<ProgramGraph, TokenizeError> {
    if snippet.source.trim().is_empty() {
        return Err(TokenizeError::EmptySource);
    }
    let tree = parse_tree(snippet)?;
    let mut builder = GraphBuilder {
        source: &snippet.source,
        language: snippet.language,
        graph: ProgramGraph::default(),
        occurrences: Vec::new(),
    };
    builder.walk(tree.root_node(), None, ROOT_SCOPE);
    builder.resolve_def_use();
    Ok(builder.graph)
}

const ROOT_SCOPE: usize = usize::MAX;

struct IdentOccurrence {
    name: String,
    byte: usize,
    is_write: bool,
    node_id: usize,
    scope: usize,
}

struct GraphBuilder<'a> {
    source: &'a str,
    language: Language,
    graph: ProgramGraph,
    occurrences: Vec<IdentOccurrence>,
}

impl GraphBuilder<'_> {
    fn add_node(&mut self, label: &str, kind: NodeKind, parent: Option<usize>) -> usize {
        let id = self.graph.nodes.len();
        self.graph.nodes.push(Node {
            id,
            label: label.to_string(),
            kind,
        });
        if let Some(parent) = parent {
            self.graph.edges.push(Edge {
                src: parent,
                dst: id,
                kind: EdgeKind::AstChild,
            });
        }
        id
    }

    fn walk(&mut self, ts_node: TsNode, parent: Option<usize>, scope: usize) {
        let kind = ts_node.kind();

        if is_statement_kind(kind) {
            let id = self.add_node(kind, NodeKind::Statement, parent);
            let inner_scope = if kind == "function_definition" { id } else { scope };
            self.walk_children(ts_node, Some(id), inner_scope);
            return;
        }

        if kind == "call_expression" || kind == "call" {
            let callee = ts_node
                .child_by_field_name("function")
                .map(|f| &self.source[f.byte_range()])
                .unwrap_or(kind);
            let id = self.add_node(callee, NodeKind::CallSite, parent);
            // The callee is the call-site label; only arguments contribute
            // identifier occurrences.
            if let Some(args) = ts_node.child_by_field_name("arguments") {
                self.walk_children(args, Some(id), scope);
            }
            return;
        }

        if ts_node.child_count() == 0 && kind.contains("identifier") {
            let name = &self.source[ts_node.byte_range()];
            let id = self.add_node(name, NodeKind::Identifier, parent);
            self.occurrences.push(IdentOccurrence {
                name: name.to_string(),
                byte: ts_node.start_byte(),
                is_write: is_write_position(ts_node),
                node_id: id,
                scope,
            });
            return;
        }

        self.walk_children(ts_node, parent, scope);
    }

    fn walk_children(&mut self, ts_node: TsNode, parent: Option<usize>, scope: usize) {
        let mut cursor = ts_node.walk();
        let mut prev_statement: Option<usize> = None;
        for child in ts_node.children(&mut cursor) {
            let before = self.graph.nodes.len();
            self.walk(child, parent, scope);
            if is_statement_kind(child.kind()) && self.graph.nodes.len() > before {
                let stmt_id = before;
                if let Some(prev) = prev_statement {
                    self.graph.edges.push(Edge {
                        src: prev,
                        dst: stmt_id,
                        kind: EdgeKind::NextStatement,
                    });
                }
                prev_statement = Some(stmt_id);
            }
        }
        let _ = self.language;
    }

    fn resolve_def_use(&mut self) {
        use std::collections::HashMap;
        let mut last_write: HashMap<(usize, &str), usize> = HashMap::new();
        let mut occurrences: Vec<&IdentOccurrence> = self.occurrences.iter().collect();
        occurrences.sort_by_key(|o| o.byte);
        let mut edges = Vec::new();
        for occ in occurrences {
            if occ.is_write {
                last_write.insert((occ.scope, occ.name.as_str()), occ.node_id);
            } else if let Some(&def) = last_write.get(&(occ.scope, occ.name.as_str())) {
                edges.push(Edge {
                    src: def,
                    dst: occ.node_id,
                    kind: EdgeKind::DefUse,
                });
            }
        }
        self.graph.edges.extend(edges);
    }
}

fn is_statement_kind(kind: &str) -> bool {
    if kind == "compound_statement" || kind == "block" {
        return false;
    }
    kind.ends_with("_statement")
        || kind.ends_with("_definition")
        || kind == "declaration"
        || kind == "type_definition"
        || kind.starts_with("preproc_")
}

/// Whether an identifier leaf occupies a position that writes the variable:
/// a declarator, an assignment target, a loop variable, or a parameter.
fn is_write_position(ts_node: TsNode) -> bool {
    let Some(parent) = ts_node.parent() else {
        return false;
    };
    let in_field = |field: &str| {
        parent
            .child_by_field_name(field)
            .is_some_and(|n| n.id() == ts_node.id())
    };
    match parent.kind() {
        "init_declarator" | "declaration" | "parameter_declaration" => in_field("declarator"),
        "assignment_expression" | "assignment" | "augmented_assignment" => in_field("left"),
        "update_expression" => true,
        "for_statement" | "for_in_clause" => in_field("left"),
        "parameters" | "lambda_parameters" => true,
        "default_parameter" | "typed_parameter" | "typed_default_parameter" => {
            in_field("name") || parent.child(0).is_some_and(|c| c.id() == ts_node.id())
        }
        // `int *p` / `int a[3]` nest the identifier inside wrapper declarators.
        "pointer_declarator" | "array_declarator" | "parenthesized_declarator" => {
            is_write_position(parent)
        }
        _ => false,
    }
}
