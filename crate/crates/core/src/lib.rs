//! Language-model tooling for HPC code tasks.
//!
//! The crate is organized around five subsystems:
//!
//! - [`tokenize`] — code-aware tokenization: lexical token streams, syntax-tree
//!   token streams, and simplified program graphs with def-use edges.
//! - [`data`] — JSONL dataset loading, validation, and deterministic
//!   transforms (split / shuffle / sort / pair construction).
//! - [`model`] — uniform model access: OpenAI-style remote chat endpoints and
//!   a family of fully deterministic offline mocks.
//! - [`pipeline`] — the three inference pipelines (code similarity,
//!   parallelism detection, OpenMP Q&A) and their prompt templates.
//! - [`rag`] — document chunking, an exact cosine vector store, and
//!   budget-aware context injection for prompts.
//! - [`eval`] — BLEU / ROUGE-L / CodeBLEU / classification metrics, an
//!   evaluation runner, and leaderboard rendering.
//!
//! Everything that can be deterministic is: all randomness flows through
//! explicit 64-bit seeds, mock backends are pure functions of their inputs,
//! and serialized outputs are byte-stable across runs.

pub mod data;
pub mod eval;
pub mod model;
pub mod pipeline;
pub mod rag;
pub mod rng;
pub mod snippet;
pub mod tokenize;

pub use snippet::{CodeSnippet, Language};
